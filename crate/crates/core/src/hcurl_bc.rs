//! Essential tangential condition `u × n = 0` for nodal vector fields.
//!
//! Each scalar node gets an orthonormal frame split into free and
//! constrained directions. The constrained directions span the tangent
//! planes of every boundary plane through the node, so a node on one face
//! keeps only its normal component and a node on an edge or corner of the
//! box (two non-parallel planes) is fully constrained. The reduced space is
//! the range of the column-orthonormal operator `R` built from the free
//! directions, and the reduced pencil is `(RᵀKR, RᵀMR)`.

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::lagrange::{DofMap, NodeEntity, SymmetricSparseMatrix};
use crate::mesh::{BoundaryClass, BoundaryVertexClasses, Mesh, PointClass};

const FRAME_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BcMode {
    #[default]
    Tangential,
    /// No constraints; every node keeps all three components.
    None,
}

impl std::str::FromStr for BcMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tangential" => Ok(BcMode::Tangential),
            "none" => Ok(BcMode::None),
            _ => Err(Error::InvalidArgument(format!(
                "unknown boundary condition `{s}` (expected tangential|none)"
            ))),
        }
    }
}

impl std::fmt::Display for BcMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BcMode::Tangential => "tangential",
            BcMode::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeConstraint {
    pub node: usize,
    pub free: Vec<Point3>,
    pub constrained: Vec<Point3>,
}

impl NodeConstraint {
    pub fn free_dim(&self) -> usize {
        self.free.len()
    }

    /// Frame for a node touching boundary planes with the given unit normals.
    pub fn from_normals(node: usize, normals: &[Point3]) -> Self {
        let mut tangents = Vec::new();
        for &n in normals {
            let (t1, t2) = tangent_pair(n);
            tangents.push(t1);
            tangents.push(t2);
        }
        let constrained = gram_schmidt(&tangents, &[]);
        let mut candidates: Vec<Point3> = normals.to_vec();
        candidates.extend((0..3).map(Point3::unit));
        let free = gram_schmidt(&candidates, &constrained);
        NodeConstraint {
            node,
            free,
            constrained,
        }
    }
}

/// Two unit vectors completing `n` to an orthonormal frame.
fn tangent_pair(n: Point3) -> (Point3, Point3) {
    let n = n.normalized();
    let axis = (0..3)
        .min_by(|&a, &b| n[a].abs().total_cmp(&n[b].abs()))
        .unwrap();
    let t1 = n.cross(Point3::unit(axis)).normalized();
    let t2 = n.cross(t1);
    (t1, t2)
}

/// Orthonormalizes `candidates` against `against` and each other, dropping
/// directions that are numerically dependent.
fn gram_schmidt(candidates: &[Point3], against: &[Point3]) -> Vec<Point3> {
    let mut basis: Vec<Point3> = against.to_vec();
    let mut out = Vec::new();
    for &c in candidates {
        if basis.len() == 3 {
            break;
        }
        let mut v = c;
        for _ in 0..2 {
            for &b in &basis {
                v = v - b * v.dot(b);
            }
        }
        let nv = v.norm();
        if nv > FRAME_RANK_TOL * c.norm().max(1.0) {
            let u = v / nv;
            basis.push(u);
            out.push(u);
        }
    }
    out
}

/// Per-node frames plus the sparse reduction operator `R`.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    pub nodes: Vec<NodeConstraint>,
    /// First reduced column of each node.
    pub offsets: Vec<usize>,
    pub reduced_dim: usize,
}

impl ConstraintSet {
    pub fn from_nodes(nodes: Vec<NodeConstraint>) -> Self {
        let mut offsets = Vec::with_capacity(nodes.len());
        let mut acc = 0;
        for n in &nodes {
            offsets.push(acc);
            acc += n.free_dim();
        }
        ConstraintSet {
            nodes,
            offsets,
            reduced_dim: acc,
        }
    }

    /// All three components free at every node.
    pub fn unconstrained(num_scalar: usize) -> Self {
        Self::from_nodes(
            (0..num_scalar)
                .map(|i| NodeConstraint::from_normals(i, &[]))
                .collect(),
        )
    }

    pub fn full_dim(&self) -> usize {
        3 * self.nodes.len()
    }

    /// Nonzeros `(reduced column, value)` of row `3 · node + component` of `R`.
    pub fn row(&self, full_index: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let node = full_index / 3;
        let comp = full_index % 3;
        let off = self.offsets[node];
        self.nodes[node]
            .free
            .iter()
            .enumerate()
            .map(move |(j, d)| (off + j, d[comp]))
            .filter(|&(_, v)| v != 0.0)
    }

    /// `R y` for a reduced vector `y`.
    pub fn expand(&self, reduced: &[f64]) -> Vec<f64> {
        assert_eq!(reduced.len(), self.reduced_dim);
        let mut full = vec![0.0; self.full_dim()];
        for (i, n) in self.nodes.iter().enumerate() {
            for (j, d) in n.free.iter().enumerate() {
                let y = reduced[self.offsets[i] + j];
                for c in 0..3 {
                    full[3 * i + c] += d[c] * y;
                }
            }
        }
        full
    }

    /// `Rᵀ v` for a full nodal vector `v`.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        assert_eq!(full.len(), self.full_dim());
        let mut out = vec![0.0; self.reduced_dim];
        for (i, n) in self.nodes.iter().enumerate() {
            for (j, d) in n.free.iter().enumerate() {
                out[self.offsets[i] + j] =
                    (0..3).map(|c| d[c] * full[3 * i + c]).sum::<f64>();
            }
        }
        out
    }
}

/// Classifies every scalar node by position and builds its frame.
///
/// Vertex nodes reuse the vertex classification; higher-order nodes are
/// classified geometrically and cross-checked against the topological
/// boundary flag of the entity that owns them.
pub fn build_tangential_constraints(
    mesh: &Mesh,
    dofmap: &DofMap,
    classes: &BoundaryVertexClasses,
) -> Result<ConstraintSet> {
    let conn = mesh.connectivity();
    let domain = mesh.domain();
    let mut nodes = Vec::with_capacity(dofmap.num_scalar());
    for (i, (&p, &ent)) in dofmap
        .node_positions
        .iter()
        .zip(&dofmap.node_entities)
        .enumerate()
    {
        let (class, topo_boundary): (PointClass, bool) = match ent {
            NodeEntity::Vertex(v) => {
                let c = classes.per_vertex.get(v).cloned().ok_or_else(|| {
                    Error::DimensionMismatch {
                        expected: mesh.num_vertices(),
                        got: classes.per_vertex.len(),
                    }
                })?;
                (c, conn.boundary_vertex[v])
            }
            NodeEntity::Edge(e) => (domain.classify_point(p)?, conn.boundary_edge[e]),
            NodeEntity::Face(f) => (domain.classify_point(p)?, conn.boundary_face[f]),
            NodeEntity::Cell(_) => (domain.classify_point(p)?, false),
        };
        if (class.kind != BoundaryClass::Interior) != topo_boundary {
            return Err(Error::GeometryInconsistency(format!(
                "node {i} at {p:?} is classified {:?} but its entity boundary flag is {topo_boundary}",
                class.kind
            )));
        }
        nodes.push(NodeConstraint::from_normals(i, &class.normals));
    }
    Ok(ConstraintSet::from_nodes(nodes))
}

/// Constraint set for the requested mode.
pub fn constraints_for(
    mesh: &Mesh,
    dofmap: &DofMap,
    classes: &BoundaryVertexClasses,
    mode: BcMode,
) -> Result<ConstraintSet> {
    match mode {
        BcMode::Tangential => build_tangential_constraints(mesh, dofmap, classes),
        BcMode::None => Ok(ConstraintSet::unconstrained(dofmap.num_scalar())),
    }
}

/// `RᵀAR` for a symmetric `A`.
pub fn reduce(a: &SymmetricSparseMatrix, cs: &ConstraintSet) -> Result<SymmetricSparseMatrix> {
    if a.dim() != cs.full_dim() {
        return Err(Error::DimensionMismatch {
            expected: cs.full_dim(),
            got: a.dim(),
        });
    }
    let mut triplets = Vec::new();
    let mut push = |p: usize, q: usize, w: f64| {
        if p <= q {
            triplets.push((p, q, w));
        }
    };
    for (r, c, v) in a.iter_upper() {
        for (p, x) in cs.row(r) {
            for (q, y) in cs.row(c) {
                let w = x * v * y;
                if r == c {
                    push(p, q, w);
                } else {
                    // A_rc and A_cr both contribute.
                    push(p, q, w);
                    push(q, p, w);
                }
            }
        }
    }
    Ok(SymmetricSparseMatrix::from_upper_triplets(cs.reduced_dim, triplets))
}

/// `(RᵀKR, RᵀMR)`.
pub fn apply_constraints(
    k: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    cs: &ConstraintSet,
) -> Result<(SymmetricSparseMatrix, SymmetricSparseMatrix)> {
    Ok((reduce(k, cs)?, reduce(m, cs)?))
}
