//! Global numbering of scalar Lagrange nodes.
//!
//! Nodes are laid out vertex nodes first, then `k − 1` per edge, then
//! `C(k−1, 2)` per face, then `C(k−1, 3)` per cell. Within an entity the
//! nodes are ordered by their lattice coordinates relative to the entity's
//! vertices sorted by global id, so every incident tet agrees on the numbering.
//! Vector unknowns use `3 · node + component`.

use crate::error::Result;
use crate::geometry::Point3;
use crate::mesh::Mesh;

use super::basis::{check_degree, lattice};

/// Topological entity a scalar node belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeEntity {
    Vertex(usize),
    Edge(usize),
    Face(usize),
    Cell(usize),
}

#[derive(Debug, Clone)]
pub struct DofMap {
    pub degree: usize,
    /// Local basis index → global scalar node, per tet.
    pub cell_nodes: Vec<Vec<usize>>,
    pub node_positions: Vec<Point3>,
    pub node_entities: Vec<NodeEntity>,
}

/// Compositions of `k` into `parts` positive integers, lexicographic.
fn compositions(k: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return if k >= 1 { vec![vec![k]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..k {
        for mut rest in compositions(k - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn binom(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl DofMap {
    pub fn num_scalar(&self) -> usize {
        self.node_positions.len()
    }

    pub fn num_vector(&self) -> usize {
        3 * self.num_scalar()
    }

    /// Expected scalar count `V + (k−1)E + C(k−1,2)F + C(k−1,3)T`.
    pub fn expected_count(mesh: &Mesh, k: usize) -> usize {
        mesh.num_vertices()
            + (k - 1) * mesh.num_edges()
            + binom(k - 1, 2) * mesh.num_faces()
            + binom(k - 1, 3) * mesh.num_tets()
    }

    /// Nodal interpolant of a vector field, in `3 · node + component` layout.
    pub fn interpolate(&self, f: impl Fn(Point3) -> [f64; 3]) -> Vec<f64> {
        self.node_positions.iter().flat_map(|&p| f(p)).collect()
    }
}

pub fn build_dof_map(mesh: &Mesh, k: usize) -> Result<DofMap> {
    check_degree(k)?;
    let conn = mesh.connectivity();
    let verts = mesh.vertices();
    let per_edge = k - 1;
    let per_face = binom(k - 1, 2);
    let per_cell = binom(k - 1, 3);
    let edge_off = mesh.num_vertices();
    let face_off = edge_off + per_edge * mesh.num_edges();
    let cell_off = face_off + per_face * mesh.num_faces();
    let total = cell_off + per_cell * mesh.num_tets();
    let canon: Vec<Vec<Vec<usize>>> = (1..=4).map(|p| compositions(k, p)).collect();

    let lat = lattice(k);
    let mut node_positions = vec![Point3::ZERO; total];
    let mut node_entities = vec![NodeEntity::Vertex(0); total];
    let mut cell_nodes = Vec::with_capacity(mesh.num_tets());

    for (t, tet) in mesh.tets().iter().enumerate() {
        let mut local = Vec::with_capacity(lat.len());
        for alpha in &lat {
            let mut support: Vec<(usize, usize)> = (0..4)
                .filter(|&m| alpha[m] > 0)
                .map(|m| (tet.v[m], alpha[m]))
                .collect();
            support.sort_unstable();
            let gverts: Vec<usize> = support.iter().map(|s| s.0).collect();
            let beta: Vec<usize> = support.iter().map(|s| s.1).collect();
            let pos = canon[beta.len() - 1]
                .iter()
                .position(|c| *c == beta)
                .expect("lattice point is a composition of k");
            let (id, entity) = match gverts.len() {
                1 => (gverts[0], NodeEntity::Vertex(gverts[0])),
                2 => {
                    let e = conn
                        .edge_id([gverts[0], gverts[1]])
                        .expect("edge of tet");
                    (edge_off + e * per_edge + pos, NodeEntity::Edge(e))
                }
                3 => {
                    let missing = (0..4).find(|&m| alpha[m] == 0).unwrap();
                    let f = conn.tet_faces[t][missing];
                    (face_off + f * per_face + pos, NodeEntity::Face(f))
                }
                _ => (cell_off + t * per_cell + pos, NodeEntity::Cell(t)),
            };
            let x = (0..4).fold(Point3::ZERO, |acc, m| {
                acc + verts[tet.v[m]] * (alpha[m] as f64 / k as f64)
            });
            node_positions[id] = x;
            node_entities[id] = entity;
            local.push(id);
        }
        cell_nodes.push(local);
    }
    Ok(DofMap {
        degree: k,
        cell_nodes,
        node_positions,
        node_entities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_box_mesh, Aabb, Tetra};
    use crate::wf_refine::worsey_farin_refine;

    #[test]
    fn composition_counts() {
        for k in 1..=4 {
            assert_eq!(compositions(k, 2).len(), k - 1);
            assert_eq!(compositions(k, 3).len(), binom(k - 1, 2));
            assert_eq!(compositions(k, 4).len(), binom(k - 1, 3));
        }
    }

    #[test]
    fn scalar_counts() {
        let cube = build_box_mesh(Aabb::unit_cube(), 1).unwrap();
        assert_eq!(build_dof_map(&cube, 1).unwrap().num_scalar(), 8);

        let wf = worsey_farin_refine(&cube).unwrap();
        let d = build_dof_map(&wf.fine, 2).unwrap();
        assert_eq!(d.num_scalar(), wf.fine.num_vertices() + wf.fine.num_edges());

        let single = Mesh::new(
            vec![Point3::ZERO, Point3::unit(0), Point3::unit(1), Point3::unit(2)],
            vec![Tetra::new([0, 1, 2, 3])],
            Aabb::unit_cube(),
        )
        .unwrap();
        assert_eq!(build_dof_map(&single, 3).unwrap().num_scalar(), 20);
        assert_eq!(build_dof_map(&single, 4).unwrap().num_scalar(), 35);
    }

    #[test]
    fn shared_nodes_coincide_and_are_distinct() {
        for k in 1..=4 {
            let m = build_box_mesh(Aabb::pi_cube(), 2).unwrap();
            let d = build_dof_map(&m, k).unwrap();
            assert_eq!(d.num_scalar(), DofMap::expected_count(&m, k));
            // Every node position is unique and every node is used.
            let mut seen = vec![false; d.num_scalar()];
            for (t, nodes) in d.cell_nodes.iter().enumerate() {
                let p = m.tet_points(t);
                let b = super::super::basis::lattice(k);
                for (i, &g) in nodes.iter().enumerate() {
                    seen[g] = true;
                    let x = (0..4).fold(Point3::ZERO, |acc, mm| acc + p[mm] * (b[i][mm] as f64 / k as f64));
                    assert!(x.distance(d.node_positions[g]) < 1e-13);
                }
            }
            assert!(seen.iter().all(|&s| s));
            let mut keys: Vec<[i64; 3]> = d
                .node_positions
                .iter()
                .map(|p| p.to_array().map(|c| (c * 1e9).round() as i64))
                .collect();
            keys.sort_unstable();
            keys.dedup();
            assert_eq!(keys.len(), d.num_scalar(), "k = {k}");
        }
    }
}
