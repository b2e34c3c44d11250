//! Tetrahedral simplicial complexes on axis-aligned boxes.

use crate::error::{Error, Result};
use crate::geometry::{diameter, face_areas, signed_volume, Point3};

/// Local vertex pairs of the six tetrahedron edges.
pub const TET_EDGES: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
/// Local vertex triples of the four faces; face `i` is opposite vertex `i`.
pub const TET_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

/// Axis-aligned box `[min.x, max.x] × [min.y, max.y] × [min.z, max.z]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point3,
    pub max: Point3,
}

/// Relative tolerance for deciding whether a coordinate lies on a box plane.
pub const BOUNDARY_REL_TOL: f64 = 1e-12;

impl Aabb {
    pub fn new(min: Point3, max: Point3) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidArgument("box bounds must be finite".into()));
        }
        for axis in 0..3 {
            if max[axis] - min[axis] <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "box has non-positive extent along axis {axis}"
                )));
            }
        }
        Ok(Aabb { min, max })
    }

    /// Parses `x0,x1,y0,y1,z0,z1`.
    pub fn from_bounds(b: [f64; 6]) -> Result<Self> {
        Aabb::new(
            Point3::new(b[0], b[2], b[4]),
            Point3::new(b[1], b[3], b[5]),
        )
    }

    /// The cube `(0, π)³` used by all the Maxwell experiments.
    pub fn pi_cube() -> Self {
        let pi = std::f64::consts::PI;
        Aabb {
            min: Point3::ZERO,
            max: Point3::new(pi, pi, pi),
        }
    }

    pub fn unit_cube() -> Self {
        Aabb {
            min: Point3::ZERO,
            max: Point3::new(1.0, 1.0, 1.0),
        }
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.max[axis] - self.min[axis]
    }

    pub fn volume(&self) -> f64 {
        self.extent(0) * self.extent(1) * self.extent(2)
    }

    pub fn bounds(&self) -> [f64; 6] {
        [
            self.min.x, self.max.x, self.min.y, self.max.y, self.min.z, self.max.z,
        ]
    }

    /// Bounding box of a point cloud.
    pub fn enclosing(points: &[Point3]) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty point set".into()))?;
        let (mut lo, mut hi) = (first.to_array(), first.to_array());
        for p in points {
            for a in 0..3 {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        Aabb::new(Point3::from_array(lo), Point3::from_array(hi))
    }

    /// Unit outward normals of the box planes containing `p`, or an error when
    /// `p` lies outside the box.
    pub fn boundary_normals(&self, p: Point3) -> Result<Vec<Point3>> {
        let mut normals = Vec::with_capacity(3);
        for axis in 0..3 {
            let tol = BOUNDARY_REL_TOL * self.extent(axis);
            if p[axis] < self.min[axis] - tol || p[axis] > self.max[axis] + tol {
                return Err(Error::GeometryInconsistency(format!(
                    "point {p:?} lies outside the domain box"
                )));
            }
            if (p[axis] - self.min[axis]).abs() <= tol {
                normals.push(-Point3::unit(axis));
            } else if (p[axis] - self.max[axis]).abs() <= tol {
                normals.push(Point3::unit(axis));
            }
        }
        Ok(normals)
    }

    /// Classifies a point by the box feature it lies on.
    pub fn classify_point(&self, p: Point3) -> Result<PointClass> {
        let normals = self.boundary_normals(p)?;
        let kind = match normals.len() {
            0 => BoundaryClass::Interior,
            1 => BoundaryClass::BoundaryFaceInterior,
            2 => BoundaryClass::BoundaryEdge,
            _ => BoundaryClass::Corner,
        };
        Ok(PointClass { kind, normals })
    }
}

/// A tetrahedron as four vertex ids with positive orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tetra {
    pub v: [usize; 4],
}

impl Tetra {
    pub fn new(v: [usize; 4]) -> Self {
        Tetra { v }
    }

    pub fn points(&self, vertices: &[Point3]) -> [Point3; 4] {
        self.v.map(|i| vertices[i])
    }

    pub fn face_key(&self, local_face: usize) -> [usize; 3] {
        let f = TET_FACES[local_face];
        sorted3([self.v[f[0]], self.v[f[1]], self.v[f[2]]])
    }

    pub fn edge_key(&self, local_edge: usize) -> [usize; 2] {
        let e = TET_EDGES[local_edge];
        sorted2([self.v[e[0]], self.v[e[1]]])
    }
}

pub(crate) fn sorted2(mut k: [usize; 2]) -> [usize; 2] {
    k.sort_unstable();
    k
}

pub(crate) fn sorted3(mut k: [usize; 3]) -> [usize; 3] {
    k.sort_unstable();
    k
}

/// Derived face/edge structure of a tetrahedral mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Connectivity {
    /// Sorted vertex triples, lexicographically ordered.
    pub faces: Vec<[usize; 3]>,
    /// Incident tets per face; the second entry is `None` on the boundary.
    pub face_tets: Vec<[Option<usize>; 2]>,
    /// Sorted vertex pairs, lexicographically ordered.
    pub edges: Vec<[usize; 2]>,
    /// Global face id of each local face (opposite local vertex `i`).
    pub tet_faces: Vec<[usize; 4]>,
    /// Global edge id of each local edge in [`TET_EDGES`] order.
    pub tet_edges: Vec<[usize; 6]>,
    pub boundary_face: Vec<bool>,
    pub boundary_edge: Vec<bool>,
    pub boundary_vertex: Vec<bool>,
}

impl Connectivity {
    pub fn face_id(&self, key: [usize; 3]) -> Option<usize> {
        self.faces.binary_search(&sorted3(key)).ok()
    }

    pub fn edge_id(&self, key: [usize; 2]) -> Option<usize> {
        self.edges.binary_search(&sorted2(key)).ok()
    }

    pub fn num_boundary_faces(&self) -> usize {
        self.boundary_face.iter().filter(|&&b| b).count()
    }

    pub fn num_interior_faces(&self) -> usize {
        self.faces.len() - self.num_boundary_faces()
    }
}

/// Builds unique faces and edges, their incidence, and boundary flags.
pub fn derive_connectivity(num_vertices: usize, tets: &[Tetra]) -> Result<Connectivity> {
    for t in tets {
        if let Some(&bad) = t.v.iter().find(|&&v| v >= num_vertices) {
            return Err(Error::InvalidArgument(format!(
                "tet {:?} references vertex {bad} but the mesh has {num_vertices}",
                t.v
            )));
        }
    }

    let mut face_slots: Vec<([usize; 3], usize, usize)> = Vec::with_capacity(4 * tets.len());
    for (ti, t) in tets.iter().enumerate() {
        for lf in 0..4 {
            face_slots.push((t.face_key(lf), ti, lf));
        }
    }
    face_slots.sort_unstable();

    let mut faces = Vec::new();
    let mut face_tets = Vec::new();
    let mut tet_faces = vec![[usize::MAX; 4]; tets.len()];
    let mut i = 0;
    while i < face_slots.len() {
        let key = face_slots[i].0;
        let mut j = i;
        while j < face_slots.len() && face_slots[j].0 == key {
            j += 1;
        }
        if j - i > 2 {
            return Err(Error::NonManifoldMesh {
                face: key,
                count: j - i,
            });
        }
        let fid = faces.len();
        faces.push(key);
        let mut inc = [None, None];
        for (slot, s) in face_slots[i..j].iter().enumerate() {
            inc[slot] = Some(s.1);
            tet_faces[s.1][s.2] = fid;
        }
        face_tets.push(inc);
        i = j;
    }

    let mut edge_slots: Vec<([usize; 2], usize, usize)> = Vec::with_capacity(6 * tets.len());
    for (ti, t) in tets.iter().enumerate() {
        for le in 0..6 {
            edge_slots.push((t.edge_key(le), ti, le));
        }
    }
    edge_slots.sort_unstable();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut tet_edges = vec![[usize::MAX; 6]; tets.len()];
    for (key, ti, le) in edge_slots {
        if edges.last() != Some(&key) {
            edges.push(key);
        }
        tet_edges[ti][le] = edges.len() - 1;
    }

    let boundary_face: Vec<bool> = face_tets.iter().map(|inc| inc[1].is_none()).collect();
    let mut boundary_vertex = vec![false; num_vertices];
    let mut boundary_edge = vec![false; edges.len()];
    for (fid, f) in faces.iter().enumerate() {
        if !boundary_face[fid] {
            continue;
        }
        for &v in f {
            boundary_vertex[v] = true;
        }
        for pair in [[f[0], f[1]], [f[0], f[2]], [f[1], f[2]]] {
            let e = edges.binary_search(&pair).expect("face edge present");
            boundary_edge[e] = true;
        }
    }

    Ok(Connectivity {
        faces,
        face_tets,
        edges,
        tet_faces,
        tet_edges,
        boundary_face,
        boundary_edge,
        boundary_vertex,
    })
}

/// Immutable tetrahedral mesh of an axis-aligned box.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub(crate) vertices: Vec<Point3>,
    pub(crate) tets: Vec<Tetra>,
    pub(crate) conn: Connectivity,
    pub(crate) domain: Aabb,
}

impl Mesh {
    /// Validates coordinates, normalizes orientation, and derives connectivity.
    pub fn new(vertices: Vec<Point3>, tets: Vec<Tetra>, domain: Aabb) -> Result<Self> {
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite vertex {p:?}")));
        }
        let mut tets = tets;
        for t in tets.iter_mut() {
            let mut s = t.v;
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "tet {:?} repeats a vertex",
                    t.v
                )));
            }
            if let Some(&bad) = t.v.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidArgument(format!(
                    "tet {:?} references missing vertex {bad}",
                    t.v
                )));
            }
            let p = t.points(&vertices);
            let vol = signed_volume(p[0], p[1], p[2], p[3]);
            if vol == 0.0 {
                return Err(Error::DegenerateElement(format!(
                    "tet {:?} has zero volume",
                    t.v
                )));
            }
            if vol < 0.0 {
                t.v.swap(2, 3);
            }
        }
        let conn = derive_connectivity(vertices.len(), &tets)?;
        Ok(Mesh {
            vertices,
            tets,
            conn,
            domain,
        })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn tets(&self) -> &[Tetra] {
        &self.tets
    }

    pub fn connectivity(&self) -> &Connectivity {
        &self.conn
    }

    pub fn domain(&self) -> &Aabb {
        &self.domain
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn num_faces(&self) -> usize {
        self.conn.faces.len()
    }

    pub fn num_edges(&self) -> usize {
        self.conn.edges.len()
    }

    pub fn tet_points(&self, t: usize) -> [Point3; 4] {
        self.tets[t].points(&self.vertices)
    }

    pub fn tet_volume(&self, t: usize) -> f64 {
        let p = self.tet_points(t);
        signed_volume(p[0], p[1], p[2], p[3])
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.tets.len()).map(|t| self.tet_volume(t)).sum()
    }

    /// V − E + F − T.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
            - self.num_tets() as i64
    }

    /// Applies `f` to every vertex; the domain box is recomputed from the
    /// image of the old box corners.
    pub fn map_vertices(&self, f: impl Fn(Point3) -> Point3) -> Result<Mesh> {
        let vertices: Vec<Point3> = self.vertices.iter().map(|&p| f(p)).collect();
        let corners: Vec<Point3> = box_corners(&self.domain).into_iter().map(f).collect();
        Mesh::new(vertices, self.tets.clone(), Aabb::enclosing(&corners)?)
    }
}

fn box_corners(b: &Aabb) -> Vec<Point3> {
    let mut c = Vec::with_capacity(8);
    for k in 0..2 {
        for j in 0..2 {
            for i in 0..2 {
                c.push(Point3::new(
                    if i == 0 { b.min.x } else { b.max.x },
                    if j == 0 { b.min.y } else { b.max.y },
                    if k == 0 { b.min.z } else { b.max.z },
                ));
            }
        }
    }
    c
}

/// Structured mesh of `n³` subcubes, each cut into six tets around its main
/// diagonal. All subcubes share the same orientation so neighbouring square
/// faces are cut along the same diagonal.
pub fn build_box_mesh(domain: Aabb, n: usize) -> Result<Mesh> {
    if n == 0 {
        return Err(Error::InvalidArgument("subdivisions must be at least 1".into()));
    }
    let domain = Aabb::new(domain.min, domain.max)?;
    let np = n + 1;
    let coord = |axis: usize, i: usize| {
        if i == n {
            domain.max[axis]
        } else {
            domain.min[axis] + domain.extent(axis) * i as f64 / n as f64
        }
    };
    let mut vertices = Vec::with_capacity(np * np * np);
    for k in 0..np {
        for j in 0..np {
            for i in 0..np {
                vertices.push(Point3::new(coord(0, i), coord(1, j), coord(2, k)));
            }
        }
    }
    let id = |i: usize, j: usize, k: usize| i + np * (j + np * k);
    // Corner offsets of the six tets [000, a, b, 111].
    const SPLIT: [[[usize; 3]; 2]; 6] = [
        [[1, 0, 0], [1, 1, 0]],
        [[1, 1, 0], [0, 1, 0]],
        [[0, 1, 0], [0, 1, 1]],
        [[0, 1, 1], [0, 0, 1]],
        [[0, 0, 1], [1, 0, 1]],
        [[1, 0, 1], [1, 0, 0]],
    ];
    let mut tets = Vec::with_capacity(6 * n * n * n);
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let o = id(i, j, k);
                let d = id(i + 1, j + 1, k + 1);
                for [a, b] in SPLIT {
                    tets.push(Tetra::new([
                        o,
                        id(i + a[0], j + a[1], k + a[2]),
                        id(i + b[0], j + b[1], k + b[2]),
                        d,
                    ]));
                }
            }
        }
    }
    Mesh::new(vertices, tets, domain)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryClass {
    Corner,
    BoundaryEdge,
    BoundaryFaceInterior,
    Interior,
}

/// Feature class of a point together with the outward normals of the box
/// planes it touches (empty for interior points).
#[derive(Debug, Clone, PartialEq)]
pub struct PointClass {
    pub kind: BoundaryClass,
    pub normals: Vec<Point3>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryVertexClasses {
    pub per_vertex: Vec<PointClass>,
}

impl BoundaryVertexClasses {
    pub fn count(&self, kind: BoundaryClass) -> usize {
        self.per_vertex.iter().filter(|c| c.kind == kind).count()
    }

    /// `(corner, edge, face-interior, interior)` counts.
    pub fn counts(&self) -> [usize; 4] {
        [
            self.count(BoundaryClass::Corner),
            self.count(BoundaryClass::BoundaryEdge),
            self.count(BoundaryClass::BoundaryFaceInterior),
            self.count(BoundaryClass::Interior),
        ]
    }
}

/// Classifies every vertex by box feature and checks the result against the
/// topological boundary flags.
pub fn classify_boundary_vertices(mesh: &Mesh) -> Result<BoundaryVertexClasses> {
    let mut per_vertex = Vec::with_capacity(mesh.num_vertices());
    for (v, &p) in mesh.vertices.iter().enumerate() {
        let class = mesh.domain.classify_point(p)?;
        let on_boundary = class.kind != BoundaryClass::Interior;
        if on_boundary != mesh.conn.boundary_vertex[v] {
            return Err(Error::GeometryInconsistency(format!(
                "vertex {v} at {p:?}: topological boundary flag {} but geometric class {:?}",
                mesh.conn.boundary_vertex[v], class.kind
            )));
        }
        per_vertex.push(class);
    }
    Ok(BoundaryVertexClasses { per_vertex })
}

/// Diameter, inscribed-sphere diameter, and their ratio for one tet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetQuality {
    pub h: f64,
    pub rho: f64,
    pub ratio: f64,
}

pub fn tet_quality(p: &[Point3; 4]) -> Result<TetQuality> {
    let vol = signed_volume(p[0], p[1], p[2], p[3]);
    if vol <= 0.0 {
        return Err(Error::DegenerateElement(format!(
            "tet with non-positive volume {vol:e}"
        )));
    }
    let area: f64 = face_areas(p).iter().sum();
    let h = diameter(p);
    let rho = 6.0 * vol / area;
    Ok(TetQuality {
        h,
        rho,
        ratio: h / rho,
    })
}

#[derive(Debug, Clone)]
pub struct MeshQuality {
    pub per_tet: Vec<TetQuality>,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub max_h: f64,
}

pub fn mesh_quality(mesh: &Mesh) -> Result<MeshQuality> {
    let per_tet = (0..mesh.num_tets())
        .map(|t| tet_quality(&mesh.tet_points(t)))
        .collect::<Result<Vec<_>>>()?;
    let max_ratio = per_tet.iter().map(|q| q.ratio).fold(0.0, f64::max);
    let min_ratio = per_tet.iter().map(|q| q.ratio).fold(f64::INFINITY, f64::min);
    let max_h = per_tet.iter().map(|q| q.h).fold(0.0, f64::max);
    Ok(MeshQuality {
        per_tet,
        max_ratio,
        min_ratio,
        max_h,
    })
}
