//! Worsey-Farin refinement: every macro tet is split into twelve children
//! through its incenter and one split point per face.
//!
//! Face split points are shared between the two tets incident to an interior
//! face (the point where the segment joining their incenters pierces the
//! face), so both sides induce the same Clough-Tocher split of the face and
//! the refined mesh stays conforming. Boundary faces use their barycenter.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::{diameter, face_areas, signed_volume, triangle_barycentric, Point3};
use crate::mesh::{derive_connectivity, tet_quality, Mesh, Tetra};

/// Minimum barycentric coordinate accepted for a face split point.
pub const FACE_POINT_MIN_BARY: f64 = 1e-12;

/// Incenter of a tet: vertex average weighted by the area of the opposite face.
pub fn incenter(p: &[Point3; 4]) -> Result<Point3> {
    let vol = signed_volume(p[0], p[1], p[2], p[3]).abs();
    let h = diameter(p);
    if !(vol >= 1e-14 * h * h * h) || h == 0.0 {
        return Err(Error::DegenerateElement(format!(
            "tet volume {vol:e} too small for diameter {h:e}"
        )));
    }
    let a = face_areas(p);
    let total: f64 = a.iter().sum();
    let mut z = Point3::ZERO;
    for i in 0..4 {
        z += p[i] * a[i];
    }
    Ok(z / total)
}

/// Split point of the face `[a, b, c]`.
///
/// `incenters` holds the incenters of the incident tets: one entry for a
/// boundary face (barycenter returned), two for an interior face (the
/// intersection of the segment between them with the face).
pub fn face_split_point(face: [Point3; 3], incenters: &[Point3]) -> Result<Point3> {
    let [a, b, c] = face;
    match *incenters {
        [_] => Ok((a + b + c) / 3.0),
        [z1, z2] => {
            let n = (b - a).cross(c - a);
            let d = z2 - z1;
            let denom = n.dot(d);
            if denom.abs() <= 1e-14 * n.norm() * d.norm() {
                return Err(Error::InvalidSplit(
                    "incenter segment is parallel to the shared face".into(),
                ));
            }
            let t = n.dot(a - z1) / denom;
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidSplit(format!(
                    "incenter segment does not reach the face plane (t = {t})"
                )));
            }
            let m = z1 + d * t;
            let bary = triangle_barycentric(m, a, b, c);
            if bary.iter().any(|&l| l < FACE_POINT_MIN_BARY) {
                return Err(Error::InvalidSplit(format!(
                    "incenter segment crosses the face plane outside the open face (barycentric {bary:?})"
                )));
            }
            Ok(m)
        }
        _ => Err(Error::InvalidArgument(format!(
            "a face has 1 or 2 incident tets, got {}",
            incenters.len()
        ))),
    }
}

/// Refined mesh plus the provenance linking it back to the macro mesh.
#[derive(Debug, Clone)]
pub struct WorseyFarinMesh {
    pub macro_mesh: Mesh,
    pub fine: Mesh,
    /// Incenter of each macro tet; fine vertex id `V + t`.
    pub incenter_of: Vec<Point3>,
    /// Split point of each macro face; fine vertex id `V + T + f`.
    pub face_point_of: Vec<Point3>,
    /// Fine tet ids of each macro tet, ordered by (local face, sector).
    pub children_of: Vec<[usize; 12]>,
    /// Clough-Tocher sub-triangles (sorted fine vertex keys) of each macro face.
    pub face_children_of: Vec<[[usize; 3]; 3]>,
}

impl WorseyFarinMesh {
    pub fn incenter_vertex(&self, t: usize) -> usize {
        self.macro_mesh.num_vertices() + t
    }

    pub fn face_point_vertex(&self, f: usize) -> usize {
        self.macro_mesh.num_vertices() + self.macro_mesh.num_tets() + f
    }
}

pub fn worsey_farin_refine(mesh: &Mesh) -> Result<WorseyFarinMesh> {
    let conn = mesh.connectivity();
    let nv = mesh.num_vertices();
    let nt = mesh.num_tets();

    let incenter_of = (0..nt)
        .map(|t| incenter(&mesh.tet_points(t)))
        .collect::<Result<Vec<_>>>()?;

    let verts = mesh.vertices();
    let face_point_of = conn
        .faces
        .iter()
        .zip(&conn.face_tets)
        .map(|(key, inc)| {
            let zs: Vec<Point3> = inc.iter().flatten().map(|&t| incenter_of[t]).collect();
            face_split_point(key.map(|v| verts[v]), &zs)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut vertices = Vec::with_capacity(nv + nt + conn.faces.len());
    vertices.extend_from_slice(verts);
    vertices.extend_from_slice(&incenter_of);
    vertices.extend_from_slice(&face_point_of);

    let face_children_of: Vec<[[usize; 3]; 3]> = conn
        .faces
        .iter()
        .enumerate()
        .map(|(f, &[a, b, c])| {
            let m = nv + nt + f;
            [[a, b, m], [b, c, m], [a, c, m]]
        })
        .collect();

    let mut tets = Vec::with_capacity(12 * nt);
    let mut children_of = Vec::with_capacity(nt);
    for t in 0..nt {
        let z = nv + t;
        let mut kids = [0; 12];
        for lf in 0..4 {
            let [a, b, c] = conn.faces[conn.tet_faces[t][lf]];
            let m = nv + nt + conn.tet_faces[t][lf];
            for (s, [x, y]) in [[a, b], [b, c], [c, a]].into_iter().enumerate() {
                kids[3 * lf + s] = tets.len();
                tets.push(Tetra::new([z, x, y, m]));
            }
        }
        children_of.push(kids);
    }

    let fine = Mesh::new(vertices, tets, *mesh.domain())?;
    Ok(WorseyFarinMesh {
        macro_mesh: mesh.clone(),
        fine,
        incenter_of,
        face_point_of,
        children_of,
        face_children_of,
    })
}

/// Measured invariants of a refinement. Never fails; failing checks are
/// reported in the fields.
#[derive(Debug, Clone, PartialEq)]
pub struct WfValidationReport {
    pub conforming: bool,
    pub conformity_detail: String,
    pub child_count_ok: bool,
    pub vertex_count_ok: bool,
    pub boundary_face_count_ok: bool,
    pub positive_volumes: bool,
    /// max over macro tets of |Σ child volumes − parent volume| / parent volume.
    pub max_volume_residual: f64,
    /// Smallest barycentric coordinate of any face split point in its face.
    pub min_face_point_bary: f64,
    /// Smallest barycentric coordinate of any incenter in its tet.
    pub min_incenter_bary: f64,
    pub euler_characteristic: i64,
    pub min_shape_ratio: f64,
    pub max_shape_ratio: f64,
}

impl WfValidationReport {
    pub fn passed(&self) -> bool {
        self.conforming
            && self.child_count_ok
            && self.vertex_count_ok
            && self.boundary_face_count_ok
            && self.positive_volumes
            && self.max_volume_residual <= 1e-12
            && self.min_face_point_bary > 0.0
            && self.min_incenter_bary > 0.0
    }

    /// `key: value` lines.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "passed: {}", self.passed());
        let _ = writeln!(s, "conforming: {}", self.conforming);
        let _ = writeln!(s, "conformity_detail: {}", self.conformity_detail);
        let _ = writeln!(s, "child_count_ok: {}", self.child_count_ok);
        let _ = writeln!(s, "vertex_count_ok: {}", self.vertex_count_ok);
        let _ = writeln!(s, "boundary_face_count_ok: {}", self.boundary_face_count_ok);
        let _ = writeln!(s, "positive_volumes: {}", self.positive_volumes);
        let _ = writeln!(s, "max_volume_residual: {:e}", self.max_volume_residual);
        let _ = writeln!(s, "min_face_point_bary: {:e}", self.min_face_point_bary);
        let _ = writeln!(s, "min_incenter_bary: {:e}", self.min_incenter_bary);
        let _ = writeln!(s, "euler_characteristic: {}", self.euler_characteristic);
        let _ = writeln!(s, "min_shape_ratio: {}", self.min_shape_ratio);
        let _ = writeln!(s, "max_shape_ratio: {}", self.max_shape_ratio);
        s
    }
}

pub fn validate_wf(wf: &WorseyFarinMesh) -> WfValidationReport {
    let coarse = &wf.macro_mesh;
    let fine_tets = wf.fine.tets();
    let fine_verts = wf.fine.vertices();

    // Connectivity is recomputed from the raw tet list so that a corrupted
    // child list is caught even if the cached connectivity is stale.
    let (conforming, conformity_detail, euler, n_boundary) =
        match derive_connectivity(fine_verts.len(), fine_tets) {
            Err(e) => (false, e.to_string(), 0, 0),
            Ok(conn) => {
                let euler = fine_verts.len() as i64 - conn.edges.len() as i64
                    + conn.faces.len() as i64
                    - fine_tets.len() as i64;
                let macro_conn = coarse.connectivity();
                let mut expected: Vec<[usize; 3]> = macro_conn
                    .boundary_face
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .flat_map(|(f, _)| wf.face_children_of.get(f).copied().unwrap_or_default())
                    .collect();
                expected.sort_unstable();
                let stray = conn
                    .faces
                    .iter()
                    .zip(&conn.boundary_face)
                    .filter(|(_, &b)| b)
                    .find(|(key, _)| expected.binary_search(key).is_err());
                let nb = conn.num_boundary_faces();
                match stray {
                    Some((key, _)) => (
                        false,
                        format!("unmatched face {key:?} is not a sub-triangle of a macro boundary face"),
                        euler,
                        nb,
                    ),
                    None if euler != coarse.euler_characteristic() => (
                        false,
                        format!(
                            "euler characteristic {euler} differs from macro mesh {}",
                            coarse.euler_characteristic()
                        ),
                        euler,
                        nb,
                    ),
                    None => (true, "ok".to_string(), euler, nb),
                }
            }
        };

    let child_count_ok = wf.children_of.len() == coarse.num_tets()
        && wf.children_of.iter().all(|kids| {
            let mut k = kids.to_vec();
            k.sort_unstable();
            k.dedup();
            k.len() == 12 && k.iter().all(|&c| c < fine_tets.len())
        });

    let vertex_count_ok = fine_verts.len()
        == coarse.num_vertices() + coarse.num_tets() + coarse.num_faces()
        && fine_tets.len() == 12 * coarse.num_tets();
    let boundary_face_count_ok = n_boundary == 3 * coarse.connectivity().num_boundary_faces();

    let child_vol = |c: usize| {
        let p = fine_tets[c].points(fine_verts);
        signed_volume(p[0], p[1], p[2], p[3])
    };
    let positive_volumes = (0..fine_tets.len()).all(|c| child_vol(c) > 0.0);
    let mut max_volume_residual: f64 = 0.0;
    for (t, kids) in wf.children_of.iter().enumerate() {
        let parent = coarse.tet_volume(t);
        let sum: f64 = kids
            .iter()
            .filter(|&&c| c < fine_tets.len())
            .map(|&c| child_vol(c))
            .sum();
        max_volume_residual = max_volume_residual.max((sum - parent).abs() / parent);
    }

    let cverts = coarse.vertices();
    let min_face_point_bary = coarse
        .connectivity()
        .faces
        .iter()
        .zip(&wf.face_point_of)
        .map(|(key, &m)| {
            let [a, b, c] = key.map(|v| cverts[v]);
            triangle_barycentric(m, a, b, c)
                .into_iter()
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min);
    let min_incenter_bary = wf
        .incenter_of
        .iter()
        .enumerate()
        .map(|(t, &z)| {
            let p = coarse.tet_points(t);
            let vol = signed_volume(p[0], p[1], p[2], p[3]);
            (0..4)
                .map(|i| {
                    let mut q = p;
                    q[i] = z;
                    signed_volume(q[0], q[1], q[2], q[3]) / vol
                })
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min);

    let ratios: Vec<f64> = fine_tets
        .iter()
        .filter_map(|t| tet_quality(&t.points(fine_verts)).ok())
        .map(|q| q.ratio)
        .collect();
    WfValidationReport {
        conforming,
        conformity_detail,
        child_count_ok,
        vertex_count_ok,
        boundary_face_count_ok,
        positive_volumes,
        max_volume_residual,
        min_face_point_bary,
        min_incenter_bary,
        euler_characteristic: euler,
        min_shape_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_shape_ratio: ratios.iter().copied().fold(0.0, f64::max),
    }
}
