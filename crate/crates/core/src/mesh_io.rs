//! Plain-text mesh format.
//!
//! ```text
//! wfmesh 1
//! <nv> <nt>
//! x y z            (nv lines, 17 significant digits)
//! i0 i1 i2 i3      (nt lines, zero-based vertex ids)
//! ```
//!
//! The domain box of a loaded mesh is the bounding box of its vertices.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::mesh::{Aabb, Mesh, Tetra};

pub const MESH_MAGIC: &str = "wfmesh 1";

/// Formats a float with 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_mesh_string(mesh: &Mesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MESH_MAGIC}");
    let _ = writeln!(out, "{} {}", mesh.num_vertices(), mesh.num_tets());
    for p in mesh.vertices() {
        let _ = writeln!(out, "{} {} {}", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.z));
    }
    for t in mesh.tets() {
        let _ = writeln!(out, "{} {} {} {}", t.v[0], t.v[1], t.v[2], t.v[3]);
    }
    out
}

pub fn write_mesh(mesh: &Mesh, path: &Path) -> Result<()> {
    std::fs::write(path, write_mesh_string(mesh)).map_err(|e| Error::io(path, e))
}

pub fn read_mesh_str(text: &str, source_name: &str) -> Result<Mesh> {
    let perr = |line: usize, message: String| Error::Parse {
        source_name: source_name.to_string(),
        line,
        message,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, magic) = lines.next().ok_or_else(|| perr(1, "empty file".into()))?;
    if magic != MESH_MAGIC {
        return Err(perr(ln, format!("expected header `{MESH_MAGIC}`, found `{magic}`")));
    }
    let (ln, counts) = lines.next().ok_or_else(|| perr(ln + 1, "missing counts".into()))?;
    let counts: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| perr(ln, format!("bad count `{t}`: {e}"))))
        .collect::<Result<_>>()?;
    let [nv, nt] = counts[..] else {
        return Err(perr(ln, "expected `<nv> <nt>`".into()));
    };

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| perr(0, format!("expected {nv} vertex lines")))?;
        let c: Vec<f64> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| perr(ln, format!("bad coordinate `{t}`: {e}"))))
            .collect::<Result<_>>()?;
        let [x, y, z] = c[..] else {
            return Err(perr(ln, "expected 3 coordinates".into()));
        };
        vertices.push(Point3::new(x, y, z));
    }
    let mut tets = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| perr(0, format!("expected {nt} tet lines")))?;
        let v: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| perr(ln, format!("bad vertex id `{t}`: {e}"))))
            .collect::<Result<_>>()?;
        let [a, b, c, d] = v[..] else {
            return Err(perr(ln, "expected 4 vertex ids".into()));
        };
        tets.push(Tetra::new([a, b, c, d]));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(perr(ln, "trailing content".into()));
    }
    let domain = Aabb::enclosing(&vertices)?;
    Mesh::new(vertices, tets, domain)
}

pub fn read_mesh(path: &Path) -> Result<Mesh> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_mesh_str(&text, &path.display().to_string())
}
