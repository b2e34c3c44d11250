//! Global assembly of the curl–curl and mass forms on vector Lagrange spaces.
//!
//! Element contributions are scattered in ascending tet order with local
//! indices ascending, which fixes the floating-point summation order.

use crate::error::{Error, Result};
use crate::geometry::invert3;
use crate::mesh::Mesh;

use super::basis::ReferenceBasis;
use super::dofmap::DofMap;
use super::sparse::SymmetricSparseMatrix;

/// Affine map data for one tet: |det J| and `J⁻ᵀ` as a row-major matrix.
struct AffineMap {
    abs_det: f64,
    inv_t: [[f64; 3]; 3],
}

impl AffineMap {
    fn new(mesh: &Mesh, t: usize) -> Result<Self> {
        let p = mesh.tet_points(t);
        let mut j = [[0.0; 3]; 3];
        for c in 0..3 {
            let e = p[c + 1] - p[0];
            for r in 0..3 {
                j[r][c] = e[r];
            }
        }
        match invert3(j) {
            Some((inv, det)) if det > 0.0 => {
                let mut inv_t = [[0.0; 3]; 3];
                for r in 0..3 {
                    for c in 0..3 {
                        inv_t[r][c] = inv[c][r];
                    }
                }
                Ok(AffineMap {
                    abs_det: det,
                    inv_t,
                })
            }
            _ => Err(Error::DegenerateElement(format!(
                "tet {t} has a non-positive Jacobian"
            ))),
        }
    }

    fn grad(&self, g: &[f64; 3]) -> [f64; 3] {
        let m = &self.inv_t;
        [
            m[0][0] * g[0] + m[0][1] * g[1] + m[0][2] * g[2],
            m[1][0] * g[0] + m[1][1] * g[1] + m[1][2] * g[2],
            m[2][0] * g[0] + m[2][1] * g[1] + m[2][2] * g[2],
        ]
    }
}

fn check_inputs(dofmap: &DofMap, basis: &ReferenceBasis, mesh: &Mesh, min_quad: usize) -> Result<()> {
    if dofmap.degree != basis.degree {
        return Err(Error::InvalidArgument(format!(
            "dof map degree {} differs from basis degree {}",
            dofmap.degree, basis.degree
        )));
    }
    if dofmap.cell_nodes.len() != mesh.num_tets() {
        return Err(Error::DimensionMismatch {
            expected: mesh.num_tets(),
            got: dofmap.cell_nodes.len(),
        });
    }
    if basis.quad.degree < min_quad {
        return Err(Error::InvalidArgument(format!(
            "quadrature exact to degree {} but {} is required",
            basis.quad.degree, min_quad
        )));
    }
    Ok(())
}

/// Pushes the upper triangle of a local `3n × 3n` block (interleaved
/// `3 · local + component`) into global triplets.
fn scatter(nodes: &[usize], local: &[f64], out: &mut Vec<(usize, usize, f64)>) {
    let nl = 3 * nodes.len();
    for a in 0..nl {
        let ga = 3 * nodes[a / 3] + a % 3;
        for b in 0..nl {
            let gb = 3 * nodes[b / 3] + b % 3;
            if ga <= gb {
                let v = local[a * nl + b];
                if v != 0.0 {
                    out.push((ga, gb, v));
                }
            }
        }
    }
}

/// Stiffness matrix of `(curl u, curl v)`.
pub fn assemble_curl_curl(
    mesh: &Mesh,
    dofmap: &DofMap,
    basis: &ReferenceBasis,
) -> Result<SymmetricSparseMatrix> {
    let k = basis.degree;
    check_inputs(dofmap, basis, mesh, 2 * (k - 1))?;
    let nb = basis.len();
    let nl = 3 * nb;
    let mut triplets = Vec::new();
    let mut local = vec![0.0; nl * nl];
    let mut g = vec![[0.0; 3]; nb];
    for (t, nodes) in dofmap.cell_nodes.iter().enumerate() {
        let map = AffineMap::new(mesh, t)?;
        local.iter_mut().for_each(|v| *v = 0.0);
        for (q, w) in basis.quad.weights.iter().enumerate() {
            let w = w * map.abs_det;
            for (i, gi) in g.iter_mut().enumerate() {
                *gi = map.grad(&basis.grads[q][i]);
            }
            // (∇φ_i × e_c)·(∇φ_j × e_d) = (∇φ_i·∇φ_j) δ_cd − ∂_d φ_i ∂_c φ_j
            for i in 0..nb {
                for j in 0..nb {
                    let gi = g[i];
                    let gj = g[j];
                    let dot = gi[0] * gj[0] + gi[1] * gj[1] + gi[2] * gj[2];
                    for c in 0..3 {
                        let row = (3 * i + c) * nl + 3 * j;
                        for d in 0..3 {
                            let mut v = -gi[d] * gj[c];
                            if c == d {
                                v += dot;
                            }
                            local[row + d] += w * v;
                        }
                    }
                }
            }
        }
        scatter(nodes, &local, &mut triplets);
    }
    Ok(SymmetricSparseMatrix::from_upper_triplets(dofmap.num_vector(), triplets))
}

/// Mass matrix of `(u, v)`.
pub fn assemble_mass(
    mesh: &Mesh,
    dofmap: &DofMap,
    basis: &ReferenceBasis,
) -> Result<SymmetricSparseMatrix> {
    let k = basis.degree;
    check_inputs(dofmap, basis, mesh, 2 * k)?;
    let nb = basis.len();
    let nl = 3 * nb;
    let mut triplets = Vec::new();
    let mut local = vec![0.0; nl * nl];
    let mut scalar = vec![0.0; nb * nb];
    for (t, nodes) in dofmap.cell_nodes.iter().enumerate() {
        let map = AffineMap::new(mesh, t)?;
        scalar.iter_mut().for_each(|v| *v = 0.0);
        for (q, w) in basis.quad.weights.iter().enumerate() {
            let w = w * map.abs_det;
            let phi = &basis.values[q];
            for i in 0..nb {
                for j in 0..nb {
                    scalar[i * nb + j] += w * phi[i] * phi[j];
                }
            }
        }
        local.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..nb {
            for j in 0..nb {
                for c in 0..3 {
                    local[(3 * i + c) * nl + 3 * j + c] = scalar[i * nb + j];
                }
            }
        }
        scatter(nodes, &local, &mut triplets);
    }
    Ok(SymmetricSparseMatrix::from_upper_triplets(dofmap.num_vector(), triplets))
}
