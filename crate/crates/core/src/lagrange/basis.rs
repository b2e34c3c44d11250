//! Nodal Lagrange bases of degree `k` on the reference tet, written in
//! barycentric form: `φ_α(λ) = Π_m Π_{j<α_m} (kλ_m − j) / (j + 1)` for the
//! lattice point `α / k`.

use crate::error::{Error, Result};

use super::quadrature::{quadrature, QuadratureRule};

pub const MIN_DEGREE: usize = 1;
pub const MAX_DEGREE: usize = 4;

pub fn check_degree(k: usize) -> Result<()> {
    if (MIN_DEGREE..=MAX_DEGREE).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedDegree {
            degree: k,
            min: MIN_DEGREE,
            max: MAX_DEGREE,
        })
    }
}

/// Number of nodes of the degree-`k` element.
pub fn num_nodes(k: usize) -> usize {
    (k + 1) * (k + 2) * (k + 3) / 6
}

/// Lattice multi-indices ordered vertices, edges, faces, interior; within an
/// entity in lexicographic order.
pub fn lattice(k: usize) -> Vec<[usize; 4]> {
    let mut all = Vec::with_capacity(num_nodes(k));
    for a in 0..=k {
        for b in 0..=k - a {
            for c in 0..=k - a - b {
                all.push([k - a - b - c, a, b, c]);
            }
        }
    }
    let support = |al: &[usize; 4]| -> Vec<usize> { (0..4).filter(|&m| al[m] > 0).collect() };
    let entity_rank = |s: &[usize]| -> usize {
        use crate::mesh::{TET_EDGES, TET_FACES};
        match s.len() {
            1 => s[0],
            2 => TET_EDGES.iter().position(|e| e[..] == s[..]).unwrap(),
            3 => {
                let missing = (0..4).find(|m| !s.contains(m)).unwrap();
                TET_FACES.iter().position(|f| !f.contains(&missing)).unwrap()
            }
            _ => 0,
        }
    };
    all.sort_by_key(|al| {
        let s = support(al);
        (s.len(), entity_rank(&s), std::cmp::Reverse(*al))
    });
    all
}

/// Value of the basis function for `alpha` at barycentric point `l`.
pub fn eval(k: usize, alpha: &[usize; 4], l: &[f64; 4]) -> f64 {
    let kf = k as f64;
    let mut v = 1.0;
    for m in 0..4 {
        for j in 0..alpha[m] {
            v *= (kf * l[m] - j as f64) / (j + 1) as f64;
        }
    }
    v
}

/// Partial derivatives with respect to the four barycentric coordinates,
/// treated as independent variables.
pub fn eval_dlambda(k: usize, alpha: &[usize; 4], l: &[f64; 4]) -> [f64; 4] {
    let kf = k as f64;
    let mut factor = [1.0; 4];
    let mut dfactor = [0.0; 4];
    for m in 0..4 {
        // product rule over the univariate factor in λ_m
        let mut f = 1.0;
        let mut df = 0.0;
        for j in 0..alpha[m] {
            let c = 1.0 / (j + 1) as f64;
            let t = (kf * l[m] - j as f64) * c;
            df = df * t + f * kf * c;
            f *= t;
        }
        factor[m] = f;
        dfactor[m] = df;
    }
    let mut out = [0.0; 4];
    for m in 0..4 {
        let mut p = dfactor[m];
        for o in 0..4 {
            if o != m {
                p *= factor[o];
            }
        }
        out[m] = p;
    }
    out
}

/// Basis tabulated at the points of a quadrature rule.
#[derive(Debug, Clone)]
pub struct ReferenceBasis {
    pub degree: usize,
    pub multi_indices: Vec<[usize; 4]>,
    /// Barycentric node positions `α / k`.
    pub nodes: Vec<[f64; 4]>,
    pub quad: QuadratureRule,
    /// `values[q][i]` = φ_i at quadrature point q.
    pub values: Vec<Vec<f64>>,
    /// `grads[q][i]` = gradient of φ_i in reference coordinates (x, y, z).
    pub grads: Vec<Vec<[f64; 3]>>,
}

impl ReferenceBasis {
    pub fn new(k: usize, quad: QuadratureRule) -> Result<Self> {
        check_degree(k)?;
        let multi_indices = lattice(k);
        let nodes = multi_indices
            .iter()
            .map(|a| a.map(|v| v as f64 / k as f64))
            .collect();
        let mut values = Vec::with_capacity(quad.len());
        let mut grads = Vec::with_capacity(quad.len());
        for l in &quad.points {
            values.push(multi_indices.iter().map(|a| eval(k, a, l)).collect());
            grads.push(
                multi_indices
                    .iter()
                    .map(|a| {
                        let d = eval_dlambda(k, a, l);
                        [d[1] - d[0], d[2] - d[0], d[3] - d[0]]
                    })
                    .collect(),
            );
        }
        Ok(ReferenceBasis {
            degree: k,
            multi_indices,
            nodes,
            quad,
            values,
            grads,
        })
    }

    pub fn len(&self) -> usize {
        self.multi_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multi_indices.is_empty()
    }
}

/// Degree-`k` basis with a rule exact to degree `2k` (enough for both the
/// mass and the curl–curl forms on affine elements).
pub fn reference_basis(k: usize) -> Result<ReferenceBasis> {
    check_degree(k)?;
    ReferenceBasis::new(k, quadrature(2 * k)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counts() {
        assert_eq!(reference_basis(1).unwrap().len(), 4);
        assert_eq!(reference_basis(2).unwrap().len(), 10);
        assert_eq!(reference_basis(3).unwrap().len(), 20);
        assert_eq!(reference_basis(4).unwrap().len(), 35);
        assert!(matches!(
            reference_basis(0),
            Err(Error::UnsupportedDegree { degree: 0, .. })
        ));
        assert!(reference_basis(5).is_err());
    }

    #[test]
    fn linear_basis_is_barycentric() {
        let b = reference_basis(1).unwrap();
        for (q, l) in b.quad.points.iter().enumerate() {
            for i in 0..4 {
                // vertex i is the node with α = e_i
                let m = b.multi_indices[i].iter().position(|&a| a == 1).unwrap();
                assert!((b.values[q][i] - l[m]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn vertices_then_edges() {
        let l = lattice(2);
        assert_eq!(&l[..4], &[[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]);
        assert_eq!(l[4], [1, 1, 0, 0]);
        assert_eq!(l[9], [0, 0, 1, 1]);
    }

    #[test]
    fn kronecker_partition_of_unity_and_zero_gradient_sum() {
        for k in 1..=4 {
            let b = reference_basis(k).unwrap();
            for (i, a) in b.multi_indices.iter().enumerate() {
                for (j, node) in b.nodes.iter().enumerate() {
                    let v = eval(k, a, node);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((v - expect).abs() < 1e-13, "k={k} i={i} j={j} v={v}");
                }
            }
            for q in 0..b.quad.len() {
                let s: f64 = b.values[q].iter().sum();
                assert!((s - 1.0).abs() < 1e-13);
                for c in 0..3 {
                    let g: f64 = b.grads[q].iter().map(|g| g[c]).sum();
                    assert!(g.abs() < 1e-12, "k={k} gradient sum {g}");
                }
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let k = 3;
        let l = [0.1, 0.2, 0.3, 0.4];
        let h = 1e-6;
        for a in lattice(k) {
            let d = eval_dlambda(k, &a, &l);
            for m in 0..4 {
                let mut lp = l;
                let mut lm = l;
                lp[m] += h;
                lm[m] -= h;
                let fd = (eval(k, &a, &lp) - eval(k, &a, &lm)) / (2.0 * h);
                assert!((fd - d[m]).abs() < 1e-7, "{a:?} m={m}: {fd} vs {}", d[m]);
            }
        }
    }
}
