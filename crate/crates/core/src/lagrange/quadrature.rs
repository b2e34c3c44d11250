//! Conical-product (collapsed Gauss-Jacobi) rules on the reference tet
//! `{x, y, z ≥ 0, x + y + z ≤ 1}`.

use faer::{Mat, Side};

use crate::error::{Error, Result};

pub const MAX_QUADRATURE_DEGREE: usize = 10;

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    /// Barycentric coordinates `(1 − x − y − z, x, y, z)`.
    pub points: Vec<[f64; 4]>,
    /// Weights summing to the reference volume 1/6.
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrates `f(x, y, z)` over the reference tet.
    pub fn integrate(&self, f: impl Fn(f64, f64, f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p[1], p[2], p[3]))
            .sum()
    }
}

/// Gauss-Jacobi nodes and weights on `[0, 1]` for the weight `(1 − t)^alpha`
/// (Golub-Welsch on the Jacobi matrix of `P_n^{(alpha, 0)}`).
pub fn gauss_jacobi(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    let beta = 0.0;
    let ab = alpha + beta;
    let mut jac = Mat::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        jac[(k, k)] = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let k1 = kf + 1.0;
            let s1 = 2.0 * k1 + ab;
            let b = (4.0 * k1 * (k1 + alpha) * (k1 + beta) * (k1 + ab)
                / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0)))
                .sqrt();
            jac[(k, k + 1)] = b;
            jac[(k + 1, k)] = b;
        }
    }
    // μ0 = ∫_{-1}^{1} (1 − s)^α ds = 2^{α+1} / (α + 1) for β = 0.
    let mu0 = 2f64.powf(alpha + 1.0) / (alpha + 1.0);
    let evd = jac
        .self_adjoint_eigen(Side::Lower)
        .expect("tridiagonal Jacobi matrix eigendecomposition");
    let (s, u) = (evd.S(), evd.U());
    let scale = 2f64.powf(alpha + 1.0);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        nodes.push(0.5 * (1.0 + s[i]));
        weights.push(mu0 * u[(0, i)] * u[(0, i)] / scale);
    }
    (nodes, weights)
}

/// Rule exact for all polynomials of total degree `≤ degree`.
pub fn quadrature(degree: usize) -> Result<QuadratureRule> {
    if degree > MAX_QUADRATURE_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree,
            min: 0,
            max: MAX_QUADRATURE_DEGREE,
        });
    }
    // n-point Gauss rules are exact to degree 2n − 1 in each collapsed direction.
    let n = degree / 2 + 1;
    let (x1, w1) = gauss_jacobi(n, 2.0);
    let (x2, w2) = gauss_jacobi(n, 1.0);
    let (x3, w3) = gauss_jacobi(n, 0.0);
    let mut points = Vec::with_capacity(n * n * n);
    let mut weights = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let x = x1[i];
                let y = x2[j] * (1.0 - x);
                let z = x3[k] * (1.0 - x) * (1.0 - x2[j]);
                points.push([1.0 - x - y - z, x, y, z]);
                weights.push(w1[i] * w2[j] * w3[k]);
            }
        }
    }
    Ok(QuadratureRule {
        points,
        weights,
        degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// ∫_ref x^a y^b z^c = a! b! c! / (a + b + c + 3)!
    fn monomial_exact(a: u32, b: u32, c: u32) -> f64 {
        factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3)
    }

    #[test]
    fn basic_integrals() {
        let q = quadrature(2).unwrap();
        assert!((q.integrate(|_, _, _| 1.0) - 1.0 / 6.0).abs() < 1e-16);
        assert!((q.integrate(|x, _, _| x) - 1.0 / 24.0).abs() < 1e-16);
        assert!((q.integrate(|x, y, _| x * y) - 1.0 / 120.0).abs() < 1e-16);
    }

    #[test]
    fn monomial_exactness_all_degrees() {
        for d in 0..=MAX_QUADRATURE_DEGREE {
            let q = quadrature(d).unwrap();
            assert_eq!(q.degree, d);
            for a in 0..=d as u32 {
                for b in 0..=d as u32 - a {
                    for c in 0..=d as u32 - a - b {
                        let exact = monomial_exact(a, b, c);
                        let got = q.integrate(|x, y, z| {
                            x.powi(a as i32) * y.powi(b as i32) * z.powi(c as i32)
                        });
                        assert!(
                            (got - exact).abs() <= 1e-14 * exact,
                            "d={d} ({a},{b},{c}): {got} vs {exact}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn points_are_inside() {
        let q = quadrature(7).unwrap();
        for p in &q.points {
            assert!(p.iter().all(|&l| l > 0.0 && l < 1.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
        assert!(q.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn out_of_range_degree() {
        assert!(matches!(
            quadrature(11),
            Err(Error::UnsupportedDegree { degree: 11, .. })
        ));
    }

    #[test]
    fn gauss_legendre_two_points() {
        let (x, w) = gauss_jacobi(2, 0.0);
        let r = 0.5 / 3f64.sqrt();
        assert!((x[0] - (0.5 - r)).abs() < 1e-15 && (x[1] - (0.5 + r)).abs() < 1e-15);
        assert!((w[0] - 0.5).abs() < 1e-15 && (w[1] - 0.5).abs() < 1e-15);
    }
}
