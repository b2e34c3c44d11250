//! Shift-invert Lanczos for the eigenpairs of `K u = λ M u` inside a positive
//! interval, for pencils too large for the dense solver.
//!
//! The operator `(K − σM)⁻¹ M` is self-adjoint in the `M` inner product; its
//! eigenvalues `θ = 1/(λ − σ)` are largest in magnitude for `λ` near the
//! shift. With `σ` at the interval midpoint, exactly the eigenvalues inside
//! the interval satisfy `|θ| ≥ 2/(hi − lo)`, and the kernel of `K` (at
//! `θ = −1/σ`) stays strictly outside as long as `lo > 0`. Converged pairs
//! are locked and deflated; the search restarts from fresh vectors until
//! several consecutive restarts find nothing new, which also recovers
//! repeated eigenvalues.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};

use super::Spectrum;
use crate::error::{Error, Result};
use crate::lagrange::SymmetricSparseMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalOptions {
    /// Ritz pairs are accepted when `β |s_last| ≤ tol · |θ|`.
    pub tol: f64,
    /// Krylov basis size per restart.
    pub max_basis: usize,
    /// Consecutive restarts without new pairs before the search stops.
    pub quiet_restarts: usize,
    pub max_restarts: usize,
    pub want_vectors: bool,
}

impl Default for IntervalOptions {
    fn default() -> Self {
        IntervalOptions {
            tol: 1e-10,
            max_basis: 300,
            quiet_restarts: 2,
            max_restarts: 200,
            want_vectors: true,
        }
    }
}

struct Locked {
    v: Vec<f64>,
    mv: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Removes the locked directions from `w` (two classical Gram–Schmidt passes
/// in the `M` inner product).
fn deflate(w: &mut [f64], locked: &[Locked]) {
    for _ in 0..2 {
        for l in locked {
            let c = dot(&l.mv, w);
            axpy(w, -c, &l.v);
        }
    }
}

/// Deterministic start vector for restart `r`.
fn start_vector(n: usize, r: usize) -> Vec<f64> {
    let f = 0.618_033_988_749_895 + 0.113_137_084_989_848 * r as f64;
    (0..n)
        .map(|i| ((i as f64 + 1.0) * f).sin() + 0.25 * ((i as f64 + 0.5) * f * 3.7).cos())
        .collect()
}

fn shifted_matrix(
    k: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    sigma: f64,
) -> Result<SparseColMat<usize, f64>> {
    let n = k.dim();
    let mut t = Vec::with_capacity(2 * (k.nnz() + m.nnz()));
    let mut push = |i: usize, j: usize, v: f64| {
        t.push(Triplet::new(i, j, v));
        if i != j {
            t.push(Triplet::new(j, i, v));
        }
    };
    for (i, j, v) in k.iter_upper() {
        push(i, j, v);
    }
    for (i, j, v) in m.iter_upper() {
        push(i, j, -sigma * v);
    }
    SparseColMat::try_new_from_triplets(n, n, &t)
        .map_err(|e| Error::Validation(format!("building K − σM failed: {e:?}")))
}

/// One Lanczos run from `q`; returns the converged Ritz vectors inside the
/// interval.
fn lanczos_run(
    lu: &faer::sparse::linalg::solvers::Lu<usize, f64>,
    m: &SymmetricSparseMatrix,
    locked: &[Locked],
    mut q: Vec<f64>,
    theta_cut: f64,
    opts: &IntervalOptions,
) -> Result<Vec<Vec<f64>>> {
    let n = m.dim();
    let max_basis = opts.max_basis.min(n.saturating_sub(locked.len())).max(1);
    deflate(&mut q, locked);
    let mut mq = m.mul_vec(&q);
    let nrm = dot(&q, &mq).sqrt();
    if !(nrm > 0.0) {
        return Ok(Vec::new());
    }
    q.iter_mut().for_each(|x| *x /= nrm);
    mq.iter_mut().for_each(|x| *x /= nrm);

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut mbasis: Vec<Vec<f64>> = vec![mq];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut last_count = usize::MAX;

    loop {
        let j = basis.len() - 1;
        let mut w = Mat::<f64>::zeros(n, 1);
        for (i, &x) in mbasis[j].iter().enumerate() {
            w[(i, 0)] = x;
        }
        lu.solve_in_place(w.as_mut());
        let mut w: Vec<f64> = (0..n).map(|i| w[(i, 0)]).collect();
        if w.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation(
                "shift-invert solve produced non-finite values (shift is an eigenvalue?)".into(),
            ));
        }

        let mut a = 0.0;
        for _ in 0..2 {
            for l in locked {
                let c = dot(&l.mv, &w);
                axpy(&mut w, -c, &l.v);
            }
            for (i, (qi, mqi)) in basis.iter().zip(&mbasis).enumerate() {
                let c = dot(mqi, &w);
                axpy(&mut w, -c, qi);
                if i == j {
                    a += c;
                }
            }
        }
        alpha.push(a);
        let mw = m.mul_vec(&w);
        let b = dot(&w, &mw).max(0.0).sqrt();

        let steps = alpha.len();
        let full = steps >= max_basis;
        let scale = alpha.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        let exhausted = b <= 1e-13 * scale.max(theta_cut);
        if steps.is_multiple_of(5) || full || exhausted {
            let (theta, s) = tridiagonal_eigen(&alpha, &beta)?;
            let res = |i: usize| b * s[(steps - 1, i)].abs();
            let conv = |i: usize| exhausted || res(i) <= opts.tol * theta[i].abs();
            let wanted: Vec<usize> = (0..steps).filter(|&i| theta[i].abs() >= theta_cut).collect();
            // Both ends of the Ritz spectrum must have converged too, so an
            // empty wanted set is credible.
            let ends_ok = conv(0) && conv(steps - 1);
            let all_ok = wanted.iter().all(|&i| conv(i));
            let settled = ends_ok && all_ok && wanted.len() == last_count;
            last_count = wanted.len();
            if settled || full || exhausted {
                let mut out = Vec::new();
                for &i in wanted.iter().filter(|&&i| conv(i)) {
                    let mut y = vec![0.0; n];
                    for (r, qr) in basis.iter().enumerate() {
                        axpy(&mut y, s[(r, i)], qr);
                    }
                    out.push(y);
                }
                return Ok(out);
            }
        }
        beta.push(b);
        w.iter_mut().for_each(|x| *x /= b);
        basis.push(w);
        mbasis.push(mw.into_iter().map(|x| x / b).collect());
    }
}

fn tridiagonal_eigen(alpha: &[f64], beta: &[f64]) -> Result<(Vec<f64>, Mat<f64>)> {
    let n = alpha.len();
    let t = Mat::<f64>::from_fn(n, n, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    let evd = t
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Validation(format!("tridiagonal eigen failed: {e:?}")))?;
    Ok(((0..n).map(|i| evd.S()[i]).collect(), evd.U().to_owned()))
}

/// All eigenpairs of `K u = λ M u` with `λ ∈ [lo, hi]`, `0 < lo < hi`.
///
/// The returned spectrum holds only the interval's eigenvalues (ascending);
/// the kernel is not computed, so `zero_count` is 0.
pub fn solve_interval(
    k: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    lo: f64,
    hi: f64,
    opts: &IntervalOptions,
) -> Result<Spectrum> {
    let n = k.dim();
    if m.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.dim(),
        });
    }
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "interval [{lo}, {hi}] must satisfy 0 < lo < hi < ∞"
        )));
    }
    if !(opts.tol > 0.0) || opts.max_basis < 2 {
        return Err(Error::InvalidArgument(
            "shift-invert options need tol > 0 and max_basis ≥ 2".into(),
        ));
    }
    let mut spectrum = Spectrum {
        values: Vec::new(),
        zero_count: 0,
        zero_threshold: 0.0,
        vectors: None,
    };
    if n == 0 {
        if opts.want_vectors {
            spectrum.vectors = Some(Mat::zeros(0, 0));
        }
        return Ok(spectrum);
    }

    let sigma = 0.5 * (lo + hi);
    let theta_cut = 2.0 / (hi - lo);
    let a = shifted_matrix(k, m, sigma)?;
    let lu = a
        .sp_lu()
        .map_err(|e| Error::Validation(format!("sparse LU of K − σM failed: {e:?}")))?;
    drop(a);

    let mut locked: Vec<Locked> = Vec::new();
    let mut quiet = 0;
    let mut restarts = 0;
    while quiet < opts.quiet_restarts {
        if restarts == opts.max_restarts {
            return Err(Error::Validation(format!(
                "shift-invert search did not settle after {restarts} restarts"
            )));
        }
        if locked.len() >= n {
            break;
        }
        let found = lanczos_run(&lu, m, &locked, start_vector(n, restarts), theta_cut, opts)?;
        restarts += 1;
        let mut added = 0;
        for mut v in found {
            // Re-orthogonalize against everything locked so far.
            deflate(&mut v, &locked);
            let mv = m.mul_vec(&v);
            let nrm = dot(&v, &mv).max(0.0).sqrt();
            if nrm < 1e-6 {
                continue;
            }
            v.iter_mut().for_each(|x| *x /= nrm);
            let mv = mv.into_iter().map(|x| x / nrm).collect();
            locked.push(Locked { v, mv });
            added += 1;
        }
        quiet = if added == 0 { quiet + 1 } else { 0 };
    }

    // Rayleigh–Ritz on the locked subspace.
    let p = locked.len();
    if p == 0 {
        if opts.want_vectors {
            spectrum.vectors = Some(Mat::zeros(n, 0));
        }
        return Ok(spectrum);
    }
    let kv: Vec<Vec<f64>> = locked.iter().map(|l| k.mul_vec(&l.v)).collect();
    let kp = Mat::<f64>::from_fn(p, p, |i, j| 0.5 * (dot(&locked[i].v, &kv[j]) + dot(&locked[j].v, &kv[i])));
    let mp = Mat::<f64>::from_fn(p, p, |i, j| 0.5 * (dot(&locked[i].v, &locked[j].mv) + dot(&locked[j].v, &locked[i].mv)));
    let small_k = SymmetricSparseMatrix::from_dense_upper(&kp);
    let small_m = SymmetricSparseMatrix::from_dense_upper(&mp);
    let small = super::solve_generalized(
        &small_k,
        &small_m,
        &super::SolveOptions {
            zero_tol: 0.0,
            want_vectors: true,
            dense_cap: usize::MAX,
        },
    )?;
    let sv = small.vectors.as_ref().expect("vectors requested");
    let keep: Vec<usize> = (0..p)
        .filter(|&i| small.values[i] >= lo && small.values[i] <= hi)
        .collect();
    spectrum.values = keep.iter().map(|&i| small.values[i]).collect();
    if opts.want_vectors {
        let mut vectors = Mat::<f64>::zeros(n, keep.len());
        for (c, &i) in keep.iter().enumerate() {
            for (r, l) in locked.iter().enumerate() {
                let s = sv[(r, i)];
                for row in 0..n {
                    vectors[(row, c)] += s * l.v[row];
                }
            }
        }
        spectrum.vectors = Some(vectors);
    }
    Ok(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::{solve_generalized, SolveOptions};
    use crate::experiments::{discretize, RefineMode};
    use crate::hcurl_bc::BcMode;
    use crate::mesh::Aabb;

    fn diagonal(values: &[f64]) -> SymmetricSparseMatrix {
        SymmetricSparseMatrix::from_upper_triplets(
            values.len(),
            values.iter().enumerate().map(|(i, &v)| (i, i, v)).collect(),
        )
    }

    #[test]
    fn finds_repeated_eigenvalues_and_skips_kernel() {
        let mut d = vec![0.0; 20];
        d.extend([1.0, 2.0, 2.0, 2.0, 3.0, 7.0, 9.0, 2.4999]);
        let k = diagonal(&d);
        let m = SymmetricSparseMatrix::identity(d.len());
        let s = solve_interval(&k, &m, 0.5, 2.5, &IntervalOptions::default()).unwrap();
        assert_eq!(s.values.len(), 5, "{:?}", s.values);
        for (got, want) in s.values.iter().zip([1.0, 2.0, 2.0, 2.0, 2.4999]) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
        assert_eq!(s.vectors.as_ref().unwrap().ncols(), 5);
    }

    #[test]
    fn matches_dense_solver_on_a_mesh() {
        let d = discretize(&Aabb::pi_cube(), 2, 2, RefineMode::None, BcMode::Tangential).unwrap();
        let dense = solve_generalized(&d.k_red, &d.m_red, &SolveOptions::default()).unwrap();
        let (lo, hi) = (0.5, 7.0);
        let want: Vec<f64> = dense
            .nonzero()
            .iter()
            .copied()
            .filter(|&v| v >= lo && v <= hi)
            .collect();
        let s = solve_interval(&d.k_red, &d.m_red, lo, hi, &IntervalOptions::default()).unwrap();
        assert_eq!(s.values.len(), want.len());
        for (a, b) in s.values.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-9 * b, "{a} vs {b}");
        }
        let v = s.vectors.as_ref().unwrap();
        let cols: Vec<usize> = (0..v.ncols()).collect();
        assert!(crate::eigensolve::m_orthonormality_error(&d.m_red, v, &cols) < 1e-10);
    }

    #[test]
    fn rejects_bad_arguments() {
        let k = diagonal(&[1.0, 2.0]);
        let m = SymmetricSparseMatrix::identity(2);
        let o = IntervalOptions::default();
        assert!(matches!(solve_interval(&k, &m, 0.0, 1.0, &o), Err(Error::InvalidArgument(_))));
        assert!(matches!(solve_interval(&k, &m, 2.0, 1.0, &o), Err(Error::InvalidArgument(_))));
        let m3 = SymmetricSparseMatrix::identity(3);
        assert!(matches!(
            solve_interval(&k, &m3, 0.5, 1.0, &o),
            Err(Error::DimensionMismatch { .. })
        ));
        let empty = solve_interval(&k, &m, 5.0, 6.0, &o).unwrap();
        assert!(empty.values.is_empty());
    }
}
