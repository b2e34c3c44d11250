//! Generalized symmetric eigenproblems `K u = λ M u`, the exact Maxwell
//! spectrum of a box, and comparison diagnostics.

use faer::linalg::triangular_solve::{
    solve_lower_triangular_in_place, solve_upper_triangular_in_place,
};
use faer::{Mat, Par, Side};

use crate::error::{Error, Result};
use crate::lagrange::SymmetricSparseMatrix;
use crate::mesh::Aabb;

pub mod shift_invert;

pub use shift_invert::{solve_interval, IntervalOptions};

pub const DEFAULT_ZERO_TOL: f64 = 1e-8;
pub const DEFAULT_DENSE_CAP: usize = 12_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Eigenvalues below `zero_tol · max |λ|` count as kernel modes.
    pub zero_tol: f64,
    pub want_vectors: bool,
    pub dense_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            zero_tol: DEFAULT_ZERO_TOL,
            want_vectors: false,
            dense_cap: DEFAULT_DENSE_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending.
    pub values: Vec<f64>,
    pub zero_count: usize,
    pub zero_threshold: f64,
    /// M-orthonormal eigenvectors as columns, in reduced coordinates.
    pub vectors: Option<Mat<f64>>,
}

impl Spectrum {
    /// Builds a spectrum from ascending values, classifying kernel modes.
    pub fn from_values(mut values: Vec<f64>, zero_tol: f64) -> Self {
        values.sort_by(f64::total_cmp);
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let zero_threshold = zero_tol * if scale > 0.0 { scale } else { 1.0 };
        let zero_count = values.iter().take_while(|&&v| v < zero_threshold).count();
        Spectrum {
            values,
            zero_count,
            zero_threshold,
            vectors: None,
        }
    }

    pub fn nonzero(&self) -> &[f64] {
        &self.values[self.zero_count..]
    }

    /// Number of nonzero eigenvalues in `[lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.nonzero().iter().filter(|&&v| v >= lo && v <= hi).count()
    }

    /// Eigenvector `i` (index into `values`) if vectors were computed.
    pub fn vector(&self, i: usize) -> Option<Vec<f64>> {
        self.vectors
            .as_ref()
            .map(|v| (0..v.nrows()).map(|r| v[(r, i)]).collect())
    }
}

/// Dense solve of the full pencil spectrum via `M = L Lᵀ` and the standard
/// problem `L⁻¹ K L⁻ᵀ`.
pub fn solve_generalized(
    k: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    opts: &SolveOptions,
) -> Result<Spectrum> {
    let n = k.dim();
    if m.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.dim(),
        });
    }
    if n > opts.dense_cap {
        return Err(Error::ProblemTooLarge {
            dim: n,
            cap: opts.dense_cap,
            context: None,
        });
    }
    if n == 0 {
        let mut s = Spectrum::from_values(Vec::new(), opts.zero_tol);
        if opts.want_vectors {
            s.vectors = Some(Mat::zeros(0, 0));
        }
        return Ok(s);
    }

    let llt = {
        let md = m.to_dense();
        md.llt(Side::Lower).map_err(|_| Error::NotPositiveDefinite)?
    };
    let l = llt.L();
    let mut c = k.to_dense();
    solve_lower_triangular_in_place(l, c.as_mut(), Par::Seq);
    solve_lower_triangular_in_place(l, c.as_mut().transpose_mut(), Par::Seq);

    if !opts.want_vectors {
        let values = c
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Validation(format!("eigenvalue iteration failed: {e:?}")))?;
        return Ok(Spectrum::from_values(values, opts.zero_tol));
    }
    let evd = c
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Validation(format!("eigenvalue iteration failed: {e:?}")))?;
    drop(c);
    let values: Vec<f64> = (0..n).map(|i| evd.S()[i]).collect();
    let mut vectors = evd.U().to_owned();
    drop(evd);
    solve_upper_triangular_in_place(l.transpose(), vectors.as_mut(), Par::Seq);
    let mut s = Spectrum::from_values(values, opts.zero_tol);
    s.vectors = Some(vectors);
    Ok(s)
}

/// `max |VᵀMV − I|` over the selected eigenvector columns.
pub fn m_orthonormality_error(
    m: &SymmetricSparseMatrix,
    vectors: &Mat<f64>,
    columns: &[usize],
) -> f64 {
    let cols: Vec<Vec<f64>> = columns
        .iter()
        .map(|&c| (0..vectors.nrows()).map(|r| vectors[(r, c)]).collect())
        .collect();
    let mcols: Vec<Vec<f64>> = cols.iter().map(|v| m.mul_vec(v)).collect();
    let mut err: f64 = 0.0;
    for (a, va) in cols.iter().enumerate() {
        for (b, mb) in mcols.iter().enumerate() {
            let d: f64 = va.iter().zip(mb).map(|(x, y)| x * y).sum();
            let e = if a == b { 1.0 } else { 0.0 };
            err = err.max((d - e).abs());
        }
    }
    err
}

/// One distinct eigenvalue of the Maxwell operator on a box.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSpectrumEntry {
    pub lambda: f64,
    pub multiplicity: usize,
    /// Wave-number triples `(k₁, k₂, k₃)` producing `lambda`.
    pub triples: Vec<[u32; 3]>,
}

/// Independent modes contributed by one wave triple: two when all wave
/// numbers are positive, one when exactly one vanishes, none otherwise.
pub fn triple_multiplicity(t: [u32; 3]) -> usize {
    match t.iter().filter(|&&k| k == 0).count() {
        0 => 2,
        1 => 1,
        _ => 0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSpectrum {
    pub entries: Vec<ExactSpectrumEntry>,
    /// First `m` eigenvalues repeated by multiplicity.
    pub values: Vec<f64>,
}

/// First `m` Maxwell eigenvalues `Σ (kᵢ π / Lᵢ)²` of the box, with
/// multiplicity.
pub fn exact_box_spectrum(domain: &Aabb, m: usize) -> Result<ExactSpectrum> {
    if m == 0 {
        return Err(Error::InvalidArgument("requested zero eigenvalues".into()));
    }
    let pi = std::f64::consts::PI;
    let w: Vec<f64> = (0..3).map(|a| pi / domain.extent(a)).collect();
    let lam = |t: [u32; 3]| -> f64 { (0..3).map(|a| (t[a] as f64 * w[a]).powi(2)).sum() };
    let mut bound = 4.0 * w.iter().fold(0.0f64, |acc, &x| acc.max(x * x));
    loop {
        let kmax: Vec<u32> = w.iter().map(|&x| (bound.sqrt() / x).floor() as u32).collect();
        let mut modes: Vec<(f64, [u32; 3])> = Vec::new();
        for a in 0..=kmax[0] {
            for b in 0..=kmax[1] {
                for c in 0..=kmax[2] {
                    let t = [a, b, c];
                    let l = lam(t);
                    if triple_multiplicity(t) > 0 && l <= bound {
                        modes.push((l, t));
                    }
                }
            }
        }
        modes.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let total: usize = modes.iter().map(|x| triple_multiplicity(x.1)).sum();
        if total < m {
            bound *= 2.0;
            continue;
        }
        let mut entries: Vec<ExactSpectrumEntry> = Vec::new();
        for (l, t) in modes {
            match entries.last_mut() {
                Some(e) if (e.lambda - l).abs() <= 1e-12 * l => {
                    e.multiplicity += triple_multiplicity(t);
                    e.triples.push(t);
                }
                _ => entries.push(ExactSpectrumEntry {
                    lambda: l,
                    multiplicity: triple_multiplicity(t),
                    triples: vec![t],
                }),
            }
        }
        let mut values = Vec::with_capacity(m);
        let mut used = 0;
        for e in &entries {
            if values.len() >= m {
                break;
            }
            used += 1;
            for _ in 0..e.multiplicity {
                if values.len() < m {
                    values.push(e.lambda);
                }
            }
        }
        entries.truncate(used);
        return Ok(ExactSpectrum { entries, values });
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    /// 1-based position among the nonzero eigenvalues.
    pub index: usize,
    pub lambda_h: f64,
    pub lambda_exact: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumComparison {
    pub rows: Vec<ComparisonRow>,
    pub window: (f64, f64),
    /// Computed nonzero eigenvalues inside `window`.
    pub window_count: usize,
    /// Exact eigenvalues inside `window`.
    pub expected_window_count: usize,
    pub spurious: bool,
    pub zero_count: usize,
}

/// Default window around the first cube eigenvalue λ = 2 (multiplicity 3).
pub const DEFAULT_WINDOW: (f64, f64) = (1.5, 2.5);

/// Pairs the ascending nonzero eigenvalues with the ascending exact list and
/// flags a spurious spectrum when the eigenvalue count in `window` differs
/// from the exact count there.
pub fn compare_spectra(
    spectrum: &Spectrum,
    exact: &[f64],
    window: (f64, f64),
) -> Result<SpectrumComparison> {
    let nz = spectrum.nonzero();
    if nz.len() < exact.len() {
        return Err(Error::InsufficientSpectrum {
            available: nz.len(),
            requested: exact.len(),
        });
    }
    let rows = exact
        .iter()
        .zip(nz)
        .enumerate()
        .map(|(i, (&e, &h))| ComparisonRow {
            index: i + 1,
            lambda_h: h,
            lambda_exact: e,
            abs_error: (e - h).abs(),
        })
        .collect();
    let window_count = spectrum.count_in(window.0, window.1);
    let expected_window_count = exact
        .iter()
        .filter(|&&v| v >= window.0 && v <= window.1)
        .count();
    Ok(SpectrumComparison {
        rows,
        window,
        window_count,
        expected_window_count,
        spurious: window_count != expected_window_count,
        zero_count: spectrum.zero_count,
    })
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `‖Ku − λMu‖ / (‖Ku‖ + λ‖Mu‖)`.
pub fn rayleigh_residual(
    k: &SymmetricSparseMatrix,
    m: &SymmetricSparseMatrix,
    lambda: f64,
    u: &[f64],
) -> Result<f64> {
    if u.len() != k.dim() || m.dim() != k.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            got: u.len(),
        });
    }
    if u.iter().all(|&x| x == 0.0) {
        return Err(Error::InvalidArgument("zero eigenvector".into()));
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!("negative eigenvalue {lambda}")));
    }
    let ku = k.mul_vec(u);
    let mu = m.mul_vec(u);
    let r: Vec<f64> = ku.iter().zip(&mu).map(|(a, b)| a - lambda * b).collect();
    let denom = norm2(&ku) + lambda * norm2(&mu);
    Ok(if denom == 0.0 { 0.0 } else { norm2(&r) / denom })
}

/// Observed orders `ln(e_{i−1}/e_i) / ln(h_{i−1}/h_i)`.
pub fn convergence_rates(h: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    if h.len() != e.len() {
        return Err(Error::InvalidArgument(format!(
            "{} mesh sizes but {} errors",
            h.len(),
            e.len()
        )));
    }
    if h.iter().chain(e).any(|&x| !(x > 0.0)) {
        return Err(Error::InvalidArgument("mesh sizes and errors must be positive".into()));
    }
    if h.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("mesh sizes must be strictly decreasing".into()));
    }
    Ok(h.windows(2)
        .zip(e.windows(2))
        .map(|(hw, ew)| (ew[0] / ew[1]).ln() / (hw[0] / hw[1]).ln())
        .collect())
}
