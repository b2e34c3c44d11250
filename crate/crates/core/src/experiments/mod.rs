//! End-to-end Maxwell eigenvalue experiments on box domains.

pub mod config;
pub mod report;

use std::str::FromStr;

use crate::eigensolve::{
    compare_spectra, convergence_rates, exact_box_spectrum, m_orthonormality_error,
    rayleigh_residual, solve_generalized, solve_interval, IntervalOptions, SolveOptions,
    Spectrum, SpectrumComparison, DEFAULT_DENSE_CAP, DEFAULT_WINDOW, DEFAULT_ZERO_TOL,
};
use crate::error::{Error, Result};
use crate::hcurl_bc::{apply_constraints, constraints_for, BcMode};
use crate::lagrange::{assemble_curl_curl, assemble_mass, build_dof_map, reference_basis};
use crate::mesh::{build_box_mesh, classify_boundary_vertices, mesh_quality, Aabb, Mesh};
use crate::wf_refine::{validate_wf, worsey_farin_refine};

pub use report::{emit_tables, rates_csv, rates_table, spectrum_csv, summary_text};

/// Accepted eigenpairs must satisfy this relative residual.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefineMode {
    None,
    #[default]
    WorseyFarin,
}

impl FromStr for RefineMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(RefineMode::None),
            "wf" => Ok(RefineMode::WorseyFarin),
            _ => Err(Error::InvalidArgument(format!(
                "unknown refinement `{s}` (expected wf|none)"
            ))),
        }
    }
}

impl std::fmt::Display for RefineMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RefineMode::None => "none",
            RefineMode::WorseyFarin => "wf",
        })
    }
}

/// Eigensolver used for each resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    /// Full dense spectrum, including the kernel count; limited by `dense_cap`.
    #[default]
    Dense,
    /// Sparse shift-invert Lanczos over `[λ₁/4, 1.1·λ_m]` of the exact
    /// spectrum. Scales to larger meshes but does not count the kernel and
    /// does not see discrete eigenvalues below `λ₁/4`.
    ShiftInvert,
}

impl FromStr for SolverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(SolverKind::Dense),
            "shift-invert" => Ok(SolverKind::ShiftInvert),
            _ => Err(Error::InvalidArgument(format!(
                "unknown solver `{s}` (expected dense|shift-invert)"
            ))),
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverKind::Dense => "dense",
            SolverKind::ShiftInvert => "shift-invert",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub domain: Aabb,
    pub n_list: Vec<usize>,
    pub degree: usize,
    pub refine: RefineMode,
    pub num_eigs: usize,
    pub zero_tol: f64,
    pub bc: BcMode,
    pub dense_cap: usize,
    pub solver: SolverKind,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            domain: Aabb::pi_cube(),
            n_list: vec![2],
            degree: 2,
            refine: RefineMode::WorseyFarin,
            num_eigs: 13,
            zero_tol: DEFAULT_ZERO_TOL,
            bc: BcMode::Tangential,
            dense_cap: DEFAULT_DENSE_CAP,
            solver: SolverKind::Dense,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(Error::InvalidArgument(
                "n list must be non-empty with entries ≥ 1".into(),
            ));
        }
        if self.num_eigs == 0 {
            return Err(Error::InvalidArgument("num_eigs must be ≥ 1".into()));
        }
        crate::lagrange::basis::check_degree(self.degree)?;
        if !(self.zero_tol > 0.0) {
            return Err(Error::InvalidArgument("zero_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Results for one mesh resolution.
#[derive(Debug, Clone)]
pub struct ResolutionRow {
    pub n: usize,
    /// Subcube side along x, `L_x / n`.
    pub h: f64,
    /// Largest tet diameter of the mesh actually used.
    pub max_h_t: f64,
    pub max_shape_ratio: f64,
    pub num_tets: usize,
    pub reduced_dim: usize,
    /// Kernel dimension; `None` for the shift-invert solver.
    pub zero_count: Option<usize>,
    pub comparison: SpectrumComparison,
    /// Number of exact eigenvalues compared; below `num_eigs` when the
    /// discrete space has fewer nonzero modes.
    pub compared: usize,
    pub max_residual: f64,
    pub m_orthonormality: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub scenario: Scenario,
    /// Sorted by `n` ascending.
    pub rows: Vec<ResolutionRow>,
    /// |λ⁽¹⁾ − λ_h⁽¹⁾| per row.
    pub lambda1_errors: Vec<f64>,
    /// Present iff at least two resolutions.
    pub rates: Option<Vec<f64>>,
}

/// Discretized pencil for one resolution, before solving.
pub struct Discretization {
    pub mesh: Mesh,
    pub k_red: crate::lagrange::SymmetricSparseMatrix,
    pub m_red: crate::lagrange::SymmetricSparseMatrix,
    pub max_shape_ratio: f64,
    pub max_h_t: f64,
}

/// Mesh → (refine) → assemble → constrain.
pub fn discretize(
    domain: &Aabb,
    n: usize,
    degree: usize,
    refine: RefineMode,
    bc: BcMode,
) -> Result<Discretization> {
    let coarse = build_box_mesh(*domain, n)?;
    let mesh = match refine {
        RefineMode::None => coarse,
        RefineMode::WorseyFarin => {
            let wf = worsey_farin_refine(&coarse)?;
            let report = validate_wf(&wf);
            if !report.passed() {
                return Err(Error::Validation(format!(
                    "Worsey-Farin refinement check failed at n = {n}:\n{}",
                    report.to_text()
                )));
            }
            wf.fine
        }
    };
    let quality = mesh_quality(&mesh)?;
    let classes = classify_boundary_vertices(&mesh)?;
    let basis = reference_basis(degree)?;
    let dofs = build_dof_map(&mesh, degree)?;
    let k = assemble_curl_curl(&mesh, &dofs, &basis)?;
    let m = assemble_mass(&mesh, &dofs, &basis)?;
    let cs = constraints_for(&mesh, &dofs, &classes, bc)?;
    let (k_red, m_red) = apply_constraints(&k, &m, &cs)?;
    Ok(Discretization {
        mesh,
        k_red,
        m_red,
        max_shape_ratio: quality.max_ratio,
        max_h_t: quality.max_h,
    })
}

fn solve(sc: &Scenario, d: &Discretization, exact: &[f64]) -> Result<Spectrum> {
    match sc.solver {
        SolverKind::Dense => {
            let opts = SolveOptions {
                zero_tol: sc.zero_tol,
                want_vectors: true,
                dense_cap: sc.dense_cap,
            };
            solve_generalized(&d.k_red, &d.m_red, &opts)
        }
        SolverKind::ShiftInvert => {
            let lo = 0.25 * exact[0];
            let hi = 1.1 * exact[exact.len() - 1];
            solve_interval(&d.k_red, &d.m_red, lo, hi, &IntervalOptions::default())
        }
    }
}

fn run_resolution(sc: &Scenario, n: usize, exact: &[f64]) -> Result<ResolutionRow> {
    let d = discretize(&sc.domain, n, sc.degree, sc.refine, sc.bc)?;
    let spectrum = solve(sc, &d, exact).map_err(|e| match e {
        Error::ProblemTooLarge { dim, cap, .. } => Error::ProblemTooLarge {
            dim,
            cap,
            context: Some(format!("n = {n}")),
        },
        Error::NotPositiveDefinite => {
            Error::Validation(format!("reduced mass matrix is not positive definite at n = {n}"))
        }
        other => other,
    })?;
    let compared = exact.len().min(spectrum.nonzero().len());
    let mut comparison = compare_spectra(&spectrum, &exact[..compared], DEFAULT_WINDOW)?;
    // Clamping must not hide missing eigenvalues: the window expectation
    // comes from the full exact list.
    let (lo, hi) = DEFAULT_WINDOW;
    comparison.expected_window_count = exact.iter().filter(|&&v| v >= lo && v <= hi).count();
    comparison.spurious = comparison.window_count != comparison.expected_window_count;

    let vectors = spectrum.vectors.as_ref().expect("vectors requested");
    let accepted: Vec<usize> = (spectrum.zero_count..spectrum.zero_count + compared).collect();
    let mut max_residual: f64 = 0.0;
    for &i in &accepted {
        let u = spectrum.vector(i).expect("vectors requested");
        let r = rayleigh_residual(&d.k_red, &d.m_red, spectrum.values[i], &u)?;
        if !(r <= RESIDUAL_TOL) {
            return Err(Error::Validation(format!(
                "eigenpair {i} at n = {n} has relative residual {r:e} > {RESIDUAL_TOL:e}"
            )));
        }
        max_residual = max_residual.max(r);
    }
    let m_orthonormality = m_orthonormality_error(&d.m_red, vectors, &accepted);

    Ok(ResolutionRow {
        n,
        h: sc.domain.extent(0) / n as f64,
        max_h_t: d.max_h_t,
        max_shape_ratio: d.max_shape_ratio,
        num_tets: d.mesh.num_tets(),
        reduced_dim: d.k_red.dim(),
        zero_count: match sc.solver {
            SolverKind::Dense => Some(spectrum.zero_count),
            SolverKind::ShiftInvert => None,
        },
        comparison,
        compared,
        max_residual,
        m_orthonormality,
    })
}

pub fn run_scenario(sc: &Scenario) -> Result<ExperimentReport> {
    sc.validate()?;
    let exact = exact_box_spectrum(&sc.domain, sc.num_eigs)?.values;
    let mut ns = sc.n_list.clone();
    ns.sort_unstable();
    ns.dedup();
    let rows = ns
        .iter()
        .map(|&n| run_resolution(sc, n, &exact))
        .collect::<Result<Vec<_>>>()?;
    let lambda1_errors: Vec<f64> = rows
        .iter()
        .map(|r| r.comparison.rows.first().map_or(f64::NAN, |c| c.abs_error))
        .collect();
    let rates = if rows.len() >= 2 {
        let h: Vec<f64> = rows.iter().map(|r| r.h).collect();
        Some(
            (0..rows.len() - 1)
                .map(|i| {
                    // undefined (NaN) when an error is zero or missing
                    convergence_rates(&h[i..i + 2], &lambda1_errors[i..i + 2])
                        .map_or(f64::NAN, |r| r[0])
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(ExperimentReport {
        scenario: sc.clone(),
        rows,
        lambda1_errors,
        rates,
    })
}
