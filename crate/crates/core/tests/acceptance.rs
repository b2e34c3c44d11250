//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! quantities. Run with `cargo test -p wf-maxwell --test acceptance`.
//!
//! Tolerances and time budgets are pinned here; a criterion fails if either
//! its checks or its time budget fail. The process exits non-zero when any
//! criterion fails.

use std::time::{Duration, Instant};

use rand::{rngs::StdRng, Rng, SeedableRng};

use wf_maxwell::eigensolve::{
    convergence_rates, exact_box_spectrum, solve_generalized, solve_interval, IntervalOptions,
    SolveOptions,
};
use wf_maxwell::experiments::{
    discretize, emit_tables, run_scenario, RefineMode, Scenario, SolverKind,
};
use wf_maxwell::hcurl_bc::BcMode;
use wf_maxwell::lagrange::{
    assemble_curl_curl, assemble_mass, build_dof_map, quadrature, reference_basis,
    SymmetricSparseMatrix,
};
use wf_maxwell::mesh::{build_box_mesh, tet_quality};
use wf_maxwell::wf_refine::{face_split_point, incenter, worsey_farin_refine};
use wf_maxwell::{Aabb, Mesh, Point3};

struct Outcome {
    checks: Vec<(String, bool)>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { checks: Vec::new() }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }
}

fn run(id: usize, title: &str, budget: Duration, f: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut out = Outcome::new();
    f(&mut out);
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let ok = in_time && out.checks.iter().all(|(_, ok)| *ok);
    println!(
        "criterion {id}: {} — {title} ({:.2} s, budget {} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    for (what, ok) in &out.checks {
        println!("    [{}] {what}", if *ok { "ok" } else { "FAILED" });
    }
    if !in_time {
        println!("    [FAILED] time budget exceeded");
    }
    ok
}

fn ref_tet() -> [Point3; 4] {
    [Point3::ZERO, Point3::unit(0), Point3::unit(1), Point3::unit(2)]
}

fn plane_distance(p: Point3, a: Point3, b: Point3, c: Point3) -> f64 {
    let n = (b - a).cross(c - a);
    (p - a).dot(n).abs() / n.norm()
}

fn random_well_shaped_tet(rng: &mut StdRng) -> [Point3; 4] {
    let c = 1.0 / (2.0 * 2f64.sqrt());
    let regular = [
        Point3::new(-0.5, 0.0, -c),
        Point3::new(0.5, 0.0, -c),
        Point3::new(0.0, 0.5, c),
        Point3::new(0.0, -0.5, c),
    ];
    let scale = rng.gen_range(0.5..2.0);
    let shift = Point3::new(
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-3.0..3.0),
    );
    regular.map(|p| {
        let jitter = Point3::new(
            rng.gen_range(-0.15..0.15),
            rng.gen_range(-0.15..0.15),
            rng.gen_range(-0.15..0.15),
        );
        (p + jitter) * scale + shift
    })
}

fn criterion_1(o: &mut Outcome) {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let mut worst: f64 = 0.0;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..100 {
        let p = random_well_shaped_tet(&mut rng);
        worst_ratio = worst_ratio.max(tet_quality(&p).unwrap().ratio);
        let z = incenter(&p).unwrap();
        let d: Vec<f64> = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]]
            .iter()
            .map(|f| plane_distance(z, p[f[0]], p[f[1]], p[f[2]]))
            .collect();
        let spread = d.iter().cloned().fold(f64::MIN, f64::max)
            - d.iter().cloned().fold(f64::MAX, f64::min);
        worst = worst.max(spread);
    }
    o.check(
        format!(
            "incenter equidistance on 100 random tets (max h/ρ {worst_ratio:.2}): spread {worst:.2e} ≤ 1e-12"
        ),
        worst <= 1e-12,
    );

    let c = 1.0 / (3.0 + 3f64.sqrt());
    let z = incenter(&ref_tet()).unwrap();
    let err = (z - Point3::new(c, c, c)).norm();
    o.check(
        format!("reference incenter vs (1,1,1)/(3+√3): {err:.2e} ≤ 1e-12"),
        err <= 1e-12,
    );

    let mut vol_err: f64 = 0.0;
    let mut counts_ok = true;
    let mut macro_tets = 0;
    for mesh in [
        build_box_mesh(Aabb::pi_cube(), 2).unwrap(),
        build_box_mesh(Aabb::from_bounds([-1.0, 2.0, 0.0, 1.0, 0.5, 3.0]).unwrap(), 3).unwrap(),
    ] {
        let wf = worsey_farin_refine(&mesh).unwrap();
        for (t, children) in wf.children_of.iter().enumerate() {
            macro_tets += 1;
            let vm = mesh.tet_volume(t);
            let vc: f64 = children.iter().map(|&c| wf.fine.tet_volume(c)).sum();
            vol_err = vol_err.max((vc - vm).abs() / vm);
            let distinct: std::collections::BTreeSet<_> = children.iter().collect();
            counts_ok &= distinct.len() == 12;
        }
        counts_ok &= wf.fine.num_tets() == 12 * mesh.num_tets();
    }
    o.check(
        format!("WF volume conservation over {macro_tets} macro tets: {vol_err:.2e} ≤ 1e-12 relative"),
        vol_err <= 1e-12,
    );
    o.check("12 distinct children on every macro tet", counts_ok);

    let up = ref_tet();
    let mut down = up;
    down[3] = -Point3::unit(2);
    let m = face_split_point(
        [up[0], up[1], up[2]],
        &[incenter(&up).unwrap(), incenter(&down).unwrap()],
    )
    .unwrap();
    let err = (m - Point3::new(c, c, 0.0)).norm();
    o.check(format!("mirror-pair face point vs (c,c,0): {err:.2e} ≤ 1e-12"), err <= 1e-12);
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Rank of a symmetric positive semidefinite matrix by diagonally pivoted
/// Cholesky: stop when the largest remaining Schur-complement diagonal falls
/// below `rel_tol` times the largest initial diagonal.
fn psd_rank(a: &SymmetricSparseMatrix, rel_tol: f64) -> usize {
    let n = a.dim();
    let mut rows: Vec<Vec<f64>> = vec![vec![0.0; n]; n];
    for (i, j, v) in a.iter_upper() {
        rows[i][j] = v;
        rows[j][i] = v;
    }
    let d0 = (0..n).map(|i| rows[i][i]).fold(0.0f64, f64::max);
    let mut active: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    while !active.is_empty() {
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|a, b| rows[*a.1][*a.1].total_cmp(&rows[*b.1][*b.1]))
            .unwrap();
        let piv = rows[p][p];
        if piv.is_nan() || piv <= rel_tol * d0 {
            break;
        }
        rank += 1;
        active.swap_remove(pos);
        let prow = std::mem::take(&mut rows[p]);
        for &i in &active {
            let f = prow[i] / piv;
            if f != 0.0 {
                let row = &mut rows[i];
                for &j in &active {
                    row[j] -= f * prow[j];
                }
            }
        }
    }
    rank
}

fn criterion_2(o: &mut Outcome) {
    type Potential = (&'static str, fn(Point3) -> [f64; 3], usize);
    let grads: [Potential; 6] = [
        ("x", |_| [1.0, 0.0, 0.0], 1),
        ("y", |_| [0.0, 1.0, 0.0], 1),
        ("z", |_| [0.0, 0.0, 1.0], 1),
        ("x²", |p| [2.0 * p.x, 0.0, 0.0], 1),
        ("xy", |p| [p.y, p.x, 0.0], 1),
        ("xyz", |p| [p.y * p.z, p.x * p.z, p.x * p.y], 2),
    ];
    for n in [1, 2] {
        for k in [1, 2] {
            for refine in [RefineMode::None, RefineMode::WorseyFarin] {
                let coarse = build_box_mesh(Aabb::pi_cube(), n).unwrap();
                let mesh: Mesh = match refine {
                    RefineMode::None => coarse,
                    RefineMode::WorseyFarin => worsey_farin_refine(&coarse).unwrap().fine,
                };
                let dofs = build_dof_map(&mesh, k).unwrap();
                let kmat = assemble_curl_curl(&mesh, &dofs, &reference_basis(k).unwrap()).unwrap();
                let kn = kmat.frobenius_norm();
                let mut worst: f64 = 0.0;
                for (_, g, _) in grads.iter().filter(|g| g.2 <= k) {
                    let v = dofs.interpolate(g);
                    worst = worst.max(norm(&kmat.mul_vec(&v)) / (kn * norm(&v)));
                }
                let names: Vec<&str> = grads.iter().filter(|g| g.2 <= k).map(|g| g.0).collect();
                o.check(
                    format!(
                        "n={n} k={k} refine={refine}: max ‖K·I∇p‖/(‖K‖‖I∇p‖) over {{{}}} = {worst:.2e} ≤ 1e-12",
                        names.join(", ")
                    ),
                    worst <= 1e-12,
                );

                let d = discretize(&Aabb::pi_cube(), n, k, refine, BcMode::Tangential).unwrap();
                let computed = solve_generalized(&d.k_red, &d.m_red, &SolveOptions::default()).unwrap();
                let deficiency = d.k_red.dim() - psd_rank(&d.k_red, 1e-10);
                o.check(
                    format!(
                        "n={n} k={k} refine={refine}: zero_count {} vs pivoted-Cholesky rank deficiency {deficiency} (dim {})",
                        computed.zero_count,
                        d.k_red.dim()
                    ),
                    computed.zero_count == deficiency,
                );
            }
        }
    }
}

fn scenario(n: Vec<usize>, degree: usize, refine: RefineMode) -> Scenario {
    Scenario {
        n_list: n,
        degree,
        refine,
        ..Scenario::default()
    }
}

fn criterion_3(o: &mut Outcome) {
    for refine in [RefineMode::None, RefineMode::WorseyFarin] {
        let report = run_scenario(&scenario(vec![2], 1, refine)).unwrap();
        let c = &report.rows[0].comparison;
        o.check(
            format!(
                "k=1 refine={refine} n=2: window count in [1.5, 2.5] = {} (≠ 3 required), spurious = {}",
                c.window_count, c.spurious
            ),
            c.window_count != 3,
        );
    }
}

fn criterion_4(o: &mut Outcome) {
    let report = run_scenario(&scenario(vec![2], 2, RefineMode::WorseyFarin)).unwrap();
    let row = &report.rows[0];
    let s2 = &row.comparison;
    let nonzero: Vec<f64> = s2.rows.iter().map(|r| r.lambda_h).collect();
    let in_window = |lo: f64, hi: f64| nonzero.iter().filter(|&&v| v >= lo && v <= hi).count();
    let (w1, w2) = (s2.window_count, in_window(2.5, 4.0));
    let e2 = report.lambda1_errors[0];
    let head: Vec<String> = nonzero.iter().take(6).map(|v| format!("{v:.4}")).collect();
    o.check(
        format!(
            "k=2 WF n=2: {w1} nonzero eigenvalues in [1.5, 2.5] (3 required); first: {}",
            head.join(", ")
        ),
        w1 == 3,
    );
    o.check(
        format!("k=2 WF n=2: {w2} nonzero eigenvalues in [2.5, 4] (2 required)"),
        w2 == 2,
    );
    o.check(format!("k=2 WF n=2: |λ₁ − 2| = {e2:.3e} ≤ 0.1"), e2 <= 0.1);

    // Eigenvalues only at n = 3: the dense pencil has dimension 8571.
    let d3 = discretize(&Aabb::pi_cube(), 3, 2, RefineMode::WorseyFarin, BcMode::Tangential).unwrap();
    let s3 = solve_generalized(&d3.k_red, &d3.m_red, &SolveOptions::default()).unwrap();
    drop(d3);
    let e3 = (s3.nonzero()[0] - 2.0).abs();
    let rate = (e2 / e3).ln() / 1.5f64.ln();
    o.check(
        format!("k=2 WF n=3: e₃ = {e3:.3e} < e₂ = {e2:.3e}"),
        e3 < e2,
    );
    o.check(format!("k=2 WF n=2→3: observed rate {rate:.2} ≥ 2.0"), rate >= 2.0);
}

/// Not an acceptance criterion: the same counts on finer meshes with the
/// sparse shift-invert solver, printed for context.
fn finer_mesh_context() {
    let start = Instant::now();
    println!("context (not gating): k=2 WF on finer meshes, shift-invert solver");
    let mut prev: Option<(f64, f64)> = None;
    for n in [3, 4] {
        let d = discretize(&Aabb::pi_cube(), n, 2, RefineMode::WorseyFarin, BcMode::Tangential)
            .unwrap();
        let opts = IntervalOptions {
            want_vectors: false,
            ..IntervalOptions::default()
        };
        let s = solve_interval(&d.k_red, &d.m_red, 0.5, 4.0, &opts).unwrap();
        let h = std::f64::consts::PI / n as f64;
        let e = (s.values[0] - 2.0).abs();
        let rate = prev.map(|(hp, ep)| (ep / e).ln() / (hp / h).ln());
        println!(
            "    n={n} (dim {}): {} in [1.5, 2.5], {} in [2.5, 4], |λ₁ − 2| = {e:.3e}{}",
            d.k_red.dim(),
            s.count_in(1.5, 2.5),
            s.count_in(2.5, 4.0),
            rate.map_or(String::new(), |r| format!(", rate from previous n = {r:.2}"))
        );
        prev = Some((h, e));
    }
    println!("    ({:.1} s)", start.elapsed().as_secs_f64());
}

fn criterion_5(o: &mut Outcome) {
    let pi = std::f64::consts::PI;
    let h: Vec<f64> = (5..=9).map(|n| pi / n as f64).collect();
    let e = [1.95e-4, 1.21e-4, 7.40e-5, 4.64e-5, 3.03e-5];
    let rates = convergence_rates(&h, &e).unwrap();
    let want = [2.62, 3.19, 3.48, 3.62];
    let ok = rates.len() == 4 && rates.iter().zip(want).all(|(r, w)| (r - w).abs() <= 0.005);
    let shown: Vec<String> = rates.iter().map(|r| format!("{r:.4}")).collect();
    o.check(
        format!("rates [{}] vs [2.62, 3.19, 3.48, 3.62] ± 0.005", shown.join(", ")),
        ok,
    );
    let exact = exact_box_spectrum(&Aabb::pi_cube(), 13).unwrap();
    let want = [2.0, 2.0, 2.0, 3.0, 3.0, 5.0, 5.0, 5.0, 5.0, 5.0, 5.0, 6.0, 6.0];
    o.check(
        format!("exact_box_spectrum(13) = {:?}", exact.values),
        exact.values == want,
    );
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn criterion_6(o: &mut Outcome) {
    let mut worst: f64 = 0.0;
    for k in 1..=4 {
        let d = 2 * k + 2;
        let rule = quadrature(d).unwrap();
        for a in 0..=d {
            for b in 0..=d - a {
                for c in 0..=d - a - b {
                    let got = rule.integrate(|x, y, z| x.powi(a as i32) * y.powi(b as i32) * z.powi(c as i32));
                    let want = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
                    worst = worst.max((got - want).abs() / want);
                }
            }
        }
    }
    o.check(
        format!("quadrature monomials up to degree 2k+2 (k = 1..4): max rel error {worst:.2e} ≤ 1e-14"),
        worst <= 1e-14,
    );

    let domain = Aabb::from_bounds([0.0, 2.0, -1.0, 1.0, 0.5, 1.5]).unwrap();
    let vol = domain.volume();
    let [x0, x1, ..] = domain.bounds();
    let int_x2 = (x1.powi(3) - x0.powi(3)) / 3.0 * domain.extent(1) * domain.extent(2);
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        for refine in [RefineMode::None, RefineMode::WorseyFarin] {
            let coarse = build_box_mesh(domain, 2).unwrap();
            let mesh = match refine {
                RefineMode::None => coarse,
                RefineMode::WorseyFarin => worsey_farin_refine(&coarse).unwrap().fine,
            };
            let dofs = build_dof_map(&mesh, k).unwrap();
            let m = assemble_mass(&mesh, &dofs, &reference_basis(k).unwrap()).unwrap();
            let c = dofs.interpolate(|_| [1.0, -2.0, 0.5]);
            let l = dofs.interpolate(|p| [p.x, 0.0, 0.0]);
            worst = worst.max((m.quad_form(&c) - 5.25 * vol).abs() / (5.25 * vol));
            worst = worst.max((m.quad_form(&l) - int_x2).abs() / int_x2);
        }
    }
    o.check(
        format!("mass forms for constant and linear fields (k = 1..3, with/without WF): max rel error {worst:.2e} ≤ 1e-12"),
        worst <= 1e-12,
    );

    let mut worst: f64 = 0.0;
    for (degree, refine) in [(1, RefineMode::WorseyFarin), (2, RefineMode::None)] {
        let report = run_scenario(&scenario(vec![2], degree, refine)).unwrap();
        worst = worst.max(report.rows[0].m_orthonormality);
    }
    o.check(
        format!("M-orthonormality of returned eigenvectors: {worst:.2e} ≤ 1e-8"),
        worst <= 1e-8,
    );

    let sc = Scenario {
        n_list: vec![1, 2],
        degree: 1,
        ..Scenario::default()
    };
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let files: Vec<Vec<(String, Vec<u8>)>> = dirs
        .iter()
        .map(|dir| {
            let report = run_scenario(&sc).unwrap();
            emit_tables(&report, dir.path())
                .unwrap()
                .into_iter()
                .map(|p| {
                    let name = p.file_name().unwrap().to_string_lossy().into_owned();
                    (name, std::fs::read(&p).unwrap())
                })
                .collect()
        })
        .collect();
    o.check(
        format!("report determinism: {} files byte-identical across two runs", files[0].len()),
        files[0] == files[1],
    );
    // The shift-invert path is deterministic too.
    let si = Scenario {
        solver: SolverKind::ShiftInvert,
        ..sc
    };
    let a = wf_maxwell::experiments::summary_text(&run_scenario(&si).unwrap());
    let b = wf_maxwell::experiments::summary_text(&run_scenario(&si).unwrap());
    o.check("shift-invert report determinism", a == b);
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "geometry oracles", secs(1), criterion_1),
        run(2, "kernel structure", secs(30), criterion_2),
        run(3, "spurious spectra for linear elements", secs(120), criterion_3),
        run(4, "convergent spectrum for quadratic elements on WF", secs(600), criterion_4),
        run(5, "reference-number replays", secs(1), criterion_5),
        run(6, "numerics hygiene", secs(60), criterion_6),
    ];
    finer_mesh_context();
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
