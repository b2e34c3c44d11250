//! Eigenvalues of the Maxwell pencil on (0,π)³ inside an interval, using the
//! sparse shift-invert solver.
//!
//! Usage: `cargo run --release --example interval_spectrum -- N DEGREE [wf|none] [LO HI]`

use std::time::Instant;

use wf_maxwell::eigensolve::{solve_interval, IntervalOptions};
use wf_maxwell::experiments::{discretize, RefineMode};
use wf_maxwell::hcurl_bc::BcMode;
use wf_maxwell::Aabb;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let n: usize = arg(0, "3").parse()?;
    let degree: usize = arg(1, "2").parse()?;
    let refine: RefineMode = arg(2, "wf").parse()?;
    let lo: f64 = arg(3, "0.5").parse()?;
    let hi: f64 = arg(4, "7").parse()?;

    let t = Instant::now();
    let d = discretize(&Aabb::pi_cube(), n, degree, refine, BcMode::Tangential)?;
    println!("reduced dimension {} (assembled in {:.2?})", d.k_red.dim(), t.elapsed());
    let s = solve_interval(&d.k_red, &d.m_red, lo, hi, &IntervalOptions::default())?;
    println!("{} eigenvalues in [{lo}, {hi}] after {:.2?}:", s.values.len(), t.elapsed());
    for v in &s.values {
        println!("  {v:.10}");
    }
    Ok(())
}
