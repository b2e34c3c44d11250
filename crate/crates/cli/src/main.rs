//! `wfmaxwell`: mesh generation, Worsey-Farin refinement, assembly dumps,
//! eigenvalue runs and convergence tables.
//!
//! Exit codes: 0 success, 2 validation or input failure, 3 resource cap
//! exceeded, 1 I/O failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wf_maxwell::eigensolve::convergence_rates;
use wf_maxwell::experiments::config::{apply_setting, parse_domain, parse_list, read_scenario};
use wf_maxwell::experiments::{emit_tables, rates_table, run_scenario, spectrum_csv, summary_text, Scenario};
use wf_maxwell::lagrange::{assemble_curl_curl, assemble_mass, build_dof_map, reference_basis};
use wf_maxwell::mesh::build_box_mesh;
use wf_maxwell::mesh_io::{read_mesh, write_mesh};
use wf_maxwell::wf_refine::{validate_wf, worsey_farin_refine};
use wf_maxwell::Error;

#[derive(Parser)]
#[command(name = "wfmaxwell", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structured box mesh of n³ subcubes, six tets each.
    Mesh {
        #[arg(long)]
        n: usize,
        /// x0,x1,y0,y1,z0,z1
        #[arg(long, allow_hyphen_values = true)]
        domain: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Worsey-Farin refinement of a mesh file.
    Refine {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write the validation report (key: value lines) here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Dump the curl–curl and mass matrices (upper triangle, `i j value`).
    Assemble {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long = "out-k")]
        out_k: PathBuf,
        #[arg(long = "out-m")]
        out_m: PathBuf,
    },
    /// One resolution; prints the spectrum comparison CSV to stdout.
    Spectrum {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        opts: ScenarioArgs,
    },
    /// Scenario from a config file, with flag overrides; prints a summary and
    /// optionally writes the CSV tables.
    Experiment {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated list of resolutions.
        #[arg(long)]
        n: Option<String>,
        #[command(flatten)]
        opts: ScenarioArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Observed convergence rates ln(eᵢ/eᵢ₊₁)/ln(hᵢ/hᵢ₊₁).
    Rates {
        /// Comma-separated mesh sizes; `pi/N` is accepted.
        #[arg(long)]
        h: String,
        /// Comma-separated errors.
        #[arg(long)]
        err: String,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
    #[arg(long)]
    degree: Option<usize>,
    /// wf | none
    #[arg(long)]
    refine: Option<String>,
    #[arg(long = "num-eigs")]
    num_eigs: Option<usize>,
    #[arg(long = "zero-tol")]
    zero_tol: Option<String>,
    /// tangential | none
    #[arg(long)]
    bc: Option<String>,
    /// dense | shift-invert
    #[arg(long)]
    solver: Option<String>,
    #[arg(long = "dense-cap")]
    dense_cap: Option<usize>,
}

impl ScenarioArgs {
    fn apply(&self, sc: &mut Scenario) -> Result<(), Error> {
        let settings = [
            ("domain", self.domain.clone()),
            ("degree", self.degree.map(|v| v.to_string())),
            ("refine", self.refine.clone()),
            ("num_eigs", self.num_eigs.map(|v| v.to_string())),
            ("zero_tol", self.zero_tol.clone()),
            ("bc", self.bc.clone()),
            ("solver", self.solver.clone()),
            ("dense_cap", self.dense_cap.map(|v| v.to_string())),
        ];
        for (key, value) in settings {
            if let Some(v) = value {
                apply_setting(sc, key, &v)
                    .map_err(|e| Error::InvalidArgument(format!("--{}: {e}", key.replace('_', "-"))))?;
            }
        }
        Ok(())
    }
}

/// Parses a mesh size: a number, `pi`, or `pi/N`.
fn parse_h(token: &str) -> Result<f64, String> {
    let pi = std::f64::consts::PI;
    match token.split_once('/') {
        Some(("pi", d)) => d
            .parse::<f64>()
            .map(|d| pi / d)
            .map_err(|e| format!("bad mesh size `{token}`: {e}")),
        _ if token == "pi" => Ok(pi),
        _ => token.parse().map_err(|e| format!("bad mesh size `{token}`: {e}")),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Mesh { n, domain, out } => {
            let domain = parse_domain(&domain).map_err(Error::InvalidArgument)?;
            let mesh = build_box_mesh(domain, n)?;
            write_mesh(&mesh, &out)
        }
        Command::Refine { input, out, report } => {
            let mesh = read_mesh(&input)?;
            let wf = worsey_farin_refine(&mesh)?;
            let r = validate_wf(&wf);
            if let Some(path) = &report {
                std::fs::write(path, r.to_text()).map_err(|e| Error::io(path, e))?;
            }
            if !r.passed() {
                return Err(Error::Validation(format!(
                    "refined mesh failed validation:\n{}",
                    r.to_text()
                )));
            }
            write_mesh(&wf.fine, &out)
        }
        Command::Assemble {
            mesh,
            degree,
            out_k,
            out_m,
        } => {
            let mesh = read_mesh(&mesh)?;
            let basis = reference_basis(degree)?;
            let dofs = build_dof_map(&mesh, degree)?;
            assemble_curl_curl(&mesh, &dofs, &basis)?.write_coo(&out_k)?;
            assemble_mass(&mesh, &dofs, &basis)?.write_coo(&out_m)
        }
        Command::Spectrum { n, opts } => {
            let mut sc = Scenario {
                n_list: vec![n],
                ..Scenario::default()
            };
            opts.apply(&mut sc)?;
            let report = run_scenario(&sc)?;
            print!("{}", spectrum_csv(&report.rows[0]));
            Ok(())
        }
        Command::Experiment { config, n, opts, out } => {
            let mut sc = match &config {
                Some(path) => read_scenario(path)?,
                None => Scenario::default(),
            };
            if let Some(n) = n {
                apply_setting(&mut sc, "n", &n).map_err(|e| Error::InvalidArgument(format!("--n: {e}")))?;
            }
            opts.apply(&mut sc)?;
            let report = run_scenario(&sc)?;
            print!("{}", summary_text(&report));
            if let Some(dir) = out {
                for path in emit_tables(&report, &dir)? {
                    eprintln!("wrote {}", path.display());
                }
            }
            Ok(())
        }
        Command::Rates { h, err } => {
            let h: Vec<f64> = h
                .split(',')
                .map(|t| parse_h(t.trim()))
                .collect::<Result<_, _>>()
                .map_err(Error::InvalidArgument)?;
            let e: Vec<f64> = parse_list(&err).map_err(Error::InvalidArgument)?;
            let rates = convergence_rates(&h, &e)?;
            print!("{}", rates_table(&h, &e, Some(&rates)));
            Ok(())
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ProblemTooLarge { .. } => 3,
        Error::Io { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
