//! Command-line front end over the agreetensor library.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage
//! errors, 3 on I/O or numeric errors. Every failure prints a one-line
//! diagnostic on stderr. All subcommands are deterministic given the same
//! inputs and seeds.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use agreetensor::agreement::{
    default_gamma_grid, pairwise_kappas, sweep_pmix, sweep_pqi, sweep_to_csv, PMIX_SWEEP_COORDS,
    PQI_SWEEP_COORDS,
};
use agreetensor::estimation::{DEFAULT_EM_TOL, DEFAULT_IPF_TOL, DEFAULT_MAX_ITER};
use agreetensor::invariants::{
    catalog, fiber_dimension, first_nonvanishing_homogeneous, generate_mixn_invariants,
    generate_qin_invariants, write_polynomials, SparsePolynomial,
};
use agreetensor::models::{params_from_json, sample_params, SampleOptions};
use agreetensor::tensor::{read_tensor_text, write_tensor_text};
use agreetensor::{
    boundary_counterexample, em_fit, ipf_fit, BoundaryDirection, CountTensor, Error, Family,
    ModelParams, ProbabilityTensor, Rat, Result, Scalar,
};

#[derive(Parser)]
#[command(
    name = "agreetensor",
    version,
    about = "Exact tensor models of three-rater agreement: materialization, kappa statistics, \
             polynomial invariants, sweeps, and fitting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a parameter file into a probability tensor
    Materialize {
        /// Parameter JSON file
        #[arg(long)]
        params: PathBuf,
        /// Output tensor text file
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the three pairwise kappa statistics of a tensor
    Kappa {
        /// Tensor text file (entries may be fractions or decimals)
        #[arg(long)]
        tensor: PathBuf,
    },
    /// Evaluate a kappa map over the default parameter grid, as CSV
    Sweep {
        /// pqi (agreement-weight cube) or pmix (weight simplex)
        #[arg(long)]
        family: String,
        /// Number of categories
        #[arg(long)]
        n: usize,
        /// Parameter JSON file supplying the marginal vectors a, b, c
        /// (pqi only; any gamma fields in the file are ignored)
        #[arg(long)]
        marginals: Option<PathBuf>,
        /// Output CSV file
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a family's invariants to a file
    Invariants {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Run the combinatorial generator (qI and mix families) instead of
        /// returning the fixed catalog
        #[arg(long)]
        generate: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that invariants vanish exactly on seeded random model points
    Verify {
        /// A family name, or `all`
        #[arg(long)]
        family: String,
        /// Number of categories; when omitted, checks run at n = 2 and 3
        #[arg(long)]
        n: Option<usize>,
        /// Seeded sample points per check
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
    /// Count linearly independent invariants of one degree
    FiberDim {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Fit a model to observed counts (IPF for toric families, EM for mixtures)
    Fit {
        #[arg(long)]
        family: String,
        /// Count tensor text file (integer entries)
        #[arg(long)]
        counts: PathBuf,
        /// Output JSON file (parameters plus fit metadata)
        #[arg(long)]
        out: PathBuf,
        /// RNG seed for EM restarts
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Convergence tolerance; defaults to 1e-10 (IPF) or 1e-8 (EM)
        #[arg(long)]
        tol: Option<f64>,
        /// Iteration cap
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Print a tensor lying in one diagonal-agreement family but not the
    /// other, with the certificate that proves it
    Counterexample {
        /// mix-not-in-qi or qi-not-in-mix
        #[arg(long)]
        direction: String,
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("agreetensor: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(failures) => {
            eprintln!("agreetensor: {failures} verification check(s) failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("agreetensor: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Usage errors exit 2; everything else that reaches main is an I/O or
/// numeric failure and exits 3.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedFamily(_) | Error::UnsupportedN(_) | Error::InvalidParams(_) => 2,
        _ => 3,
    }
}

/// AGREETENSOR_THREADS caps rayon parallelism; 0 or unset means automatic.
fn init_threads() -> std::result::Result<(), String> {
    let Some(raw) = std::env::var_os("AGREETENSOR_THREADS") else {
        return Ok(());
    };
    let raw = raw.to_string_lossy();
    let k: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("AGREETENSOR_THREADS must be a non-negative integer, got {raw:?}"))?;
    if k > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }
    Ok(())
}

/// Returns the number of failed verification checks (0 outside `verify` and
/// `counterexample`).
fn run(command: Command) -> Result<usize> {
    match command {
        Command::Materialize { params, out } => {
            let text = std::fs::read_to_string(&params)?;
            let point = params_from_json::<Rat>(&text)?;
            let tensor = point.materialize()?;
            std::fs::write(&out, write_tensor_text(tensor.as_tensor()))?;
            println!(
                "wrote {} tensor (n={}) to {}",
                point.family(),
                point.n(),
                out.display()
            );
            Ok(0)
        }
        Command::Kappa { tensor } => {
            let text = std::fs::read_to_string(&tensor)?;
            let t = read_tensor_text::<Rat>(&text)?;
            let p = ProbabilityTensor::new(t)?;
            let ks = pairwise_kappas(&p)?;
            for (name, v) in [
                ("kappa12", &ks.kappa12),
                ("kappa13", &ks.kappa13),
                ("kappa23", &ks.kappa23),
            ] {
                println!("{name} = {} ({:.10})", v.format_number(), Scalar::to_f64(v));
            }
            Ok(0)
        }
        Command::Sweep {
            family,
            n,
            marginals,
            out,
        } => {
            let fam: Family = family.parse()?;
            let (coords, records): (&[&str], _) = match fam {
                Family::PairQI => {
                    let grid = default_gamma_grid();
                    let records = match &marginals {
                        None => sweep_pqi(n, None, &grid)?,
                        Some(path) => {
                            let text = std::fs::read_to_string(path)?;
                            let point = params_from_json::<Rat>(&text)?;
                            let (a, b, c) = marginal_vectors(&point);
                            sweep_pqi(n, Some((a, b, c)), &grid)?
                        }
                    };
                    (&PQI_SWEEP_COORDS, records)
                }
                Family::PairMix => {
                    if marginals.is_some() {
                        return Err(Error::InvalidParams(
                            "--marginals does not apply to the pmix sweep; its kappa map does \
                             not depend on the marginals"
                                .into(),
                        ));
                    }
                    (&PMIX_SWEEP_COORDS, sweep_pmix(n)?)
                }
                other => {
                    return Err(Error::UnsupportedFamily(format!(
                        "{other}: sweep covers pqi and pmix"
                    )))
                }
            };
            std::fs::write(&out, sweep_to_csv(coords, &records))?;
            println!("wrote {} records to {}", records.len(), out.display());
            Ok(0)
        }
        Command::Invariants {
            family,
            n,
            generate,
            out,
        } => {
            let fam: Family = family.parse()?;
            let polys = if generate {
                match fam {
                    Family::HomQI => generate_qin_invariants(n)?,
                    Family::HomMix => generate_mixn_invariants(n)?,
                    other => {
                        return Err(Error::UnsupportedFamily(format!(
                            "{other}: --generate covers qI and mix"
                        )))
                    }
                }
            } else {
                catalog(fam, n)?
            };
            std::fs::write(&out, write_polynomials(&polys))?;
            println!("wrote {} polynomials to {}", polys.len(), out.display());
            Ok(0)
        }
        Command::Verify { family, n, seeds } => verify_cmd(&family, n, seeds),
        Command::FiberDim { family, n, degree } => {
            let fam: Family = family.parse()?;
            println!("{}", fiber_dimension(fam, n, degree)?);
            Ok(0)
        }
        Command::Fit {
            family,
            counts,
            out,
            seed,
            tol,
            max_iter,
        } => {
            let fam: Family = family.parse()?;
            let text = std::fs::read_to_string(&counts)?;
            let observed = CountTensor::from_text(&text)?;
            let result = if fam.is_toric() {
                ipf_fit(&observed, fam, tol.unwrap_or(DEFAULT_IPF_TOL), max_iter)?
            } else {
                em_fit(
                    &observed,
                    fam,
                    tol.unwrap_or(DEFAULT_EM_TOL),
                    max_iter,
                    seed,
                )?
            };
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            std::fs::write(&out, result.to_json())?;
            println!(
                "{fam} fit: loglik {:.6}, {} iteration(s), converged: {}; wrote {}",
                result.loglik,
                result.iterations,
                result.converged,
                out.display()
            );
            Ok(0)
        }
        Command::Counterexample { direction, n } => {
            let dir: BoundaryDirection = direction.parse().map_err(|_| {
                Error::InvalidParams(format!(
                    "unknown direction {direction:?}; use mix-not-in-qi or qi-not-in-mix"
                ))
            })?;
            let (point, report) = boundary_counterexample(dir, n)?;
            print!("{}", write_tensor_text(point.as_tensor()));
            print!("{}", report.to_text());
            if report.verify(point.as_tensor()) {
                Ok(0)
            } else {
                Ok(1)
            }
        }
    }
}

fn marginal_vectors<T>(params: &ModelParams<T>) -> (&[T], &[T], &[T]) {
    match params {
        ModelParams::QI { a, b, c, .. }
        | ModelParams::Mix { a, b, c, .. }
        | ModelParams::HomQI { a, b, c, .. }
        | ModelParams::HomMix { a, b, c, .. }
        | ModelParams::PairQI { a, b, c, .. }
        | ModelParams::PairMix { a, b, c, .. } => (a, b, c),
    }
}

/// One verification check: a list of polynomials that must vanish on seeded
/// points of a family.
struct Check {
    label: String,
    family: Family,
    n: usize,
    polys: Vec<SparsePolynomial>,
}

/// Builds the check list for `verify`. Explicit family+n requests propagate
/// errors; broad requests (--family all, or no --n) skip combinations that
/// have no catalog.
fn collect_checks(family: &str, n: Option<usize>, explicit: bool) -> Result<Vec<Check>> {
    let families: Vec<Family> = if family == "all" {
        Family::ALL.to_vec()
    } else {
        vec![family.parse()?]
    };
    let ns: Vec<usize> = match n {
        Some(v) => vec![v],
        None => vec![2, 3],
    };
    let mut checks = Vec::new();
    for &fam in &families {
        for &nn in &ns {
            match catalog(fam, nn) {
                Ok(polys) => checks.push(Check {
                    label: format!("{fam} n={nn} catalog ({} polynomials)", polys.len()),
                    family: fam,
                    n: nn,
                    polys,
                }),
                Err(Error::UnsupportedFamily(_)) if !explicit => {}
                Err(e) => return Err(e),
            }
            if matches!(fam, Family::HomQI | Family::HomMix) {
                let polys = match fam {
                    Family::HomQI => generate_qin_invariants(nn)?,
                    _ => generate_mixn_invariants(nn)?,
                };
                checks.push(Check {
                    label: format!("{fam} n={nn} generated ({} polynomials)", polys.len()),
                    family: fam,
                    n: nn,
                    polys,
                });
            }
        }
    }
    Ok(checks)
}

fn verify_cmd(family: &str, n: Option<usize>, seeds: u64) -> Result<usize> {
    let explicit = family != "all" && n.is_some();
    let checks = collect_checks(family, n, explicit)?;
    if checks.is_empty() {
        return Err(Error::InvalidParams(format!(
            "no checks exist for family {family} at the requested n"
        )));
    }
    let opts = SampleOptions::default();
    let mut failures = 0usize;
    for check in &checks {
        let mut violation = None;
        for seed in 0..seeds {
            let point = sample_params(check.family, check.n, seed, &opts)?.materialize()?;
            if let Some(poly) = first_nonvanishing_homogeneous(&check.polys, point.as_tensor())? {
                violation = Some((seed, poly.to_string()));
                break;
            }
        }
        match violation {
            None if check.polys.is_empty() => {
                println!("ok   - {}: empty list, nothing to violate", check.label)
            }
            None => println!("ok   - {}: vanishes on {} seeded points", check.label, seeds),
            Some((seed, poly)) => {
                println!("FAIL - {}: seed {} violates {}", check.label, seed, poly);
                failures += 1;
            }
        }
    }
    println!("{}/{} checks passed", checks.len() - failures, checks.len());
    Ok(failures)
}
