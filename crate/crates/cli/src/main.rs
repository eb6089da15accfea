//! `hartogs`: command-line access to the Cartan–Hartogs numerics library.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! red flag (cross-validation disagreement, ill-conditioned roots,
//! residual above tolerance, errored sweep rows), 3 domain-membership
//! violation in the inputs.

mod parse;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use hartogs_core::domains::{DomainPoint, DomainSpec, MatrixPoint};
use hartogs_core::kernel::{coeffs_recurrence, KernelYI};
use hartogs_core::luqikeng::{is_lu_qikeng, scan};
use hartogs_core::metrics::{
    bergman_metric, equivalence_ratio, lu_constant_ball_sampled, y_lambda_metric,
};
use hartogs_core::monge_ampere::{
    homogeneity_residual, ode_residual, solve_ivp, special_solution, MAParams,
};
use hartogs_core::representative::{
    centre_defect, rep_coordinates, BallOracle, DiskOracle, HalfPlaneOracle, KernelOracle,
    RepBase, YIOracle,
};
use hartogs_core::{sample, C64, Error};

use report::{complex_list, csv_field, fmt_complex, fmt_f64, render_json};

#[derive(Parser)]
#[command(
    name = "hartogs",
    version,
    about = "Bergman kernels, zero-freeness decisions, canonical metrics, representative \
             coordinates and the Kähler–Einstein ODE on Cartan–Hartogs domains",
    after_help = "Reports are deterministic: floats carry 17 significant digits, JSON keys \
                  are sorted, and sampling is seeded (flag --seed, else HARTOGS_SEED, else 42)."
)]
struct Cli {
    /// Write the report to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Seed for sampling subcommands (default 42; HARTOGS_SEED overrides)
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Kernel coefficients b_0..b_{n+1} of the fibered ball domain
    /// |W|^{2K} + |z|^2 < 1, as JSON {"K", "b", "n"}
    Coeffs {
        /// Base ball dimension n
        #[arg(long)]
        n: usize,
        /// Hartogs exponent K > 0
        #[arg(long = "K")]
        exponent: f64,
    },

    /// Evaluate the Bergman kernel K((W,Z); (zeta,xi)) of the fibered
    /// ball domain at a pair of interior points
    KernelEval {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        exponent: f64,
        /// Fiber coordinate W (complex scalar, e.g. 0.2+0.1i)
        #[arg(long)]
        w: String,
        /// Base coordinates Z (comma-separated complex, length n)
        #[arg(long)]
        z: String,
        /// Fiber coordinate of the second point
        #[arg(long)]
        zeta: String,
        /// Base coordinates of the second point
        #[arg(long)]
        xi: String,
    },

    /// Zero-freeness verdict for the kernel at one (n, K): companion-matrix
    /// roots of the disk reduction, cross-validated by a winding count
    Luqikeng {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        exponent: f64,
    },

    /// Sweep a K grid at fixed n; CSV `n,K,verdict,num_roots_in_disk,roots_json`
    LuqikengScan {
        #[arg(long)]
        n: usize,
        /// Explicit comma-separated K values (may be empty)
        #[arg(long, conflicts_with = "logspace")]
        grid: Option<String>,
        /// Log-spaced grid `min,max,count`
        #[arg(long)]
        logspace: Option<String>,
    },

    /// Membership and boundary-gap report for a point of any domain family
    Membership {
        /// Domain spec as inline JSON or @file (families: cartan, ch, hua, gch)
        #[arg(long)]
        spec: String,
        /// Fiber vector(s), one flag per block, comma-separated complex entries
        #[arg(long = "w")]
        fibers: Vec<String>,
        /// Base coordinates (row-major free coordinates; default: the origin)
        #[arg(long)]
        z: Option<String>,
    },

    /// Sampled two-sided ratio between the Bergman metric and the
    /// comparison metric induced by G_lambda on the fibered ball domain
    MetricSample {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        exponent: f64,
        /// Exponent of Y in the comparison potential (default: fiber dimension)
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },

    /// Lu constant of the unit ball in C^M (supremum of Caratheodory-to-
    /// Bergman length ratios over seeded samples)
    LuConstant {
        #[arg(long = "M")]
        dim: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },

    /// Integrate the radial Monge-Ampère ODE from the degenerate point;
    /// CSV `X,G,residual`
    MaSolve {
        #[arg(long = "N")]
        fiber_dim: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        exponent: f64,
        #[arg(long, default_value_t = 0.9)]
        x_max: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },

    /// Verify the closed-form solution available at K = (mn+1)/(m+n):
    /// prints the maximum relative residual, exits 2 above tolerance
    MaCheckSpecial {
        #[arg(long = "N")]
        fiber_dim: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },

    /// Largest deviation of the kernel-derived radial profile from the
    /// ODE over X in [0, 0.9]; near zero exactly for the ball (K = 1)
    Homogeneity {
        #[arg(long)]
        n: usize,
        #[arg(long = "K")]
        exponent: f64,
        #[arg(long = "N", default_value_t = 1)]
        fiber_dim: usize,
    },

    /// Representative coordinates of a point with respect to a base point
    RepCoords {
        /// Kernel oracle: disk | ball | halfplane | y1
        #[arg(long)]
        domain: String,
        /// Ball dimension (domain = ball)
        #[arg(long)]
        dim: Option<usize>,
        /// Base ball dimension (domain = y1)
        #[arg(long)]
        n: Option<usize>,
        /// Hartogs exponent (domain = y1)
        #[arg(long = "K")]
        exponent: Option<f64>,
        /// Base point t0 (comma-separated complex)
        #[arg(long)]
        base: String,
        /// Point to map (comma-separated complex)
        #[arg(long)]
        point: String,
    },

    /// Scan a polar grid of base points for representative centres on the
    /// disk; CSV `t,is_centre,defect`
    RepCentreScan {
        #[arg(long, default_value = "disk")]
        domain: String,
        #[arg(long, default_value_t = 0.8)]
        radius: f64,
        #[arg(long, default_value_t = 4)]
        rings: usize,
        #[arg(long, default_value_t = 8)]
        angles: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<String> for CliError {
    fn from(s: String) -> Self {
        CliError::Usage(s)
    }
}

fn exit_code_for(e: &CliError) -> u8 {
    match e {
        CliError::Usage(_) => 1,
        CliError::Core(err) => match err {
            Error::MethodDisagreement { .. }
            | Error::IllConditionedRoots { .. }
            | Error::RootOnContour(_)
            | Error::BoundaryIndeterminate
            | Error::NonHermitianDeterminant { .. } => 2,
            Error::OutsideDomain(_) | Error::BranchFailure | Error::InvalidFiberInvariant(_) => 3,
            _ => 1,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version print and succeed; real parse errors exit 1
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = cli
        .seed
        .or_else(|| std::env::var("HARTOGS_SEED").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(sample::DEFAULT_SEED);
    match run(&cli.cmd, seed) {
        Ok(out) => {
            if let Some(path) = &cli.output {
                if let Err(e) = fs::write(path, out.text.as_bytes()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Core(err) => eprintln!("error: {err}"),
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(cmd: &Cmd, seed: u64) -> Result<Output, CliError> {
    match cmd {
        Cmd::Coeffs { n, exponent } => {
            require(*n >= 1, "n must be >= 1")?;
            require(*exponent > 0.0, "K must be positive")?;
            let table = coeffs_recurrence::<f64>(*n, *exponent);
            let v = json!({
                "n": table.base_dim(),
                "K": table.exponent(),
                "b": table.b(),
            });
            Ok(Output::ok(render_json(&v)))
        }

        Cmd::KernelEval { n, exponent, w, z, zeta, xi } => {
            require(*n >= 1, "n must be >= 1")?;
            require(*exponent > 0.0, "K must be positive")?;
            let w = parse::parse_complex(w)?;
            let z = parse::parse_complex_vec(z)?;
            let zeta = parse::parse_complex(zeta)?;
            let xi = parse::parse_complex_vec(xi)?;
            let kernel = KernelYI::new(*n, *exponent);
            let value = kernel.eval(w, &z, zeta, &xi)?;
            let v = json!({
                "n": n,
                "K": exponent,
                "value": [value.re, value.im],
            });
            Ok(Output::ok(render_json(&v)))
        }

        Cmd::Luqikeng { n, exponent } => {
            require(*n >= 1, "n must be >= 1")?;
            require(*exponent > 0.0, "K must be positive")?;
            let report = is_lu_qikeng(*n, *exponent)?;
            let v = json!({
                "n": report.base_dim,
                "K": report.exponent,
                "verdict": report.verdict.label(),
                "num_roots_in_disk": report.roots_in_disk.len(),
                "roots_in_disk": complex_list(&report.roots_in_disk),
                "all_roots": complex_list(&report.all_roots),
                "oracle_count": report.oracle_count,
            });
            Ok(Output::ok(render_json(&v)))
        }

        Cmd::LuqikengScan { n, grid, logspace } => {
            require(*n >= 1, "n must be >= 1")?;
            let ks: Vec<f64> = match (grid, logspace) {
                (Some(g), None) => parse::parse_f64_vec(g)?,
                (None, Some(spec)) => {
                    let parts = parse::parse_f64_vec(spec)?;
                    require(parts.len() == 3, "--logspace wants min,max,count")?;
                    let count = parts[2] as usize;
                    require(count >= 2 && parts[0] > 0.0 && parts[1] > parts[0],
                        "--logspace wants 0 < min < max and count >= 2")?;
                    (0..count)
                        .map(|i| {
                            let t = i as f64 / (count - 1) as f64;
                            10f64.powf(parts[0].log10() + t * (parts[1].log10() - parts[0].log10()))
                        })
                        .collect()
                }
                (None, None) => return Err("one of --grid or --logspace is required".to_string().into()),
                _ => unreachable!("clap conflicts_with"),
            };
            let mut text = String::from("n,K,verdict,num_roots_in_disk,roots_json\n");
            let mut code = 0u8;
            for row in scan(*n, &ks) {
                match &row.outcome {
                    Ok(rep) => {
                        let roots = render_roots_json(&rep.roots_in_disk);
                        text.push_str(&format!(
                            "{},{},{},{},{}\n",
                            row.base_dim,
                            fmt_f64(row.exponent),
                            rep.verdict.label(),
                            rep.roots_in_disk.len(),
                            csv_field(&roots)
                        ));
                    }
                    Err(e) => {
                        code = 2;
                        text.push_str(&format!(
                            "{},{},{},,{}\n",
                            row.base_dim,
                            fmt_f64(row.exponent),
                            csv_field(&format!("error: {e}")),
                            csv_field("[]")
                        ));
                    }
                }
            }
            Ok(Output { text, code })
        }

        Cmd::Membership { spec, fibers, z } => {
            let raw = if let Some(path) = spec.strip_prefix('@') {
                fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?
            } else {
                spec.clone()
            };
            let spec: DomainSpec<f64> =
                serde_json::from_str(&raw).map_err(|e| format!("bad spec JSON: {e}"))?;
            let base_spec = *spec.base_spec();
            let zp = match z {
                Some(s) => MatrixPoint::from_coords(&base_spec, &parse::parse_complex_vec(s)?)?,
                None => MatrixPoint::zero(&base_spec),
            };
            let fiber_vecs: Vec<Vec<C64>> = fibers
                .iter()
                .map(|s| parse::parse_complex_vec(s))
                .collect::<Result<_, _>>()?;
            let expected = spec.fiber_dims();
            require(
                fiber_vecs.len() == expected.len(),
                &format!("spec wants {} fiber vector(s), got {}", expected.len(), fiber_vecs.len()),
            )?;
            let point = DomainPoint { fibers: fiber_vecs, base: zp };
            let member = spec.contains(&point)?;
            let gap = spec.boundary_gap(&point)?;
            let v = json!({
                "spec": serde_json::to_value(&spec).expect("spec serializes"),
                "member": member,
                "boundary_gap": gap,
            });
            Ok(Output::ok(render_json(&v)))
        }

        Cmd::MetricSample { n, exponent, lambda, samples } => {
            require(*n >= 1, "n must be >= 1")?;
            require(*exponent > 0.0, "K must be positive")?;
            require(*samples >= 1, "need at least one sample")?;
            let kernel = KernelYI::new(*n, *exponent);
            let spec = kernel.ch_spec();
            let lambda = lambda.unwrap_or(spec.fiber_dim as f64);
            let a = |p: &[C64]| Ok(bergman_metric(&kernel, p)?.form);
            let b = |p: &[C64]| Ok(y_lambda_metric(p, lambda, &spec)?.form);
            let report = equivalence_ratio(&a, &b, &spec, *samples, seed)?;
            let v = json!({
                "spec": serde_json::to_value(DomainSpec::CartanHartogs(spec)).expect("spec"),
                "lambda": lambda,
                "seed": seed,
                "min_ratio": report.min_ratio,
                "max_ratio": report.max_ratio,
                "samples": report.sample_count,
            });
            Ok(Output::ok(render_json(&v)))
        }

        Cmd::LuConstant { dim, samples } => {
            require(*dim >= 1, "M must be >= 1")?;
            let value = lu_constant_ball_sampled::<f64>(*dim, *samples, seed);
            let v = json!({
                "M": dim,
                "samples": samples,
                "seed": seed,
                "value": value,
            });
            Ok(Output::ok(render_json(&v)))
        }

        Cmd::MaSolve { fiber_dim, m, n, exponent, x_max, tol } => {
            let params = MAParams::new(*fiber_dim, *m, *n, *exponent)?;
            let trace = solve_ivp(&params, *x_max, *tol)?;
            let residuals = trace.node_residuals()?;
            let mut text = String::from("X,G,residual\n");
            for ((x, g), r) in trace.grid().iter().zip(trace.g_values()).zip(&residuals) {
                text.push_str(&format!("{},{},{}\n", fmt_f64(*x), fmt_f64(*g), fmt_f64(*r)));
            }
            Ok(Output::ok(text))
        }

        Cmd::MaCheckSpecial { fiber_dim, m, n, tol } => {
            let mut params = MAParams::new(*fiber_dim, *m, *n, 1.0)?;
            params.exponent = params.special_exponent();
            let sol = special_solution(&params)?;
            let mut worst = 0.0f64;
            for j in 0..=95 {
                let x = 0.01 * j as f64;
                let state = sol.state(x);
                let r = (ode_residual(&state, &params)?).abs() / state.g;
                if r > worst {
                    worst = r;
                }
            }
            let text = format!("max_relative_residual = {}\n", fmt_f64(worst));
            Ok(Output { text, code: if worst <= *tol { 0 } else { 2 } })
        }

        Cmd::Homogeneity { n, exponent, fiber_dim } => {
            require(*n >= 1, "n must be >= 1")?;
            require(*exponent > 0.0, "K must be positive")?;
            let r = homogeneity_residual::<f64>(*n, *exponent, *fiber_dim)?;
            Ok(Output::ok(format!("{}\n", fmt_f64(r))))
        }

        Cmd::RepCoords { domain, dim, n, exponent, base, point } => {
            let t0 = parse::parse_complex_vec(base)?;
            let z = parse::parse_complex_vec(point)?;
            let oracle: Box<dyn KernelOracle<f64>> = match domain.as_str() {
                "disk" => Box::new(DiskOracle),
                "halfplane" => Box::new(HalfPlaneOracle),
                "ball" => Box::new(BallOracle {
                    dim: dim.ok_or_else(|| "ball oracle needs --dim".to_string())?,
                }),
                "y1" => Box::new(YIOracle::new(
                    n.ok_or_else(|| "y1 oracle needs --n".to_string())?,
                    exponent.ok_or_else(|| "y1 oracle needs --K".to_string())?,
                )),
                other => return Err(format!("unknown domain {other:?}").into()),
            };
            let rep_base = RepBase::at(oracle.as_ref(), &t0)?;
            let image = rep_coordinates(oracle.as_ref(), &rep_base, &z)?;
            let v = json!({
                "domain": domain,
                "base": complex_list(&t0),
                "point": complex_list(&z),
                "image": complex_list(&image),
            });
            Ok(Output::ok(render_json(&v)))
        }

        Cmd::RepCentreScan { domain, radius, rings, angles, tol } => {
            require(domain == "disk", "centre scan supports --domain disk")?;
            require(*radius > 0.0 && *radius < 1.0, "radius must lie in (0, 1)")?;
            let oracle = DiskOracle;
            // fixed witness points for the z-independence test
            let zs: Vec<Vec<C64>> = (0..8)
                .map(|i| {
                    let th = 2.0 * std::f64::consts::PI * i as f64 / 8.0;
                    vec![C64::from_polar(0.55, th)]
                })
                .collect();
            let mut grid = vec![C64::new(0.0, 0.0)];
            for ring in 1..=*rings {
                let r = radius * ring as f64 / *rings as f64;
                for a in 0..*angles {
                    let th = 2.0 * std::f64::consts::PI * a as f64 / *angles as f64;
                    grid.push(C64::from_polar(r, th));
                }
            }
            let mut text = String::from("t,is_centre,defect\n");
            for t in grid {
                let defect = centre_defect(&oracle, &[t], &zs)?;
                text.push_str(&format!(
                    "{},{},{}\n",
                    fmt_complex(t),
                    defect < *tol,
                    fmt_f64(defect)
                ));
            }
            Ok(Output::ok(text))
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg.to_string()))
    }
}

fn render_roots_json(roots: &[C64]) -> String {
    let v = complex_list(roots);
    let mut out = String::new();
    // reuse the deterministic float format, then strip the newline
    out.push_str(render_json(&v).trim_end());
    out
}

