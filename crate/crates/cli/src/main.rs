//! `mrlog` — command-line front end.
//!
//! One command per process; each run reads its inputs, dispatches to the
//! library, and emits a single self-describing JSON report (to stdout, or to
//! `--out`). Reports are byte-identical across runs for identical
//! configuration, so they work as golden files; for that reason wall-clock
//! timing only appears in the `--pretty` human summary, never in the report.
//!
//! Exit status: 0 on success, 2 when the run completed but the checked
//! condition failed (a growth-detected verdict or a failed domination), and
//! 1 when the command could not run at all.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use mrlog::{
    mrcheck, separation, EntireFunctionModel, GridConfig, GridReport, IntervalQuery, LogProfile,
    PointDistribution, Verdict,
};

#[derive(Parser)]
#[command(
    name = "mrlog",
    version,
    about = "Logarithmic measures of zero sets and Malliavin-Rubel condition checks",
    after_help = "Exit status: 0 success, 1 error, 2 condition failed (growth detected / domination violated)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the JSON report to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a human summary (with timing) instead of JSON on stdout.
    #[arg(long)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic logarithms of a distribution over a dyadic radius grid.
    Chars {
        /// Distribution file.
        #[arg(long)]
        z: PathBuf,
        /// Smallest dyadic radius.
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        /// Number of dyadic levels.
        #[arg(long, default_value_t = 12)]
        levels: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Finite-truncation estimate of the upper density of a distribution.
    Density {
        /// Distribution file.
        #[arg(long)]
        z: PathBuf,
        /// Smallest sampling radius r_min.
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Angle-separation report of a distribution from the imaginary axis.
    Separation {
        /// Distribution file.
        #[arg(long)]
        z: PathBuf,
        /// Fraction of largest-modulus points used as the tail.
        #[arg(long, default_value_t = 0.25)]
        tail_fraction: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Malliavin-Rubel condition l_Z <= l_W + C over a dyadic grid.
    CheckMr {
        /// Distribution file for Z.
        #[arg(long)]
        z: PathBuf,
        /// Distribution file for W.
        #[arg(long)]
        w: PathBuf,
        /// Smallest dyadic radius.
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        /// Number of dyadic levels.
        #[arg(long, default_value_t = 12)]
        levels: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bounded-discrepancy check of J(r,R; ln|F|) against the
    /// characteristic logarithms of the zeros of F.
    Lemma {
        /// Model file.
        #[arg(long)]
        model: PathBuf,
        /// Smallest dyadic radius.
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        /// Number of dyadic levels.
        #[arg(long, default_value_t = 12)]
        levels: u32,
        /// Quadrature tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate ln|F(z)| at the points of a distribution file.
    ProductEval {
        /// Model file.
        #[arg(long)]
        model: PathBuf,
        /// Distribution file listing the evaluation points (multiplicities
        /// are ignored).
        #[arg(long)]
        z: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check |f(iy)| <= |g(iy)| on the imaginary axis.
    Dominate {
        /// Model files: first f, then g (exactly two).
        #[arg(long, num_args = 1, action = clap::ArgAction::Append, required = true)]
        model: Vec<PathBuf>,
        /// Largest sampled ordinate.
        #[arg(long, default_value_t = 50.0)]
        y_max: f64,
        /// Sample count per grid (log-spaced and uniform).
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Split Z at ratio d, assemble the witness f = f_a * g and verify
    /// domination against g = even product over W.
    Witness {
        /// Distribution file for Z.
        #[arg(long)]
        z: PathBuf,
        /// Distribution file for W (must include the separated part of Z).
        #[arg(long)]
        w: PathBuf,
        /// Separation ratio for the head/tail split, in (0, 1].
        #[arg(long, default_value_t = 0.5)]
        d: f64,
        /// Probe bound for the scaling constant and the domination sweep.
        #[arg(long, default_value_t = 50.0)]
        y_max: f64,
        /// Sample count for the domination sweep.
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate a standard point-distribution family.
    Gen {
        /// Family: arith, mirrored-arith, perturbed-lattice, sector.
        #[arg(long)]
        family: String,
        /// Lattice step (arith, mirrored-arith, perturbed-lattice).
        #[arg(long, default_value_t = 1.0)]
        step: f64,
        /// Number of points.
        #[arg(long)]
        count: u64,
        /// Ray angle in radians (arith, mirrored-arith).
        #[arg(long, default_value_t = 0.0)]
        angle: f64,
        /// Uniform jitter amplitude (perturbed-lattice).
        #[arg(long, default_value_t = 0.0)]
        jitter: f64,
        /// Half-angle of the sector around the positive real axis, in
        /// (0, pi/2) (sector).
        #[arg(long, default_value_t = 0.5)]
        half_angle: f64,
        /// Points per unit radius (sector).
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        /// RNG seed for the randomized families.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

// ---------------------------------------------------------------------------
// IO helpers
// ---------------------------------------------------------------------------

fn read_distribution(path: &Path) -> Result<PointDistribution, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
}

fn read_model(path: &Path) -> Result<EntireFunctionModel, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
}

#[derive(Serialize)]
struct Report<C: Serialize, R: Serialize> {
    command: &'static str,
    config: C,
    result: R,
}

/// Writes the report and/or the pretty summary. The machine report carries
/// no timing so identical configurations produce identical bytes.
fn emit<C: Serialize, R: Serialize>(
    report: &Report<C, R>,
    output: &OutputArgs,
    summary: String,
    started: Instant,
) -> Result<(), String> {
    let json = serde_json::to_string_pretty(report).map_err(|e| e.to_string())? + "\n";
    if let Some(path) = &output.out {
        fs::write(path, &json).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if output.pretty {
        print!("{summary}");
        println!("completed in {} ms", started.elapsed().as_millis());
    } else if output.out.is_none() {
        print!("{json}");
    }
    Ok(())
}

fn verdict_code(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::GrowthDetected => 2,
        _ => 0,
    }
}

fn grid_summary(name: &str, rep: &GridReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{name}: {} grid cells", rep.grid.len());
    let _ = writeln!(s, "  sup value    : {:.6e}", rep.sup_value);
    let _ = writeln!(s, "  growth slope : {:.6e}", rep.growth_slope);
    let _ = writeln!(s, "  fit residual : {:.6e}", rep.fit_residual);
    let _ = writeln!(s, "  verdict      : {:?}", rep.verdict);
    s
}

// ---------------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------------

fn run(command: Command) -> Result<u8, String> {
    let started = Instant::now();
    match command {
        Command::Chars { z, r0, levels, output } => {
            let dist = read_distribution(&z)?;
            let profile = LogProfile::build(&dist);

            #[derive(Serialize)]
            struct Octave {
                r: f64,
                #[serde(rename = "R")]
                big_r: f64,
                right: f64,
                left: f64,
                submeasure: f64,
            }
            #[derive(Serialize)]
            struct CharsResult {
                radii: Vec<f64>,
                right_cumulative: Vec<f64>,
                left_cumulative: Vec<f64>,
                octaves: Vec<Octave>,
            }
            #[derive(Serialize)]
            struct Config {
                z: String,
                r0: f64,
                levels: u32,
            }

            if !(r0.is_finite() && r0 > 0.0) {
                return Err(format!("--r0 must be positive, got {r0}"));
            }
            let radii: Vec<f64> =
                (0..=levels).map(|k| r0 * f64::powi(2.0, k as i32)).collect();
            let right_cumulative: Vec<f64> =
                radii.iter().map(|&r| profile.right_cumulative(r)).collect();
            let left_cumulative: Vec<f64> =
                radii.iter().map(|&r| profile.left_cumulative(r)).collect();
            let octaves: Vec<Octave> = (0..levels)
                .map(|k| {
                    let q = IntervalQuery::new(radii[k as usize], radii[k as usize + 1])
                        .map_err(|e| e.to_string())?;
                    Ok(Octave {
                        r: q.inner(),
                        big_r: q.outer(),
                        right: profile.l_right(q),
                        left: profile.l_left(q),
                        submeasure: profile.l_submeasure(q),
                    })
                })
                .collect::<Result<_, String>>()?;

            let mut summary = format!(
                "chars: {} points, {} distinct moduli\n",
                dist.total_count(),
                profile.len()
            );
            let _ = writeln!(
                summary,
                "  l^rh({:.3e}) = {:.6}, l^lh = {:.6}",
                radii[levels as usize],
                right_cumulative[levels as usize],
                left_cumulative[levels as usize]
            );
            let report = Report {
                command: "chars",
                config: Config { z: z.display().to_string(), r0, levels },
                result: CharsResult { radii, right_cumulative, left_cumulative, octaves },
            };
            emit(&report, &output, summary, started)?;
            Ok(0)
        }

        Command::Density { z, r0, output } => {
            let dist = read_distribution(&z)?;
            let estimate = dist.upper_density_estimate(r0).map_err(|e| e.to_string())?;

            #[derive(Serialize)]
            struct Config {
                z: String,
                r0: f64,
            }
            #[derive(Serialize)]
            struct DensityResult {
                estimate: f64,
                max_modulus: f64,
                total_count: u64,
            }
            let result = DensityResult {
                estimate,
                max_modulus: dist.max_modulus().unwrap_or(0.0),
                total_count: dist.total_count(),
            };
            let summary = format!("density: estimate {estimate:.6} (truncation surrogate)\n");
            let report = Report {
                command: "density",
                config: Config { z: z.display().to_string(), r0 },
                result,
            };
            emit(&report, &output, summary, started)?;
            Ok(0)
        }

        Command::Separation { z, tail_fraction, output } => {
            let dist = read_distribution(&z)?;
            let rep =
                separation::asymptotic_separation(&dist, tail_fraction).map_err(|e| e.to_string())?;

            #[derive(Serialize)]
            struct Config {
                z: String,
                tail_fraction: f64,
            }
            let mut summary = format!(
                "separation: d_strict {:.6}, tail liminf {:.6}, tail |Im|/|z| sup {:.6}\n",
                rep.d_strict, rep.tail_liminf_estimate, rep.tail_limsup_im_estimate
            );
            let _ = writeln!(
                summary,
                "  consistent {} / decaying {} / {} violating points",
                rep.consistent,
                rep.decaying,
                rep.violating_points.len()
            );
            let report = Report {
                command: "separation",
                config: Config { z: z.display().to_string(), tail_fraction },
                result: rep,
            };
            emit(&report, &output, summary, started)?;
            Ok(0)
        }

        Command::CheckMr { z, w, r0, levels, output } => {
            let dist_z = read_distribution(&z)?;
            let dist_w = read_distribution(&w)?;
            let cfg = GridConfig::new(r0, levels);
            let rep = mrcheck::mr_condition_report(&dist_z, &dist_w, &cfg)
                .map_err(|e| e.to_string())?;

            #[derive(Serialize)]
            struct Config {
                z: String,
                w: String,
                r0: f64,
                levels: u32,
            }
            let summary = grid_summary("check-mr", &rep);
            let code = verdict_code(rep.verdict);
            let report = Report {
                command: "check-mr",
                config: Config {
                    z: z.display().to_string(),
                    w: w.display().to_string(),
                    r0,
                    levels,
                },
                result: rep,
            };
            emit(&report, &output, summary, started)?;
            Ok(code)
        }

        Command::Lemma { model, r0, levels, tol, output } => {
            let m = read_model(&model)?;
            let mut cfg = GridConfig::new(r0, levels);
            cfg.tol = tol;
            let rep = mrcheck::lemma_discrepancy_report(&m, &cfg).map_err(|e| e.to_string())?;

            #[derive(Serialize)]
            struct Config {
                model: String,
                r0: f64,
                levels: u32,
                tol: f64,
            }
            let summary = grid_summary("lemma", &rep);
            let code = verdict_code(rep.verdict);
            let report = Report {
                command: "lemma",
                config: Config { model: model.display().to_string(), r0, levels, tol },
                result: rep,
            };
            emit(&report, &output, summary, started)?;
            Ok(code)
        }

        Command::ProductEval { model, z, output } => {
            let m = read_model(&model)?;
            let pts = read_distribution(&z)?;

            #[derive(Serialize)]
            struct Eval {
                re: f64,
                im: f64,
                /// `null` encodes a zero of the model (ln|F| = -inf).
                log_modulus: f64,
            }
            #[derive(Serialize)]
            struct Config {
                model: String,
                z: String,
            }
            let evaluations: Vec<Eval> = pts
                .entries()
                .iter()
                .map(|e| Eval {
                    re: e.point.re,
                    im: e.point.im,
                    log_modulus: m.log_modulus(e.point),
                })
                .collect();
            let mut summary = format!("product-eval: {} points\n", evaluations.len());
            for e in evaluations.iter().take(8) {
                let _ = writeln!(summary, "  ln|F({}{:+}i)| = {}", e.re, e.im, e.log_modulus);
            }
            if evaluations.len() > 8 {
                let _ = writeln!(summary, "  ... ({} more)", evaluations.len() - 8);
            }
            let report = Report {
                command: "product-eval",
                config: Config {
                    model: model.display().to_string(),
                    z: z.display().to_string(),
                },
                result: evaluations,
            };
            emit(&report, &output, summary, started)?;
            Ok(0)
        }

        Command::Dominate { model, y_max, samples, output } => {
            if model.len() != 2 {
                return Err(format!(
                    "--model must be given exactly twice (f then g), got {}",
                    model.len()
                ));
            }
            let f = read_model(&model[0])?;
            let g = read_model(&model[1])?;
            let rep = mrcheck::domination_check(&f, &g, y_max, samples).map_err(|e| e.to_string())?;

            #[derive(Serialize)]
            struct Config {
                f: String,
                g: String,
                y_max: f64,
                samples: usize,
            }
            let summary = format!(
                "dominate: holds {} (worst margin {:.6e} at y = {:.6})\n",
                rep.holds, rep.worst_margin, rep.worst_y
            );
            let code = if rep.holds { 0 } else { 2 };
            let report = Report {
                command: "dominate",
                config: Config {
                    f: model[0].display().to_string(),
                    g: model[1].display().to_string(),
                    y_max,
                    samples,
                },
                result: rep,
            };
            emit(&report, &output, summary, started)?;
            Ok(code)
        }

        Command::Witness { z, w, d, y_max, samples, output } => {
            let dist_z = read_distribution(&z)?;
            let dist_w = read_distribution(&w)?;
            let (f, g) =
                mrcheck::dominated_tail_witness(&dist_z, &dist_w, d, y_max).map_err(|e| e.to_string())?;
            let domination =
                mrcheck::domination_check(&f, &g, y_max, samples).map_err(|e| e.to_string())?;
            let vanishes_on_z = f.vanishes_on(&dist_z);

            #[derive(Serialize)]
            struct Config {
                z: String,
                w: String,
                d: f64,
                y_max: f64,
                samples: usize,
            }
            #[derive(Serialize)]
            struct WitnessResult {
                witness: EntireFunctionModel,
                vanishes_on_z: bool,
                domination: mrlog::DominationReport,
            }
            let ok = domination.holds && vanishes_on_z;
            let summary = format!(
                "witness: {} factors; vanishes on Z: {vanishes_on_z}; domination holds: {} (worst margin {:.6e})\n",
                f.factors().len(),
                domination.holds,
                domination.worst_margin
            );
            let report = Report {
                command: "witness",
                config: Config {
                    z: z.display().to_string(),
                    w: w.display().to_string(),
                    d,
                    y_max,
                    samples,
                },
                result: WitnessResult { witness: f, vanishes_on_z, domination },
            };
            emit(&report, &output, summary, started)?;
            Ok(if ok { 0 } else { 2 })
        }

        Command::Gen { family, step, count, angle, jitter, half_angle, density, seed, output } => {
            let dist =
                generate_family(&family, step, count, angle, jitter, half_angle, density, seed)?;
            // The generated distribution document IS the output, unwrapped,
            // so it feeds straight into the other commands.
            let json = serde_json::to_string_pretty(&dist).map_err(|e| e.to_string())? + "\n";
            if let Some(path) = &output.out {
                fs::write(path, &json).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            if output.pretty {
                println!(
                    "gen: {family} with {} points, max modulus {:.6}",
                    dist.total_count(),
                    dist.max_modulus().unwrap_or(0.0)
                );
                println!("completed in {} ms", started.elapsed().as_millis());
            } else if output.out.is_none() {
                print!("{json}");
            }
            Ok(0)
        }
    }
}

/// Materializes one of the standard families. Deterministic for a fixed
/// seed.
#[allow(clippy::too_many_arguments)]
fn generate_family(
    family: &str,
    step: f64,
    count: u64,
    angle: f64,
    jitter: f64,
    half_angle: f64,
    density: f64,
    seed: u64,
) -> Result<PointDistribution, String> {
    if count == 0 {
        return Err("--count must be at least 1".into());
    }
    match family {
        "arith" | "mirrored-arith" => {
            if !(step.is_finite() && step > 0.0) {
                return Err(format!("--step must be positive, got {step}"));
            }
            let ray = PointDistribution::new(
                (1..=count).map(|k| (Complex64::from_polar(k as f64 * step, angle), 1)),
            );
            if family == "arith" {
                Ok(ray)
            } else {
                Ok(ray.union(&ray.reflect()))
            }
        }
        "perturbed-lattice" => {
            if !(step.is_finite() && step > 0.0) {
                return Err(format!("--step must be positive, got {step}"));
            }
            if !(jitter.is_finite() && jitter >= 0.0) {
                return Err(format!("--jitter must be nonnegative, got {jitter}"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(PointDistribution::new((1..=count).map(|k| {
                let dx: f64 = rng.random_range(-1.0..1.0);
                let dy: f64 = rng.random_range(-1.0..1.0);
                (Complex64::new(k as f64 * step + jitter * dx, jitter * dy), 1)
            })))
        }
        "sector" => {
            if !(half_angle > 0.0 && half_angle < std::f64::consts::FRAC_PI_2) {
                return Err(format!("--half-angle must lie in (0, pi/2), got {half_angle}"));
            }
            if !(density.is_finite() && density > 0.0) {
                return Err(format!("--density must be positive, got {density}"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(PointDistribution::new((1..=count).map(|k| {
                let theta: f64 = rng.random_range(-half_angle..half_angle);
                (Complex64::from_polar(k as f64 / density, theta), 1)
            })))
        }
        other => Err(format!(
            "unknown family '{other}' (expected arith, mirrored-arith, perturbed-lattice, sector)"
        )),
    }
}
