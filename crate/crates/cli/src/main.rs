//! `mmq` — evaluate, sweep and verify the maximax minimax quotient.
//!
//! Exit status: 0 success, 2 malformed input, 3 invalid instance,
//! 4 lemma-check failure (sweep), 5 campaign failure (verify).

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mmq::instance::{InstanceError, InstanceFile};
use mmq::polytope::{validate_exploratory, validate_instance, Polytope, Segment};
use mmq::quotient::{argmax_direction, quotient};
use mmq::sweep::{analyze_profile, sweep_profile, PlaneEmbedding};
use mmq::verify::{naive_argmax, random_campaign, verify_all, CampaignConfig, Fault};
use mmq::Vector;

use crate::output::{event_records, print_json, write_json, write_profile_csv};

#[derive(Parser)]
#[command(name = "mmq", version, about = "Maximax minimax quotient over polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance JSON file
    #[arg(long)]
    instance: PathBuf,
    /// Accept X off a line through the origin (results are inconclusive)
    #[arg(long)]
    allow_noncollinear: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate r(d) with its witnesses
    Eval {
        #[command(flatten)]
        input: InstanceArgs,
        /// Direction as comma-separated coordinates; normalized before use
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
    },
    /// Sample r(β) around the plane of X and check the profile's structure
    Sweep {
        #[command(flatten)]
        input: InstanceArgs,
        /// Profile CSV to write
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples_per_arc: usize,
        /// Events JSON (default: <out>.events.json)
        #[arg(long)]
        events: Option<PathBuf>,
        /// Lemma report JSON (default: <out>.lemmas.json)
        #[arg(long)]
        report: Option<PathBuf>,
        /// Vector fixing the sweep plane above two dimensions
        #[arg(long, allow_hyphen_values = true)]
        plane_seed: Option<String>,
    },
    /// Maximize r over all directions
    Argmax {
        #[command(flatten)]
        input: InstanceArgs,
    },
    /// Run the verification campaigns on one instance or on random ones
    Verify {
        #[arg(long, conflicts_with_all = ["random", "seed"], required_unless_present = "random")]
        instance: Option<PathBuf>,
        /// Number of random instances
        #[arg(long, requires = "seed")]
        random: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Report JSON to write in addition to standard output
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 360)]
        directions: usize,
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        #[arg(long, default_value_t = 3600)]
        sweep_samples: usize,
        #[arg(long, default_value_t = 1e-3)]
        grid_step: f64,
        #[arg(long, value_enum, default_value_t = FaultArg::None, hide = true)]
        inject_fault: FaultArg,
    },
    /// Time the naive nested search against the analytic argmax
    Bench {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, default_value_t = 200)]
        naive_grid: usize,
        #[arg(long, default_value_t = 5)]
        runs: usize,
    },
    /// Write a built-in instance
    Example {
        name: String,
        /// Output file (default: <name>.json)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    None,
    DenominatorMax,
}

enum Failure {
    Input(String),
    Invalid(String),
    Lemma,
    Campaign(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Invalid(_) => 3,
            Failure::Lemma => 4,
            Failure::Campaign(_) => 5,
        }
    }
}

type Outcome = Result<(), Failure>;

fn io_failure(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// Reads, builds and validates an instance; prints the validation report
/// when it fails.
fn load(args: &InstanceArgs) -> Result<(Segment, Polytope), Failure> {
    let file = InstanceFile::read(&args.instance).map_err(|e| io_failure(&args.instance, e))?;
    let (x, y) = file.build_unchecked().map_err(|e| match e {
        InstanceError::Geometry(g) => Failure::Invalid(g.to_string()),
        other => io_failure(&args.instance, other),
    })?;
    let report = if args.allow_noncollinear {
        validate_exploratory(&x, &y)
    } else {
        validate_instance(&x, &y)
    };
    if !report.ok {
        print_json(&report);
        let names: Vec<&str> = report.violations.iter().map(|c| c.name.as_str()).collect();
        return Err(Failure::Invalid(format!("instance violates {}", names.join(", "))));
    }
    if report.inconclusive {
        eprintln!("warning: X is not collinear with the origin; results are inconclusive");
    }
    Ok((x, y))
}

fn parse_vector(text: &str, dim: usize, what: &str) -> Result<Vector, Failure> {
    let coords: Vec<f64> = text
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Input(format!("malformed {what} '{text}'")))?;
    if coords.len() != dim {
        return Err(Failure::Input(format!("{what} has {} coordinates, expected {dim}", coords.len())));
    }
    Vector::new(coords).map_err(|e| Failure::Input(format!("{what}: {e}")))
}

fn run_eval(input: &InstanceArgs, direction: &str) -> Outcome {
    let (x, y) = load(input)?;
    let d = parse_vector(direction, x.dim(), "direction")?;
    if d.norm() == 0.0 {
        return Err(Failure::Input("zero direction".into()));
    }
    let d = d.normalized().map_err(|_| Failure::Input("zero direction".into()))?;
    let q = quotient(&d, &x, &y).map_err(|e| Failure::Invalid(e.to_string()))?;
    print_json(&q);
    Ok(())
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(suffix);
    out.with_file_name(name)
}

#[derive(Serialize)]
struct SweepSummary {
    samples: usize,
    arcs: usize,
    events: usize,
    max_r: f64,
    v_pi: Vec<f64>,
    v_2pi: Vec<f64>,
    lemmas_pass: bool,
    profile: PathBuf,
    events_file: PathBuf,
    report_file: PathBuf,
}

fn run_sweep(
    input: &InstanceArgs,
    out: &Path,
    samples_per_arc: usize,
    events: Option<PathBuf>,
    report: Option<PathBuf>,
    plane_seed: Option<&str>,
) -> Outcome {
    let (x, y) = load(input)?;
    if samples_per_arc < 3 {
        return Err(Failure::Input("samples-per-arc must be at least 3".into()));
    }
    let seed = plane_seed.map(|s| parse_vector(s, x.dim(), "plane seed")).transpose()?;
    let plane = PlaneEmbedding::for_segment(&x, seed.as_ref()).map_err(|e| Failure::Invalid(e.to_string()))?;
    let profile = sweep_profile(&x, &y, plane, samples_per_arc).map_err(|e| Failure::Invalid(e.to_string()))?;
    let lemmas = analyze_profile(&profile);
    let events_file = events.unwrap_or_else(|| sibling(out, ".events.json"));
    let report_file = report.unwrap_or_else(|| sibling(out, ".lemmas.json"));
    write_profile_csv(out, &profile).map_err(|e| io_failure(out, e))?;
    write_json(&events_file, &event_records(&profile)).map_err(|e| io_failure(&events_file, e))?;
    write_json(&report_file, &lemmas).map_err(|e| io_failure(&report_file, e))?;
    print_json(&SweepSummary {
        samples: profile.samples.len(),
        arcs: profile.arcs.len(),
        events: profile.events.len(),
        max_r: profile.max_r(),
        v_pi: profile.v_pi_ambient().into_coords(),
        v_2pi: profile.v_2pi_ambient().into_coords(),
        lemmas_pass: lemmas.all_pass(),
        profile: out.to_path_buf(),
        events_file,
        report_file,
    });
    if lemmas.all_pass() {
        Ok(())
    } else {
        Err(Failure::Lemma)
    }
}

#[derive(Serialize)]
struct ArgmaxSummary {
    d_star: Vector,
    r_star: f64,
    r_plus: f64,
    r_minus: f64,
    tie: bool,
}

fn run_argmax(input: &InstanceArgs) -> Outcome {
    let (x, y) = load(input)?;
    let a = argmax_direction(&x, &y).map_err(|e| Failure::Invalid(e.to_string()))?;
    print_json(&ArgmaxSummary {
        d_star: a.d_star,
        r_star: a.r_star,
        r_plus: a.r_plus,
        r_minus: a.r_minus,
        tie: a.tie,
    });
    Ok(())
}

fn run_verify(
    instance: Option<PathBuf>,
    random: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    cfg: CampaignConfig,
) -> Outcome {
    let report = match (instance, random, seed) {
        (Some(path), _, _) => {
            let (x, y) = load(&InstanceArgs {
                instance: path,
                allow_noncollinear: false,
            })?;
            verify_all(&x, &y, &cfg).map_err(|e| Failure::Invalid(e.to_string()))?
        }
        (None, Some(trials), Some(seed)) => random_campaign(trials, seed, &cfg),
        _ => return Err(Failure::Input("verify needs --instance or --random with --seed".into())),
    };
    print_json(&report);
    if let Some(path) = &out {
        write_json(path, &report).map_err(|e| io_failure(path, e))?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Campaign(report.failures.len()))
    }
}

fn median(mut times: Vec<Duration>) -> Duration {
    times.sort();
    times[times.len() / 2]
}

#[derive(Serialize)]
struct BenchSide {
    seconds: f64,
    r_star: f64,
    d_star: Vector,
}

#[derive(Serialize)]
struct BenchReport {
    naive_grid: usize,
    runs: usize,
    naive: BenchSide,
    analytic: BenchSide,
    difference: f64,
    naive_bound: f64,
    within_bound: bool,
    speedup: f64,
}

fn run_bench(input: &InstanceArgs, naive_grid: usize, runs: usize) -> Outcome {
    let (x, y) = load(input)?;
    if x.dim() != 2 {
        return Err(Failure::Invalid("bench needs a 2D instance".into()));
    }
    if runs == 0 {
        return Err(Failure::Input("runs must be positive".into()));
    }
    let invalid = |e: mmq::Error| Failure::Invalid(e.to_string());
    let mut naive_times = Vec::new();
    let mut naive = None;
    for _ in 0..runs {
        let t = Instant::now();
        naive = Some(naive_argmax(&x, &y, naive_grid).map_err(invalid)?);
        naive_times.push(t.elapsed());
    }
    let mut analytic_times = Vec::new();
    let mut analytic = None;
    for _ in 0..runs {
        let t = Instant::now();
        analytic = Some(argmax_direction(&x, &y).map_err(invalid)?);
        analytic_times.push(t.elapsed());
    }
    let (naive, analytic) = (naive.expect("runs > 0"), analytic.expect("runs > 0"));
    let (tn, ta) = (median(naive_times), median(analytic_times));
    let difference = (naive.r_star - analytic.r_star).abs();
    print_json(&BenchReport {
        naive_grid,
        runs,
        naive: BenchSide {
            seconds: tn.as_secs_f64(),
            r_star: naive.r_star,
            d_star: naive.d_star,
        },
        analytic: BenchSide {
            seconds: ta.as_secs_f64(),
            r_star: analytic.r_star,
            d_star: analytic.d_star,
        },
        difference,
        naive_bound: naive.bound,
        within_bound: difference <= naive.bound,
        speedup: tn.as_secs_f64() / ta.as_secs_f64().max(1e-9),
    });
    Ok(())
}

fn run_example(name: &str, out: Option<PathBuf>) -> Outcome {
    let (x, y) = mmq::examples::by_name(name).ok_or_else(|| {
        Failure::Input(format!("unknown example '{name}' (known: {})", mmq::examples::NAMES.join(", ")))
    })?;
    let path = out.unwrap_or_else(|| PathBuf::from(format!("{name}.json")));
    let text = InstanceFile::from_geometry(&x, &y).to_json();
    std::fs::write(&path, text + "\n").map_err(|e| io_failure(&path, e))?;
    println!("{}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Eval { input, direction } => run_eval(&input, &direction),
        Command::Sweep {
            input,
            out,
            samples_per_arc,
            events,
            report,
            plane_seed,
        } => run_sweep(&input, &out, samples_per_arc, events, report, plane_seed.as_deref()),
        Command::Argmax { input } => run_argmax(&input),
        Command::Verify {
            instance,
            random,
            seed,
            out,
            directions,
            grid,
            sweep_samples,
            grid_step,
            inject_fault,
        } => {
            let cfg = CampaignConfig {
                directions,
                grid,
                sweep_samples,
                grid_step,
                fault: match inject_fault {
                    FaultArg::None => Fault::None,
                    FaultArg::DenominatorMax => Fault::DenominatorMax,
                },
            };
            run_verify(instance, random, seed, out, cfg)
        }
        Command::Bench {
            input,
            naive_grid,
            runs,
        } => run_bench(&input, naive_grid, runs),
        Command::Example { name, out } => run_example(&name, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Invalid(m) => eprintln!("invalid instance: {m}"),
                Failure::Lemma => eprintln!("lemma checks failed; see the report"),
                Failure::Campaign(n) => eprintln!("{n} campaign failure(s)"),
            }
            ExitCode::from(f.code())
        }
    }
}
