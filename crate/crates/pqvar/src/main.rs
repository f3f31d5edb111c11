use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use pqvar::config::{load_groups_path, load_model_path};
use pqvar::error::{Error, Result};
use pqvar::singularity::CyclicSingularityType;
use pqvar::{classify, report};

#[derive(Parser)]
#[command(
    name = "pqvar",
    version,
    about = "Exact invariants of product-quotient varieties",
    after_help = "Exit codes: 0 success, 2 usage or configuration error, \
                  3 validation error, 4 internal invariant violation."
)]
struct Cli {
    /// Emit the machine-readable JSON view instead of the table view
    #[arg(long, global = true)]
    json: bool,
    /// Print wall-clock timing to stderr
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stalk ideal of a cyclic quotient singularity: negative rays,
    /// minimal monomial basis, stabilization exponent
    Ideal {
        /// Singularity type as comma-separated integers m,a1,a2[,a3]
        #[arg(long)]
        sing: String,
        /// Pluricanonical degree of the stalk
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Run an operation on a product-quotient model configuration
    Model {
        /// Path to the model configuration (TOML)
        config: PathBuf,
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Enumerate admissible branching data; with a group list, also decide
    /// which tuples the groups realize
    Classify {
        /// Upper bound for the genus of every factor curve
        #[arg(long)]
        gmax: u64,
        /// Restrict every factor to exactly this many branch points
        #[arg(long)]
        r: Option<usize>,
        /// Path to a group list (TOML) to join against the tuples
        #[arg(long)]
        groups: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ModelAction {
    /// Hodge invariants, numerical Calabi-Yau test, self-intersections
    Invariants,
    /// Singular locus by canonical type and by stabilizer orbit
    SingularLocus,
    /// Invariant monomial plurigenus bounds for a range of degrees
    Plurigenus {
        /// Degree or inclusive range, e.g. 2 or 1..10
        #[arg(long)]
        d: String,
    },
    /// Calabi-Yau verdict from the plurigenus counts up to a degree
    Verdict {
        /// Highest degree to test
        #[arg(long)]
        dmax: u32,
    },
    /// Canonical volume, minimality, and the invariants that feed them
    SurfaceReport {
        /// Also verify the identity (P3 - P2)/2 = volume
        #[arg(long)]
        check_p3: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("PQ_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
    let start = Instant::now();
    let timings = cli.timings;
    let code = match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e);
            e.exit_code()
        }
    };
    if timings {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ideal { sing, k } => {
            let t = parse_singularity(&sing)?;
            if k == 0 {
                return Err(Error::usage("--k must be at least 1"));
            }
            let r = report::ideal_report(&t, k)?;
            emit(cli.json, &r, report::render_ideal(&r))
        }
        Command::Model { config, action } => {
            let (model, exactness) = load_model_path(&config)?;
            match action {
                ModelAction::Invariants => {
                    let r = report::invariants_report(&model)?;
                    emit(cli.json, &r, report::render_invariants(&r))
                }
                ModelAction::SingularLocus => {
                    let r = report::locus_report(&model)?;
                    emit(cli.json, &r, report::render_locus(&r))
                }
                ModelAction::Plurigenus { d } => {
                    let (from, to) = parse_degree_range(&d)?;
                    let r = report::plurigenus_series_report(
                        &model, &exactness, from, to,
                    )?;
                    emit(cli.json, &r, report::render_plurigenus(&r))
                }
                ModelAction::Verdict { dmax } => {
                    let r = report::verdict_report(&model, &exactness, dmax)?;
                    emit(cli.json, &r, report::render_verdict(&r))
                }
                ModelAction::SurfaceReport { check_p3 } => {
                    let r = report::surface_report(&model, check_p3)?;
                    emit(cli.json, &r, report::render_surface(&r))
                }
            }
        }
        Command::Classify { gmax, r, groups } => {
            let tuples = classify::enumerate_types(gmax, r)?;
            let candidates = match groups {
                None => None,
                Some(path) => {
                    let specs = load_groups_path(&path)?;
                    Some(classify::classify_candidates(gmax, r, &specs)?)
                }
            };
            let rep = report::ClassifyReport {
                format_version: report::FORMAT_VERSION,
                g_max: gmax,
                r_exact: r,
                tuple_count: tuples.len(),
                tuples,
                candidates,
            };
            emit(cli.json, &rep, report::render_classify(&rep))
        }
    }
}

fn emit<T: serde::Serialize>(json: bool, machine: &T, human: String) -> Result<()> {
    use std::io::Write;

    let text = if json { report::to_json(machine)? } else { human };
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        // The reader closed the pipe; there is nobody left to print for.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(Error::internal(format!("writing to stdout: {}", e))),
    }
}

fn parse_singularity(s: &str) -> Result<CyclicSingularityType> {
    let nums: Vec<u64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| Error::usage(format!("--sing: {:?} is not an integer", p)))
        })
        .collect::<Result<_>>()?;
    if nums.len() < 3 {
        return Err(Error::usage(
            "--sing needs an order and at least two weights, e.g. 6,1,1,1",
        ));
    }
    CyclicSingularityType::new(nums[0], nums[1..].to_vec())
        .map_err(|e| Error::usage(format!("--sing: {}", e)))
}

fn parse_degree_range(s: &str) -> Result<(u32, u32)> {
    let parse = |p: &str| {
        p.trim()
            .parse::<u32>()
            .map_err(|_| Error::usage(format!("--d: {:?} is not a degree", p)))
    };
    let (from, to) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let d = parse(s)?;
            (d, d)
        }
    };
    if from == 0 || to < from {
        return Err(Error::usage(
            "--d must be a positive degree or an inclusive range A..B with A <= B",
        ));
    }
    Ok((from, to))
}
