//! `maclab`: compute Macdonald polynomials, Baker-Akhiezer and Laumon
//! series, and run the verification checks from the command line.

mod cache;
mod ops;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maclab_core::checks::parse_ints;
use maclab_core::EqualityMode;
use serde_json::{json, Value};

use crate::cache::{Cache, Lookup};
use crate::ops::{Check, CheckParams, PMethod};

#[derive(Parser, Debug)]
#[command(
    name = "maclab",
    version,
    about = "Exact Macdonald / Laumon computations and checks"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
    /// Worker threads (default: one per core). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for cached results; caching is off when unset.
    #[arg(long, env = "MACLAB_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Equality test for rational functions. Probabilistic runs never report PASSED.
    #[arg(long, value_enum, default_value_t = Equality::Exact, global = true)]
    equality: Equality,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Equality {
    Exact,
    Probabilistic,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monomial expansion of P_lambda in N variables.
    Macdonald {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Tableau sum or triangular eigen-solve.
        #[arg(long, value_enum, default_value_t = Method::Tableau)]
        method: Method,
    },
    /// The series f_N, or its specialization at a partition.
    Baker {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        truncation: u32,
        #[arg(long, allow_hyphen_values = true)]
        specialize: Option<String>,
    },
    /// Local Laumon series.
    Laumon {
        #[command(subcommand)]
        command: LaumonCommand,
    },
    /// Global Euler characteristics.
    Global {
        #[command(subcommand)]
        command: GlobalCommand,
    },
    /// Run a named check.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Tableau,
    Oracle,
}

#[derive(Subcommand, Debug)]
enum LaumonCommand {
    /// The series J through total x-degree D.
    J {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: u32,
    },
    /// Stabilized J_alpha along the sector schedule.
    Limit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        order: i64,
        #[arg(long, default_value_t = 5)]
        alpha_max: u32,
    },
    /// Checks on the local series: shir, junichi, ansum, substitution.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum GlobalCommand {
    /// Stabilized H at a weight.
    H {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        #[arg(long, default_value_t = 2)]
        order: i64,
        #[arg(long)]
        alpha_max: Option<u32>,
    },
    /// Checks on the global series: cordiff, hp, chibq, vanishing, h0, h0-limit.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: Check,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long)]
    order: Option<i64>,
    #[arg(long)]
    alpha_max: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    #[arg(long)]
    max_size: Option<u32>,
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long)]
    max_entry: Option<u32>,
    /// Number of coordinates for the lattice summation.
    #[arg(long)]
    coords: Option<usize>,
    /// Use the operator coefficients as printed instead of the derived ones.
    #[arg(long)]
    printed: bool,
    /// Use the corrected orientation of the printed three-variable coefficient.
    #[arg(long)]
    corrected: bool,
}

impl VerifyArgs {
    fn params(&self) -> maclab_core::Result<CheckParams> {
        Ok(CheckParams {
            n: self.n,
            degree: self.degree,
            order: self.order,
            alpha_max: self.alpha_max,
            weight: self.weight.as_deref().map(parse_ints).transpose()?,
            max_size: self.max_size,
            max_n: self.max_n,
            max_entry: self.max_entry,
            coords: self.coords,
            printed: self.printed,
            corrected: self.corrected,
        })
    }
}

const LAUMON_CHECKS: [Check; 4] = [
    Check::Shir,
    Check::Junichi,
    Check::Ansum,
    Check::Substitution,
];
const GLOBAL_CHECKS: [Check; 6] = [
    Check::Cordiff,
    Check::Hp,
    Check::Chibq,
    Check::Vanishing,
    Check::H0,
    Check::H0Limit,
];

type Job = Box<dyn FnOnce() -> maclab_core::Result<Value>>;

/// Resolve a command into a cache request and a job producing the payload.
fn plan(cmd: Command, mode: EqualityMode) -> maclab_core::Result<(Value, Job)> {
    let verify =
        |args: VerifyArgs, allowed: Option<&[Check]>| -> maclab_core::Result<(Value, Job)> {
            if let Some(allowed) = allowed {
                if !allowed.contains(&args.check) {
                    return Err(maclab_core::Error::InvalidInput(format!(
                        "{} is not available here; try `maclab verify`",
                        args.check.name()
                    )));
                }
            }
            let p = args.params()?;
            let req = cache::request("verify", &ops::check_key(args.check, &p, mode));
            Ok((
                req,
                Box::new(move || Ok(ops::report(&ops::verify(args.check, &p, mode)?))),
            ))
        };
    match cmd {
        Command::Macdonald { n, lambda, method } => {
            let l = parse_ints(&lambda)?;
            let method = match method {
                Method::Tableau => PMethod::Tableau,
                Method::Oracle => PMethod::Oracle,
            };
            let req = cache::request(
                "macdonald",
                &json!({"n": n, "lambda": l, "method": format!("{method:?}")}),
            );
            Ok((req, Box::new(move || ops::macdonald(n, &l, method))))
        }
        Command::Baker {
            n,
            truncation,
            specialize,
        } => {
            let s = specialize.as_deref().map(parse_ints).transpose()?;
            let req = cache::request(
                "baker",
                &json!({"n": n, "truncation": truncation, "specialize": s}),
            );
            Ok((
                req,
                Box::new(move || ops::baker(n, truncation, s.as_deref())),
            ))
        }
        Command::Laumon { command } => match command {
            LaumonCommand::J { n, degree } => {
                let req = cache::request("laumon-j", &json!({"n": n, "degree": degree}));
                Ok((req, Box::new(move || ops::laumon_j(n, degree))))
            }
            LaumonCommand::Limit {
                n,
                order,
                alpha_max,
            } => {
                let req = cache::request(
                    "laumon-limit",
                    &json!({"n": n, "order": order, "alpha_max": alpha_max}),
                );
                Ok((
                    req,
                    Box::new(move || ops::laumon_limit(n, order, alpha_max)),
                ))
            }
            LaumonCommand::Verify(args) => verify(args, Some(&LAUMON_CHECKS)),
        },
        Command::Global { command } => match command {
            GlobalCommand::H {
                n,
                weight,
                order,
                alpha_max,
            } => {
                let w = ops::weight_arg(n, &parse_ints(&weight)?)?;
                let am = alpha_max.unwrap_or(if w.n() <= 2 { 5 } else { 4 });
                let req = cache::request(
                    "global-h",
                    &json!({"weight": w.l(), "order": order, "alpha_max": am}),
                );
                Ok((req, Box::new(move || ops::global_h(&w, order, am))))
            }
            GlobalCommand::Verify(args) => verify(args, Some(&GLOBAL_CHECKS)),
        },
        Command::Verify(args) => verify(args, None),
    }
}

fn compute(cache: Option<&Cache>, req: &Value, job: Job) -> maclab_core::Result<Value> {
    let Some(cache) = cache else {
        return job();
    };
    match cache.get(req) {
        Lookup::Hit(v) => {
            eprintln!("cache hit: {}", cache.path_for(req).display());
            return Ok(v);
        }
        Lookup::Corrupt(why) => {
            eprintln!(
                "cache entry {} discarded ({why}); recomputing",
                cache.path_for(req).display()
            );
        }
        Lookup::Miss => {}
    }
    let v = job()?;
    if let Err(e) = cache.put(req, &v) {
        eprintln!("warning: could not write cache entry: {e}");
    }
    Ok(v)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("global pool is configured once");
    }
    let mode = match cli.equality {
        Equality::Exact => EqualityMode::Exact,
        Equality::Probabilistic => EqualityMode::Probabilistic,
    };
    let cache = cli.cache_dir.as_deref().map(Cache::new);
    let start = Instant::now();
    let payload = plan(cli.command, mode).and_then(|(req, job)| compute(cache.as_ref(), &req, job));
    let payload = match payload {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match cli.output {
        Output::Json => println!("{}", ops::render_json(&payload)),
        Output::Text => println!("{}", ops::render_text(&payload)),
    }
    eprintln!("wall time: {} ms", start.elapsed().as_millis());
    if ops::succeeded(&payload) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
