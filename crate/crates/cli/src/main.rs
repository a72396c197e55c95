use std::process::ExitCode;

use andreadakis::aut::{andreadakis_degree, decompose_triangular, parse_triangular, triangular_gamma_degree};
use andreadakis::braid::{braid_andreadakis_degree, comb_with_budget, combed_gamma_degree, DEFAULT_LENGTH_BUDGET};
use andreadakis::dk::{dk_bracket, dk_dimension};
use andreadakis::harness::{
    emit_tables, replay_sample, run_verification, run_verification_timed, Format, Target, Verdict,
    VerificationConfig,
};
use andreadakis::lie::witt_dimension;
use andreadakis::magnus::gamma_degree;
use andreadakis::{DKElement, Error, FiltrationDegree, FreeEndo, LieElement, PureBraidWord, Rank, Word};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

/// Environment variable that fixes the worker thread count.
const THREADS_VAR: &str = "ANDREADAKIS_THREADS";

#[derive(Parser)]
#[command(name = "andreadakis", version, about = "Lower central series and Andreadakis filtrations of free-group automorphisms")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded verification campaign.
    Verify(VerifyArgs),
    /// Lower central series degree of a word.
    GammaDegree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        word: String,
    },
    /// Automorphisms given by generator images.
    #[command(subcommand)]
    Aut(AutCommand),
    /// Pure braids.
    #[command(subcommand)]
    Braid(BraidCommand),
    /// Free Lie rings.
    #[command(subcommand)]
    Lie(LieCommand),
    /// The Drinfeld-Kohno Lie ring.
    #[command(subcommand)]
    Dk(DkCommand),
    /// Witt and Drinfeld-Kohno dimension tables.
    Tables {
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 7)]
        k_max: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_target)]
    target: Target,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    max_degree: usize,
    #[arg(long, default_value_t = 200)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_LENGTH_BUDGET)]
    length_budget: usize,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
    /// Recompute a single sample instead of the whole run.
    #[arg(long)]
    replay: Option<u64>,
}

#[derive(Args)]
struct ImagesArgs {
    #[arg(long)]
    n: usize,
    /// Generator images separated by ';'.
    #[arg(long)]
    images: String,
}

#[derive(Subcommand)]
enum AutCommand {
    /// Andreadakis degree of an IA automorphism.
    ADegree {
        #[command(flatten)]
        images: ImagesArgs,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Lower central series degree of a triangular automorphism.
    GDegreeTriangular {
        #[command(flatten)]
        images: ImagesArgs,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Write a triangular automorphism as a word in the IA generators.
    Decompose {
        #[command(flatten)]
        images: ImagesArgs,
    },
}

#[derive(Subcommand)]
enum BraidCommand {
    /// Comb a pure braid into its free factors.
    Comb {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_LENGTH_BUDGET)]
        length_budget: usize,
        word: String,
    },
    /// Both filtration degrees of a pure braid.
    Degree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long, default_value_t = DEFAULT_LENGTH_BUDGET)]
        length_budget: usize,
        word: String,
    },
}

#[derive(Subcommand)]
enum LieCommand {
    Dim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    Bracket {
        #[arg(long)]
        n: usize,
        a: String,
        b: String,
    },
}

#[derive(Subcommand)]
enum DkCommand {
    Dim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    Bracket {
        #[arg(long)]
        n: usize,
        a: String,
        b: String,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a command produced: text, JSON, and whether it counts as a pass.
struct Output {
    text: String,
    json: Value,
    pass: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Output {
        Output { text, json, pass: true }
    }
}

fn degree_json(d: FiltrationDegree) -> Value {
    match d {
        FiltrationDegree::Finite(j) => json!({ "degree": j }),
        FiltrationDegree::AtLeast(m) => json!({ "degree_at_least": m }),
        FiltrationDegree::Infinite => json!({ "degree": "infinite" }),
    }
}

fn rank(n: usize) -> Result<Rank, Error> {
    Rank::new(n)
}

/// Dimensions are computed in 128-bit arithmetic from `n^k`; `bits` caps
/// its size.
fn check_dimension_args(n: usize, k: usize, bits: f64) -> Result<(), Error> {
    if n == 0 || k == 0 {
        return Err(Error::Config("n and k must be positive".into()));
    }
    if (n as f64).log2() * k as f64 > bits {
        return Err(Error::Config(format!("n^k is too large for n = {n}, k = {k}")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Output, Error> {
    Ok(match &cli.command {
        Command::Verify(v) => {
            let cfg = VerificationConfig {
                target: v.target,
                n: v.n,
                max_degree: v.max_degree,
                samples: v.samples,
                seed: v.seed,
                format: cli.format,
                length_budget: v.length_budget,
            };
            if let Some(index) = v.replay {
                let rec = replay_sample(&cfg, index)?;
                let text = format!(
                    "#{} {:?} {}{}",
                    rec.index,
                    rec.verdict,
                    rec.input,
                    rec.detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default()
                );
                let pass = rec.verdict != Verdict::Fail;
                Output {
                    text,
                    json: serde_json::to_value(&rec).expect("record serialises"),
                    pass,
                }
            } else {
                let report = if v.timing { run_verification_timed(&cfg)? } else { run_verification(&cfg)? };
                Output {
                    text: report.to_string(),
                    json: serde_json::to_value(&report).expect("report serialises"),
                    pass: report.verdict != Verdict::Fail,
                }
            }
        }
        Command::GammaDegree { n, max_degree, word } => {
            let w = Word::parse(rank(*n)?, word)?;
            let d = gamma_degree(&w, *max_degree)?;
            Output::ok(d.to_string(), degree_json(d))
        }
        Command::Aut(cmd) => aut(cmd)?,
        Command::Braid(cmd) => braid(cmd)?,
        Command::Lie(LieCommand::Dim { n, k }) => {
            check_dimension_args(*n, *k, 120.0)?;
            let d = witt_dimension(*n, *k);
            Output::ok(d.to_string(), json!({ "dimension": d.to_string() }))
        }
        Command::Lie(LieCommand::Bracket { n, a, b }) => {
            let r = rank(*n)?;
            let c = LieElement::parse(r, a)?.bracket(&LieElement::parse(r, b)?)?;
            Output::ok(c.to_string(), json!({ "result": c.to_string() }))
        }
        Command::Dk(DkCommand::Dim { n, k }) => {
            if *n < 2 {
                return Err(Error::Config("the Drinfeld-Kohno ring needs n >= 2".into()));
            }
            check_dimension_args(*n, *k, 120.0)?;
            let d = dk_dimension(*n, *k);
            Output::ok(d.to_string(), json!({ "dimension": d.to_string() }))
        }
        Command::Dk(DkCommand::Bracket { n, a, b }) => {
            let c = dk_bracket(&DKElement::parse(*n, a)?, &DKElement::parse(*n, b)?)?;
            Output::ok(c.to_string(), json!({ "result": c.to_string() }))
        }
        Command::Tables { n_min, n_max, k_min, k_max } => {
            if n_min > n_max || k_min > k_max || *n_min < 1 || *k_min < 1 {
                return Err(Error::Config("empty or invalid table range".into()));
            }
            // Table entries go into JSON as plain numbers.
            check_dimension_args(*n_max, *k_max, 63.0)?;
            let t = emit_tables(*n_min..=*n_max, *k_min..=*k_max);
            Output {
                text: t.to_string(),
                json: serde_json::to_value(&t).expect("tables serialise"),
                pass: t.enumeration_agrees,
            }
        }
    })
}

fn aut(cmd: &AutCommand) -> Result<Output, Error> {
    let endo = |a: &ImagesArgs| -> Result<FreeEndo, Error> { FreeEndo::parse(rank(a.n)?, &a.images) };
    Ok(match cmd {
        AutCommand::ADegree { images, max_degree } => {
            let d = andreadakis_degree(&endo(images)?, *max_degree)?;
            Output::ok(d.to_string(), degree_json(d))
        }
        AutCommand::GDegreeTriangular { images, max_degree } => {
            let t = parse_triangular(&endo(images)?)?;
            let d = triangular_gamma_degree(&t, *max_degree)?;
            Output::ok(d.to_string(), degree_json(d))
        }
        AutCommand::Decompose { images } => {
            let w = decompose_triangular(&parse_triangular(&endo(images)?)?);
            let s = if w.is_empty() { "1".to_string() } else { w.to_string() };
            Output::ok(s.clone(), json!({ "ia_word": s }))
        }
    })
}

fn braid(cmd: &BraidCommand) -> Result<Output, Error> {
    Ok(match cmd {
        BraidCommand::Comb { n, length_budget, word } => {
            let beta = PureBraidWord::parse(*n, word)?;
            let combed = comb_with_budget(&beta, *length_budget)?;
            let factors: Vec<String> = combed
                .factors()
                .iter()
                .enumerate()
                .map(|(idx, w)| {
                    PureBraidWord::from_kernel_word(*n, idx + 2, w)
                        .expect("kernel alphabet")
                        .to_string()
                })
                .collect();
            Output::ok(combed.to_string(), json!({ "factors": factors }))
        }
        BraidCommand::Degree { n, max_degree, length_budget, word } => {
            let beta = PureBraidWord::parse(*n, word)?;
            let g = combed_gamma_degree(&comb_with_budget(&beta, *length_budget)?, *max_degree)?;
            let a = braid_andreadakis_degree(&beta, *max_degree)?;
            let verdict = match (g, a) {
                (FiltrationDegree::AtLeast(_), _) | (_, FiltrationDegree::AtLeast(_)) => "INDETERMINATE",
                _ if g == a => "EQUAL",
                _ => "UNEQUAL",
            };
            Output {
                text: format!("gamma {g}\nandreadakis {a}\n{verdict}"),
                json: json!({ "gamma": degree_json(g), "andreadakis": degree_json(a), "verdict": verdict }),
                pass: verdict != "UNEQUAL",
            }
        }
    })
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(&cli));
    match result {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("value serialises")),
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
