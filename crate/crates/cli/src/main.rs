//! Command-line interface for evaluation codes from affine line
//! configurations over prime fields.
//!
//! Exit codes: 0 on success, 1 on usage or parameter errors, 2 when an
//! internal invariant breaks (which freshly generated codes never trigger).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lincode::bounds::{error_radius, min_distance_bruteforce, point_count_comparison, RadiusPolynomial};
use lincode::decoder::{
    count_effective_sets, decode, enumerate_effective_sets, sample_effective_set, solve_minor,
    Strategy,
};
use lincode::simulate::{corrupt, simulate};
use lincode::{
    format_vector, parse_vector, CodeFile, CodeInstance, Codeword, CoefficientVector,
    Configuration, Construction, Error, FieldSpec, Result,
};

/// Families with at most this many effective sets decode exhaustively by
/// default; larger ones fall back to sampling.
const DEFAULT_EXHAUSTIVE_LIMIT: u128 = 100_000;
/// Default number of sampled sets when the family is too large to exhaust.
const DEFAULT_SAMPLE_K: u32 = 1000;

#[derive(Parser)]
#[command(
    name = "lincode",
    version,
    about = "Evaluation codes from affine line configurations over prime fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    Grid,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct StrategyFlags {
    /// How to walk the effective sets; default: exhaustive when the family
    /// has at most 100000 sets, sampled otherwise.
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Number of sampled effective sets when the strategy is sampled.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_K)]
    k: u32,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a code and write it as a JSON code file.
    ///
    /// With --out the file goes to disk and a summary is printed to
    /// standard output; without it the JSON goes to standard output and
    /// the summary to standard error.
    Mkcode {
        /// Prime field order.
        #[arg(long)]
        q: u64,
        /// Number of lines.
        #[arg(long)]
        n: usize,
        /// Marked points per line.
        #[arg(long)]
        m: usize,
        /// Polynomial degree bound, 1 ≤ d < min(n, m).
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum)]
        construction: ConstructionArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a coefficient vector into a codeword.
    Encode {
        /// Code file produced by mkcode.
        #[arg(long)]
        code: PathBuf,
        /// The message as one CSV line of δ integers.
        #[arg(long, conflicts_with = "message_file")]
        message: Option<String>,
        /// File holding the message as one CSV line.
        #[arg(long)]
        message_file: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plant exactly t symbol errors (uniform positions, uniform different
    /// values) into a word.
    Corrupt {
        #[arg(long)]
        code: PathBuf,
        /// Vector file holding the word to corrupt.
        #[arg(long)]
        word: PathBuf,
        /// Error weight.
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Majority-vote decode a received word and print the full report.
    Decode {
        #[arg(long)]
        code: PathBuf,
        /// Vector file holding the received word.
        #[arg(long)]
        word: PathBuf,
        #[command(flatten)]
        strategy: StrategyFlags,
        /// Seed for the sampled strategy.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the closed-form quantities of a code: dimension, effective-set
    /// count, the radius polynomial table, and the point-count comparison.
    Analyze {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force minimum distance next to the combinatorial bound.
    Mindist {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo success-rate experiment over a range of error weights.
    Simulate {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 0)]
        t_min: usize,
        #[arg(long)]
        t_max: usize,
        /// Trials per error weight.
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[command(flatten)]
        strategy: StrategyFlags,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-validate a code file: configuration invariants, generator rank,
    /// effective-set count, spot solves, and serialization round trip.
    Verify {
        #[arg(long)]
        code: PathBuf,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_usage_error = e.use_stderr();
            let _ = e.print();
            std::process::exit(if is_usage_error { 1 } else { 0 });
        }
    };
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        std::process::exit(if err.is_internal() { 2 } else { 1 });
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Mkcode { q, n, m, d, construction, seed, out } => {
            mkcode(q, n, m, d, construction, seed, out.as_deref())
        }
        Command::Encode { code, message, message_file, out } => {
            encode(&code, message.as_deref(), message_file.as_deref(), out.as_deref())
        }
        Command::Corrupt { code, word, t, seed, out } => {
            corrupt_cmd(&code, &word, t, seed, out.as_deref())
        }
        Command::Decode { code, word, strategy, seed, out } => {
            decode_cmd(&code, &word, &strategy, seed, out.as_deref())
        }
        Command::Analyze { code, out } => analyze(&code, out.as_deref()),
        Command::Mindist { code, out } => mindist(&code, out.as_deref()),
        Command::Simulate { code, t_min, t_max, trials, strategy, seed, out } => {
            simulate_cmd(&code, t_min, t_max, trials, &strategy, seed, out.as_deref())
        }
        Command::Verify { code } => verify(&code),
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn load_code(path: &Path) -> Result<(CodeFile, CodeInstance)> {
    let file = CodeFile::read(path)?;
    let code = file.to_code()?;
    Ok((file, code))
}

fn read_word(code: &CodeInstance, path: &Path) -> Result<Codeword> {
    let text = std::fs::read_to_string(path)?;
    let entries = parse_vector(code.spec(), &text)?;
    if entries.len() != code.length() {
        return Err(Error::Shape(format!(
            "word of length {} for a code of length {}",
            entries.len(),
            code.length()
        )));
    }
    Codeword::new(entries)
}

fn pick_strategy(code: &CodeInstance, flags: &StrategyFlags, seed: u64) -> Result<Strategy> {
    let config = code.config();
    let count = count_effective_sets(config.n(), config.m(), code.d())?;
    let choice = match flags.strategy {
        Some(StrategyArg::Exhaustive) => Strategy::Exhaustive,
        Some(StrategyArg::Sampled) => Strategy::Sampled { k: flags.k, seed },
        None if count <= DEFAULT_EXHAUSTIVE_LIMIT => Strategy::Exhaustive,
        None => Strategy::Sampled { k: flags.k, seed },
    };
    Ok(choice)
}

fn code_summary(code: &CodeInstance) -> Result<String> {
    let config = code.config();
    let params = code.parameters();
    let count = count_effective_sets(config.n(), config.m(), code.d())?;
    let mut s = String::new();
    let _ = writeln!(s, "length: {}", params.length);
    let _ = writeln!(s, "dimension: {}", params.dimension);
    match params.distance_lower_bound {
        Some(b) => {
            let _ = writeln!(s, "distance lower bound: {b}");
        }
        None => {
            let _ = writeln!(s, "distance lower bound: none (needs m >= d+2 or n >= d+2)");
        }
    }
    let _ = writeln!(s, "effective sets: {count}");
    Ok(s)
}

fn mkcode(
    q: u64,
    n: usize,
    m: usize,
    d: usize,
    construction: ConstructionArg,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let spec = FieldSpec::new(q)?;
    let (config, tag) = match construction {
        ConstructionArg::Grid => (Configuration::random_grid(spec, n, m, seed)?, Construction::Grid),
        ConstructionArg::Random => (Configuration::random(spec, n, m, seed)?, Construction::Random),
    };
    let code = CodeInstance::build(config, d)?;
    let file = CodeFile::from_code(&code, tag, seed);
    let summary = code_summary(&code)?;
    match out {
        Some(path) => {
            file.write(path)?;
            print!("{summary}");
        }
        None => {
            print!("{}", file.to_json()?);
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn encode(
    code_path: &Path,
    message: Option<&str>,
    message_file: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let (_, code) = load_code(code_path)?;
    let text = match (message, message_file) {
        (Some(s), None) => s.to_string(),
        (None, Some(path)) => std::fs::read_to_string(path)?,
        _ => {
            return Err(Error::Parameter(
                "provide the message with exactly one of --message or --message-file".into(),
            ));
        }
    };
    let entries = parse_vector(code.spec(), &text)?;
    let word = code.encode(&CoefficientVector::new(entries)?)?;
    emit(out, &format_vector(word.entries()))
}

fn corrupt_cmd(
    code_path: &Path,
    word_path: &Path,
    t: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let (_, code) = load_code(code_path)?;
    let word = read_word(&code, word_path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (corrupted, support) = corrupt(&word, t, &mut rng)?;
    eprintln!(
        "planted {} error(s) at positions {:?}",
        support.len(),
        support
    );
    emit(out, &format_vector(corrupted.entries()))
}

fn decode_cmd(
    code_path: &Path,
    word_path: &Path,
    flags: &StrategyFlags,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let (_, code) = load_code(code_path)?;
    let word = read_word(&code, word_path)?;
    let strategy = pick_strategy(&code, flags, seed)?;
    let report = decode(&code, &word, strategy)?;
    let mut s = String::new();
    let _ = writeln!(s, "outcome: {}", report.outcome);
    let _ = writeln!(s, "multiplicity: {}", report.multiplicity);
    let _ = writeln!(s, "sets examined: {}", report.sets_examined);
    let _ = writeln!(s, "strategy: {}", report.strategy);
    match &report.candidate {
        Some(a) => {
            let _ = writeln!(s, "candidate: {a}");
        }
        None => {
            let _ = writeln!(s, "candidate: (none)");
        }
    }
    if let Some(c) = &report.corrected {
        let _ = writeln!(s, "corrected: {c}");
    }
    let _ = writeln!(s, "distinct candidates: {}", report.votes.len());
    let _ = writeln!(s, "vote histogram (top {}):", report.votes.len().min(5));
    for (candidate, count) in report.votes.iter().take(5) {
        let _ = writeln!(s, "  {count} x {candidate}");
    }
    emit(out, &s)
}

fn analyze(code_path: &Path, out: Option<&Path>) -> Result<()> {
    let (file, code) = load_code(code_path)?;
    let config = code.config();
    let (n, m, d) = (config.n(), config.m(), code.d());
    let mut s = String::new();
    let _ = writeln!(s, "q: {}", file.q);
    let _ = writeln!(s, "n: {n}");
    let _ = writeln!(s, "m: {m}");
    let _ = writeln!(s, "d: {d}");
    let _ = writeln!(s, "construction: {}", file.construction);
    s.push_str(&code_summary(&code)?);
    let _ = writeln!(s, "radius polynomial f(k) = k^2 + (m-n-d-2)k + (n+1)(d+1) - m:");
    let poly = RadiusPolynomial::new(n, m, d);
    for k in 1..=d + 1 {
        let _ = writeln!(s, "  f({k}) = {}", poly.eval(k as u64));
    }
    match error_radius(n, m, d) {
        Ok(r) => {
            let _ = writeln!(s, "max f = {} at k = {}", r.max_f, r.argmax_k);
            let _ = writeln!(s, "radius nm - max f = {}", r.radius);
        }
        Err(e) => {
            let _ = writeln!(s, "radius: unavailable ({e})");
        }
    }
    let counts = point_count_comparison(file.q, n as u64)?;
    let _ = writeln!(s, "configuration points nq - n(n-1)/2: {}", counts.config_points);
    let _ = writeln!(s, "weil bound 1 + q + (n-1)(n-2)sqrt(q): {:.2}", counts.weil_bound);
    let _ = writeln!(
        s,
        "points exceed weil bound: {}",
        (counts.config_points as f64) > counts.weil_bound
    );
    emit(out, &s)
}

fn mindist(code_path: &Path, out: Option<&Path>) -> Result<()> {
    let (_, code) = load_code(code_path)?;
    let config = code.config();
    let d_min = min_distance_bruteforce(&code).map_err(|e| match e {
        Error::TooLarge { size, guard } => Error::Parameter(format!(
            "brute force would enumerate q^delta = {size} codewords, over the {guard} guard; \
             try smaller q or d"
        )),
        other => other,
    })?;
    let mut s = String::new();
    let _ = writeln!(s, "brute-force minimum distance: {d_min}");
    match error_radius(config.n(), config.m(), code.d()) {
        Ok(r) => {
            let _ = writeln!(s, "bound nm - max f:             {}", r.radius);
            let _ = writeln!(s, "bound met: {}", d_min >= r.radius);
        }
        Err(e) => {
            let _ = writeln!(s, "bound nm - max f:             unavailable ({e})");
        }
    }
    emit(out, &s)
}

fn simulate_cmd(
    code_path: &Path,
    t_min: usize,
    t_max: usize,
    trials: u32,
    flags: &StrategyFlags,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let (_, code) = load_code(code_path)?;
    if t_min > t_max {
        return Err(Error::Parameter(format!("t-min {t_min} exceeds t-max {t_max}")));
    }
    let strategy = pick_strategy(&code, flags, seed)?;
    let ts: Vec<usize> = (t_min..=t_max).collect();
    let sim = simulate(&code, &ts, trials, strategy, seed)?;
    emit(out, &sim.to_csv())
}

fn verify(code_path: &Path) -> Result<()> {
    let file = CodeFile::read(code_path)?;
    println!("parse: ok");
    let code = file.to_code()?;
    println!("configuration invariants and generator rank: ok");

    let round = CodeFile::from_json(&file.to_json()?)?;
    if round != file {
        return Err(Error::Internal("serialization round trip altered the file".into()));
    }
    println!("serialization round trip: ok");

    let rebuilt = CodeInstance::build(code.config().clone(), code.d())?;
    if rebuilt.matrix() != code.matrix() {
        return Err(Error::Internal("generator matrix rebuild differs".into()));
    }
    println!("generator matrix rebuild: bit-identical");

    let config = code.config();
    let (n, m, d) = (config.n(), config.m(), code.d());
    let count = count_effective_sets(n, m, d)?;
    if count <= DEFAULT_EXHAUSTIVE_LIMIT {
        let enumerated = enumerate_effective_sets(n, m, d)?.count();
        if enumerated as u128 != count {
            return Err(Error::Internal(format!(
                "enumerated {enumerated} effective sets, formula says {count}"
            )));
        }
        println!("effective sets: enumeration matches the formula ({count})");
    } else {
        println!("effective sets: {count} (too many to enumerate, formula only)");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for round in 0..3 {
        let message = CoefficientVector::random(code.spec(), code.dimension(), &mut rng);
        let word = code.encode(&message)?;
        for _ in 0..20 {
            let q = sample_effective_set(n, m, d, &mut rng)?;
            let solved = solve_minor(&code, &q, &word)?;
            if solved != message {
                return Err(Error::Internal(format!(
                    "effective set {q} failed to recover an exact codeword (round {round})"
                )));
            }
        }
    }
    println!("spot solves: 3 messages x 20 effective sets recover exactly");
    println!("verify: OK");
    Ok(())
}
