use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use puremon::classify::verdict;
use puremon::constructions::{a_plus_inf_a, b_max, b_min};
use puremon::levyodenthal::{is_extended, realize_wiegand, vstar_system, RankMatrix, ASSUMPTIONS};
use puremon::supports::{from_generators, DEFAULT_BOUND};
use puremon::system::truncated_domain;
use puremon::{extract, generators, hilbert_basis, member_via_supports, DioSystem, Error, ExtVec, HilbertBasis, SystemOfSupports};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "puremon", version, about = "Monoids of (N0 ∪ {inf})^s given by systems of supports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether a vector lies in the monoid.
    Member {
        #[command(flatten)]
        input: MonoidInput,
        /// Comma-separated entries, e.g. "inf,1,0".
        #[arg(long)]
        vector: String,
    },
    /// Extract the system of supports of a system's solution monoid.
    Supports {
        #[arg(long)]
        system: PathBuf,
    },
    /// Minimal generating set of the monoid.
    Generators {
        #[command(flatten)]
        input: MonoidInput,
    },
    /// Order-unit, fullness, almost-freeness and comparison with A + inf*A.
    Classify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
    },
    /// The system of supports of A + inf*A.
    Aplusinfa(BasisInput),
    /// The smallest system of supports with finite part A.
    Bmin(BasisInput),
    /// The largest system of supports with finite part A.
    Bmax(BasisInput),
    /// Equal-rank equations for a rank matrix.
    LoSystem {
        #[arg(long)]
        rank: PathBuf,
    },
    /// Whether a vector has equal rank at every minimal prime.
    LoExtended {
        #[arg(long)]
        rank: PathBuf,
        #[arg(long)]
        vector: String,
    },
    /// Rank data realizing the kernel of an integer matrix.
    Wiegand {
        /// Integer matrix as JSON, e.g. "[[1,-1]]", or a path to a file holding it.
        #[arg(long)]
        matrix: String,
    },
    /// Cross-check support-based membership against the system by enumeration.
    Oracle {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 3)]
        bound: u64,
        /// A prior `supports` or `generators` output to verify instead of a fresh extraction.
        #[arg(long)]
        expected: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MonoidInput {
    #[arg(long)]
    system: Option<PathBuf>,
    /// A system of supports as printed by `supports`.
    #[arg(long)]
    supports: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct BasisInput {
    /// Take A as the Hilbert basis of this system.
    #[arg(long)]
    system: Option<PathBuf>,
    #[arg(long)]
    basis: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorSet {
    s: usize,
    generators: Vec<ExtVec>,
}

enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Json(String),
    Mismatch(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<Value, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Json(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable output")
}

fn parse_vector(text: &str) -> Result<ExtVec, Failure> {
    Ok(text.parse::<ExtVec>()?)
}

fn monoid(input: &MonoidInput) -> Result<SystemOfSupports, Failure> {
    match (&input.system, &input.supports) {
        (Some(p), _) => Ok(extract(&load::<DioSystem>(p)?)?),
        (_, Some(p)) => load(p),
        _ => unreachable!("clap enforces one input"),
    }
}

fn basis(input: &BasisInput) -> Result<HilbertBasis, Failure> {
    match (&input.system, &input.basis) {
        (Some(p), _) => Ok(hilbert_basis(&load::<DioSystem>(p)?)?),
        (_, Some(p)) => load(p),
        _ => unreachable!("clap enforces one input"),
    }
}

/// A prior answer: either a system of supports or a generator set.
fn load_expected(path: &Path) -> Result<SystemOfSupports, Failure> {
    let text = read(path)?;
    if let Ok(sos) = serde_json::from_str::<SystemOfSupports>(&text) {
        return Ok(sos);
    }
    let set: GeneratorSet =
        serde_json::from_str(&text).map_err(|e| Failure::Json(format!("{}: {e}", path.display())))?;
    Ok(from_generators(set.s, &set.generators)?)
}

fn oracle(system: &Path, bound: u64, expected: Option<&Path>) -> Outcome {
    let sys: DioSystem = load(system)?;
    let sos = match expected {
        Some(p) => load_expected(p)?,
        None => extract(&sys)?,
    };
    if sos.dim() != sys.dim() {
        return Err(Error::DimensionMismatch { expected: sys.dim(), found: sos.dim() }.into());
    }
    let mut points = 0u64;
    let mut mismatches = Vec::new();
    for x in truncated_domain(sys.dim(), bound)? {
        points += 1;
        let direct = sys.is_member(&x)?;
        if member_via_supports(&sos, &x)? != direct {
            mismatches.push(json!({ "vector": x, "system": direct }));
        }
    }
    let report = json!({
        "bound": bound,
        "points": points,
        "mismatches": mismatches.len(),
        "examples": &mismatches[..mismatches.len().min(10)],
    });
    if mismatches.is_empty() {
        Ok(report)
    } else {
        Err(Failure::Mismatch(report))
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Member { input, vector } => {
            let x = parse_vector(&vector)?;
            Ok(json!({ "member": member_via_supports(&monoid(&input)?, &x)? }))
        }
        Command::Supports { system } => Ok(to_value(&extract(&load(&system)?)?)),
        Command::Generators { input } => {
            let sos = monoid(&input)?;
            Ok(to_value(&GeneratorSet { s: sos.dim(), generators: generators(&sos)? }))
        }
        Command::Classify { system, bound } => Ok(to_value(&verdict(&load(&system)?, bound)?)),
        Command::Aplusinfa(input) => Ok(to_value(&a_plus_inf_a(&basis(&input)?)?)),
        Command::Bmin(input) => Ok(to_value(&b_min(&basis(&input)?)?)),
        Command::Bmax(input) => Ok(to_value(&b_max(&basis(&input)?)?)),
        Command::LoSystem { rank } => {
            let rm: RankMatrix = load(&rank)?;
            Ok(json!({ "system": vstar_system(&rm), "assumptions": ASSUMPTIONS }))
        }
        Command::LoExtended { rank, vector } => {
            let rm: RankMatrix = load(&rank)?;
            let x = parse_vector(&vector)?;
            Ok(json!({ "extended": is_extended(&rm, &x)?, "assumptions": ASSUMPTIONS }))
        }
        Command::Wiegand { matrix } => {
            let text = if matrix.trim_start().starts_with('[') { matrix } else { read(Path::new(&matrix))? };
            let e: Vec<Vec<i64>> = serde_json::from_str(&text).map_err(|e| Failure::Json(format!("matrix: {e}")))?;
            let (rm, sys) = realize_wiegand(&e)?;
            Ok(json!({ "rank_matrix": rm, "system": sys, "assumptions": ASSUMPTIONS }))
        }
        Command::Oracle { system, bound, expected } => oracle(&system, bound, expected.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(value) => {
            println!("{value}");
            ExitCode::SUCCESS
        }
        Err(Failure::Mismatch(report)) => {
            println!("{report}");
            eprintln!("oracle found {} mismatching points", report["mismatches"]);
            ExitCode::from(1)
        }
        Err(failure) => {
            let (code, message, status) = match failure {
                Failure::Lib(e) => (e.code(), e.to_string(), if e.is_resource_cap() { 3 } else { 2 }),
                Failure::Io(p, e) => ("io_error", format!("{}: {e}", p.display()), 2),
                Failure::Json(m) => ("parse_error", m, 2),
                Failure::Mismatch(_) => unreachable!(),
            };
            println!("{}", json!({ "error": { "code": code, "message": message } }));
            eprintln!("error: {message}");
            ExitCode::from(status)
        }
    }
}
