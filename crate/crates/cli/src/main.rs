use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use homrep_cli::commands::{self, DepthInput, GroupKind, ModuleKind, PushExpectation, SeedSource};
use homrep_cli::ExperimentReport;
use homrep_core::nilpotent::DEFAULT_DEGREE_CAP;
use homrep_core::surface::push_data_from_json;
use homrep_core::{IntMatrix, QuotientSpec};

#[derive(Parser)]
#[command(name = "homrep", version, about = "Homological representations of free group automorphisms")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Write the JSON report here
    #[arg(long, value_name = "PATH", global = true)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SpecArgs {
    /// Quotient spec (JSON): {"rank": n, "mod": q} or {"rank", "degree", "perms"}
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    /// Free group rank; must match the spec
    #[arg(long, value_name = "N")]
    rank: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that rho_K(phi) is the identity for phi(a1) = a1 [a2^e, a3^e]
    VerifyClaim1 {
        #[command(flatten)]
        spec: SpecArgs,
        /// Exponent e; a2^e and a3^e must lie in K
        #[arg(long, value_name = "E")]
        exp: u32,
        /// Magnus truncation degree
        #[arg(long, value_name = "D", default_value_t = DEFAULT_DEGREE_CAP)]
        cap: usize,
    },
    /// Lower central series depth of a word, or Johnson depth of a recipe
    JohnsonDepth {
        /// Free group rank
        #[arg(long, value_name = "N")]
        rank: usize,
        /// Word such as "a1 A2 a3" (capital letter = inverse)
        #[arg(long, conflicts_with = "recipe", required_unless_present = "recipe")]
        word: Option<String>,
        /// Element recipe, e.g. "[c(1,2),m(2,1,3)]*phi(2)"
        #[arg(long)]
        recipe: Option<String>,
        /// Magnus truncation degree
        #[arg(long, value_name = "D", default_value_t = DEFAULT_DEGREE_CAP)]
        cap: usize,
        /// Expected exact depth; adds a verdict
        #[arg(long, value_name = "K")]
        expect: Option<usize>,
    },
    /// Matrix of rho_K(f) on H_1(K)
    Rho {
        #[command(flatten)]
        spec: SpecArgs,
        /// Element recipe
        #[arg(long)]
        recipe: String,
        /// Adds a verdict that the matrix is the identity
        #[arg(long)]
        expect_identity: bool,
    },
    /// Deck group action on H_1(K), optionally checking normalization by rho_K(f)
    Deck {
        #[command(flatten)]
        spec: SpecArgs,
        /// Element recipe
        #[arg(long)]
        recipe: Option<String>,
    },
    /// Index of the lattice spanned by an orbit
    OrbitIndex {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long, value_enum)]
        module: Module,
        /// n for sl, 2g for sp
        #[arg(long, value_name = "N")]
        rank: usize,
        /// Seed coordinates, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "johnson")]
        seed: Option<Vec<i64>>,
        /// Seed with the Johnson class of a curve push over the first J handles
        #[arg(long, value_name = "J", requires = "curve")]
        johnson: Option<usize>,
        /// Homology class of the pushing curve, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        curve: Option<Vec<i64>>,
        /// Overrides JS_PASS_LIMIT
        #[arg(long)]
        pass_limit: Option<usize>,
    },
    /// Congruence depth of rho_K(g) for recipes g
    CongruenceScan {
        #[command(flatten)]
        spec: SpecArgs,
        /// Prime for the congruence filtration
        #[arg(long, value_name = "P")]
        prime: u64,
        /// Largest exponent tested
        #[arg(long, value_name = "D", default_value_t = 6)]
        cap: usize,
        /// Element recipe; repeat for several
        #[arg(long = "recipe", required = true)]
        recipes: Vec<String>,
        /// Adds a verdict per element: depth >= K
        #[arg(long, value_name = "K")]
        min_depth: Option<usize>,
    },
    /// Homology action of point or curve pushes
    PushAct {
        /// Homology model (JSON): {"genus", "punctures"} or {"pairing"}
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Push data (JSON list of {"kind", "c", "d", "i_gamma"})
        #[arg(long, value_name = "FILE")]
        data: PathBuf,
        /// Adds a verdict on the product matrix
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Smith normal form of an integer matrix (JSON rows)
    Snf {
        /// Matrix file (JSON list of rows)
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Sl,
    Sp,
}

#[derive(Clone, Copy, ValueEnum)]
enum Module {
    Wedge3,
    Hom,
}

#[derive(Clone, Copy, ValueEnum)]
enum Expect {
    Identity,
    Unipotent,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_spec(args: &SpecArgs) -> Result<QuotientSpec> {
    Ok(QuotientSpec::from_json_str(&read(&args.spec)?)?)
}

fn run(command: Command) -> Result<ExperimentReport> {
    match command {
        Command::VerifyClaim1 { spec, exp, cap } => commands::verify_claim1(&load_spec(&spec)?, spec.rank, exp, cap),
        Command::JohnsonDepth { rank, word, recipe, cap, expect } => {
            let input = match (word, recipe) {
                (Some(w), None) => DepthInput::Word(w),
                (None, Some(r)) => DepthInput::Recipe(r),
                _ => bail!("give exactly one of --word and --recipe"),
            };
            commands::johnson_depth_cmd(&input, rank, cap, expect)
        }
        Command::Rho { spec, recipe, expect_identity } => {
            commands::rho_cmd(&load_spec(&spec)?, spec.rank, &recipe, expect_identity)
        }
        Command::Deck { spec, recipe } => commands::deck_cmd(&load_spec(&spec)?, spec.rank, recipe.as_deref()),
        Command::OrbitIndex { group, module, rank, seed, johnson, curve, pass_limit } => {
            let seed = match (seed, johnson, curve) {
                (Some(xs), None, None) => SeedSource::Coords(xs),
                (None, Some(j), Some(c)) => SeedSource::Johnson { j, c },
                _ => bail!("give --seed, or --johnson with --curve"),
            };
            let group = match group {
                Group::Sl => GroupKind::Sl,
                Group::Sp => GroupKind::Sp,
            };
            let module = match module {
                Module::Wedge3 => ModuleKind::Wedge3,
                Module::Hom => ModuleKind::Hom,
            };
            let limit = match pass_limit {
                Some(k) => k,
                None => commands::pass_limit_from_env()?,
            };
            commands::orbit_index(group, module, rank, &seed, limit)
        }
        Command::CongruenceScan { spec, prime, cap, recipes, min_depth } => {
            commands::congruence_scan(&load_spec(&spec)?, spec.rank, prime, cap, &recipes, min_depth)
        }
        Command::PushAct { model, data, expect } => {
            let model = commands::model_from_json(&read(&model)?)?;
            let data = push_data_from_json(&read(&data)?)?;
            let expect = expect.map(|e| match e {
                Expect::Identity => PushExpectation::Identity,
                Expect::Unipotent => PushExpectation::Unipotent,
            });
            commands::push_act(&model, &data, expect)
        }
        Command::Snf { matrix } => {
            let v: serde_json::Value = serde_json::from_str(&read(&matrix)?).context("matrix file")?;
            commands::snf_cmd(&IntMatrix::from_json(&v)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.common.json.clone();
    match run(cli.command) {
        Ok(report) => {
            print!("{}", report.summary());
            if let Some(path) = json {
                if let Err(e) = report.write_json(&path) {
                    eprintln!("error: writing {}: {e:#}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
