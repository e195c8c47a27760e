//! Command-line surface: exact lattice and order computations with JSON in
//! and out, DOT export of class graphs, and the named verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or data error,
//! 3 enumeration cap exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bolytrope_core::json::{matrix_to_string_rows, ChainJson};
use bolytrope_core::{
    ball_order, bolytrope_order, class_of, d2_canonical_form, graduated_order, invariant_classes,
    pz_order, radical_idealizer_chain, Apartment, ClassSet, Error, ExponentMatrix, Lattice,
    LatticeClass, Order, PAdicContext, DEFAULT_CLASS_CAP,
};

#[derive(Parser)]
#[command(
    name = "bolytrope",
    version,
    about = "Exact lattice and order computations over Z localized at a prime"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArg {
    /// Cap on enumerated classes (overrides BOLYTROPE_CAP and the default)
    #[arg(long)]
    cap: Option<usize>,
}

impl CapArg {
    fn resolve(&self) -> usize {
        self.cap
            .or_else(|| {
                std::env::var("BOLYTROPE_CAP")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or(DEFAULT_CLASS_CAP)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Building distance between the classes of two lattices
    Distance {
        /// Input lattice JSON files (exactly two)
        #[arg(long = "in", required = true, num_args = 1)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plesken-Zassenhaus order of the classes in the input files
    Pz {
        /// Lattice or class-set JSON files (repeatable)
        #[arg(long = "in", required = true, num_args = 1)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classes of lattices stabilized by an order
    InvariantLattices {
        #[arg(long = "in", required = true)]
        input: PathBuf,
        #[command(flatten)]
        cap: CapArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Radical idealizer chain of an order, with invariant classes per term
    RadicalChain {
        #[arg(long = "in", required = true)]
        input: PathBuf,
        #[command(flatten)]
        cap: CapArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ball order of given radius around a lattice (standard lattice unless --in)
    BallOrder {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 0)]
        r: i64,
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bolytrope order of an exponent matrix and radius in the standard frame
    BolytropeOrder {
        #[arg(long, required = true)]
        p: u64,
        /// Exponent matrix as a bracketed integer grid, e.g. `[[0,7],[0,0]]`
        #[arg(long, required = true)]
        matrix: String,
        #[arg(long, default_value_t = 0)]
        r: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graduated order of an exponent matrix in the standard frame
    GraduatedOrder {
        #[arg(long, required = true)]
        p: u64,
        #[arg(long, required = true)]
        matrix: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical (r, m, frame) shape of a closed order for d = 2
    CanonicalD2 {
        #[arg(long = "in", required = true)]
        input: PathBuf,
        #[command(flatten)]
        cap: CapArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// DOT rendering of the distance-one graph on a class set
    ExportDot {
        /// Class set, then optionally a class set of nodes to highlight
        #[arg(long = "in", required = true, num_args = 1)]
        inputs: Vec<PathBuf>,
        /// "standard" or a path to an apartment JSON for exponent labels
        #[arg(long)]
        apartment: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite (or "all")
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        cap: CapArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e.downcast_ref::<Error>() {
                Some(Error::CapExceeded(_)) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, AnyError> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
    Ok(value)
}

fn write_output(out: Option<&PathBuf>, payload: &str) -> Result<(), AnyError> {
    match out {
        Some(path) => fs::write(path, payload)
            .map_err(|e| format!("cannot write {}: {e}", path.display()).into()),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn to_pretty<T: serde::Serialize>(value: &T) -> Result<String, AnyError> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// A file holding either one lattice or an array of lattices.
fn read_classes(path: &Path) -> Result<Vec<LatticeClass>, AnyError> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    if let Ok(set) = serde_json::from_str::<ClassSet>(&text) {
        return Ok(set.iter().cloned().collect());
    }
    let lattice: Lattice =
        serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))?;
    Ok(vec![class_of(&lattice)])
}

fn parse_matrix_grid(text: &str) -> Result<ExponentMatrix, AnyError> {
    let rows: Vec<Vec<i64>> = serde_json::from_str(text)
        .map_err(|e| format!("cannot parse exponent matrix {text:?}: {e}"))?;
    Ok(ExponentMatrix::from_rows(&rows)?)
}

fn run(command: Command) -> Result<ExitCode, AnyError> {
    match command {
        Command::Distance { inputs, out } => {
            if inputs.len() != 2 {
                return Err("distance needs exactly two --in files".into());
            }
            let a: Lattice = read_json(&inputs[0])?;
            let b: Lattice = read_json(&inputs[1])?;
            if a.ctx() != b.ctx() || a.dim() != b.dim() {
                return Err("lattices must share p and dimension".into());
            }
            let dist = class_of(&a).distance(&class_of(&b));
            write_output(out.as_ref(), &format!("{dist}"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Pz { inputs, out } => {
            let mut classes = Vec::new();
            for path in &inputs {
                classes.extend(read_classes(path)?);
            }
            let set = ClassSet::new(classes);
            let order = pz_order(&set)?;
            write_output(out.as_ref(), &to_pretty(&order)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::InvariantLattices { input, cap, out } => {
            let order: Order = read_json(&input)?;
            let q = invariant_classes(&order, cap.resolve())?;
            write_output(out.as_ref(), &to_pretty(&q)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::RadicalChain { input, cap, out } => {
            let order: Order = read_json(&input)?;
            let chain = radical_idealizer_chain(&order)?;
            let cap = cap.resolve();
            let class_sets = chain
                .iter()
                .map(|t| invariant_classes(t, cap))
                .collect::<Result<Vec<_>, _>>()?;
            let payload = ChainJson {
                orders: chain,
                class_sets,
            };
            write_output(out.as_ref(), &to_pretty(&payload)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BallOrder {
            p,
            d,
            r,
            input,
            out,
        } => {
            let lattice = match (&input, p, d) {
                (Some(path), _, _) => read_json::<Lattice>(path)?,
                (None, Some(p), Some(d)) => Lattice::standard(PAdicContext::new(p)?, d),
                _ => return Err("ball-order needs --in or both --p and --d".into()),
            };
            if r < 0 {
                return Err("radius must be nonnegative".into());
            }
            let order = ball_order(&lattice, r);
            write_output(out.as_ref(), &to_pretty(&order)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BolytropeOrder { p, matrix, r, out } => {
            let ctx = PAdicContext::new(p)?;
            let m = parse_matrix_grid(&matrix)?;
            if r < 0 {
                return Err("radius must be nonnegative".into());
            }
            let apartment = Apartment::standard(ctx, m.d());
            let order = bolytrope_order(&apartment, &m, r);
            write_output(out.as_ref(), &to_pretty(&order)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::GraduatedOrder { p, matrix, out } => {
            let ctx = PAdicContext::new(p)?;
            let m = parse_matrix_grid(&matrix)?;
            let apartment = Apartment::standard(ctx, m.d());
            let order = graduated_order(&apartment, &m);
            write_output(out.as_ref(), &to_pretty(&order)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::CanonicalD2 { input, cap, out } => {
            let order: Order = read_json(&input)?;
            let canonical = d2_canonical_form(&order, cap.resolve())?;
            let payload = serde_json::json!({
                "r": canonical.r,
                "m": canonical.m,
                "frame": matrix_to_string_rows(canonical.frame.frame()),
            });
            write_output(out.as_ref(), &serde_json::to_string_pretty(&payload)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportDot {
            inputs,
            apartment,
            out,
        } => {
            if inputs.is_empty() || inputs.len() > 2 {
                return Err("export-dot takes one or two --in files".into());
            }
            let set: ClassSet = ClassSet::new(read_classes(&inputs[0])?);
            if set.is_empty() {
                return Err("class set is empty".into());
            }
            let highlight = match inputs.get(1) {
                Some(path) => Some(ClassSet::new(read_classes(path)?)),
                None => None,
            };
            let apartment = match apartment.as_deref() {
                None => None,
                Some("standard") => {
                    let first = set.get(0);
                    Some(Apartment::standard(first.ctx(), first.dim()))
                }
                Some(path) => Some(read_json::<Apartment>(Path::new(path))?),
            };
            let dot = bolytrope_core::dot::render_dot(&set, apartment.as_ref(), highlight.as_ref());
            write_output(out.as_ref(), &dot)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, cap } => {
            let cap = cap.resolve();
            let reports = if suite == "all" {
                bolytrope_core::verify::run_all(cap)?
            } else {
                vec![bolytrope_core::verify::run_suite(&suite, cap)?]
            };
            let mut all_passed = true;
            for report in &reports {
                println!("{}", report.summary_line());
                for line in &report.details {
                    println!("  {line}");
                }
                all_passed &= report.passed;
            }
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
