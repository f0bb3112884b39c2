use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qrecon_core::document::{parse_context, parse_context_str, ContextDocument};
use qrecon_core::report::VerificationReport;
use qrecon_core::spin::parse_spin;
use qrecon_core::verify::{run, spin_document, Scope, Settings};

const TWO_BIT: &str = include_str!("../fixtures/two_bit.json");

#[derive(Parser)]
#[command(name = "qrecon", version, about = "Verify Hilbert-space reconstructions from conceptual variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Numerical tolerance; overrides the document option.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Bound on generated group orders; overrides the document option.
    #[arg(long, global = true)]
    max_order: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check for a context document.
    Verify { file: PathBuf },
    /// Checks and the single-variable operator for one variable.
    Operator {
        file: PathBuf,
        #[arg(long)]
        variable: String,
    },
    /// Checks for one related pair.
    Pair {
        file: PathBuf,
        #[arg(long)]
        pair: usize,
    },
    /// Spin-r suite, optionally with in-plane discretisations.
    Spin {
        /// Spin such as `1`, `3/2` or `2.5`.
        #[arg(long)]
        r: String,
        #[arg(long = "stern-gerlach")]
        stern_gerlach: Vec<usize>,
    },
    /// Built-in example documents.
    Demo { name: Demo },
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    TwoBit,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn settings(cli: &Cli, doc: &ContextDocument) -> Result<Settings, String> {
    let mut s = Settings::from_document(doc);
    if let Some(t) = cli.tolerance {
        if !(t.is_finite() && t > 0.0 && t < 1.0) {
            return Err(format!("--tolerance {t} is not in (0, 1)"));
        }
        s.tolerance = t;
    }
    if let Some(m) = cli.max_order {
        if m == 0 {
            return Err("--max-order must be positive".into());
        }
        s.max_order = m;
    }
    Ok(s)
}

fn load(path: &Path) -> Result<ContextDocument, String> {
    parse_context(path).map_err(|e| e.to_string())
}

fn execute(cli: &Cli) -> Result<VerificationReport, String> {
    let (doc, scope) = match &cli.command {
        Command::Verify { file } => (load(file)?, Scope::All),
        Command::Operator { file, variable } => {
            let doc = load(file)?;
            if doc.variable(variable).is_none() {
                return Err(format!("no variable named `{variable}`"));
            }
            (doc, Scope::Variable(variable.clone()))
        }
        Command::Pair { file, pair } => {
            let doc = load(file)?;
            if *pair >= doc.pairs.len() {
                return Err(format!("pair index {pair} out of range; the document has {} pair(s)", doc.pairs.len()));
            }
            (doc, Scope::Pair(*pair))
        }
        Command::Spin { r, stern_gerlach } => {
            parse_spin(r).map_err(|e| e.to_string())?;
            if let Some(n) = stern_gerlach.iter().find(|n| !(3..=360).contains(*n)) {
                return Err(format!("--stern-gerlach {n} is not in 3..=360"));
            }
            (spin_document(vec![r.clone()], stern_gerlach.clone()), Scope::Spin)
        }
        Command::Demo { name: Demo::TwoBit } => (parse_context_str(TWO_BIT).map_err(|e| e.to_string())?, Scope::All),
    };
    let s = settings(cli, &doc)?;
    Ok(run(&doc, s, &scope))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            let out = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            print!("{out}");
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("qrecon: {e}");
            ExitCode::from(1)
        }
    }
}
