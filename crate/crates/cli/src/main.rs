use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lsgamma_cli::{parse_eval, run, CliError, Command, FactorKind, Format, Options};

#[derive(Parser)]
#[command(name = "lsgamma", about = "Exact twisted symmetric and exterior square local factors")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Evaluate every factor at s = a+bi (repeatable).
    #[arg(long = "eval", global = true, value_name = "s=a+bi")]
    eval: Vec<String>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Local factors of one kind.
    Factor {
        kind: Kind,
        /// Request document, or `-` for stdin.
        doc: String,
    },
    Plancherel { doc: String },
    Rootdatum { doc: String },
    TransferCheck { doc: String },
    StabilityDemo {
        doc: String,
        /// Scan eta over every conductor up to the field level.
        #[arg(long)]
        scan_threshold: bool,
    },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Tate,
    Twisted,
    Rs,
    Artin,
}

fn read(path: &str) -> Result<String, CliError> {
    let io = |e: std::io::Error| CliError {
        class: lsgamma_cli::ErrorClass::Usage,
        pointer: None,
        message: format!("cannot read {path}: {e}"),
    };
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn main_inner(cli: Cli) -> Result<bool, CliError> {
    let mut opts = Options {
        eval: cli.eval.iter().map(|e| parse_eval(e)).collect::<Result<_, _>>()?,
        format: cli.json.then_some(Format::Json),
        ..Options::default()
    };
    let (cmd, doc) = match cli.command {
        Cmd::Factor { kind, doc } => {
            let k = match kind {
                Kind::Tate => FactorKind::Tate,
                Kind::Twisted => FactorKind::Twisted,
                Kind::Rs => FactorKind::Rs,
                Kind::Artin => FactorKind::Artin,
            };
            (Command::Factor(k), Some(doc))
        }
        Cmd::Plancherel { doc } => (Command::Plancherel, Some(doc)),
        Cmd::Rootdatum { doc } => (Command::RootDatum, Some(doc)),
        Cmd::TransferCheck { doc } => (Command::TransferCheck, Some(doc)),
        Cmd::StabilityDemo { doc, scan_threshold } => {
            opts.scan_threshold = scan_threshold;
            (Command::StabilityDemo, Some(doc))
        }
        Cmd::Selftest => (Command::SelfTest, None),
    };
    let text = doc.as_deref().map(read).transpose()?;
    let out = run(cmd, text.as_deref(), &opts)?;
    print!("{}", out.render());
    Ok(out.ok)
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("lsgamma: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
