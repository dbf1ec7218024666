//! `centerfocus`: exact Lyapunov constants, structural center tests and a
//! numeric return-map oracle for planar polynomial systems.
//!
//! Exit codes: 0 success, 1 usage error, 2 engine or input error,
//! 3 numeric verdict disagrees with the symbolic one.

mod commands;
mod document;
mod error;
mod report;

use std::process::ExitCode;

use centerfocus::numeric::IntegratorConfig;
use centerfocus::rational::parse_rational;
use centerfocus::Rational;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::commands::Output;
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "centerfocus", version, about = "Center-focus analysis of planar polynomial vector fields")]
struct Cli {
    /// Print the machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lyapunov constants and verdict up to a given order.
    Analyze {
        /// System file(s); repeat the flag for a batch.
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<String>,
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Worker threads for batches.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
    },
    /// Symmetries, weak-center identity, quadratic center conditions,
    /// Lyapunov constants and the numeric oracle side by side.
    Classify {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Radii for the numeric return map.
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
        c: Vec<f64>,
        #[command(flatten)]
        integrator: IntegratorArgs,
    },
    /// Build a field from an inverse-problem description and check it.
    Inverse {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 6)]
        check_order: usize,
        /// Also write the built field as a system file.
        #[arg(long)]
        emit: Option<String>,
    },
    /// Cofactor certificate for a curve; with --lambda, the two-curve first
    /// integral built from it (curve = 1 + (1 - lambda) g, or g for lambda = 1).
    Darboux {
        #[arg(long)]
        input: String,
        #[arg(long)]
        curve: String,
        #[arg(long, value_parser = parse_lambda)]
        lambda: Option<Rational>,
    },
    /// Poincare return map P(c) on the positive x-axis.
    Returnmap {
        #[arg(long)]
        input: String,
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<f64>,
        #[command(flatten)]
        integrator: IntegratorArgs,
    },
    /// Period T(c) of the orbit through (c, 0).
    Period {
        #[arg(long)]
        input: String,
        #[arg(long, value_delimiter = ',', required = true)]
        c: Vec<f64>,
        #[command(flatten)]
        integrator: IntegratorArgs,
    },
    /// Integrate one orbit and write it as CSV (t,x,y).
    Orbit {
        #[arg(long)]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, allow_hyphen_values = true)]
        y0: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: String,
        #[command(flatten)]
        integrator: IntegratorArgs,
    },
    /// Built-in example families.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Names, parameters and a one-line summary.
    List,
    /// Emit a family member as a system file.
    Get {
        name: String,
        /// Parameter value as name=p/q; repeat for each parameter.
        #[arg(long = "param")]
        params: Vec<String>,
    },
}

#[derive(Args)]
struct IntegratorArgs {
    #[arg(long, default_value_t = 1e-12)]
    rtol: f64,
    #[arg(long, default_value_t = 1e-14)]
    atol: f64,
    #[arg(long, default_value_t = 0.1)]
    max_step: f64,
    #[arg(long, default_value_t = 1e4)]
    max_time: f64,
}

impl IntegratorArgs {
    fn config(&self) -> IntegratorConfig {
        IntegratorConfig {
            rel_tol: self.rtol,
            abs_tol: self.atol,
            max_step: self.max_step,
            max_time: self.max_time,
        }
    }
}

fn parse_lambda(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

enum Printed {
    Report(Output),
    Document(String),
}

fn run(cli: Cli) -> Result<Printed, CliError> {
    let out = match cli.command {
        Command::Analyze { input, order, jobs } => commands::symbolic::analyze(&input, order, jobs as usize)?,
        Command::Classify { input, order, c, integrator } => {
            commands::symbolic::classify(&input, order, &c, &integrator.config())?
        }
        Command::Inverse { spec, check_order, emit } => commands::symbolic::inverse(&spec, check_order, emit.as_deref())?,
        Command::Darboux { input, curve, lambda } => commands::symbolic::darboux(&input, &curve, lambda.as_ref())?,
        Command::Returnmap { input, c, integrator } => commands::numeric::returnmap(&input, &c, &integrator.config())?,
        Command::Period { input, c, integrator } => commands::numeric::period(&input, &c, &integrator.config())?,
        Command::Orbit { input, x0, y0, t, out, integrator } => {
            commands::numeric::orbit(&input, x0, y0, t, &out, &integrator.config())?
        }
        Command::Catalog(CatalogCommand::List) => commands::catalog::list(),
        Command::Catalog(CatalogCommand::Get { name, params }) => {
            return Ok(Printed::Document(commands::catalog::get(&name, &params)?))
        }
    };
    Ok(Printed::Report(out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(Printed::Document(doc)) => {
            print!("{doc}");
            ExitCode::SUCCESS
        }
        Ok(Printed::Report(out)) => {
            if json {
                println!("{}", out.report.to_json());
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
