//! Command-line front end: builds fibre fields and null forms from
//! expression strings, verifies their defining identities over grids, and
//! exports samples plus aggregated residual reports as JSON or CSV.
//!
//! Exit codes: 0 when everything requested converged and every verification
//! report passed, 1 when a solve or a check failed, 2 when the request
//! itself was invalid (before any output is written).

mod args;
mod cmd;
mod output;
mod report;

use clap::{Parser, Subcommand};

use args::CliError;

#[derive(Parser)]
#[command(
    name = "twistleaf",
    version,
    about = "Conformal foliations of R^3 and their null-form counterparts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fibre field z(q,r,s) of the surface z3 = Phi(z1,z2), solved over a grid.
    PhiField(cmd::field::PhiFieldArgs),
    /// Fibre field of the level surface f(z1,z2,z3) = 0, solved over a grid.
    FField(cmd::field::FFieldArgs),
    /// Pair field (z,w) and null form from surface data (Xi1, Xi2) on C^2.
    XiForm(cmd::form::XiFormArgs),
    /// Pair field (z,w) and null form from a graph potential F(z,w).
    NurowskiForm(cmd::form::NurowskiFormArgs),
    /// Closed-form Hopf fibre field, its first integral, and solver comparison.
    Hopf(cmd::hopf::HopfArgs),
    /// Signed-distance foliation of a planar curve and its diagnostics.
    Eikonal(cmd::eikonal::EikonalArgs),
    /// Classify a real-linear subspace of C^3 from spanning vectors.
    Classify(cmd::classify::ClassifyArgs),
    /// Integrate one field line and export the polyline.
    Curves(cmd::curves::CurvesArgs),
    /// Run the fixed verification battery and emit a single report set.
    VerifyAll(cmd::verify::VerifyAllArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::PhiField(a) => cmd::field::run_phi(a),
        Command::FField(a) => cmd::field::run_f(a),
        Command::XiForm(a) => cmd::form::run_xi(a),
        Command::NurowskiForm(a) => cmd::form::run_nurowski(a),
        Command::Hopf(a) => cmd::hopf::run(a),
        Command::Eikonal(a) => cmd::eikonal::run(a),
        Command::Classify(a) => cmd::classify::run(a),
        Command::Curves(a) => cmd::curves::run(a),
        Command::VerifyAll(a) => cmd::verify::run(a),
    };
    let code = match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    };
    std::process::exit(code);
}
