use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twomode::model::ConstraintCheck;
use twomode::sweep::format_float;
use twomode::{
    build_thermal_diffusion, emit_csv, load_scenario, report_asymptotics, run_sweep, validate_dissipator,
    EnvironmentParams, Error,
};

#[derive(Parser)]
#[command(name = "twomode", version, about = "Entanglement dynamics of two oscillators in a thermal bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep S(t) and E_N(t) over a (C_T, t) grid and write CSV
    Sweep {
        /// Scenario file, or a preset name (fig1, fig2)
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        out: PathBuf,
        /// Accept an initial state violating nu_- >= 1/2
        #[arg(long)]
        allow_unphysical: bool,
        /// Abort if the dissipator is not completely positive at some C_T
        #[arg(long)]
        strict_cp: bool,
    },
    /// Classify the asymptotic state
    Asymptotics(ParamArgs),
    /// Check the dissipator positivity constraints
    Validate(ParamArgs),
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    c_thermal: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    d_mixed: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    d_xy: f64,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<EnvironmentParams, Error> {
        EnvironmentParams::new(self.lambda, self.c_thermal, self.d_mixed, self.d_xy)?
            .with_oscillator(self.m, self.omega)
    }
}

fn print_check(c: &ConstraintCheck) {
    let status = if c.satisfied { "ok  " } else { "FAIL" };
    println!("  [{status}] {:<40} margin {}", c.name, format_float(c.margin));
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Sweep {
            scenario,
            out,
            allow_unphysical,
            strict_cp,
        } => {
            let mut scenario = load_scenario(&scenario, allow_unphysical)?;
            scenario.strict_cp |= strict_cp;
            if allow_unphysical {
                let report = twomode::validate_state(&scenario.sigma0);
                if report.is_state_physical != Some(true) {
                    eprintln!(
                        "warning: initial state is unphysical (nu_- = {})",
                        format_float(report.nu_minus.unwrap_or(f64::NAN))
                    );
                }
            }
            let output = run_sweep(&scenario)?;
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
            emit_csv(&output.records, &out)?;
            println!(
                "{}: wrote {} records to {}",
                scenario.name,
                output.records.len(),
                out.display()
            );
        }
        Command::Asymptotics(args) => {
            print!("{}", report_asymptotics(&args.params()?)?);
        }
        Command::Validate(args) => {
            let params = args.params()?;
            let report = validate_dissipator(&build_thermal_diffusion(&params)?, params.lambda);
            let yes_no = |b: Option<bool>| if b == Some(true) { "yes" } else { "no" };
            println!("completely positive: {}", yes_no(report.is_cp_valid));
            println!("pairwise bounds:     {}", yes_no(report.satisfies_cauchy_schwarz));
            for c in &report.checks {
                print_check(c);
            }
            if !report.is_valid() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
