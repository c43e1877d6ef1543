#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use aim_spectrum_cli::output::{self, Format};
use aim_spectrum_cli::run::{self, AimSettings, FormulationDto, Method, OracleSettings, RunConfig};
use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_INVALID: u8 = 1;
const EXIT_UNCONVERGED: u8 = 2;

#[derive(Parser)]
#[command(name = "aim-spectrum", version, about = "Bound-state energies by the asymptotic iteration method")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum of one potential at one angular momentum.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Reproduce reference table 1-4 and compare against it.
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Energies E_0..E_{n-max} for every l from --ell to --ell-max.
    Sweep {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        ell_max: u32,
        /// Highest radial quantum number per l.
        #[arg(long, default_value_t = 3)]
        n_max: usize,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// AIM against a finite-difference oracle (--method picks which; default oracle-pekeris).
    Compare {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct ProblemArgs {
    /// Potential strength; negative for an attractive well.
    #[arg(long = "V0", allow_hyphen_values = true)]
    v0: f64,
    /// Shape parameter, 0 < gamma < 1.
    #[arg(long)]
    gamma: f64,
    /// Screening parameter λ > 0.
    #[arg(long, conflicts_with = "lambda_sq", required_unless_present = "lambda_sq")]
    lambda: Option<f64>,
    /// λ² given directly, so that λ = √2 is exact.
    #[arg(long)]
    lambda_sq: Option<f64>,
    /// Angular momentum (the first one for sweep).
    #[arg(long, default_value_t = 0)]
    ell: u32,
}

impl ProblemArgs {
    fn lambda_sq(&self) -> Result<f64> {
        match (self.lambda, self.lambda_sq) {
            (Some(l), None) if l > 0.0 && l.is_finite() => Ok(l * l),
            (Some(l), None) => bail!("lambda must be > 0, got {l}"),
            (None, Some(s)) => Ok(s),
            _ => bail!("give exactly one of --lambda and --lambda-sq"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Aim,
    OracleExact,
    OraclePekeris,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulationArg {
    Factored,
    Direct,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "aim")]
    method: MethodArg,
    /// Expansion point in the mapped variable, -1 < x0 < 1.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    x0: f64,
    /// Largest iteration count.
    #[arg(long, default_value_t = 120)]
    kmax: usize,
    #[arg(long, default_value_t = 512)]
    precision_bits: usize,
    /// Lower end of the energy search; defaults to a bound from a coarse oracle run.
    #[arg(long, allow_hyphen_values = true)]
    e_min: Option<f64>,
    /// Upper end of the energy search; must lie below the continuum threshold.
    #[arg(long, allow_hyphen_values = true)]
    e_max: Option<f64>,
    /// Convergence tolerance across k; roots are refined to a tenth of it.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Energy grid used to bracket roots.
    #[arg(long, default_value_t = 160)]
    grid_points: usize,
    /// Iteration stride between root refinements.
    #[arg(long, default_value_t = 5)]
    k_step: usize,
    /// `direct` iterates on the wavefunction itself and can show spurious roots away from x0 = 0.
    #[arg(long, value_enum, default_value = "factored")]
    formulation: FormulationArg,
    /// Oracle grid start.
    #[arg(long)]
    r_min: Option<f64>,
    /// Oracle grid end; defaults from λ and the binding energy.
    #[arg(long)]
    r_max: Option<f64>,
    /// Oracle grid points at the coarsest level.
    #[arg(long)]
    fd_points: Option<usize>,
    /// Richardson levels for the oracle.
    #[arg(long)]
    fd_levels: Option<usize>,
}

impl SolverArgs {
    fn method(&self) -> Method {
        match self.method {
            MethodArg::Aim => Method::Aim,
            MethodArg::OracleExact => Method::OracleExact,
            MethodArg::OraclePekeris => Method::OraclePekeris,
        }
    }

    fn aim(&self) -> Result<AimSettings> {
        if !(self.tol > 0.0) {
            bail!("tol must be > 0, got {}", self.tol);
        }
        Ok(AimSettings {
            x0: self.x0,
            k_max: self.kmax,
            precision_bits: self.precision_bits,
            e_min: self.e_min,
            e_max: self.e_max,
            e_grid_points: self.grid_points,
            root_tol: self.tol / 10.0,
            stability_tol: self.tol,
            k_step: self.k_step,
            formulation: match self.formulation {
                FormulationArg::Factored => FormulationDto::Factored,
                FormulationArg::Direct => FormulationDto::Direct,
            },
            ..AimSettings::default()
        })
    }

    fn oracle(&self) -> OracleSettings {
        let d = OracleSettings::default();
        OracleSettings {
            r_min: self.r_min.unwrap_or(d.r_min),
            r_max: self.r_max.or(d.r_max),
            n_points: self.fd_points.unwrap_or(d.n_points),
            levels: self.fd_levels.unwrap_or(d.levels),
        }
    }

    fn run(&self, problem: &ProblemArgs) -> Result<RunConfig> {
        Ok(RunConfig {
            v0: problem.v0,
            gamma: problem.gamma,
            lambda_sq: problem.lambda_sq()?,
            method: self.method(),
            aim: self.aim()?,
            oracle: self.oracle(),
        })
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutArgs {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

/// Exit code for a finished run; any error maps to invalid input.
fn execute(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve { problem, solver, out } => {
            let run = solver.run(&problem)?;
            run::validate(&run, problem.ell)?;
            let report = run::solve(&run, problem.ell)?;
            out.emit(&output::spectrum(std::slice::from_ref(&report), out.format)?)?;
            Ok(if report.roots.is_empty() { EXIT_UNCONVERGED } else { 0 })
        }
        Command::Table { id, solver, out } => {
            if solver.method() != Method::Aim {
                bail!("table always runs the AIM solver; drop --method");
            }
            let aim = solver.aim()?;
            let report = run::table_report(id, &aim)?;
            out.emit(&output::comparison(&report, out.format)?)?;
            Ok(if report.passed() { 0 } else { EXIT_UNCONVERGED })
        }
        Command::Sweep { problem, ell_max, n_max, solver, out } => {
            let run = solver.run(&problem)?;
            run::validate(&run, problem.ell)?;
            if ell_max < problem.ell {
                bail!("--ell-max {ell_max} is below --ell {}", problem.ell);
            }
            let report = run::sweep_report(&run, problem.ell, ell_max, n_max)?;
            out.emit(&output::sweep(&report, out.format)?)?;
            if out.format == Format::Csv {
                eprint!("{}", output::monotonicity_lines(&report));
            }
            Ok(0)
        }
        Command::Compare { problem, solver, out } => {
            let run = solver.run(&problem)?;
            run::validate(&RunConfig { method: Method::Aim, ..run.clone() }, problem.ell)?;
            let (report, aim) = run::compare_report(&run, problem.ell)?;
            out.emit(&output::comparison(&report, out.format)?)?;
            Ok(if aim.roots.is_empty() { EXIT_UNCONVERGED } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
