use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use super::config::{check_order, OutputFormat, Overrides, RunConfig, DEFAULT_STEPS};
use super::serialize::{element_to_csv, element_to_json, element_to_text};
use super::verify::{render_text, run_verification, VerifyOptions};
use super::{CliError, EXIT_OK, EXIT_USAGE};
use crate::engine::{Algebra, AlgebraError, Element, Fault, Mode, DEFAULT_ORDER};
use crate::numeric::{convergence_study, Problem, QuadratureRule};

#[derive(Debug, Parser)]
#[command(
    name = "postlie-magnus",
    version,
    about = "Exact post-Lie and pre-Lie Magnus expansions over planar rooted trees"
)]
pub struct Cli {
    /// Flat key = value file; flags override its entries.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Truncation order (for magnus-solve: number of Magnus terms, 1..=3).
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// postlie (planar trees, default) or prelie (abelianized)
    #[arg(long, global = true, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Output file (for magnus-solve: path prefix of the .csv and .json report).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Post-Lie Magnus expansion of the generator.
    Chi,
    /// Run the identity suites; exit 1 if any fails.
    Verify {
        /// Only run suites whose name contains this text.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Convergence study of the truncated Magnus propagator.
    MagnusSolve {
        /// xty, commuting, skew3, or poly:<json list of coefficient matrices>.
        #[arg(long)]
        problem: Option<String>,
        /// Comma separated step sizes, geometrically spaced.
        #[arg(long)]
        steps: Option<String>,
    },
    /// Evaluate one operation on tree-word operands.
    Table {
        #[arg(value_enum)]
        op: TableOp,
        operands: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    GlSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableOp {
    Gl,
    Theta,
    ThetaInv,
    BchH,
    BchG,
    Star,
    Upsilon,
}

impl TableOp {
    fn arity(self) -> usize {
        match self {
            TableOp::Theta | TableOp::ThetaInv => 1,
            _ => 2,
        }
    }
}

/// Parses arguments, runs the command and returns the exit status.
/// Everything meant for the user is written to `stdout` or `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn usage(e: AlgebraError) -> CliError {
    CliError::Usage(e.to_string())
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (only, problem, steps) = match &cli.command {
        Command::Verify { only, .. } => (only.clone(), None, None),
        Command::MagnusSolve { problem, steps } => (None, problem.clone(), steps.clone()),
        _ => (None, None, None),
    };
    let config = RunConfig::resolve(
        cli.config.as_deref(),
        Overrides {
            mode: cli.mode,
            order: cli.order,
            format: cli.format,
            out: cli.out.clone(),
            only,
            problem,
            steps,
        },
    )?;
    match cli.command {
        Command::Chi => cmd_chi(&config, stdout),
        Command::Verify { inject_fault, .. } => cmd_verify(&config, inject_fault, stdout),
        Command::MagnusSolve { .. } => cmd_magnus_solve(&config, stdout),
        Command::Table { op, operands } => cmd_table(&config, op, &operands, stdout),
    }
}

fn emit(config: &RunConfig, body: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &config.out {
        Some(path) => std::fs::write(path, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

fn render_element(e: &Element, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => element_to_text(e),
        OutputFormat::Json => element_to_json(e),
        OutputFormat::Csv => element_to_csv(e),
    }
}

pub fn cmd_chi(config: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let order = check_order(config.order.unwrap_or(DEFAULT_ORDER))?;
    let alg = Algebra::new(config.mode, order).map_err(usage)?;
    let chi = alg.post_lie_magnus(&alg.generator()).map_err(usage)?;
    emit(config, &render_element(&chi, config.format), stdout)?;
    Ok(EXIT_OK)
}

pub fn cmd_verify(
    config: &RunConfig,
    fault: Option<FaultArg>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let outcomes = run_verification(&VerifyOptions {
        order: config.order,
        only: config.only.clone(),
        fault: fault.map(|FaultArg::GlSign| Fault::GlSign),
    });
    if outcomes.is_empty() {
        return Err(CliError::Usage(format!(
            "no suite matches '{}'",
            config.only.as_deref().unwrap_or_default()
        )));
    }
    let body = match config.format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(&outcomes).expect("outcomes serialize") + "\n"
        }
        OutputFormat::Csv => {
            let mut s = String::from("suite,passed,tolerance,worst_residual\n");
            for o in &outcomes {
                s.push_str(&format!(
                    "\"{}\",{},{},{:e}\n",
                    o.name, o.passed, o.tolerance, o.worst_residual
                ));
            }
            s
        }
        OutputFormat::Text => render_text(&outcomes),
    };
    emit(config, &body, stdout)?;
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.name)
        .collect();
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}

/// Default path prefix of the magnus-solve report files.
pub const DEFAULT_REPORT_PREFIX: &str = "magnus-report";

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn cmd_magnus_solve(config: &RunConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let spec = config.problem.as_deref().unwrap_or("xty");
    let problem = Problem::parse(spec).map_err(|e| CliError::Usage(e.to_string()))?;
    let truncation = config.order.unwrap_or(3);
    let steps = config
        .steps
        .clone()
        .unwrap_or_else(|| DEFAULT_STEPS.to_vec());
    let rule = QuadratureRule::gauss_legendre(QuadratureRule::DEFAULT_NODES, 1);
    let report = convergence_study(&problem, truncation, &steps, &rule)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let prefix = config
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_REPORT_PREFIX));
    let csv_path = with_extension(&prefix, "csv");
    let json_path = with_extension(&prefix, "json");
    std::fs::write(&csv_path, report.to_csv())?;
    std::fs::write(&json_path, report.to_json())?;
    match config.format {
        OutputFormat::Json => stdout.write_all(report.to_json().as_bytes())?,
        OutputFormat::Csv => stdout.write_all(report.to_csv().as_bytes())?,
        OutputFormat::Text => {
            for row in &report.rows {
                writeln!(stdout, "h = {:<10} error = {:.6e}", row.h, row.error)?;
            }
            match report.fitted_slope {
                Some(s) => writeln!(stdout, "fitted slope: {s:.4}")?,
                None => writeln!(stdout, "fitted slope: exact (errors at rounding level)")?,
            }
            writeln!(
                stdout,
                "report: {} {}",
                csv_path.display(),
                json_path.display()
            )?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_table(
    config: &RunConfig,
    op: TableOp,
    operands: &[String],
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    if operands.len() != op.arity() {
        return Err(CliError::Usage(format!(
            "{} takes {} operand(s), got {}",
            op.to_possible_value().expect("named").get_name(),
            op.arity(),
            operands.len()
        )));
    }
    let order = check_order(config.order.unwrap_or(DEFAULT_ORDER))?;
    let alg = Algebra::new(config.mode, order).map_err(usage)?;
    let mut parsed = Vec::with_capacity(operands.len());
    for (i, s) in operands.iter().enumerate() {
        let e = alg
            .parse_element(s)
            .map_err(|e| CliError::Usage(format!("operand {}: {e}", i + 1)))?;
        parsed.push(e);
    }
    let result = match op {
        TableOp::Gl => alg.gl_mul(&parsed[0], &parsed[1]),
        TableOp::Theta => alg.theta(&parsed[0]),
        TableOp::ThetaInv => alg.theta_inverse(&parsed[0]),
        TableOp::BchH => alg.bch_h(&parsed[0], &parsed[1]).map_err(usage)?,
        TableOp::BchG => alg.bch_g(&parsed[0], &parsed[1]).map_err(usage)?,
        TableOp::Star => alg.star_group(&parsed[0], &parsed[1]).map_err(usage)?,
        TableOp::Upsilon => alg.upsilon(&parsed[0], &parsed[1]),
    };
    emit(config, &render_element(&result, config.format), stdout)?;
    Ok(EXIT_OK)
}
