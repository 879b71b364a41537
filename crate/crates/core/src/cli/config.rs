//! Run configuration: a flat `key = value` file whose entries are overridden
//! by command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::engine::{Mode, MAX_ORDER};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!(
                "unknown format '{other}' (expected text, json or csv)"
            )),
        }
    }
}

pub const CONFIG_KEYS: [&str; 7] = ["mode", "order", "format", "out", "only", "problem", "steps"];

pub const DEFAULT_STEPS: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

/// Settings shared by every subcommand. `None` means "use the command's
/// default".
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub mode: Mode,
    pub order: Option<usize>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub only: Option<String>,
    pub problem: Option<String>,
    pub steps: Option<Vec<f64>>,
}

/// Values given on the command line; each one wins over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub order: Option<usize>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub only: Option<String>,
    pub problem: Option<String>,
    pub steps: Option<String>,
}

/// Parses `key = value` lines. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config line {}: expected key = value",
                n + 1
            )));
        };
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key '{key}'",
                n + 1
            )));
        }
        if map
            .insert(key.to_string(), value.trim().to_string())
            .is_some()
        {
            return Err(CliError::Usage(format!(
                "config line {}: duplicate key '{key}'",
                n + 1
            )));
        }
    }
    Ok(map)
}

pub fn parse_steps(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad step size '{}'", p.trim())))
        })
        .collect()
}

pub fn check_order(order: usize) -> Result<usize, CliError> {
    if order == 0 || order > MAX_ORDER {
        Err(CliError::Usage(format!(
            "order {order} outside 1..={MAX_ORDER}"
        )))
    } else {
        Ok(order)
    }
}

impl RunConfig {
    pub fn resolve(config: Option<&Path>, flags: Overrides) -> Result<Self, CliError> {
        let file = match config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        Self::from_parts(&file, flags)
    }

    pub fn from_parts(file: &BTreeMap<String, String>, flags: Overrides) -> Result<Self, CliError> {
        let get = |k: &str| file.get(k).map(String::as_str);
        let mode = match (flags.mode, get("mode")) {
            (Some(m), _) => m,
            (None, Some(s)) => s.parse().map_err(CliError::Usage)?,
            (None, None) => Mode::default(),
        };
        let order = match (flags.order, get("order")) {
            (Some(o), _) => Some(o),
            (None, Some(s)) => Some(
                s.parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("bad order '{s}'")))?,
            ),
            (None, None) => None,
        };
        if let Some(o) = order {
            check_order(o)?;
        }
        let format = match (flags.format, get("format")) {
            (Some(f), _) => f,
            (None, Some(s)) => s.parse().map_err(CliError::Usage)?,
            (None, None) => OutputFormat::default(),
        };
        let steps = match flags.steps.as_deref().or(get("steps")) {
            Some(s) => Some(parse_steps(s)?),
            None => None,
        };
        Ok(RunConfig {
            mode,
            order,
            format,
            out: flags.out.or_else(|| get("out").map(PathBuf::from)),
            only: flags.only.or_else(|| get("only").map(str::to_string)),
            problem: flags.problem.or_else(|| get("problem").map(str::to_string)),
            steps,
        })
    }
}
