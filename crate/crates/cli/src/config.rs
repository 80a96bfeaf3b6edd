use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use fracint::{FracOrder64, FunctionSpec64, Interval64};

/// Flags shared by every subcommand. Unset options take per-command defaults.
#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Order of integration.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Number of derivative terms kept; repeat for several runs.
    #[arg(long = "n")]
    pub n: Vec<usize>,
    /// Truncation index; repeat for several runs.
    #[arg(long = "N")]
    pub big_n: Vec<usize>,
    /// t3, t10, exp, sin, zero, power:<γ> or file:<path.csv>.
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Number of uniform grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Output file (a directory for `tables`); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Resolved settings of one run, echoed into the CSV header.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub alpha: FracOrder64,
    pub n: Vec<usize>,
    pub big_n: Vec<usize>,
    pub function: String,
    pub interval: Interval64,
    pub grid_points: usize,
    pub out: Option<PathBuf>,
}

pub struct Defaults<'a> {
    pub n: &'a [usize],
    pub big_n: &'a [usize],
    pub function: &'a str,
}

impl RunConfig {
    pub fn resolve(command: &'static str, flags: Flags, d: Defaults) -> anyhow::Result<Self> {
        let pick = |given: Vec<usize>, fallback: &[usize]| {
            if given.is_empty() {
                fallback.to_vec()
            } else {
                given
            }
        };
        let grid_points = flags.grid.unwrap_or(fracint::grid::DEFAULT_GRID_POINTS);
        if grid_points < 2 {
            return Err(tagged(
                "invalid_input",
                format!("grid needs at least 2 points, got {grid_points}"),
            ));
        }
        Ok(Self {
            command,
            alpha: FracOrder64::new(flags.alpha.unwrap_or(0.5))?,
            n: pick(flags.n, d.n),
            big_n: pick(flags.big_n, d.big_n),
            function: flags.function.unwrap_or_else(|| d.function.to_string()),
            interval: Interval64::new(flags.a.unwrap_or(0.0), flags.b.unwrap_or(1.0))?,
            grid_points,
            out: flags.out,
        })
    }

    pub fn header(&self) -> Vec<String> {
        let list = |v: &[usize]| {
            v.iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(";")
        };
        vec![
            format!("command={}", self.command),
            format!("alpha={}", self.alpha.value()),
            format!("n={}", list(&self.n)),
            format!("N={}", list(&self.big_n)),
            format!("function={}", self.function),
            format!("interval=[{},{}]", self.interval.a(), self.interval.b()),
            format!("grid={}", self.grid_points),
        ]
    }
}

/// Error tagged with the category printed on the CLI error line.
#[derive(Debug)]
pub struct Tagged {
    pub kind: &'static str,
    pub message: String,
}

impl fmt::Display for Tagged {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Tagged {}

pub fn tagged(kind: &'static str, message: impl Into<String>) -> anyhow::Error {
    Tagged {
        kind,
        message: message.into(),
    }
    .into()
}

pub fn parse_function(spec: &str) -> anyhow::Result<FunctionSpec64> {
    Ok(match spec {
        "t3" => FunctionSpec64::power(3.0),
        "t10" => FunctionSpec64::power(10.0),
        "exp" => FunctionSpec64::exp(),
        "sin" => FunctionSpec64::sin(),
        "zero" => FunctionSpec64::zero(),
        _ => {
            if let Some(g) = spec.strip_prefix("power:") {
                let g: f64 = g
                    .trim()
                    .parse()
                    .map_err(|_| tagged("invalid_input", format!("bad exponent in {spec:?}")))?;
                if !(g > -1.0 && g.is_finite()) {
                    return Err(tagged(
                        "invalid_input",
                        format!("power exponent must exceed -1, got {g}"),
                    ));
                }
                FunctionSpec64::power(g)
            } else if let Some(path) = spec.strip_prefix("file:") {
                read_samples(Path::new(path))?
            } else {
                return Err(tagged(
                    "invalid_input",
                    format!("unknown function {spec:?}"),
                ));
            }
        }
    })
}

/// Two numeric columns `t,x`; `#` lines and a non-numeric first row are skipped.
fn read_samples(path: &Path) -> anyhow::Result<FunctionSpec64> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (mut t, mut x) = (Vec::new(), Vec::new());
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let parsed = match (fields.next(), fields.next()) {
            (Some(a), Some(b)) => a.parse::<f64>().ok().zip(b.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some((tv, xv)) => {
                t.push(tv);
                x.push(xv);
            }
            None if t.is_empty() => continue,
            None => {
                return Err(tagged(
                    "invalid_input",
                    format!("{}:{}: expected two numbers", path.display(), k + 1),
                ))
            }
        }
    }
    Ok(FunctionSpec64::from_samples(t, x)?)
}
