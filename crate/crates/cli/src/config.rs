use clap::{Parser, ValueEnum};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

pub const SEED_ENV: &str = "PLANEFIELD_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Tabulate a count pmf over n = 0..nmax on a point or grid.
    Pmf,
    /// Write a sampled field, point set or batch of draws.
    Simulate,
    /// Run a statistical check and write its report.
    Verify,
    /// Run a governing-equation residual check.
    Pde,
    /// Sweep the scale parameter of a limit and tabulate the CF gap.
    Converge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags as typed on the command line; unset ones fall back to the config file.
#[derive(Debug, Clone, Default, Parser)]
#[command(
    name = "planefield",
    version,
    about = "Poisson random fields on the plane: laws, samplers and checks"
)]
pub struct Args {
    /// Command to run (may also come from the config file).
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// pmf: prf, tfprf, sfprf, stfprf. simulate: also points, cprf_normal,
    /// cprf_exp, cprf_ml, brownian_sheet, stable_sheet, stable, inverse_stable, ml_compound.
    #[arg(long)]
    pub family: Option<String>,
    /// verify: timechange, covariance, limit, increments. pde: prf, fprf, sfprf,
    /// stfprf, subordinator, exp_compound.
    #[arg(long)]
    pub check: Option<String>,
    /// Variant of a verify or converge check.
    #[arg(long)]
    pub variant: Option<String>,
    /// Shorthand order: beta for sfprf and ml_compound, both time orders otherwise.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// Space-fractional order, or the Mittag-Leffler mark order.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Mark scale of exponential and Mittag-Leffler compounding.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub t1: Option<f64>,
    #[arg(long)]
    pub t2: Option<f64>,
    /// Largest count state.
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Number of samples or replications.
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid step.
    #[arg(long)]
    pub h: Option<f64>,
    /// Comma-separated scale parameters for limit and converge.
    #[arg(long)]
    pub scales: Option<String>,
    /// Seed; falls back to PLANEFIELD_SEED.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Flat key=value file with the same keys as the long flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug)]
pub enum ConfigError {
    Usage(String),
    Io(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Usage(m) => write!(f, "{m}"),
            ConfigError::Io(m) => write!(f, "{m}"),
        }
    }
}

fn usage(m: impl Into<String>) -> ConfigError {
    ConfigError::Usage(m.into())
}

const KEYS: [&str; 19] = [
    "command", "family", "check", "variant", "alpha", "alpha1", "alpha2", "beta", "lambda",
    "sigma", "t1", "t2", "nmax", "n", "h", "scales", "seed", "out", "format",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        let k = k.trim().trim_start_matches("--").to_string();
        if !KEYS.contains(&k.as_str()) {
            return Err(usage(format!("config line {}: unknown key '{k}'", i + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn file_value<T: std::str::FromStr>(
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, ConfigError> {
    file.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| usage(format!("config: cannot parse {key} = '{v}'")))
        })
        .transpose()
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub family: Option<String>,
    pub check: Option<String>,
    pub variant: Option<String>,
    pub alpha: Option<f64>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub beta: Option<f64>,
    pub lambda: f64,
    pub sigma: f64,
    pub t1: f64,
    pub t2: f64,
    pub nmax: usize,
    pub n: usize,
    pub h: Option<f64>,
    pub scales: Vec<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

macro_rules! pick {
    ($args:ident, $file:ident, $key:ident) => {
        match $args.$key.clone() {
            Some(v) => Some(v),
            None => file_value(&$file, stringify!($key))?,
        }
    };
}

impl RunConfig {
    /// Flags win over the file; the seed falls back to `env_seed`, then 42.
    pub fn resolve(args: &Args, env_seed: Option<&str>) -> Result<Self, ConfigError> {
        let file = match &args.config {
            Some(p) => read_config_file(p)?,
            None => BTreeMap::new(),
        };
        let command: Command = match args.command {
            Some(c) => c,
            None => match file.get("command") {
                Some(v) => Command::from_str(v, true)
                    .map_err(|_| usage(format!("unknown command '{v}'")))?,
                None => return Err(usage("no command given")),
            },
        };
        let format = match args.format {
            Some(f) => f,
            None => match file.get("format") {
                Some(v) => {
                    Format::from_str(v, true).map_err(|_| usage(format!("unknown format '{v}'")))?
                }
                None => match command {
                    Command::Verify | Command::Pde => Format::Json,
                    _ => Format::Csv,
                },
            },
        };
        let seed = match pick!(args, file, seed) {
            Some(s) => s,
            None => match env_seed {
                Some(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| usage(format!("{SEED_ENV} is not an unsigned integer: '{v}'")))?,
                None => DEFAULT_SEED,
            },
        };
        let scales_text: Option<String> = pick!(args, file, scales);
        let scales = match scales_text {
            Some(s) => s
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| usage(format!("bad scale '{x}'")))
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![5.0, 20.0, 100.0],
        };
        let out = match &args.out {
            Some(p) => Some(p.clone()),
            None => file.get("out").map(PathBuf::from),
        };
        Ok(RunConfig {
            command,
            family: pick!(args, file, family),
            check: pick!(args, file, check),
            variant: pick!(args, file, variant),
            alpha: pick!(args, file, alpha),
            alpha1: pick!(args, file, alpha1),
            alpha2: pick!(args, file, alpha2),
            beta: pick!(args, file, beta),
            lambda: pick!(args, file, lambda).unwrap_or(1.0),
            sigma: pick!(args, file, sigma).unwrap_or(1.0),
            t1: pick!(args, file, t1).unwrap_or(1.0),
            t2: pick!(args, file, t2).unwrap_or(1.0),
            nmax: pick!(args, file, nmax).unwrap_or(10),
            n: pick!(args, file, n).unwrap_or(100_000),
            h: pick!(args, file, h),
            scales,
            seed,
            out,
            format,
        })
    }

    /// Grid step, 1/128 unless set.
    pub fn step(&self) -> f64 {
        self.h.unwrap_or(1.0 / 128.0)
    }

    /// `key=value` lines echoing every setting, sorted by key.
    pub fn echo(&self) -> Vec<String> {
        let v = serde_json::to_value(self).expect("config serializes");
        let obj = v.as_object().expect("config is an object");
        let sorted: BTreeMap<_, _> = obj.iter().collect();
        sorted
            .into_iter()
            .map(|(k, v)| match v {
                serde_json::Value::String(s) => format!("{k}={s}"),
                serde_json::Value::Null => format!("{k}="),
                other => format!("{k}={other}"),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Args {
        Args::try_parse_from(std::iter::once("planefield").chain(v.iter().copied())).unwrap()
    }

    #[test]
    fn config_text_parses_and_rejects() {
        let m = parse_config_text("# c\nlambda = 2\n--t1=0.5 # trailing\n\n").unwrap();
        assert_eq!(m["lambda"], "2");
        assert_eq!(m["t1"], "0.5");
        assert!(parse_config_text("lambda").is_err());
        assert!(parse_config_text("gamma=1").is_err());
    }

    #[test]
    fn defaults_and_env_seed() {
        let c = RunConfig::resolve(&args(&["pmf"]), None).unwrap();
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.scales, vec![5.0, 20.0, 100.0]);
        let c = RunConfig::resolve(&args(&["verify"]), Some("7")).unwrap();
        assert_eq!((c.seed, c.format), (7, Format::Json));
        let c = RunConfig::resolve(&args(&["verify", "--seed", "3"]), Some("7")).unwrap();
        assert_eq!(c.seed, 3);
        assert!(RunConfig::resolve(&args(&["pmf"]), Some("x")).is_err());
        assert!(RunConfig::resolve(&args(&[]), None).is_err());
    }

    #[test]
    fn echo_is_sorted() {
        let c = RunConfig::resolve(&args(&["pmf", "--lambda", "2"]), None).unwrap();
        let e = c.echo();
        let keys: Vec<&str> = e.iter().map(|l| l.split('=').next().unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(e.contains(&"lambda=2.0".to_string()));
        assert!(e.contains(&"command=pmf".to_string()));
    }
}
