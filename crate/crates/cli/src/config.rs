//! Run configuration: command-line flags merged over an optional
//! `key = value` file. Flags win; unknown keys are rejected.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "fourgeom",
    version,
    about = "Curvature, instanton densities and topological invariants of four-geometries"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Pointwise curvature report at one chart point.
    Analyze(Opts),
    /// Euler characteristic, signature and inequality margins by quadrature.
    Invariants(Opts),
    /// Residuals and densities across a one-parameter family.
    Sweep(Opts),
    /// First-order rigidity study of the linearized biaxial deformation.
    Deform(Opts),
    /// Integrates the nonlinear self-duality equations from the pole.
    Shoot(Opts),
    /// Runs the built-in identity and invariant suite.
    Check(Opts),
}

impl CommandArgs {
    pub fn split(self) -> (Command, Opts) {
        match self {
            CommandArgs::Analyze(o) => (Command::Analyze, o),
            CommandArgs::Invariants(o) => (Command::Invariants, o),
            CommandArgs::Sweep(o) => (Command::Sweep, o),
            CommandArgs::Deform(o) => (Command::Deform, o),
            CommandArgs::Shoot(o) => (Command::Shoot, o),
            CommandArgs::Check(o) => (Command::Check, o),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Invariants,
    Sweep,
    Deform,
    Shoot,
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every command. All are optional so that a config file
/// can supply them.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Plain `key = value` file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// round-s4 | ellipsoid-s4 | biaxial-s4 | page | s2xs2
    #[arg(long)]
    pub geometry: Option<String>,
    /// Family parameters, `name=value,...`.
    #[arg(long)]
    pub params: Option<String>,
    /// Chart point by coordinate name, `theta=0.7,...` (radians).
    #[arg(long)]
    pub point: Option<String>,
    /// Gauss-Legendre nodes per axis.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Tolerance override.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for grid and batch parallelism.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Seed for random sample points.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Swept parameter, `name=lo:hi:count`.
    #[arg(long)]
    pub vary: Option<String>,
    /// Space swept values geometrically.
    #[arg(long)]
    pub log: bool,
    /// Sample points per non-cyclic axis in sweeps.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Add χ and τ columns to a sweep.
    #[arg(long)]
    pub with_invariants: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Flips one pair of η entries before the algebra checks.
    #[arg(long, hide = true)]
    pub inject_eta_flip: bool,
}

/// Inclusive range `lo:hi` sampled at `count` values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RangeSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub log: bool,
}

impl RangeSpec {
    pub fn parse(s: &str, log: bool) -> CliResult<Self> {
        let (name, rest) =
            s.split_once('=').ok_or_else(|| CliError::Usage(format!("range '{s}' must look like name=lo:hi:count")))?;
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Usage(format!("range '{s}' must look like name=lo:hi:count")));
        }
        let lo = parse_real(name, parts[0])?;
        let hi = parse_real(name, parts[1])?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("range count '{}' is not a non-negative integer", parts[2])))?;
        let r = Self { name: name.trim().to_string(), lo, hi, count, log };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> CliResult<()> {
        if self.count == 0 || self.hi < self.lo || (self.count == 1 && self.hi != self.lo) {
            return Err(CliError::Usage(format!(
                "empty range for {}: {}:{}:{}",
                self.name, self.lo, self.hi, self.count
            )));
        }
        if self.log && self.lo <= 0.0 {
            return Err(CliError::Usage(format!("log range for {} needs lo > 0", self.name)));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                let t = k as f64;
                if self.log {
                    self.lo * (self.hi / self.lo).powf(t / n)
                } else {
                    (self.lo * (n - t) + self.hi * t) / n
                }
            })
            .collect()
    }
}

/// Fully resolved and validated configuration of one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub geometry: String,
    pub params: Vec<(String, f64)>,
    pub point: Option<Vec<(String, f64)>>,
    pub nodes: usize,
    pub tol: Option<f64>,
    pub format: Format,
    pub threads: Option<usize>,
    pub seed: u64,
    pub vary: Option<RangeSpec>,
    pub samples: usize,
    pub with_invariants: bool,
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub inject_eta_flip: bool,
}

pub const DEFAULT_NODES: usize = 32;
pub const MAX_NODES: usize = 1024;
pub const DEFAULT_SAMPLES: usize = 5;

const FILE_KEYS: [&str; 13] = [
    "geometry",
    "params",
    "point",
    "nodes",
    "tol",
    "format",
    "threads",
    "seed",
    "vary",
    "log",
    "samples",
    "with_invariants",
    "output",
];

impl RunConfig {
    /// Merges flags over the config file named by `--config`, if any.
    pub fn resolve(command: Command, flags: Opts) -> CliResult<Self> {
        let merged = match &flags.config {
            Some(path) => merge(flags.clone(), read_config_file(path)?),
            None => flags,
        };
        Self::from_opts(command, merged)
    }

    pub fn from_opts(command: Command, o: Opts) -> CliResult<Self> {
        let nodes = o.nodes.unwrap_or(DEFAULT_NODES);
        if nodes == 0 || nodes > MAX_NODES {
            return Err(CliError::Usage(format!("nodes must lie in 1..={MAX_NODES}, got {nodes}")));
        }
        if let Some(t) = o.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!("tol must be positive and finite, got {t}")));
            }
        }
        if o.threads == Some(0) {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        let samples = o.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(CliError::Usage("samples must be at least 1".into()));
        }
        let default_format = if command == Command::Sweep { Format::Csv } else { Format::Json };
        let vary = o.vary.as_deref().map(|s| RangeSpec::parse(s, o.log)).transpose()?;
        if command == Command::Sweep && vary.is_none() {
            return Err(CliError::Usage("sweep needs --vary name=lo:hi:count".into()));
        }
        let default_geometry = if command == Command::Deform { "biaxial-s4" } else { "round-s4" };
        Ok(Self {
            command,
            geometry: o.geometry.unwrap_or_else(|| default_geometry.into()),
            params: o.params.as_deref().map(parse_pairs).transpose()?.unwrap_or_default(),
            point: o.point.as_deref().map(parse_pairs).transpose()?,
            nodes,
            tol: o.tol,
            format: o.format.unwrap_or(default_format),
            threads: o.threads,
            seed: o.seed.unwrap_or(0),
            vary,
            samples,
            with_invariants: o.with_invariants,
            output: o.output,
            inject_eta_flip: o.inject_eta_flip,
        })
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}

fn merge(flags: Opts, file: Opts) -> Opts {
    Opts {
        config: flags.config,
        geometry: flags.geometry.or(file.geometry),
        params: flags.params.or(file.params),
        point: flags.point.or(file.point),
        nodes: flags.nodes.or(file.nodes),
        tol: flags.tol.or(file.tol),
        format: flags.format.or(file.format),
        threads: flags.threads.or(file.threads),
        seed: flags.seed.or(file.seed),
        vary: flags.vary.or(file.vary),
        log: flags.log || file.log,
        samples: flags.samples.or(file.samples),
        with_invariants: flags.with_invariants || file.with_invariants,
        output: flags.output.or(file.output),
        inject_eta_flip: flags.inject_eta_flip,
    }
}

pub fn read_config_file(path: &Path) -> CliResult<Opts> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<Opts> {
    let mut o = Opts::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", lineno + 1)))?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        if !FILE_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", lineno + 1)));
        }
        let int = |v: &str| -> CliResult<u64> {
            v.parse().map_err(|_| CliError::Usage(format!("config key {key}: '{v}' is not a non-negative integer")))
        };
        let flag = |v: &str| -> CliResult<bool> {
            v.parse().map_err(|_| CliError::Usage(format!("config key {key}: '{v}' is not true or false")))
        };
        match key.as_str() {
            "geometry" => o.geometry = Some(value.into()),
            "params" => o.params = Some(value.into()),
            "point" => o.point = Some(value.into()),
            "nodes" => o.nodes = Some(int(value)? as usize),
            "tol" => o.tol = Some(parse_real("tol", value)?),
            "format" => {
                o.format = Some(
                    Format::from_str(value, true).map_err(|_| CliError::Usage(format!("unknown format '{value}'")))?,
                )
            }
            "threads" => o.threads = Some(int(value)? as usize),
            "seed" => o.seed = Some(int(value)?),
            "vary" => o.vary = Some(value.into()),
            "log" => o.log = flag(value)?,
            "samples" => o.samples = Some(int(value)? as usize),
            "with_invariants" => o.with_invariants = flag(value)?,
            "output" => o.output = Some(PathBuf::from(value)),
            _ => unreachable!(),
        }
    }
    Ok(o)
}

fn parse_real(name: &str, v: &str) -> CliResult<f64> {
    let x: f64 = v.trim().parse().map_err(|_| CliError::Usage(format!("{name}: '{v}' is not a number")))?;
    if !x.is_finite() {
        return Err(CliError::Usage(format!("{name}: '{v}' is not finite")));
    }
    Ok(x)
}

/// Parses `a=1,b=2.5`; duplicate names are rejected.
pub fn parse_pairs(s: &str) -> CliResult<Vec<(String, f64)>> {
    let mut out: Vec<(String, f64)> = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) =
            item.split_once('=').ok_or_else(|| CliError::Usage(format!("'{item}' must look like name=value")))?;
        let k = k.trim().to_string();
        if out.iter().any(|(n, _)| *n == k) {
            return Err(CliError::Usage(format!("'{k}' given twice")));
        }
        let v = parse_real(&k, v)?;
        out.push((k, v));
    }
    Ok(out)
}
