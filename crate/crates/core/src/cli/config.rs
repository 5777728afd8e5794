//! Experiment configuration from `key = value` files and command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::coa::CoaConfig;
use crate::problem::{self, ProblemError, ProblemSpec};

pub const DEFAULT_GRID: usize = 200;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("no problem selected (use --problem or a `problem` key)")]
    MissingProblem,
    #[error("unknown builtin problem {0} (expected 1-4)")]
    UnknownBuiltin(String),
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: String, key: String },
    #[error("{origin}: malformed line `{line}` (expected key = value)")]
    MalformedLine { origin: String, line: String },
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },
    #[error("conflicting bounds: {0}")]
    ConflictingBounds(String),
    #[error("invalid problem: {0}")]
    Problem(#[from] ProblemError),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Parser)]
#[command(name = "coadea", version, about = "Cuckoo optimization with DEA efficiency for bi-objective Pareto frontiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment and write CSV/SVG artifacts.
    Run(RunArgs),
}

/// Flags of `coadea run`. Every flag also exists as a config-file key.
#[derive(Debug, Default, Clone, Args)]
pub struct RunArgs {
    /// Builtin id (1-4), builtin name (problem1..problem4) or a problem file.
    #[arg(long)]
    pub problem: Option<String>,
    /// Config file of `key = value` lines; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated seeds, one run each.
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub pop: Option<usize>,
    #[arg(long = "min-eggs")]
    pub min_eggs: Option<usize>,
    #[arg(long = "max-eggs")]
    pub max_eggs: Option<usize>,
    #[arg(long, visible_alias = "max-iterations")]
    pub iters: Option<usize>,
    #[arg(long)]
    pub clusters: Option<usize>,
    #[arg(long = "max-pop")]
    pub max_pop: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub motion: Option<f64>,
    #[arg(long = "epsilon-shift")]
    pub epsilon_shift: Option<f64>,
    #[arg(long = "eff-tol")]
    pub eff_tol: Option<f64>,
    /// Reference-front grid points per decision variable.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output formats, comma-separated subset of `csv,svg`.
    #[arg(long)]
    pub formats: Option<String>,
    /// Report the last iteration's efficient habitats only.
    #[arg(long = "final-iteration-only")]
    pub final_iteration_only: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSelector {
    Builtin(u32),
    Custom(CustomProblem),
}

/// A problem written as expression strings over `x1..xn`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CustomProblem {
    pub name: String,
    pub objectives: Vec<String>,
    pub constraints: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputFormats {
    pub csv: bool,
    pub svg: bool,
}

impl Default for OutputFormats {
    fn default() -> Self {
        OutputFormats {
            csv: true,
            svg: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSelector,
    pub lower: Option<Vec<f64>>,
    pub upper: Option<Vec<f64>>,
    /// `seed` and `hv_reference` are filled in per run.
    pub coa: CoaConfig,
    pub seeds: Vec<u64>,
    pub grid: usize,
    pub out_dir: PathBuf,
    pub formats: OutputFormats,
}

impl ExperimentConfig {
    /// The selected problem with any bound overrides applied.
    pub fn build_problem(&self) -> Result<ProblemSpec, ConfigError> {
        let base = match &self.problem {
            ProblemSelector::Builtin(id) => problem::builtin(*id)?,
            ProblemSelector::Custom(c) => {
                let (lower, upper) = match (&self.lower, &self.upper) {
                    (Some(l), Some(u)) => (l.clone(), u.clone()),
                    _ => {
                        return Err(ConfigError::Invalid(
                            "custom problems need both `lower` and `upper`".into(),
                        ))
                    }
                };
                let objectives: Vec<&str> = c.objectives.iter().map(String::as_str).collect();
                let constraints: Vec<&str> = c.constraints.iter().map(String::as_str).collect();
                let name = if c.name.is_empty() { "custom" } else { &c.name };
                return Ok(ProblemSpec::from_expressions(name, &objectives, &constraints, lower, upper)?);
            }
        };
        let lower = self.lower.clone().unwrap_or_else(|| base.lower_bound().to_vec());
        let upper = self.upper.clone().unwrap_or_else(|| base.upper_bound().to_vec());
        Ok(base.with_bounds(lower, upper)?)
    }
}

/// Accumulates settings; later `set` calls win.
#[derive(Debug, Default)]
struct Draft {
    problem: Option<ProblemSelector>,
    custom: CustomProblem,
    n_var_hint: Option<usize>,
    lower: Option<Vec<f64>>,
    upper: Option<Vec<f64>>,
    coa: CoaConfig,
    seeds: Option<Vec<u64>>,
    grid: Option<usize>,
    out_dir: Option<PathBuf>,
    formats: Option<OutputFormats>,
}

fn canonical_key(key: &str) -> String {
    let k = key.trim().to_ascii_lowercase().replace('_', "-");
    let alias = match k.as_str() {
        "seeds" => "seed",
        "initial-population" => "pop",
        "max-iterations" => "iters",
        "num-clusters" => "clusters",
        "max-population" => "max-pop",
        "elr-alpha" => "alpha",
        "motion-coefficient" => "motion",
        "grid-points" => "grid",
        "output" | "out-dir" => "out",
        "variables" => "n-var",
        other => other,
    };
    alias.to_string()
}

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.into(),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| invalid(key, value, e.to_string()))
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    let items: Vec<T> = value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_num(key, s))
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(invalid(key, value, "empty list"));
    }
    Ok(items)
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "" | "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(invalid(key, value, "expected true or false")),
    }
}

/// Resolves a `problem` value: an integer id, a builtin name, or a path to a
/// problem file (returned for the caller to load).
enum ProblemRef {
    Selector(ProblemSelector),
    File(PathBuf),
}

fn resolve_problem(value: &str, base_dir: Option<&Path>) -> Result<ProblemRef, ConfigError> {
    let v = value.trim();
    if let Ok(id) = v.parse::<i64>() {
        return match u32::try_from(id) {
            Ok(id) if problem::BUILTIN_IDS.contains(&id) => Ok(ProblemRef::Selector(ProblemSelector::Builtin(id))),
            _ => Err(ConfigError::UnknownBuiltin(v.to_string())),
        };
    }
    if let Ok(p) = problem::builtin_by_name(v) {
        let id = p.name().trim_start_matches("problem").parse().unwrap();
        return Ok(ProblemRef::Selector(ProblemSelector::Builtin(id)));
    }
    let path = match base_dir {
        Some(dir) if Path::new(v).is_relative() => dir.join(v),
        _ => PathBuf::from(v),
    };
    if path.is_file() {
        Ok(ProblemRef::File(path))
    } else if v.contains(['/', '\\', '.']) {
        Err(ConfigError::Io {
            path,
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such problem file"),
        })
    } else {
        Err(ConfigError::UnknownBuiltin(v.to_string()))
    }
}

impl Draft {
    fn set(&mut self, raw_key: &str, value: &str, origin: &str, base_dir: Option<&Path>) -> Result<(), ConfigError> {
        let key = canonical_key(raw_key);
        let c = &mut self.coa;
        match key.as_str() {
            "problem" => match resolve_problem(value, base_dir)? {
                ProblemRef::Selector(sel) => self.problem = Some(sel),
                ProblemRef::File(path) => {
                    let file = read_file(&path)?;
                    let dir = path.parent().map(Path::to_path_buf);
                    self.apply_text(&file, &path.display().to_string(), dir.as_deref())?;
                    if self.problem.is_none() {
                        self.problem = Some(ProblemSelector::Custom(CustomProblem::default()));
                    }
                }
            },
            "name" => self.custom.name = value.trim().to_string(),
            "objective" => {
                self.custom.objectives.push(value.trim().to_string());
                self.problem = Some(ProblemSelector::Custom(CustomProblem::default()));
            }
            "constraint" => self.custom.constraints.push(value.trim().to_string()),
            "n-var" => self.n_var_hint = Some(parse_num(&key, value)?),
            "lower" => self.lower = Some(parse_list(&key, value)?),
            "upper" => self.upper = Some(parse_list(&key, value)?),
            "seed" => self.seeds = Some(parse_list(&key, value)?),
            "pop" => c.initial_population = parse_num(&key, value)?,
            "min-eggs" => c.min_eggs = parse_num(&key, value)?,
            "max-eggs" => c.max_eggs = parse_num(&key, value)?,
            "iters" => c.max_iterations = parse_num(&key, value)?,
            "clusters" => c.num_clusters = parse_num(&key, value)?,
            "max-pop" => c.max_population = parse_num(&key, value)?,
            "alpha" => c.elr_alpha = parse_num(&key, value)?,
            "motion" => c.motion_coefficient = parse_num(&key, value)?,
            "epsilon-shift" => c.epsilon_shift = parse_num(&key, value)?,
            "eff-tol" => c.eff_tol = parse_num(&key, value)?,
            "final-iteration-only" => c.final_iteration_only = parse_bool(&key, value)?,
            "grid" => self.grid = Some(parse_num(&key, value)?),
            "out" => self.out_dir = Some(PathBuf::from(value.trim())),
            "formats" => {
                let mut f = OutputFormats { csv: false, svg: false };
                for item in value.split(',').map(|s| s.trim().to_ascii_lowercase()) {
                    match item.as_str() {
                        "csv" => f.csv = true,
                        "svg" => f.svg = true,
                        "" => {}
                        _ => return Err(invalid(&key, value, "expected csv and/or svg")),
                    }
                }
                if !f.csv && !f.svg {
                    return Err(invalid(&key, value, "no output format selected"));
                }
                self.formats = Some(f);
            }
            _ => {
                return Err(ConfigError::UnknownKey {
                    origin: origin.to_string(),
                    key: raw_key.trim().to_string(),
                })
            }
        }
        Ok(())
    }

    fn apply_text(&mut self, text: &str, origin: &str, base_dir: Option<&Path>) -> Result<(), ConfigError> {
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::MalformedLine {
                    origin: origin.to_string(),
                    line: line.to_string(),
                });
            };
            self.set(key, value, origin, base_dir)?;
        }
        Ok(())
    }

    fn apply_flags(&mut self, args: &RunArgs) -> Result<(), ConfigError> {
        let mut pairs: Vec<(&str, String)> = Vec::new();
        if let Some(v) = &args.problem {
            pairs.push(("problem", v.clone()));
        }
        if let Some(v) = &args.seed {
            pairs.push(("seed", v.clone()));
        }
        let counts = [
            ("pop", args.pop),
            ("min-eggs", args.min_eggs),
            ("max-eggs", args.max_eggs),
            ("iters", args.iters),
            ("clusters", args.clusters),
            ("max-pop", args.max_pop),
            ("grid", args.grid),
        ];
        pairs.extend(counts.iter().filter_map(|(k, v)| v.map(|v| (*k, v.to_string()))));
        let reals = [
            ("alpha", args.alpha),
            ("motion", args.motion),
            ("epsilon-shift", args.epsilon_shift),
            ("eff-tol", args.eff_tol),
        ];
        pairs.extend(reals.iter().filter_map(|(k, v)| v.map(|v| (*k, v.to_string()))));
        if let Some(v) = &args.out {
            pairs.push(("out", v.display().to_string()));
        }
        if let Some(v) = &args.formats {
            pairs.push(("formats", v.clone()));
        }
        if args.final_iteration_only {
            pairs.push(("final-iteration-only", "true".into()));
        }
        for (k, v) in pairs {
            self.set(k, &v, "command line", None)?;
        }
        Ok(())
    }

    fn finish(self) -> Result<ExperimentConfig, ConfigError> {
        let problem = match self.problem.ok_or(ConfigError::MissingProblem)? {
            ProblemSelector::Builtin(id) => ProblemSelector::Builtin(id),
            ProblemSelector::Custom(_) => {
                if self.custom.objectives.len() < 2 {
                    return Err(ConfigError::Invalid(
                        "custom problems need at least two `objective` lines".into(),
                    ));
                }
                ProblemSelector::Custom(self.custom)
            }
        };
        if let (Some(l), Some(u)) = (&self.lower, &self.upper) {
            if l.len() != u.len() {
                return Err(ConfigError::ConflictingBounds(format!(
                    "{} lower bounds but {} upper bounds",
                    l.len(),
                    u.len()
                )));
            }
            if let Some(i) = (0..l.len()).find(|&i| l[i] > u[i]) {
                return Err(ConfigError::ConflictingBounds(format!(
                    "x{}: lower {} exceeds upper {}",
                    i + 1,
                    l[i],
                    u[i]
                )));
            }
            if let Some(n) = self.n_var_hint {
                if n != l.len() {
                    return Err(ConfigError::ConflictingBounds(format!(
                        "{n} variables declared but {} bounds given",
                        l.len()
                    )));
                }
            }
        }
        let grid = self.grid.unwrap_or(DEFAULT_GRID);
        if grid < 10 {
            return Err(invalid("grid", &grid.to_string(), "must be at least 10"));
        }
        self.coa
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let cfg = ExperimentConfig {
            problem,
            lower: self.lower,
            upper: self.upper,
            coa: self.coa,
            seeds: self.seeds.unwrap_or_else(|| vec![0]),
            grid,
            out_dir: self.out_dir.unwrap_or_else(|| PathBuf::from(".")),
            formats: self.formats.unwrap_or_default(),
        };
        // Surfaces malformed expressions and bound mismatches now.
        cfg.build_problem()?;
        Ok(cfg)
    }
}

fn read_file(path: &Path) -> Result<String, ConfigError> {
    fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses `key = value` text alone, as if given with no flags.
pub fn parse_config_text(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut d = Draft::default();
    d.apply_text(text, "config", None)?;
    d.finish()
}

/// Config file (if any) first, then flags on top.
pub fn parse_config(args: &RunArgs) -> Result<ExperimentConfig, ConfigError> {
    let mut d = Draft::default();
    if let Some(path) = &args.config {
        let text = read_file(path)?;
        let dir = path.parent().map(Path::to_path_buf);
        d.apply_text(&text, &path.display().to_string(), dir.as_deref())?;
    }
    d.apply_flags(args)?;
    d.finish()
}
