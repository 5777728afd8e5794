//! Runs every configured seed and writes its artifacts.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::config::{ConfigError, ExperimentConfig};
use super::export::{self, ExportError, RunMetrics};
use crate::coa::{self, CoaError};
use crate::pareto::{self, ParetoError};

/// Margin of the hypervolume reference point, as a fraction of the reference
/// front's range in each objective.
pub const HV_MARGIN: f64 = 0.1;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("reference front: {0}")]
    Reference(#[from] ParetoError),
    #[error("seed {seed}: {source}")]
    Run {
        seed: u64,
        #[source]
        source: CoaError,
    },
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("experiments need exactly two objectives, problem has {0}")]
    Objectives(usize),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// File names of one run's artifacts.
pub fn artifact_name(kind: &str, problem: &str, seed: u64, ext: &str) -> String {
    format!("{kind}_{problem}_{seed}.{ext}")
}

struct Writer {
    written: Vec<PathBuf>,
    dir: PathBuf,
}

impl Writer {
    fn put(&mut self, name: &str, contents: &str) -> Result<(), ExperimentError> {
        let path = self.dir.join(name);
        let res = fs::write(&path, contents);
        // Track before checking, so a half-written file is removed too.
        self.written.push(path.clone());
        res.map_err(|source| ExperimentError::Io { path, source })
    }

    fn rollback(&self) {
        for p in &self.written {
            let _ = fs::remove_file(p);
        }
    }
}

/// Runs all seeds of `cfg`, writing artifacts into `cfg.out_dir` and one
/// summary line per seed to `log`. On error, files written by this call are
/// removed.
pub fn run_experiment(cfg: &ExperimentConfig, log: &mut dyn Write) -> Result<Vec<RunMetrics>, ExperimentError> {
    let problem = cfg.build_problem()?;
    if problem.n_objectives() != 2 {
        return Err(ExperimentError::Objectives(problem.n_objectives()));
    }
    let reference = pareto::reference_front(&problem, cfg.grid)?;
    let hv_ref = pareto::hypervolume_reference_point(&reference, HV_MARGIN);
    let reference_hv = pareto::hypervolume_2d(&reference, hv_ref);

    ensure_dir(&cfg.out_dir)?;
    let mut w = Writer {
        written: Vec::new(),
        dir: cfg.out_dir.clone(),
    };
    let mut all = Vec::with_capacity(cfg.seeds.len());
    let res = (|| {
        for &seed in &cfg.seeds {
            let mut coa_cfg = cfg.coa.clone();
            coa_cfg.seed = seed;
            coa_cfg.hv_reference = Some(hv_ref);
            let result = coa::run(&problem, &coa_cfg).map_err(|source| ExperimentError::Run { seed, source })?;
            let front = result.frontier_objectives();
            let metrics = RunMetrics {
                problem: problem.name().to_string(),
                seed,
                frontier_size: front.len(),
                generational_distance: if front.is_empty() {
                    f64::NAN
                } else {
                    pareto::generational_distance(&front, &reference)?
                },
                hypervolume: pareto::hypervolume_2d(&front, hv_ref),
                spacing: pareto::spacing(&front),
                hv_reference: hv_ref,
                reference_size: reference.len(),
                reference_hypervolume: reference_hv,
            };
            let name = problem.name();
            if cfg.formats.csv {
                w.put(&artifact_name("frontier", name, seed, "csv"), &export::frontier_csv(&result.frontier)?)?;
                w.put(&artifact_name("history", name, seed, "csv"), &export::history_csv(&result.history))?;
                w.put(&artifact_name("metrics", name, seed, "csv"), &metrics.csv())?;
            }
            if cfg.formats.svg {
                let title = format!("{name} seed {seed}");
                w.put(
                    &artifact_name("front", name, seed, "svg"),
                    &export::frontier_svg(&title, &front, &reference)?,
                )?;
            }
            let _ = writeln!(log, "{}", metrics.summary_line());
            all.push(metrics);
        }
        Ok(())
    })();
    match res {
        Ok(()) => Ok(all),
        Err(e) => {
            w.rollback();
            Err(e)
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<(), ExperimentError> {
    let io = |source| ExperimentError::Io {
        path: dir.to_path_buf(),
        source,
    };
    fs::create_dir_all(dir).map_err(io)?;
    // Probe writability up front so an unusable directory fails before any
    // run is spent.
    let probe = dir.join(".coadea-write-probe");
    fs::write(&probe, b"").map_err(io)?;
    let _ = fs::remove_file(&probe);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::parse_config_text;

    #[test]
    fn writes_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let text = format!("problem = 2\nseed = 3,4\niters = 3\nout = {}\n", dir.path().display());
        let cfg = parse_config_text(&text).unwrap();
        let mut log = Vec::new();
        let metrics = run_experiment(&cfg, &mut log).unwrap();
        assert_eq!(metrics.len(), 2);
        for seed in [3, 4] {
            for (kind, ext) in [("frontier", "csv"), ("history", "csv"), ("metrics", "csv"), ("front", "svg")] {
                assert!(dir.path().join(artifact_name(kind, "problem2", seed, ext)).is_file());
            }
        }
        let log = String::from_utf8(log).unwrap();
        assert_eq!(log.lines().count(), 2);
        assert!(log.lines().next().unwrap().starts_with("problem2 seed=3 "));
    }

    #[test]
    fn unwritable_directory_fails_cleanly() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain");
        fs::write(&file, "x").unwrap();
        let text = format!("problem = 1\niters = 1\nout = {}\n", file.join("sub").display());
        let cfg = parse_config_text(&text).unwrap();
        let err = run_experiment(&cfg, &mut Vec::new()).unwrap_err();
        assert!(matches!(err, ExperimentError::Io { .. }));
    }
}
