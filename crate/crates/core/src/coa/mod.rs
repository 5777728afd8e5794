//! Cuckoo optimization driven by DEA efficiency.
//!
//! Each iteration lays eggs around every cuckoo inside its egg-laying radius,
//! pools eggs with parents, scores the pooled objective vectors with CCR
//! efficiency, archives the efficiency-1 habitats, keeps the best
//! `max_population`, clusters them, and migrates the population toward the
//! best habitat of the most efficient cluster. Eggs and migrations that land
//! outside the feasible region are discarded.

mod cluster;

pub use cluster::{cluster_habitats, Clustering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dea::{self, DeaError};
use crate::pareto::{farthest_point_subset, hypervolume_2d, ArchivedPoint, ParetoArchive};
use crate::problem::ProblemSpec;

/// Consecutive infeasible draws tolerated while seeding the population.
pub const MAX_INIT_REJECTIONS: usize = 10_000;

/// Coordinates closer than this are the same position.
const DUPLICATE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoaError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("feasible region not found for problem {problem} after {attempts} samples")]
    FeasibleRegionNotFound { problem: String, attempts: usize },
    #[error("total egg count is zero")]
    NoEggs,
    #[error("egg count {eggs} exceeds total {total}")]
    EggsExceedTotal { eggs: usize, total: usize },
    #[error("cannot select survivors from an empty population")]
    EmptyPopulation,
    #[error("habitat {0} has not been evaluated")]
    Unevaluated(usize),
    #[error(transparent)]
    Dea(#[from] DeaError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoaConfig {
    pub initial_population: usize,
    pub min_eggs: usize,
    pub max_eggs: usize,
    pub max_iterations: usize,
    pub num_clusters: usize,
    pub max_population: usize,
    /// Egg-laying radius coefficient.
    pub elr_alpha: f64,
    /// Migration step `lambda` is drawn from `[0, motion_coefficient]`.
    pub motion_coefficient: f64,
    pub epsilon_shift: f64,
    pub eff_tol: f64,
    pub seed: u64,
    /// Report only the efficient habitats of the last iteration instead of
    /// accumulating them across the run.
    pub final_iteration_only: bool,
    /// Reference point for the per-iteration archive hypervolume in the
    /// history (two-objective problems only).
    pub hv_reference: Option<[f64; 2]>,
}

impl Default for CoaConfig {
    fn default() -> Self {
        CoaConfig {
            initial_population: 5,
            min_eggs: 2,
            max_eggs: 6,
            max_iterations: 8,
            num_clusters: 2,
            max_population: 50,
            elr_alpha: 1.0,
            motion_coefficient: 2.0,
            epsilon_shift: dea::DEFAULT_EPSILON_SHIFT,
            eff_tol: dea::DEFAULT_EFF_TOL,
            seed: 0,
            final_iteration_only: false,
            hv_reference: None,
        }
    }
}

impl CoaConfig {
    pub fn validate(&self) -> Result<(), CoaError> {
        let bad = |m: &str| Err(CoaError::InvalidConfig(m.to_string()));
        if self.initial_population == 0
            || self.min_eggs == 0
            || self.max_eggs == 0
            || self.num_clusters == 0
            || self.max_population == 0
        {
            return bad("population, egg and cluster counts must be at least 1");
        }
        if self.min_eggs > self.max_eggs {
            return bad("min_eggs exceeds max_eggs");
        }
        if self.initial_population > self.max_population {
            return bad("initial_population exceeds max_population");
        }
        if !(self.elr_alpha > 0.0 && self.elr_alpha.is_finite()) {
            return bad("elr_alpha must be positive");
        }
        if !(self.motion_coefficient > 0.0 && self.motion_coefficient.is_finite()) {
            return bad("motion_coefficient must be positive");
        }
        if !(self.epsilon_shift > 0.0 && self.epsilon_shift.is_finite()) {
            return bad("epsilon_shift must be positive");
        }
        if !(self.eff_tol >= 0.0 && self.eff_tol.is_finite()) {
            return bad("eff_tol must be nonnegative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Efficiency {
    pub score: f64,
    pub efficient: bool,
}

/// A candidate decision vector with its cached objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct Habitat {
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
    pub efficiency: Option<Efficiency>,
}

impl Habitat {
    /// Evaluates objectives at `x`, which must lie within the bounds.
    pub fn at(problem: &ProblemSpec, x: Vec<f64>) -> Self {
        let objectives = problem.evaluate_unchecked(&x);
        Habitat {
            x,
            objectives,
            efficiency: None,
        }
    }

    pub fn score(&self) -> f64 {
        self.efficiency.map_or(0.0, |e| e.score)
    }

    pub fn is_efficient(&self) -> bool {
        self.efficiency.is_some_and(|e| e.efficient)
    }

    fn same_position(&self, other: &[f64]) -> bool {
        self.x
            .iter()
            .zip(other)
            .all(|(a, b)| (a - b).abs() <= DUPLICATE_TOL)
    }
}

fn clip(x: &mut [f64], problem: &ProblemSpec) {
    for ((v, lo), hi) in x.iter_mut().zip(problem.lower_bound()).zip(problem.upper_bound()) {
        *v = v.clamp(*lo, *hi);
    }
}

fn sample_uniform<R: Rng + ?Sized>(problem: &ProblemSpec, rng: &mut R) -> Vec<f64> {
    problem
        .lower_bound()
        .iter()
        .zip(problem.upper_bound())
        .map(|(&lo, &hi)| {
            let v = lo + (hi - lo) * rng.gen::<f64>();
            v.clamp(lo, hi)
        })
        .collect()
}

/// Uniform rejection sampling of `cfg.initial_population` feasible habitats.
pub fn init_population<R: Rng + ?Sized>(
    cfg: &CoaConfig,
    problem: &ProblemSpec,
    rng: &mut R,
) -> Result<Vec<Habitat>, CoaError> {
    let mut out = Vec::with_capacity(cfg.initial_population);
    while out.len() < cfg.initial_population {
        let mut rejections = 0;
        loop {
            let x = sample_uniform(problem, rng);
            if problem.is_feasible(&x).feasible {
                out.push(Habitat::at(problem, x));
                break;
            }
            rejections += 1;
            if rejections >= MAX_INIT_REJECTIONS {
                return Err(CoaError::FeasibleRegionNotFound {
                    problem: problem.name().to_string(),
                    attempts: rejections,
                });
            }
        }
    }
    Ok(out)
}

/// `radius[d] = alpha * eggs / total_eggs * (upper[d] - lower[d])`.
pub fn egg_laying_radius(
    alpha: f64,
    eggs: usize,
    total_eggs: usize,
    lower: &[f64],
    upper: &[f64],
) -> Result<Vec<f64>, CoaError> {
    if total_eggs == 0 {
        return Err(CoaError::NoEggs);
    }
    if eggs > total_eggs {
        return Err(CoaError::EggsExceedTotal {
            eggs,
            total: total_eggs,
        });
    }
    let share = eggs as f64 / total_eggs as f64;
    Ok(lower
        .iter()
        .zip(upper)
        .map(|(lo, hi)| alpha * share * (hi - lo))
        .collect())
}

/// Box-uniform eggs around `parent`, clipped to bounds. Infeasible eggs are
/// killed and coincident eggs collapsed, so fewer than `num_eggs` may return.
pub fn lay_eggs<R: Rng + ?Sized>(
    parent: &Habitat,
    radius: &[f64],
    num_eggs: usize,
    problem: &ProblemSpec,
    rng: &mut R,
) -> Vec<Habitat> {
    let mut eggs: Vec<Habitat> = Vec::with_capacity(num_eggs);
    for _ in 0..num_eggs {
        let mut x: Vec<f64> = parent
            .x
            .iter()
            .zip(radius)
            .map(|(v, r)| v + r * (2.0 * rng.gen::<f64>() - 1.0))
            .collect();
        clip(&mut x, problem);
        if !problem.is_feasible(&x).feasible {
            continue;
        }
        if eggs.iter().any(|e| e.same_position(&x)) {
            continue;
        }
        eggs.push(Habitat::at(problem, x));
    }
    eggs
}

/// Moves one habitat to `x + lambda (goal - x)`, clipped to bounds. An
/// infeasible destination leaves the habitat where it was.
pub fn migrate_one(habitat: &Habitat, goal: &[f64], lambda: f64, problem: &ProblemSpec) -> Habitat {
    let mut x: Vec<f64> = habitat
        .x
        .iter()
        .zip(goal)
        .map(|(v, g)| v + lambda * (g - v))
        .collect();
    clip(&mut x, problem);
    if problem.is_feasible(&x).feasible {
        Habitat::at(problem, x)
    } else {
        Habitat {
            efficiency: None,
            ..habitat.clone()
        }
    }
}

/// Migrates every habitat toward `goal` with its own
/// `lambda ~ U[0, motion_coefficient]`.
pub fn migrate<R: Rng + ?Sized>(
    habitats: &[Habitat],
    goal: &[f64],
    cfg: &CoaConfig,
    problem: &ProblemSpec,
    rng: &mut R,
) -> Vec<Habitat> {
    habitats
        .iter()
        .map(|h| {
            let lambda = cfg.motion_coefficient * rng.gen::<f64>();
            migrate_one(h, goal, lambda, problem)
        })
        .collect()
}

/// Stable sort by efficiency, best first, truncated to `max_population`.
///
/// Efficient habitats always come first. If there are more of them than
/// `max_population`, the most spread-out subset in objective space is kept.
pub fn select_survivors(
    habitats: Vec<Habitat>,
    max_population: usize,
) -> Result<Vec<Habitat>, CoaError> {
    if habitats.is_empty() {
        return Err(CoaError::EmptyPopulation);
    }
    if let Some(i) = habitats.iter().position(|h| h.efficiency.is_none()) {
        return Err(CoaError::Unevaluated(i));
    }
    let (efficient, mut rest): (Vec<Habitat>, Vec<Habitat>) =
        habitats.into_iter().partition(|h| h.is_efficient());

    if efficient.len() > max_population {
        let objectives: Vec<Vec<f64>> = efficient.iter().map(|h| h.objectives.clone()).collect();
        let keep = farthest_point_subset(&objectives, max_population);
        let mut keep = keep.into_iter().peekable();
        return Ok(efficient
            .into_iter()
            .enumerate()
            .filter_map(|(i, h)| {
                if keep.peek() == Some(&i) {
                    keep.next();
                    Some(h)
                } else {
                    None
                }
            })
            .collect());
    }

    rest.sort_by(|a, b| b.score().total_cmp(&a.score()));
    let mut out = efficient;
    let room = max_population - out.len();
    out.extend(rest.into_iter().take(room));
    Ok(out)
}

/// One line of the per-iteration log.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Habitats scored this iteration (parents plus surviving eggs).
    pub evaluated: usize,
    pub efficient: usize,
    pub best_efficiency: f64,
    pub mean_efficiency: f64,
    /// Population carried into the next iteration.
    pub survivors: usize,
    pub archive_size: usize,
    pub archive_hypervolume: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub problem: String,
    pub seed: u64,
    /// Mutually non-dominated efficient habitats.
    pub frontier: Vec<ArchivedPoint>,
    pub history: Vec<IterationRecord>,
}

impl RunResult {
    pub fn frontier_objectives(&self) -> Vec<Vec<f64>> {
        self.frontier.iter().map(|p| p.f.clone()).collect()
    }
}

/// The evolving population, archive and generator of one run.
pub struct CuckooState<'a> {
    problem: &'a ProblemSpec,
    cfg: CoaConfig,
    habitats: Vec<Habitat>,
    iteration: usize,
    archive: ParetoArchive,
    history: Vec<IterationRecord>,
    rng: ChaCha8Rng,
}

impl<'a> CuckooState<'a> {
    /// Seeds the population and scores it as iteration 0.
    pub fn new(problem: &'a ProblemSpec, cfg: &CoaConfig) -> Result<Self, CoaError> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let habitats = init_population(cfg, problem, &mut rng)?;
        let mut state = CuckooState {
            problem,
            cfg: cfg.clone(),
            habitats: Vec::new(),
            iteration: 0,
            archive: ParetoArchive::new(None),
            history: Vec::new(),
            rng,
        };
        let mut scored = habitats;
        state.score_and_archive(&mut scored)?;
        state.habitats = scored;
        Ok(state)
    }

    pub fn habitats(&self) -> &[Habitat] {
        &self.habitats
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn archive(&self) -> &ParetoArchive {
        &self.archive
    }

    pub fn history(&self) -> &[IterationRecord] {
        &self.history
    }

    fn score_and_archive(&mut self, pool: &mut [Habitat]) -> Result<(), CoaError> {
        let objectives: Vec<Vec<f64>> = pool.iter().map(|h| h.objectives.clone()).collect();
        let report = dea::efficiency_scores(&objectives, self.cfg.epsilon_shift, self.cfg.eff_tol)?;
        for (h, (&score, &efficient)) in pool.iter_mut().zip(report.score.iter().zip(&report.efficient)) {
            h.efficiency = Some(Efficiency { score, efficient });
        }
        if self.cfg.final_iteration_only {
            self.archive.clear();
        }
        for h in pool.iter().filter(|h| h.is_efficient()) {
            self.archive.insert(ArchivedPoint {
                x: h.x.clone(),
                f: h.objectives.clone(),
                efficiency: h.score(),
                iteration: self.iteration,
            });
        }
        self.archive.filter();

        let n = pool.len();
        let best = report.score.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = report.score.iter().sum::<f64>() / n as f64;
        let hv = match self.cfg.hv_reference {
            Some(r) if self.problem.n_objectives() == 2 => {
                Some(hypervolume_2d(&self.archive.objectives(), r))
            }
            _ => None,
        };
        self.history.push(IterationRecord {
            iteration: self.iteration,
            evaluated: n,
            efficient: report.efficient.iter().filter(|e| **e).count(),
            best_efficiency: best,
            mean_efficiency: mean,
            survivors: n,
            archive_size: self.archive.len(),
            archive_hypervolume: hv,
        });
        Ok(())
    }

    /// One full egg-laying / scoring / selection / migration cycle.
    pub fn step(&mut self) -> Result<(), CoaError> {
        self.iteration += 1;
        let problem = self.problem;
        let cfg = self.cfg.clone();

        let egg_counts: Vec<usize> = self
            .habitats
            .iter()
            .map(|_| self.rng.gen_range(cfg.min_eggs..=cfg.max_eggs))
            .collect();
        let total: usize = egg_counts.iter().sum();

        let mut pool: Vec<Habitat> = self.habitats.clone();
        for (i, &eggs) in egg_counts.iter().enumerate() {
            let radius = egg_laying_radius(
                cfg.elr_alpha,
                eggs,
                total,
                problem.lower_bound(),
                problem.upper_bound(),
            )?;
            let parent = self.habitats[i].clone();
            for egg in lay_eggs(&parent, &radius, eggs, problem, &mut self.rng) {
                if !pool.iter().any(|h| h.same_position(&egg.x)) {
                    pool.push(egg);
                }
            }
        }

        self.score_and_archive(&mut pool)?;
        let survivors = select_survivors(pool, cfg.max_population)?;
        if let Some(last) = self.history.last_mut() {
            last.survivors = survivors.len();
        }

        let clustering = cluster_habitats(&survivors, cfg.num_clusters, &mut self.rng);
        let goal = clustering
            .members(clustering.goal_cluster)
            .max_by(|&a, &b| survivors[a].score().total_cmp(&survivors[b].score()).then(b.cmp(&a)))
            .map(|i| survivors[i].x.clone())
            .expect("goal cluster is nonempty");
        self.habitats = migrate(&survivors, &goal, &cfg, problem, &mut self.rng);
        Ok(())
    }

    pub fn finish(self) -> RunResult {
        RunResult {
            problem: self.problem.name().to_string(),
            seed: self.cfg.seed,
            frontier: self.archive.into_points(),
            history: self.history,
        }
    }
}

/// Runs `cfg.max_iterations` iterations from a fresh seeded population.
pub fn run(problem: &ProblemSpec, cfg: &CoaConfig) -> Result<RunResult, CoaError> {
    let mut state = CuckooState::new(problem, cfg)?;
    for _ in 0..cfg.max_iterations {
        state.step()?;
    }
    Ok(state.finish())
}
