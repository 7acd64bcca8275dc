//! Whale Optimization Algorithm.
//!
//! Each whale moves toward the best solution found so far by shrinking
//! encirclement, toward a random peer while the step coefficient is large
//! (exploration), or along a logarithmic spiral around the leader. The
//! control parameter `a` decays linearly from 2 to 0.
//!
//! Updates are synchronous: every whale in an iteration reads the previous
//! iteration's positions, and every whale draws from its own seeded ChaCha
//! stream keyed by `(iteration, whale)`. Results therefore do not depend on
//! the order in which fitness values are computed, so a batch can be
//! evaluated on a thread pool.
//!
//! Integer decision variables are handled by rounding and clamping a copy of
//! each position before evaluation while the whale itself keeps moving in
//! continuous space. Among equal fitness values the lexicographically
//! smallest evaluated point is kept.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WoaError {
    #[error("invalid optimizer settings: {0}")]
    InvalidParams(String),
    #[error("fitness is not finite ({value}) at {position:?}")]
    NonFiniteFitness { position: Vec<f64>, value: f64 },
}

/// Population and schedule shared by every WOA run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SwarmSettings {
    pub population_size: usize,
    pub max_iterations: usize,
    /// Logarithmic spiral shape constant `b`.
    pub spiral_constant: f64,
    pub seed: u64,
}

impl Default for SwarmSettings {
    fn default() -> Self {
        Self {
            population_size: 30,
            max_iterations: 100,
            spiral_constant: 1.0,
            seed: 1,
        }
    }
}

impl SwarmSettings {
    pub fn validate(&self) -> Result<(), WoaError> {
        if self.population_size < 2 {
            return Err(WoaError::InvalidParams("population_size must be at least 2".into()));
        }
        if self.max_iterations < 1 {
            return Err(WoaError::InvalidParams("max_iterations must be at least 1".into()));
        }
        if !self.spiral_constant.is_finite() {
            return Err(WoaError::InvalidParams("spiral_constant must be finite".into()));
        }
        Ok(())
    }
}

/// Closed search interval of one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub fn new(lo: f64, hi: f64) -> Result<Self, WoaError> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(WoaError::InvalidParams(format!("invalid bounds [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }
}

/// How positions are projected before evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lattice {
    Continuous,
    /// Round to the nearest integer, then clamp into bounds.
    Integer,
}

impl Lattice {
    fn project(self, position: &[f64], bounds: &[Bounds]) -> Vec<f64> {
        match self {
            Lattice::Continuous => position.to_vec(),
            Lattice::Integer => position
                .iter()
                .zip(bounds)
                .map(|(x, b)| x.round().clamp(b.lo.ceil(), b.hi.floor()))
                .collect(),
        }
    }
}

/// Result of a generic minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub position: Vec<f64>,
    pub fitness: f64,
    /// Best-so-far after the initial population (index 0) and each iteration.
    pub history: Vec<(f64, Vec<f64>)>,
    pub evaluations: usize,
}

fn rng_for(seed: u64, phase: usize, whale: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((phase as u64) << 32) | whale as u64);
    rng
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

struct Leader {
    position: Vec<f64>,
    fitness: f64,
}

impl Leader {
    fn offer(&mut self, position: &[f64], fitness: f64) {
        if fitness < self.fitness || (fitness == self.fitness && lex_less(position, &self.position)) {
            self.fitness = fitness;
            self.position = position.to_vec();
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn move_whale(
    rng: &mut ChaCha8Rng,
    current: &[f64],
    leader: &[f64],
    population: &[Vec<f64>],
    a: f64,
    spiral: f64,
    bounds: &[Bounds],
) -> Vec<f64> {
    let r1: f64 = rng.random();
    let r2: f64 = rng.random();
    let p: f64 = rng.random();
    let l: f64 = rng.random_range(-1.0..=1.0);
    let peer = rng.random_range(0..population.len());

    let coeff_a = 2.0 * a * r1 - a;
    let coeff_c = 2.0 * r2;

    let next = if p < 0.5 {
        let target = if coeff_a.abs() < 1.0 {
            leader
        } else {
            population[peer].as_slice()
        };
        current
            .iter()
            .zip(target)
            .map(|(&x, &t)| t - coeff_a * (coeff_c * t - x).abs())
            .collect::<Vec<_>>()
    } else {
        let factor = (spiral * l).exp() * (TAU * l).cos();
        current
            .iter()
            .zip(leader)
            .map(|(&x, &best)| (best - x).abs() * factor + best)
            .collect()
    };
    next.iter().zip(bounds).map(|(&x, b)| b.clamp(x)).collect()
}

/// Runs the swarm with a batch evaluator: given the projected points of one
/// generation it returns their fitness values in the same order.
fn run<E>(settings: &SwarmSettings, bounds: &[Bounds], lattice: Lattice, mut evaluate: E) -> Result<Minimum, WoaError>
where
    E: FnMut(&[Vec<f64>]) -> Vec<f64>,
{
    settings.validate()?;
    if bounds.is_empty() {
        return Err(WoaError::InvalidParams("at least one dimension is required".into()));
    }
    if lattice == Lattice::Integer && bounds.iter().any(|b| b.lo.ceil() > b.hi.floor()) {
        return Err(WoaError::InvalidParams("bounds contain no integer".into()));
    }

    let n = settings.population_size;
    let mut positions: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut rng = rng_for(settings.seed, 0, i);
            bounds
                .iter()
                .map(|b| b.lo + (b.hi - b.lo) * rng.random::<f64>())
                .collect()
        })
        .collect();

    let mut evaluations = 0;
    let mut score = |positions: &[Vec<f64>], leader: &mut Option<Leader>| -> Result<(), WoaError> {
        let points: Vec<Vec<f64>> = positions.iter().map(|p| lattice.project(p, bounds)).collect();
        let values = evaluate(&points);
        debug_assert_eq!(values.len(), points.len());
        evaluations += points.len();
        for (point, value) in points.iter().zip(values) {
            if !value.is_finite() {
                return Err(WoaError::NonFiniteFitness {
                    position: point.clone(),
                    value,
                });
            }
            match leader {
                Some(l) => l.offer(point, value),
                None => {
                    *leader = Some(Leader {
                        position: point.clone(),
                        fitness: value,
                    })
                }
            }
        }
        Ok(())
    };

    let mut leader = None;
    score(&positions, &mut leader)?;
    let mut leader = leader.expect("population is not empty");
    let mut history = Vec::with_capacity(settings.max_iterations + 1);
    history.push((leader.fitness, leader.position.clone()));

    for t in 0..settings.max_iterations {
        let a = 2.0 - 2.0 * t as f64 / settings.max_iterations as f64;
        let next: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut rng = rng_for(settings.seed, t + 1, i);
                move_whale(
                    &mut rng,
                    &positions[i],
                    &leader.position,
                    &positions,
                    a,
                    settings.spiral_constant,
                    bounds,
                )
            })
            .collect();
        positions = next;
        let mut slot = Some(leader);
        score(&positions, &mut slot)?;
        leader = slot.expect("leader persists");
        history.push((leader.fitness, leader.position.clone()));
    }

    Ok(Minimum {
        position: leader.position,
        fitness: leader.fitness,
        history,
        evaluations,
    })
}

/// Minimize `objective` over the box `bounds`, evaluating sequentially.
pub fn minimize<F>(settings: &SwarmSettings, bounds: &[Bounds], lattice: Lattice, mut objective: F) -> Result<Minimum, WoaError>
where
    F: FnMut(&[f64]) -> f64,
{
    run(settings, bounds, lattice, |points| points.iter().map(|p| objective(p)).collect())
}

/// Same as [`minimize`] with each generation evaluated on the rayon pool.
/// Produces identical results.
pub fn minimize_par<F>(settings: &SwarmSettings, bounds: &[Bounds], lattice: Lattice, objective: F) -> Result<Minimum, WoaError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    run(settings, bounds, lattice, |points| {
        points.par_iter().map(|p| objective(p)).collect()
    })
}

/// Optimizer settings for sizing the panel count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WoaParams {
    #[serde(flatten)]
    pub swarm: SwarmSettings,
    pub n_min: u64,
    pub n_max: u64,
}

impl Default for WoaParams {
    fn default() -> Self {
        Self {
            swarm: SwarmSettings::default(),
            n_min: 0,
            n_max: 30_000,
        }
    }
}

impl WoaParams {
    pub fn validate(&self) -> Result<(), WoaError> {
        self.swarm.validate()?;
        if self.n_min > self.n_max {
            return Err(WoaError::InvalidParams(format!(
                "n_min {} exceeds n_max {}",
                self.n_min, self.n_max
            )));
        }
        Ok(())
    }

    fn bounds(&self) -> Result<[Bounds; 1], WoaError> {
        self.validate()?;
        Ok([Bounds::new(self.n_min as f64, self.n_max as f64)?])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePoint {
    pub iteration: usize,
    pub best_lpsp: f64,
    pub best_n_pv: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SizingOutcome {
    pub best_n_pv: u64,
    pub best_lpsp: f64,
    /// Iteration 0 is the initial population.
    pub convergence: Vec<ConvergencePoint>,
    pub evaluations: usize,
}

impl SizingOutcome {
    fn from_minimum(m: Minimum) -> Self {
        let convergence = m
            .history
            .iter()
            .enumerate()
            .map(|(iteration, (f, p))| ConvergencePoint {
                iteration,
                best_lpsp: *f,
                best_n_pv: p[0] as u64,
            })
            .collect();
        Self {
            best_n_pv: m.position[0] as u64,
            best_lpsp: m.fitness,
            convergence,
            evaluations: m.evaluations,
        }
    }

    /// `iteration,best_lpsp,best_n_pv`.
    pub fn write_convergence_csv<W: std::io::Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(writer);
        out.write_record(["iteration", "best_lpsp", "best_n_pv"])?;
        for c in &self.convergence {
            out.write_record([c.iteration.to_string(), c.best_lpsp.to_string(), c.best_n_pv.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Find the panel count minimizing `fitness` within the configured bounds.
pub fn optimize<F>(params: &WoaParams, mut fitness: F) -> Result<SizingOutcome, WoaError>
where
    F: FnMut(u64) -> f64,
{
    let bounds = params.bounds()?;
    minimize(&params.swarm, &bounds, Lattice::Integer, |x| fitness(x[0] as u64)).map(SizingOutcome::from_minimum)
}

/// Parallel-evaluation variant of [`optimize`]; identical output.
pub fn optimize_par<F>(params: &WoaParams, fitness: F) -> Result<SizingOutcome, WoaError>
where
    F: Fn(u64) -> f64 + Sync,
{
    let bounds = params.bounds()?;
    minimize_par(&params.swarm, &bounds, Lattice::Integer, |x| fitness(x[0] as u64)).map(SizingOutcome::from_minimum)
}

/// Exhaustive evaluation over a strided range.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub entries: Vec<(u64, f64)>,
    /// Smallest panel count attaining the minimum.
    pub best_n_pv: u64,
    pub best_lpsp: f64,
}

pub fn sweep_oracle<F>(n_min: u64, n_max: u64, stride: u64, mut fitness: F) -> Result<SweepTable, WoaError>
where
    F: FnMut(u64) -> f64,
{
    if stride == 0 {
        return Err(WoaError::InvalidParams("stride must be at least 1".into()));
    }
    if n_min > n_max {
        return Err(WoaError::InvalidParams(format!("n_min {n_min} exceeds n_max {n_max}")));
    }
    let entries: Vec<(u64, f64)> = (n_min..=n_max)
        .step_by(stride as usize)
        .map(|n| (n, fitness(n)))
        .collect();
    let (best_n_pv, best_lpsp) = entries
        .iter()
        .copied()
        .fold((n_min, f64::INFINITY), |best, (n, f)| if f < best.1 { (n, f) } else { best });
    Ok(SweepTable {
        entries,
        best_n_pv,
        best_lpsp,
    })
}
