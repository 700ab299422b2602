//! NSGA-II over the bi-objective `(total cost, total constraint violation)`
//! with constrained domination.
//!
//! A run draws every stochastic decision from one seeded ChaCha stream, so
//! identical seed, configuration and instance give an identical
//! [`SolveResult`]. The reported answer is the cheapest zero-violation plan
//! seen during the run.

pub mod encoding;
pub mod operators;
pub mod selection;
pub mod sorting;

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{
    evaluate_constraints, evaluate_cost, validate_instance, CostBreakdown, FlowPlan,
    NetworkInstance, DEFAULT_TOLERANCE,
};
pub use encoding::{decode, Chromosome, GeneLayout};
pub use operators::{crossover, mutate};
pub use selection::{assign_rank_and_crowding, binary_tournament, select_next_generation};
pub use sorting::{crowding_distance, fast_non_dominated_sort, Dominance, ObjectivePair};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub population_size: usize,
    pub crossover_prob: f64,
    /// Per-gene mutation probability.
    pub mutation_prob: f64,
    pub max_generations: usize,
    /// Window for stall detection, in generations.
    pub stall_generations: usize,
    /// Relative improvement of the best feasible cost below which a window
    /// counts as stalled.
    pub stall_tolerance: f64,
    pub seed: u64,
    pub sbx_eta: f64,
    pub pm_eta: f64,
    /// Ranking relation used for sorting and survival.
    pub dominance: Dominance,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            population_size: 50,
            crossover_prob: 0.6,
            mutation_prob: 0.001,
            max_generations: 200,
            stall_generations: 50,
            stall_tolerance: 1e-6,
            seed: 0,
            sbx_eta: 15.0,
            pm_eta: 20.0,
            dominance: Dominance::Constrained,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("population size {0} must be even and at least 4")]
    PopulationSize(usize),
    #[error("{name} = {value} is not a probability")]
    Probability { name: &'static str, value: f64 },
    #[error("max_generations must be at least 1")]
    NoGenerations,
    #[error("{name} = {value} must be finite and non-negative")]
    Parameter { name: &'static str, value: f64 },
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.population_size < 4 || self.population_size % 2 != 0 {
            return Err(ConfigError::PopulationSize(self.population_size));
        }
        for (name, value) in [
            ("crossover_prob", self.crossover_prob),
            ("mutation_prob", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ConfigError::Probability { name, value });
            }
        }
        if self.max_generations == 0 {
            return Err(ConfigError::NoGenerations);
        }
        for (name, value) in [
            ("stall_tolerance", self.stall_tolerance),
            ("sbx_eta", self.sbx_eta),
            ("pm_eta", self.pm_eta),
        ] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ConfigError::Parameter { name, value });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid solver configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("instance fails validation ({0} breaches)")]
    Instance(usize),
}

/// A chromosome together with its decoded plan and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub plan: FlowPlan,
    /// `[total cost, total violation]`
    pub objectives: ObjectivePair,
    /// Front index, 0 being non-dominated.
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    pub fn cost(&self) -> f64 {
        self.objectives[0]
    }

    pub fn violation(&self) -> f64 {
        self.objectives[1]
    }

    pub fn is_feasible(&self) -> bool {
        self.objectives[1] == 0.0
    }
}

/// Decodes and evaluates a chromosome.
///
/// # Panics
/// If the gene count does not match the instance.
pub fn make_individual(chromosome: Chromosome, instance: &NetworkInstance) -> Individual {
    let plan = decode(&chromosome, instance).expect("chromosome sized for instance");
    let objectives = evaluate(&plan, instance);
    Individual {
        chromosome,
        plan,
        objectives,
        rank: usize::MAX,
        crowding: 0.0,
    }
}

/// `[total cost, total violation]` of a decoded plan.
pub fn evaluate(plan: &FlowPlan, instance: &NetworkInstance) -> ObjectivePair {
    let cost = evaluate_cost(instance, plan).expect("decoded plan matches instance");
    let report =
        evaluate_constraints(instance, plan, DEFAULT_TOLERANCE).expect("decoded plan matches instance");
    [cost.total, report.total_violation]
}

/// Draws `population_size` chromosomes with every gene uniform on `[0, 1)`.
pub fn init_population<R: Rng + ?Sized>(
    instance: &NetworkInstance,
    population_size: usize,
    rng: &mut R,
) -> Vec<Individual> {
    let len = GeneLayout::of(instance).len();
    (0..population_size)
        .map(|_| {
            let genes = (0..len).map(|_| rng.gen::<f64>()).collect();
            make_individual(Chromosome::new(genes), instance)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    /// 1-based generation number.
    pub generation: usize,
    /// Best zero-violation cost seen so far, if any.
    pub best_feasible_cost: Option<f64>,
    pub mean_cost: f64,
    pub min_violation: f64,
    pub feasible_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    MaxGenerations,
    Stall,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::MaxGenerations => "max-generations",
            Termination::Stall => "stall",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestFeasible {
    pub chromosome: Chromosome,
    pub plan: FlowPlan,
    pub cost: CostBreakdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// Cheapest zero-violation plan seen during the run.
    pub best_feasible: Option<BestFeasible>,
    /// Rank-0 members of the final population.
    pub final_front: Vec<Individual>,
    pub trace: Vec<GenerationRecord>,
    pub generations_run: usize,
    pub terminated_by: Termination,
}

struct BestTracker {
    best: Option<(f64, Chromosome)>,
}

impl BestTracker {
    fn offer(&mut self, individual: &Individual) {
        if !individual.is_feasible() {
            return;
        }
        let better = match &self.best {
            None => true,
            Some((cost, _)) => individual.cost() < *cost,
        };
        if better {
            self.best = Some((individual.cost(), individual.chromosome.clone()));
        }
    }

    fn cost(&self) -> Option<f64> {
        self.best.as_ref().map(|(c, _)| *c)
    }
}

const DUPLICATE_RETRY_LIMIT: usize = 20;

/// Runs NSGA-II on `instance` until `max_generations` or a stalled window.
pub fn solve(instance: &NetworkInstance, config: &SolverConfig) -> Result<SolveResult, SolveError> {
    config.validate()?;
    let report = validate_instance(instance);
    if !report.is_empty() {
        return Err(SolveError::Instance(report.breaches.len()));
    }

    let dominance = config.dominance;
    let n = config.population_size;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracker = BestTracker { best: None };

    let mut population = init_population(instance, n, &mut rng);
    population.iter().for_each(|ind| tracker.offer(ind));
    assign_rank_and_crowding(&mut population, dominance);

    let mut trace: Vec<GenerationRecord> = Vec::with_capacity(config.max_generations);
    let mut terminated_by = Termination::MaxGenerations;

    for generation in 1..=config.max_generations {
        let mut offspring: Vec<Individual> = Vec::with_capacity(n);
        let mut attempts = 0usize;
        while offspring.len() < n {
            attempts += 1;
            let a = binary_tournament(&population, &mut rng);
            let b = binary_tournament(&population, &mut rng);
            let (mut c1, mut c2) = crossover(
                &population[a].chromosome,
                &population[b].chromosome,
                config.crossover_prob,
                config.sbx_eta,
                &mut rng,
            );
            mutate(&mut c1, config.mutation_prob, config.pm_eta, &mut rng);
            mutate(&mut c2, config.mutation_prob, config.pm_eta, &mut rng);
            for child in [c1, c2] {
                let duplicate = population
                    .iter()
                    .chain(offspring.iter())
                    .any(|ind| ind.chromosome == child);
                if duplicate && attempts < DUPLICATE_RETRY_LIMIT * n {
                    continue;
                }
                if offspring.len() < n {
                    let ind = make_individual(child, instance);
                    tracker.offer(&ind);
                    offspring.push(ind);
                }
            }
        }

        population = select_next_generation(population, offspring, n, dominance);
        trace.push(record(generation, &population, tracker.cost()));

        if stalled(&trace, config) {
            terminated_by = Termination::Stall;
            break;
        }
    }

    let best_feasible = tracker.best.map(|(_, chromosome)| {
        let plan = decode(&chromosome, instance).expect("chromosome sized for instance");
        let cost = evaluate_cost(instance, &plan).expect("decoded plan matches instance");
        BestFeasible {
            chromosome,
            plan,
            cost,
        }
    });
    let final_front = population.into_iter().filter(|i| i.rank == 0).collect();

    Ok(SolveResult {
        best_feasible,
        final_front,
        generations_run: trace.len(),
        trace,
        terminated_by,
    })
}

fn record(generation: usize, population: &[Individual], best: Option<f64>) -> GenerationRecord {
    let mean_cost = population.iter().map(Individual::cost).sum::<f64>() / population.len() as f64;
    let min_violation = population
        .iter()
        .map(Individual::violation)
        .fold(f64::INFINITY, f64::min);
    GenerationRecord {
        generation,
        best_feasible_cost: best,
        mean_cost,
        min_violation,
        feasible_count: population.iter().filter(|i| i.is_feasible()).count(),
    }
}

/// True when the best feasible cost improved by less than `stall_tolerance`
/// (relative) over the last `stall_generations` generations.
fn stalled(trace: &[GenerationRecord], config: &SolverConfig) -> bool {
    let window = config.stall_generations;
    if window == 0 || trace.len() <= window {
        return false;
    }
    let now = trace[trace.len() - 1].best_feasible_cost;
    let then = trace[trace.len() - 1 - window].best_feasible_cost;
    match (then, now) {
        (Some(then), Some(now)) => {
            let scale = then.abs().max(f64::MIN_POSITIVE);
            (then - now) / scale < config.stall_tolerance
        }
        _ => false,
    }
}
