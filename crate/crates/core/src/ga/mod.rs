//! NSGA-II and NSGA-III over committee configurations, evaluated on the
//! stage-one objectives. All operators preserve committee feasibility.

mod operators;
mod selection;

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use operators::{
    adapted_initialisation, crossover, generate_feasible_committee, mutate, non_uniform_crossover,
    random_config,
};
pub use selection::{
    crowding_match, default_reference_points, elite2, elite3, nearest_reference, tournament,
};

use crate::model::{evaluate_config, CommitteeConfig, Instance, ModelError, ObjectiveVector, STAGE1_OBJECTIVES};
use crate::pareto::sort_fronts;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaError {
    #[error("defence {defence} admits no feasible committee")]
    Unsatisfiable { defence: usize },
    #[error("invalid GA parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaParams {
    pub population_size: usize,
    pub generations: usize,
    /// Mutation probability in percent.
    pub mutation_percent: u32,
    pub tournament_rounds: usize,
    pub master_seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population_size: 200,
            generations: 100,
            mutation_percent: 5,
            tournament_rounds: 2,
            master_seed: 0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<(), GaError> {
        if self.population_size < 4 || !self.population_size.is_multiple_of(2) {
            return Err(GaError::InvalidParams(alloc::format!(
                "population size must be even and at least 4, got {}",
                self.population_size
            )));
        }
        if self.mutation_percent > 100 {
            return Err(GaError::InvalidParams(alloc::format!(
                "mutation percentage {} exceeds 100",
                self.mutation_percent
            )));
        }
        if self.tournament_rounds == 0 {
            return Err(GaError::InvalidParams("at least one tournament round is needed".into()));
        }
        Ok(())
    }
}

/// Independent random streams, one per stochastic purpose.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Init = 1,
    Tournament = 2,
    Mating = 3,
    Crossover = 4,
    Mutation = 5,
    Niching = 6,
    PathRelinking = 7,
}

pub fn stream_rng(master_seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream as u64);
    rng
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub config: CommitteeConfig,
    /// `(z1, z2, z5)`
    pub objectives: ObjectiveVector,
}

impl AsRef<[i64]> for Individual {
    fn as_ref(&self) -> &[i64] {
        self.objectives.as_slice()
    }
}

pub fn evaluate_individual(instance: &Instance, config: CommitteeConfig) -> Individual {
    let objectives =
        evaluate_config(instance, &config, &STAGE1_OBJECTIVES).expect("stage-one objectives need no schedule");
    Individual { config, objectives }
}

/// Seeds first (at most `size`), the rest sampled defence by defence.
pub fn initialise_population<R: Rng + ?Sized>(
    instance: &Instance,
    size: usize,
    seeds: &[CommitteeConfig],
    rng: &mut R,
) -> Result<Vec<CommitteeConfig>, GaError> {
    let mut population: Vec<CommitteeConfig> = seeds.iter().take(size).cloned().collect();
    while population.len() < size {
        population.push(random_config(instance, rng)?);
    }
    Ok(population)
}

#[derive(Clone, Debug)]
pub enum Selection {
    Nsga2,
    Nsga3 { reference_points: Vec<Vec<f64>> },
}

/// Called with the generation index (0 = initial population) and the population.
pub type Observer<'a> = &'a mut dyn FnMut(usize, &[Individual]);

fn run(
    instance: &Instance,
    params: &GaParams,
    seeds: &[CommitteeConfig],
    selection: &Selection,
    observer: Option<Observer<'_>>,
) -> Result<Vec<Individual>, GaError> {
    params.validate()?;
    for seed in seeds {
        seed.check_shape(instance)?;
    }
    let mut noop = |_: usize, _: &[Individual]| {};
    let observer: Observer<'_> = match observer {
        Some(o) => o,
        None => &mut noop,
    };
    let seed = params.master_seed;
    let mut init_rng = stream_rng(seed, Stream::Init);
    let mut tournament_rng = stream_rng(seed, Stream::Tournament);
    let mut mating_rng = stream_rng(seed, Stream::Mating);
    let mut crossover_rng = stream_rng(seed, Stream::Crossover);
    let mut mutation_rng = stream_rng(seed, Stream::Mutation);
    let mut niching_rng = stream_rng(seed, Stream::Niching);

    let n_s = params.population_size;
    let mut population: Vec<Individual> = initialise_population(instance, n_s, seeds, &mut init_rng)?
        .into_iter()
        .map(|c| evaluate_individual(instance, c))
        .collect();
    observer(0, &population);

    for generation in 1..=params.generations {
        let ranks = sort_fronts(&population);
        let elite = match selection {
            Selection::Nsga2 => elite2(&population, &ranks, n_s),
            Selection::Nsga3 { reference_points } => {
                elite3(&population, &ranks, n_s, reference_points, &mut niching_rng)?
            }
        };
        let pool = tournament(&population, &ranks, params.tournament_rounds, &mut tournament_rng);
        let mut next: Vec<Individual> = elite.iter().map(|&e| population[e].clone()).collect();
        while next.len() < n_s {
            let a = &population[pool[mating_rng.gen_range(0..pool.len())]].config;
            let b = &population[pool[mating_rng.gen_range(0..pool.len())]].config;
            let mut child = crossover(a, b, &mut crossover_rng);
            mutate(&mut child, params.mutation_percent, instance, &mut mutation_rng)?;
            next.push(evaluate_individual(instance, child));
        }
        population = next;
        observer(generation, &population);
    }
    Ok(population)
}

/// Runs NSGA-II and returns the last population.
pub fn nsga2(
    instance: &Instance,
    params: &GaParams,
    seeds: &[CommitteeConfig],
    observer: Option<Observer<'_>>,
) -> Result<Vec<Individual>, GaError> {
    run(instance, params, seeds, &Selection::Nsga2, observer)
}

/// Runs NSGA-III with the given reference points and returns the last population.
pub fn nsga3(
    instance: &Instance,
    params: &GaParams,
    seeds: &[CommitteeConfig],
    reference_points: &[Vec<f64>],
    observer: Option<Observer<'_>>,
) -> Result<Vec<Individual>, GaError> {
    if reference_points.is_empty() {
        return Err(GaError::InvalidParams("empty reference point set".into()));
    }
    let selection = Selection::Nsga3 { reference_points: reference_points.to_vec() };
    run(instance, params, seeds, &selection, observer)
}

/// Dispatches on `selection`.
pub fn evolve(
    instance: &Instance,
    params: &GaParams,
    seeds: &[CommitteeConfig],
    selection: &Selection,
    observer: Option<Observer<'_>>,
) -> Result<Vec<Individual>, GaError> {
    run(instance, params, seeds, selection, observer)
}
