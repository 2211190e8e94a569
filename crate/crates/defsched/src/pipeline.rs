//! Run orchestration: the monolithic ε-constraint baseline, the two-stage
//! decomposition (GA over committees, then an ε-constraint walk per
//! committee configuration) and comparison metrics.

use std::collections::HashSet;
use std::time::Instant;

use defsched_core::epsilon::{
    augmented_epsilon_constraint, exact_grid_floor, initialisation_phase, EpsilonError, EpsilonGrid, EpsilonSettings,
    GridPolicy, InitReport, IterationAction, IterationRecord,
};
use defsched_core::ga::{
    adapted_initialisation, default_reference_points, evolve, stream_rng, GaError, GaParams, Individual,
    Selection, Stream,
};
use defsched_core::model::{evaluate, CommitteeConfig, FullSolution, Instance, Objective, ObjectiveVector, MONOLITHIC_OBJECTIVES};
use defsched_core::pareto::{dominates, hypervolume, normalize, ArchiveEntry, FrontArchive};
use defsched_core::search::{pessimistic_bounds, AugmentationContext, Clock, ProblemKind, Status};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid run configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Epsilon(#[from] EpsilonError),
    #[error(transparent)]
    Ga(#[from] GaError),
}

impl PipelineError {
    pub fn is_infeasible_instance(&self) -> bool {
        matches!(self, PipelineError::Epsilon(EpsilonError::InfeasibleInstance))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Monolithic,
    DecompNsga2,
    DecompNsga3,
    CaseStudy,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Monolithic => "mono-eps",
            Method::DecompNsga2 => "decomp-nsga2",
            Method::DecompNsga3 => "decomp-nsga3",
            Method::CaseStudy => "casestudy",
        }
    }

    pub fn is_decomposition(self) -> bool {
        self != Method::Monolithic
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaKind {
    Nsga2,
    Nsga3,
}

/// How many fronts of the final GA population become stage-two inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrontsKept {
    Count(usize),
    All,
}

impl FrontsKept {
    pub fn label(self) -> String {
        match self {
            FrontsKept::Count(n) => n.to_string(),
            FrontsKept::All => "all".into(),
        }
    }
}

/// Non-uniform crossovers between every pair of seed configurations.
#[derive(Clone, Debug, PartialEq)]
pub struct PathRelinking {
    pub probabilities: Vec<f64>,
    pub repetitions: usize,
}

impl Default for PathRelinking {
    fn default() -> Self {
        PathRelinking { probabilities: (1..12).map(|k| k as f64 / 12.0).collect(), repetitions: 2 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub ga: GaParams,
    pub grid: GridPolicy,
    /// Primary objective of the monolithic walk.
    pub primary: Objective,
    /// Primary objective of each stage-two walk; the other of Z3/Z4 is bounded.
    pub stage2_primary: Objective,
    pub seeds: Vec<u64>,
    pub time_limit_seconds: f64,
    pub fronts_kept: FrontsKept,
    /// Feed every generation's configurations to stage two, not just the last.
    pub keep_all_generations: bool,
    pub path_relinking: PathRelinking,
    pub reference_divisions: usize,
    /// Selection used by the case-study variant.
    pub case_study_ga: GaKind,
    pub skipping: bool,
    /// Start each grid axis at the objective's exact feasible minimum
    /// instead of the payoff-table minimum.
    pub exact_grid_floor: bool,
}

impl RunConfig {
    pub fn new(method: Method) -> Self {
        let case_study = method == Method::CaseStudy;
        RunConfig {
            method,
            ga: GaParams { generations: if case_study { 5 } else { 100 }, ..GaParams::default() },
            grid: GridPolicy::Unit,
            primary: Objective::Z1,
            stage2_primary: Objective::Z3,
            seeds: vec![0],
            time_limit_seconds: 120.0,
            fronts_kept: FrontsKept::Count(1),
            keep_all_generations: case_study,
            path_relinking: PathRelinking::default(),
            reference_divisions: 12,
            case_study_ga: GaKind::Nsga2,
            skipping: true,
            exact_grid_floor: true,
        }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        if !MONOLITHIC_OBJECTIVES.contains(&self.primary) {
            return bad(format!("primary must be one of z1..z4, got {}", self.primary));
        }
        if !matches!(self.stage2_primary, Objective::Z3 | Objective::Z4) {
            return bad(format!("stage-two primary must be z3 or z4, got {}", self.stage2_primary));
        }
        if self.seeds.is_empty() {
            return bad("at least one seed is needed".into());
        }
        if self.time_limit_seconds.is_nan() || self.time_limit_seconds <= 0.0 {
            return bad(format!("time limit must be positive, got {}", self.time_limit_seconds));
        }
        if self.fronts_kept == FrontsKept::Count(0) {
            return bad("at least one front must be kept".into());
        }
        if let Some(v) = self.path_relinking.probabilities.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
            return bad(format!("path-relinking probabilities must lie in (0, 1), got {v}"));
        }
        if self.path_relinking.repetitions == 0 {
            return bad("path-relinking needs at least one repetition".into());
        }
        if self.reference_divisions == 0 {
            return bad("reference point divisions must be positive".into());
        }
        if self.method != Method::CaseStudy {
            self.ga.validate()?;
        }
        Ok(())
    }

    fn stage2_bounded(&self) -> Objective {
        if self.stage2_primary == Objective::Z3 {
            Objective::Z4
        } else {
            Objective::Z3
        }
    }
}

/// The shared initialisation: one perturbed solve per objective of the
/// monolithic problem, plus exact grid floors when enabled.
#[derive(Clone, Debug)]
pub struct Initialisation {
    pub report: InitReport,
    pub seconds: f64,
}

impl Initialisation {
    /// Committee configurations of the seed solutions, one per objective.
    pub fn seed_configs(&self) -> Vec<CommitteeConfig> {
        self.report.seeds.iter().map(|s| s.config().clone()).collect()
    }

    /// Normalisation bounds for hypervolume: the grid floor (never above
    /// the payoff minimum) up to the payoff maximum.
    pub fn hv_bounds(&self) -> (Vec<i64>, Vec<i64>) {
        let lo = self.report.grid_floor.iter().zip(&self.report.z_min).map(|(f, z)| *f.min(z)).collect();
        (lo, self.report.z_max.clone())
    }

    /// Normalised hypervolume of the seed solutions, the least a run should reach.
    pub fn seed_hypervolume(&self) -> f64 {
        let (lo, hi) = self.hv_bounds();
        normalized_hypervolume(&self.report.seed_objectives, &lo, &hi)
    }
}

pub fn initialise(instance: &Instance, cfg: &RunConfig, clock: &dyn Clock) -> Result<Initialisation, PipelineError> {
    cfg.validate()?;
    let start = Instant::now();
    let kind = ProblemKind::Monolithic;
    let mut report = initialisation_phase(instance, &kind, &MONOLITHIC_OBJECTIVES, cfg.time_limit_seconds, clock)?;
    if cfg.exact_grid_floor {
        exact_grid_floor(&mut report, instance, &kind, &MONOLITHIC_OBJECTIVES, cfg.time_limit_seconds, clock)?;
    }
    log::info!(
        "initialisation: z_min {:?}, z_max {:?}, grid floor {:?}",
        report.z_min,
        report.z_max,
        report.grid_floor
    );
    Ok(Initialisation { report, seconds: start.elapsed().as_secs_f64() })
}

/// A solution produced by a run, evaluated on Z1..Z4.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub solution: FullSolution,
    pub objectives: ObjectiveVector,
    pub status: Status,
    /// Index into `RunOutcome::configs`; `None` for the monolithic method.
    pub config: Option<usize>,
}

/// One lattice point of one walk.
#[derive(Clone, Debug, PartialEq)]
pub struct Iteration {
    pub config: Option<usize>,
    pub bounded: Vec<Objective>,
    pub walk_objectives: Vec<Objective>,
    pub record: IterationRecord,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Timings {
    pub initialisation: f64,
    pub stage1: f64,
    pub stage2: f64,
}

impl Timings {
    pub fn total(&self) -> f64 {
        self.initialisation + self.stage1 + self.stage2
    }
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub method: Method,
    pub seed: u64,
    pub candidates: Vec<Candidate>,
    /// Non-dominated Z1..Z4 vectors; payloads index `candidates`.
    pub front: FrontArchive,
    /// Stage-two inputs after front filtering and deduplication.
    pub configs: Vec<CommitteeConfig>,
    /// Configurations without any feasible schedule.
    pub unschedulable_configs: Vec<usize>,
    pub iterations: Vec<Iteration>,
    pub timings: Timings,
}

pub fn run_monolithic(
    instance: &Instance,
    cfg: &RunConfig,
    init: &Initialisation,
    clock: &dyn Clock,
) -> Result<RunOutcome, PipelineError> {
    cfg.validate()?;
    let start = Instant::now();
    let report = &init.report;
    let grid = report.grid(cfg.primary, cfg.grid)?;
    let settings = EpsilonSettings {
        objectives: MONOLITHIC_OBJECTIVES.to_vec(),
        primary: cfg.primary,
        time_limit_seconds: cfg.time_limit_seconds,
        skipping: cfg.skipping,
    };
    let outcome =
        augmented_epsilon_constraint(instance, &ProblemKind::Monolithic, &grid, &report.augmentation(), &settings, clock)?;
    let bounded = grid.objectives();
    let candidates = outcome
        .found
        .iter()
        .map(|f| Candidate {
            solution: f.solution.full().expect("monolithic solves schedule").clone(),
            objectives: f.objectives.clone(),
            status: f.status,
            config: None,
        })
        .collect();
    let iterations = outcome
        .iterations
        .into_iter()
        .map(|record| Iteration {
            config: None,
            bounded: bounded.clone(),
            walk_objectives: MONOLITHIC_OBJECTIVES.to_vec(),
            record,
        })
        .collect();
    Ok(RunOutcome {
        method: cfg.method,
        seed: 0,
        candidates,
        front: outcome.front,
        configs: Vec::new(),
        unschedulable_configs: Vec::new(),
        iterations,
        timings: Timings { initialisation: init.seconds, stage1: 0.0, stage2: start.elapsed().as_secs_f64() },
    })
}

/// Configurations of the first `kept` fronts of `individuals`, identical
/// configurations collapsed in first-occurrence order.
pub fn filter_configs(individuals: &[Individual], kept: FrontsKept) -> Vec<CommitteeConfig> {
    let archive = FrontArchive::new(
        individuals
            .iter()
            .enumerate()
            .map(|(k, i)| ArchiveEntry { objectives: i.objectives.clone(), payload: k as u64 })
            .collect(),
    );
    let limit = match kept {
        FrontsKept::Count(n) => n,
        FrontsKept::All => usize::MAX,
    };
    let mut seen = HashSet::new();
    archive
        .first_fronts(limit)
        .map(|e| &individuals[e.payload as usize].config)
        .filter(|c| seen.insert((*c).clone()))
        .cloned()
        .collect()
}

fn stage1(
    instance: &Instance,
    cfg: &RunConfig,
    init: &Initialisation,
    seed: u64,
) -> Result<Vec<Individual>, PipelineError> {
    let seeds = init.seed_configs();
    let mut params = GaParams { master_seed: seed, ..cfg.ga.clone() };
    let initial = if cfg.method == Method::CaseStudy {
        let mut rng = stream_rng(seed, Stream::PathRelinking);
        let pop = adapted_initialisation(
            &seeds,
            &cfg.path_relinking.probabilities,
            cfg.path_relinking.repetitions,
            &mut rng,
        );
        // population size follows the seed-pair lattice, rounded up to even
        params.population_size = (pop.len() + pop.len() % 2).max(4);
        pop
    } else {
        seeds
    };
    params.validate()?;
    let selection = match (cfg.method, cfg.case_study_ga) {
        (Method::DecompNsga3, _) | (Method::CaseStudy, GaKind::Nsga3) => {
            Selection::Nsga3 { reference_points: default_reference_points(3, cfg.reference_divisions) }
        }
        _ => Selection::Nsga2,
    };
    log::info!(
        "stage 1: {} with population {} for {} generations (seed {seed})",
        cfg.method.name(),
        params.population_size,
        params.generations
    );
    if cfg.keep_all_generations {
        let mut all: Vec<Individual> = Vec::new();
        let mut keep = |_: usize, pop: &[Individual]| all.extend_from_slice(pop);
        evolve(instance, &params, &initial, &selection, Some(&mut keep))?;
        Ok(all)
    } else {
        Ok(evolve(instance, &params, &initial, &selection, None)?)
    }
}

struct Stage2 {
    candidates: Vec<Candidate>,
    iterations: Vec<Iteration>,
}

fn stage2(
    instance: &Instance,
    cfg: &RunConfig,
    init: &Initialisation,
    index: usize,
    config: &CommitteeConfig,
    clock: &dyn Clock,
) -> Result<Stage2, PipelineError> {
    let bounded = cfg.stage2_bounded();
    let objectives = vec![cfg.stage2_primary, bounded];
    let kind = ProblemKind::Stage2(config.clone());
    // The monolithic floor need not hold for this configuration; lowering it
    // to a bound valid for every schedule keeps the loosest point a relaxation.
    let (floor, top) = {
        let k = init.report.objectives.iter().position(|o| *o == bounded).expect("stage-two objectives are initialised");
        let own = pessimistic_bounds(instance, &kind, &[bounded]).map_or(i64::MAX, |v| v[0]);
        (init.report.grid_floor[k].min(own), init.report.z_max[k])
    };
    let grid = EpsilonGrid::from_ranges(&[bounded], |_| (floor, top), cfg.grid)?;
    let augmentation = AugmentationContext {
        ranges: init.report.augmentation().ranges.into_iter().filter(|(o, _, _)| objectives.contains(o)).collect(),
    };
    let settings = EpsilonSettings {
        objectives: objectives.clone(),
        primary: cfg.stage2_primary,
        time_limit_seconds: cfg.time_limit_seconds,
        skipping: cfg.skipping,
    };
    let outcome = augmented_epsilon_constraint(instance, &kind, &grid, &augmentation, &settings, clock)?;
    log::info!(
        "configuration {}: {} solves, {} solutions, {} optimal",
        index + 1,
        outcome.solves,
        outcome.found.len(),
        outcome.found.iter().filter(|f| f.status == Status::Optimal).count()
    );
    let candidates = outcome
        .found
        .iter()
        .map(|f| {
            let solution = f.solution.full().expect("stage-two solves schedule").clone();
            Candidate {
                objectives: evaluate(instance, &solution, &MONOLITHIC_OBJECTIVES),
                solution,
                status: f.status,
                config: Some(index),
            }
        })
        .collect();
    let iterations = outcome
        .iterations
        .into_iter()
        .map(|record| Iteration {
            config: Some(index),
            bounded: vec![bounded],
            walk_objectives: objectives.clone(),
            record,
        })
        .collect();
    Ok(Stage2 { candidates, iterations })
}

pub fn run_decomposition(
    instance: &Instance,
    cfg: &RunConfig,
    init: &Initialisation,
    seed: u64,
    clock: &dyn Clock,
) -> Result<RunOutcome, PipelineError> {
    cfg.validate()?;
    if !cfg.method.is_decomposition() {
        return Err(PipelineError::Config(format!("{} is not a decomposition method", cfg.method.name())));
    }
    let start = Instant::now();
    let individuals = stage1(instance, cfg, init, seed)?;
    let configs = filter_configs(&individuals, cfg.fronts_kept);
    let stage1_seconds = start.elapsed().as_secs_f64();
    log::info!("stage 1 kept {} distinct configurations", configs.len());

    let start = Instant::now();
    let scheduled = schedule_configs(instance, cfg, init, &configs, clock)?;
    Ok(RunOutcome {
        method: cfg.method,
        seed,
        candidates: scheduled.candidates,
        front: scheduled.front,
        configs,
        unschedulable_configs: scheduled.unschedulable,
        iterations: scheduled.iterations,
        timings: Timings {
            initialisation: init.seconds,
            stage1: stage1_seconds,
            stage2: start.elapsed().as_secs_f64(),
        },
    })
}

/// Stage-two results merged over every configuration.
#[derive(Clone, Debug)]
pub struct Scheduled {
    pub candidates: Vec<Candidate>,
    /// Non-dominated Z1..Z4 vectors; payloads index `candidates`.
    pub front: FrontArchive,
    pub iterations: Vec<Iteration>,
    pub unschedulable: Vec<usize>,
}

/// Runs a stage-two walk per configuration in parallel and merges the
/// results in configuration order.
pub fn schedule_configs(
    instance: &Instance,
    cfg: &RunConfig,
    init: &Initialisation,
    configs: &[CommitteeConfig],
    clock: &dyn Clock,
) -> Result<Scheduled, PipelineError> {
    let results: Vec<Result<Stage2, PipelineError>> = configs
        .par_iter()
        .enumerate()
        .map(|(k, c)| stage2(instance, cfg, init, k, c, clock))
        .collect();
    let mut candidates = Vec::new();
    let mut iterations = Vec::new();
    let mut unschedulable = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        let r = r?;
        if r.candidates.is_empty() {
            log::warn!("configuration {} admits no schedule within the limits; it contributes nothing", k + 1);
            unschedulable.push(k);
        }
        candidates.extend(r.candidates);
        iterations.extend(r.iterations);
    }
    let front = FrontArchive::new(
        candidates
            .iter()
            .enumerate()
            .map(|(k, c)| ArchiveEntry { objectives: c.objectives.clone(), payload: k as u64 })
            .collect(),
    )
    .nondominated();
    Ok(Scheduled { candidates, front, iterations, unschedulable })
}

/// Dispatches on the configured method.
pub fn run(
    instance: &Instance,
    cfg: &RunConfig,
    init: &Initialisation,
    seed: u64,
    clock: &dyn Clock,
) -> Result<RunOutcome, PipelineError> {
    match cfg.method {
        Method::Monolithic => run_monolithic(instance, cfg, init, clock),
        _ => run_decomposition(instance, cfg, init, seed, clock),
    }
}

/// Hypervolume of `points` after min-max normalisation, reference at the origin.
pub fn normalized_hypervolume<V: AsRef<[i64]>>(points: &[V], lo: &[i64], hi: &[i64]) -> f64 {
    hypervolume(&normalize(points, lo, hi), &vec![0.0; lo.len()]).value
}

/// Points of `front` not dominated by any point of `baseline`.
pub fn count_not_dominated(front: &FrontArchive, baseline: &FrontArchive) -> usize {
    front
        .objective_vectors()
        .filter(|p| !baseline.objective_vectors().any(|b| dominates(b.as_slice(), p.as_slice())))
        .count()
}

/// Deterministic columns of a report row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub method: String,
    pub seed: String,
    pub grid: String,
    pub mutation_percent: String,
    pub generations: String,
    pub population: String,
    pub fronts_kept: String,
    pub configs: f64,
    pub solutions: f64,
    pub hypervolume: f64,
    pub seed_hypervolume: f64,
    pub n0: f64,
    /// Empty without a baseline.
    pub n0_vs_baseline: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonRow {
    pub row: ReportRow,
    pub timings: Timings,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

fn grid_label(g: GridPolicy) -> &'static str {
    match g {
        GridPolicy::Unit => "unit",
        GridPolicy::Tenth => "tenth",
    }
}

pub fn report_row(
    outcome: &RunOutcome,
    cfg: &RunConfig,
    init: &Initialisation,
    baseline: Option<&FrontArchive>,
) -> ComparisonRow {
    let (lo, hi) = init.hv_bounds();
    let points: Vec<&ObjectiveVector> = outcome.front.objective_vectors().collect();
    let decomp = outcome.method.is_decomposition();
    let ga = |s: String| if decomp { s } else { String::new() };
    ComparisonRow {
        row: ReportRow {
            method: outcome.method.name().into(),
            seed: ga(outcome.seed.to_string()),
            grid: grid_label(cfg.grid).into(),
            mutation_percent: ga(cfg.ga.mutation_percent.to_string()),
            generations: ga(cfg.ga.generations.to_string()),
            population: ga(if outcome.method == Method::CaseStudy {
                "lattice".into()
            } else {
                cfg.ga.population_size.to_string()
            }),
            fronts_kept: ga(cfg.fronts_kept.label()),
            configs: outcome.configs.len() as f64,
            solutions: outcome.candidates.len() as f64,
            hypervolume: normalized_hypervolume(&points, &lo, &hi),
            seed_hypervolume: init.seed_hypervolume(),
            n0: outcome.front.len() as f64,
            n0_vs_baseline: baseline.map(|b| count_not_dominated(&outcome.front, b) as f64),
        },
        timings: outcome.timings,
    }
}

impl ComparisonReport {
    /// Arithmetic mean of every numeric column, labelled `mean`.
    pub fn mean(&self) -> Option<ComparisonRow> {
        let first = self.rows.first()?;
        let n = self.rows.len() as f64;
        let avg = |f: &dyn Fn(&ComparisonRow) -> f64| self.rows.iter().map(f).sum::<f64>() / n;
        let baseline = self.rows.iter().all(|r| r.row.n0_vs_baseline.is_some());
        Some(ComparisonRow {
            row: ReportRow {
                seed: "mean".into(),
                configs: avg(&|r| r.row.configs),
                solutions: avg(&|r| r.row.solutions),
                hypervolume: avg(&|r| r.row.hypervolume),
                seed_hypervolume: avg(&|r| r.row.seed_hypervolume),
                n0: avg(&|r| r.row.n0),
                n0_vs_baseline: baseline.then(|| avg(&|r| r.row.n0_vs_baseline.unwrap_or(0.0))),
                ..first.row.clone()
            },
            timings: Timings {
                initialisation: avg(&|r| r.timings.initialisation),
                stage1: avg(&|r| r.timings.stage1),
                stage2: avg(&|r| r.timings.stage2),
            },
        })
    }
}

/// Runs every configured seed on one shared initialisation and appends a
/// mean row when there is more than one.
pub fn sweep(
    instance: &Instance,
    cfg: &RunConfig,
    init: &Initialisation,
    baseline: Option<&FrontArchive>,
    clock: &dyn Clock,
) -> Result<(Vec<RunOutcome>, ComparisonReport), PipelineError> {
    let mut outcomes = Vec::with_capacity(cfg.seeds.len());
    let mut report = ComparisonReport::default();
    let seeds: &[u64] = if cfg.method.is_decomposition() { &cfg.seeds } else { &cfg.seeds[..1] };
    for &seed in seeds {
        let outcome = run(instance, cfg, init, seed, clock)?;
        report.rows.push(report_row(&outcome, cfg, init, baseline));
        outcomes.push(outcome);
    }
    if report.rows.len() > 1 {
        let mean = report.mean().expect("nonempty");
        report.rows.push(mean);
    }
    Ok((outcomes, report))
}

/// Iteration ledger row; every column is deterministic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationRow {
    pub config: String,
    pub epsilon: String,
    pub action: &'static str,
    pub status: &'static str,
    pub objectives: String,
    pub gap: String,
}

fn pairs(names: &[Objective], values: &[i64]) -> String {
    names.iter().zip(values).map(|(o, v)| format!("{o}={v}")).collect::<Vec<_>>().join(";")
}

pub fn iteration_rows(iterations: &[Iteration]) -> Vec<IterationRow> {
    iterations
        .iter()
        .map(|it| IterationRow {
            config: it.config.map(|c| (c + 1).to_string()).unwrap_or_default(),
            epsilon: pairs(&it.bounded, &it.record.epsilon),
            action: match it.record.action {
                IterationAction::Solved => "solved",
                IterationAction::SkippedCovered => "skipped_covered",
                IterationAction::SkippedInfeasible => "skipped_infeasible",
            },
            status: it.record.status.map_or("", Status::name),
            objectives: it.record.objectives.as_ref().map(|v| pairs(&it.walk_objectives, v.as_slice())).unwrap_or_default(),
            gap: match it.record.status {
                Some(Status::FeasibleTimeout) => format!("{:.6}", it.record.gap),
                Some(_) => "0".into(),
                None => String::new(),
            },
        })
        .collect()
}
