//! Command-line surface. Exit codes: 0 success, 1 usage error, 2 infeasible
//! instance, 3 runtime failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use defsched_core::epsilon::GridPolicy;
use defsched_core::generator::{generate_instance, GeneratorSpec};
use defsched_core::model::{check_feasible, evaluate, Instance, Objective, MONOLITHIC_OBJECTIVES};
use defsched_core::pareto::FrontArchive;
use serde::Serialize;
use serde_json::json;

use crate::clock::WallClock;
use crate::formats::{self, FrontMember};
use crate::pipeline::{self, FrontsKept, GaKind, Method, RunConfig, RunOutcome};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_FAILURE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "defsched", version, about = "Multi-objective thesis defence scheduling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random instance.
    Generate(GenerateArgs),
    /// Compute a Pareto front.
    Solve(SolveArgs),
    /// Check a solution and print its objective values.
    Evaluate(EvaluateArgs),
    /// Compare a front with a baseline front.
    Compare(CompareArgs),
    /// Write pairwise objective projections of a front.
    ExportTradeoffs(ExportArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    Tiny,
    Small,
    Large,
    CaseStudy,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "small")]
    preset: Preset,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    members: Option<usize>,
    #[arg(long)]
    defences: Option<usize>,
    #[arg(long)]
    roles: Option<usize>,
    #[arg(long)]
    preassigned: Option<usize>,
    #[arg(long)]
    days: Option<usize>,
    #[arg(long)]
    slots: Option<usize>,
    #[arg(long)]
    rooms: Option<usize>,
    #[arg(long)]
    subjects: Option<usize>,
    #[arg(long)]
    duration: Option<usize>,
    #[arg(long)]
    availability_density: Option<f64>,
    #[arg(long)]
    eligibility_density: Option<f64>,
    #[arg(long)]
    penalty_density: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    MonoEps,
    DecompNsga2,
    DecompNsga3,
    Casestudy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GridArg {
    Unit,
    Tenth,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GaArg {
    Nsga2,
    Nsga3,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "mono-eps")]
    method: MethodArg,
    /// Primary objective of the monolithic walk.
    #[arg(long, default_value = "z1", value_parser = parse_objective)]
    primary: Objective,
    /// Primary objective of each stage-two walk (z3 or z4).
    #[arg(long, default_value = "z3", value_parser = parse_objective)]
    stage2_primary: Objective,
    #[arg(long, value_enum, default_value = "unit")]
    grid: GridArg,
    /// Seconds per solve.
    #[arg(long, default_value_t = 120.0)]
    time_limit: f64,
    /// GA seed; repeat for a sweep.
    #[arg(long)]
    seed: Vec<u64>,
    /// File of whitespace-separated seeds; `#` starts a comment.
    #[arg(long)]
    seeds_file: Option<PathBuf>,
    /// Fronts of the last GA population passed to stage two: a count or `all`.
    #[arg(long, default_value = "1", value_parser = parse_fronts)]
    nf: FrontsKept,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    /// Mutation probability in percent.
    #[arg(long)]
    mutation: Option<u32>,
    /// Feed configurations of every generation to stage two.
    #[arg(long)]
    keep_all_generations: bool,
    /// Das-Dennis divisions of the NSGA-III reference points.
    #[arg(long, default_value_t = 12)]
    divisions: usize,
    /// Selection of the case-study GA.
    #[arg(long, value_enum, default_value = "nsga2")]
    case_study_ga: GaArg,
    /// Solve every lattice point instead of skipping provably redundant ones.
    #[arg(long)]
    no_skip: bool,
    /// Start grid axes at the payoff-table minimum instead of the exact feasible minimum.
    #[arg(long)]
    payoff_floor: bool,
    /// Front CSV to count non-dominated points against.
    #[arg(long)]
    baseline: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    front: PathBuf,
    #[arg(long)]
    baseline: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long)]
    front: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn parse_objective(s: &str) -> Result<Objective, String> {
    Objective::parse(&s.to_ascii_lowercase()).ok_or_else(|| format!("unknown objective `{s}`"))
}

fn parse_fronts(s: &str) -> Result<FrontsKept, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(FrontsKept::All);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(FrontsKept::Count(n)),
        _ => Err(format!("expected a positive count or `all`, got `{s}`")),
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Infeasible(_) => EXIT_INFEASIBLE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }
}

impl From<formats::FormatError> for CliError {
    fn from(e: formats::FormatError) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<pipeline::PipelineError> for CliError {
    fn from(e: pipeline::PipelineError) -> Self {
        if e.is_infeasible_instance() {
            CliError::Infeasible(e.to_string())
        } else {
            CliError::Failure(e.to_string())
        }
    }
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a, &args),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Compare(a) => compare(a),
        Command::ExportTradeoffs(a) => export(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn generate(a: GenerateArgs) -> Result<(), CliError> {
    let name = match a.preset {
        Preset::Tiny => "tiny",
        Preset::Small => "small",
        Preset::Large => "large",
        Preset::CaseStudy => "case-study",
    };
    let mut spec = GeneratorSpec::preset(name, a.seed).expect("known preset");
    let set = |field: &mut usize, v: Option<usize>| {
        if let Some(v) = v {
            *field = v;
        }
    };
    set(&mut spec.members, a.members);
    set(&mut spec.defences, a.defences);
    set(&mut spec.roles, a.roles);
    set(&mut spec.preassigned, a.preassigned);
    set(&mut spec.days, a.days);
    set(&mut spec.slots_per_day, a.slots);
    set(&mut spec.rooms, a.rooms);
    set(&mut spec.subjects, a.subjects);
    set(&mut spec.duration, a.duration);
    for (field, v) in [
        (&mut spec.availability_density, a.availability_density),
        (&mut spec.eligibility_density, a.eligibility_density),
        (&mut spec.penalty_density, a.penalty_density),
    ] {
        if let Some(v) = v {
            *field = v;
        }
    }
    let instance = generate_instance(&spec).map_err(|e| CliError::Failure(e.to_string()))?;
    formats::save_instance(&a.out, &instance)?;
    println!(
        "wrote {} ({} members, {} defences)",
        a.out.display(),
        instance.n_members(),
        instance.n_defences()
    );
    Ok(())
}

fn read_seeds(path: &Path) -> Result<Vec<u64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
    let mut seeds = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split_whitespace() {
            seeds.push(token.parse::<u64>().map_err(|e| {
                CliError::Failure(format!("{}: line {}: seed `{token}`: {e}", path.display(), n + 1))
            })?);
        }
    }
    Ok(seeds)
}

fn run_config(a: &SolveArgs) -> Result<RunConfig, CliError> {
    let method = match a.method {
        MethodArg::MonoEps => Method::Monolithic,
        MethodArg::DecompNsga2 => Method::DecompNsga2,
        MethodArg::DecompNsga3 => Method::DecompNsga3,
        MethodArg::Casestudy => Method::CaseStudy,
    };
    let mut cfg = RunConfig::new(method);
    cfg.primary = a.primary;
    cfg.stage2_primary = a.stage2_primary;
    cfg.grid = match a.grid {
        GridArg::Unit => GridPolicy::Unit,
        GridArg::Tenth => GridPolicy::Tenth,
    };
    cfg.time_limit_seconds = a.time_limit;
    let mut seeds = a.seed.clone();
    if let Some(path) = &a.seeds_file {
        seeds.extend(read_seeds(path)?);
    }
    if !seeds.is_empty() {
        cfg.seeds = seeds;
    }
    cfg.fronts_kept = a.nf;
    if let Some(p) = a.population {
        cfg.ga.population_size = p;
    }
    if let Some(g) = a.generations {
        cfg.ga.generations = g;
    }
    if let Some(m) = a.mutation {
        cfg.ga.mutation_percent = m;
    }
    cfg.keep_all_generations |= a.keep_all_generations;
    cfg.reference_divisions = a.divisions;
    cfg.case_study_ga = match a.case_study_ga {
        GaArg::Nsga2 => GaKind::Nsga2,
        GaArg::Nsga3 => GaKind::Nsga3,
    };
    cfg.skipping = !a.no_skip;
    cfg.exact_grid_floor = !a.payoff_floor;
    cfg.validate()?;
    Ok(cfg)
}

fn objective_names() -> Vec<String> {
    MONOLITHIC_OBJECTIVES.iter().map(|o| o.name().to_string()).collect()
}

fn write_outcome(dir: &Path, outcome: &RunOutcome) -> Result<(), CliError> {
    create_dir(dir)?;
    formats::write_text(&dir.join("front.csv"), &formats::front_to_csv(&objective_names(), &outcome.front)?)?;
    let members: Vec<FrontMember<'_>> = outcome
        .front
        .entries()
        .iter()
        .map(|e| {
            let c = &outcome.candidates[e.payload as usize];
            FrontMember { id: e.payload, objectives: &c.objectives, status: c.status.name(), solution: &c.solution }
        })
        .collect();
    formats::write_text(&dir.join("front.json"), &formats::front_to_json(&MONOLITHIC_OBJECTIVES, &members))?;
    let rows = pipeline::iteration_rows(&outcome.iterations);
    formats::write_text(&dir.join("iterations.csv"), &formats::rows_to_csv(&rows)?)?;
    if outcome.method.is_decomposition() {
        #[derive(Serialize)]
        struct ConfigRow {
            config: usize,
            committees: String,
            schedulable: bool,
        }
        let rows: Vec<ConfigRow> = outcome
            .configs
            .iter()
            .enumerate()
            .map(|(k, c)| ConfigRow {
                config: k + 1,
                committees: c
                    .committees()
                    .map(|m| m.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" "))
                    .collect::<Vec<_>>()
                    .join(";"),
                schedulable: !outcome.unschedulable_configs.contains(&k),
            })
            .collect();
        formats::write_text(&dir.join("configs.csv"), &formats::rows_to_csv(&rows)?)?;
    }
    Ok(())
}

fn unix_seconds() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

fn solve(a: SolveArgs, argv: &[OsString]) -> Result<(), CliError> {
    let cfg = run_config(&a)?;
    let instance = formats::load_instance(&a.instance)?;
    check_schedulable(&instance)?;
    let baseline = a.baseline.as_deref().map(formats::load_front_csv).transpose()?.map(|(_, f)| f);
    create_dir(&a.out)?;

    let clock = WallClock;
    let init = pipeline::initialise(&instance, &cfg, &clock)?;
    let (outcomes, report) = pipeline::sweep(&instance, &cfg, &init, baseline.as_ref(), &clock)?;
    if let [only] = &outcomes[..] {
        write_outcome(&a.out, only)?;
    } else {
        for o in &outcomes {
            write_outcome(&a.out.join(format!("seed_{}", o.seed)), o)?;
        }
    }
    let rows: Vec<&pipeline::ReportRow> = report.rows.iter().map(|r| &r.row).collect();
    formats::write_text(&a.out.join("report.csv"), &formats::rows_to_csv(&rows)?)?;

    let timings: Vec<_> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "seed": r.row.seed,
                "initialisation_seconds": r.timings.initialisation,
                "stage1_seconds": r.timings.stage1,
                "stage2_seconds": r.timings.stage2,
                "total_seconds": r.timings.total(),
            })
        })
        .collect();
    let meta = json!({
        "tool": "defsched",
        "version": env!("CARGO_PKG_VERSION"),
        "created_unix": unix_seconds(),
        "arguments": argv.iter().map(|s| s.to_string_lossy().into_owned()).collect::<Vec<_>>(),
        "threads": rayon::current_num_threads(),
        "timings": timings,
    });
    formats::write_json(&a.out.join("meta.json"), &meta)?;

    for r in &report.rows {
        println!(
            "{} seed {}: {} non-dominated solutions, hypervolume {:.6}, {:.1} s",
            r.row.method,
            if r.row.seed.is_empty() { "-" } else { &r.row.seed },
            r.row.n0,
            r.row.hypervolume,
            r.timings.total()
        );
    }
    Ok(())
}

fn check_schedulable(instance: &Instance) -> Result<(), CliError> {
    let bad = instance.unschedulable_defences();
    if bad.is_empty() {
        Ok(())
    } else {
        let ids: Vec<String> = bad.iter().map(|j| (j + 1).to_string()).collect();
        Err(CliError::Infeasible(format!("defences {} admit no committee with a common window", ids.join(", "))))
    }
}

fn evaluate_cmd(a: EvaluateArgs) -> Result<(), CliError> {
    let instance = formats::load_instance(&a.instance)?;
    let solution = formats::load_solution(&a.solution, &instance)?;
    let report = check_feasible(&instance, &solution).map_err(|e| CliError::Failure(e.to_string()))?;
    let values = evaluate(&instance, &solution, &Objective::ALL);
    for (o, v) in Objective::ALL.iter().zip(values.as_slice()) {
        println!("{o} = {v}");
    }
    if report.is_feasible() {
        println!("feasible");
    } else {
        println!("infeasible: {} violation(s)", report.violations.len());
        for v in &report.violations {
            println!("  {}", formats::describe_violation(v));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CompareRow {
    front: String,
    hypervolume: f64,
    n0: usize,
    n0_vs_baseline: usize,
}

/// Both fronts normalised over the min/max of their union.
fn compare_rows(
    front: (&str, &FrontArchive),
    baseline: (&str, &FrontArchive),
) -> Result<Vec<CompareRow>, CliError> {
    let all: Vec<&[i64]> =
        front.1.objective_vectors().chain(baseline.1.objective_vectors()).map(|v| v.as_slice()).collect();
    let dims = all.first().map_or(0, |v| v.len());
    if all.iter().any(|v| v.len() != dims) {
        return Err(CliError::Failure("fronts have different objective counts".into()));
    }
    let lo: Vec<i64> = (0..dims).map(|d| all.iter().map(|v| v[d]).min().unwrap_or(0)).collect();
    let hi: Vec<i64> = (0..dims).map(|d| all.iter().map(|v| v[d]).max().unwrap_or(0)).collect();
    let row = |(name, f): (&str, &FrontArchive), other: &FrontArchive| {
        let points: Vec<&[i64]> = f.objective_vectors().map(|v| v.as_slice()).collect();
        CompareRow {
            front: name.to_string(),
            hypervolume: pipeline::normalized_hypervolume(&points, &lo, &hi),
            n0: f.len(),
            n0_vs_baseline: pipeline::count_not_dominated(f, other),
        }
    };
    Ok(vec![row(front, baseline.1), row(baseline, front.1)])
}

fn compare(a: CompareArgs) -> Result<(), CliError> {
    let (names_a, front) = formats::load_front_csv(&a.front)?;
    let (names_b, baseline) = formats::load_front_csv(&a.baseline)?;
    if names_a != names_b {
        return Err(CliError::Failure(format!("objective columns differ: {names_a:?} vs {names_b:?}")));
    }
    let rows = compare_rows(
        (&a.front.display().to_string(), &front.nondominated()),
        (&a.baseline.display().to_string(), &baseline.nondominated()),
    )?;
    let text = formats::rows_to_csv(&rows)?;
    match &a.out {
        Some(path) => formats::write_text(path, &text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn export(a: ExportArgs) -> Result<(), CliError> {
    let (names, front) = formats::load_front_csv(&a.front)?;
    create_dir(&a.out)?;
    for (file, text) in formats::tradeoffs_to_csv(&names, &front)? {
        formats::write_text(&a.out.join(&file), &text)?;
        println!("wrote {}", a.out.join(file).display());
    }
    Ok(())
}
