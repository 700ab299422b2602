use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use prodist::audit_doc::audit_to_json;
use prodist::instance_file::{instance_to_json, load_instance};
use prodist::result_doc::{trace_to_csv, ResultDoc};
use prodist::table_csv::parse_table;
use prodist::{fixtures, write_atomic};
use prodist_core::oracle::{brute_force_optimum, lower_bound, OracleError};
use prodist_core::scenario::{
    build_scenario, check_schedule, compare_scenarios, ScenarioName, ScheduleAudit,
};
use prodist_core::{FlowPlan, Matrix, NetworkInstance, SolverConfig};

#[derive(Parser)]
#[command(name = "prodist", version, about = "Production-distribution planning with NSGA-II")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the genetic algorithm on an instance.
    Solve {
        instance: PathBuf,
        #[arg(long, default_value_t = SolverConfig::default().seed)]
        seed: u64,
        #[arg(long, default_value_t = SolverConfig::default().max_generations)]
        generations: usize,
        #[arg(long, default_value_t = SolverConfig::default().population_size)]
        population: usize,
        #[arg(long, default_value_t = SolverConfig::default().crossover_prob)]
        crossover: f64,
        /// Per-gene mutation probability.
        #[arg(long, default_value_t = SolverConfig::default().mutation_prob)]
        mutation: f64,
        /// Result document (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-generation trace (CSV).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Validate an instance file.
    Check { instance: PathBuf },
    /// Total a schedule table and list capacity breaches.
    Audit {
        table: PathBuf,
        #[arg(long)]
        scenario: ScenarioName,
        /// Also check each DC row against its own capacity.
        #[arg(long)]
        strict_per_dc: bool,
        #[arg(long)]
        json: bool,
    },
    /// Percent change in total cases between two schedule tables.
    Compare {
        table_a: PathBuf,
        table_b: PathBuf,
        #[arg(long)]
        scenario_a: ScenarioName,
        #[arg(long)]
        scenario_b: ScenarioName,
    },
    /// Exhaustive lattice search for a tiny instance.
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        grid: f64,
    },
    /// Write a scenario's instance and schedule table into a directory.
    Scenario {
        name: ScenarioName,
        #[arg(long)]
        emit: PathBuf,
    },
}

enum Failure {
    /// Bad arguments or unreadable, malformed or invalid input.
    Input(anyhow::Error),
    /// The run finished without a feasible answer.
    NoResult(String),
    /// The oracle declined the instance.
    Refused(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_instance(path: &Path) -> anyhow::Result<NetworkInstance> {
    let text = read(path)?;
    load_instance(&text).with_context(|| format!("invalid instance {}", path.display()))
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    write_atomic(path, contents.as_bytes())
        .with_context(|| format!("cannot write {}", path.display()))
}

fn audit_file(path: &Path, scenario: ScenarioName, strict: bool) -> anyhow::Result<ScheduleAudit> {
    let table = parse_table(&read(path)?)
        .with_context(|| format!("invalid table {}", path.display()))?;
    let spec = build_scenario(scenario).spec;
    check_schedule(&table, &spec, strict)
        .with_context(|| format!("{} does not fit scenario {scenario}", path.display()))
}

fn render_matrix(out: &mut String, name: &str, m: &Matrix) {
    let _ = writeln!(out, "{name}:");
    for r in 0..m.rows() {
        let cells: Vec<String> = m.row(r).iter().map(|x| format!("{x:.4}")).collect();
        let _ = writeln!(out, "  {}", cells.join(" "));
    }
}

fn render_plan(plan: &FlowPlan) -> String {
    let mut out = String::new();
    render_matrix(&mut out, "raw flow (supplier x plant)", &plan.raw_flow);
    render_matrix(&mut out, "plant to DC flow", &plan.plant_dc_flow);
    render_matrix(&mut out, "DC to retailer flow", &plan.dc_retailer_flow);
    out
}

#[allow(clippy::too_many_arguments)]
fn solve(
    instance: &Path,
    seed: u64,
    generations: usize,
    population: usize,
    crossover: f64,
    mutation: f64,
    out: Option<&Path>,
    trace: Option<&Path>,
) -> Result<(), Failure> {
    let inst = read_instance(instance)?;
    let config = SolverConfig {
        seed,
        max_generations: generations,
        population_size: population,
        crossover_prob: crossover,
        mutation_prob: mutation,
        ..SolverConfig::default()
    };
    let result = prodist_core::solve(&inst, &config).context("cannot run the solver")?;

    if let Some(path) = out {
        write(path, &ResultDoc::from(&result).to_json())?;
    }
    if let Some(path) = trace {
        write(path, &trace_to_csv(&result.trace))?;
    }

    println!(
        "stopped by {} after {} generations",
        result.terminated_by.as_str(),
        result.generations_run
    );
    match &result.best_feasible {
        Some(best) => {
            let c = &best.cost;
            println!("best feasible cost: {}", c.total);
            println!(
                "  raw {} | plant to DC {} | holding {} | DC to retailer {}",
                c.raw_cost, c.plant_to_dc_cost, c.holding_cost, c.dc_to_retailer_cost
            );
            Ok(())
        }
        None => {
            let least = result
                .final_front
                .iter()
                .map(|i| i.violation())
                .fold(f64::INFINITY, f64::min);
            Err(Failure::NoResult(format!(
                "no feasible plan found; smallest violation {least}"
            )))
        }
    }
}

fn check(path: &Path) -> Result<(), Failure> {
    let inst = read_instance(path)?;
    println!(
        "ok: {} suppliers, {} plants, {} DCs, {} retailers",
        inst.num_suppliers, inst.num_plants, inst.num_dcs, inst.num_retailers
    );
    println!("total demand: {}", inst.total_demand());
    println!(
        "producible (plant capacity / u): {}",
        inst.plant_capacity.iter().sum::<f64>() / inst.utilization
    );
    println!("DC storage: {}", inst.dc_capacity.iter().sum::<f64>());
    println!(
        "per-DC checks: {}",
        if inst.strict_per_dc { "on" } else { "off" }
    );
    Ok(())
}

fn oracle(path: &Path, grid: f64) -> Result<(), Failure> {
    let inst = read_instance(path)?;
    match brute_force_optimum(&inst, grid) {
        Ok(opt) => {
            println!("lattice points: {}", opt.points);
            println!("optimum cost: {}", opt.cost);
            println!("lower bound: {}", lower_bound(&inst));
            print!("{}", render_plan(&opt.plan));
            Ok(())
        }
        Err(e @ OracleError::SearchSpaceTooLarge { .. }) => Err(Failure::Refused(e.to_string())),
        Err(e @ OracleError::NoFeasibleLatticePoint { .. }) => Err(Failure::NoResult(e.to_string())),
        Err(e) => Err(Failure::Input(e.into())),
    }
}

fn scenario(name: ScenarioName, dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let template = build_scenario(name);
    let spec = &template.spec;
    let instance_path = dir.join(fixtures::instance_file_name(name));
    let table_path = dir.join(fixtures::table_file_name(name));
    write(&instance_path, &instance_to_json(&template.synthetic_instance()))?;
    write(&table_path, fixtures::table(name))?;
    println!("{name}: {}", spec.notes);
    println!("plant capacities: {:?}", spec.plant_capacities);
    println!("DC capacities: {:?}", spec.dc_capacities);
    println!("wrote {}", instance_path.display());
    println!("wrote {}", table_path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            instance,
            seed,
            generations,
            population,
            crossover,
            mutation,
            out,
            trace,
        } => solve(
            &instance,
            seed,
            generations,
            population,
            crossover,
            mutation,
            out.as_deref(),
            trace.as_deref(),
        ),
        Command::Check { instance } => check(&instance),
        Command::Audit {
            table,
            scenario,
            strict_per_dc,
            json,
        } => {
            let audit = audit_file(&table, scenario, strict_per_dc)?;
            if json {
                print!("{}", audit_to_json(&audit));
            } else {
                print!("{}", audit.render());
            }
            Ok(())
        }
        Command::Compare {
            table_a,
            table_b,
            scenario_a,
            scenario_b,
        } => {
            let a = audit_file(&table_a, scenario_a, false)?;
            let b = audit_file(&table_b, scenario_b, false)?;
            print!("{}", compare_scenarios(&a, &b).render());
            Ok(())
        }
        Command::Oracle { instance, grid } => oracle(&instance, grid),
        Command::Scenario { name, emit } => scenario(name, &emit),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NoResult(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Refused(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(3)
        }
    }
}
