//! `fairdiv`: run, check, generate, and probe fair-division instances
//! with mixed goods and chores from the command line.
//!
//! Exit codes: 0 when every checked property holds, 1 when one fails,
//! 2 on usage or file errors, 3 when an enumeration budget is exceeded.

mod files;
mod render;

use std::fs;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fairdiv::contiguous::{connected_prop1, moving_knife};
use fairdiv::discrete::{
    adjusted_winner_with_roles, double_round_robin, envy_graph_allocate, naive_round_robin,
    serial_dictatorship,
};
use fairdiv::fairness::{check_property, is_ef1, is_pareto_optimal, is_prop1, Property};
use fairdiv::oracle::{exists_allocation, EnumerationBudget, Requirements};
use fairdiv::sampling::{
    adjusted_winner_showcase, one_good_three_chores, sample_instance, Distribution,
};
use fairdiv::{additive_oracle, FairDivError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::files::{load_allocation, load_instance, InstanceFile, Names};
use crate::render::{
    allocation_value, connectivity_report, intervals_value, report_value, share_report,
    trace_value,
};

#[derive(Parser)]
#[command(name = "fairdiv", version, about = "Fair allocation of goods and chores")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an allocation algorithm and verify the properties it promises.
    Solve(SolveArgs),
    /// Check fairness properties of a given allocation.
    Check(CheckArgs),
    /// Write an instance file to stdout.
    Gen(GenArgs),
    /// Sample instances and count how many admit an allocation with the
    /// requested properties.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// Round robin in agent order, best remaining item each turn.
    NaiveRr,
    /// Chores round first, goods round in reverse order after.
    DoubleRr,
    /// Envy-graph placement, one item at a time.
    EnvyGraph,
    /// Two-agent transfer procedure (requires exactly two agents).
    AdjustedWinner,
    /// Agents take every item they like, in agent order.
    SerialDictatorship,
    /// Proportional division of the interval [0, m].
    MovingKnife,
    /// Contiguous bundles within one item of every share.
    ConnectedProp1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenDistribution {
    /// Signs drawn per entry with probability --p-good, magnitudes 1..=10.
    Mixed,
    AllGoods,
    AllChores,
    /// One mixed row copied to every agent.
    Identical,
    /// Fixed 2x4 table: one shared good, three shared chores.
    PaperProp3,
    /// Fixed 2x7 mixed-sign table with named agents.
    PaperExample1,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file; - reads stdin.
    instance: String,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Agent in the winner role for adjusted-winner, 1-indexed.
    #[arg(long, default_value_t = 1)]
    winner: usize,
    /// Cap on enumerated allocations for Pareto checks.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct CheckArgs {
    /// Instance file; - reads stdin.
    instance: String,
    /// Allocation file; - reads stdin.
    allocation: String,
    /// Comma-separated: ef, prop, ef1, prop1, efx, po.
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_property)]
    properties: Vec<Property>,
    /// Cap on enumerated allocations for Pareto checks.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct GenArgs {
    /// Required for the random distributions, ignored by the fixed tables.
    #[arg(long)]
    agents: Option<usize>,
    #[arg(long)]
    items: Option<usize>,
    #[arg(long, value_enum)]
    distribution: GenDistribution,
    /// Probability that an entry is a good, for mixed and identical.
    #[arg(long, default_value_t = 0.5)]
    p_good: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ProbeArgs {
    #[arg(long)]
    agents: usize,
    #[arg(long)]
    items: usize,
    /// Instances to sample.
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Property conjunction, comma-separated.
    #[arg(long, required = true, value_delimiter = ',', value_parser = parse_property)]
    properties: Vec<Property>,
    /// Also require every bundle to be contiguous.
    #[arg(long)]
    connected: bool,
    /// Probability that an entry is a good.
    #[arg(long, default_value_t = 0.5)]
    p_good: f64,
    /// Cap on enumerated allocations per instance; exceeding it is
    /// counted, not fatal.
    #[arg(long)]
    budget: Option<u64>,
    /// Where to write the first instance admitting no such allocation.
    #[arg(long, default_value = "counterexample.json")]
    counterexample: String,
}

fn parse_property(text: &str) -> Result<Property, String> {
    text.parse()
}

fn budget_from(flag: Option<u64>) -> EnumerationBudget {
    flag.map(EnumerationBudget).unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            let budget_hit = err.chain().any(|cause| {
                matches!(
                    cause.downcast_ref::<FairDivError>(),
                    Some(FairDivError::BudgetExceeded { .. })
                )
            });
            ExitCode::from(if budget_hit { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Check(args) => cmd_check(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Probe(args) => cmd_probe(args),
    }
}

fn push_report(
    report: fairdiv::fairness::FairnessReport,
    reports: &mut Vec<Value>,
    all_hold: &mut bool,
) {
    *all_hold &= report.holds;
    reports.push(report_value(&report));
}

fn cmd_solve(args: SolveArgs) -> Result<bool> {
    let (inst, file) = load_instance(&args.instance)?;
    let budget = budget_from(args.budget);
    let identity: Vec<usize> = (0..inst.agents()).collect();

    let mut doc = serde_json::Map::new();
    let name = args
        .algorithm
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    doc.insert("algorithm".into(), json!(name));
    if let Some(names) = &file.names {
        doc.insert("names".into(), serde_json::to_value(names)?);
    }

    let mut reports: Vec<Value> = Vec::new();
    let mut all_hold = true;
    match args.algorithm {
        Algorithm::NaiveRr => {
            let alloc = naive_round_robin(&inst, &identity)?;
            doc.insert("allocation".into(), allocation_value(&alloc, inst.items()));
            push_report(is_ef1(&inst, &alloc)?, &mut reports, &mut all_hold);
        }
        Algorithm::DoubleRr => {
            let alloc = double_round_robin(&inst);
            doc.insert("allocation".into(), allocation_value(&alloc, inst.items()));
            push_report(is_ef1(&inst, &alloc)?, &mut reports, &mut all_hold);
        }
        Algorithm::EnvyGraph => {
            let alloc = envy_graph_allocate(&additive_oracle(&inst))?;
            doc.insert("allocation".into(), allocation_value(&alloc, inst.items()));
            push_report(is_ef1(&inst, &alloc)?, &mut reports, &mut all_hold);
        }
        Algorithm::AdjustedWinner => {
            if args.winner == 0 {
                bail!("agents are 1-indexed; --winner starts at 1");
            }
            let (alloc, trace) = adjusted_winner_with_roles(&inst, args.winner - 1)?;
            doc.insert("allocation".into(), allocation_value(&alloc, inst.items()));
            doc.insert("trace".into(), trace_value(&trace, inst.items()));
            push_report(is_ef1(&inst, &alloc)?, &mut reports, &mut all_hold);
            push_report(
                is_pareto_optimal(&inst, &alloc, &budget)?,
                &mut reports,
                &mut all_hold,
            );
        }
        Algorithm::SerialDictatorship => {
            let alloc = serial_dictatorship(&inst, &identity)?;
            doc.insert("allocation".into(), allocation_value(&alloc, inst.items()));
            push_report(
                is_pareto_optimal(&inst, &alloc, &budget)?,
                &mut reports,
                &mut all_hold,
            );
        }
        Algorithm::MovingKnife => {
            let division = moving_knife(&inst)?;
            doc.insert("intervals".into(), intervals_value(&division, &inst));
            let (holds, report) = share_report(&inst, &division);
            all_hold &= holds;
            reports.push(report);
        }
        Algorithm::ConnectedProp1 => {
            let alloc = connected_prop1(&inst)?;
            doc.insert("allocation".into(), allocation_value(&alloc, inst.items()));
            push_report(is_prop1(&inst, &alloc)?, &mut reports, &mut all_hold);
            let (holds, report) = connectivity_report(&alloc);
            all_hold &= holds;
            reports.push(report);
        }
    }
    doc.insert("reports".into(), Value::Array(reports));
    doc.insert("all_hold".into(), json!(all_hold));
    println!("{}", serde_json::to_string_pretty(&Value::Object(doc))?);
    Ok(all_hold)
}

fn cmd_check(args: CheckArgs) -> Result<bool> {
    if args.instance == "-" && args.allocation == "-" {
        bail!("only one of the two inputs can come from stdin");
    }
    let (inst, _) = load_instance(&args.instance)?;
    let alloc = load_allocation(&args.allocation, &inst)?;
    let budget = budget_from(args.budget);

    let mut reports = Vec::new();
    let mut all_hold = true;
    for &property in &args.properties {
        push_report(
            check_property(&inst, &alloc, property, &budget)?,
            &mut reports,
            &mut all_hold,
        );
    }
    let doc = json!({
        "allocation": allocation_value(&alloc, inst.items()),
        "reports": reports,
        "all_hold": all_hold,
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(all_hold)
}

fn cmd_gen(args: GenArgs) -> Result<bool> {
    let file = match args.distribution {
        GenDistribution::PaperProp3 => InstanceFile::from_instance(&one_good_three_chores(), None),
        GenDistribution::PaperExample1 => InstanceFile::from_instance(
            &adjusted_winner_showcase(),
            Some(Names {
                agents: Some(vec!["Alice".into(), "Bob".into()]),
                items: None,
            }),
        ),
        random => {
            let (Some(agents), Some(items)) = (args.agents, args.items) else {
                bail!("--agents and --items are required for random distributions");
            };
            if agents == 0 {
                bail!("at least one agent required");
            }
            if !(0.0..=1.0).contains(&args.p_good) {
                bail!("--p-good must be within [0, 1]");
            }
            let dist = match random {
                GenDistribution::Mixed => Distribution::Mixed {
                    p_good: args.p_good,
                },
                GenDistribution::AllGoods => Distribution::AllGoods,
                GenDistribution::AllChores => Distribution::AllChores,
                GenDistribution::Identical => Distribution::Identical {
                    p_good: args.p_good,
                },
                GenDistribution::PaperProp3 | GenDistribution::PaperExample1 => unreachable!(),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            InstanceFile::from_instance(&sample_instance(&mut rng, dist, agents, items), None)
        }
    };
    println!("{}", serde_json::to_string_pretty(&file)?);
    Ok(true)
}

fn cmd_probe(args: ProbeArgs) -> Result<bool> {
    if args.agents == 0 {
        bail!("at least one agent required");
    }
    if !(0.0..=1.0).contains(&args.p_good) {
        bail!("--p-good must be within [0, 1]");
    }
    let budget = budget_from(args.budget);
    let requirements = Requirements {
        properties: args.properties.clone(),
        connected: args.connected,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut satisfiable = 0usize;
    let mut unsatisfiable = 0usize;
    let mut over_budget = 0usize;
    let mut counterexample = None;
    for index in 0..args.count {
        let inst = sample_instance(
            &mut rng,
            Distribution::Mixed {
                p_good: args.p_good,
            },
            args.agents,
            args.items,
        );
        match exists_allocation(&inst, &requirements, true, &budget) {
            Ok(Some(_)) => satisfiable += 1,
            Ok(None) => {
                unsatisfiable += 1;
                if counterexample.is_none() {
                    let file = InstanceFile::from_instance(&inst, None);
                    fs::write(&args.counterexample, serde_json::to_string_pretty(&file)?)
                        .with_context(|| format!("writing {}", args.counterexample))?;
                    counterexample = Some(index);
                }
            }
            Err(FairDivError::BudgetExceeded { .. }) => over_budget += 1,
            Err(err) => return Err(err.into()),
        }
    }

    let conjunction: Vec<String> = args.properties.iter().map(Property::to_string).collect();
    println!(
        "probe agents={} items={} count={} seed={} properties={}{}",
        args.agents,
        args.items,
        args.count,
        args.seed,
        conjunction.join(","),
        if args.connected { " connected" } else { "" },
    );
    println!("satisfiable: {satisfiable}");
    println!("unsatisfiable: {unsatisfiable}");
    println!("budget-exceeded: {over_budget}");
    if let Some(index) = counterexample {
        println!(
            "counterexample: {} (instance {})",
            args.counterexample,
            index + 1
        );
    }
    Ok(true)
}
