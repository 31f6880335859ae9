//! JSON rendering of allocations, verdicts, transfer traces, and interval
//! divisions. Agents and items are 1-indexed everywhere in this module.

use fairdiv::contiguous::FractionalAllocation;
use fairdiv::discrete::{AwDirection, AwTrace};
use fairdiv::fairness::{FairnessReport, Prop1Clause, Witness};
use fairdiv::{Allocation, Instance, Rational};
use serde_json::{json, Value};

use crate::files::{encode_rational, AllocationFile};

pub fn rational_value(value: &Rational) -> Value {
    serde_json::to_value(encode_rational(value)).expect("rational encodes")
}

pub fn allocation_value(alloc: &Allocation, items: usize) -> Value {
    serde_json::to_value(AllocationFile::from_allocation(alloc, items)).expect("allocation encodes")
}

pub fn report_value(report: &FairnessReport) -> Value {
    json!({
        "property": report.property.to_string(),
        "holds": report.holds,
        "witnesses": report.witnesses.iter().map(witness_value).collect::<Vec<_>>(),
    })
}

fn witness_value(witness: &Witness) -> Value {
    match witness {
        Witness::Envy { envier, envied } => json!({
            "kind": "envy", "envier": envier + 1, "envied": envied + 1,
        }),
        Witness::Ef1Removal {
            envier,
            envied,
            item,
            from_envied,
        } => json!({
            "kind": "settling-removal",
            "envier": envier + 1,
            "envied": envied + 1,
            "item": item + 1,
            "from": if *from_envied { "envied" } else { "own" },
        }),
        Witness::Ef1Violation { envier, envied } => json!({
            "kind": "envy-beyond-one-item", "envier": envier + 1, "envied": envied + 1,
        }),
        Witness::PropShortfall {
            agent,
            value,
            share,
        } => json!({
            "kind": "share-shortfall",
            "agent": agent + 1,
            "value": rational_value(value),
            "share": rational_value(share),
        }),
        Witness::Prop1Met { agent, clause } => match clause {
            Prop1Clause::ShareMet => json!({"kind": "share-met", "agent": agent + 1}),
            Prop1Clause::AddOutside(item) => json!({
                "kind": "share-met-adding", "agent": agent + 1, "item": item + 1,
            }),
            Prop1Clause::RemoveOwn(item) => json!({
                "kind": "share-met-removing", "agent": agent + 1, "item": item + 1,
            }),
        },
        Witness::Prop1Violation { agent } => json!({
            "kind": "share-beyond-one-item", "agent": agent + 1,
        }),
        Witness::EfxViolation {
            envier,
            envied,
            item,
            own_chore,
        } => json!({
            "kind": "unremovable-envy",
            "envier": envier + 1,
            "envied": envied + 1,
            "item": item + 1,
            "clause": if *own_chore { "own-chore" } else { "envied-good" },
        }),
        Witness::DominatedBy { allocation } => json!({
            "kind": "dominated-by",
            "bundles": allocation
                .bundles()
                .iter()
                .map(|b| b.iter().map(|item| item + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
    }
}

pub fn trace_value(trace: &AwTrace, items: usize) -> Value {
    json!({
        "winner": trace.winner + 1,
        "loser": trace.loser + 1,
        "ratio_order": trace.ratio_order.iter().map(|o| o + 1).collect::<Vec<_>>(),
        "initial": allocation_value(&trace.initial, items),
        "initial_loser_ef1": trace.initial_loser_ef1,
        "steps": trace.steps.iter().map(|step| json!({
            "item": step.item + 1,
            "direction": match step.direction {
                AwDirection::GoodToLoser => "good-to-loser",
                AwDirection::ChoreToWinner => "chore-to-winner",
            },
            "after": allocation_value(&step.after, items),
            "loser_ef1_after": step.loser_ef1_after,
        })).collect::<Vec<_>>(),
    })
}

pub fn intervals_value(division: &FractionalAllocation, inst: &Instance) -> Value {
    let pieces: Vec<Value> = (0..division.agents())
        .map(|agent| {
            let piece = division.piece(agent).map(|p| {
                json!({"lo": rational_value(&p.lo), "hi": rational_value(&p.hi)})
            });
            json!({
                "agent": agent + 1,
                "piece": piece,
                "value": rational_value(&division.value(inst, agent)),
                "share": rational_value(&inst.proportional_share(agent)),
            })
        })
        .collect();
    json!({
        "carve_order": division.carve_order().iter().map(|a| a + 1).collect::<Vec<_>>(),
        "pieces": pieces,
    })
}

/// Verdict on the interval division: every agent's piece is worth at
/// least her proportional share of the whole interval, by her own
/// measure.
pub fn share_report(inst: &Instance, division: &FractionalAllocation) -> (bool, Value) {
    let mut shortfalls = Vec::new();
    for agent in 0..inst.agents() {
        let value = division.value(inst, agent);
        let share = inst.proportional_share(agent);
        if value < share {
            shortfalls.push(json!({
                "kind": "share-shortfall",
                "agent": agent + 1,
                "value": rational_value(&value),
                "share": rational_value(&share),
            }));
        }
    }
    let holds = shortfalls.is_empty();
    (
        holds,
        json!({"property": "proportional-share", "holds": holds, "witnesses": shortfalls}),
    )
}

/// Verdict on bundle contiguity: item numbers in each bundle form a run.
pub fn connectivity_report(alloc: &Allocation) -> (bool, Value) {
    let gaps: Vec<Value> = (0..alloc.agents())
        .filter(|&agent| !alloc.bundle(agent).is_contiguous())
        .map(|agent| json!({"kind": "bundle-with-gaps", "agent": agent + 1}))
        .collect();
    let holds = gaps.is_empty();
    (
        holds,
        json!({"property": "connected", "holds": holds, "witnesses": gaps}),
    )
}
