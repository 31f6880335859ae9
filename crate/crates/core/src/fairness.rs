//! Fairness checkers.
//!
//! Each checker takes an instance and an allocation, validates shapes, and
//! returns a [`FairnessReport`] whose witnesses are strong enough to
//! re-verify the verdict from the definitions alone. Envy comparisons are
//! over ordered pairs; an agent never envies herself. All arithmetic is
//! exact.

use std::fmt;
use std::str::FromStr;

use num::Signed;

use crate::model::{Allocation, Bundle, Instance, Rational, UtilityOracle};
use crate::oracle::{find_dominating, EnumerationBudget};
use crate::FairDivError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Ef,
    Prop,
    Ef1,
    Prop1,
    Efx,
    Po,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Property::Ef => "EF",
            Property::Prop => "PROP",
            Property::Ef1 => "EF1",
            Property::Prop1 => "PROP1",
            Property::Efx => "EFX",
            Property::Po => "PO",
        };
        f.write_str(s)
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ef" => Ok(Property::Ef),
            "prop" => Ok(Property::Prop),
            "ef1" => Ok(Property::Ef1),
            "prop1" => Ok(Property::Prop1),
            "efx" => Ok(Property::Efx),
            "po" => Ok(Property::Po),
            other => Err(format!("unknown property '{other}'")),
        }
    }
}

/// Which PROP1 clause an agent satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prop1Clause {
    /// u_i(bundle) already meets the proportional share.
    ShareMet,
    /// Adding this item from outside the bundle meets the share.
    AddOutside(usize),
    /// Removing this item from the bundle meets the share.
    RemoveOwn(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// envier values envied's bundle strictly above her own.
    Envy { envier: usize, envied: usize },
    /// Removing `item` settles the pair: from the envied bundle if
    /// `from_envied`, otherwise from the envier's own bundle.
    Ef1Removal {
        envier: usize,
        envied: usize,
        item: usize,
        from_envied: bool,
    },
    /// No single-item removal settles the pair.
    Ef1Violation { envier: usize, envied: usize },
    PropShortfall {
        agent: usize,
        value: Rational,
        share: Rational,
    },
    Prop1Met { agent: usize, clause: Prop1Clause },
    Prop1Violation { agent: usize },
    /// The named clause fails on `item`: a chore the envier cannot shed
    /// (`own_chore`), or a good of the envied bundle whose removal still
    /// leaves envy.
    EfxViolation {
        envier: usize,
        envied: usize,
        item: usize,
        own_chore: bool,
    },
    DominatedBy { allocation: Allocation },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FairnessReport {
    pub property: Property,
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

impl FairnessReport {
    fn new(property: Property, holds: bool, witnesses: Vec<Witness>) -> Self {
        FairnessReport {
            property,
            holds,
            witnesses,
        }
    }
}

/// Bundle count must match the agent count and item indices must be in
/// range. Disjointness is an `Allocation` construction invariant.
pub fn shape_check(inst: &Instance, alloc: &Allocation) -> Result<(), FairDivError> {
    if alloc.agents() != inst.agents() {
        return Err(FairDivError::AgentCountMismatch {
            found: alloc.agents(),
            expected: inst.agents(),
        });
    }
    for bundle in alloc.bundles() {
        for item in bundle.iter() {
            if item >= inst.items() {
                return Err(FairDivError::ItemOutOfRange {
                    item,
                    items: inst.items(),
                });
            }
        }
    }
    Ok(())
}

/// u_i(own) >= u_i(other) for every ordered pair. Violating pairs are the
/// witnesses.
pub fn is_envy_free(inst: &Instance, alloc: &Allocation) -> Result<FairnessReport, FairDivError> {
    shape_check(inst, alloc)?;
    let n = inst.agents();
    let mut witnesses = Vec::new();
    for i in 0..n {
        let own = inst.bundle_utility(i, alloc.bundle(i));
        for j in 0..n {
            if i != j && own < inst.bundle_utility(i, alloc.bundle(j)) {
                witnesses.push(Witness::Envy {
                    envier: i,
                    envied: j,
                });
            }
        }
    }
    Ok(FairnessReport::new(
        Property::Ef,
        witnesses.is_empty(),
        witnesses,
    ))
}

/// u_i(own) >= u_i(O)/n for every agent, with the share taken over the whole
/// item set whether or not the allocation is complete.
pub fn is_proportional(
    inst: &Instance,
    alloc: &Allocation,
) -> Result<FairnessReport, FairDivError> {
    shape_check(inst, alloc)?;
    let mut witnesses = Vec::new();
    for i in 0..inst.agents() {
        let value = inst.bundle_utility(i, alloc.bundle(i));
        let share = inst.proportional_share(i);
        if value < share {
            witnesses.push(Witness::PropShortfall {
                agent: i,
                value,
                share,
            });
        }
    }
    Ok(FairnessReport::new(
        Property::Prop,
        witnesses.is_empty(),
        witnesses,
    ))
}

/// Outcome of the pairwise up-to-one-item comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairEf1 {
    NoEnvy,
    /// Removing `item` settles the pair (from the envied bundle when
    /// `from_envied`, else from the envier's own bundle).
    Certified { item: usize, from_envied: bool },
    Violated,
}

/// Does `envier` envy `envied` by at most one item? Candidate removals are
/// scanned over the envied bundle first (largest utility for the envier
/// first), then over the envier's own bundle (smallest utility first), ties
/// on the lower item index, and the first settling item is reported.
pub fn ef1_pair(inst: &Instance, alloc: &Allocation, envier: usize, envied: usize) -> PairEf1 {
    let own = inst.bundle_utility(envier, alloc.bundle(envier));
    let other = inst.bundle_utility(envier, alloc.bundle(envied));
    if own >= other {
        return PairEf1::NoEnvy;
    }
    let mut from_theirs: Vec<usize> = alloc.bundle(envied).iter().collect();
    from_theirs.sort_by(|&a, &b| {
        inst.utility(envier, b)
            .cmp(inst.utility(envier, a))
            .then(a.cmp(&b))
    });
    for item in from_theirs {
        if own >= &other - inst.utility(envier, item) {
            return PairEf1::Certified {
                item,
                from_envied: true,
            };
        }
    }
    let mut from_own: Vec<usize> = alloc.bundle(envier).iter().collect();
    from_own.sort_by(|&a, &b| {
        inst.utility(envier, a)
            .cmp(inst.utility(envier, b))
            .then(a.cmp(&b))
    });
    for item in from_own {
        if &own - inst.utility(envier, item) >= other {
            return PairEf1::Certified {
                item,
                from_envied: false,
            };
        }
    }
    PairEf1::Violated
}

/// Envy bounded by one item for every ordered pair. Witnesses certify each
/// envious pair (or record its violation).
pub fn is_ef1(inst: &Instance, alloc: &Allocation) -> Result<FairnessReport, FairDivError> {
    shape_check(inst, alloc)?;
    let n = inst.agents();
    let mut holds = true;
    let mut witnesses = Vec::new();
    for envier in 0..n {
        for envied in 0..n {
            if envier == envied {
                continue;
            }
            match ef1_pair(inst, alloc, envier, envied) {
                PairEf1::NoEnvy => {}
                PairEf1::Certified { item, from_envied } => {
                    witnesses.push(Witness::Ef1Removal {
                        envier,
                        envied,
                        item,
                        from_envied,
                    });
                }
                PairEf1::Violated => {
                    holds = false;
                    witnesses.push(Witness::Ef1Violation { envier, envied });
                }
            }
        }
    }
    Ok(FairnessReport::new(Property::Ef1, holds, witnesses))
}

/// Same pairwise test against a utility oracle instead of an additive
/// matrix. Removal candidates are scanned in item order, envied bundle
/// first.
pub fn ef1_pair_under<O: UtilityOracle>(
    oracle: &O,
    alloc: &Allocation,
    envier: usize,
    envied: usize,
) -> PairEf1 {
    let own = oracle.evaluate(envier, alloc.bundle(envier));
    let other = oracle.evaluate(envier, alloc.bundle(envied));
    if own >= other {
        return PairEf1::NoEnvy;
    }
    for item in alloc.bundle(envied).iter() {
        let mut reduced = alloc.bundle(envied).clone();
        reduced.remove(item);
        if own >= oracle.evaluate(envier, &reduced) {
            return PairEf1::Certified {
                item,
                from_envied: true,
            };
        }
    }
    for item in alloc.bundle(envier).iter() {
        let mut reduced = alloc.bundle(envier).clone();
        reduced.remove(item);
        if oracle.evaluate(envier, &reduced) >= other {
            return PairEf1::Certified {
                item,
                from_envied: false,
            };
        }
    }
    PairEf1::Violated
}

/// EF1 for preferences given by an oracle.
pub fn is_ef1_under<O: UtilityOracle>(
    oracle: &O,
    alloc: &Allocation,
) -> Result<FairnessReport, FairDivError> {
    if alloc.agents() != oracle.agent_count() {
        return Err(FairDivError::AgentCountMismatch {
            found: alloc.agents(),
            expected: oracle.agent_count(),
        });
    }
    let n = oracle.agent_count();
    let mut holds = true;
    let mut witnesses = Vec::new();
    for envier in 0..n {
        for envied in 0..n {
            if envier == envied {
                continue;
            }
            match ef1_pair_under(oracle, alloc, envier, envied) {
                PairEf1::NoEnvy => {}
                PairEf1::Certified { item, from_envied } => {
                    witnesses.push(Witness::Ef1Removal {
                        envier,
                        envied,
                        item,
                        from_envied,
                    });
                }
                PairEf1::Violated => {
                    holds = false;
                    witnesses.push(Witness::Ef1Violation { envier, envied });
                }
            }
        }
    }
    Ok(FairnessReport::new(Property::Ef1, holds, witnesses))
}

/// Proportionality up to one item: the share is met outright, or after
/// adding some single item from outside the bundle, or after removing some
/// single item from it. One witness per agent records the satisfied clause.
pub fn is_prop1(inst: &Instance, alloc: &Allocation) -> Result<FairnessReport, FairDivError> {
    shape_check(inst, alloc)?;
    let mut holds = true;
    let mut witnesses = Vec::new();
    for i in 0..inst.agents() {
        let value = inst.bundle_utility(i, alloc.bundle(i));
        let share = inst.proportional_share(i);
        if value >= share {
            witnesses.push(Witness::Prop1Met {
                agent: i,
                clause: Prop1Clause::ShareMet,
            });
            continue;
        }
        // Best candidate decides each clause: the most valuable outside
        // item, the most burdensome own item. Ties on the lower index.
        let outside = (0..inst.items())
            .filter(|&o| !alloc.bundle(i).contains(o))
            .max_by(|&a, &b| {
                inst.utility(i, a)
                    .cmp(inst.utility(i, b))
                    .then(b.cmp(&a))
            });
        if let Some(o) = outside {
            if &value + inst.utility(i, o) >= share {
                witnesses.push(Witness::Prop1Met {
                    agent: i,
                    clause: Prop1Clause::AddOutside(o),
                });
                continue;
            }
        }
        let own = alloc.bundle(i).iter().min_by(|&a, &b| {
            inst.utility(i, a)
                .cmp(inst.utility(i, b))
                .then(a.cmp(&b))
        });
        if let Some(o) = own {
            if &value - inst.utility(i, o) >= share {
                witnesses.push(Witness::Prop1Met {
                    agent: i,
                    clause: Prop1Clause::RemoveOwn(o),
                });
                continue;
            }
        }
        holds = false;
        witnesses.push(Witness::Prop1Violation { agent: i });
    }
    Ok(FairnessReport::new(Property::Prop1, holds, witnesses))
}

/// Envy-freeness up to any item: for every ordered pair, shedding any own
/// chore kills the envy, and so does removing any good (for the envier)
/// from the envied bundle.
pub fn is_efx(inst: &Instance, alloc: &Allocation) -> Result<FairnessReport, FairDivError> {
    shape_check(inst, alloc)?;
    let n = inst.agents();
    let mut witnesses = Vec::new();
    for envier in 0..n {
        let own = inst.bundle_utility(envier, alloc.bundle(envier));
        for envied in 0..n {
            if envier == envied {
                continue;
            }
            let other = inst.bundle_utility(envier, alloc.bundle(envied));
            for item in alloc.bundle(envier).iter() {
                if inst.utility(envier, item).is_negative()
                    && &own - inst.utility(envier, item) < other
                {
                    witnesses.push(Witness::EfxViolation {
                        envier,
                        envied,
                        item,
                        own_chore: true,
                    });
                }
            }
            for item in alloc.bundle(envied).iter() {
                if inst.utility(envier, item).is_positive()
                    && own < &other - inst.utility(envier, item)
                {
                    witnesses.push(Witness::EfxViolation {
                        envier,
                        envied,
                        item,
                        own_chore: false,
                    });
                }
            }
        }
    }
    Ok(FairnessReport::new(
        Property::Efx,
        witnesses.is_empty(),
        witnesses,
    ))
}

/// Exact Pareto optimality by enumerating all complete allocations. The
/// allocation must be complete; instances whose n^m exceeds the budget are
/// reported as [`FairDivError::BudgetExceeded`], which is an answer about
/// cost, never a verdict.
pub fn is_pareto_optimal(
    inst: &Instance,
    alloc: &Allocation,
    budget: &EnumerationBudget,
) -> Result<FairnessReport, FairDivError> {
    shape_check(inst, alloc)?;
    if !alloc.is_complete(inst.items()) {
        return Err(FairDivError::IncompleteAllocation);
    }
    let witness = find_dominating(inst, alloc, budget)?;
    Ok(match witness {
        Some(better) => FairnessReport::new(
            Property::Po,
            false,
            vec![Witness::DominatedBy { allocation: better }],
        ),
        None => FairnessReport::new(Property::Po, true, vec![]),
    })
}

/// Dispatch by property. Only the Pareto check consumes the budget.
pub fn check_property(
    inst: &Instance,
    alloc: &Allocation,
    property: Property,
    budget: &EnumerationBudget,
) -> Result<FairnessReport, FairDivError> {
    match property {
        Property::Ef => is_envy_free(inst, alloc),
        Property::Prop => is_proportional(inst, alloc),
        Property::Ef1 => is_ef1(inst, alloc),
        Property::Prop1 => is_prop1(inst, alloc),
        Property::Efx => is_efx(inst, alloc),
        Property::Po => is_pareto_optimal(inst, alloc, budget),
    }
}

/// Round-robin share: the worst bundle utility when the picking procedure
/// runs on a world of clones of the agent.
pub fn compute_rrs(inst: &Instance, agent: usize) -> Result<Rational, FairDivError> {
    let clones = inst.identical_clone(agent)?;
    let alloc = crate::discrete::double_round_robin(&clones);
    let min = (0..clones.agents())
        .map(|i| clones.bundle_utility(agent, alloc.bundle(i)))
        .min()
        .expect("at least one agent");
    Ok(min)
}

/// Satisfied when the bundle's item indices form a run without gaps. Used
/// by the enumeration oracle's connectivity requirement.
pub fn is_connected(alloc: &Allocation) -> bool {
    alloc.bundles().iter().all(Bundle::is_contiguous)
}
