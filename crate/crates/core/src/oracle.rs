//! Brute-force allocation search by complete enumeration.
//!
//! The enumerator walks owner vectors in item-major order with item 0 as
//! the most significant digit, so the "first" witness of any predicate is
//! reproducible. Every search is gated by an explicit budget on the
//! number of allocations visited; a blown budget is an error about cost,
//! never a verdict. The whole module trades cleverness for being
//! obviously correct.

use std::ops::{AddAssign, SubAssign};

use num::bigint::BigInt;
use num::{integer, Signed, ToPrimitive, Zero};

use crate::fairness::{self, Property};
use crate::model::{Allocation, Instance};
use crate::FairDivError;

/// Cap on how many allocations a brute-force search may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget(pub u64);

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget(20_000_000)
    }
}

/// Number of allocations of `items` items among `agents` agents; leaving
/// an item unassigned counts as one more choice when partial allocations
/// are included. None on u128 overflow.
pub fn allocation_count(agents: usize, items: usize, complete_only: bool) -> Option<u128> {
    let base = agents as u128 + u128::from(!complete_only);
    let mut count: u128 = 1;
    for _ in 0..items {
        count = count.checked_mul(base)?;
    }
    Some(count)
}

fn check_budget(
    agents: usize,
    items: usize,
    complete_only: bool,
    budget: &EnumerationBudget,
) -> Result<(), FairDivError> {
    match allocation_count(agents, items, complete_only) {
        Some(count) if count <= u128::from(budget.0) => Ok(()),
        Some(count) => Err(FairDivError::BudgetExceeded {
            needed: count,
            budget: budget.0,
        }),
        None => Err(FairDivError::BudgetExceeded {
            needed: u128::MAX,
            budget: budget.0,
        }),
    }
}

/// Streams allocations in canonical order, starting from
/// everything-to-agent-0. One digit per item; the value `agents` marks an
/// unassigned item when partial allocations are included.
#[derive(Debug)]
pub struct AllocationIter {
    agents: usize,
    base: usize,
    owners: Vec<usize>,
    fresh: bool,
    exhausted: bool,
}

impl AllocationIter {
    fn build(&self) -> Allocation {
        owners_to_allocation(self.agents, &self.owners)
    }
}

impl Iterator for AllocationIter {
    type Item = Allocation;

    fn next(&mut self) -> Option<Allocation> {
        if self.exhausted {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(self.build());
        }
        let mut pos = self.owners.len();
        loop {
            if pos == 0 {
                self.exhausted = true;
                return None;
            }
            pos -= 1;
            self.owners[pos] += 1;
            if self.owners[pos] < self.base {
                break;
            }
            self.owners[pos] = 0;
        }
        Some(self.build())
    }
}

/// All allocations of the instance's items, within budget.
pub fn enumerate_allocations(
    inst: &Instance,
    complete_only: bool,
    budget: &EnumerationBudget,
) -> Result<AllocationIter, FairDivError> {
    check_budget(inst.agents(), inst.items(), complete_only, budget)?;
    Ok(AllocationIter {
        agents: inst.agents(),
        base: inst.agents() + usize::from(!complete_only),
        owners: vec![0; inst.items()],
        fresh: true,
        exhausted: false,
    })
}

fn owners_to_allocation(agents: usize, owners: &[usize]) -> Allocation {
    let mut alloc = Allocation::empty(agents);
    for (item, &owner) in owners.iter().enumerate() {
        if owner < agents {
            alloc.assign(owner, item);
        }
    }
    alloc
}

/// Utilities scaled to integers, each row by the least common multiple of
/// its denominators. Scaling is per agent, which preserves each agent's
/// comparisons and hence dominance.
fn scaled_rows(inst: &Instance) -> Vec<Vec<BigInt>> {
    (0..inst.agents())
        .map(|i| {
            let row = inst.row(i);
            let mut scale = BigInt::from(1);
            for u in row {
                scale = integer::lcm(scale, u.denom().clone());
            }
            row.iter()
                .map(|u| u.numer() * (&scale / u.denom()))
                .collect()
        })
        .collect()
}

/// The scaled rows as machine integers when every profile is guaranteed
/// to fit with room to spare.
fn to_i128_rows(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<i128>>> {
    let limit = BigInt::from(i128::MAX / 4);
    rows.iter()
        .map(|row| {
            let magnitude: BigInt = row.iter().map(|w| w.abs()).sum();
            if magnitude > limit {
                return None;
            }
            row.iter().map(|w| w.to_i128()).collect()
        })
        .collect()
}

trait ProfileNum:
    Clone + Ord + Zero + for<'a> AddAssign<&'a Self> + for<'a> SubAssign<&'a Self>
{
}
impl<T> ProfileNum for T where
    T: Clone + Ord + Zero + for<'a> AddAssign<&'a T> + for<'a> SubAssign<&'a T>
{
}

/// Weak dominance with at least one strict improvement.
fn dominates<T: Ord>(profile: &[T], target: &[T]) -> bool {
    let mut strict = false;
    for (p, t) in profile.iter().zip(target) {
        if p < t {
            return false;
        }
        if p > t {
            strict = true;
        }
    }
    strict
}

/// Visits every complete owner vector in canonical order along with its
/// utility profile, maintained incrementally, until `visit` returns true.
fn walk_profiles<T: ProfileNum>(
    agents: usize,
    items: usize,
    weights: &[Vec<T>],
    mut visit: impl FnMut(&[usize], &[T]) -> bool,
) {
    let mut owners = vec![0usize; items];
    let mut profile: Vec<T> = vec![T::zero(); agents];
    for weight in &weights[0] {
        profile[0] += weight;
    }
    loop {
        if visit(&owners, &profile) {
            return;
        }
        // Advance the odometer; item m-1 is the fastest digit.
        let mut pos = items;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            let cur = owners[pos];
            profile[cur] -= &weights[cur][pos];
            let next = if cur + 1 < agents { cur + 1 } else { 0 };
            profile[next] += &weights[next][pos];
            owners[pos] = next;
            if next != 0 {
                break;
            }
        }
    }
}

fn profile_of<T: ProfileNum>(weights: &[Vec<T>], alloc: &Allocation) -> Vec<T> {
    weights
        .iter()
        .enumerate()
        .map(|(agent, row)| {
            let mut value = T::zero();
            for item in alloc.bundle(agent).iter() {
                value += &row[item];
            }
            value
        })
        .collect()
}

/// First complete allocation, in canonical order, that makes someone
/// strictly better off and nobody worse off than `alloc`, which must be
/// complete. None means `alloc` is Pareto-optimal.
pub fn find_dominating(
    inst: &Instance,
    alloc: &Allocation,
    budget: &EnumerationBudget,
) -> Result<Option<Allocation>, FairDivError> {
    fairness::shape_check(inst, alloc)?;
    if !alloc.is_complete(inst.items()) {
        return Err(FairDivError::IncompleteAllocation);
    }
    check_budget(inst.agents(), inst.items(), true, budget)?;
    let rows = scaled_rows(inst);
    let witness = match to_i128_rows(&rows) {
        Some(small) => scan_dominating(inst, &small, alloc),
        None => scan_dominating(inst, &rows, alloc),
    };
    Ok(witness.map(|owners| owners_to_allocation(inst.agents(), &owners)))
}

fn scan_dominating<T: ProfileNum>(
    inst: &Instance,
    weights: &[Vec<T>],
    alloc: &Allocation,
) -> Option<Vec<usize>> {
    let target = profile_of(weights, alloc);
    let mut found = None;
    walk_profiles(inst.agents(), inst.items(), weights, |owners, profile| {
        if dominates(profile, &target) {
            found = Some(owners.to_vec());
            true
        } else {
            false
        }
    });
    found
}

/// Every Pareto-optimal complete allocation, in canonical order.
pub fn pareto_frontier(
    inst: &Instance,
    budget: &EnumerationBudget,
) -> Result<Vec<Allocation>, FairDivError> {
    check_budget(inst.agents(), inst.items(), true, budget)?;
    let rows = scaled_rows(inst);
    let keep = match to_i128_rows(&rows) {
        Some(small) => frontier_scan(inst, &small),
        None => frontier_scan(inst, &rows),
    };
    Ok(keep
        .into_iter()
        .map(|owners| owners_to_allocation(inst.agents(), &owners))
        .collect())
}

fn frontier_scan<T: ProfileNum>(inst: &Instance, weights: &[Vec<T>]) -> Vec<Vec<usize>> {
    let mut all: Vec<(Vec<usize>, Vec<T>)> = Vec::new();
    walk_profiles(inst.agents(), inst.items(), weights, |owners, profile| {
        all.push((owners.to_vec(), profile.to_vec()));
        false
    });
    all.iter()
        .filter(|(_, profile)| !all.iter().any(|(_, other)| dominates(other, profile)))
        .map(|(owners, _)| owners.clone())
        .collect()
}

/// What an existence search must find.
#[derive(Debug, Clone, Default)]
pub struct Requirements {
    pub properties: Vec<Property>,
    pub connected: bool,
}

/// First allocation, in canonical order, meeting every requirement, or
/// None when the whole space fails. Asking for Pareto optimality narrows
/// the search to the frontier of complete allocations; otherwise
/// `complete_only` picks the space.
pub fn exists_allocation(
    inst: &Instance,
    req: &Requirements,
    complete_only: bool,
    budget: &EnumerationBudget,
) -> Result<Option<Allocation>, FairDivError> {
    let rest: Vec<Property> = req
        .properties
        .iter()
        .copied()
        .filter(|&p| p != Property::Po)
        .collect();
    let satisfies = |alloc: &Allocation| -> Result<bool, FairDivError> {
        if req.connected && !fairness::is_connected(alloc) {
            return Ok(false);
        }
        for &p in &rest {
            if !fairness::check_property(inst, alloc, p, budget)?.holds {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if req.properties.contains(&Property::Po) {
        for alloc in pareto_frontier(inst, budget)? {
            if satisfies(&alloc)? {
                return Ok(Some(alloc));
            }
        }
        return Ok(None);
    }
    for alloc in enumerate_allocations(inst, complete_only, budget)? {
        if satisfies(&alloc)? {
            return Ok(Some(alloc));
        }
    }
    Ok(None)
}
