//! Instances, bundles, allocations and utility oracles.
//!
//! Everything is 0-indexed internally. An instance is an n x m matrix of
//! exact rational utilities; positive entries are goods for that agent,
//! negative entries are chores, and zero entries count as (weakly desirable)
//! goods. Non-additive preferences go through the [`UtilityOracle`] trait,
//! whose implementations must value the empty bundle at zero.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::FairDivError;

pub type Rational = BigRational;

/// Integer as a rational. Convenience for fixtures and tests.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Fraction p/q as a rational, reduced. Panics if q is zero.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// A set of item indices. Kept sorted so iteration order is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bundle(BTreeSet<usize>);

impl Bundle {
    pub fn new() -> Self {
        Bundle(BTreeSet::new())
    }

    pub fn from_items<I: IntoIterator<Item = usize>>(items: I) -> Self {
        Bundle(items.into_iter().collect())
    }

    pub fn insert(&mut self, item: usize) -> bool {
        self.0.insert(item)
    }

    pub fn remove(&mut self, item: usize) -> bool {
        self.0.remove(&item)
    }

    pub fn contains(&self, item: usize) -> bool {
        self.0.contains(&item)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ascending item indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Empty bundles and singletons are contiguous; otherwise the indices
    /// must form a run without gaps.
    pub fn is_contiguous(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&lo), Some(&hi)) => hi - lo + 1 == self.0.len(),
            _ => true,
        }
    }
}

impl FromIterator<usize> for Bundle {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Bundle(iter.into_iter().collect())
    }
}

/// One bundle per agent, pairwise disjoint. Completeness (every item
/// assigned) is a queryable property, not an invariant; algorithms state
/// whether their output is complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    bundles: Vec<Bundle>,
}

impl Allocation {
    pub fn empty(agents: usize) -> Self {
        Allocation {
            bundles: vec![Bundle::new(); agents],
        }
    }

    /// Validates disjointness.
    pub fn new(bundles: Vec<Bundle>) -> Result<Self, FairDivError> {
        let mut seen = BTreeSet::new();
        for bundle in &bundles {
            for item in bundle.iter() {
                if !seen.insert(item) {
                    return Err(FairDivError::OverlappingBundles { item });
                }
            }
        }
        Ok(Allocation { bundles })
    }

    pub fn agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: usize) -> &Bundle {
        &self.bundles[agent]
    }

    pub fn bundles(&self) -> &[Bundle] {
        &self.bundles
    }

    pub fn owner_of(&self, item: usize) -> Option<usize> {
        self.bundles.iter().position(|b| b.contains(item))
    }

    /// Gives `item` to `agent`. Panics if some bundle already holds the
    /// item; callers are the algorithms, which own that invariant.
    pub fn assign(&mut self, agent: usize, item: usize) {
        assert!(
            self.owner_of(item).is_none(),
            "item {item} is already assigned"
        );
        self.bundles[agent].insert(item);
    }

    /// Moves `item` between two agents. Panics if `from` does not hold it.
    pub fn move_item(&mut self, from: usize, to: usize, item: usize) {
        assert!(self.bundles[from].remove(item), "item {item} not held");
        self.bundles[to].insert(item);
    }

    /// Each listed agent takes the bundle of the next one in the cycle; the
    /// last takes the first's. A cycle of length < 2 is a no-op.
    pub fn rotate_bundles(&mut self, cycle: &[usize]) {
        if cycle.len() < 2 {
            return;
        }
        let first = std::mem::take(&mut self.bundles[cycle[0]]);
        for w in 0..cycle.len() - 1 {
            self.bundles[cycle[w]] = std::mem::take(&mut self.bundles[cycle[w + 1]]);
        }
        self.bundles[*cycle.last().unwrap()] = first;
    }

    pub fn assigned_count(&self) -> usize {
        self.bundles.iter().map(Bundle::len).sum()
    }

    /// True when every item in 0..items is assigned to somebody.
    pub fn is_complete(&self, items: usize) -> bool {
        let assigned: BTreeSet<usize> = self.bundles.iter().flat_map(Bundle::iter).collect();
        assigned.len() == items && assigned.iter().all(|&o| o < items)
    }
}

/// An n x m matrix of additive utilities, n >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    utilities: Vec<Vec<Rational>>,
    items: usize,
}

impl Instance {
    pub fn new(utilities: Vec<Vec<Rational>>) -> Result<Self, FairDivError> {
        let Some(first) = utilities.first() else {
            return Err(FairDivError::NoAgents);
        };
        let items = first.len();
        for (row, r) in utilities.iter().enumerate() {
            if r.len() != items {
                return Err(FairDivError::RaggedUtilities {
                    row,
                    found: r.len(),
                    expected: items,
                });
            }
        }
        Ok(Instance { utilities, items })
    }

    /// Fixture helper. Panics on ragged or empty input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let utilities = rows
            .iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect();
        Instance::new(utilities).expect("well-formed fixture")
    }

    /// All rows equal to the given agent's row. Used for risk baselines that
    /// simulate a world of identical clones.
    pub fn identical_clone(&self, agent: usize) -> Result<Self, FairDivError> {
        self.check_agent(agent)?;
        let row = self.utilities[agent].clone();
        Ok(Instance {
            utilities: vec![row; self.agents()],
            items: self.items,
        })
    }

    pub fn agents(&self) -> usize {
        self.utilities.len()
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn check_agent(&self, agent: usize) -> Result<(), FairDivError> {
        if agent >= self.agents() {
            return Err(FairDivError::AgentOutOfRange {
                agent,
                agents: self.agents(),
            });
        }
        Ok(())
    }

    pub fn utility(&self, agent: usize, item: usize) -> &Rational {
        &self.utilities[agent][item]
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.utilities[agent]
    }

    pub fn bundle_utility(&self, agent: usize, bundle: &Bundle) -> Rational {
        let mut sum = Rational::zero();
        for item in bundle.iter() {
            sum += &self.utilities[agent][item];
        }
        sum
    }

    /// u_i(O), the agent's value for the whole item set.
    pub fn total_utility(&self, agent: usize) -> Rational {
        self.utilities[agent].iter().sum()
    }

    /// u_i(O) / n.
    pub fn proportional_share(&self, agent: usize) -> Rational {
        self.total_utility(agent) / rat(self.agents() as i64)
    }
}

/// Preferences over bundles. `is_good` exposes the agent's partition of the
/// items into goods and chores; `evaluate` must be doubly monotonic with
/// respect to it (adding a good never hurts, adding a chore never helps) for
/// the algorithms that require it, and must value the empty bundle at zero.
pub trait UtilityOracle {
    fn agent_count(&self) -> usize;
    fn item_count(&self) -> usize;
    fn is_good(&self, agent: usize, item: usize) -> bool;
    fn evaluate(&self, agent: usize, bundle: &Bundle) -> Rational;

    /// Marginal utility of adding `item` to `bundle`, u(X + o) - u(X).
    /// `bundle` must not already contain the item.
    fn marginal(&self, agent: usize, bundle: &Bundle, item: usize) -> Rational {
        debug_assert!(!bundle.contains(item));
        let mut with = bundle.clone();
        with.insert(item);
        self.evaluate(agent, &with) - self.evaluate(agent, bundle)
    }
}

/// Additive view of an [`Instance`]. Items with utility zero count as goods.
#[derive(Debug, Clone, Copy)]
pub struct AdditiveOracle<'a> {
    inst: &'a Instance,
}

pub fn additive_oracle(inst: &Instance) -> AdditiveOracle<'_> {
    AdditiveOracle { inst }
}

impl UtilityOracle for AdditiveOracle<'_> {
    fn agent_count(&self) -> usize {
        self.inst.agents()
    }

    fn item_count(&self) -> usize {
        self.inst.items()
    }

    fn is_good(&self, agent: usize, item: usize) -> bool {
        !self.inst.utility(agent, item).is_negative()
    }

    fn evaluate(&self, agent: usize, bundle: &Bundle) -> Rational {
        self.inst.bundle_utility(agent, bundle)
    }

    fn marginal(&self, agent: usize, bundle: &Bundle, item: usize) -> Rational {
        debug_assert!(!bundle.contains(item));
        self.inst.utility(agent, item).clone()
    }
}

use num::Signed;

/// Doubly monotonic but non-additive preferences: the goods side of a bundle
/// is worth the sum of per-item weights capped at a per-agent budget, the
/// chores side subtracts its weights in full.
///
/// u_i(X) = min(cap_i, sum of weights over X's goods) - sum over X's chores.
///
/// Weights are strictly positive and caps are positive (or absent, which
/// reduces to additive preferences with signed weights).
#[derive(Debug, Clone)]
pub struct CappedOracle {
    good: Vec<Vec<bool>>,
    weights: Vec<Vec<Rational>>,
    caps: Vec<Option<Rational>>,
}

impl CappedOracle {
    pub fn new(
        good: Vec<Vec<bool>>,
        weights: Vec<Vec<Rational>>,
        caps: Vec<Option<Rational>>,
    ) -> Result<Self, FairDivError> {
        if good.is_empty() {
            return Err(FairDivError::NoAgents);
        }
        let m = good[0].len();
        if good.len() != weights.len() || good.len() != caps.len() {
            return Err(FairDivError::AgentCountMismatch {
                found: weights.len(),
                expected: good.len(),
            });
        }
        for (row, (g, w)) in good.iter().zip(&weights).enumerate() {
            if g.len() != m || w.len() != m {
                return Err(FairDivError::RaggedUtilities {
                    row,
                    found: w.len(),
                    expected: m,
                });
            }
            if w.iter().any(|x| !x.is_positive()) {
                return Err(FairDivError::Invariant(
                    "capped oracle weights must be positive".into(),
                ));
            }
        }
        if caps.iter().flatten().any(|c| !c.is_positive()) {
            return Err(FairDivError::Invariant(
                "capped oracle caps must be positive".into(),
            ));
        }
        Ok(CappedOracle {
            good,
            weights,
            caps,
        })
    }
}

impl UtilityOracle for CappedOracle {
    fn agent_count(&self) -> usize {
        self.good.len()
    }

    fn item_count(&self) -> usize {
        self.good[0].len()
    }

    fn is_good(&self, agent: usize, item: usize) -> bool {
        self.good[agent][item]
    }

    fn evaluate(&self, agent: usize, bundle: &Bundle) -> Rational {
        let mut gain = Rational::zero();
        let mut pain = Rational::zero();
        for item in bundle.iter() {
            if self.good[agent][item] {
                gain += &self.weights[agent][item];
            } else {
                pain += &self.weights[agent][item];
            }
        }
        if let Some(cap) = &self.caps[agent] {
            if gain > *cap {
                gain = cap.clone();
            }
        }
        gain - pain
    }
}

/// Seeded random doubly monotonic oracle: each item is independently a good
/// or a chore per agent, weights are integers in 1..=10, and the goods cap is
/// drawn so that it sometimes binds. Sampling order per agent is fixed
/// (signs, then weights, then cap) so a seed pins the oracle exactly.
pub fn synthetic_doubly_monotonic(agents: usize, items: usize, seed: u64) -> CappedOracle {
    assert!(agents > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut good = Vec::with_capacity(agents);
    let mut weights = Vec::with_capacity(agents);
    let mut caps = Vec::with_capacity(agents);
    for _ in 0..agents {
        let signs: Vec<bool> = (0..items).map(|_| rng.gen_bool(0.5)).collect();
        let w: Vec<i64> = (0..items).map(|_| rng.gen_range(1..=10)).collect();
        let total_good: i64 = signs.iter().zip(&w).filter(|(g, _)| **g).map(|(_, x)| x).sum();
        let cap = rat(rng.gen_range(1..=total_good.max(1) + 1));
        good.push(signs);
        weights.push(w.into_iter().map(rat).collect());
        caps.push(Some(cap));
    }
    CappedOracle::new(good, weights, caps).expect("sampled oracle is well formed")
}
