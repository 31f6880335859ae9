//! Fair allocation of indivisible items that may be goods for one agent and
//! chores for another.
//!
//! The crate provides exact-arithmetic building blocks (instances, bundles,
//! allocations, utility oracles), checkers for the standard fairness notions
//! (envy-freeness, proportionality, their up-to-one-item relaxations, EFX,
//! Pareto optimality), allocation algorithms for the discrete and the
//! contiguous setting, and a brute-force enumeration oracle for small
//! instances. All utility arithmetic uses arbitrary-precision rationals;
//! nothing is ever rounded.

use thiserror::Error;

pub mod contiguous;
pub mod discrete;
pub mod fairness;
pub mod model;
pub mod oracle;
pub mod sampling;

pub use model::{
    additive_oracle, rat, ratio, AdditiveOracle, Allocation, Bundle, CappedOracle, Instance,
    Rational, UtilityOracle,
};

/// Errors shared across the crate. Checkers and algorithms validate their
/// inputs and report the first problem found.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FairDivError {
    #[error("instance needs at least one agent")]
    NoAgents,
    #[error("utility row {row} has {found} entries, expected {expected}")]
    RaggedUtilities {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("agent index {agent} out of range ({agents} agents)")]
    AgentOutOfRange { agent: usize, agents: usize },
    #[error("item index {item} out of range ({items} items)")]
    ItemOutOfRange { item: usize, items: usize },
    #[error("item {item} appears in more than one bundle")]
    OverlappingBundles { item: usize },
    #[error("allocation has {found} bundles, instance has {expected} agents")]
    AgentCountMismatch { found: usize, expected: usize },
    #[error("order must be a permutation of the agents")]
    NotAPermutation,
    #[error("exactly two agents required, instance has {0}")]
    TwoAgentsRequired(usize),
    #[error("allocation must be complete for this check")]
    IncompleteAllocation,
    #[error("{needed} allocations exceed the enumeration budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("invalid interval endpoints")]
    BadInterval,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
