//! Instance generators for tests and the command line.
//!
//! Everything is driven by a caller-supplied RNG, so a fixed seed fixes
//! the instance.

use rand::Rng;

use crate::model::{rat, Allocation, Instance, Rational};

/// Two agents with identical tastes: one good worth 2 and three chores
/// worth -3 each. The smallest mixed instance where naive alternation
/// leaves envy beyond one item while two-phase picking does not.
pub fn one_good_three_chores() -> Instance {
    Instance::from_ints(&[&[2, -3, -3, -3], &[2, -3, -3, -3]])
}

/// Two agents and seven items of mixed signs: the walkthrough instance
/// for the transfer procedure, which moves three items before the loser's
/// envy is within one item.
pub fn adjusted_winner_showcase() -> Instance {
    Instance::from_ints(&[&[1, -1, 2, 1, -2, -4, -6], &[4, -3, 6, 2, -2, -2, -2]])
}

/// How integer utilities are drawn; magnitudes are uniform on 1..=10.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    /// Each entry is a good with probability `p_good`, otherwise a chore.
    Mixed { p_good: f64 },
    AllGoods,
    AllChores,
    /// One row drawn as in `Mixed`, copied to every agent.
    Identical { p_good: f64 },
}

pub fn sample_instance<R: Rng>(
    rng: &mut R,
    dist: Distribution,
    agents: usize,
    items: usize,
) -> Instance {
    fn draw<R: Rng>(rng: &mut R, p_good: f64) -> Rational {
        let magnitude: i64 = rng.gen_range(1..=10);
        rat(if rng.gen_bool(p_good) {
            magnitude
        } else {
            -magnitude
        })
    }
    fn row<R: Rng>(rng: &mut R, p_good: f64, items: usize) -> Vec<Rational> {
        (0..items).map(|_| draw(rng, p_good)).collect()
    }
    let utilities: Vec<Vec<Rational>> = match dist {
        Distribution::Mixed { p_good } => {
            (0..agents).map(|_| row(rng, p_good, items)).collect()
        }
        Distribution::AllGoods => (0..agents).map(|_| row(rng, 1.0, items)).collect(),
        Distribution::AllChores => (0..agents).map(|_| row(rng, 0.0, items)).collect(),
        Distribution::Identical { p_good } => vec![row(rng, p_good, items); agents],
    };
    Instance::new(utilities).expect("sampled shape is valid")
}

/// Uniform integer utilities over [lo, hi], zeros included when the range
/// covers them.
pub fn sample_int_instance<R: Rng>(
    rng: &mut R,
    agents: usize,
    items: usize,
    lo: i64,
    hi: i64,
) -> Instance {
    let utilities = (0..agents)
        .map(|_| (0..items).map(|_| rat(rng.gen_range(lo..=hi))).collect())
        .collect();
    Instance::new(utilities).expect("sampled shape is valid")
}

/// Uniform nonzero integers with magnitude up to `magnitude`, sign fair.
pub fn sample_nonzero_instance<R: Rng>(
    rng: &mut R,
    agents: usize,
    items: usize,
    magnitude: i64,
) -> Instance {
    let utilities = (0..agents)
        .map(|_| {
            (0..items)
                .map(|_| {
                    let v: i64 = rng.gen_range(1..=magnitude);
                    rat(if rng.gen_bool(0.5) { v } else { -v })
                })
                .collect()
        })
        .collect();
    Instance::new(utilities).expect("sampled shape is valid")
}

/// Complete allocation with each item's owner drawn uniformly.
pub fn sample_allocation<R: Rng>(rng: &mut R, agents: usize, items: usize) -> Allocation {
    let mut alloc = Allocation::empty(agents);
    for item in 0..items {
        alloc.assign(rng.gen_range(0..agents), item);
    }
    alloc
}
