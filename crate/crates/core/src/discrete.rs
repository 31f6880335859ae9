//! Picking procedures and the two-agent transfer procedure.
//!
//! Everything here is deterministic: ties on item choice go to the lower
//! item index, ties on agent choice to the lower agent index.

use num::{Signed, Zero};

use crate::fairness::{ef1_pair, PairEf1};
use crate::model::{Allocation, Instance, Rational, UtilityOracle};
use crate::FairDivError;

fn check_permutation(order: &[usize], agents: usize) -> Result<(), FairDivError> {
    if order.len() != agents {
        return Err(FairDivError::NotAPermutation);
    }
    let mut seen = vec![false; agents];
    for &a in order {
        if a >= agents || seen[a] {
            return Err(FairDivError::NotAPermutation);
        }
        seen[a] = true;
    }
    Ok(())
}

/// Largest value among `remaining`, lower index on ties. `remaining` must
/// be nonempty.
fn favorite(remaining: &[usize], value: impl Fn(usize) -> Rational) -> usize {
    *remaining
        .iter()
        .max_by(|&&a, &&b| value(a).cmp(&value(b)).then(b.cmp(&a)))
        .expect("nonempty pool")
}

/// Agents pick in the given cyclic order; every pick takes the remaining
/// item the picker values most, whether or not that value is positive.
/// Runs until no item is left.
pub fn naive_round_robin(inst: &Instance, order: &[usize]) -> Result<Allocation, FairDivError> {
    check_permutation(order, inst.agents())?;
    let mut alloc = Allocation::empty(inst.agents());
    let mut remaining: Vec<usize> = (0..inst.items()).collect();
    let mut turn = 0usize;
    while !remaining.is_empty() {
        let agent = order[turn % order.len()];
        let item = favorite(&remaining, |o| inst.utility(agent, o).clone());
        remaining.retain(|&o| o != item);
        alloc.assign(agent, item);
        turn += 1;
    }
    Ok(alloc)
}

/// Two-phase picking that is envy-free up to one item for additive
/// utilities. Items nobody strictly likes are picked first in agent order,
/// the pool padded with zero-value placeholders so every agent makes the
/// same number of picks; the remaining items are then picked in reverse
/// agent order, where an agent passes instead of taking an item she does
/// not strictly like.
pub fn double_round_robin(inst: &Instance) -> Allocation {
    double_round_robin_detail(inst).0
}

/// Also reports how many picks each agent made in the first phase,
/// placeholders included: the padding makes these counts equal.
fn double_round_robin_detail(inst: &Instance) -> (Allocation, Vec<usize>) {
    let n = inst.agents();
    let m = inst.items();
    let burdens: Vec<usize> = (0..m)
        .filter(|&o| (0..n).all(|i| !inst.utility(i, o).is_positive()))
        .collect();
    let contested: Vec<usize> = (0..m)
        .filter(|&o| (0..n).any(|i| inst.utility(i, o).is_positive()))
        .collect();

    // Placeholder indices sit above the real range, so a real zero-value
    // burden beats a placeholder on the index tie-break.
    let padding = (n - burdens.len() % n) % n;
    let mut pool: Vec<usize> = burdens;
    pool.extend(m..m + padding);
    let value = |agent: usize, item: usize| -> Rational {
        if item >= m {
            Rational::zero()
        } else {
            inst.utility(agent, item).clone()
        }
    };

    let mut alloc = Allocation::empty(n);
    let mut first_phase_picks = vec![0usize; n];
    let rounds = pool.len() / n;
    for _ in 0..rounds {
        for (agent, picks) in first_phase_picks.iter_mut().enumerate() {
            let item = favorite(&pool, |o| value(agent, o));
            pool.retain(|&o| o != item);
            *picks += 1;
            if item < m {
                alloc.assign(agent, item);
            }
        }
    }

    // Every contested item is strictly liked by someone, so each sweep
    // with a nonempty pool assigns at least one item.
    let mut pool = contested;
    while !pool.is_empty() {
        for agent in (0..n).rev() {
            if pool.is_empty() {
                break;
            }
            let item = favorite(&pool, |o| value(agent, o));
            if inst.utility(agent, item).is_positive() {
                pool.retain(|&o| o != item);
                alloc.assign(agent, item);
            }
        }
    }
    (alloc, first_phase_picks)
}

/// Directed envy relation over a fixed allocation: an arc i -> j means i
/// strictly prefers j's bundle to her own.
#[derive(Debug, Clone)]
pub struct EnvyGraph {
    agents: usize,
    arcs: Vec<Vec<bool>>,
}

impl EnvyGraph {
    pub fn from_oracle<O: UtilityOracle>(oracle: &O, alloc: &Allocation) -> EnvyGraph {
        let n = alloc.agents();
        let mut arcs = vec![vec![false; n]; n];
        for (i, row) in arcs.iter_mut().enumerate() {
            let own = oracle.evaluate(i, alloc.bundle(i));
            for (j, arc) in row.iter_mut().enumerate() {
                if i != j {
                    *arc = own < oracle.evaluate(i, alloc.bundle(j));
                }
            }
        }
        EnvyGraph { agents: n, arcs }
    }

    pub fn envies(&self, envier: usize, envied: usize) -> bool {
        self.arcs[envier][envied]
    }

    pub fn is_envied(&self, agent: usize) -> bool {
        (0..self.agents).any(|i| self.arcs[i][agent])
    }

    pub fn is_envious(&self, agent: usize) -> bool {
        self.arcs[agent].iter().any(|&b| b)
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// First cycle met by a depth-first scan that starts at the lowest
    /// vertex and visits neighbors in ascending order. The result lists
    /// each vertex once; consecutive vertices (and last to first) are
    /// envy arcs.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        fn dfs(
            g: &EnvyGraph,
            v: usize,
            state: &mut [u8],
            path: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            state[v] = 1;
            path.push(v);
            for w in 0..g.agents {
                if !g.arcs[v][w] {
                    continue;
                }
                if state[w] == 1 {
                    let start = path.iter().position(|&x| x == w).expect("on path");
                    return Some(path[start..].to_vec());
                }
                if state[w] == 0 {
                    if let Some(cycle) = dfs(g, w, state, path) {
                        return Some(cycle);
                    }
                }
            }
            path.pop();
            state[v] = 2;
            None
        }
        let mut state = vec![0u8; self.agents];
        let mut path = Vec::new();
        for start in 0..self.agents {
            if state[start] == 0 {
                if let Some(cycle) = dfs(self, start, &mut state, &mut path) {
                    return Some(cycle);
                }
            }
        }
        None
    }
}

/// Arc from each envious agent to the holder of her favorite bundle
/// (ties to the lowest index), returned as a cycle of that relation if one
/// exists. Rotating bundles along such a cycle hands every participant the
/// bundle she likes best, so she stops envying altogether; this makes the
/// rotation safe even when a participant's envy toward a bystander was
/// held within one item only by a chore in her old bundle.
pub fn top_trading_cycle<O: UtilityOracle>(
    oracle: &O,
    alloc: &Allocation,
) -> Option<Vec<usize>> {
    let n = alloc.agents();
    let graph = EnvyGraph::from_oracle(oracle, alloc);
    let favorite: Vec<Option<usize>> = (0..n)
        .map(|i| {
            (0..n).filter(|&j| graph.envies(i, j)).max_by(|&a, &b| {
                oracle
                    .evaluate(i, alloc.bundle(a))
                    .cmp(&oracle.evaluate(i, alloc.bundle(b)))
                    .then(b.cmp(&a))
            })
        })
        .collect();
    // Each vertex has at most one favorite arc, so walking the relation
    // either dead-ends at a non-envious agent or closes a cycle.
    let mut state = vec![0u8; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut v = Some(start);
        while let Some(cur) = v {
            if state[cur] == 1 {
                let pos = path.iter().position(|&x| x == cur).expect("on this walk");
                return Some(path[pos..].to_vec());
            }
            if state[cur] == 2 {
                break;
            }
            state[cur] = 1;
            path.push(cur);
            v = favorite[cur];
        }
        for &x in &path {
            state[x] = 2;
        }
    }
    None
}

/// Trades bundles until no verifiably safe trade remains: favorite-bundle
/// cycles first, since their participants end envy-free, then any envy
/// cycle whose rotation is checked to keep every pair within one item of
/// envy-free. Exits with no favorite-bundle cycle left, so at least one
/// agent envies nobody.
fn settle_safely<O: UtilityOracle>(
    oracle: &O,
    alloc: &mut Allocation,
) -> Result<(), FairDivError> {
    loop {
        if let Some(cycle) = top_trading_cycle(oracle, alloc) {
            alloc.rotate_bundles(&cycle);
            continue;
        }
        let graph = EnvyGraph::from_oracle(oracle, alloc);
        let Some(cycle) = graph.find_cycle() else {
            return Ok(());
        };
        let mut trial = alloc.clone();
        trial.rotate_bundles(&cycle);
        if !crate::fairness::is_ef1_under(oracle, &trial)?.holds {
            return Ok(());
        }
        *alloc = trial;
    }
}

/// Assigns items one at a time for any utility oracle whose preferences
/// are doubly monotonic: each agent fixes a set of goods (adding one never
/// hurts her) and chores (adding one never helps).
///
/// Items somebody counts as a good are placed first, each going to an
/// agent who does not lose by taking it and whom no other such agent
/// envies; envy cycles are then cleared by rotating bundles along the
/// cycle. In this phase any envy is witnessed by an item of the envied
/// bundle, and such witnesses survive rotations, so the graph can always
/// be made acyclic.
///
/// Items everybody counts as a chore go to a non-envious agent, who can
/// shed the new chore to justify her envy, preferring a recipient that
/// leaves the envy graph acyclic. Rotations after these assignments can
/// invalidate shed-a-chore witnesses, so only trades verified to preserve
/// envy-freeness up to one item are applied; a cycle of favorite bundles
/// is always safe and is taken first. The result is complete and
/// envy-free up to one item under the oracle.
pub fn envy_graph_allocate<O: UtilityOracle>(oracle: &O) -> Result<Allocation, FairDivError> {
    let n = oracle.agent_count();
    if n == 0 {
        return Err(FairDivError::NoAgents);
    }
    let m = oracle.item_count();
    let liked: Vec<bool> = (0..m)
        .map(|o| (0..n).any(|i| oracle.is_good(i, o)))
        .collect();
    let mut alloc = Allocation::empty(n);

    for item in (0..m).filter(|&o| liked[o]) {
        let graph = EnvyGraph::from_oracle(oracle, &alloc);
        let gainers: Vec<usize> = (0..n)
            .filter(|&i| !oracle.marginal(i, alloc.bundle(i), item).is_negative())
            .collect();
        // A source of the envy graph induced on the non-losers; the graph
        // is acyclic at this point, so one exists.
        let receiver = gainers
            .iter()
            .copied()
            .find(|&j| gainers.iter().all(|&i| i == j || !graph.envies(i, j)))
            .ok_or_else(|| FairDivError::Invariant("induced envy graph has no source".into()))?;
        alloc.assign(receiver, item);
        loop {
            let graph = EnvyGraph::from_oracle(oracle, &alloc);
            match graph.find_cycle() {
                Some(cycle) => alloc.rotate_bundles(&cycle),
                None => break,
            }
        }
    }

    for item in (0..m).filter(|&o| !liked[o]) {
        let graph = EnvyGraph::from_oracle(oracle, &alloc);
        let idle: Vec<usize> = (0..n).filter(|&i| !graph.is_envious(i)).collect();
        let keeps_acyclic = |&cand: &usize| {
            let mut trial = alloc.clone();
            trial.assign(cand, item);
            EnvyGraph::from_oracle(oracle, &trial).is_acyclic()
        };
        // settle_safely leaves at least one non-envious agent, so idle is
        // never empty.
        let receiver = idle
            .iter()
            .copied()
            .find(keeps_acyclic)
            .or_else(|| idle.first().copied())
            .ok_or_else(|| FairDivError::Invariant("envy graph has no sink".into()))?;
        alloc.assign(receiver, item);
        settle_safely(oracle, &mut alloc)?;
    }
    Ok(alloc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AwDirection {
    /// A mutually liked item moves from the winner to the loser.
    GoodToLoser,
    /// A mutually disliked item moves from the loser to the winner.
    ChoreToWinner,
}

/// One executed transfer, with the allocation right after it.
#[derive(Debug, Clone, PartialEq)]
pub struct AwStep {
    pub item: usize,
    pub direction: AwDirection,
    pub after: Allocation,
    /// Whether the loser's envy toward the winner is within one item
    /// right after this transfer.
    pub loser_ef1_after: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AwTrace {
    pub winner: usize,
    pub loser: usize,
    /// Mutually classified items in planned transfer order.
    pub ratio_order: Vec<usize>,
    /// Allocation before any transfer.
    pub initial: Allocation,
    pub initial_loser_ef1: bool,
    pub steps: Vec<AwStep>,
}

/// Two-agent transfer procedure with agent 0 in the winner role.
pub fn generalized_adjusted_winner(
    inst: &Instance,
) -> Result<(Allocation, AwTrace), FairDivError> {
    adjusted_winner_with_roles(inst, 0)
}

/// Mutually liked items start at the winner and mutually disliked ones at
/// the loser; one-sided items go to whoever minds them least and never
/// move. Mutual items then transfer toward the loser's side, ordered by
/// the loser-to-winner magnitude ratio |u_l(o)|/|u_w(o)| (largest first,
/// lower index on ties), stopping as soon as the loser's envy toward the
/// winner is within one item. The result is envy-free up to one item for
/// both agents and Pareto-optimal, as is every snapshot along the way.
pub fn adjusted_winner_with_roles(
    inst: &Instance,
    winner: usize,
) -> Result<(Allocation, AwTrace), FairDivError> {
    if inst.agents() != 2 {
        return Err(FairDivError::TwoAgentsRequired(inst.agents()));
    }
    inst.check_agent(winner)?;
    let loser = 1 - winner;

    let mut alloc = Allocation::empty(2);
    let mut mutual: Vec<usize> = Vec::new();
    for o in 0..inst.items() {
        let uw = inst.utility(winner, o);
        let ul = inst.utility(loser, o);
        if uw.is_positive() && ul.is_positive() {
            mutual.push(o);
            alloc.assign(winner, o);
        } else if uw.is_negative() && ul.is_negative() {
            mutual.push(o);
            alloc.assign(loser, o);
        } else if ul.is_negative() || (ul.is_zero() && !uw.is_negative()) {
            // A chore only for the loser, or worthless to her while the
            // winner does not mind it: the winner keeps it.
            alloc.assign(winner, o);
        } else {
            alloc.assign(loser, o);
        }
    }

    // Mutual items have nonzero utility for both, so the ratio is finite.
    mutual.sort_by(|&a, &b| {
        let ra = inst.utility(loser, a).abs() / inst.utility(winner, a).abs();
        let rb = inst.utility(loser, b).abs() / inst.utility(winner, b).abs();
        rb.cmp(&ra).then(a.cmp(&b))
    });

    let loser_settled =
        |alloc: &Allocation| ef1_pair(inst, alloc, loser, winner) != PairEf1::Violated;
    let initial = alloc.clone();
    let initial_loser_ef1 = loser_settled(&alloc);
    let mut steps = Vec::new();
    for &o in &mutual {
        if loser_settled(&alloc) {
            break;
        }
        let direction = if inst.utility(winner, o).is_positive() {
            alloc.move_item(winner, loser, o);
            AwDirection::GoodToLoser
        } else {
            alloc.move_item(loser, winner, o);
            AwDirection::ChoreToWinner
        };
        steps.push(AwStep {
            item: o,
            direction,
            after: alloc.clone(),
            loser_ef1_after: loser_settled(&alloc),
        });
    }

    let trace = AwTrace {
        winner,
        loser,
        ratio_order: mutual,
        initial,
        initial_loser_ef1,
        steps,
    };
    Ok((alloc, trace))
}

/// Agents move once each in the given order; each takes every remaining
/// item she strictly likes, and the final agent also takes whatever is
/// left, completing the allocation. Pareto-optimal whenever no agent is
/// indifferent to any item.
pub fn serial_dictatorship(inst: &Instance, order: &[usize]) -> Result<Allocation, FairDivError> {
    check_permutation(order, inst.agents())?;
    let mut alloc = Allocation::empty(inst.agents());
    let mut remaining: Vec<usize> = (0..inst.items()).collect();
    for (pos, &agent) in order.iter().enumerate() {
        let last = pos + 1 == order.len();
        remaining.retain(|&o| {
            if last || inst.utility(agent, o).is_positive() {
                alloc.assign(agent, o);
                false
            } else {
                true
            }
        });
    }
    Ok(alloc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::{is_ef1, is_ef1_under, is_pareto_optimal};
    use crate::model::{additive_oracle, synthetic_doubly_monotonic, Bundle};
    use crate::oracle::EnumerationBudget;
    use crate::sampling;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alloc(bundles: &[&[usize]]) -> Allocation {
        Allocation::new(
            bundles
                .iter()
                .map(|b| Bundle::from_items(b.iter().copied()))
                .collect(),
        )
        .unwrap()
    }

    fn one_good_three_chores() -> Instance {
        Instance::from_ints(&[&[2, -3, -3, -3], &[2, -3, -3, -3]])
    }

    #[test]
    fn naive_alternation_leaves_unbounded_envy() {
        let inst = one_good_three_chores();
        let pi = naive_round_robin(&inst, &[0, 1]).unwrap();
        assert_eq!(pi, alloc(&[&[0, 2], &[1, 3]]));
        assert!(!is_ef1(&inst, &pi).unwrap().holds);
    }

    #[test]
    fn two_phase_picking_fixes_the_same_instance() {
        let inst = one_good_three_chores();
        let pi = double_round_robin(&inst);
        assert_eq!(pi, alloc(&[&[2], &[0, 1, 3]]));
        assert!(is_ef1(&inst, &pi).unwrap().holds);
    }

    #[test]
    fn first_phase_pick_counts_are_equal() {
        let (_, picks) = double_round_robin_detail(&one_good_three_chores());
        assert_eq!(picks, vec![2, 2]);
        let inst = Instance::from_ints(&[&[-1, -2, -3], &[-3, -2, -1]]);
        let (_, picks) = double_round_robin_detail(&inst);
        assert_eq!(picks, vec![2, 2]);
    }

    #[test]
    fn burdens_go_in_agent_order_to_whoever_minds_least() {
        let inst = Instance::from_ints(&[&[-1, -2], &[-1, -2]]);
        assert_eq!(double_round_robin(&inst), alloc(&[&[0], &[1]]));
    }

    #[test]
    fn no_items_means_empty_bundles() {
        let inst = Instance::new(vec![vec![], vec![]]).unwrap();
        assert_eq!(double_round_robin(&inst), alloc(&[&[], &[]]));
    }

    #[test]
    fn second_phase_skips_an_indifferent_agent() {
        // Item 0 is contested (agent 0 likes it) and the reverse order
        // reaches agent 1 first, who passes on her zero.
        let inst = Instance::from_ints(&[&[2], &[0]]);
        assert_eq!(double_round_robin(&inst), alloc(&[&[0], &[]]));
    }

    #[test]
    fn zero_value_burden_beats_the_placeholder_tie() {
        // One real burden worth 0 to everyone, one placeholder: agent 0
        // must pick the real item, not the higher-index placeholder.
        let inst = Instance::from_ints(&[&[0], &[0]]);
        assert_eq!(double_round_robin(&inst), alloc(&[&[0], &[]]));
    }

    #[test]
    fn graph_records_strict_preference_only() {
        let inst = Instance::from_ints(&[&[1, 1], &[1, 1]]);
        let pi = alloc(&[&[0], &[1]]);
        let graph = EnvyGraph::from_oracle(&additive_oracle(&inst), &pi);
        assert!(!graph.envies(0, 1));
        assert!(!graph.envies(1, 0));
        assert!(graph.is_acyclic());
    }

    #[test]
    fn mutual_envy_is_a_cycle_and_rotating_fixes_it() {
        let inst = Instance::from_ints(&[&[0, 5], &[5, 0]]);
        let mut pi = alloc(&[&[0], &[1]]);
        let oracle = additive_oracle(&inst);
        let cycle = EnvyGraph::from_oracle(&oracle, &pi).find_cycle().unwrap();
        assert_eq!(cycle, vec![0, 1]);
        let before: Vec<_> = (0..2).map(|i| inst.bundle_utility(i, pi.bundle(i))).collect();
        pi.rotate_bundles(&cycle);
        for (i, previous) in before.iter().enumerate() {
            assert!(&inst.bundle_utility(i, pi.bundle(i)) > previous);
        }
        assert!(EnvyGraph::from_oracle(&oracle, &pi).is_acyclic());
    }

    #[test]
    fn shared_good_goes_to_the_lowest_unenvied_agent() {
        let inst = Instance::from_ints(&[&[1], &[1]]);
        let pi = envy_graph_allocate(&additive_oracle(&inst)).unwrap();
        assert_eq!(pi, alloc(&[&[0], &[]]));
    }

    #[test]
    fn unanimous_chore_goes_to_an_unenvious_agent() {
        // After item 0 goes to agent 0, agent 0 envies agent 1, so the
        // chore lands on agent 1, who envies nobody.
        let inst = Instance::from_ints(&[&[-1, -1], &[-1, -1]]);
        let pi = envy_graph_allocate(&additive_oracle(&inst)).unwrap();
        assert_eq!(pi, alloc(&[&[0], &[1]]));
    }

    #[test]
    fn oracle_driven_runs_end_envy_bounded_and_acyclic() {
        for seed in 0..60 {
            let oracle = synthetic_doubly_monotonic(1 + (seed as usize % 4), 7, seed);
            let pi = envy_graph_allocate(&oracle).unwrap();
            assert!(pi.is_complete(oracle.item_count()));
            assert!(is_ef1_under(&oracle, &pi).unwrap().holds, "seed {seed}");
            assert!(EnvyGraph::from_oracle(&oracle, &pi).is_acyclic());
        }
    }

    fn showcase() -> Instance {
        Instance::from_ints(&[&[1, -1, 2, 1, -2, -4, -6], &[4, -3, 6, 2, -2, -2, -2]])
    }

    #[test]
    fn transfer_walkthrough_on_the_seven_item_showcase() {
        let inst = showcase();
        let (pi, trace) = generalized_adjusted_winner(&inst).unwrap();
        assert_eq!(pi, alloc(&[&[1, 3], &[0, 2, 4, 5, 6]]));
        assert_eq!(trace.winner, 0);
        assert_eq!(trace.loser, 1);
        assert_eq!(trace.ratio_order, vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(trace.initial, alloc(&[&[0, 2, 3], &[1, 4, 5, 6]]));
        assert!(!trace.initial_loser_ef1);
        let moves: Vec<(usize, AwDirection)> =
            trace.steps.iter().map(|s| (s.item, s.direction)).collect();
        assert_eq!(
            moves,
            vec![
                (0, AwDirection::GoodToLoser),
                (1, AwDirection::ChoreToWinner),
                (2, AwDirection::GoodToLoser),
            ]
        );
        assert_eq!(
            trace.steps.iter().map(|s| s.loser_ef1_after).collect::<Vec<_>>(),
            vec![false, false, true]
        );
        assert_eq!(trace.steps.last().unwrap().after, pi);
        assert!(is_ef1(&inst, &pi).unwrap().holds);
    }

    #[test]
    fn settled_loser_means_no_transfer() {
        // The loser's envy is within one item from the start: removing
        // the single good settles it.
        let inst = Instance::from_ints(&[&[5], &[4]]);
        let (pi, trace) = generalized_adjusted_winner(&inst).unwrap();
        assert_eq!(pi, alloc(&[&[0], &[]]));
        assert!(trace.steps.is_empty());
        assert!(trace.initial_loser_ef1);
    }

    #[test]
    fn one_sided_items_never_move() {
        let inst = Instance::from_ints(&[&[3, -2], &[-1, 4]]);
        let (pi, trace) = generalized_adjusted_winner(&inst).unwrap();
        assert_eq!(pi, alloc(&[&[0], &[1]]));
        assert!(trace.ratio_order.is_empty());
        assert!(is_ef1(&inst, &pi).unwrap().holds);
        assert!(
            is_pareto_optimal(&inst, &pi, &EnumerationBudget::default())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn roles_can_be_swapped() {
        let inst = Instance::from_ints(&[&[5], &[4]]);
        let (pi, trace) = adjusted_winner_with_roles(&inst, 1).unwrap();
        assert_eq!(trace.winner, 1);
        assert_eq!(pi, alloc(&[&[], &[0]]));
    }

    #[test]
    fn two_agents_required() {
        let inst = Instance::from_ints(&[&[1], &[1], &[1]]);
        assert_eq!(
            generalized_adjusted_winner(&inst).unwrap_err(),
            FairDivError::TwoAgentsRequired(3)
        );
    }

    #[test]
    fn dictators_take_their_likes_and_the_last_sweeps_up() {
        let inst = Instance::from_ints(&[&[1, -1, 2], &[3, 1, -2]]);
        assert_eq!(
            serial_dictatorship(&inst, &[0, 1]).unwrap(),
            alloc(&[&[0, 2], &[1]])
        );
        assert_eq!(
            serial_dictatorship(&inst, &[1, 0]).unwrap(),
            alloc(&[&[2], &[0, 1]])
        );
    }

    #[test]
    fn indifference_can_cost_optimality() {
        // Agent 0 skips her zero, so the chore falls to the last agent;
        // handing it to agent 0 instead would hurt nobody and help
        // agent 1. Dictatorship is only optimal without indifference.
        let inst = Instance::from_ints(&[&[0], &[-5]]);
        let pi = serial_dictatorship(&inst, &[0, 1]).unwrap();
        assert_eq!(pi, alloc(&[&[], &[0]]));
        assert!(
            !is_pareto_optimal(&inst, &pi, &EnumerationBudget::default())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn order_must_be_a_permutation() {
        let inst = Instance::from_ints(&[&[1], &[1]]);
        for bad in [&[0, 0][..], &[0][..], &[0, 2][..]] {
            assert_eq!(
                serial_dictatorship(&inst, bad).unwrap_err(),
                FairDivError::NotAPermutation
            );
            assert_eq!(
                naive_round_robin(&inst, bad).unwrap_err(),
                FairDivError::NotAPermutation
            );
        }
    }

    #[test]
    fn nonzero_dictatorship_is_optimal_on_small_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rand::Rng::gen_range(&mut rng, 1..=3);
            let m = rand::Rng::gen_range(&mut rng, 0..=5);
            let inst = sampling::sample_nonzero_instance(&mut rng, n, m, 10);
            let order: Vec<usize> = (0..n).collect();
            let pi = serial_dictatorship(&inst, &order).unwrap();
            assert!(
                is_pareto_optimal(&inst, &pi, &EnumerationBudget::default())
                    .unwrap()
                    .holds
            );
        }
    }
}
