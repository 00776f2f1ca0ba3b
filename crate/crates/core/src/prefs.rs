//! Utilities, social welfare, and the agent-set selectors used by the
//! algorithms.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{Game, Partition, Valuation};

/// A set of agent ids.
pub type AgentSet = BTreeSet<usize>;

/// Sign selector for [`friends_enemies`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    /// `v > 0`
    Positive,
    /// `v < 0`
    Negative,
}

/// Utility of `a` for coalition `members`, which must contain `a`.
pub fn utility<V: Valuation>(g: &Game<V>, a: usize, members: &[usize]) -> Result<V> {
    if !members.contains(&a) {
        return Err(Error::NotAMember { agent: a });
    }
    Ok(g.value_sum(a, members))
}

/// Utility of `a` in its coalition under `p`.
pub fn partition_utility<V: Valuation>(g: &Game<V>, p: &Partition, a: usize) -> V {
    g.value_sum(a, p.coalition_of(a))
}

/// Sum of all agents' utilities.
pub fn social_welfare<V: Valuation>(g: &Game<V>, p: &Partition) -> V {
    p.coalitions()
        .iter()
        .flat_map(|c| c.iter().map(move |&a| g.value_sum(a, c)))
        .sum()
}

/// The `k` agents of `pool \ {a}` that `a` values most, ties to the lowest id.
/// Returns all of `pool \ {a}` if it has at most `k` agents.
pub fn top_set<V: Valuation>(g: &Game<V>, a: usize, pool: &AgentSet, k: usize) -> AgentSet {
    let mut cands: Vec<usize> = pool.iter().copied().filter(|&b| b != a).collect();
    if k < cands.len() {
        cands.sort_by(|&x, &y| g.value(a, y).cmp(&g.value(a, x)).then(x.cmp(&y)));
        cands.truncate(k);
    }
    cands.into_iter().collect()
}

/// Agents of `pool` that some agent of `who` values with the given sign.
///
/// Pass a one-element slice for a single agent. The sign test is applied
/// to individual valuations, never to sums.
pub fn friends_enemies<V: Valuation>(
    g: &Game<V>,
    who: &[usize],
    pool: &AgentSet,
    sign: Sign,
) -> AgentSet {
    pool.iter()
        .copied()
        .filter(|&b| {
            who.iter().any(|&a| {
                a != b && {
                    let w = g.value(a, b);
                    match sign {
                        Sign::Positive => w.is_positive(),
                        Sign::Negative => w.is_negative(),
                    }
                }
            })
        })
        .collect()
}

/// `Fr(a, pool)`.
pub fn friends<V: Valuation>(g: &Game<V>, a: usize, pool: &AgentSet) -> AgentSet {
    friends_enemies(g, &[a], pool, Sign::Positive)
}

/// `En(who, pool)`.
pub fn enemies<V: Valuation>(g: &Game<V>, who: &[usize], pool: &AgentSet) -> AgentSet {
    friends_enemies(g, who, pool, Sign::Negative)
}

/// Sum of `a`'s valuations for the members of `set` (excluding `a`).
pub fn set_value<V: Valuation>(g: &Game<V>, a: usize, set: &AgentSet) -> V {
    set.iter().filter(|&&b| b != a).fold(V::zero(), |acc, &b| acc + g.value(a, b))
}
