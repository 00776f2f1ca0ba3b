use crate::error::{Error, Result};
use crate::model::{Game, Partition, Valuation};
use crate::prefs::{enemies, friends, set_value, top_set, AgentSet};

/// What a selected agent did in [`cis_upper`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeaderAction {
    /// Opened a new coalition with this creation index.
    Created(usize),
    /// Joined the existing coalition with this creation index.
    Joined(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeaderStep {
    pub agent: usize,
    pub action: LeaderAction,
    /// Friends pulled along, ascending.
    pub helpers: Vec<usize>,
}

/// Log of the decisions taken by [`cis_upper`], in order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LeaderTrace {
    pub steps: Vec<LeaderStep>,
}

impl LeaderTrace {
    /// Agents that became decision makers, in selection order.
    pub fn decision_makers(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps.iter().map(|s| s.agent)
    }
}

fn into_partition(n: usize, coalitions: Vec<AgentSet>) -> Partition {
    Partition::new(n, coalitions.into_iter().map(|c| c.into_iter().collect()))
        .expect("algorithm assigns every agent exactly once")
}

/// CIS `(1, mu)`-partition.
///
/// The lowest available agent either opens a coalition with its best
/// `mu - 1` available friends, or joins an earlier coalition whose decision
/// makers do not dislike it, bringing along the best friends that none of
/// those decision makers dislikes. It takes whichever option is strictly
/// best, preferring a new coalition and then lower indices on ties, and
/// becomes a decision maker of the chosen coalition. Helpers are liked by a
/// decision maker and are therefore never allowed to leave.
///
/// With `mu = n` this yields a CIS partition without size constraints.
pub fn cis_upper<V: Valuation>(g: &Game<V>, mu: usize) -> Result<(Partition, LeaderTrace)> {
    if mu == 0 {
        return Err(Error::BadParameter("upper bound must be at least 1".into()));
    }
    let n = g.n();
    let mut avail: AgentSet = (0..n).collect();
    let mut coalitions: Vec<AgentSet> = Vec::new();
    let mut deciders: Vec<Vec<usize>> = Vec::new();
    let mut trace = LeaderTrace::default();

    while let Some(&a) = avail.iter().next() {
        let fr = friends(g, a, &avail);
        let own = top_set(g, a, &fr, mu - 1);
        let mut best = set_value(g, a, &own);
        let mut choice: Option<(usize, AgentSet)> = None;

        for (k, s) in coalitions.iter().enumerate() {
            if s.len() >= mu {
                continue;
            }
            let vetoed = enemies(g, &deciders[k], &avail);
            // a decision maker of S_k would refuse the newcomer itself
            if vetoed.contains(&a) {
                continue;
            }
            let approved: AgentSet = fr.difference(&vetoed).copied().collect();
            let helpers = top_set(g, a, &approved, mu - s.len() - 1);
            let h = set_value(g, a, s) + set_value(g, a, &helpers);
            if best < h {
                best = h;
                choice = Some((k, helpers));
            }
        }

        let (action, helpers) = match choice {
            None => {
                let mut s = own.clone();
                s.insert(a);
                coalitions.push(s);
                deciders.push(vec![a]);
                (LeaderAction::Created(coalitions.len() - 1), own)
            }
            Some((k, helpers)) => {
                coalitions[k].insert(a);
                coalitions[k].extend(helpers.iter().copied());
                deciders[k].push(a);
                (LeaderAction::Joined(k), helpers)
            }
        };
        avail.remove(&a);
        for h in &helpers {
            avail.remove(h);
        }
        trace.steps.push(LeaderStep { agent: a, action, helpers: helpers.into_iter().collect() });
    }
    Ok((into_partition(n, coalitions), trace))
}

/// The earlier leader-based CIS algorithm for games without size bounds.
///
/// The lowest available agent compares opening a coalition with all its
/// available friends against joining any existing coalition none of whose
/// members dislikes it, judged by the joined coalition alone. After joining,
/// the friends that nobody in the coalition dislikes follow as latecomers.
/// The flaw is that the join decision ignores the value of those
/// latecomers, so the result need not be CIS.
pub fn aziz_reference<V: Valuation>(g: &Game<V>) -> Partition {
    let n = g.n();
    let mut avail: AgentSet = (0..n).collect();
    let mut coalitions: Vec<AgentSet> = Vec::new();

    while let Some(&a) = avail.iter().next() {
        let fr = friends(g, a, &avail);
        let mut best = set_value(g, a, &fr);
        let mut choice = None;
        for (k, s) in coalitions.iter().enumerate() {
            if s.iter().any(|&b| g.value(b, a).is_negative()) {
                continue;
            }
            let h = set_value(g, a, s);
            if best < h {
                best = h;
                choice = Some(k);
            }
        }
        avail.remove(&a);
        match choice {
            None => {
                let mut s = fr;
                s.insert(a);
                for b in &s {
                    avail.remove(b);
                }
                coalitions.push(s);
            }
            Some(k) => {
                coalitions[k].insert(a);
                let members: Vec<usize> = coalitions[k].iter().copied().collect();
                let blocked = enemies(g, &members, &avail);
                let late: Vec<usize> = fr.difference(&blocked).copied().collect();
                for b in late {
                    avail.remove(&b);
                    coalitions[k].insert(b);
                }
            }
        }
    }
    into_partition(n, coalitions)
}

/// CNS `(1, 2)`-partition.
///
/// Agents are scanned by id; an unmatched agent with an unmatched friend is
/// paired with its most valued unmatched agent (lowest id on ties).
/// Everyone left over stays alone.
pub fn cns_pairs<V: Valuation>(g: &Game<V>) -> Partition {
    let n = g.n();
    let mut free = vec![true; n];
    let mut coalitions = Vec::new();
    for a in 0..n {
        if !free[a] {
            continue;
        }
        let mut best: Option<usize> = None;
        for b in (0..n).filter(|&b| b != a && free[b]) {
            if best.is_none_or(|c| g.value(a, b) > g.value(a, c)) {
                best = Some(b);
            }
        }
        if let Some(b) = best.filter(|&b| g.value(a, b).is_positive()) {
            free[a] = false;
            free[b] = false;
            coalitions.push(vec![a, b]);
        }
    }
    coalitions.extend((0..n).filter(|&a| free[a]).map(|a| vec![a]));
    Partition::new(n, coalitions).expect("pairs and singletons cover every agent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{make_instance, InstanceFamily};
    use crate::model::SizeBounds;
    use crate::stability::{verify, StabilityConcept};

    fn aziz() -> Game<i64> {
        make_instance(&InstanceFamily::AzizFailure).unwrap()
    }

    fn part(n: usize, cs: &[&[usize]]) -> Partition {
        Partition::new(n, cs.iter().map(|c| c.to_vec())).unwrap()
    }

    #[test]
    fn cis_upper_on_the_four_agent_game() {
        let (p, trace) = cis_upper(&aziz(), 4).unwrap();
        assert_eq!(p, part(4, &[&[0], &[1, 2, 3]]));
        assert_eq!(
            trace.steps.iter().map(|s| s.action).collect::<Vec<_>>(),
            vec![LeaderAction::Created(0), LeaderAction::Created(1), LeaderAction::Joined(1)]
        );
        assert_eq!(trace.steps[2].helpers, vec![3]);
        let b = SizeBounds::upper_only(4).unwrap();
        assert!(verify(&aziz(), &p, b, StabilityConcept::CIS).unwrap().stable);
    }

    #[test]
    fn cis_upper_trivial_cases() {
        let zero = Game::<i64>::zero(5, true);
        assert_eq!(cis_upper(&zero, 3).unwrap().0, Partition::singletons(5));
        let pair = Game::<i64>::from_entries(2, true, [(0, 1, 1)]).unwrap();
        assert_eq!(cis_upper(&pair, 2).unwrap().0, Partition::grand(2));
        assert!(cis_upper(&pair, 0).is_err());
    }

    #[test]
    fn reference_algorithm_reproduces_its_failure() {
        let p = aziz_reference(&aziz());
        assert_eq!(p, part(4, &[&[0, 2], &[1, 3]]));
        assert_eq!(aziz_reference(&Game::<i64>::zero(3, false)), Partition::singletons(3));
    }

    #[test]
    fn cns_pairs_examples() {
        assert_eq!(cns_pairs(&Game::<i64>::zero(4, false)), Partition::singletons(4));
        let g = Game::<i64>::from_entries(3, false, [(0, 1, 5), (1, 0, -1)]).unwrap();
        assert_eq!(cns_pairs(&g), part(3, &[&[0, 1], &[2]]));
        let p = cns_pairs(&aziz());
        assert_eq!(p, part(4, &[&[0, 2], &[1, 3]]));
        let b = SizeBounds::upper_only(2).unwrap();
        assert!(verify(&aziz(), &p, b, StabilityConcept::CNS).unwrap().stable);
    }
}
