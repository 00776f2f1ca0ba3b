use crate::error::{Error, Result};
use crate::model::{feasible_k_partition_exists, Game, Partition, SizeBounds, Valuation};
use crate::prefs::{friends, set_value, top_set, AgentSet};

fn check_k(n: usize, k: usize, b: SizeBounds) -> Result<()> {
    if feasible_k_partition_exists(n, k, b) {
        Ok(())
    } else {
        Err(Error::Infeasible { n, k, lower: b.lower(), upper: b.upper() })
    }
}

/// With lower bound 1 an agent may vacate a singleton, and a CIS*
/// partition into exactly `k` coalitions need not exist: two agents who
/// like each other, `k = 2`, bounds `(1, 2)`. Those bounds are left to
/// [`super::cis_upper`].
fn check_lower(b: SizeBounds) -> Result<()> {
    if b.lower() < 2 {
        return Err(Error::UnsupportedBounds(format!(
            "bounds {b}: a fixed coalition count needs lower bound at least 2"
        )));
    }
    Ok(())
}

fn into_partition(n: usize, coalitions: Vec<AgentSet>) -> Partition {
    Partition::new(n, coalitions.into_iter().map(|c| c.into_iter().collect()))
        .expect("algorithm assigns every agent exactly once")
}

/// CIS* `(lower, upper)`-partition into exactly `k` coalitions for games
/// whose valuations are all nonzero.
///
/// Phase I opens `k` coalitions in turn: the lowest available agent takes
/// its `lower - 1` most valued available agents, then as many further
/// friends as the upper bound and the global surplus `n - lower * k`
/// allow. Phase II hands the remaining agents, lowest ids first, to the
/// coalitions that still have room, latest created first.
///
/// Needs `lower >= 2`; see [`Error::UnsupportedBounds`].
pub fn cis_star_nonzero<V: Valuation>(g: &Game<V>, b: SizeBounds, k: usize) -> Result<Partition> {
    if let Some((a, c)) = g.first_zero_pair() {
        return Err(Error::NonzeroViolation { a, b: c });
    }
    let n = g.n();
    check_k(n, k, b)?;
    check_lower(b)?;
    let (lo, hi) = (b.lower(), b.upper());

    let mut avail: AgentSet = (0..n).collect();
    let mut surplus = n - lo * k;
    let mut coalitions: Vec<AgentSet> = Vec::with_capacity(k);
    for _ in 0..k {
        let a = *avail.iter().next().expect("enough agents remain for every coalition");
        let mut c = top_set(g, a, &avail, lo - 1);
        c.insert(a);
        let rest: AgentSet = avail.difference(&c).copied().collect();
        let extra = top_set(g, a, &friends(g, a, &rest), (hi - lo).min(surplus));
        surplus -= extra.len();
        c.extend(extra);
        for x in &c {
            avail.remove(x);
        }
        coalitions.push(c);
    }

    while surplus > 0 {
        let i = coalitions
            .iter()
            .rposition(|c| c.len() < hi)
            .expect("a k-partition exists, so there is room left");
        let take = surplus.min(hi - coalitions[i].len());
        let moved: Vec<usize> = avail.iter().copied().take(take).collect();
        for x in moved {
            avail.remove(&x);
            coalitions[i].insert(x);
        }
        surplus -= take;
    }
    debug_assert!(avail.is_empty());
    Ok(into_partition(n, coalitions))
}

/// CIS* `(lower, upper)`-partition into exactly `k` coalitions for games
/// whose valuations are all nonnegative.
///
/// The lowest available agent picks the coalition where joining, together
/// with its best friends up to that coalition's admission budget, gives the
/// strictly highest utility; its friends come along. When nothing beats
/// utility zero it joins the first coalition with room, alone. The budget
/// of a coalition is what it may still absorb without starving the other
/// coalitions of the agents they need to reach the lower bound.
///
/// Needs `lower >= 2`; see [`Error::UnsupportedBounds`].
pub fn cis_star_nonneg<V: Valuation>(g: &Game<V>, b: SizeBounds, k: usize) -> Result<Partition> {
    if let Some((a, c)) = g.first_negative_pair() {
        return Err(Error::NegativeValuationViolation { a, b: c });
    }
    let n = g.n();
    check_k(n, k, b)?;
    check_lower(b)?;
    let (lo, hi) = (b.lower(), b.upper());

    let mut avail: AgentSet = (0..n).collect();
    let mut surplus = n - lo * k;
    let mut coalitions: Vec<AgentSet> = vec![AgentSet::new(); k];
    while let Some(&a) = avail.iter().next() {
        let fr = friends(g, a, &avail);
        let mut best = V::zero();
        let mut choice: Option<(usize, AgentSet)> = None;
        let mut fallback = None;
        for (i, c) in coalitions.iter().enumerate() {
            let deficit = lo.saturating_sub(c.len());
            let budget = (surplus + deficit).min(hi - c.len());
            if budget == 0 {
                continue;
            }
            fallback.get_or_insert(i);
            let helpers = top_set(g, a, &fr, budget - 1);
            let h = set_value(g, a, c) + set_value(g, a, &helpers);
            if h > best {
                best = h;
                choice = Some((i, helpers));
            }
        }
        let (z, helpers) = match choice {
            Some(pick) => pick,
            None => (fallback.expect("some coalition can absorb an agent"), AgentSet::new()),
        };
        let deficit = lo.saturating_sub(coalitions[z].len());
        surplus -= (1 + helpers.len()).saturating_sub(deficit);
        avail.remove(&a);
        coalitions[z].insert(a);
        for h in helpers {
            avail.remove(&h);
            coalitions[z].insert(h);
        }
    }
    Ok(into_partition(n, coalitions))
}
