//! Exhaustive search over size-bounded partitions.
//!
//! Partitions are generated in canonical order: each coalition is led by
//! its smallest member, coalitions are ordered by leader, and the choices
//! for one leader run through the subsets of the still free agents in
//! lexicographic order. A coalition is only closed if the agents left over
//! can still be split into admissible coalitions, so every branch of the
//! search ends in a valid partition.
//!
//! [`exists_stable`] prunes on the fly: once a coalition is closed, every
//! deviation between it and the already closed coalitions, and every move
//! out of it into a new singleton, is final and can be checked at once.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{feasible_partition_exists, Game, Partition, SizeBounds, Valuation};
use crate::stability::{blocks, move_allowed, StabilityConcept};

/// Limits for the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    /// Largest agent count accepted.
    pub max_agents: usize,
    /// Largest number of complete partitions examined, if any.
    pub max_partitions: Option<u64>,
    /// Whether [`PartitionStream`] reports an overrun as an error item. When
    /// unset the stream just ends. The oracles always fail on overrun.
    pub abort_on_exceed: bool,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_agents: 12, max_partitions: None, abort_on_exceed: true }
    }
}

impl EnumerationBudget {
    pub fn with_max_agents(max_agents: usize) -> Self {
        EnumerationBudget { max_agents, ..Self::default() }
    }

    fn check_agents(&self, n: usize) -> Result<()> {
        if self.max_agents == 0 {
            return Err(Error::BadParameter("max_agents must be at least 1".into()));
        }
        if n > self.max_agents {
            return Err(Error::BudgetExceeded(format!(
                "{n} agents exceed the cap of {}",
                self.max_agents
            )));
        }
        Ok(())
    }

    fn overrun(&self) -> Error {
        Error::BudgetExceeded(format!(
            "more than {} partitions examined",
            self.max_partitions.unwrap_or(0)
        ))
    }
}

/// One leader's coalition under construction: the leader plus the chosen
/// positions of `pool`, which holds the free agents above the leader.
#[derive(Clone, Debug)]
struct Frame {
    leader: usize,
    pool: Vec<usize>,
    idx: Vec<usize>,
    started: bool,
    pinned: bool,
}

impl Frame {
    fn new(free: Vec<usize>) -> Self {
        Frame { leader: free[0], pool: free[1..].to_vec(), idx: Vec::new(), started: false, pinned: false }
    }

    fn size(&self) -> usize {
        1 + self.idx.len()
    }

    fn members(&self) -> Vec<usize> {
        let mut m = Vec::with_capacity(self.size());
        m.push(self.leader);
        m.extend(self.idx.iter().map(|&i| self.pool[i]));
        m
    }

    /// Free agents once this coalition is closed.
    fn rest(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.pool.len() - self.idx.len());
        let mut chosen = self.idx.iter().peekable();
        for (i, &a) in self.pool.iter().enumerate() {
            if chosen.peek() == Some(&&i) {
                chosen.next();
            } else {
                out.push(a);
            }
        }
        out
    }

    /// Moves to the lexicographic successor among coalitions of at most
    /// `max_size` members. Returns false once exhausted.
    fn step(&mut self, max_size: usize) -> bool {
        if !self.started {
            self.started = true;
            return true;
        }
        if self.pinned {
            return false;
        }
        let m = self.pool.len();
        if self.size() < max_size {
            let next = self.idx.last().map_or(0, |&l| l + 1);
            if next < m {
                self.idx.push(next);
                return true;
            }
        }
        while let Some(last) = self.idx.pop() {
            if last + 1 < m {
                self.idx.push(last + 1);
                return true;
            }
        }
        false
    }
}

/// Depth-first search state shared by every enumeration.
struct Search {
    bounds: SizeBounds,
    stack: Vec<Frame>,
    /// Set for `n = 0`, whose only partition is empty.
    empty_pending: bool,
}

impl Search {
    fn new(n: usize, b: SizeBounds) -> Self {
        let mut s = Search { bounds: b, stack: Vec::new(), empty_pending: n == 0 };
        if n > 0 && feasible_partition_exists(n, b) {
            s.stack.push(Frame::new((0..n).collect()));
        }
        s
    }

    /// Search restricted to partitions whose first coalition is `first`,
    /// which must contain agent 0.
    fn rooted(n: usize, b: SizeBounds, first: &[usize]) -> Self {
        let mut frame = Frame::new((0..n).collect());
        frame.idx = first[1..].iter().map(|a| a - 1).collect();
        frame.pinned = true;
        Search { bounds: b, stack: vec![frame], empty_pending: false }
    }

    /// Advances to the next complete partition, closing a coalition only if
    /// `accept` approves the stack with that coalition on top.
    fn advance(&mut self, mut accept: impl FnMut(&[Frame]) -> bool) -> bool {
        if self.empty_pending {
            self.empty_pending = false;
            return true;
        }
        let (lo, hi) = (self.bounds.lower(), self.bounds.upper());
        loop {
            let Some(top) = self.stack.last_mut() else {
                return false;
            };
            if !top.step(hi) {
                self.stack.pop();
                continue;
            }
            let size = top.size();
            if size < lo {
                continue;
            }
            let residual = top.pool.len() + 1 - size;
            if residual > 0 && !feasible_partition_exists(residual, self.bounds) {
                continue;
            }
            if !accept(&self.stack) {
                continue;
            }
            if residual == 0 {
                return true;
            }
            let rest = self.stack.last().expect("nonempty").rest();
            self.stack.push(Frame::new(rest));
        }
    }

    fn partition(&self, n: usize) -> Partition {
        Partition::from_canonical_parts(n, self.stack.iter().map(Frame::members).collect())
    }

    fn depth(&self) -> usize {
        self.stack.len()
    }
}

/// Lazy stream of every `(lower, upper)`-partition of `0..n` in canonical
/// order. See [`enumerate_partitions`].
pub struct PartitionStream {
    n: usize,
    search: Search,
    budget: EnumerationBudget,
    yielded: u64,
    finished: bool,
}

impl Iterator for PartitionStream {
    type Item = Result<Partition>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.finished {
            return None;
        }
        if !self.search.advance(|_| true) {
            self.finished = true;
            return None;
        }
        self.yielded += 1;
        if self.budget.max_partitions.is_some_and(|m| self.yielded > m) {
            self.finished = true;
            return self.budget.abort_on_exceed.then(|| Err(self.budget.overrun()));
        }
        Some(Ok(self.search.partition(self.n)))
    }
}

/// Every `(lower, upper)`-partition of `0..n`, each exactly once, in
/// strictly increasing order of their coalition lists.
pub fn enumerate_partitions(
    n: usize,
    b: SizeBounds,
    budget: EnumerationBudget,
) -> Result<PartitionStream> {
    budget.check_agents(n)?;
    Ok(PartitionStream { n, search: Search::new(n, b), budget, yielded: 0, finished: false })
}

fn tick(count: &AtomicU64, budget: &EnumerationBudget) -> Result<()> {
    let c = count.fetch_add(1, Ordering::Relaxed) + 1;
    match budget.max_partitions {
        Some(m) if c > m => Err(budget.overrun()),
        _ => Ok(()),
    }
}

/// Number of `(lower, upper)`-partitions of `0..n` by coalition count:
/// entry `k` counts the partitions into exactly `k` coalitions.
pub fn count_by_coalitions(n: usize, b: SizeBounds, budget: EnumerationBudget) -> Result<Vec<u64>> {
    budget.check_agents(n)?;
    let count = AtomicU64::new(0);
    let mut out = vec![0u64; n + 1];
    let mut s = Search::new(n, b);
    while s.advance(|_| true) {
        tick(&count, &budget)?;
        out[s.depth()] += 1;
    }
    Ok(out)
}

/// Checks the coalition on top of `stack` against itself (moves to a new
/// singleton) and against every coalition below it, in both directions.
fn closes_stably<V: Valuation>(
    g: &Game<V>,
    stack: &[Frame],
    bounds: SizeBounds,
    c: StabilityConcept,
) -> bool {
    let b_mode = c.mode();
    let (top, below) = stack.split_last().expect("nonempty");
    let new = top.members();
    for &a in &new {
        if move_allowed(new.len(), 0, bounds, b_mode) && blocks(g, a, &new, &[], c) {
            return false;
        }
    }
    for f in below {
        let old = f.members();
        if move_allowed(new.len(), old.len(), bounds, b_mode)
            && new.iter().any(|&a| blocks(g, a, &new, &old, c))
        {
            return false;
        }
        if move_allowed(old.len(), new.len(), bounds, b_mode)
            && old.iter().any(|&a| blocks(g, a, &old, &new, c))
        {
            return false;
        }
    }
    true
}

fn first_stable_in<V: Valuation>(
    g: &Game<V>,
    c: StabilityConcept,
    mut search: Search,
    count: &AtomicU64,
    budget: &EnumerationBudget,
) -> Result<Option<Partition>> {
    let b = search.bounds;
    if search.advance(|stack| closes_stably(g, stack, b, c)) {
        tick(count, budget)?;
        Ok(Some(search.partition(g.n())))
    } else {
        Ok(None)
    }
}

/// The first partition, in canonical order, that is stable under `c`, or
/// `None` if there is none. Agrees with filtering [`enumerate_partitions`]
/// through [`crate::stability::verify`].
pub fn exists_stable<V: Valuation>(
    g: &Game<V>,
    b: SizeBounds,
    c: StabilityConcept,
    budget: EnumerationBudget,
) -> Result<Option<Partition>> {
    budget.check_agents(g.n())?;
    let count = AtomicU64::new(0);
    first_stable_in(g, c, Search::new(g.n(), b), &count, &budget)
}

/// All partitions stable under `c`, in canonical order.
pub fn all_stable<V: Valuation>(
    g: &Game<V>,
    b: SizeBounds,
    c: StabilityConcept,
    budget: EnumerationBudget,
) -> Result<Vec<Partition>> {
    budget.check_agents(g.n())?;
    let count = AtomicU64::new(0);
    let mut search = Search::new(g.n(), b);
    let mut out = Vec::new();
    while search.advance(|stack| closes_stably(g, stack, b, c)) {
        tick(&count, &budget)?;
        out.push(search.partition(g.n()));
    }
    Ok(out)
}

/// [`exists_stable`] with the first coalition choices searched in
/// parallel. Returns the same partition as the sequential search.
pub fn exists_stable_parallel<V: Valuation>(
    g: &Game<V>,
    b: SizeBounds,
    c: StabilityConcept,
    budget: EnumerationBudget,
) -> Result<Option<Partition>> {
    budget.check_agents(g.n())?;
    let n = g.n();
    if n == 0 || !feasible_partition_exists(n, b) {
        return exists_stable(g, b, c, budget);
    }
    // first coalitions that survive their own checks
    let mut roots = Vec::new();
    let mut first = Frame::new((0..n).collect());
    while first.step(b.upper()) {
        let size = first.size();
        let residual = n - size;
        if size < b.lower() || (residual > 0 && !feasible_partition_exists(residual, b)) {
            continue;
        }
        if closes_stably(g, std::slice::from_ref(&first), b, c) {
            roots.push(first.members());
        }
    }
    let count = AtomicU64::new(0);
    roots
        .par_iter()
        .map(|root| first_stable_in(g, c, Search::rooted(n, b, root), &count, &budget))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .unwrap_or(Ok(None))
}

/// A `(lower, upper)`-partition of maximum social welfare, the first in
/// canonical order among ties, or `None` if no partition exists.
pub fn max_welfare_partition<V: Valuation>(
    g: &Game<V>,
    b: SizeBounds,
    budget: EnumerationBudget,
) -> Result<Option<Partition>> {
    budget.check_agents(g.n())?;
    let count = AtomicU64::new(0);
    let mut search = Search::new(g.n(), b);
    // welfare of the closed coalition at each depth
    let mut layer: Vec<V> = Vec::new();
    let mut best: Option<(V, Partition)> = None;
    while search.advance(|stack| {
        let members = stack.last().expect("nonempty").members();
        let w: V = members.iter().map(|&a| g.value_sum(a, &members)).sum();
        layer.truncate(stack.len() - 1);
        layer.push(w);
        true
    }) {
        tick(&count, &budget)?;
        let total: V = layer.iter().copied().sum();
        if best.as_ref().is_none_or(|(w, _)| total > *w) {
            best = Some((total, search.partition(g.n())));
        }
    }
    Ok(best.map(|(_, p)| p))
}
