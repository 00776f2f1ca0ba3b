//! Games, size bounds, partitions and feasibility arithmetic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{FromPrimitive, Signed};

use crate::error::{Error, Result};

/// Scalar type of valuations and utilities.
///
/// Anything totally ordered, signed and summable qualifies: the primitive
/// signed integers and `num_rational::Ratio` over them.
pub trait Valuation:
    Copy + Ord + Signed + Sum + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossless conversion for the small integer constants used by the
    /// generators. Panics if `V` cannot represent `x`.
    fn from_int(x: i64) -> Self {
        Self::from_i64(x).unwrap_or_else(|| panic!("{x} does not fit the valuation type"))
    }
}

impl<T> Valuation for T where
    T: Copy + Ord + Signed + Sum + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// An additively separable hedonic game on agents `0..n`.
///
/// The valuation table is total: every ordered pair of distinct agents has a
/// value, defaulting to zero. The diagonal is never read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game<V = i64> {
    n: usize,
    values: Vec<V>,
    symmetric: bool,
}

impl<V: Valuation> Game<V> {
    /// All-zero game.
    pub fn zero(n: usize, symmetric: bool) -> Self {
        Game { n, values: vec![V::zero(); n * n], symmetric }
    }

    /// Builds a game from a function of ordered pairs `(a, b)`, `a != b`.
    pub fn from_fn(n: usize, symmetric: bool, mut f: impl FnMut(usize, usize) -> V) -> Result<Self> {
        let mut g = Self::zero(n, false);
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    g.values[a * n + b] = f(a, b);
                }
            }
        }
        g.declare_symmetric(symmetric)
    }

    /// Builds a game from a full `n x n` table. Diagonal entries are ignored.
    pub fn from_table(table: &[Vec<V>], symmetric: bool) -> Result<Self> {
        let n = table.len();
        if table.iter().any(|row| row.len() != n) {
            return Err(Error::TableShape { n });
        }
        Self::from_fn(n, symmetric, |a, b| table[a][b])
    }

    /// Builds a game from `(a, b, value)` entries; unlisted pairs are zero.
    /// Later entries overwrite earlier ones.
    pub fn from_entries(
        n: usize,
        symmetric: bool,
        entries: impl IntoIterator<Item = (usize, usize, V)>,
    ) -> Result<Self> {
        let mut g = Self::zero(n, false);
        for (a, b, w) in entries {
            g.set(a, b, w)?;
            if symmetric {
                g.set(b, a, w)?;
            }
        }
        g.declare_symmetric(symmetric)
    }

    fn declare_symmetric(mut self, symmetric: bool) -> Result<Self> {
        if symmetric {
            if let Some((a, b)) = self.first_asymmetric_pair() {
                return Err(Error::Asymmetric { a, b });
            }
        }
        self.symmetric = symmetric;
        Ok(self)
    }

    /// Sets `v_a(b)`. Does not maintain symmetry; callers building symmetric
    /// games go through the constructors.
    pub(crate) fn set(&mut self, a: usize, b: usize, w: V) -> Result<()> {
        self.check_agent(a)?;
        self.check_agent(b)?;
        if a == b {
            return Err(Error::SelfValuation(a));
        }
        self.values[a * self.n + b] = w;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether the game was declared (and validated) symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// `v_a(b)`.
    #[inline]
    pub fn value(&self, a: usize, b: usize) -> V {
        debug_assert!(a != b, "self valuation v_{a}({a}) read");
        self.values[a * self.n + b]
    }

    /// Sum of `v_a(b)` over `others`, skipping `a` itself.
    #[inline]
    pub fn value_sum<'a>(&self, a: usize, others: impl IntoIterator<Item = &'a usize>) -> V {
        others.into_iter().filter(|&&b| b != a).map(|&b| self.value(a, b)).sum()
    }

    /// Ordered pairs `(a, b, v_a(b))` with `a != b`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, V)> + '_ {
        (0..self.n).flat_map(move |a| {
            (0..self.n).filter(move |&b| b != a).map(move |b| (a, b, self.value(a, b)))
        })
    }

    pub fn first_asymmetric_pair(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| (a + 1..self.n).map(move |b| (a, b)))
            .find(|&(a, b)| self.value(a, b) != self.value(b, a))
    }

    /// True when `v_a(b) = v_b(a)` for all pairs, whether declared or not.
    pub fn has_symmetric_values(&self) -> bool {
        self.first_asymmetric_pair().is_none()
    }

    pub fn first_zero_pair(&self) -> Option<(usize, usize)> {
        self.entries().find(|(_, _, w)| w.is_zero()).map(|(a, b, _)| (a, b))
    }

    pub fn first_negative_pair(&self) -> Option<(usize, usize)> {
        self.entries().find(|(_, _, w)| w.is_negative()).map(|(a, b, _)| (a, b))
    }

    /// Simple games have all valuations in `{0, 1}`.
    pub fn is_simple(&self) -> bool {
        self.entries().all(|(_, _, w)| w.is_zero() || w == V::one())
    }

    pub fn check_agent(&self, a: usize) -> Result<()> {
        if a < self.n {
            Ok(())
        } else {
            Err(Error::AgentOutOfRange { agent: a, n: self.n })
        }
    }
}

/// Lower and upper bound on coalition sizes, `1 <= lower <= upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SizeBounds {
    lower: usize,
    upper: usize,
}

impl SizeBounds {
    pub fn new(lower: usize, upper: usize) -> Result<Self> {
        if lower == 0 || lower > upper {
            return Err(Error::InvalidBounds { lower, upper });
        }
        Ok(SizeBounds { lower, upper })
    }

    /// Bounds `(1, upper)`.
    pub fn upper_only(upper: usize) -> Result<Self> {
        Self::new(1, upper)
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    /// Whether a coalition of `size` agents is a `(lower, upper)`-coalition.
    #[inline]
    pub fn admits(&self, size: usize) -> bool {
        self.lower <= size && size <= self.upper
    }
}

impl Display for SizeBounds {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.lower, self.upper)
    }
}

/// A partition of agents `0..n` into nonempty coalitions.
///
/// Stored canonically: members of each coalition ascending, coalitions
/// ordered by their minimum member. Coalition ids are positions in that
/// order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    coalitions: Vec<Vec<usize>>,
    index: Vec<usize>,
}

impl Partition {
    /// Validates and canonicalises `coalitions` as a partition of `0..n`.
    pub fn new(n: usize, coalitions: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut index = vec![usize::MAX; n];
        let mut cs: Vec<Vec<usize>> = Vec::new();
        for mut c in coalitions {
            if c.is_empty() {
                return Err(Error::EmptyCoalition);
            }
            c.sort_unstable();
            for &a in &c {
                if a >= n {
                    return Err(Error::AgentOutOfRange { agent: a, n });
                }
                if index[a] != usize::MAX {
                    return Err(Error::DuplicateAgent(a));
                }
                index[a] = 0;
            }
            cs.push(c);
        }
        if let Some(a) = index.iter().position(|&i| i == usize::MAX) {
            return Err(Error::MissingAgent(a));
        }
        Ok(Self::from_canonical_parts(n, cs))
    }

    pub(crate) fn from_canonical_parts(n: usize, mut coalitions: Vec<Vec<usize>>) -> Self {
        coalitions.sort_unstable_by_key(|c| c[0]);
        let mut index = vec![0; n];
        for (i, c) in coalitions.iter().enumerate() {
            for &a in c {
                index[a] = i;
            }
        }
        Partition { coalitions, index }
    }

    /// Every agent alone.
    pub fn singletons(n: usize) -> Self {
        Self::from_canonical_parts(n, (0..n).map(|a| vec![a]).collect())
    }

    /// All agents together (the empty partition when `n = 0`).
    pub fn grand(n: usize) -> Self {
        if n == 0 {
            return Self::from_canonical_parts(0, Vec::new());
        }
        Self::from_canonical_parts(n, vec![(0..n).collect()])
    }

    /// Number of agents covered.
    pub fn n(&self) -> usize {
        self.index.len()
    }

    /// Number of coalitions.
    pub fn len(&self) -> usize {
        self.coalitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coalitions.is_empty()
    }

    pub fn coalitions(&self) -> &[Vec<usize>] {
        &self.coalitions
    }

    pub fn coalition(&self, id: usize) -> &[usize] {
        &self.coalitions[id]
    }

    /// Id of the coalition containing `a`.
    pub fn coalition_id(&self, a: usize) -> usize {
        self.index[a]
    }

    /// Members of the coalition containing `a`.
    pub fn coalition_of(&self, a: usize) -> &[usize] {
        &self.coalitions[self.index[a]]
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.coalitions.iter().map(Vec::len)
    }

    /// Moves `agent` into coalition `target` (or into a fresh singleton when
    /// `target` is `None`), returning the resulting partition.
    pub fn with_move(&self, agent: usize, target: Option<usize>) -> Partition {
        let from = self.index[agent];
        let mut cs = self.coalitions.clone();
        cs[from].retain(|&b| b != agent);
        match target {
            Some(t) => {
                let pos = cs[t].binary_search(&agent).unwrap_err();
                cs[t].insert(pos, agent);
            }
            None => cs.push(vec![agent]),
        }
        cs.retain(|c| !c.is_empty());
        Self::from_canonical_parts(self.n(), cs)
    }
}

impl Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.coalitions.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{{")?;
            for (j, a) in c.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", a + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

/// Whether every coalition of `p` has an admissible size.
pub fn is_feasible_partition(p: &Partition, b: SizeBounds) -> bool {
    p.sizes().all(|s| b.admits(s))
}

/// A `(lower, upper)`-partition of `n` agents exists iff `n <= floor(n/lower) * upper`.
pub fn feasible_partition_exists(n: usize, b: SizeBounds) -> bool {
    n <= (n / b.lower) * b.upper
}

/// A `(lower, upper)`-partition of `n` agents into exactly `k` coalitions
/// exists iff `k * lower <= n <= k * upper`.
pub fn feasible_k_partition_exists(n: usize, k: usize, b: SizeBounds) -> bool {
    k * b.lower <= n && n <= k * b.upper
}

/// Sufficient agent count `ceil((lower - 1) * upper / (upper - lower))`:
/// every `n` at or above it admits a partition.
pub fn feasibility_bound(b: SizeBounds) -> Result<usize> {
    if b.lower == b.upper {
        return Err(Error::EqualBounds);
    }
    let num = (b.lower - 1) * b.upper;
    let den = b.upper - b.lower;
    Ok(num.div_ceil(den))
}

/// Least `T` such that a partition exists for every `n >= T`.
///
/// [`feasibility_bound`] is sufficient but not tight; this scans below it
/// for the last infeasible agent count.
pub fn feasibility_threshold(b: SizeBounds) -> Result<usize> {
    let bound = feasibility_bound(b)?;
    Ok((0..bound)
        .rev()
        .find(|&n| !feasible_partition_exists(n, b))
        .map_or(0, |n| n + 1))
}

/// Coalition sizes of a `(lower, upper)`-partition of `n` agents into `k`
/// coalitions: start every coalition at `lower`, then top them up in order.
pub fn feasible_sizes(n: usize, k: usize, b: SizeBounds) -> Option<Vec<usize>> {
    if !feasible_k_partition_exists(n, k, b) {
        return None;
    }
    let mut sizes = vec![b.lower; k];
    let mut rest = n - k * b.lower;
    for s in &mut sizes {
        let add = rest.min(b.upper - b.lower);
        *s += add;
        rest -= add;
    }
    Some(sizes)
}

/// A `(lower, upper)`-partition of the given agents with the largest possible
/// number of coalitions, filled in list order.
pub fn greedy_partition_of(agents: &[usize], b: SizeBounds) -> Option<Vec<Vec<usize>>> {
    let n = agents.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let sizes = feasible_sizes(n, n / b.lower, b)?;
    let mut rest = agents;
    Some(
        sizes
            .into_iter()
            .map(|s| {
                let (head, tail) = rest.split_at(s);
                rest = tail;
                head.to_vec()
            })
            .collect(),
    )
}

/// [`greedy_partition_of`] on agents `0..n`.
pub fn greedy_partition(n: usize, b: SizeBounds) -> Option<Partition> {
    let agents: Vec<usize> = (0..n).collect();
    greedy_partition_of(&agents, b).map(|cs| Partition::from_canonical_parts(n, cs))
}
