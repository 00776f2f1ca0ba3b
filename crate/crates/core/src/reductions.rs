//! Hardness gadgets as instance generators.
//!
//! Three constructions are provided, each with the witness partition that
//! turns a yes-certificate of the source problem into a stable partition:
//!
//! - [`x3c_to_cns`]: exact cover by 3-sets to CNS under an upper bound
//!   `mu >= 3`.
//! - [`mmm_to_ns_is`]: minimum maximal matching in a balanced bipartite
//!   graph to NS and IS under an upper bound `mu >= 2`.
//! - [`x3c_to_ns_bounded`]: exact cover by 3-sets to NS under both bounds,
//!   `lambda < mu` and `mu >= 4`.
//!
//! Agent layouts are fixed so generated files are stable; see each builder.
//! Elements, sets and vertices are zero-based here and one-based in files.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{greedy_partition_of, Game, Partition, SizeBounds, Valuation};
use crate::stability::StabilityConcept;

/// Exact cover by 3-sets: a ground set `0..ground_size` and a list of
/// 3-element subsets, each stored ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X3CInstance {
    ground_size: usize,
    sets: Vec<[usize; 3]>,
}

impl X3CInstance {
    pub fn new(ground_size: usize, sets: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        if !ground_size.is_multiple_of(3) {
            return Err(Error::BadParameter(format!(
                "ground set size {ground_size} is not a multiple of 3"
            )));
        }
        let mut out = Vec::new();
        for mut s in sets {
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return Err(Error::BadParameter(format!("set {s:?} repeats an element")));
            }
            if s[2] >= ground_size {
                return Err(Error::BadParameter(format!(
                    "set {s:?} leaves the ground set of size {ground_size}"
                )));
            }
            out.push(s);
        }
        Ok(X3CInstance { ground_size, sets: out })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }

    /// Whether the sets with the given indices partition the ground set.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut seen = vec![false; self.ground_size];
        for &i in chosen {
            let Some(s) = self.sets.get(i) else {
                return false;
            };
            for &r in s {
                if std::mem::replace(&mut seen[r], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|x| x)
    }
}

/// Minimum maximal matching instance: a bipartite graph with sides
/// `A = 0..n` and `B = n..2n` and a budget `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MMMInstance {
    n: usize,
    edges: Vec<(usize, usize)>,
    k: usize,
}

impl MMMInstance {
    /// Edges are `(a, b)` with `a < n <= b < 2n`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::BadParameter(format!("budget k = {k} must lie in 1..={n}")));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b < n || b >= 2 * n {
                return Err(Error::BadParameter(format!(
                    "edge ({}, {}) does not cross the bipartition",
                    a + 1,
                    b + 1
                )));
            }
            set.insert((a, b));
        }
        Ok(MMMInstance { n, edges: set.into_iter().collect(), k })
    }

    /// Vertices per side.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Whether `m` is a maximal matching of the graph with at most `k` edges.
    pub fn is_small_maximal_matching(&self, m: &[(usize, usize)]) -> bool {
        let mut covered = vec![false; 2 * self.n];
        for &(a, b) in m {
            if self.edges.binary_search(&(a, b)).is_err() || covered[a] || covered[b] {
                return false;
            }
            covered[a] = true;
            covered[b] = true;
        }
        m.len() <= self.k && self.edges.iter().all(|&(a, b)| covered[a] || covered[b])
    }
}

/// Which construction produced a game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    /// [`x3c_to_cns`]
    CnsFromX3c,
    /// [`mmm_to_ns_is`]
    NsIsFromMatching,
    /// [`x3c_to_ns_bounded`]
    NsBoundedFromX3c,
}

impl Construction {
    /// Concepts the construction is hard for; witnesses are stable under all.
    pub fn concepts(&self) -> &'static [StabilityConcept] {
        match self {
            Construction::CnsFromX3c => &[StabilityConcept::CNS],
            Construction::NsIsFromMatching => &[StabilityConcept::NS, StabilityConcept::IS],
            Construction::NsBoundedFromX3c => &[StabilityConcept::NS],
        }
    }

    /// Short id used on the command line.
    pub fn id(&self) -> &'static str {
        match self {
            Construction::CnsFromX3c => "5",
            Construction::NsIsFromMatching => "6",
            Construction::NsBoundedFromX3c => "9",
        }
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Construction::CnsFromX3c => "cns-x3c",
            Construction::NsIsFromMatching => "ns-is-mmm",
            Construction::NsBoundedFromX3c => "ns-bounded-x3c",
        };
        f.write_str(name)
    }
}

impl FromStr for Construction {
    type Err = Error;

    /// Accepts the numeric id or the descriptive name.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "5" | "cns-x3c" => Ok(Construction::CnsFromX3c),
            "6" | "ns-is-mmm" => Ok(Construction::NsIsFromMatching),
            "9" | "ns-bounded-x3c" => Ok(Construction::NsBoundedFromX3c),
            _ => Err(Error::BadParameter(format!("unknown construction '{s}'"))),
        }
    }
}

/// Source problem instance of a reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    X3C(X3CInstance),
    MMM(MMMInstance),
}

/// Where a reduced game came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub construction: Construction,
    pub bounds: SizeBounds,
    pub source: Source,
}

/// A generated game with one role label per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGame<V = i64> {
    pub game: Game<V>,
    pub labels: Vec<String>,
    pub provenance: Provenance,
}

impl<V: Valuation> ReducedGame<V> {
    /// Number of agents whose label starts with `role` followed by `[` or
    /// the end of the label.
    pub fn role_count(&self, role: &str) -> usize {
        self.labels
            .iter()
            .filter(|l| l.strip_prefix(role).is_some_and(|r| r.is_empty() || r.starts_with('[')))
            .count()
    }

    pub fn bounds(&self) -> SizeBounds {
        self.provenance.bounds
    }
}

/// Yes-certificate of the source instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Indices of the sets forming an exact cover.
    Cover(Vec<usize>),
    /// Edges `(a, b)` of a maximal matching with at most `k` edges.
    Matching(Vec<(usize, usize)>),
}

/// Table under construction: a default value plus explicit entries.
struct Builder<V> {
    n: usize,
    values: Vec<V>,
}

impl<V: Valuation> Builder<V> {
    fn new(n: usize, default: i64) -> Self {
        Builder { n, values: vec![V::from_int(default); n * n] }
    }

    fn set(&mut self, a: usize, b: usize, w: i64) {
        debug_assert_ne!(a, b);
        self.values[a * self.n + b] = V::from_int(w);
    }

    fn both(&mut self, a: usize, b: usize, w: i64) {
        self.set(a, b, w);
        self.set(b, a, w);
    }

    fn finish(self) -> Game<V> {
        let n = self.n;
        Game::from_fn(n, false, |a, b| self.values[a * n + b]).expect("valid table")
    }
}

/// Layout of [`x3c_to_cns`].
struct CnsLayout {
    elements: usize,
}

impl CnsLayout {
    const GADGET: usize = 4;
    const PER_ELEMENT_OF_SET: usize = 6;

    /// `alpha_r, beta_r, gamma_r, zeta_r`.
    fn element(&self, r: usize) -> [usize; 4] {
        let o = Self::GADGET * r;
        [o, o + 1, o + 2, o + 3]
    }

    /// `a, abar, alpha, beta, gamma, zeta` for the `j`-th element of set `s`.
    fn set_slot(&self, s: usize, j: usize) -> [usize; 6] {
        let o = Self::GADGET * self.elements + Self::PER_ELEMENT_OF_SET * (3 * s + j);
        [o, o + 1, o + 2, o + 3, o + 4, o + 5]
    }
}

/// Element gadget: a four-agent game without a CNS partition.
fn cns_gadget<V: Valuation>(t: &mut Builder<V>, [al, be, ga, ze]: [usize; 4]) {
    for x in [al, be, ga] {
        t.set(x, ze, 1);
    }
    t.set(al, be, 0);
    t.set(be, ga, 0);
    t.set(ga, al, 0);
}

/// CNS hardness gadget from an X3C instance, for bounds `(1, mu)`.
///
/// Layout: for each element `r` the agents `alpha_r, beta_r, gamma_r,
/// zeta_r`; then for each set `S` and each element `r` of `S` (ascending)
/// the agents `a^S_r, abar^S_r, alpha^S_r, beta^S_r, gamma^S_r, zeta^S_r`.
/// Unlisted valuations are `-3`.
pub fn x3c_to_cns<V: Valuation>(inst: &X3CInstance, mu: usize) -> Result<ReducedGame<V>> {
    if mu < 3 {
        return Err(Error::BadParameter(format!("upper bound {mu} must be at least 3")));
    }
    let lay = CnsLayout { elements: inst.ground_size };
    let n = CnsLayout::GADGET * inst.ground_size + 18 * inst.sets.len();
    let mut t = Builder::<V>::new(n, -3);
    let mut labels = vec![String::new(); n];

    for r in 0..inst.ground_size {
        let g = lay.element(r);
        cns_gadget(&mut t, g);
        for (name, &x) in ["alpha", "beta", "gamma", "zeta"].iter().zip(&g) {
            labels[x] = format!("{name}[{}]", r + 1);
        }
    }
    for (s, set) in inst.sets.iter().enumerate() {
        for (j, &r) in set.iter().enumerate() {
            let [a, abar, al, be, ga, ze] = lay.set_slot(s, j);
            cns_gadget(&mut t, [al, be, ga, ze]);
            t.both(a, lay.element(r)[3], 0);
            t.both(abar, ze, 0);
            t.set(abar, a, 2);
            for j2 in (0..3).filter(|&j2| j2 != j) {
                let other = lay.set_slot(s, j2)[0];
                t.set(a, other, 0);
                t.set(abar, other, -1);
            }
            let names = ["a", "abar", "alpha", "beta", "gamma", "zeta"];
            for (name, x) in names.iter().zip([a, abar, al, be, ga, ze]) {
                labels[x] = format!("{name}[S{},{}]", s + 1, r + 1);
            }
        }
    }
    Ok(ReducedGame {
        game: t.finish(),
        labels,
        provenance: Provenance {
            construction: Construction::CnsFromX3c,
            bounds: SizeBounds::upper_only(mu)?,
            source: Source::X3C(inst.clone()),
        },
    })
}

/// Agent ids of [`mmm_to_ns_is`]: `A = 0..n`, `B = n..2n`, then five agents
/// per gadget.
fn gadget_agent(n: usize, i: usize, j: usize) -> usize {
    2 * n + 5 * i + j
}

/// NS/IS hardness gadget from a minimum maximal matching instance, for
/// bounds `(1, mu)`.
///
/// Layout: `A`, then `B`, then for each `i` in `0..n-k` the agents
/// `x_i^1..x_i^5`. Graph edges are worth 3 both ways, every `A` agent and
/// every `x_i^1` value each other 2, and inside a gadget `x^j` values
/// `x^{j+1}` at 2 and `x^{j-1}` at 1 (cyclically). Unlisted valuations are
/// `-6n`.
pub fn mmm_to_ns_is<V: Valuation>(inst: &MMMInstance, mu: usize) -> Result<ReducedGame<V>> {
    if mu < 2 {
        return Err(Error::BadParameter(format!("upper bound {mu} must be at least 2")));
    }
    let n = inst.n;
    let gadgets = n - inst.k;
    let total = 2 * n + 5 * gadgets;
    let mut t = Builder::<V>::new(total, -6 * n as i64);
    let mut labels = vec![String::new(); total];
    for v in 0..n {
        labels[v] = format!("a[{}]", v + 1);
        labels[n + v] = format!("b[{}]", v + 1);
    }
    for &(a, b) in &inst.edges {
        t.both(a, b, 3);
    }
    for i in 0..gadgets {
        for a in 0..n {
            t.both(a, gadget_agent(n, i, 0), 2);
        }
        for j in 0..5 {
            let (x, y) = (gadget_agent(n, i, j), gadget_agent(n, i, (j + 1) % 5));
            t.set(x, y, 2);
            t.set(y, x, 1);
            labels[x] = format!("x[{},{}]", i + 1, j + 1);
        }
    }
    Ok(ReducedGame {
        game: t.finish(),
        labels,
        provenance: Provenance {
            construction: Construction::NsIsFromMatching,
            bounds: SizeBounds::upper_only(mu)?,
            source: Source::MMM(inst.clone()),
        },
    })
}

/// Sizes of the blocks of [`x3c_to_ns_bounded`].
struct NsLayout {
    elements: usize,
    sets: usize,
    per_set: usize,
    triplets: usize,
    dummies: usize,
}

impl NsLayout {
    fn new(inst: &X3CInstance, b: SizeBounds) -> Result<Self> {
        let (lo, hi) = (b.lower(), b.upper());
        if hi < 4 || lo >= hi {
            return Err(Error::BadParameter(format!("bounds ({lo}, {hi}) need upper >= 4 and lower < upper")));
        }
        let cover = inst.ground_size / 3;
        if inst.sets.len() < cover {
            return Err(Error::BadParameter(format!(
                "{} sets cannot cover {} elements",
                inst.sets.len(),
                inst.ground_size
            )));
        }
        Ok(NsLayout {
            elements: inst.ground_size,
            sets: inst.sets.len(),
            per_set: hi - 3,
            triplets: inst.sets.len() - cover,
            dummies: (lo - 1).div_ceil(hi - lo) * hi + hi,
        })
    }

    fn beta(&self, r: usize) -> usize {
        r
    }

    fn xi(&self, s: usize, i: usize) -> usize {
        self.elements + s * self.per_set + i
    }

    fn t(&self, i: usize, j: usize) -> usize {
        self.elements + self.sets * self.per_set + 3 * i + j
    }

    fn dummy(&self, d: usize) -> usize {
        self.t(self.triplets, 0) + d
    }

    fn alpha(&self) -> usize {
        self.dummy(self.dummies)
    }

    fn n(&self) -> usize {
        self.alpha() + 1
    }

    fn core(&self) -> std::ops::Range<usize> {
        0..self.dummy(0)
    }
}

/// NS hardness gadget under both bounds from an X3C instance.
///
/// Layout: `beta_r` per element, then `mu - 3` agents `xi_S^i` per set, then
/// `|S| - |R|/3` triplets `t_i^1..t_i^3`, then
/// `ceil((lambda-1)/(mu-lambda)) * mu + mu` dummies, and `alpha` last. The
/// first three blocks are the core agents. Unlisted valuations are 0.
pub fn x3c_to_ns_bounded<V: Valuation>(inst: &X3CInstance, b: SizeBounds) -> Result<ReducedGame<V>> {
    let lay = NsLayout::new(inst, b)?;
    let mu = b.upper() as i64;
    let n = lay.n();
    let alpha = lay.alpha();
    let mut t = Builder::<V>::new(n, 0);
    let mut labels = vec![String::new(); n];

    for c in lay.core() {
        t.set(c, alpha, -mu);
        t.set(alpha, c, 1);
    }
    for d in 0..lay.dummies {
        let x = lay.dummy(d);
        for c in lay.core() {
            t.set(x, c, -1);
        }
        t.set(x, alpha, mu);
        labels[x] = format!("d[{}]", d + 1);
    }
    labels[alpha] = "alpha".to_string();

    let all_t: Vec<usize> = (0..lay.triplets).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| lay.t(i, j)).collect();
    for r in 0..lay.elements {
        let beta = lay.beta(r);
        labels[beta] = format!("beta[{}]", r + 1);
        for &x in &all_t {
            t.set(beta, x, -1);
            t.set(x, beta, -1);
        }
        for (s, set) in inst.sets.iter().enumerate() {
            if !set.contains(&r) {
                for i in 0..lay.per_set {
                    t.set(beta, lay.xi(s, i), -1);
                    t.set(lay.xi(s, i), beta, -1);
                }
            }
        }
    }
    for s in 0..lay.sets {
        for i in 0..lay.per_set {
            let x = lay.xi(s, i);
            labels[x] = format!("xi[S{},{}]", s + 1, i + 1);
            for s2 in (0..lay.sets).filter(|&s2| s2 != s) {
                for j in 0..lay.per_set {
                    t.set(x, lay.xi(s2, j), -1);
                }
            }
        }
    }
    for i in 0..lay.triplets {
        for j in 0..3 {
            let x = lay.t(i, j);
            labels[x] = format!("t[{},{}]", i + 1, j + 1);
            for i2 in (0..lay.triplets).filter(|&i2| i2 != i) {
                for j2 in 0..3 {
                    t.set(x, lay.t(i2, j2), -1);
                }
            }
        }
    }
    Ok(ReducedGame {
        game: t.finish(),
        labels,
        provenance: Provenance {
            construction: Construction::NsBoundedFromX3c,
            bounds: b,
            source: Source::X3C(inst.clone()),
        },
    })
}

fn cover_of<'a>(src: &'a Source, cert: &Certificate) -> Result<(&'a X3CInstance, Vec<bool>)> {
    let (Source::X3C(inst), Certificate::Cover(chosen)) = (src, cert) else {
        return Err(Error::InvalidCertificate("expected a set cover".into()));
    };
    if !inst.is_exact_cover(chosen) {
        return Err(Error::InvalidCertificate("chosen sets are not an exact cover".into()));
    }
    let mut mask = vec![false; inst.sets.len()];
    for &i in chosen {
        mask[i] = true;
    }
    Ok((inst, mask))
}

/// The stable partition built from a yes-certificate of the source
/// instance.
pub fn witness_partition<V: Valuation>(rg: &ReducedGame<V>, cert: &Certificate) -> Result<Partition> {
    let n = rg.game.n();
    let mut cs: Vec<Vec<usize>> = Vec::new();
    match rg.provenance.construction {
        Construction::CnsFromX3c => {
            let (inst, in_cover) = cover_of(&rg.provenance.source, cert)?;
            let lay = CnsLayout { elements: inst.ground_size };
            for r in 0..inst.ground_size {
                let [al, be, ga, _] = lay.element(r);
                cs.extend([vec![al], vec![be], vec![ga]]);
            }
            for (s, set) in inst.sets.iter().enumerate() {
                let slots: Vec<[usize; 6]> = (0..3).map(|j| lay.set_slot(s, j)).collect();
                if in_cover[s] {
                    for (j, &r) in set.iter().enumerate() {
                        cs.push(vec![slots[j][0], lay.element(r)[3]]);
                    }
                } else {
                    cs.push(slots.iter().map(|x| x[0]).collect());
                }
                for [_, abar, al, be, ga, ze] in slots {
                    cs.extend([vec![al], vec![be], vec![ga], vec![abar, ze]]);
                }
            }
        }
        Construction::NsIsFromMatching => {
            let (Source::MMM(inst), Certificate::Matching(m)) = (&rg.provenance.source, cert) else {
                return Err(Error::InvalidCertificate("expected a matching".into()));
            };
            if !inst.is_small_maximal_matching(m) {
                return Err(Error::InvalidCertificate(format!(
                    "not a maximal matching with at most {} edges",
                    inst.k
                )));
            }
            let nn = inst.n;
            let mut used = vec![false; n];
            for &(a, b) in m {
                cs.push(vec![a, b]);
                used[a] = true;
                used[b] = true;
            }
            let free_a: Vec<usize> = (0..nn).filter(|&a| !used[a]).collect();
            for (i, &a) in free_a.iter().take(nn - inst.k).enumerate() {
                let x = |j| gadget_agent(nn, i, j);
                cs.extend([vec![a, x(0)], vec![x(1), x(2)], vec![x(3), x(4)]]);
                for y in [a, x(0), x(1), x(2), x(3), x(4)] {
                    used[y] = true;
                }
            }
            cs.extend((0..n).filter(|&y| !used[y]).map(|y| vec![y]));
        }
        Construction::NsBoundedFromX3c => {
            let (inst, in_cover) = cover_of(&rg.provenance.source, cert)?;
            let b = rg.provenance.bounds;
            let lay = NsLayout::new(inst, b)?;
            let mut spare = 0..lay.triplets;
            for (s, set) in inst.sets.iter().enumerate() {
                let mut c: Vec<usize> = (0..lay.per_set).map(|i| lay.xi(s, i)).collect();
                if in_cover[s] {
                    c.extend(set.iter().map(|&r| lay.beta(r)));
                } else {
                    let i = spare.next().expect("one triplet per set outside the cover");
                    c.extend((0..3).map(|j| lay.t(i, j)));
                }
                cs.push(c);
            }
            let hi = b.upper();
            let mut with_alpha: Vec<usize> = (0..hi - 1).map(|d| lay.dummy(d)).collect();
            with_alpha.push(lay.alpha());
            cs.push(with_alpha);
            let rest: Vec<usize> = (hi - 1..lay.dummies).map(|d| lay.dummy(d)).collect();
            cs.extend(greedy_partition_of(&rest, b).expect("enough dummies for a feasible split"));
        }
    }
    Partition::new(n, cs)
}

/// Indices of an exact cover, found by exhaustive search (first in
/// lexicographic order of set indices).
pub fn find_exact_cover(inst: &X3CInstance) -> Option<Vec<usize>> {
    fn rec(inst: &X3CInstance, covered: &mut Vec<bool>, from: usize, chosen: &mut Vec<usize>) -> bool {
        let Some(r) = covered.iter().position(|&c| !c) else {
            return true;
        };
        for i in from..inst.sets.len() {
            let s = inst.sets[i];
            // the first uncovered element must be covered by the next set
            if !s.contains(&r) || s.iter().any(|&x| covered[x]) {
                continue;
            }
            for &x in &s {
                covered[x] = true;
            }
            chosen.push(i);
            if rec(inst, covered, i + 1, chosen) {
                return true;
            }
            chosen.pop();
            for &x in &s {
                covered[x] = false;
            }
        }
        false
    }
    let mut chosen = Vec::new();
    let mut covered = vec![false; inst.ground_size];
    rec(inst, &mut covered, 0, &mut chosen).then(|| {
        chosen.sort_unstable();
        chosen
    })
}

/// A maximal matching with at most `k` edges, by trying every edge subset.
pub fn find_small_maximal_matching(inst: &MMMInstance) -> Option<Vec<(usize, usize)>> {
    let e = inst.edges.len();
    assert!(e < 32, "exhaustive matching search is for tiny graphs");
    (0u32..1 << e).find_map(|mask| {
        let m: Vec<(usize, usize)> =
            (0..e).filter(|i| mask >> i & 1 == 1).map(|i| inst.edges[i]).collect();
        inst.is_small_maximal_matching(&m).then_some(m)
    })
}
