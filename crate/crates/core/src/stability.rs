//! Single-agent deviations and verification of the eight stability concepts.
//!
//! A deviation moves one agent from its coalition into another existing
//! coalition or into a new singleton. It is *permissible* if the joined
//! coalition ends within the size bounds and *feasible* if, in addition, the
//! abandoned coalition does. A deviation blocks under
//!
//! - NS when the deviator strictly gains,
//! - IS when, in addition, no member of the joined coalition strictly loses,
//! - CNS when, in addition, no member of the abandoned coalition strictly loses,
//! - CIS when both consent conditions hold.
//!
//! The starred concepts only consider feasible deviations.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{is_feasible_partition, Game, Partition, SizeBounds, Valuation};

/// Which consent a deviation needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    NS,
    IS,
    CNS,
    CIS,
}

/// One of NS, IS, CNS, CIS, optionally restricted to feasible deviations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StabilityConcept {
    pub base: Base,
    pub feasible: bool,
}

impl StabilityConcept {
    pub const NS: Self = Self::new(Base::NS, false);
    pub const IS: Self = Self::new(Base::IS, false);
    pub const CNS: Self = Self::new(Base::CNS, false);
    pub const CIS: Self = Self::new(Base::CIS, false);
    pub const NS_STAR: Self = Self::new(Base::NS, true);
    pub const IS_STAR: Self = Self::new(Base::IS, true);
    pub const CNS_STAR: Self = Self::new(Base::CNS, true);
    pub const CIS_STAR: Self = Self::new(Base::CIS, true);

    pub const ALL: [Self; 8] = [
        Self::NS,
        Self::IS,
        Self::CNS,
        Self::CIS,
        Self::NS_STAR,
        Self::IS_STAR,
        Self::CNS_STAR,
        Self::CIS_STAR,
    ];

    /// Direct implications between concepts; everything else follows by
    /// transitivity.
    pub const IMPLICATIONS: [(Self, Self); 12] = [
        (Self::NS, Self::IS),
        (Self::NS, Self::CNS),
        (Self::IS, Self::CIS),
        (Self::CNS, Self::CIS),
        (Self::NS_STAR, Self::IS_STAR),
        (Self::NS_STAR, Self::CNS_STAR),
        (Self::IS_STAR, Self::CIS_STAR),
        (Self::CNS_STAR, Self::CIS_STAR),
        (Self::NS, Self::NS_STAR),
        (Self::IS, Self::IS_STAR),
        (Self::CNS, Self::CNS_STAR),
        (Self::CIS, Self::CIS_STAR),
    ];

    pub const fn new(base: Base, feasible: bool) -> Self {
        StabilityConcept { base, feasible }
    }

    pub fn mode(&self) -> Mode {
        if self.feasible {
            Mode::Feasible
        } else {
            Mode::Permissible
        }
    }

    /// Members of the joined coalition may veto.
    pub fn welcome_consent(&self) -> bool {
        matches!(self.base, Base::IS | Base::CIS)
    }

    /// Members of the abandoned coalition may veto.
    pub fn leave_consent(&self) -> bool {
        matches!(self.base, Base::CNS | Base::CIS)
    }
}

impl fmt::Display for StabilityConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.base {
            Base::NS => "NS",
            Base::IS => "IS",
            Base::CNS => "CNS",
            Base::CIS => "CIS",
        };
        write!(f, "{name}{}", if self.feasible { "*" } else { "" })
    }
}

impl FromStr for StabilityConcept {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let (name, feasible) = match lower.strip_suffix('*') {
            Some(rest) => (rest, true),
            None => (lower.as_str(), false),
        };
        let base = match name {
            "ns" => Base::NS,
            "is" => Base::IS,
            "cns" => Base::CNS,
            "cis" => Base::CIS,
            _ => return Err(Error::BadParameter(format!("unknown stability concept '{s}'"))),
        };
        Ok(StabilityConcept { base, feasible })
    }
}

/// Which deviations are considered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Joined coalition within bounds.
    Permissible,
    /// Joined and abandoned coalitions within bounds.
    Feasible,
}

/// Destination of a deviation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// Existing coalition, by id in the partition's canonical order.
    Coalition(usize),
    /// A fresh singleton.
    New,
}

/// `agent` leaves its coalition for `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Deviation {
    pub agent: usize,
    pub target: Target,
}

impl fmt::Display for Deviation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.target {
            Target::Coalition(c) => write!(f, "{} -> coalition {}", self.agent + 1, c + 1),
            Target::New => write!(f, "{} -> new", self.agent + 1),
        }
    }
}

/// Outcome of [`verify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub concept: StabilityConcept,
    pub stable: bool,
    /// First blocking deviation in scan order, present iff not stable.
    pub witness: Option<Deviation>,
    /// Candidate deviations examined before the verdict.
    pub checked_deviations: usize,
}

/// Whether an agent may move out of a coalition of `from_size` into one of
/// `to_size` agents (zero for a new singleton) under `mode`.
#[inline]
pub fn move_allowed(from_size: usize, to_size: usize, b: SizeBounds, mode: Mode) -> bool {
    if to_size == 0 && from_size == 1 {
        // leaving {a} for {a} is not a deviation
        return false;
    }
    if !b.admits(to_size + 1) {
        return false;
    }
    match mode {
        Mode::Permissible => true,
        Mode::Feasible => from_size == 1 || b.admits(from_size - 1),
    }
}

/// Whether `agent`, a member of `from`, blocks by joining `to` (empty for a
/// new singleton) under `concept`. Size bounds are not checked here.
pub fn blocks<V: Valuation>(
    g: &Game<V>,
    agent: usize,
    from: &[usize],
    to: &[usize],
    concept: StabilityConcept,
) -> bool {
    let before = g.value_sum(agent, from);
    let after = g.value_sum(agent, to);
    if after <= before {
        return false;
    }
    if concept.welcome_consent() && to.iter().any(|&b| g.value(b, agent).is_negative()) {
        return false;
    }
    if concept.leave_consent()
        && from.iter().any(|&b| b != agent && g.value(b, agent).is_positive())
    {
        return false;
    }
    true
}

/// All deviations allowed by the bounds under `mode`, in scan order: agent
/// ascending, then target coalition ascending, new singleton last.
pub fn candidate_deviations(p: &Partition, b: SizeBounds, mode: Mode) -> Vec<Deviation> {
    let mut out = Vec::new();
    for agent in 0..p.n() {
        for_each_candidate(p, b, mode, agent, |d| {
            out.push(d);
            true
        });
    }
    out
}

fn for_each_candidate(
    p: &Partition,
    b: SizeBounds,
    mode: Mode,
    agent: usize,
    mut f: impl FnMut(Deviation) -> bool,
) -> bool {
    let own = p.coalition_id(agent);
    let from_size = p.coalition(own).len();
    for (id, c) in p.coalitions().iter().enumerate() {
        if id != own
            && move_allowed(from_size, c.len(), b, mode)
            && !f(Deviation { agent, target: Target::Coalition(id) })
        {
            return false;
        }
    }
    if move_allowed(from_size, 0, b, mode) {
        return f(Deviation { agent, target: Target::New });
    }
    true
}

/// Whether `d` blocks `p` under `concept`. Bounds are the caller's concern;
/// see [`candidate_deviations`].
pub fn blocking_check<V: Valuation>(
    g: &Game<V>,
    p: &Partition,
    d: Deviation,
    concept: StabilityConcept,
) -> bool {
    let from = p.coalition_of(d.agent);
    match d.target {
        Target::Coalition(id) => blocks(g, d.agent, from, p.coalition(id), concept),
        Target::New => blocks(g, d.agent, from, &[], concept),
    }
}

/// Partition after performing `d`.
pub fn apply(p: &Partition, d: Deviation) -> Partition {
    match d.target {
        Target::Coalition(id) => p.with_move(d.agent, Some(id)),
        Target::New => p.with_move(d.agent, None),
    }
}

/// Checks `p` against every candidate deviation for `concept`.
pub fn verify<V: Valuation>(
    g: &Game<V>,
    p: &Partition,
    b: SizeBounds,
    concept: StabilityConcept,
) -> Result<StabilityReport> {
    if p.n() != g.n() {
        return Err(Error::SizeMismatch { partition: p.n(), game: g.n() });
    }
    if !is_feasible_partition(p, b) {
        return Err(Error::NotFeasiblePartition { lower: b.lower(), upper: b.upper() });
    }
    let mut checked = 0;
    let mut witness = None;
    for agent in 0..p.n() {
        let done = !for_each_candidate(p, b, concept.mode(), agent, |d| {
            checked += 1;
            if blocking_check(g, p, d, concept) {
                witness = Some(d);
                false
            } else {
                true
            }
        });
        if done {
            break;
        }
    }
    Ok(StabilityReport { concept, stable: witness.is_none(), witness, checked_deviations: checked })
}

/// Verdicts for all eight concepts, in [`StabilityConcept::ALL`] order.
pub fn verify_all<V: Valuation>(
    g: &Game<V>,
    p: &Partition,
    b: SizeBounds,
) -> Result<[bool; 8]> {
    let mut out = [false; 8];
    for (slot, c) in out.iter_mut().zip(StabilityConcept::ALL) {
        *slot = verify(g, p, b, c)?.stable;
    }
    Ok(out)
}
