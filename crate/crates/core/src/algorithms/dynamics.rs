use crate::error::{Error, Result};
use crate::model::{is_feasible_partition, Game, Partition, SizeBounds, Valuation};
use crate::prefs::social_welfare;
use crate::stability::{apply, verify, Deviation, StabilityConcept};

/// Result of [`symmetric_dynamics`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicsRun<V> {
    /// The NS* fixed point.
    pub partition: Partition,
    pub steps: usize,
    /// Social welfare before the first move and after each move.
    pub welfare: Vec<V>,
    pub moves: Vec<Deviation>,
}

/// Applies the first feasible Nash deviation, in the verifier's scan order,
/// until none is left.
///
/// In a symmetric game every such move raises social welfare by twice the
/// mover's gain, so the loop terminates at an NS* partition.
pub fn symmetric_dynamics<V: Valuation>(
    g: &Game<V>,
    b: SizeBounds,
    init: &Partition,
) -> Result<DynamicsRun<V>> {
    if !g.has_symmetric_values() {
        return Err(Error::NotSymmetric);
    }
    if init.n() != g.n() {
        return Err(Error::SizeMismatch { partition: init.n(), game: g.n() });
    }
    if !is_feasible_partition(init, b) {
        return Err(Error::NotFeasiblePartition { lower: b.lower(), upper: b.upper() });
    }
    let mut p = init.clone();
    let mut welfare = vec![social_welfare(g, &p)];
    let mut moves = Vec::new();
    while let Some(d) = verify(g, &p, b, StabilityConcept::NS_STAR)?.witness {
        p = apply(&p, d);
        welfare.push(social_welfare(g, &p));
        moves.push(d);
    }
    Ok(DynamicsRun { partition: p, steps: moves.len(), welfare, moves })
}
