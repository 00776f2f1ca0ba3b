//! Named games: the introductory pair example, the three nonexistence
//! families and the instance on which the earlier leader-based CIS algorithm
//! fails.
//!
//! Agent layouts:
//!
//! - `IntroPositive`/`IntroNegative { k }`: `a_i = 2(i-1)`, `b_i = 2(i-1) + 1`.
//! - `StarNoCis { lambda }`: leaves `a_1..a_{2λ-1}` are `0..2λ-1`, the
//!   center `c` is last.
//! - `CycleNoIsStar { n }`: `a_i = i - 1`.
//! - `PairsTriangleNoCnsStar { lambda }`: `a_i = 2(i-1)`, `b_i = 2(i-1) + 1`
//!   for `i < λ`, then `c_1, c_2, c_3`.
//! - `AzizFailure`: `a_1..a_4` are `0..4`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Game, Partition, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceFamily {
    /// `2k` agents, symmetric: `v(a_i, b_i) = -1`, every other pair `+1`.
    IntroPositive { k: usize },
    /// `2k` agents, symmetric, every pair `-1`.
    IntroNegative { k: usize },
    /// Simple symmetric star with `2λ - 1` leaves. No CIS `(λ, μ)`-partition
    /// for any `μ > λ >= 2`.
    StarNoCis { lambda: usize },
    /// Simple directed cycle `v_{a_i}(a_{i+1 mod n}) = 1`. No IS*
    /// `(λ, μ)`-partition when neither bound divides `n`.
    CycleNoIsStar { n: usize },
    /// `λ - 1` mutually hostile pairs plus a directed `-1` triangle. No CNS*
    /// `(λ, μ)`-partition for `μ > λ >= 2`.
    PairsTriangleNoCnsStar { lambda: usize },
    /// Fixed four-agent game.
    AzizFailure,
}

impl InstanceFamily {
    pub const NAMES: [&'static str; 6] = [
        "intro_positive",
        "intro_negative",
        "star_no_cis",
        "cycle_no_is_star",
        "pairs_triangle_no_cns_star",
        "aziz_failure",
    ];

    /// Builds a family from its name and `key=value` parameters.
    pub fn from_params(name: &str, params: &[(String, usize)]) -> Result<Self> {
        let get = |key: &str| {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|&(_, v)| v)
                .ok_or_else(|| Error::BadParameter(format!("family {name} needs parameter {key}")))
        };
        let allowed: &[&str] = match name {
            "intro_positive" | "intro_negative" => &["k"],
            "star_no_cis" | "pairs_triangle_no_cns_star" => &["lambda"],
            "cycle_no_is_star" => &["n"],
            "aziz_failure" => &[],
            _ => return Err(Error::BadParameter(format!("unknown family '{name}'"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::BadParameter(format!("family {name} takes no parameter {k}")));
        }
        Ok(match name {
            "intro_positive" => InstanceFamily::IntroPositive { k: get("k")? },
            "intro_negative" => InstanceFamily::IntroNegative { k: get("k")? },
            "star_no_cis" => InstanceFamily::StarNoCis { lambda: get("lambda")? },
            "cycle_no_is_star" => InstanceFamily::CycleNoIsStar { n: get("n")? },
            "pairs_triangle_no_cns_star" => {
                InstanceFamily::PairsTriangleNoCnsStar { lambda: get("lambda")? }
            }
            _ => InstanceFamily::AzizFailure,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            InstanceFamily::IntroPositive { .. } => "intro_positive",
            InstanceFamily::IntroNegative { .. } => "intro_negative",
            InstanceFamily::StarNoCis { .. } => "star_no_cis",
            InstanceFamily::CycleNoIsStar { .. } => "cycle_no_is_star",
            InstanceFamily::PairsTriangleNoCnsStar { .. } => "pairs_triangle_no_cns_star",
            InstanceFamily::AzizFailure => "aziz_failure",
        }
    }
}

impl fmt::Display for InstanceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match self {
            InstanceFamily::IntroPositive { k } | InstanceFamily::IntroNegative { k } => {
                write!(f, " k={k}")
            }
            InstanceFamily::StarNoCis { lambda }
            | InstanceFamily::PairsTriangleNoCnsStar { lambda } => write!(f, " lambda={lambda}"),
            InstanceFamily::CycleNoIsStar { n } => write!(f, " n={n}"),
            InstanceFamily::AzizFailure => Ok(()),
        }
    }
}

impl FromStr for InstanceFamily {
    type Err = Error;

    /// Parses `name [key=value]...`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let name = parts.next().ok_or_else(|| Error::BadParameter("empty family".into()))?;
        let mut params = Vec::new();
        for kv in parts {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::BadParameter(format!("expected key=value, got '{kv}'")))?;
            let v = v
                .parse()
                .map_err(|_| Error::BadParameter(format!("parameter {k} must be a count")))?;
            params.push((k.to_string(), v));
        }
        Self::from_params(name, &params)
    }
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::BadParameter(msg.to_string()))
    }
}

/// The valuation table of a named family.
pub fn make_instance<V: Valuation>(f: &InstanceFamily) -> Result<Game<V>> {
    let int = V::from_int;
    match *f {
        InstanceFamily::IntroPositive { k } => {
            need(k >= 1, "intro_positive needs k >= 1")?;
            Game::from_fn(2 * k, true, |a, b| if a / 2 == b / 2 { int(-1) } else { int(1) })
        }
        InstanceFamily::IntroNegative { k } => {
            need(k >= 1, "intro_negative needs k >= 1")?;
            Game::from_fn(2 * k, true, |_, _| int(-1))
        }
        InstanceFamily::StarNoCis { lambda } => {
            need(lambda >= 2, "star_no_cis needs lambda >= 2")?;
            let center = 2 * lambda - 1;
            Game::from_fn(2 * lambda, true, |a, b| {
                if a == center || b == center {
                    int(1)
                } else {
                    int(0)
                }
            })
        }
        InstanceFamily::CycleNoIsStar { n } => {
            need(n >= 2, "cycle_no_is_star needs n >= 2")?;
            Game::from_fn(n, false, |a, b| if b == (a + 1) % n { int(1) } else { int(0) })
        }
        InstanceFamily::PairsTriangleNoCnsStar { lambda } => {
            need(lambda >= 2, "pairs_triangle_no_cns_star needs lambda >= 2")?;
            let c = 2 * (lambda - 1);
            Game::from_fn(c + 3, false, |a, b| {
                if a < c && b < c {
                    if a / 2 == b / 2 {
                        int(-1)
                    } else {
                        int(0)
                    }
                } else if a >= c && b >= c && b - c == (a - c + 1) % 3 {
                    int(-1)
                } else {
                    int(0)
                }
            })
        }
        InstanceFamily::AzizFailure => Game::from_entries(
            4,
            false,
            [
                (0, 1, int(-1)),
                (0, 3, int(-1)),
                (2, 0, int(3)),
                (2, 1, int(2)),
                (2, 3, int(2)),
                (3, 1, int(1)),
            ],
        ),
    }
}

/// The pairing `{{a_i, b_i}}` of the introductory games.
pub fn intro_partition(k: usize) -> Partition {
    Partition::new(2 * k, (0..k).map(|i| vec![2 * i, 2 * i + 1])).expect("pairs partition")
}
