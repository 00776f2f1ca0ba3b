//! Line-oriented text formats.
//!
//! Agent, element, set and vertex ids are one-based in every format. Blank
//! lines and `#` comments are ignored.
//!
//! ```text
//! ashg 4 symmetric      # game: header, then nonzero values
//! v 1 2 3
//! ```
//!
//! ```text
//! 1 3                   # partition: one coalition per line
//! 2 4
//! ```
//!
//! ```text
//! x3c 6                 # exact cover instance: ground set size, then sets
//! set 1 2 3
//! ```
//!
//! ```text
//! mmm 4 2               # matching instance: side size and budget, then
//! edge 1 5              # edges from side 1..n to side n+1..2n
//! ```
//!
//! ```text
//! cover 1 3             # certificate: set indices of an exact cover,
//! edge 2 5              # or the edges of a matching
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Game, Partition, Valuation};
use crate::reductions::{Certificate, MMMInstance, X3CInstance};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty lines with comments stripped, paired with one-based line
/// numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn number<T: FromStr>(line: usize, word: &str, what: &str) -> Result<T> {
    word.parse().map_err(|_| err(line, format!("cannot read {what} from '{word}'")))
}

/// One-based id in `1..=n`, returned zero-based.
fn id(line: usize, word: &str, n: usize, what: &str) -> Result<usize> {
    let x: usize = number(line, word, what)?;
    if x == 0 || x > n {
        return Err(err(line, format!("{what} {x} is outside 1..={n}")));
    }
    Ok(x - 1)
}

fn arity(line: usize, words: &[&str], expected: usize) -> Result<()> {
    if words.len() != expected {
        return Err(err(
            line,
            format!("'{}' takes {} fields, found {}", words[0], expected - 1, words.len() - 1),
        ));
    }
    Ok(())
}

#[allow(clippy::type_complexity)]
fn header<'a>(text: &'a str, keyword: &str) -> Result<(usize, Vec<&'a str>, impl Iterator<Item = (usize, Vec<&'a str>)>)> {
    let mut it = lines(text);
    let (line, words) = it.next().ok_or_else(|| err(1, format!("missing '{keyword}' header")))?;
    if words[0] != keyword {
        return Err(err(line, format!("expected '{keyword}' header, found '{}'", words[0])));
    }
    Ok((line, words, it))
}

/// Parses a game file.
///
/// In a symmetric file every line sets both directions. Repeating a pair is
/// an error, except that the mirror of a pair may be restated with the same
/// value in a symmetric file.
pub fn parse_game<V: Valuation + FromStr>(text: &str) -> Result<Game<V>> {
    let (line, words, rest) = header(text, "ashg")?;
    let symmetric = match words.len() {
        2 => false,
        3 if words[2] == "symmetric" => true,
        _ => return Err(err(line, "header must be 'ashg <n> [symmetric]'")),
    };
    let n: usize = number(line, words[1], "agent count")?;
    let mut seen: BTreeMap<(usize, usize), V> = BTreeMap::new();
    for (line, words) in rest {
        if words[0] != "v" {
            return Err(err(line, format!("unknown record '{}'", words[0])));
        }
        arity(line, &words, 4)?;
        let a = id(line, words[1], n, "agent")?;
        let b = id(line, words[2], n, "agent")?;
        if a == b {
            return Err(err(line, format!("agent {} cannot value itself", a + 1)));
        }
        let w: V = number(line, words[3], "value")?;
        if seen.contains_key(&(a, b)) {
            return Err(err(line, format!("duplicate value for ({}, {})", a + 1, b + 1)));
        }
        if symmetric {
            if let Some(&old) = seen.get(&(b, a)) {
                if old != w {
                    return Err(err(
                        line,
                        format!("symmetry conflict: v({}, {}) = {old} but v({}, {}) = {w}", b + 1, a + 1, a + 1, b + 1),
                    ));
                }
                continue;
            }
        }
        seen.insert((a, b), w);
    }
    Game::from_entries(n, symmetric, seen.into_iter().map(|((a, b), w)| (a, b, w)))
}

/// Canonical text of a game: header plus every nonzero value, row by row.
/// Symmetric games list each unordered pair once.
pub fn write_game<V: Valuation>(g: &Game<V>) -> String {
    let mut out = format!("ashg {}{}\n", g.n(), if g.is_symmetric() { " symmetric" } else { "" });
    for (a, b, w) in g.entries() {
        if !w.is_zero() && (!g.is_symmetric() || a < b) {
            writeln!(out, "v {} {} {w}", a + 1, b + 1).unwrap();
        }
    }
    out
}

/// Parses a partition of agents `1..=n`.
pub fn parse_partition(text: &str, n: usize) -> Result<Partition> {
    let mut cs = Vec::new();
    let mut owner = vec![None; n];
    for (line, words) in lines(text) {
        let mut c = Vec::with_capacity(words.len());
        for w in words {
            let a = id(line, w, n, "agent")?;
            if let Some(prev) = owner[a].replace(line) {
                return Err(err(line, format!("agent {} already placed on line {prev}", a + 1)));
            }
            c.push(a);
        }
        cs.push(c);
    }
    if let Some(a) = owner.iter().position(Option::is_none) {
        return Err(Error::MissingAgent(a + 1));
    }
    Partition::new(n, cs)
}

/// Canonical text of a partition: one coalition per line, ascending ids.
pub fn write_partition(p: &Partition) -> String {
    let mut out = String::new();
    for c in p.coalitions() {
        let ids: Vec<String> = c.iter().map(|a| (a + 1).to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_x3c(text: &str) -> Result<X3CInstance> {
    let (line, words, rest) = header(text, "x3c")?;
    arity(line, &words, 2)?;
    let r: usize = number(line, words[1], "ground set size")?;
    let mut sets = Vec::new();
    for (line, words) in rest {
        if words[0] != "set" {
            return Err(err(line, format!("unknown record '{}'", words[0])));
        }
        arity(line, &words, 4)?;
        let s = [
            id(line, words[1], r, "element")?,
            id(line, words[2], r, "element")?,
            id(line, words[3], r, "element")?,
        ];
        if s[0] == s[1] || s[1] == s[2] || s[0] == s[2] {
            return Err(err(line, "a set needs three distinct elements"));
        }
        sets.push(s);
    }
    X3CInstance::new(r, sets).map_err(|e| err(line, e.to_string()))
}

pub fn write_x3c(inst: &X3CInstance) -> String {
    let mut out = format!("x3c {}\n", inst.ground_size());
    for s in inst.sets() {
        writeln!(out, "set {} {} {}", s[0] + 1, s[1] + 1, s[2] + 1).unwrap();
    }
    out
}

pub fn parse_mmm(text: &str) -> Result<MMMInstance> {
    let (line, words, rest) = header(text, "mmm")?;
    arity(line, &words, 3)?;
    let n: usize = number(line, words[1], "side size")?;
    let k: usize = number(line, words[2], "budget")?;
    let mut edges = Vec::new();
    for (line, words) in rest {
        if words[0] != "edge" {
            return Err(err(line, format!("unknown record '{}'", words[0])));
        }
        arity(line, &words, 3)?;
        edges.push(edge(line, &words, n)?);
    }
    MMMInstance::new(n, edges, k).map_err(|e| err(line, e.to_string()))
}

fn edge(line: usize, words: &[&str], n: usize) -> Result<(usize, usize)> {
    let a = id(line, words[1], 2 * n, "vertex")?;
    let b = id(line, words[2], 2 * n, "vertex")?;
    if a >= n || b < n {
        return Err(err(line, format!("edge must join 1..={n} to {}..={}", n + 1, 2 * n)));
    }
    Ok((a, b))
}

pub fn write_mmm(inst: &MMMInstance) -> String {
    let mut out = format!("mmm {} {}\n", inst.n(), inst.k());
    for &(a, b) in inst.edges() {
        writeln!(out, "edge {} {}", a + 1, b + 1).unwrap();
    }
    out
}

/// A source instance of either kind, told apart by its header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceInstance {
    X3C(X3CInstance),
    MMM(MMMInstance),
}

pub fn parse_source(text: &str) -> Result<SourceInstance> {
    match lines(text).next() {
        Some((_, w)) if w[0] == "x3c" => parse_x3c(text).map(SourceInstance::X3C),
        Some((_, w)) if w[0] == "mmm" => parse_mmm(text).map(SourceInstance::MMM),
        Some((line, w)) => Err(err(line, format!("expected 'x3c' or 'mmm' header, found '{}'", w[0]))),
        None => Err(err(1, "empty instance file")),
    }
}

/// Parses a certificate. `cover` lines accumulate set indices (`1..=sets`);
/// `edge` lines accumulate matching edges for a graph with `n` vertices per
/// side. Kinds cannot be mixed.
pub fn parse_certificate(text: &str, source: &SourceInstance) -> Result<Certificate> {
    let mut cover = Vec::new();
    let mut matching = Vec::new();
    for (line, words) in lines(text) {
        match (words[0], source) {
            ("cover", SourceInstance::X3C(inst)) => {
                for w in &words[1..] {
                    cover.push(id(line, w, inst.sets().len(), "set index")?);
                }
            }
            ("edge", SourceInstance::MMM(inst)) => {
                arity(line, &words, 3)?;
                matching.push(edge(line, &words, inst.n())?);
            }
            (other, _) => {
                return Err(err(line, format!("record '{other}' does not fit this instance")));
            }
        }
    }
    Ok(match source {
        SourceInstance::X3C(_) => Certificate::Cover(cover),
        SourceInstance::MMM(_) => Certificate::Matching(matching),
    })
}

pub fn write_certificate(c: &Certificate) -> String {
    match c {
        Certificate::Cover(sets) => {
            let ids: Vec<String> = sets.iter().map(|s| (s + 1).to_string()).collect();
            format!("cover {}\n", ids.join(" "))
        }
        Certificate::Matching(m) => m.iter().map(|(a, b)| format!("edge {} {}\n", a + 1, b + 1)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{make_instance, InstanceFamily};

    #[test]
    fn single_directed_edge() {
        let g: Game<i64> = parse_game("ashg 2\nv 1 2 5\n").unwrap();
        assert_eq!(g.value(0, 1), 5);
        assert_eq!(g.value(1, 0), 0);
        assert!(!g.is_symmetric());
    }

    #[test]
    fn symmetry_conflicts_and_duplicates() {
        let e = parse_game::<i64>("ashg 2 symmetric\nv 1 2 3\nv 2 1 4\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        let g = parse_game::<i64>("ashg 2 symmetric\nv 1 2 3\nv 2 1 3\n").unwrap();
        assert_eq!(g.value(1, 0), 3);
        assert!(parse_game::<i64>("ashg 2\nv 1 2 3\nv 1 2 3\n").is_err());
    }

    #[test]
    fn malformed_games() {
        for bad in ["", "game 2", "ashg x", "ashg 2 sym", "ashg 2\nv 1 3 1", "ashg 2\nv 1 1 1", "ashg 2\nv 1 2", "ashg 2\nw 1 2 1", "ashg 2\nv 1 2 x"] {
            assert!(parse_game::<i64>(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let g: Game<i64> = parse_game("# a game\n\nashg 3 # three agents\nv 2 3 -1 # dislike\n").unwrap();
        assert_eq!(g.value(1, 2), -1);
    }

    #[test]
    fn game_round_trip() {
        for f in [InstanceFamily::AzizFailure, InstanceFamily::StarNoCis { lambda: 3 }, InstanceFamily::IntroNegative { k: 2 }] {
            let g: Game<i64> = make_instance(&f).unwrap();
            let text = write_game(&g);
            assert_eq!(parse_game::<i64>(&text).unwrap(), g);
            assert_eq!(write_game(&parse_game::<i64>(&text).unwrap()), text);
        }
    }

    #[test]
    fn rational_values() {
        let g: Game<num_rational::Rational64> = parse_game("ashg 2\nv 1 2 3/2\n").unwrap();
        assert_eq!(g.value(0, 1), num_rational::Rational64::new(3, 2));
        assert_eq!(write_game(&g), "ashg 2\nv 1 2 3/2\n");
    }

    #[test]
    fn partitions() {
        let p = parse_partition("3 1\n2\n", 3).unwrap();
        assert_eq!(p, Partition::new(3, vec![vec![0, 2], vec![1]]).unwrap());
        assert_eq!(write_partition(&p), "1 3\n2\n");
        assert!(parse_partition("1 2\n", 3).is_err());
        assert!(parse_partition("1 2\n2 3\n", 3).is_err());
        assert!(parse_partition("1 4\n2 3\n", 3).is_err());
    }

    #[test]
    fn sources_and_certificates() {
        let text = "x3c 6\nset 1 2 3\nset 2 3 4\nset 4 5 6\n";
        let src = parse_source(text).unwrap();
        let SourceInstance::X3C(inst) = &src else { panic!() };
        assert_eq!(write_x3c(inst), text);
        let cert = parse_certificate("cover 1 3\n", &src).unwrap();
        assert_eq!(cert, Certificate::Cover(vec![0, 2]));
        assert_eq!(write_certificate(&cert), "cover 1 3\n");
        assert!(parse_x3c("x3c 5\n").is_err());
        assert!(parse_x3c("x3c 3\nset 1 1 2\n").is_err());

        let text = "mmm 2 1\nedge 1 3\nedge 2 4\n";
        let src = parse_source(text).unwrap();
        let SourceInstance::MMM(inst) = &src else { panic!() };
        assert_eq!(write_mmm(inst), text);
        let cert = parse_certificate("edge 1 3\n", &src).unwrap();
        assert_eq!(cert, Certificate::Matching(vec![(0, 2)]));
        assert_eq!(write_certificate(&cert), "edge 1 3\n");
        assert!(parse_certificate("cover 1\n", &src).is_err());
        assert!(parse_mmm("mmm 2 1\nedge 1 2\n").is_err());
        assert!(parse_mmm("mmm 2 3\n").is_err());
        assert!(parse_source("foo 1\n").is_err());
    }
}
