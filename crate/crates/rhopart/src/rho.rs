//! The constraint sequence rho: per-block establishment counts.
//!
//! A constraint sequence is a total function `k -> rho_k` for `k >= 1`,
//! stored as a finite prefix followed by a cycle that repeats forever.
//! The text grammar is `"p1,p2,...;c1,c2,..."` with the prefix before the
//! semicolon and the cycle after it: `"1,2;1"` is (1,2,1,1,...), `";1"`
//! is the all-ones sequence, `";2"` is (2,2,2,...).

use std::fmt;

use crate::error::{Error, Result};

/// Integer constraint sequence, entries >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstraintSeq {
    prefix: Vec<u64>,
    cycle: Vec<u64>,
}

impl ConstraintSeq {
    pub fn new(prefix: Vec<u64>, cycle: Vec<u64>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidParameter(
                "constraint sequence needs a nonempty cycle".into(),
            ));
        }
        if prefix.iter().chain(cycle.iter()).any(|&r| r == 0) {
            return Err(Error::InvalidParameter(
                "constraint sequence entries must be >= 1".into(),
            ));
        }
        Ok(ConstraintSeq { prefix, cycle })
    }

    /// The constant sequence (c, c, c, ...).
    pub fn constant(c: u64) -> Self {
        ConstraintSeq::new(Vec::new(), vec![c]).expect("constant >= 1")
    }

    pub fn ones() -> Self {
        ConstraintSeq::constant(1)
    }

    /// rho_k for 1-based k.
    #[inline]
    pub fn get(&self, k: usize) -> u64 {
        debug_assert!(k >= 1);
        let i = k - 1;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u64] {
        &self.cycle
    }

    /// Partial sums rho_1 + ... + rho_k.
    pub fn partial_sum(&self, k: usize) -> u64 {
        (1..=k).map(|j| self.get(j)).sum()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (prefix, cycle) = parse_two_lists(s, "rho", |tok, pos| {
            let v: u64 = tok.parse().map_err(|_| Error::Parse {
                what: "rho",
                position: pos,
                message: format!("expected a positive integer, got `{tok}`"),
            })?;
            if v == 0 {
                return Err(Error::Parse {
                    what: "rho",
                    position: pos,
                    message: "entries must be >= 1".into(),
                });
            }
            Ok(v)
        })?;
        ConstraintSeq::new(prefix, cycle)
    }
}

impl fmt::Display for ConstraintSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_two_lists(f, &self.prefix, &self.cycle)
    }
}

/// Real-valued constraint sequence, entries > 0. Only the continuous-time
/// process accepts these; everything acting on partitions requires the
/// integer [`ConstraintSeq`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealConstraintSeq {
    prefix: Vec<f64>,
    cycle: Vec<f64>,
}

impl RealConstraintSeq {
    pub fn new(prefix: Vec<f64>, cycle: Vec<f64>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::InvalidParameter(
                "constraint sequence needs a nonempty cycle".into(),
            ));
        }
        if prefix
            .iter()
            .chain(cycle.iter())
            .any(|&r| !(r > 0.0) || !r.is_finite())
        {
            return Err(Error::InvalidParameter(
                "real constraint sequence entries must be finite and > 0".into(),
            ));
        }
        Ok(RealConstraintSeq { prefix, cycle })
    }

    #[inline]
    pub fn get(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        let i = k - 1;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let (prefix, cycle) = parse_two_lists(s, "rho", |tok, pos| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                what: "rho",
                position: pos,
                message: format!("expected a number, got `{tok}`"),
            })
        })?;
        RealConstraintSeq::new(prefix, cycle)
    }
}

impl From<&ConstraintSeq> for RealConstraintSeq {
    fn from(rho: &ConstraintSeq) -> Self {
        RealConstraintSeq {
            prefix: rho.prefix.iter().map(|&r| r as f64).collect(),
            cycle: rho.cycle.iter().map(|&r| r as f64).collect(),
        }
    }
}

impl fmt::Display for RealConstraintSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_two_lists(f, &self.prefix, &self.cycle)
    }
}

fn write_two_lists<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    prefix: &[T],
    cycle: &[T],
) -> fmt::Result {
    for (i, p) in prefix.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{p}")?;
    }
    write!(f, ";")?;
    for (i, c) in cycle.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{c}")?;
    }
    Ok(())
}

/// Split `"a,b;c,d"` into the two comma lists, mapping each token through
/// `parse_tok` with its byte position for error reporting.
fn parse_two_lists<T>(
    s: &str,
    what: &'static str,
    parse_tok: impl Fn(&str, usize) -> Result<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    let semi = s.find(';').ok_or_else(|| Error::Parse {
        what,
        position: s.len(),
        message: "expected `;` separating prefix and cycle".into(),
    })?;
    let parse_list = |part: &str, offset: usize| -> Result<Vec<T>> {
        let mut out = Vec::new();
        if part.trim().is_empty() {
            return Ok(out);
        }
        let mut pos = offset;
        for tok in part.split(',') {
            let trimmed = tok.trim();
            let tok_pos = pos + (tok.len() - tok.trim_start().len());
            out.push(parse_tok(trimmed, tok_pos)?);
            pos += tok.len() + 1;
        }
        Ok(out)
    };
    let prefix = parse_list(&s[..semi], 0)?;
    let cycle = parse_list(&s[semi + 1..], semi + 1)?;
    if cycle.is_empty() {
        return Err(Error::Parse {
            what,
            position: s.len(),
            message: "cycle part must be nonempty".into(),
        });
    }
    Ok((prefix, cycle))
}
