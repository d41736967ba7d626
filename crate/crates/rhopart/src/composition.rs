//! Compositions: ordered lists of positive parts.
//!
//! Together with a constraint sequence these model the shapes of
//! constrained partitions: a composition is *constrained* when every
//! non-final part meets its establishment count, `lambda_j >= rho_j` for
//! `j < l`. The final part is always exempt (it may still be filling up).

use std::fmt;

use crate::error::{Error, Result};
use crate::rho::ConstraintSeq;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<u64>,
}

impl Composition {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidParameter(
                "composition parts must be positive".into(),
            ));
        }
        Ok(Composition { parts })
    }

    /// The empty composition of 0. It arises as the deletion-kernel image
    /// of the one-element composition.
    pub fn empty() -> Self {
        Composition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of parts (written `l` in formulas).
    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts, `|lambda|`.
    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Tail sums `Lambda_j = lambda_j + ... + lambda_l`, 0-indexed by part.
    /// Strictly decreasing in `j`.
    pub fn tail_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.parts.len()];
        let mut acc = 0u64;
        for j in (0..self.parts.len()).rev() {
            acc += self.parts[j];
            sums[j] = acc;
        }
        sums
    }

    /// `lambda_j >= rho_j` for every non-final part.
    pub fn is_constrained(&self, rho: &ConstraintSeq) -> bool {
        self.parts
            .iter()
            .enumerate()
            .take(self.parts.len().saturating_sub(1))
            .all(|(j, &p)| p >= rho.get(j + 1))
    }

    pub(crate) fn check_constrained(&self, rho: &ConstraintSeq) -> Result<()> {
        if self.is_constrained(rho) {
            Ok(())
        } else {
            Err(Error::NotConstrained {
                composition: self.to_string(),
                rho: rho.to_string(),
            })
        }
    }

    /// Parse `"3,1,2"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        if s.trim().is_empty() {
            return Ok(Composition::empty());
        }
        let mut pos = 0usize;
        for tok in s.split(',') {
            let trimmed = tok.trim();
            let v: u64 = trimmed.parse().map_err(|_| Error::Parse {
                what: "composition",
                position: pos,
                message: format!("expected a positive integer part, got `{trimmed}`"),
            })?;
            if v == 0 {
                return Err(Error::Parse {
                    what: "composition",
                    position: pos,
                    message: "parts must be positive".into(),
                });
            }
            parts.push(v);
            pos += tok.len() + 1;
        }
        Ok(Composition { parts })
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl From<&[u64]> for Composition {
    fn from(parts: &[u64]) -> Self {
        Composition::new(parts.to_vec()).expect("positive parts")
    }
}

/// All constrained compositions of `n`, in lexicographic part order.
pub fn constrained_compositions(n: u64, rho: &ConstraintSeq) -> Vec<Composition> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fill(n, 1, rho, &mut stack, &mut out);
    out
}

fn fill(rest: u64, j: usize, rho: &ConstraintSeq, stack: &mut Vec<u64>, out: &mut Vec<Composition>) {
    if rest == 0 {
        if !stack.is_empty() {
            out.push(Composition {
                parts: stack.clone(),
            });
        }
        return;
    }
    // Close here: the final part is exempt from the constraint.
    stack.push(rest);
    out.push(Composition {
        parts: stack.clone(),
    });
    stack.pop();
    // Or place a constrained non-final part and keep going.
    for p in rho.get(j)..rest {
        stack.push(p);
        fill(rest - p, j + 1, rho, stack, out);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(parts: &[u64]) -> Composition {
        Composition::from(parts)
    }

    #[test]
    fn constraint_checks_non_final_parts_only() {
        let ones = ConstraintSeq::ones();
        assert!(comp(&[3, 1, 2]).is_constrained(&ones));

        // Last part exempt: (1,2) is fine for rho = (1,2,...).
        let rho = ConstraintSeq::parse("1,2;1").unwrap();
        assert!(comp(&[1, 2]).is_constrained(&rho));
        // Direct violation in the middle.
        assert!(!comp(&[1, 1, 5]).is_constrained(&rho));
        // Single part is always constrained.
        assert!(comp(&[1]).is_constrained(&rho));
        assert!(Composition::empty().is_constrained(&rho));
    }

    #[test]
    fn tail_sums_strictly_decrease() {
        let c = comp(&[3, 3, 2]);
        assert_eq!(c.tail_sums(), vec![8, 5, 2]);
        assert_eq!(c.total(), 8);
        let sums = c.tail_sums();
        assert!(sums.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn enumeration_counts_match_direct_recursion() {
        // For rho = (1,1,...) there are 2^(n-1) compositions of n.
        let ones = ConstraintSeq::ones();
        for n in 1..=8u64 {
            let all = constrained_compositions(n, &ones);
            assert_eq!(all.len(), 1usize << (n - 1));
            assert!(all.iter().all(|c| c.total() == n));
            assert!(all.iter().all(|c| c.is_constrained(&ones)));
        }
        // Constrained compositions of 3 for rho = (1,2,1,...):
        // (3), (2,1), (1,2) but not (1,1,1).
        let rho = ConstraintSeq::parse("1,2;1").unwrap();
        let all = constrained_compositions(3, &rho);
        assert_eq!(all.len(), 3);
        assert!(!all.contains(&comp(&[1, 1, 1])));
    }

    #[test]
    fn parse_display_round_trip() {
        for s in ["3,1,2", "1", "2,2,2"] {
            assert_eq!(Composition::parse(s).unwrap().to_string(), s);
        }
        assert!(Composition::parse("1,0").is_err());
        assert!(Composition::parse("a").is_err());
    }
}
