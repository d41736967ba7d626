//! Finite constrained set partitions.
//!
//! A [`SetPartition`] holds a partition of `{1, ..., n}` with blocks
//! ordered by their least elements. The representation is a flat array of
//! block indices, one per element, which keeps Monte Carlo loops at
//! `n = 10^6` cache-friendly; block membership lists are derived views.
//!
//! The canonical text form lists blocks as sorted integer sets:
//! `{1,3,5}|{2,4,6}|{7,8}`.

use std::fmt;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::rho::ConstraintSeq;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    /// assignment[i] = 0-based block index of element i+1.
    assignment: Vec<u32>,
    /// Cached block sizes, in block order.
    sizes: Vec<u64>,
}

impl SetPartition {
    /// The one-element partition ({1}).
    pub fn singleton() -> Self {
        SetPartition {
            assignment: vec![0],
            sizes: vec![1],
        }
    }

    /// Build from 1-based block indices per element. Rejects inputs whose
    /// blocks are not min-ordered or have gaps.
    pub fn from_block_ids(ids: &[u32]) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::InvalidParameter(
                "a partition needs at least one element".into(),
            ));
        }
        let mut sizes: Vec<u64> = Vec::new();
        for (i, &id) in ids.iter().enumerate() {
            if id == 0 {
                return Err(Error::InvalidParameter(format!(
                    "block ids are 1-based; element {} has id 0",
                    i + 1
                )));
            }
            let b = (id - 1) as usize;
            if b == sizes.len() {
                sizes.push(1);
            } else if b < sizes.len() {
                sizes[b] += 1;
            } else {
                return Err(Error::InvalidParameter(format!(
                    "element {} opens block {} before block {} exists",
                    i + 1,
                    id,
                    sizes.len() + 1
                )));
            }
        }
        Ok(SetPartition {
            assignment: ids.iter().map(|&id| id - 1).collect(),
            sizes,
        })
    }

    /// Build from explicit blocks; elements must cover `1..=n` exactly once
    /// and the blocks must be ordered by least element.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.len()).sum();
        if n == 0 {
            return Err(Error::InvalidParameter("empty partition".into()));
        }
        let mut ids = vec![0u32; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidParameter(format!("block {} is empty", b + 1)));
            }
            for &e in block {
                if e == 0 || e > n {
                    return Err(Error::InvalidParameter(format!(
                        "element {e} outside 1..={n}"
                    )));
                }
                if ids[e - 1] != 0 {
                    return Err(Error::InvalidParameter(format!("element {e} repeated")));
                }
                ids[e - 1] = (b + 1) as u32;
            }
        }
        SetPartition::from_block_ids(&ids)
    }

    /// Ground-set size.
    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    /// Number of nonempty blocks.
    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    /// 1-based block index of a 1-based element.
    pub fn block_of(&self, element: usize) -> usize {
        self.assignment[element - 1] as usize + 1
    }

    pub(crate) fn last_block_size(&self) -> u64 {
        *self.sizes.last().expect("nonempty")
    }

    /// Raw 0-based assignment array; handy as a hash key.
    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    /// Append element n+1 to the given 1-based block (or open a new one
    /// when `block == block_count() + 1`).
    pub(crate) fn push_element(&mut self, block: usize) {
        debug_assert!(block >= 1 && block <= self.sizes.len() + 1);
        if block == self.sizes.len() + 1 {
            self.sizes.push(1);
        } else {
            self.sizes[block - 1] += 1;
        }
        self.assignment.push((block - 1) as u32);
    }

    /// Blocks as sorted element lists (1-based).
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .sizes
            .iter()
            .map(|&s| Vec::with_capacity(s as usize))
            .collect();
        for (i, &b) in self.assignment.iter().enumerate() {
            out[b as usize].push(i + 1);
        }
        out
    }

    /// The shape: block sizes in block order.
    pub fn shape(&self) -> Composition {
        Composition::new(self.sizes.clone()).expect("blocks are nonempty")
    }

    /// Both partition invariants in one O(n) pass: blocks are min-ordered
    /// with no gaps, and whenever block k+1 opens, block k already holds
    /// its `rho_k` establishing elements.
    pub fn is_valid(&self, rho: &ConstraintSeq) -> bool {
        let mut fills: Vec<u64> = Vec::with_capacity(self.sizes.len());
        for &b in &self.assignment {
            let b = b as usize;
            if b == fills.len() {
                if b > 0 && fills[b - 1] < rho.get(b) {
                    return false;
                }
                fills.push(1);
            } else if b < fills.len() {
                fills[b] += 1;
            } else {
                return false;
            }
        }
        true
    }

    /// Restriction to `{1, ..., m}`. Blocks vanish only from the tail, so
    /// the assignment prefix is already a well-formed partition.
    pub fn restrict(&self, m: usize) -> Result<SetPartition> {
        if m == 0 || m > self.n() {
            return Err(Error::InvalidParameter(format!(
                "restriction size {m} outside 1..={}",
                self.n()
            )));
        }
        let assignment: Vec<u32> = self.assignment[..m].to_vec();
        let mut sizes: Vec<u64> = Vec::new();
        for &b in &assignment {
            let b = b as usize;
            if b == sizes.len() {
                sizes.push(1);
            } else {
                sizes[b] += 1;
            }
        }
        Ok(SetPartition { assignment, sizes })
    }

    /// The formation sequence: for each block k holding at least `rho_k`
    /// elements, the `rho_k`-th least element of block k. For a valid
    /// partition the result is strictly increasing.
    pub fn formation_sequence(&self, rho: &ConstraintSeq) -> Vec<usize> {
        let mut fills = vec![0u64; self.sizes.len()];
        let mut out = Vec::new();
        for (i, &b) in self.assignment.iter().enumerate() {
            let b = b as usize;
            fills[b] += 1;
            if fills[b] == rho.get(b + 1) {
                out.push(i + 1);
            }
        }
        out
    }

    /// Parse the canonical text form `{1,3,5}|{2,4,6}|{7,8}`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut pos = 0usize;
        for chunk in s.split('|') {
            let trimmed = chunk.trim();
            let inner = trimmed
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| Error::Parse {
                    what: "partition",
                    position: pos,
                    message: format!("expected `{{...}}`, got `{trimmed}`"),
                })?;
            let mut block = Vec::new();
            for tok in inner.split(',') {
                let t = tok.trim();
                if t.is_empty() {
                    continue;
                }
                let e: usize = t.parse().map_err(|_| Error::Parse {
                    what: "partition",
                    position: pos,
                    message: format!("expected an element, got `{t}`"),
                })?;
                block.push(e);
            }
            if block.is_empty() {
                return Err(Error::Parse {
                    what: "partition",
                    position: pos,
                    message: "empty block".into(),
                });
            }
            blocks.push(block);
            pos += chunk.len() + 1;
        }
        SetPartition::from_blocks(&blocks)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, block) in self.blocks().iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            write!(f, "{{")?;
            for (i, e) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}
