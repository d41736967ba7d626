//! Stochastic constructions of constrained partitions: sequential growth,
//! the paintbox, the urn deletion kernel, the continuous-time embedding,
//! and chain records.

mod ctime;
mod deletion;
mod paintbox;
mod records;

pub use ctime::{sample_trajectory, Trajectory};
pub use deletion::{deletion_kernel, deletion_step};
pub use paintbox::{paintbox_sample, paintbox_transform, verify_record_structure, PaintboxTrace};
pub use records::{chain_record_count, chain_record_sample, ChainRecordSample};

use crate::error::Result;
use crate::freq::{FrequencyModel, HPath};
use crate::partition::SetPartition;
use crate::rho::ConstraintSeq;
use crate::stream::RandomStream;

/// Where the next element goes, per the growth rules. With the current
/// shape `(lambda_1, ..., lambda_l)` and tail masses H:
///
/// - blocks j < l are hit with probability `P_j = H_{j-1} - H_j`;
/// - while the last block is still establishing (`lambda_l < rho_l`) it
///   absorbs everything below `H_{l-1}`;
/// - once established, block l is hit with probability `P_l` and a new
///   block opens with probability `H_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Placement {
    /// 1-based index of an existing block.
    Join(usize),
    /// Open block l+1.
    Open,
}

/// Minimal growth state: block count and the fill of the last block. This
/// is all the sequential rules need, so the block-count experiments can
/// run the exact same recursion without materializing assignments.
#[derive(Debug, Clone)]
pub(crate) struct Growth {
    pub blocks: usize,
    pub last_fill: u64,
    pub rho_last: u64,
}

impl Growth {
    pub fn start(rho: &ConstraintSeq) -> Self {
        Growth {
            blocks: 1,
            last_fill: 1,
            rho_last: rho.get(1),
        }
    }

    #[inline]
    pub fn established(&self) -> bool {
        self.last_fill >= self.rho_last
    }

    /// Highest H index the next placement looks at.
    #[inline]
    pub fn needed_h(&self) -> usize {
        if self.established() {
            self.blocks
        } else {
            self.blocks - 1
        }
    }

    /// Decide the placement from one uniform draw; `h[j]` must hold H_j up
    /// to `needed_h()`.
    #[inline]
    pub fn place(&self, u: f64, h: &[f64]) -> Placement {
        let limit = self.needed_h();
        // First interval [H_j, H_{j-1}) containing u, scanning from the
        // top; typical elements land in the first few blocks.
        for (j, &hj) in h.iter().enumerate().take(limit + 1).skip(1) {
            if u >= hj {
                return Placement::Join(j);
            }
        }
        if self.established() {
            Placement::Open
        } else {
            Placement::Join(self.blocks)
        }
    }

    #[inline]
    pub fn apply(&mut self, p: Placement, rho: &ConstraintSeq) {
        match p {
            Placement::Join(j) => {
                if j == self.blocks {
                    self.last_fill += 1;
                }
            }
            Placement::Open => {
                self.blocks += 1;
                self.last_fill = 1;
                self.rho_last = rho.get(self.blocks);
            }
        }
    }
}

/// Extend a partition by one element according to the growth rules,
/// drawing tail masses from `path` as needed and the placement uniform
/// from `stream` (in that order).
pub fn sequential_extend(
    partition: &mut SetPartition,
    rho: &ConstraintSeq,
    path: &mut HPath,
    stream: &mut RandomStream,
) -> Result<()> {
    let g = Growth {
        blocks: partition.block_count(),
        last_fill: partition.last_block_size(),
        rho_last: rho.get(partition.block_count()),
    };
    let h = path.prefix(g.needed_h(), stream)?;
    let u = stream.uniform();
    match g.place(u, h) {
        Placement::Join(j) => partition.push_element(j),
        Placement::Open => partition.push_element(partition.block_count() + 1),
    }
    Ok(())
}

/// Sample a partition of `[n]` by drawing one tail-mass path lazily and
/// growing from ({1}).
pub fn sample_partition(
    model: &FrequencyModel,
    rho: &ConstraintSeq,
    n: usize,
    stream: &mut RandomStream,
) -> Result<SetPartition> {
    Ok(sample_partition_with_path(model, rho, n, stream)?.0)
}

/// Same as [`sample_partition`] but hands back the realized path, so
/// callers can compare the partition against its directing frequencies.
pub fn sample_partition_with_path(
    model: &FrequencyModel,
    rho: &ConstraintSeq,
    n: usize,
    stream: &mut RandomStream,
) -> Result<(SetPartition, HPath)> {
    let mut partition = SetPartition::singleton();
    let mut path = HPath::new(model);
    for _ in 1..n {
        sequential_extend(&mut partition, rho, &mut path, stream)?;
    }
    Ok((partition, path))
}

/// Number of blocks of a sampled partition of `[n]`, running the identical
/// growth recursion (same draws, same order) without storing assignments.
pub fn sample_block_count(
    model: &FrequencyModel,
    rho: &ConstraintSeq,
    n: usize,
    stream: &mut RandomStream,
) -> Result<usize> {
    let mut path = HPath::new(model);
    let mut g = Growth::start(rho);
    for _ in 1..n {
        let h = path.prefix(g.needed_h(), stream)?;
        let u = stream.uniform();
        let p = g.place(u, h);
        g.apply(p, rho);
    }
    Ok(g.blocks)
}
