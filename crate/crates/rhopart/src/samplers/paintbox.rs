//! The paintbox construction.
//!
//! Uniform points are screened against the realized tail masses: once
//! H_1..H_k have been used rho_1..rho_k times, the next rho_{k+1} uniforms
//! falling below H_k are replaced by H_{k+1}. Block k collects the indices
//! whose final value lands in [H_k, H_{k-1}). The replaced entries are
//! exactly the (weak) lower records of the transformed sequence, each tail
//! mass appearing rho_k times in a row — that record structure is a
//! deterministic invariant of every trace, not just a distributional one.

use crate::error::Result;
use crate::freq::{FrequencyModel, HPath};
use crate::partition::SetPartition;
use crate::rho::ConstraintSeq;
use crate::stream::RandomStream;

#[derive(Debug, Clone)]
pub struct PaintboxTrace {
    /// The transformed sequence: uniforms with the replaced entries
    /// overwritten by tail masses.
    pub values: Vec<f64>,
    /// Whether each position was replaced by a tail mass.
    pub replaced: Vec<bool>,
    /// Realized tail masses H_1.. that entered the sequence (the last one
    /// possibly fewer than its rho count of times).
    pub levels: Vec<f64>,
    pub partition: SetPartition,
}

/// Run the screening construction on externally supplied uniforms. The
/// path only draws when a replacement needs the next tail mass.
pub fn paintbox_transform(
    uniforms: &[f64],
    rho: &ConstraintSeq,
    path: &mut HPath,
    stream: &mut RandomStream,
) -> Result<PaintboxTrace> {
    let n = uniforms.len();
    let mut values = Vec::with_capacity(n);
    let mut replaced = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);

    let mut level = 0usize; // tail masses fully used so far
    let mut used = 0u64; // times H_{level+1} has been used
    for &u in uniforms {
        let threshold = path.h(level, stream)?;
        if u < threshold {
            // Screened: replace by the next tail mass.
            let h_next = path.h(level + 1, stream)?;
            values.push(h_next);
            replaced.push(true);
            ids.push((level + 2 - 1) as u32); // joins block level+1
            used += 1;
            if used == rho.get(level + 1) {
                level += 1;
                used = 0;
            }
        } else {
            values.push(u);
            replaced.push(false);
            // u >= H_level, so it lies in one of the completed intervals;
            // scan from the top.
            let h = path.prefix(level, stream)?;
            let mut block = level; // fallback: deepest completed interval
            for (j, &hj) in h.iter().enumerate().skip(1) {
                if u >= hj {
                    block = j;
                    break;
                }
            }
            ids.push(block as u32);
        }
    }
    let blocks_seen = level + usize::from(used > 0);
    let partition = SetPartition::from_block_ids(&ids)?;
    let levels = path.realized_tail()[..blocks_seen].to_vec();
    Ok(PaintboxTrace {
        values,
        replaced,
        levels,
        partition,
    })
}

/// Sample a paintbox partition of `[n]`: one uniform per position, drawn
/// lazily and interleaved with the tail-mass draws they trigger.
pub fn paintbox_sample(
    model: &FrequencyModel,
    rho: &ConstraintSeq,
    n: usize,
    stream: &mut RandomStream,
) -> Result<PaintboxTrace> {
    let mut path = HPath::new(model);
    let mut values = Vec::with_capacity(n);
    let mut replaced = Vec::with_capacity(n);
    let mut ids = Vec::with_capacity(n);

    let mut level = 0usize;
    let mut used = 0u64;
    for _ in 0..n {
        let u = stream.uniform();
        let threshold = path.h(level, stream)?;
        if u < threshold {
            let h_next = path.h(level + 1, stream)?;
            values.push(h_next);
            replaced.push(true);
            ids.push((level + 1) as u32);
            used += 1;
            if used == rho.get(level + 1) {
                level += 1;
                used = 0;
            }
        } else {
            values.push(u);
            replaced.push(false);
            let h = path.prefix(level, stream)?;
            let mut block = level;
            for (j, &hj) in h.iter().enumerate().skip(1) {
                if u >= hj {
                    block = j;
                    break;
                }
            }
            ids.push(block as u32);
        }
    }
    let blocks_seen = level + usize::from(used > 0);
    let partition = SetPartition::from_block_ids(&ids)?;
    let levels = path.realized_tail()[..blocks_seen].to_vec();
    Ok(PaintboxTrace {
        values,
        replaced,
        levels,
        partition,
    })
}

/// Check the deterministic record structure of a trace:
///
/// 1. the weak lower records of `values` are exactly the replaced
///    positions;
/// 2. the replaced values are the realized tail masses in order, the k-th
///    repeated rho_k times (the last possibly truncated);
/// 3. block k is exactly the set of positions whose value lies in
///    [H_k, H_{k-1}).
pub fn verify_record_structure(
    trace: &PaintboxTrace,
    rho: &ConstraintSeq,
) -> std::result::Result<(), String> {
    let n = trace.values.len();
    if trace.replaced.len() != n {
        return Err("values/replaced length mismatch".into());
    }
    // 1: weak lower records <=> replaced.
    let mut running_min = f64::INFINITY;
    for (i, (&v, &rep)) in trace.values.iter().zip(&trace.replaced).enumerate() {
        let is_record = v <= running_min;
        if is_record != rep {
            return Err(format!(
                "position {}: record={} but replaced={}",
                i + 1,
                is_record,
                rep
            ));
        }
        running_min = running_min.min(v);
    }
    // 2: replaced values = levels with multiplicities rho_1, rho_2, ...
    let mut expected = Vec::new();
    'outer: for (k, &h) in trace.levels.iter().enumerate() {
        for _ in 0..rho.get(k + 1) {
            expected.push(h);
            if expected.len() == trace.replaced.iter().filter(|&&r| r).count() {
                break 'outer;
            }
        }
    }
    let got: Vec<f64> = trace
        .values
        .iter()
        .zip(&trace.replaced)
        .filter(|(_, &r)| r)
        .map(|(&v, _)| v)
        .collect();
    if got != expected {
        return Err(format!(
            "replaced values {:?} do not match levels with rho multiplicities {:?}",
            got, expected
        ));
    }
    // 3: block membership. Replaced positions sit exactly at their level
    // (ties between equal levels are broken by establishment order);
    // unreplaced positions lie strictly inside their interval.
    for (i, &v) in trace.values.iter().enumerate() {
        let block = trace.partition.block_of(i + 1);
        if trace.replaced[i] {
            if v != trace.levels[block - 1] {
                return Err(format!(
                    "position {}: replaced value {v} is not level {} of block {block}",
                    i + 1,
                    trace.levels[block - 1]
                ));
            }
            continue;
        }
        let hi = if block == 1 {
            f64::INFINITY
        } else {
            trace.levels[block - 2]
        };
        let lo = trace.levels.get(block - 1).copied().unwrap_or(0.0);
        if !(v >= lo && v < hi) {
            return Err(format!(
                "position {}: value {v} not in [{lo}, {hi}) for block {block}",
                i + 1
            ));
        }
    }
    Ok(())
}
