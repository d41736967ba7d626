//! Chain records of uniform samples on the product-ordered cube [0,1]^d.
//!
//! A chain record occurs at index 1, and at any later index whose point is
//! strictly below the previous record in every coordinate. Writing D_k for
//! the open lower set of the k-th record, block k of the induced partition
//! holds the indices whose points lie in D_{k-1} but not in D_k (the k-th
//! record itself included, since nothing is below itself). This is the
//! all-ones constraint case, with tail masses H_k = volume(D_k) = the
//! coordinate product of the k-th record.

use crate::error::{Error, Result};
use crate::partition::SetPartition;
use crate::stream::RandomStream;

#[derive(Debug, Clone)]
pub struct ChainRecordSample {
    /// The record points, in order of occurrence.
    pub records: Vec<Vec<f64>>,
    /// 1-based indices at which the records occurred.
    pub record_indices: Vec<usize>,
    /// Tail masses: coordinate products of the records.
    pub tail_masses: Vec<f64>,
    pub partition: SetPartition,
}

#[inline]
fn strictly_below(p: &[f64], q: &[f64]) -> bool {
    p.iter().zip(q).all(|(a, b)| a < b)
}

/// Sample n points uniformly on [0,1]^d and build the chain-record
/// partition.
pub fn chain_record_sample(
    d: usize,
    n: usize,
    stream: &mut RandomStream,
) -> Result<ChainRecordSample> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter(
            "chain records need d >= 1 and n >= 1".into(),
        ));
    }
    let mut records: Vec<Vec<f64>> = Vec::new();
    let mut record_indices = Vec::new();
    let mut ids = Vec::with_capacity(n);
    let mut point = vec![0.0f64; d];
    for j in 1..=n {
        for x in point.iter_mut() {
            *x = stream.uniform();
        }
        // Records are nested, so {k : point < record_k} is a prefix; the
        // point belongs one level below the deepest record above it.
        let mut depth = 0usize;
        while depth < records.len() && strictly_below(&point, &records[depth]) {
            depth += 1;
        }
        if depth == records.len() {
            records.push(point.clone());
            record_indices.push(j);
        }
        ids.push((depth + 1) as u32);
    }
    let tail_masses = records.iter().map(|r| r.iter().product()).collect();
    let partition = SetPartition::from_block_ids(&ids)?;
    Ok(ChainRecordSample {
        records,
        record_indices,
        tail_masses,
        partition,
    })
}

/// Number of chain records among n uniform points on [0,1]^d, keeping only
/// the current record.
pub fn chain_record_count(d: usize, n: usize, stream: &mut RandomStream) -> Result<usize> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter(
            "chain records need d >= 1 and n >= 1".into(),
        ));
    }
    let mut record = vec![0.0f64; d];
    for x in record.iter_mut() {
        *x = stream.uniform();
    }
    let mut count = 1usize;
    let mut point = vec![0.0f64; d];
    for _ in 1..n {
        let mut below = true;
        for x in point.iter_mut() {
            *x = stream.uniform();
        }
        for (a, b) in point.iter().zip(&record) {
            if a >= b {
                below = false;
                break;
            }
        }
        if below {
            record.copy_from_slice(&point);
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rho::ConstraintSeq;

    #[test]
    fn index_one_is_always_a_record() {
        let master = RandomStream::new(0xBB);
        for rep in 0..50u64 {
            let mut s = master.substream(rep);
            let sample = chain_record_sample(3, 30, &mut s).unwrap();
            assert_eq!(sample.record_indices[0], 1);
            assert_eq!(sample.partition.block_of(1), 1);
            assert!(sample.partition.is_valid(&ConstraintSeq::ones()));
            // Records strictly decrease coordinatewise; tail masses too.
            for w in sample.records.windows(2) {
                assert!(strictly_below(&w[1], &w[0]));
            }
            for w in sample.tail_masses.windows(2) {
                assert!(w[1] < w[0]);
            }
            // Block k's first element is the k-th record index.
            let blocks = sample.partition.blocks();
            for (k, idx) in sample.record_indices.iter().enumerate() {
                assert_eq!(blocks[k][0], *idx);
            }
        }
    }

    #[test]
    fn dimension_one_reduces_to_lower_records() {
        // Replay the same stream: records of the sample must match a
        // direct lower-record scan of the same uniforms.
        let mut s1 = RandomStream::new(0x1D);
        let mut s2 = RandomStream::new(0x1D);
        let n = 500;
        let sample = chain_record_sample(1, n, &mut s1).unwrap();
        let us: Vec<f64> = (0..n).map(|_| s2.uniform()).collect();
        let mut min = f64::INFINITY;
        let mut indices = Vec::new();
        for (j, &u) in us.iter().enumerate() {
            if u < min {
                min = u;
                indices.push(j + 1);
            }
        }
        assert_eq!(sample.record_indices, indices);
        // Tail masses are the record values themselves in d = 1.
        let values: Vec<f64> = indices.iter().map(|&j| us[j - 1]).collect();
        assert_eq!(sample.tail_masses, values);
    }

    #[test]
    fn count_agrees_with_full_sample() {
        let master = RandomStream::new(0xC0);
        for rep in 0..30u64 {
            let mut s1 = master.substream(rep);
            let mut s2 = master.substream(rep);
            let sample = chain_record_sample(2, 400, &mut s1).unwrap();
            let count = chain_record_count(2, 400, &mut s2).unwrap();
            assert_eq!(count, sample.records.len());
            assert_eq!(count, sample.partition.block_count());
        }
    }

    #[test]
    fn first_tail_mass_follows_product_of_uniforms() {
        // -log H_1 for d = 2 is a sum of two unit exponentials; check the
        // distribution with a Kolmogorov-Smirnov distance against
        // F(h) = h - h log h.
        let master = RandomStream::new(0x4B5);
        let reps = 200_000usize;
        let mut values = Vec::with_capacity(reps);
        for rep in 0..reps {
            let mut s = master.substream(rep as u64);
            let sample = chain_record_sample(2, 1, &mut s).unwrap();
            values.push(sample.tail_masses[0]);
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks = 0.0f64;
        for (i, &h) in values.iter().enumerate() {
            let cdf = h - h * h.ln();
            let emp_hi = (i + 1) as f64 / reps as f64;
            let emp_lo = i as f64 / reps as f64;
            ks = ks.max((cdf - emp_lo).abs()).max((cdf - emp_hi).abs());
        }
        // 4 / sqrt(reps) is far above the ~1.36/sqrt(reps) critical value.
        assert!(ks < 4.0 / (reps as f64).sqrt(), "ks = {ks}");
    }
}
