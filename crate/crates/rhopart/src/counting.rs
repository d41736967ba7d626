//! Exact counting of constrained partitions and a brute-force enumeration
//! oracle.
//!
//! All counts use overflow-checked 128-bit integers. The enumeration is
//! deliberately naive (generate every min-ordered partition, filter by the
//! validity check) so it can serve as an independent oracle for the
//! closed-form counts.

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::partition::SetPartition;
use crate::rho::ConstraintSeq;

/// Ground-set guard for [`enumerate_partitions`]; Bell(12) is ~4.2e6.
pub const ENUMERATION_LIMIT: u64 = 12;

/// Plain binomial coefficient, overflow-checked.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::Overflow(format!("binomial({n},{k})")))?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// Binomial coefficient with the negative-argument convention used by the
/// extension counts: `C(-i,-j) = 1` iff `i = j` (else 0) for `i,j > 0`, and
/// any mixed-sign pair is 0.
pub fn binomial_ext(top: i128, bottom: i128) -> Result<u128> {
    if top >= 0 && bottom >= 0 {
        binomial(top as u64, bottom as u64)
    } else if top < 0 && bottom < 0 {
        Ok(u128::from(top == bottom))
    } else {
        Ok(0)
    }
}

/// Number of constrained partitions of `[n]` with the given shape:
/// the product over non-final parts of `C(Lambda_j - rho_j, lambda_j - rho_j)`.
pub fn count_partitions_of_shape(shape: &Composition, rho: &ConstraintSeq) -> Result<u128> {
    shape.check_constrained(rho)?;
    let tails = shape.tail_sums();
    let mut acc: u128 = 1;
    for j in 0..shape.num_parts().saturating_sub(1) {
        let r = rho.get(j + 1);
        let factor = binomial(tails[j] - r, shape.parts()[j] - r)?;
        acc = acc
            .checked_mul(factor)
            .ok_or_else(|| Error::Overflow(format!("shape count for {shape}")))?;
    }
    Ok(acc)
}

/// Number of constrained partitions of `[|big|]` with shape `big` whose
/// restriction to `[|small|]` is one fixed constrained partition of shape
/// `small`. The count does not depend on which representative is fixed.
///
/// Incompatible shapes yield 0 through the binomial conventions rather
/// than an error; only non-constrained inputs and `|small| > |big|` or
/// `small` having more parts than `big` are rejected.
pub fn count_extensions(
    small: &Composition,
    big: &Composition,
    rho: &ConstraintSeq,
) -> Result<u128> {
    small.check_constrained(rho)?;
    big.check_constrained(rho)?;
    if small.total() > big.total() || small.num_parts() > big.num_parts() {
        return Err(Error::InvalidParameter(format!(
            "extension counts need |{small}| <= |{big}| and no more parts"
        )));
    }
    if small.is_empty() {
        return count_partitions_of_shape(big, rho);
    }
    let l = small.num_parts();
    let k = big.num_parts();
    let lam = small.parts();
    let mu = big.parts();
    let lam_tails = small.tail_sums();
    let mu_tails = big.tail_sums();

    let mut acc: u128 = 1;
    let mut mul = |factor: u128| -> Result<()> {
        acc = acc
            .checked_mul(factor)
            .ok_or_else(|| Error::Overflow(format!("extension count {small} -> {big}")))?;
        Ok(())
    };

    // New elements joining blocks that are already established in `small`.
    for j in 0..l - 1 {
        mul(binomial_ext(
            mu_tails[j] as i128 - lam_tails[j] as i128,
            mu[j] as i128 - lam[j] as i128,
        )?)?;
    }
    // The boundary block: it may still have been filling up in `small`.
    {
        let rl = rho.get(l) as i128;
        let deficit = (rl - lam[l - 1] as i128).max(0);
        let top = mu_tails[l - 1] as i128 - lam_tails[l - 1] as i128 - deficit;
        let bottom = mu[l - 1] as i128 - rl.max(lam[l - 1] as i128);
        mul(binomial_ext(top, bottom)?)?;
    }
    // Blocks that are entirely new, apart from the final one.
    for j in l..k.saturating_sub(1) {
        let r = rho.get(j + 1) as i128;
        mul(binomial_ext(
            mu_tails[j] as i128 - r,
            mu[j] as i128 - r,
        )?)?;
    }
    Ok(acc)
}

/// All constrained partitions of `[n]`: every min-ordered partition is
/// generated as a restricted-growth string and filtered through the
/// validity check. Guarded at `n <= 12`.
pub fn enumerate_partitions(n: u64, rho: &ConstraintSeq) -> Result<Vec<SetPartition>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::SizeGuard {
            guard: "enumerate_partitions",
            limit: ENUMERATION_LIMIT,
            requested: n,
        });
    }
    let n = n as usize;
    let mut out = Vec::new();
    let mut ids = vec![1u32; n];
    loop {
        let p = SetPartition::from_block_ids(&ids).expect("growth strings are well-formed");
        if p.is_valid(rho) {
            out.push(p);
        }
        // Next restricted-growth string: ids[i] may rise to one past the
        // maximum of the prefix.
        let mut i = n;
        loop {
            if i == 1 {
                return Ok(out);
            }
            i -= 1;
            let max_prefix = ids[..i].iter().copied().max().unwrap_or(0);
            if ids[i] <= max_prefix {
                ids[i] += 1;
                for id in ids.iter_mut().skip(i + 1) {
                    *id = 1;
                }
                break;
            }
        }
    }
}
