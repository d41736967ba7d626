//! The deletion kernel on constrained compositions.
//!
//! Going from a constrained composition of `n` to one of `n-1` by the urn
//! procedure: at step j the establishing balls of box j are painted black,
//! a white ball is drawn uniformly from boxes j..l, and it is deleted if
//! it came from box j (otherwise returned, moving to step j+1). If no draw
//! deletes within l-1 steps, the last box loses a ball.
//!
//! [`deletion_kernel`] is the closed-form transition law;
//! [`deletion_step`] walks the urn narrative literally, ball by ball, so
//! the two can cross-validate each other.

use std::collections::BTreeMap;

use crate::composition::Composition;
use crate::error::{Error, Result};
use crate::rho::ConstraintSeq;
use crate::stream::RandomStream;

fn decrement(lambda: &Composition, j: usize) -> Composition {
    let mut parts = lambda.parts().to_vec();
    parts[j] -= 1;
    if parts[j] == 0 {
        debug_assert_eq!(j, parts.len() - 1, "only the last part can reach zero");
        parts.pop();
    }
    Composition::new(parts).expect("positive parts")
}

/// Exact transition probabilities of the deletion kernel. Targets with
/// zero probability are omitted; the values sum to 1.
pub fn deletion_kernel(
    lambda: &Composition,
    rho: &ConstraintSeq,
) -> Result<BTreeMap<Composition, f64>> {
    lambda.check_constrained(rho)?;
    if lambda.is_empty() {
        return Err(Error::InvalidParameter(
            "deletion kernel needs a nonempty composition".into(),
        ));
    }
    let l = lambda.num_parts();
    let tails = lambda.tail_sums();
    let mut out = BTreeMap::new();
    // Probability of reaching step j without deleting:
    // prod_{i<j} Lambda_{i+1} / (Lambda_i - rho_i).
    let mut carry = 1.0f64;
    for j in 0..l - 1 {
        let white = (lambda.parts()[j] - rho.get(j + 1)) as f64;
        let eligible = (tails[j] - rho.get(j + 1)) as f64;
        let p = carry * white / eligible;
        if p > 0.0 {
            *out.entry(decrement(lambda, j)).or_insert(0.0) += p;
        }
        carry *= tails[j + 1] as f64 / eligible;
    }
    *out.entry(decrement(lambda, l - 1)).or_insert(0.0) += carry;
    Ok(out)
}

/// One transition drawn by running the urn procedure itself.
pub fn deletion_step(
    lambda: &Composition,
    rho: &ConstraintSeq,
    stream: &mut RandomStream,
) -> Result<Composition> {
    lambda.check_constrained(rho)?;
    if lambda.is_empty() {
        return Err(Error::InvalidParameter(
            "deletion step needs a nonempty composition".into(),
        ));
    }
    let l = lambda.num_parts();
    let tails = lambda.tail_sums();
    for j in 0..l - 1 {
        // Paint rho_{j+1} balls of box j+1 black, then draw one of the
        // remaining white balls in boxes j+1..l uniformly.
        let white_here = lambda.parts()[j] - rho.get(j + 1);
        let eligible = tails[j] - rho.get(j + 1);
        let draw = (stream.uniform() * eligible as f64) as u64;
        if draw < white_here {
            // Drawn from this box: delete it.
            return Ok(decrement(lambda, j));
        }
        // Drawn from a later box: the ball goes back, move on.
    }
    Ok(decrement(lambda, l - 1))
}
