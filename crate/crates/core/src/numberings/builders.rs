//! Special-purpose numberings. Both place the standard numbering on one
//! residue class so the result is surjective.

use num_traits::ToPrimitive;

use super::{CanonicalRule, NumberingError};
use crate::machine::build::*;
use crate::machine::eval::eval_total_u64;
use crate::machine::Program;

fn unary(f: &Program, x: Program) -> Program {
    call(f.clone(), vec![x])
}

/// `m ↦ start(m)` for the adversarial blocks: `start(0) = 2` and
/// `start(k + 1) = max(start(k) + f(2k + 1) + 1, 2k + 4)`.
fn block_start(f: &Program) -> Program {
    // step frame: [k, acc]
    let two_k = mul(konst(2u32), proj(0));
    let step = max(
        add(add(proj(1), unary(f, succ(two_k.clone()))), konst(1u32)),
        add(two_k, konst(4u32)),
    );
    iterate(proj(0), konst(2u32), step, 1)
}

/// A surjective numbering with `min D(i) > i` and `|D(i)| > f(i)` on every
/// odd `i`.
///
/// `D(2m) = decode(m)`; `D(2m + 1)` is the interval of length `f(2m + 1) + 1`
/// at `start(m) ≥ 2m + 2`, and consecutive blocks are disjoint.
pub fn adversarial_numbering(f: &Program) -> Result<CanonicalRule, NumberingError> {
    if !f.is_total_tier() {
        return Err(NumberingError::NotTotalTier);
    }
    let m = div(proj(0), konst(2u32));
    let block = interval(
        call(block_start(f), vec![m.clone()]),
        succ(unary(f, proj(0))),
    );
    let rule = cond(modulo(proj(0), konst(2u32)), block, m);
    CanonicalRule::with_flag(rule, true)
}

/// `min` of the adversarial block at odd index `2m + 1`.
pub fn adversarial_block_start(f: &Program, m: u64) -> u64 {
    eval_total_u64(&block_start(f), &[m])
        .expect("block start is total")
        .to_u64()
        .expect("block start fits in u64")
}

/// `D(2p) = H(p)` and `D(2m + 1) = decode(m)`, for a total unary rule `H`
/// on pair codes `p = ⟨i, n⟩`.
pub fn witness_numbering(h: &Program) -> Result<CanonicalRule, NumberingError> {
    if !h.is_total_tier() {
        return Err(NumberingError::NotTotalTier);
    }
    let half = div(proj(0), konst(2u32));
    let rule = cond(modulo(proj(0), konst(2u32)), half.clone(), unary(h, half));
    CanonicalRule::with_flag(rule, true)
}
