//! Meeting `𝒟_{e,h}` through the recursion theorem.
//!
//! For `[a, A]` write `b_k = a ∪ {x_m : bit m of k}`. The search program
//! `P(i, y)` looks for the least `q = ⟨k, t⟩` with `|W^{χ_{b_k}}_{e,t}| > h(i)`
//! and then halts on `y` exactly when `y` is among the first `h(i) + 1`
//! elements of that set in increasing order. With `g(i) = smn(P, i)` and `j`
//! a fixed point of `g`, the condition `[b_k, A above b_k]` for the `q` found
//! at `i = j` has `W_j ⊆ W^{χ_b}_e` and `|W_j| > h(j)`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::machine::build::*;
use crate::machine::eval::{domain_bounded, run};
use crate::machine::pairing::unpair;
use crate::machine::{
    eval_total, fixed_point, we_bounded, Nat, Op, OracleString, Program, ProgramCode, StepBudget,
};
use crate::sets::FiniteSet;

use super::condition::Condition;
use super::MathiasError;

/// Evidence for the first clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointWitness {
    pub j: ProgramCode,
    pub h_j: Nat,
    /// `⟨k, t⟩` found by the search.
    pub q: u64,
    pub clock: u64,
    /// `b`, the new stem, read as the oracle `χ_b`.
    pub oracle_set: FiniteSet,
    /// `W_j` at the verification budget.
    pub w_j: FiniteSet,
    /// `W_j ⊆ W^{χ_b}_{e,t}`.
    pub subset_verified: bool,
    /// `|W_j| > h(j)`.
    pub size_verified: bool,
    /// `W_j` and `W_{g(j)}` agree under the fixed point's budget shift.
    pub agreement_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MeetOutcome {
    Met {
        condition: Condition,
        witness: Box<FixedPointWitness>,
    },
    /// No `q < searched` produced enough growth; `max_seen` is the largest
    /// `|W^{χ_b}_{e,t}|` observed.
    Unresolved { max_seen: usize, searched: u64 },
}

impl MeetOutcome {
    pub fn is_met(&self) -> bool {
        matches!(self, MeetOutcome::Met { .. })
    }
}

/// `k ↦ code(b_k)`.
fn stem_program(c: &Condition) -> Program {
    let a = c.reservoir().program().clone();
    let step = cond(
        bit(proj(2), proj(0)),
        or(proj(1), pow2(call(a, vec![proj(0)]))),
        proj(1),
    );
    iterate(bitlen(proj(0)), konst(c.stem().code()), step, 1)
}

/// `(b, bound, t) ↦ #{n < bound : e^{χ_b}(n) halts within t}`.
fn count_program(e: &ProgramCode) -> Program {
    // frame [n, acc, b, bound, t]
    let hit = lt(
        konst(0u32),
        op(
            Op::Clocked,
            vec![konst(e.0.clone()), proj(2), proj(0), proj(4)],
        ),
    );
    iterate(proj(1), konst(0u32), add(proj(1), hit), 3)
}

/// The binary search program `P(i, y)`.
pub fn search_program(c: &Condition, e: &ProgramCode, h: &Program) -> Program {
    let stems = stem_program(c);
    let count = count_program(e);
    // inside mu the frame is [q, i, y]
    let grown = call(
        count.clone(),
        vec![
            call(stems.clone(), vec![fst(proj(0))]),
            snd(proj(0)),
            snd(proj(0)),
        ],
    );
    let q = mu(not(lt(call(h.clone(), vec![proj(1)]), grown)));
    // R(i, y, b, t)
    let in_w = lt(
        konst(0u32),
        op(
            Op::Clocked,
            vec![konst(e.0.clone()), proj(2), proj(1), proj(3)],
        ),
    );
    let rank_ok = not(lt(
        call(h.clone(), vec![proj(0)]),
        call(count, vec![proj(2), proj(1), proj(3)]),
    ));
    let ok = mul(mul(lt(proj(1), proj(3)), in_w), rank_ok);
    let r = cond(ok, konst(0u32), Program::diverge());
    call(
        r,
        vec![proj(0), proj(1), call(stems, vec![fst(q.clone())]), snd(q)],
    )
}

/// `b_k` computed natively.
fn stem_set(c: &Condition, k: u64) -> Result<FiniteSet, MathiasError> {
    let mut b = c.stem().clone();
    let mut extra = Vec::new();
    for m in 0..(64 - k.leading_zeros() as u64) {
        if k >> m & 1 == 1 {
            extra.push(c.reservoir().nth(m)?);
        }
    }
    b = b.union(&FiniteSet::new(extra));
    Ok(b)
}

/// Searches `q < budget`, builds the fixed point and verifies both
/// conjuncts of the first clause with `verify_budget` steps per input.
pub fn meet_d_eh(
    c: &Condition,
    e: &ProgramCode,
    h: &Program,
    budget: u64,
    verify_budget: u64,
) -> Result<MeetOutcome, MathiasError> {
    if !h.is_total_tier() {
        return Err(MathiasError::NotTotal);
    }
    let p = search_program(c, e, h);
    let g = op(Op::Smn, vec![konst(p.code().0), proj(0)]);
    let fp = fixed_point(&g).map_err(|_| MathiasError::NotTotal)?;
    let h_j = eval_total(h, std::slice::from_ref(&fp.code.0))
        .map_err(|_| MathiasError::TooDeep)?
        .value;
    let program = e.decode();
    let mut max_seen = 0usize;
    for q in 0..budget {
        let (k, t) = unpair(q);
        let b = stem_set(c, k)?;
        let oracle = OracleString::characteristic(&b);
        let w = we_bounded(e, StepBudget(t), Some(&oracle));
        max_seen = max_seen.max(w.len());
        if BigUint::from(w.len()) <= h_j {
            continue;
        }
        let take = h_j.to_usize().expect("smaller than a set length");
        let expected = FiniteSet::from_sorted(w.elements()[..=take].to_vec());
        let w_j = domain_bounded(&fp.program, t, verify_budget, None);
        let image = domain_bounded(&fp.image, t, verify_budget, None);
        let shifted = domain_bounded(&fp.program, t, fp.corresponding_budget(verify_budget), None);
        let subset_verified = w_j.iter().all(|y| {
            run(&program, &[Nat::from(y)], t, Some(&oracle))
                .outcome
                .is_converged()
        });
        let size_verified = BigUint::from(w_j.len()) > h_j;
        if w_j != expected {
            return Err(MathiasError::FixedPointMismatch { q });
        }
        let reservoir = c.reservoir().drop(64 - k.leading_zeros() as u64);
        let condition = Condition::new(b.clone(), reservoir)?;
        return Ok(MeetOutcome::Met {
            condition,
            witness: Box::new(FixedPointWitness {
                j: fp.code,
                h_j,
                q,
                clock: t,
                oracle_set: b,
                w_j,
                subset_verified,
                size_verified,
                agreement_verified: shifted == image,
            }),
        });
    }
    Ok(MeetOutcome::Unresolved {
        max_seen,
        searched: budget,
    })
}
