//! Infinite computable sets given by strictly increasing enumerators.

use std::fmt;

use num_traits::ToPrimitive;

use crate::machine::build::*;
use crate::machine::codec::MAX_DECODE_DEPTH;
use crate::machine::{eval_total, Nat, Program, ProgramCode};
use crate::sets::FiniteSet;

use super::MathiasError;

/// `n ↦ x_n`, a total-tier program expected to be strictly increasing.
///
/// Monotonicity cannot be decided; it is checked on every stretch of the
/// enumeration that an operation reads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputableSet {
    program: Program,
}

impl ComputableSet {
    pub fn new(program: Program) -> Result<Self, MathiasError> {
        if !program.is_total_tier() {
            return Err(MathiasError::NotTotal);
        }
        if program.depth() >= MAX_DECODE_DEPTH {
            return Err(MathiasError::TooDeep);
        }
        Ok(ComputableSet { program })
    }

    pub fn from_code(code: &ProgramCode) -> Result<Self, MathiasError> {
        Self::new(code.decode())
    }

    pub fn omega() -> Self {
        ComputableSet { program: proj(0) }
    }

    /// `start, start + step, start + 2·step, …` with `step ≥ 1`.
    pub fn arithmetic(start: u64, step: u64) -> Self {
        assert!(step >= 1, "an enumerator must increase");
        ComputableSet {
            program: add(konst(start), mul(konst(step), proj(0))),
        }
    }

    pub fn evens() -> Self {
        Self::arithmetic(0, 2)
    }

    pub fn odds() -> Self {
        Self::arithmetic(1, 2)
    }

    /// Enumerates the ones of a 0/1-valued `chi`, given `witness` with
    /// `chi(x) = 1` for some `x ∈ [m, witness(m)]`, for every `m`.
    ///
    /// A characteristic program alone does not certify infinitude, so the
    /// witness is required and is checked for the first `horizon` elements.
    pub fn from_characteristic(
        chi: Program,
        witness: Program,
        horizon: u64,
    ) -> Result<Self, MathiasError> {
        if !chi.is_total_tier() || !witness.is_total_tier() {
            return Err(MathiasError::NotTotal);
        }
        // least k in [lo, lo + count) with chi(k) != 0; frame [lo, count]
        let search = bounded_min(call(chi.clone(), vec![proj(0)]), proj(0), proj(1), 2);
        let window = |lo: Program| {
            call(
                search.clone(),
                vec![
                    lo.clone(),
                    monus(succ(call(witness.clone(), vec![lo.clone()])), lo),
                ],
            )
        };
        let first = window(konst(0u32));
        let step = window(succ(proj(1)));
        let set = ComputableSet::new(iterate(proj(0), first, step, 1))?;
        for n in 0..horizon {
            let x = set.nth(n)?;
            let hit = eval_total(&chi, &[Nat::from(x)]).map_err(|_| MathiasError::NotTotal)?;
            if hit.value != Nat::from(1u32) {
                return Err(MathiasError::InfinitudeWitness { n });
            }
        }
        Ok(set)
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn code(&self) -> ProgramCode {
        self.program.code()
    }

    pub fn nth(&self, n: u64) -> Result<u64, MathiasError> {
        let r = eval_total(&self.program, &[Nat::from(n)]).map_err(|_| MathiasError::TooDeep)?;
        r.value.to_u64().ok_or(MathiasError::Overflow)
    }

    pub fn min(&self) -> Result<u64, MathiasError> {
        self.nth(0)
    }

    /// `x_0, …, x_{count-1}`, checked to increase.
    pub fn take(&self, count: u64) -> Result<Vec<u64>, MathiasError> {
        let mut out: Vec<u64> = Vec::with_capacity(count as usize);
        for n in 0..count {
            let x = self.nth(n)?;
            if out.last().is_some_and(|&p| p >= x) {
                return Err(MathiasError::NotIncreasing { n });
            }
            out.push(x);
        }
        Ok(out)
    }

    /// Least `n` with `x_n > bound`. An increasing enumerator has `x_n ≥ n`,
    /// so at most `bound + 2` values are read.
    pub fn index_above(&self, bound: u64) -> Result<u64, MathiasError> {
        self.index_from(0, bound)
    }

    /// Least `n ≥ from` with `x_n > bound`.
    pub fn index_from(&self, from: u64, bound: u64) -> Result<u64, MathiasError> {
        let mut prev = None;
        let mut n = from;
        loop {
            let x = self.nth(n)?;
            if prev.is_some_and(|p| p >= x) {
                return Err(MathiasError::NotIncreasing { n });
            }
            if x > bound {
                return Ok(n);
            }
            prev = Some(x);
            n += 1;
        }
    }

    /// Members below `bound`.
    pub fn below(&self, bound: u64) -> Result<FiniteSet, MathiasError> {
        if bound == 0 {
            return Ok(FiniteSet::empty());
        }
        let end = self.index_above(bound - 1)?;
        Ok(FiniteSet::from_sorted(self.take(end)?))
    }

    pub fn contains(&self, x: u64) -> Result<bool, MathiasError> {
        Ok(self.below(x + 1)?.contains(x))
    }

    pub fn check_increasing(&self, horizon: u64) -> Result<(), MathiasError> {
        self.take(horizon + 1).map(|_| ())
    }

    /// `n ↦ x_{n+k}`.
    pub fn drop(&self, k: u64) -> ComputableSet {
        if k == 0 {
            return self.clone();
        }
        ComputableSet {
            program: call(self.program.clone(), vec![add(proj(0), konst(k))]),
        }
    }

    /// Members above `bound`.
    pub fn above(&self, bound: u64) -> Result<ComputableSet, MathiasError> {
        Ok(self.drop(self.index_above(bound)?))
    }

    /// `head` followed by `tail` read from index `offset`.
    pub fn with_head(
        head: &[u64],
        tail: &ComputableSet,
        offset: u64,
    ) -> Result<Self, MathiasError> {
        let len = head.len() as u64;
        if head.is_empty() {
            return Ok(tail.drop(offset));
        }
        let rest = call(
            tail.program.clone(),
            vec![add(monus(proj(0), konst(len)), konst(offset))],
        );
        ComputableSet::new(cond(lt(proj(0), konst(len)), table(head), rest))
    }
}

/// `n ↦ values[n]` for `n < values.len()`, as a balanced comparison tree.
fn table(values: &[u64]) -> Program {
    fn node(values: &[u64], lo: usize) -> Program {
        if values.len() == 1 {
            return konst(values[0]);
        }
        let mid = values.len() / 2;
        cond(
            lt(proj(0), konst((lo + mid) as u64)),
            node(&values[..mid], lo),
            node(&values[mid..], lo + mid),
        )
    }
    node(values, 0)
}

impl fmt::Display for ComputableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_sets() {
        assert_eq!(ComputableSet::omega().take(4).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(
            ComputableSet::odds().below(8).unwrap(),
            FiniteSet::new([1, 3, 5, 7])
        );
        assert!(ComputableSet::evens().contains(10).unwrap());
        assert!(!ComputableSet::evens().contains(11).unwrap());
        assert_eq!(ComputableSet::evens().above(5).unwrap().min().unwrap(), 6);
    }

    #[test]
    fn heads_and_tails() {
        let s = ComputableSet::with_head(&[3, 7, 8], &ComputableSet::omega(), 10).unwrap();
        assert_eq!(s.take(6).unwrap(), vec![3, 7, 8, 10, 11, 12]);
    }

    #[test]
    fn rejects_non_increasing() {
        let flat = ComputableSet::new(konst(4u32)).unwrap();
        assert_eq!(flat.take(3), Err(MathiasError::NotIncreasing { n: 1 }));
    }

    #[test]
    fn characteristic_conversion() {
        // multiples of 3, witness m ↦ m + 2
        let chi = not(modulo(proj(0), konst(3u32)));
        let s = ComputableSet::from_characteristic(chi, add(proj(0), konst(2u32)), 20).unwrap();
        assert_eq!(s.take(5).unwrap(), vec![0, 3, 6, 9, 12]);
        // a witness that is too tight is caught
        let chi = not(modulo(proj(0), konst(3u32)));
        let err = ComputableSet::from_characteristic(chi, proj(0), 5).unwrap_err();
        assert_eq!(err, MathiasError::InfinitudeWitness { n: 1 });
    }
}
