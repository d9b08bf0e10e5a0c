//! The witness numbering against sets c.e. in a 2-generic, and the dense
//! sets `X_n` used against weak 1-generics.

use num_traits::ToPrimitive;

use crate::machine::build::*;
use crate::machine::eval::{run, OracleString};
use crate::machine::pairing::pair;
use crate::machine::{Nat, Program, ProgramCode};
use crate::numberings::{witness_numbering, CanonicalRule};
use crate::sets::FiniteSet;

use super::ci_hi::apply_u64;
use super::ConstructionError;

/// Per-input step allowance for a candidate `ρ` is this times `|ρ| + 1`.
pub const PUMP_STEP_SCALE: u64 = 16;

/// Steps allowed per input when testing a candidate of length `len`.
pub fn pump_steps(len: usize) -> u64 {
    PUMP_STEP_SCALE * (len as u64 + 1)
}

/// Inputs `n < |ρ|` on which `e^ρ` halts within [`pump_steps`], listed in
/// enumeration order: by halting time, then by value.
pub fn enumerate_pumped(e: &Program, rho: &OracleString) -> Vec<u64> {
    let steps = pump_steps(rho.len());
    let mut seen: Vec<(u64, u64)> = (0..rho.len() as u64)
        .filter_map(|n| {
            let r = run(e, &[Nat::from(n)], steps, Some(rho));
            r.outcome.is_converged().then_some((r.steps, n))
        })
        .collect();
    seen.sort_unstable();
    seen.into_iter().map(|(_, n)| n).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PumpOutcome {
    Found(OracleString),
    /// No witness among the first `examined` candidates.
    Unresolved {
        examined: u64,
    },
}

/// `α_i`: the `i`th binary string in length-lex order (`ε, 0, 1, 00, …`),
/// which is `bin(i + 1)` without its leading one.
pub fn alpha(i: u64) -> OracleString {
    let v = i + 1;
    let len = 63 - v.leading_zeros();
    OracleString::new((0..len).rev().map(|b| (v >> b) & 1 == 1).collect())
}

/// Searches `ρ ⪰ σ` in length-lex order for
/// `|W^ρ_e| > target`, where `W^ρ_e` is [`enumerate_pumped`]; gives up after
/// `budget` candidates.
pub fn pump_enumeration(
    sigma: &OracleString,
    e: &ProgramCode,
    target: u64,
    budget: u64,
) -> PumpOutcome {
    let p = e.decode();
    for c in 0..budget {
        let rho = sigma.concat(&alpha(c));
        if enumerate_pumped(&p, &rho).len() as u64 > target {
            return PumpOutcome::Found(rho);
        }
    }
    PumpOutcome::Unresolved { examined: budget }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntryOutcome {
    Resolved {
        /// `β(i, n)`, the suffix found after `σ ⌢ α_i`.
        beta: OracleString,
        /// `σ ⌢ α_i ⌢ β(i, n)`.
        rho: OracleString,
        /// First `f(2⟨i,n⟩) + 1` elements enumerated into `W^ρ_e`.
        h: FiniteSet,
    },
    Unresolved {
        examined: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessEntry {
    pub i: u64,
    pub n: u64,
    /// `f(2⟨i, n⟩)`.
    pub bound: u64,
    pub outcome: EntryOutcome,
}

#[derive(Clone, Debug)]
pub struct TwoGenericWitness {
    pub entries: Vec<WitnessEntry>,
    /// `⟨i, n⟩ ↦ H(i, n)` on resolved entries, `∅` elsewhere.
    pub table: Program,
    /// `D(2⟨i, n⟩) = H(i, n)`, `D(2m + 1) = decode(m)`.
    pub numbering: CanonicalRule,
}

/// Builds `β`, `H` and the witness numbering for all `i ≤ i_max`, `n ≤ n_max`.
/// Entries whose pump search runs out of budget stay unresolved and map to `∅`.
pub fn build_2generic_witness(
    sigma: &OracleString,
    e: &ProgramCode,
    f: &Program,
    i_max: u64,
    n_max: u64,
    budget: u64,
) -> Result<TwoGenericWitness, ConstructionError> {
    if !f.is_total_tier() {
        return Err(ConstructionError::NotTotal);
    }
    let program = e.decode();
    let mut entries = Vec::new();
    let mut table = konst(0u32);
    for i in 0..=i_max {
        let tau = sigma.concat(&alpha(i));
        for n in 0..=n_max {
            let bound = apply_u64(f, 2 * pair(i, n))?;
            let outcome = match pump_enumeration(&tau, e, bound, budget) {
                PumpOutcome::Found(rho) => {
                    let beta = OracleString::new(rho.bits()[tau.len()..].to_vec());
                    let first = enumerate_pumped(&program, &rho);
                    let h = FiniteSet::new(first.into_iter().take(bound as usize + 1));
                    table = cond(eq(proj(0), konst(pair(i, n))), konst(h.code()), table);
                    EntryOutcome::Resolved { beta, rho, h }
                }
                PumpOutcome::Unresolved { examined } => EntryOutcome::Unresolved { examined },
            };
            entries.push(WitnessEntry {
                i,
                n,
                bound,
                outcome,
            });
        }
    }
    let numbering = witness_numbering(&table).map_err(|_| ConstructionError::NotTotal)?;
    Ok(TwoGenericWitness {
        entries,
        table,
        numbering,
    })
}

/// `σ ∈ X_n` checked on `i ∈ [n, index_bound]`: some `D(i) ⊆ σ` with
/// `|D(i)| > f(i)`.
pub fn x_n_membership(
    sigma: &OracleString,
    d: &CanonicalRule,
    f: &Program,
    n: u64,
    index_bound: u64,
) -> Result<bool, ConstructionError> {
    for i in n..=index_bound {
        let v = d.value(i);
        let inside = v
            .iter()
            .all(|x| x.to_usize().and_then(|x| sigma.get(x)) == Some(true));
        if inside && v.len() as u64 > apply_u64(f, i)? {
            return Ok(true);
        }
    }
    Ok(false)
}
