//! Stage constructions run to a finite horizon. Each returns the set prefix
//! it built and a trace whose replay reproduces that prefix.

pub mod bci;
pub mod ci_hi;
pub mod ci_not_hi;
pub mod cofinal;
pub mod delta2;
pub mod effectivize;
pub mod hi_not_ci;
pub mod trace;
pub mod two_generic;

use std::collections::HashMap;

use crate::numberings::Registry;
use crate::sets::FiniteSet;

pub use bci::{bci_modulus, bci_run, diagonal_bound, pool_index_bound, verify_bci_trace, BciRun};
pub use ci_hi::{ci_hi_run, CiHiRun};
pub use ci_not_hi::{ci_not_hi_modulus, ci_not_hi_run, CiNotHiRun};
pub use cofinal::{cofinal_decode, cofinal_encode, cofinal_modulus, CofinalRun};
pub use delta2::{delta2_prefix, Delta2Run};
pub use effectivize::{effectivize_inside, EffectivizeRun};
pub use hi_not_ci::{hi_not_ci_run, BlockFamily, HiNotCiRun, Selection};
pub use trace::{ConstructionTrace, StageRecord};
pub use two_generic::{
    alpha, build_2generic_witness, pump_enumeration, x_n_membership, EntryOutcome, PumpOutcome,
    TwoGenericWitness,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("horizons must be positive")]
    ZeroHorizon,
    #[error("a supplied function is not in the total tier")]
    NotTotal,
    #[error("a value left the u64 range")]
    Overflow,
    #[error("prefix has {available} members, {requested} requested")]
    Truncated { available: usize, requested: usize },
    #[error("construction needs {need} members, input has {have}")]
    TooFewMembers { have: usize, need: usize },
}

/// Memoised `D_e(i)` over a registry.
pub(crate) struct PoolCache<'a> {
    reg: &'a Registry,
    values: HashMap<(usize, u64), FiniteSet>,
}

impl<'a> PoolCache<'a> {
    pub(crate) fn new(reg: &'a Registry) -> Self {
        PoolCache {
            reg,
            values: HashMap::new(),
        }
    }

    pub(crate) fn get(&mut self, e: usize, i: u64) -> FiniteSet {
        let reg = self.reg;
        self.values
            .entry((e, i))
            .or_insert_with(|| reg.get(e).expect("pool id in range").value(i))
            .clone()
    }
}
