//! Canonical immunity with both `R` and its complement dominated by `k ↦ 2k`.

use std::collections::BTreeSet;

use crate::machine::pairing::unpair;
use crate::numberings::Registry;
use crate::sets::{FiniteSet, SetPrefix};

use super::bci::{diagonal_bound, pool_index_bound};
use super::trace::{ConstructionTrace, StageRecord};
use super::{ConstructionError, PoolCache};

/// `i ↦ 2f(i)`.
pub fn ci_not_hi_modulus(i: u64) -> u64 {
    2 * diagonal_bound(i)
}

#[derive(Clone, Debug)]
pub struct CiNotHiRun {
    pub prefix: SetPrefix,
    pub trace: ConstructionTrace,
    pub used_pairs: FiniteSet,
    pub index_bound: Option<u64>,
}

/// Stage `s = ⟨e, i⟩` withholds the least `x ∈ D_e(i)` in an unclaimed pair
/// and puts its partner into `R`; unclaimed pairs below the horizon add `2p`.
pub fn ci_not_hi_run(reg: &Registry, stages: u64) -> Result<CiNotHiRun, ConstructionError> {
    if stages == 0 {
        return Err(ConstructionError::ZeroHorizon);
    }
    let mut pool = PoolCache::new(reg);
    let mut used = BTreeSet::new();
    let mut trace = ConstructionTrace::default();
    let mut horizon = 0u64;
    for s in 0..stages {
        let (e, i) = unpair(s);
        if e as usize >= reg.len() || i < e {
            continue;
        }
        let d = pool.get(e as usize, i);
        horizon = horizon.max(d.max().map_or(0, |m| m + 1));
        if d.len() as u64 <= ci_not_hi_modulus(i) {
            continue;
        }
        let x = d
            .iter()
            .find(|x| !used.contains(&(x / 2)))
            .expect("a large D leaves the claimed pairs");
        used.insert(x / 2);
        trace.push(
            StageRecord::new(s, "case2", "R")
                .adding(FiniteSet::new([x ^ 1]))
                .note("e", e)
                .note("i", i)
                .note("withheld", x),
        );
        trace.push(StageRecord::new(s, "case2", "F").adding(FiniteSet::new([x / 2])));
    }
    let pairs = used.last().map_or(0, |&p| p + 1).max(horizon.div_ceil(2));
    trace.push(
        StageRecord::new(stages, "fill", "R").adding(FiniteSet::from_sorted(
            (0..pairs)
                .filter(|p| !used.contains(p))
                .map(|p| 2 * p)
                .collect(),
        )),
    );
    let prefix = SetPrefix::new(trace.replay("R"), 2 * pairs).expect("members lie in pairs");
    Ok(CiNotHiRun {
        prefix,
        trace,
        used_pairs: FiniteSet::from_sorted(used.into_iter().collect()),
        index_bound: pool_index_bound(reg.len(), stages),
    })
}
