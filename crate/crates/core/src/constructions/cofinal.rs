//! Coding an arbitrary set into a canonically immune one by parity.

use std::collections::HashSet;

use crate::numberings::Registry;
use crate::sets::{FiniteSet, SetPrefix};

use super::trace::{ConstructionTrace, StageRecord};
use super::{ConstructionError, PoolCache};

/// `i ↦ 2i + 1`, the modulus of the two-parity set `Q`.
pub fn cofinal_modulus(i: u64) -> u64 {
    2 * i + 1
}

#[derive(Clone, Debug)]
pub struct CofinalRun {
    /// `{2p_n : A(n) = 1} ∪ {2p_n + 1 : A(n) = 0}`.
    pub r: SetPrefix,
    /// `{2p_n, 2p_n + 1 : n < count}`.
    pub q: SetPrefix,
    pub positions: Vec<u64>,
    pub trace: ConstructionTrace,
}

/// Picks `p_0 < p_1 < …` least with `2p_n, 2p_n + 1` outside
/// `⋃{D_e(i) : e, i ≤ n, |D_e(i)| > i}` and codes `bits` by parity.
pub fn cofinal_encode(reg: &Registry, bits: &[bool]) -> Result<CofinalRun, ConstructionError> {
    let mut pool = PoolCache::new(reg);
    let mut forbidden: HashSet<u64> = HashSet::new();
    let mut positions = Vec::with_capacity(bits.len());
    let mut trace = ConstructionTrace::default();
    for (n, &bit) in bits.iter().enumerate() {
        let n64 = n as u64;
        for e in 0..reg.len().min(n + 1) {
            let mut add = |i: u64| {
                let d = pool.get(e, i);
                if d.len() as u64 > i {
                    forbidden.extend(d.iter());
                }
            };
            add(n64);
            if e == n {
                for i in 0..n64 {
                    add(i);
                }
            }
        }
        let mut p = positions.last().map_or(0, |&p: &u64| p + 1);
        while forbidden.contains(&(2 * p)) || forbidden.contains(&(2 * p + 1)) {
            p += 1;
        }
        positions.push(p);
        let x = if bit { 2 * p } else { 2 * p + 1 };
        trace.push(
            StageRecord::new(n64, "code", "R")
                .adding(FiniteSet::new([x]))
                .note("p", p)
                .note("bit", u8::from(bit)),
        );
        trace.push(StageRecord::new(n64, "code", "Q").adding(FiniteSet::new([2 * p, 2 * p + 1])));
    }
    let length = positions.last().map_or(0, |p| 2 * p + 2);
    let r = SetPrefix::new(trace.replay("R"), length).expect("members below 2p + 2");
    let q = SetPrefix::new(trace.replay("Q"), length).expect("members below 2p + 2");
    Ok(CofinalRun {
        r,
        q,
        positions,
        trace,
    })
}

/// Reads `A(n)` as "the `n`th member of `R` is even", for `n < count`.
pub fn cofinal_decode(r: &SetPrefix, count: usize) -> Result<Vec<bool>, ConstructionError> {
    let members = r.principal();
    if members.len() < count {
        return Err(ConstructionError::Truncated {
            available: members.len(),
            requested: count,
        });
    }
    Ok(members[..count].iter().map(|x| x % 2 == 0).collect())
}
