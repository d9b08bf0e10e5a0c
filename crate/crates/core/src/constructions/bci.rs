//! Bi-immunity by splitting pairs `I_p = {2p, 2p + 1}` between `R` and `Q`.

use std::collections::BTreeSet;

use crate::machine::pairing::{pair, unpair};
use crate::numberings::Registry;
use crate::sets::{FiniteSet, SetPrefix};

use super::trace::{ConstructionTrace, StageRecord};
use super::{ConstructionError, PoolCache};

/// `f(i) = max_{e ≤ i} ⟨e, i⟩ = ⟨i, i⟩`.
pub fn diagonal_bound(i: u64) -> u64 {
    pair(i, i)
}

/// `i ↦ 4f(i) + 3`.
pub fn bci_modulus(i: u64) -> u64 {
    4 * diagonal_bound(i) + 3
}

#[derive(Clone, Debug)]
pub struct BciRun {
    pub r: SetPrefix,
    pub q: SetPrefix,
    pub trace: ConstructionTrace,
    /// `F_S`: pairs claimed by some strategy.
    pub used_pairs: FiniteSet,
    pub stages: u64,
    /// Largest `i` such that every stage `⟨e, i⟩` with `e ≤ i` in the pool
    /// ran; `None` for an empty pool.
    pub index_bound: Option<u64>,
}

/// Largest `i` with `⟨min(i, pool - 1), i⟩ < stages`.
pub fn pool_index_bound(pool_len: usize, stages: u64) -> Option<u64> {
    if pool_len == 0 {
        return None;
    }
    let top = pool_len as u64 - 1;
    let mut i = 0;
    while pair(top.min(i + 1), i + 1) < stages {
        i += 1;
    }
    Some(i)
}

/// Runs stages `s = ⟨e, i⟩ < S`, then gives `2p` to `R` and `2p + 1` to `Q`
/// for every unclaimed pair below the horizon.
pub fn bci_run(reg: &Registry, stages: u64) -> Result<BciRun, ConstructionError> {
    if stages == 0 {
        return Err(ConstructionError::ZeroHorizon);
    }
    let mut pool = PoolCache::new(reg);
    let mut used: BTreeSet<u64> = BTreeSet::new();
    let mut trace = ConstructionTrace::default();
    let mut horizon = 0u64;
    for s in 0..stages {
        let (e, i) = unpair(s);
        if e as usize >= reg.len() || i < e {
            continue;
        }
        let d = pool.get(e as usize, i);
        horizon = horizon.max(d.max().map_or(0, |m| m + 1));
        if d.len() as u64 <= bci_modulus(i) {
            continue;
        }
        // least free pair meeting D, then the next one
        let mut free = d.iter().filter(|x| !used.contains(&(x / 2)));
        let x = free.next().expect("a large D meets two free pairs");
        let p = x / 2;
        let z = free
            .find(|z| z / 2 != p)
            .expect("a large D meets two free pairs");
        let q = z / 2;
        let (y, w) = (x ^ 1, z ^ 1);
        used.insert(p);
        used.insert(q);
        let note = |r: StageRecord| r.note("e", e).note("i", i).note("x", x).note("z", z);
        trace.push(note(
            StageRecord::new(s, "case2", "R").adding(FiniteSet::new([y, z])),
        ));
        trace.push(note(
            StageRecord::new(s, "case2", "Q").adding(FiniteSet::new([x, w])),
        ));
        trace.push(note(
            StageRecord::new(s, "case2", "F").adding(FiniteSet::new([p, q])),
        ));
    }
    let index_bound = pool_index_bound(reg.len(), stages);
    let pairs = used.last().map_or(0, |&p| p + 1).max(horizon.div_ceil(2));
    let fill: Vec<u64> = (0..pairs).filter(|p| !used.contains(p)).collect();
    trace.push(
        StageRecord::new(stages, "fill", "R")
            .adding(FiniteSet::from_sorted(fill.iter().map(|p| 2 * p).collect())),
    );
    trace.push(
        StageRecord::new(stages, "fill", "Q").adding(FiniteSet::from_sorted(
            fill.iter().map(|p| 2 * p + 1).collect(),
        )),
    );
    let length = 2 * pairs;
    let r = SetPrefix::new(trace.replay("R"), length).expect("members lie in claimed pairs");
    let q = SetPrefix::new(trace.replay("Q"), length).expect("members lie in claimed pairs");
    Ok(BciRun {
        r,
        q,
        trace,
        used_pairs: FiniteSet::from_sorted(used.into_iter().collect()),
        stages,
        index_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BciInvariantError {
    #[error("stage {stage}: |F| = {size} exceeds 2·{stage}")]
    TooManyPairs { stage: u64, size: usize },
    #[error("stage {stage}: R and Q share {shared}")]
    Overlap { stage: u64, shared: FiniteSet },
    #[error("stage {stage}: R ∪ Q differs from the union of claimed pairs")]
    Cover { stage: u64 },
}

/// Replays the stage records and checks, after every stage `s < S`,
/// `|F_{s+1}| ≤ 2(s+1)`, `R_{s+1} ∩ Q_{s+1} = ∅` and
/// `R_{s+1} ∪ Q_{s+1} = ⋃_{p ∈ F_{s+1}} I_p`.
pub fn verify_bci_trace(trace: &ConstructionTrace, stages: u64) -> Result<(), BciInvariantError> {
    let mut r = BTreeSet::new();
    let mut q = BTreeSet::new();
    let mut f = BTreeSet::new();
    let mut records = trace
        .records
        .iter()
        .filter(|rec| rec.rule != "fill")
        .peekable();
    for s in 0..stages {
        while let Some(rec) = records.peek().filter(|rec| rec.stage == s) {
            let target = match rec.target.as_str() {
                "R" => &mut r,
                "Q" => &mut q,
                _ => &mut f,
            };
            for x in rec.removed.iter() {
                target.remove(&x);
            }
            target.extend(rec.added.iter());
            records.next();
        }
        let stage = s + 1;
        if f.len() as u64 > 2 * stage {
            return Err(BciInvariantError::TooManyPairs {
                stage,
                size: f.len(),
            });
        }
        let shared: Vec<u64> = r.intersection(&q).copied().collect();
        if !shared.is_empty() {
            return Err(BciInvariantError::Overlap {
                stage,
                shared: FiniteSet::from_sorted(shared),
            });
        }
        let cover: BTreeSet<u64> = f.iter().flat_map(|p| [2 * p, 2 * p + 1]).collect();
        let both: BTreeSet<u64> = r.union(&q).copied().collect();
        if cover != both {
            return Err(BciInvariantError::Cover { stage });
        }
    }
    Ok(())
}
