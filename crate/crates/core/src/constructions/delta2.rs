//! The movable-marker construction over stage approximations `D_{e,s}`.

use std::collections::HashMap;

use crate::machine::{Program, ProgramCode};
use crate::numberings::convergence;
use crate::sets::{FiniteSet, SetPrefix};

use super::trace::{ConstructionTrace, StageRecord};
use super::ConstructionError;

/// Convergence data for one pool entry `(e, i)` at the horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryStatus {
    pub e: usize,
    pub i: u64,
    /// First stage at which `φ_e(i)` has converged, if within the horizon.
    pub settled_at: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Delta2Run {
    pub prefix: SetPrefix,
    pub trace: ConstructionTrace,
    /// `x_{n,S}` for `n < N`.
    pub markers: Vec<u64>,
    /// Markers at every stage where some approximation changed.
    pub history: Vec<(u64, Vec<u64>)>,
    pub entries: Vec<EntryStatus>,
    /// `settled[n]`: every `D_{e,s}(i)` with `e, i <= n` converged by `S`,
    /// so `x_n` keeps its value at all later stages.
    pub settled: Vec<bool>,
}

/// Least markers `x_0 < x_1 < …` with `x_n` outside every forbidden set of
/// level at most `n`.
fn place_markers(level: &HashMap<u64, usize>, n_markers: usize) -> Vec<u64> {
    let mut markers = Vec::with_capacity(n_markers);
    let mut v = 0u64;
    for n in 0..n_markers {
        while level.get(&v).is_some_and(|&l| l <= n) {
            v += 1;
        }
        markers.push(v);
        v += 1;
    }
    markers
}

/// Runs stages `0..=S`; `R_S = {x_{0,S}, …, x_{N-1,S}}`.
///
/// Markers only move when some `D_{e,s}(i)` converges, so the run evaluates
/// each `(e, i)` with `e < |pool|`, `i < N` once to find its convergence stage
/// and recomputes markers at those stages only.
pub fn delta2_prefix(
    pool: &[ProgramCode],
    stages: u64,
    n_markers: usize,
) -> Result<Delta2Run, ConstructionError> {
    if stages == 0 || n_markers == 0 {
        return Err(ConstructionError::ZeroHorizon);
    }
    let programs: Vec<Program> = pool.iter().map(ProgramCode::decode).collect();
    let mut events: Vec<(u64, usize, u64, FiniteSet)> = Vec::new();
    let mut entries = Vec::new();
    for (e, p) in programs.iter().enumerate().take(n_markers) {
        for i in 0..n_markers as u64 {
            let c = convergence(p, i, stages);
            entries.push(EntryStatus {
                e,
                i,
                settled_at: c.as_ref().map(|(s, _)| *s),
            });
            if let Some((s, v)) = c {
                events.push((s, e, i, v));
            }
        }
    }
    events.sort_by_key(|ev| (ev.0, ev.1, ev.2));

    let mut level: HashMap<u64, usize> = HashMap::new();
    let mut trace = ConstructionTrace::default();
    let mut markers = place_markers(&level, n_markers);
    trace.push(StageRecord::new(0, "init", "R").adding(FiniteSet::from_sorted(markers.clone())));
    let mut history = vec![(0, markers.clone())];
    let mut k = 0;
    while k < events.len() {
        let stage = events[k].0;
        let mut changed = Vec::new();
        while k < events.len() && events[k].0 == stage {
            let (_, e, i, ref v) = events[k];
            if v.len() as u64 > i {
                let l = e.max(i as usize);
                for x in v.iter() {
                    let slot = level.entry(x).or_insert(l);
                    *slot = (*slot).min(l);
                }
                changed.push(format!("{e}:{i}"));
            }
            k += 1;
        }
        if changed.is_empty() {
            continue;
        }
        let next = place_markers(&level, n_markers);
        if next != markers {
            let old = FiniteSet::new(markers.iter().copied());
            let new = FiniteSet::new(next.iter().copied());
            let moved: Vec<String> = (0..n_markers)
                .filter(|&n| next[n] != markers[n])
                .map(|n| n.to_string())
                .collect();
            trace.push(
                StageRecord::new(stage, "markers", "R")
                    .removing(old.difference(&new))
                    .adding(new.difference(&old))
                    .note("moved", moved.join(","))
                    .note("converged", changed.join(",")),
            );
            markers = next;
            history.push((stage, markers.clone()));
        }
    }

    let mut settled = vec![true; n_markers];
    for st in &entries {
        if st.settled_at.is_none() {
            let from = st.e.max(st.i as usize);
            for s in settled.iter_mut().skip(from) {
                *s = false;
            }
        }
    }
    let members = FiniteSet::from_sorted(markers.clone());
    let prefix = SetPrefix::tight(members);
    Ok(Delta2Run {
        prefix,
        trace,
        markers,
        history,
        entries,
        settled,
    })
}
