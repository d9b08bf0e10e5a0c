//! An effectively immune subset of a given set, built inside its members.

use std::collections::{BTreeSet, HashMap};

use crate::machine::{we_bounded, ProgramCode, StepBudget};
use crate::sets::{FiniteSet, SetPrefix};

use super::trace::{ConstructionTrace, StageRecord};
use super::ConstructionError;

#[derive(Clone, Debug)]
pub struct EffectivizeRun {
    pub prefix: SetPrefix,
    pub trace: ConstructionTrace,
    /// `(stage, e, y_s)` for every removal.
    pub removals: Vec<(u64, usize, u64)>,
    /// Every `e` below this either acted or had nothing left to act on at
    /// the horizon, so `W_e ⊆ Q` forces `W_e ⊆ {r_0, …, r_{2e-1}}`.
    pub settled_below: usize,
}

/// `programs[e]` plays `W_e`, evaluated as `W_{e,budget}`. At stage `s < S`
/// the least `e ≤ s` that has not acted and meets `{r_{2e}, r_{2e+1}, …}`
/// removes the least element of that intersection. Each `e` acts at most once.
pub fn effectivize_inside(
    r: &SetPrefix,
    stages: u64,
    budget: u64,
    programs: &[ProgramCode],
) -> Result<EffectivizeRun, ConstructionError> {
    if stages == 0 {
        return Err(ConstructionError::ZeroHorizon);
    }
    let members = r.principal();
    let need = 2 * stages as usize;
    if members.len() < need {
        return Err(ConstructionError::TooFewMembers {
            have: members.len(),
            need,
        });
    }
    let mut domains: HashMap<usize, FiniteSet> = HashMap::new();
    let mut domain = |e: usize| {
        domains
            .entry(e)
            .or_insert_with(|| we_bounded(&programs[e], StepBudget(budget), None))
            .clone()
    };
    let tail_hit = |w: &FiniteSet, e: usize| -> Option<u64> {
        members.iter().skip(2 * e).copied().find(|&x| w.contains(x))
    };
    let mut acted = BTreeSet::new();
    let mut removed = BTreeSet::new();
    let mut removals = Vec::new();
    let mut trace = ConstructionTrace::default();
    trace.push(StageRecord::new(0, "init", "Q").adding(r.members().clone()));
    for s in 0..stages {
        let upto = (s as usize).min(programs.len().saturating_sub(1));
        if programs.is_empty() {
            break;
        }
        for e in 0..=upto {
            if acted.contains(&e) {
                continue;
            }
            if let Some(y) = tail_hit(&domain(e), e) {
                acted.insert(e);
                removed.insert(y);
                removals.push((s, e, y));
                trace.push(
                    StageRecord::new(s, "remove", "Q")
                        .removing(FiniteSet::new([y]))
                        .note("e", e),
                );
                break;
            }
        }
    }
    let settled_below = (0..programs.len())
        .find(|&e| !acted.contains(&e) && tail_hit(&domain(e), e).is_some())
        .unwrap_or(programs.len());
    let q = r
        .members()
        .difference(&FiniteSet::from_sorted(removed.into_iter().collect()));
    let prefix = SetPrefix::new(q, r.length()).expect("subset of R");
    Ok(EffectivizeRun {
        prefix,
        trace,
        removals,
        settled_below,
    })
}
