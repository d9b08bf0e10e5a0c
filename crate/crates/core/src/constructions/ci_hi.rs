//! Canonical immunity with modulus `i ↦ i` plus hyperimmunity against a list
//! of total functions.

use std::collections::HashSet;

use num_traits::ToPrimitive;

use crate::machine::eval::eval_total_u64;
use crate::machine::Program;
use crate::numberings::Registry;
use crate::sets::{FiniteSet, SetPrefix};

use super::trace::{ConstructionTrace, StageRecord};
use super::{ConstructionError, PoolCache};

#[derive(Clone, Debug)]
pub struct CiHiRun {
    pub prefix: SetPrefix,
    pub trace: ConstructionTrace,
    /// `x_0 < x_1 < …`.
    pub principal: Vec<u64>,
    /// `f_s(s)` for each stage, the value `x_s` had to exceed.
    pub thresholds: Vec<u64>,
}

/// Evaluates a total unary program at `x` as a `u64`.
pub(crate) fn apply_u64(f: &Program, x: u64) -> Result<u64, ConstructionError> {
    eval_total_u64(f, &[x])
        .map_err(|_| ConstructionError::NotTotal)?
        .to_u64()
        .ok_or(ConstructionError::Overflow)
}

/// `x_s` is the least value outside
/// `F_s = ⋃{D_e(i) : e, i ≤ s, |D_e(i)| > i}` above both `x_{s-1}` and
/// `f_s(s)`. A finite list of functions is cycled: stage `s` uses
/// `fns[s mod len]`.
pub fn ci_hi_run(
    reg: &Registry,
    fns: &[Program],
    stages: u64,
) -> Result<CiHiRun, ConstructionError> {
    if stages == 0 {
        return Err(ConstructionError::ZeroHorizon);
    }
    if fns.is_empty() || fns.iter().any(|f| !f.is_total_tier()) {
        return Err(ConstructionError::NotTotal);
    }
    let mut pool = PoolCache::new(reg);
    let mut forbidden: HashSet<u64> = HashSet::new();
    let mut principal = Vec::new();
    let mut thresholds = Vec::new();
    let mut trace = ConstructionTrace::default();
    for s in 0..stages {
        // bring in every (e, i) with max(e, i) = s
        for e in 0..reg.len().min(s as usize + 1) {
            let mut add = |i: u64| {
                let d = pool.get(e, i);
                if d.len() as u64 > i {
                    forbidden.extend(d.iter());
                }
            };
            add(s);
            if e as u64 == s {
                for i in 0..s {
                    add(i);
                }
            }
        }
        let t = apply_u64(&fns[(s % fns.len() as u64) as usize], s)?;
        let mut x = principal.last().map_or(0, |&p: &u64| p + 1).max(t + 1);
        while forbidden.contains(&x) {
            x += 1;
        }
        principal.push(x);
        thresholds.push(t);
        trace.push(
            StageRecord::new(s, "choose", "R")
                .adding(FiniteSet::new([x]))
                .note("f", t),
        );
    }
    let prefix = SetPrefix::tight(FiniteSet::from_sorted(principal.clone()));
    Ok(CiHiRun {
        prefix,
        trace,
        principal,
        thresholds,
    })
}
