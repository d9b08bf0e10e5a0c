//! Folding a schedule of transformers into a condition chain.

use std::fmt;

use crate::machine::{Program, ProgramCode};
use crate::numberings::{CanonicalRule, Registry};
use crate::sets::{FiniteSet, SetPrefix};

use super::condition::{extends, meet_avoidance, meet_size, thin_for_numbering, Condition};
use super::deh::{meet_d_eh, MeetOutcome};
use super::set::ComputableSet;
use super::MathiasError;

#[derive(Clone, Debug)]
pub enum Transformer {
    /// `meet_size(·, n)`.
    Size(usize),
    /// `meet_size(·, |a| + k)`.
    Grow(usize),
    Thin {
        id: usize,
        rule: CanonicalRule,
        count: u64,
    },
    Avoid(u64),
    Deh {
        e: ProgramCode,
        h: Program,
        budget: u64,
        verify_budget: u64,
    },
    /// Adds elements to the stem without consulting the reservoir. Only
    /// useful for exercising the extension guard.
    InjectStem(FiniteSet),
}

impl fmt::Display for Transformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transformer::Size(n) => write!(f, "size({n})"),
            Transformer::Grow(k) => write!(f, "grow({k})"),
            Transformer::Thin { id, count, .. } => write!(f, "thin(D{id},{count})"),
            Transformer::Avoid(n) => write!(f, "avoid({n})"),
            Transformer::Deh { e, .. } => write!(f, "deh({e})"),
            Transformer::InjectStem(s) => write!(f, "inject({s})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLink {
    pub step: usize,
    pub name: String,
    pub condition: Condition,
}

/// `chain<TAB>step<TAB>name<TAB>[stem]<TAB>enumerator code`.
impl fmt::Display for ChainLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chain\t{}\t{}\t{}", self.step, self.name, self.condition)
    }
}

impl std::str::FromStr for ChainLink {
    type Err = MathiasError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MathiasError::Parse(s.to_string());
        let mut parts = s.splitn(4, '\t');
        if parts.next() != Some("chain") {
            return Err(bad());
        }
        let step = parts.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let name = parts.next().ok_or_else(bad)?.to_string();
        let condition = parts.next().ok_or_else(bad)?.parse()?;
        Ok(ChainLink {
            step,
            name,
            condition,
        })
    }
}

#[derive(Clone, Debug)]
pub struct GenericRun {
    pub chain: Vec<ChainLink>,
    /// The final stem, known up to the least reservoir element.
    pub prefix: SetPrefix,
    pub missed_blocks: Vec<u64>,
    /// `(numbering id, |a|)` at each thinning: the implication holds from `|a|` on.
    pub thin_starts: Vec<(usize, u64)>,
    pub deh: Vec<MeetOutcome>,
}

/// Applies `schedule` to `start`, checking every step extends the previous
/// condition with reservoirs compared below `horizon`.
pub fn build_generic(
    start: Condition,
    schedule: &[Transformer],
    horizon: u64,
) -> Result<GenericRun, MathiasError> {
    let mut chain = vec![ChainLink {
        step: 0,
        name: "start".into(),
        condition: start,
    }];
    let mut missed_blocks = Vec::new();
    let mut thin_starts = Vec::new();
    let mut deh = Vec::new();
    for (n, t) in schedule.iter().enumerate() {
        let c = &chain.last().expect("chain starts nonempty").condition;
        let next = match t {
            Transformer::Size(n) => meet_size(c, *n)?,
            Transformer::Grow(k) => meet_size(c, c.stem().len() + k)?,
            Transformer::Thin { id, rule, count } => {
                thin_starts.push((*id, c.stem().len() as u64));
                thin_for_numbering(c, rule, *count)?
            }
            Transformer::Avoid(count) => {
                let (next, missed) = meet_avoidance(c, *count)?;
                missed_blocks.extend(missed);
                next
            }
            Transformer::Deh {
                e,
                h,
                budget,
                verify_budget,
            } => {
                let out = meet_d_eh(c, e, h, *budget, *verify_budget)?;
                let next = match &out {
                    MeetOutcome::Met { condition, .. } => condition.clone(),
                    MeetOutcome::Unresolved { .. } => c.clone(),
                };
                deh.push(out);
                next
            }
            Transformer::InjectStem(extra) => {
                let stem = c.stem().union(extra);
                let top = stem.max().unwrap_or(0);
                Condition::new(stem, c.reservoir().above(top)?)?
            }
        };
        let check = extends(&next, c, horizon)?;
        if let Some(failure) = check.failure {
            return Err(MathiasError::ExtensionViolated {
                step: n + 1,
                name: t.to_string(),
                reason: failure.to_string(),
            });
        }
        chain.push(ChainLink {
            step: n + 1,
            name: t.to_string(),
            condition: next,
        });
    }
    let last = &chain.last().expect("nonempty").condition;
    let prefix = SetPrefix::new(last.stem().clone(), last.reservoir().min()?)
        .expect("stem lies below the reservoir");
    Ok(GenericRun {
        chain,
        prefix,
        missed_blocks,
        thin_starts,
        deh,
    })
}

/// One thinning per pool numbering, then block avoidance, each followed by
/// stem growth, so the stem keeps pace with the families met.
pub fn full_schedule(pool: &Registry, thin_count: u64, avoid_count: u64) -> Vec<Transformer> {
    let mut out = Vec::new();
    for d in pool.iter() {
        out.push(Transformer::Thin {
            id: d.id,
            rule: d.rule.clone(),
            count: thin_count,
        });
        out.push(Transformer::Grow(1));
    }
    out.push(Transformer::Avoid(avoid_count));
    out.push(Transformer::Grow(avoid_count as usize));
    out
}

/// `[∅, ω]`, the usual start.
pub fn omega_start() -> Condition {
    Condition::new(FiniteSet::empty(), ComputableSet::omega()).expect("empty stem")
}
