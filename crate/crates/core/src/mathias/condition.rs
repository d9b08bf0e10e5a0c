//! Mathias conditions `[a, A]` and the transformers that meet dense families.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::machine::ProgramCode;
use crate::numberings::CanonicalRule;
use crate::schnorr::{block_max, first_block_above};
use crate::sets::FiniteSet;

use super::set::ComputableSet;
use super::MathiasError;

/// Stem `a` and reservoir `A` with `max(a) < min(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    stem: FiniteSet,
    reservoir: ComputableSet,
}

impl Condition {
    pub fn new(stem: FiniteSet, reservoir: ComputableSet) -> Result<Self, MathiasError> {
        if let Some(m) = stem.max() {
            let r = reservoir.min()?;
            if m >= r {
                return Err(MathiasError::StemAboveReservoir {
                    stem_max: m,
                    reservoir_min: r,
                });
            }
        }
        Ok(Condition { stem, reservoir })
    }

    /// `[∅, ω]`.
    pub fn full() -> Self {
        Condition {
            stem: FiniteSet::empty(),
            reservoir: ComputableSet::omega(),
        }
    }

    pub fn stem(&self) -> &FiniteSet {
        &self.stem
    }

    pub fn reservoir(&self) -> &ComputableSet {
        &self.reservoir
    }

    /// `(a ∪ A) ∩ [0, bound)`, the largest set the condition allows there.
    pub fn allowed_below(&self, bound: u64) -> Result<FiniteSet, MathiasError> {
        Ok(self.stem.union(&self.reservoir.below(bound)?))
    }
}

/// `[stem]<TAB>enumerator code`.
impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.stem, self.reservoir)
    }
}

impl FromStr for Condition {
    type Err = MathiasError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MathiasError::Parse(s.to_string());
        let (stem, code) = s.split_once('\t').ok_or_else(bad)?;
        let stem: FiniteSet = stem.parse().map_err(|_| bad())?;
        let code: ProgramCode = code.parse().map_err(|_| bad())?;
        Condition::new(stem, ComputableSet::from_code(&code)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionFailure {
    /// A parent stem element is missing from the child stem.
    StemDropped(u64),
    /// A new stem element is not in the parent reservoir.
    StemOutsideReservoir(u64),
    /// A child reservoir element below the horizon is not in the parent reservoir.
    ReservoirEscapes(u64),
}

impl fmt::Display for ExtensionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionFailure::StemDropped(x) => write!(f, "stem element {x} dropped"),
            ExtensionFailure::StemOutsideReservoir(x) => {
                write!(f, "new stem element {x} is outside the parent reservoir")
            }
            ExtensionFailure::ReservoirEscapes(x) => {
                write!(f, "reservoir element {x} is outside the parent reservoir")
            }
        }
    }
}

/// Outcome of [`extends`]. The reservoir clause is verified below `horizon` only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension {
    pub horizon: u64,
    pub failure: Option<ExtensionFailure>,
}

impl Extension {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// `[b, B] ≤ [a, A]`: `a ⊆ b`, `b ∖ a ⊆ A`, and `B ⊆ A` below `horizon`.
pub fn extends(
    child: &Condition,
    parent: &Condition,
    horizon: u64,
) -> Result<Extension, MathiasError> {
    let failure = (|| {
        if let Some(x) = parent.stem.iter().find(|&x| !child.stem.contains(x)) {
            return Ok(Some(ExtensionFailure::StemDropped(x)));
        }
        let new = child.stem.difference(&parent.stem);
        if let Some(top) = new.max() {
            let a = parent.reservoir.below(top + 1)?;
            if let Some(x) = new.iter().find(|&x| !a.contains(x)) {
                return Ok(Some(ExtensionFailure::StemOutsideReservoir(x)));
            }
        }
        let b = child.reservoir.below(horizon)?;
        let a = parent.reservoir.below(horizon)?;
        let escaped = b.iter().find(|&x| !a.contains(x));
        Ok::<_, MathiasError>(escaped.map(ExtensionFailure::ReservoirEscapes))
    })()?;
    Ok(Extension { horizon, failure })
}

/// Promotes the least `(n - |a|)⁺` reservoir elements into the stem.
pub fn meet_size(c: &Condition, n: usize) -> Result<Condition, MathiasError> {
    let k = n.saturating_sub(c.stem.len()) as u64;
    if k == 0 {
        return Ok(c.clone());
    }
    let promoted = c.reservoir.take(k)?;
    Condition::new(c.stem.union(&FiniteSet::new(promoted)), c.reservoir.drop(k))
}

/// Thins the reservoir against `D` so that `D(i) ⊆ a ∪ B` implies `|D(i)| ≤ i`
/// for `i ∈ [|a|, |a| + count]`.
///
/// The `i`th new element (for `i = |a|+1, …, |a|+count`) is the least
/// reservoir element, past the previous choice, outside `⋃_{|a| ≤ j < i} D(j)`.
/// The reservoir then continues with `A` above `⋃_{|a| ≤ j ≤ |a|+count} D(j)`.
pub fn thin_for_numbering(
    c: &Condition,
    d: &CanonicalRule,
    count: u64,
) -> Result<Condition, MathiasError> {
    let k = c.stem.len() as u64;
    let a = &c.reservoir;
    let mut avoid = BTreeSet::new();
    let mut head = Vec::with_capacity(count as usize);
    let mut next = 0u64;
    for i in k + 1..=k + count {
        avoid.extend(d.value(i - 1).iter());
        loop {
            let x = a.nth(next)?;
            next += 1;
            if head.last().is_some_and(|&p| p >= x) {
                return Err(MathiasError::NotIncreasing { n: next - 1 });
            }
            if !avoid.contains(&x) {
                head.push(x);
                break;
            }
        }
    }
    avoid.extend(d.value(k + count).iter());
    let floor = avoid
        .last()
        .copied()
        .into_iter()
        .chain(head.last().copied())
        .max();
    let offset = match floor {
        Some(m) => a.index_from(next, m)?,
        None => next,
    };
    Condition::new(c.stem.clone(), ComputableSet::with_head(&head, a, offset)?)
}

/// Indices `i ∈ [lo, hi]` where `D(i) ⊆ a ∪ A` but `|D(i)| > i`.
pub fn thinning_violations(
    c: &Condition,
    d: &CanonicalRule,
    lo: u64,
    hi: u64,
) -> Result<Vec<u64>, MathiasError> {
    let mut out = Vec::new();
    for i in lo..=hi {
        let di = d.value(i);
        if di.len() as u64 <= i {
            continue;
        }
        let top = di.max().expect("nonempty");
        if di.is_subset(&c.allowed_below(top + 1)?) {
            out.push(i);
        }
    }
    Ok(out)
}

/// Greedy block avoidance: from the least block `F_{i_0}` above the stem,
/// take `x` = least reservoir element above `max F_{i_p}`, then let
/// `F_{i_{p+1}}` be the least block starting above `x`. Returns the new
/// condition and the `count` blocks it misses.
pub fn meet_avoidance(c: &Condition, count: u64) -> Result<(Condition, Vec<u64>), MathiasError> {
    if count == 0 {
        return Ok((c.clone(), Vec::new()));
    }
    let a = &c.reservoir;
    let mut block = c.stem.max().map_or(1, first_block_above);
    let mut missed = Vec::with_capacity(count as usize);
    let mut head = Vec::with_capacity(count as usize);
    let mut next = 0u64;
    for _ in 0..count {
        missed.push(block);
        next = a.index_from(next, block_max(block))?;
        let x = a.nth(next)?;
        head.push(x);
        next += 1;
        block = first_block_above(x);
    }
    let c = Condition::new(c.stem.clone(), ComputableSet::with_head(&head, a, next)?)?;
    Ok((c, missed))
}
