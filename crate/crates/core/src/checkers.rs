//! Horizon-stamped verdicts for canonical immunity, domination and
//! effective immunity. A `Pass` only ever speaks about the stated horizon.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::machine::{eval_total, we_bounded, Nat, Program, ProgramCode, StepBudget};
use crate::numberings::Registry;
use crate::sets::{FiniteSet, SetPrefix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("bound function is not in the total tier")]
    NotTotal,
    #[error("malformed verdict line {0:?}")]
    Parse(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `D_id(i) ⊆ prefix` with `|D_id(i)| > h(i)`.
    Immunity {
        id: usize,
        i: u64,
        set: FiniteSet,
        bound: Nat,
    },
    /// `principal(s) > f(s)`.
    Exceedance { s: u64, value: u64, bound: Nat },
    /// `W_{e,budget} ⊆ prefix` with `|W_{e,budget}| > h(e)`.
    Effective {
        e: usize,
        set: FiniteSet,
        bound: Nat,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// Never empty.
    Fail(Vec<Violation>),
    Inconclusive(String),
}

/// The exact scope of a verdict.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Horizon {
    pub check: String,
    /// Inclusive index range.
    pub lo: u64,
    pub hi: u64,
    pub budget: Option<u64>,
    pub pool: Vec<usize>,
    pub length: u64,
    /// `(id, i)` pairs whose value reaches past the prefix.
    pub skipped: Vec<(usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub horizon: Horizon,
}

impl Verdict {
    fn from_violations(violations: Vec<Violation>, horizon: Horizon) -> Self {
        let status = if violations.is_empty() {
            Status::Pass
        } else {
            Status::Fail(violations)
        };
        Verdict { status, horizon }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        matches!(self.status, Status::Fail(_))
    }

    pub fn violations(&self) -> &[Violation] {
        match &self.status {
            Status::Fail(v) => v,
            _ => &[],
        }
    }
}

fn bound(h: &Program, x: u64) -> Result<Nat, CheckError> {
    eval_total(h, &[Nat::from(x)])
        .map(|r| r.value)
        .map_err(|_| CheckError::NotTotal)
}

/// Scans every pool entry `D` and `i ∈ [k_map(D), index_bound]`. Entries
/// with `max D(i) ≥ length` cannot be decided and are recorded as skipped.
pub fn check_canonical_immunity(
    prefix: &SetPrefix,
    h: &Program,
    pool: &Registry,
    k_map: impl Fn(usize) -> u64,
    index_bound: u64,
) -> Result<Verdict, CheckError> {
    check_canonical_immunity_with(prefix, |_| h.clone(), pool, k_map, index_bound)
}

/// As [`check_canonical_immunity`], with modulus `moduli(id)` for `D_id`.
pub fn check_canonical_immunity_with(
    prefix: &SetPrefix,
    moduli: impl Fn(usize) -> Program,
    pool: &Registry,
    k_map: impl Fn(usize) -> u64,
    index_bound: u64,
) -> Result<Verdict, CheckError> {
    let mut violations = Vec::new();
    let mut skipped = Vec::new();
    let lo = pool.ids().into_iter().map(&k_map).min().unwrap_or(0);
    for d in pool.iter() {
        let h = moduli(d.id);
        if !h.is_total_tier() {
            return Err(CheckError::NotTotal);
        }
        for i in k_map(d.id)..=index_bound {
            let set = d.value(i);
            if set.max().is_some_and(|m| m >= prefix.length()) {
                skipped.push((d.id, i));
                continue;
            }
            if !prefix.includes(&set) {
                continue;
            }
            let hi = bound(&h, i)?;
            if BigUint::from(set.len()) > hi {
                violations.push(Violation::Immunity {
                    id: d.id,
                    i,
                    set,
                    bound: hi,
                });
            }
        }
    }
    let horizon = Horizon {
        check: "immunity".into(),
        lo,
        hi: index_bound,
        budget: None,
        pool: pool.ids(),
        length: prefix.length(),
        skipped,
    };
    Ok(Verdict::from_violations(violations, horizon))
}

/// Whether the principal function counts members from 0 or from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Indexing {
    FromZero,
    FromOne,
}

/// `Fail` lists every `s ∈ [lo, hi]` with `principal(s) > f(s)`: evidence
/// that `f` does not dominate. `Pass` means `f` bounds the whole range.
pub fn refute_domination(
    principal: &[u64],
    f: &Program,
    lo: u64,
    hi: u64,
    indexing: Indexing,
) -> Result<Verdict, CheckError> {
    if !f.is_total_tier() {
        return Err(CheckError::NotTotal);
    }
    let horizon = Horizon {
        check: "domination".into(),
        lo,
        hi,
        length: principal.len() as u64,
        ..Horizon::default()
    };
    let base = match indexing {
        Indexing::FromZero => 0,
        Indexing::FromOne => 1,
    };
    if lo < base || hi - base >= principal.len() as u64 {
        return Ok(Verdict {
            status: Status::Inconclusive(format!(
                "range [{lo}, {hi}] needs more than {} members",
                principal.len()
            )),
            horizon,
        });
    }
    let mut violations = Vec::new();
    for s in lo..=hi {
        let value = principal[(s - base) as usize];
        let fs = bound(f, s)?;
        if BigUint::from(value) > fs {
            violations.push(Violation::Exceedance {
                s,
                value,
                bound: fs,
            });
        }
    }
    Ok(Verdict::from_violations(violations, horizon))
}

/// `Fail` iff some `e ∈ [lo, hi]` has `W_{e,budget}` inside the prefix
/// members with more than `h(e)` elements.
pub fn check_effective_immunity(
    prefix: &SetPrefix,
    h: &Program,
    programs: &[ProgramCode],
    lo: usize,
    hi: usize,
    budget: u64,
) -> Result<Verdict, CheckError> {
    if !h.is_total_tier() {
        return Err(CheckError::NotTotal);
    }
    let mut violations = Vec::new();
    let hi = hi.min(programs.len().saturating_sub(1));
    for (e, code) in programs.iter().enumerate().take(hi + 1).skip(lo) {
        let w = we_bounded(code, StepBudget(budget), None);
        if w.max().is_some_and(|m| m >= prefix.length()) || !prefix.includes(&w) {
            continue;
        }
        let he = bound(h, e as u64)?;
        if BigUint::from(w.len()) > he {
            violations.push(Violation::Effective {
                e,
                set: w,
                bound: he,
            });
        }
    }
    let horizon = Horizon {
        check: "effective".into(),
        lo: lo as u64,
        hi: hi as u64,
        budget: Some(budget),
        length: prefix.length(),
        ..Horizon::default()
    };
    Ok(Verdict::from_violations(violations, horizon))
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Immunity { id, i, set, bound } => {
                write!(f, "violation\timmunity\t{id}\t{i}\t{set}\t{bound}")
            }
            Violation::Exceedance { s, value, bound } => {
                write!(f, "violation\texceed\t{s}\t{value}\t{bound}")
            }
            Violation::Effective { e, set, bound } => {
                write!(f, "violation\teffective\t{e}\t{set}\t{bound}")
            }
        }
    }
}

/// Header line, one line per violation and skipped entry, and `end`.
impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = &self.horizon;
        let status = match &self.status {
            Status::Pass => "pass",
            Status::Fail(_) => "fail",
            Status::Inconclusive(_) => "inconclusive",
        };
        let budget = h.budget.map_or("-".to_string(), |b| b.to_string());
        let pool: FiniteSet = h.pool.iter().map(|&p| p as u64).collect();
        writeln!(
            f,
            "verdict\t{}\t{status}\t{}\t{}\t{budget}\t{pool}\t{}",
            h.check, h.lo, h.hi, h.length
        )?;
        match &self.status {
            Status::Fail(v) => {
                for x in v {
                    writeln!(f, "{x}")?;
                }
            }
            Status::Inconclusive(reason) => writeln!(f, "reason\t{reason}")?,
            Status::Pass => {}
        }
        for (id, i) in &h.skipped {
            writeln!(f, "skipped\t{id}\t{i}")?;
        }
        writeln!(f, "end")
    }
}

impl FromStr for Violation {
    type Err = CheckError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CheckError::Parse(s.to_string());
        let f: Vec<&str> = s.split('\t').collect();
        if f.len() != 6 || f[0] != "violation" {
            return Err(bad());
        }
        let n = |k: usize| f[k].parse::<u64>().map_err(|_| bad());
        let bound: Nat = f[5].parse().map_err(|_| bad())?;
        let set = || f[4].parse::<FiniteSet>().map_err(|_| bad());
        Ok(match f[1] {
            "immunity" => Violation::Immunity {
                id: n(2)? as usize,
                i: n(3)?,
                set: set()?,
                bound,
            },
            "exceed" => Violation::Exceedance {
                s: n(2)?,
                value: n(4)?,
                bound,
            },
            "effective" => Violation::Effective {
                e: n(2)? as usize,
                set: set()?,
                bound,
            },
            _ => return Err(bad()),
        })
    }
}

impl FromStr for Verdict {
    type Err = CheckError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |l: &str| CheckError::Parse(l.to_string());
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or_else(|| bad(s))?;
        let f: Vec<&str> = head.split('\t').collect();
        if f.len() != 8 || f[0] != "verdict" {
            return Err(bad(head));
        }
        let n = |k: usize| f[k].parse::<u64>().map_err(|_| bad(head));
        let pool: FiniteSet = f[6].parse().map_err(|_| bad(head))?;
        let mut horizon = Horizon {
            check: f[1].to_string(),
            lo: n(3)?,
            hi: n(4)?,
            budget: if f[5] == "-" { None } else { Some(n(5)?) },
            pool: pool.iter().map(|p| p as usize).collect(),
            length: n(7)?,
            skipped: Vec::new(),
        };
        let mut violations = Vec::new();
        let mut reason = None;
        for line in lines {
            if line == "end" {
                break;
            } else if line.starts_with("violation\t") {
                violations.push(line.parse()?);
            } else if let Some(r) = line.strip_prefix("reason\t") {
                reason = Some(r.to_string());
            } else if let Some(rest) = line.strip_prefix("skipped\t") {
                let (id, i) = rest.split_once('\t').ok_or_else(|| bad(line))?;
                horizon.skipped.push((
                    id.parse().map_err(|_| bad(line))?,
                    i.parse().map_err(|_| bad(line))?,
                ));
            } else {
                return Err(bad(line));
            }
        }
        let status = match f[2] {
            "pass" => Status::Pass,
            "fail" if !violations.is_empty() => Status::Fail(violations),
            "inconclusive" => Status::Inconclusive(reason.unwrap_or_default()),
            _ => return Err(bad(head)),
        };
        Ok(Verdict { status, horizon })
    }
}
