//! Canonical numberings: total rules `i ↦ D(i)` into finite sets, a registry
//! standing in for "all canonical numberings", and stage approximations over
//! raw program codes.

mod builders;
pub mod pool;

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::machine::build::{bit, bitlen, call, monus, proj};
use crate::machine::eval::{eval_total, run, MAX_EVAL_DEPTH};
use crate::machine::{Nat, Program, ProgramCode, StepBudget};
use crate::sets::FiniteSet;

pub use builders::{adversarial_block_start, adversarial_numbering, witness_numbering};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumberingError {
    #[error("numbering rule is not in the total tier")]
    NotTotalTier,
    #[error("numbering rule nests deeper than the interpreter allows")]
    TooDeep,
    #[error("malformed registry line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A total-tier rule `i ↦ canonical code of D(i)`, not yet registered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalRule {
    program: Program,
    surjective: bool,
}

impl CanonicalRule {
    pub fn new(program: Program) -> Result<Self, NumberingError> {
        Self::with_flag(program, false)
    }

    /// `surjective` is an evidence tag; it is not verified.
    pub fn with_flag(program: Program, surjective: bool) -> Result<Self, NumberingError> {
        if !program.is_total_tier() {
            return Err(NumberingError::NotTotalTier);
        }
        if program.depth() >= MAX_EVAL_DEPTH / 2 {
            return Err(NumberingError::TooDeep);
        }
        Ok(CanonicalRule {
            program,
            surjective,
        })
    }

    /// `D(i) = decode(i)`.
    pub fn standard() -> Self {
        CanonicalRule {
            program: proj(0),
            surjective: true,
        }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn code(&self) -> ProgramCode {
        self.program.code()
    }

    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    /// Canonical code of `D(i)`.
    pub fn code_at(&self, i: &Nat) -> Nat {
        eval_total(&self.program, std::slice::from_ref(i))
            .expect("registered rules are total and shallow")
            .value
    }

    pub fn value(&self, i: u64) -> FiniteSet {
        FiniteSet::from_code(&self.code_at(&Nat::from(i)))
    }

    /// `(i, x) ↦ [x ∈ D(i)]` as a total-tier program.
    pub fn membership_program(&self) -> Program {
        bit(call(self.program.clone(), vec![proj(0)]), proj(1))
    }

    /// `i ↦ max(D(i)) + 1`, and `0` on an empty `D(i)`, as a total-tier program.
    pub fn max_program(&self) -> Program {
        bitlen(call(self.program.clone(), vec![proj(0)]))
    }

    pub fn contains(&self, i: u64, x: u64) -> bool {
        let r = eval_total(&self.membership_program(), &[Nat::from(i), Nat::from(x)])
            .expect("membership programs of registered rules are total");
        r.value == Nat::from(1u32)
    }

    /// `max(D(i))`, undefined on the empty set.
    pub fn max(&self, i: u64) -> Option<u64> {
        let r = eval_total(&self.max_program(), &[Nat::from(i)])
            .expect("max programs of registered rules are total");
        let len = r.value.to_u64().expect("max fits in u64");
        len.checked_sub(1)
    }

    /// `i ↦ max(D(i))` with the empty set sent to 0.
    pub fn max_or_zero_program(&self) -> Program {
        monus(self.max_program(), crate::machine::build::konst(1u32))
    }
}

/// A registered numbering `D_id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Numbering {
    pub id: usize,
    pub rule: CanonicalRule,
}

impl std::ops::Deref for Numbering {
    type Target = CanonicalRule;

    fn deref(&self) -> &CanonicalRule {
        &self.rule
    }
}

/// Ordered, append-only list of numberings with deterministic ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    entries: Vec<Numbering>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// Registers a raw total-tier program; the surjectivity tag is off.
    pub fn register(&mut self, program: Program) -> Result<&Numbering, NumberingError> {
        let rule = CanonicalRule::new(program)?;
        Ok(self.register_rule(rule))
    }

    pub fn register_rule(&mut self, rule: CanonicalRule) -> &Numbering {
        let id = self.entries.len();
        self.entries.push(Numbering { id, rule });
        &self.entries[id]
    }

    pub fn get(&self, id: usize) -> Option<&Numbering> {
        self.entries.get(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Numbering> {
        self.entries.iter()
    }

    pub fn ids(&self) -> Vec<usize> {
        (0..self.entries.len()).collect()
    }

    /// Rule programs in id order, for constructions that work over raw codes.
    pub fn programs(&self) -> Vec<Program> {
        self.entries.iter().map(|n| n.program.clone()).collect()
    }
}

/// One record per line: `id<TAB>rule code<TAB>surjective`.
impl fmt::Display for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.entries {
            writeln!(f, "{}\t{}\t{}", n.id, n.rule.code(), n.rule.surjective)?;
        }
        Ok(())
    }
}

impl FromStr for Registry {
    type Err = NumberingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut reg = Registry::new();
        for (line_no, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: &str| NumberingError::Parse {
                line: line_no + 1,
                reason: reason.to_string(),
            };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(bad("expected three tab-separated fields"));
            }
            let id: usize = fields[0].parse().map_err(|_| bad("bad id"))?;
            if id != reg.len() {
                return Err(bad("ids must be consecutive from 0"));
            }
            let code: ProgramCode = fields[1].parse().map_err(|_| bad("bad rule code"))?;
            let surjective: bool = fields[2].parse().map_err(|_| bad("bad surjective flag"))?;
            let rule = CanonicalRule::with_flag(code.decode(), surjective)?;
            reg.register_rule(rule);
        }
        Ok(reg)
    }
}

/// `decode(i)`: the standard canonical numbering.
pub fn standard_numbering(i: &Nat) -> FiniteSet {
    FiniteSet::from_code(i)
}

/// First budget at which `p(i)` converges, with the decoded value, if that
/// happens within `cap` steps.
pub fn convergence(p: &Program, i: u64, cap: u64) -> Option<(u64, FiniteSet)> {
    let r = run(p, &[Nat::from(i)], cap, None);
    r.outcome
        .value()
        .map(|v| (r.steps, FiniteSet::from_code(v)))
}

/// `D_{e,s}(i)`: `φ_e(i)` decoded if it converges within `s` steps, else `∅`.
pub fn stage_approx(e: &ProgramCode, i: u64, s: StepBudget) -> FiniteSet {
    convergence(&e.decode(), i, s.0)
        .map(|(_, v)| v)
        .unwrap_or_default()
}
