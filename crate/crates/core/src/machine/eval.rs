//! Step-bounded interpreter.
//!
//! Cost model: every node visit costs one step. Primitives additionally pay
//! one step per 64-bit limb of their result beyond the first, and decoding a
//! program code pays one step per extra limb of the code. `pow2` is charged
//! before its result is allocated. A run converges at budget `s` exactly when
//! its total cost is at most `s`, so outcomes are monotone in the budget.
//!
//! Recursion deeper than [`MAX_EVAL_DEPTH`] frames counts as divergence. The
//! depth reached is a property of the computation path, not of the budget, so
//! this keeps monotonicity.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::codec::{decode, extra_limbs, ProgramCode};
use super::pairing::{pair_nat, unpair_nat};
use super::program::{Nat, Op, Program};
use super::recursion::smn_program;
use crate::sets::FiniteSet;

pub const MAX_EVAL_DEPTH: usize = 2000;

/// Number of interpreter steps a run may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepBudget(pub u64);

impl From<u64> for StepBudget {
    fn from(s: u64) -> Self {
        StepBudget(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PartialOutcome {
    Diverged,
    Converged(Nat),
}

impl PartialOutcome {
    pub fn is_converged(&self) -> bool {
        matches!(self, PartialOutcome::Converged(_))
    }

    pub fn value(&self) -> Option<&Nat> {
        match self {
            PartialOutcome::Converged(v) => Some(v),
            PartialOutcome::Diverged => None,
        }
    }
}

/// Why a run stopped without a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Halt {
    OutOfFuel,
    /// An oracle query fell outside the oracle string.
    OracleMiss,
    TooDeep,
}

/// Finite prefix of a characteristic function, used as an oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OracleString {
    bits: Vec<bool>,
}

impl OracleString {
    pub fn new(bits: Vec<bool>) -> Self {
        OracleString { bits }
    }

    pub fn empty() -> Self {
        OracleString::default()
    }

    /// `χ_F`: the string of length `max(F) + 1` with ones exactly on `F`.
    pub fn characteristic(set: &FiniteSet) -> Self {
        let len = set.max().map_or(0, |m| m as usize + 1);
        let mut bits = vec![false; len];
        for &x in set.elements() {
            bits[x as usize] = true;
        }
        OracleString { bits }
    }

    /// `χ` of the finite set with canonical code `code`.
    pub fn of_set_code(code: &Nat) -> Self {
        let len = code.bits() as usize;
        let bits = (0..len).map(|i| code.bit(i as u64)).collect();
        OracleString { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_prefix_of(&self, other: &OracleString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn concat(&self, other: &OracleString) -> OracleString {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        OracleString { bits }
    }

    pub fn push(&mut self, b: bool) {
        self.bits.push(b);
    }

    /// Positions holding a one.
    pub fn ones(&self) -> FiniteSet {
        FiniteSet::from_sorted(
            self.bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i as u64)
                .collect(),
        )
    }
}

impl fmt::Display for OracleString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("oracle strings are written over {{0,1}}, found {0:?}")]
pub struct OracleParseError(char);

impl FromStr for OracleString {
    type Err = OracleParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(OracleParseError(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(OracleString::new)
    }
}

/// Outcome of one metered run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub outcome: PartialOutcome,
    /// Steps consumed; equals the budget when fuel ran out.
    pub steps: u64,
    pub halt: Option<Halt>,
}

struct Interp<'o> {
    fuel: u64,
    used: u64,
    oracle: Option<&'o OracleString>,
    depth: usize,
}

fn bool_nat(b: bool) -> Nat {
    if b {
        Nat::one()
    } else {
        Nat::zero()
    }
}

fn arg(args: &[Nat], i: usize) -> Nat {
    args.get(i).cloned().unwrap_or_default()
}

impl<'o> Interp<'o> {
    fn charge(&mut self, n: u64) -> Result<(), Halt> {
        if n > self.fuel {
            self.used += self.fuel;
            self.fuel = 0;
            Err(Halt::OutOfFuel)
        } else {
            self.fuel -= n;
            self.used += n;
            Ok(())
        }
    }

    fn eval(&mut self, p: &Program, args: &[Nat]) -> Result<Nat, Halt> {
        if self.depth >= MAX_EVAL_DEPTH {
            return Err(Halt::TooDeep);
        }
        self.depth += 1;
        let r = self.eval_node(p, args);
        self.depth -= 1;
        r
    }

    fn eval_node(&mut self, p: &Program, args: &[Nat]) -> Result<Nat, Halt> {
        self.charge(1)?;
        match p {
            Program::Const(n) => Ok(n.clone()),
            Program::Proj(i) => Ok(arg(args, *i)),
            Program::Op(op) => self.apply(*op, args),
            Program::Comp(f, gs) => {
                let mut vals = Vec::with_capacity(gs.len());
                for g in gs {
                    vals.push(self.eval(g, args)?);
                }
                self.eval(f, &vals)
            }
            Program::PrimRec(base, step) => {
                let x = arg(args, 0);
                let rest = args.get(1..).unwrap_or(&[]);
                let mut acc = self.eval(base, rest)?;
                // a count beyond u64 cannot finish inside any budget
                let n = x.to_u64().unwrap_or(u64::MAX);
                let mut frame = Vec::with_capacity(rest.len() + 2);
                for k in 0..n {
                    frame.clear();
                    frame.push(Nat::from(k));
                    frame.push(acc);
                    frame.extend_from_slice(rest);
                    acc = self.eval(step, &frame)?;
                }
                Ok(acc)
            }
            Program::Cond(c, t, e) => {
                if self.eval(c, args)?.is_zero() {
                    self.eval(e, args)
                } else {
                    self.eval(t, args)
                }
            }
            Program::Mu(f) => {
                let mut frame = Vec::with_capacity(args.len() + 1);
                let mut x = 0u64;
                loop {
                    frame.clear();
                    frame.push(Nat::from(x));
                    frame.extend_from_slice(args);
                    if self.eval(f, &frame)?.is_zero() {
                        return Ok(Nat::from(x));
                    }
                    x += 1;
                }
            }
        }
    }

    fn produce(&mut self, v: Nat) -> Result<Nat, Halt> {
        self.charge(extra_limbs(&v))?;
        Ok(v)
    }

    fn apply(&mut self, op: Op, args: &[Nat]) -> Result<Nat, Halt> {
        let a = || arg(args, 0);
        let b = || arg(args, 1);
        match op {
            Op::Succ => self.produce(a() + 1u32),
            Op::Add => self.produce(a() + b()),
            Op::Monus => {
                let (x, y) = (a(), b());
                Ok(if x > y { x - y } else { Nat::zero() })
            }
            Op::Mul => self.produce(a() * b()),
            Op::Div => {
                let y = b();
                Ok(if y.is_zero() { Nat::zero() } else { a() / y })
            }
            Op::Mod => {
                let y = b();
                Ok(if y.is_zero() { a() } else { a() % y })
            }
            Op::Eq => Ok(bool_nat(a() == b())),
            Op::Lt => Ok(bool_nat(a() < b())),
            Op::Max => Ok(a().max(b())),
            Op::Pair => self.produce(pair_nat(&a(), &b())),
            Op::Fst => Ok(unpair_nat(&a()).0),
            Op::Snd => Ok(unpair_nat(&a()).1),
            Op::Pow2 => {
                let x = a();
                let e = x.to_u64().unwrap_or(u64::MAX);
                self.charge(e / 64)?;
                Ok(Nat::one() << e)
            }
            Op::Bit => Ok(bool_nat(match b().to_u64() {
                Some(n) => a().bit(n),
                None => false,
            })),
            Op::BitLen => Ok(Nat::from(a().bits())),
            Op::PopCount => Ok(Nat::from(
                a().iter_u64_digits()
                    .map(|d| d.count_ones() as u64)
                    .sum::<u64>(),
            )),
            Op::Or => self.produce(a() | b()),
            Op::Sqrt => Ok(a().sqrt()),
            Op::Smn => {
                let c = a();
                self.charge(extra_limbs(&c))?;
                let p = decode(&c);
                let out = smn_program(&p, &[b()], 1);
                self.produce(super::codec::encode(&out))
            }
            Op::Clocked => {
                let c = a();
                self.charge(extra_limbs(&c))?;
                let p = decode(&c);
                let oracle = OracleString::of_set_code(&b());
                let y = arg(args, 2);
                let t = arg(args, 3).to_u64().unwrap_or(u64::MAX);
                let cap = t.min(self.fuel);
                let mut inner = Interp {
                    fuel: cap,
                    used: 0,
                    oracle: Some(&oracle),
                    depth: self.depth,
                };
                match inner.eval(&p, &[y]) {
                    Ok(v) => {
                        self.charge(inner.used)?;
                        self.produce(v + 1u32)
                    }
                    Err(Halt::OutOfFuel) if cap < t => {
                        // the outer run is the one that ran dry
                        self.charge(self.fuel + 1)?;
                        unreachable!("charging past the remaining fuel fails")
                    }
                    Err(_) => {
                        self.charge(inner.used)?;
                        Ok(Nat::zero())
                    }
                }
            }
            Op::Query => {
                let n = a().to_usize().unwrap_or(usize::MAX);
                match self.oracle.and_then(|o| o.get(n)) {
                    Some(bit) => Ok(bool_nat(bit)),
                    None => Err(Halt::OracleMiss),
                }
            }
            Op::Univ => {
                let c = a();
                self.charge(extra_limbs(&c))?;
                let p = decode(&c);
                self.eval(&p, &[b()])
            }
        }
    }
}

/// Runs `p` on `args` with at most `budget` steps.
pub fn run(p: &Program, args: &[Nat], budget: u64, oracle: Option<&OracleString>) -> Run {
    let mut m = Interp {
        fuel: budget,
        used: 0,
        oracle,
        depth: 0,
    };
    match m.eval(p, args) {
        Ok(v) => Run {
            outcome: PartialOutcome::Converged(v),
            steps: m.used,
            halt: None,
        },
        Err(h) => Run {
            outcome: PartialOutcome::Diverged,
            steps: m.used,
            halt: Some(h),
        },
    }
}

/// `{e}(args)` run for at most `s` steps.
pub fn eval_bounded(e: &ProgramCode, args: &[Nat], s: StepBudget) -> PartialOutcome {
    run(&e.decode(), args, s.0, None).outcome
}

/// `{e}^σ(n)` run for at most `s` steps; any query outside `σ` diverges.
pub fn eval_oracle_bounded(
    e: &ProgramCode,
    oracle: &OracleString,
    n: &Nat,
    s: StepBudget,
) -> PartialOutcome {
    run(&e.decode(), std::slice::from_ref(n), s.0, Some(oracle)).outcome
}

/// `{n < inputs : p(n) halts within steps}`, relative to an optional oracle.
pub fn domain_bounded(
    p: &Program,
    inputs: u64,
    steps: u64,
    oracle: Option<&OracleString>,
) -> FiniteSet {
    FiniteSet::from_sorted(
        (0..inputs)
            .filter(|&n| {
                run(p, &[Nat::from(n)], steps, oracle)
                    .outcome
                    .is_converged()
            })
            .collect(),
    )
}

/// `W_{e,s}` (or `W^σ_{e,s}`): inputs below `s` on which `e` halts within `s` steps.
pub fn we_bounded(e: &ProgramCode, s: StepBudget, oracle: Option<&OracleString>) -> FiniteSet {
    domain_bounded(&e.decode(), s.0, s.0, oracle)
}

/// Result and exact cost of a total-tier program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalRun {
    pub value: Nat,
    /// A sufficient budget: the run converges at every budget `>= steps`.
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("program is not in the total tier")]
    NotTotalTier,
    #[error("total-tier program exceeded the interpreter depth limit")]
    TooDeep,
}

/// Evaluates a total-tier program to completion.
///
/// Total-tier programs halt on every input, so the metered run itself is the
/// computable sufficient-budget function: the returned `steps` is the least
/// budget at which the bounded run converges.
pub fn eval_total(p: &Program, args: &[Nat]) -> Result<TotalRun, MachineError> {
    if !p.is_total_tier() {
        return Err(MachineError::NotTotalTier);
    }
    let r = run(p, args, u64::MAX, None);
    match r.outcome {
        PartialOutcome::Converged(value) => Ok(TotalRun {
            value,
            steps: r.steps,
        }),
        PartialOutcome::Diverged => Err(MachineError::TooDeep),
    }
}

/// Shorthand for total evaluation at `u64` arguments.
pub fn eval_total_u64(p: &Program, args: &[u64]) -> Result<Nat, MachineError> {
    let args: Vec<Nat> = args.iter().map(|&a| BigUint::from(a)).collect();
    eval_total(p, &args).map(|r| r.value)
}
