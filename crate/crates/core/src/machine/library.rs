//! Named programs used across the crate and its tests.

use super::build::*;
use super::program::{Op, Program};

pub fn identity() -> Program {
    proj(0)
}

pub fn successor() -> Program {
    Program::Op(Op::Succ)
}

pub fn addition() -> Program {
    Program::Op(Op::Add)
}

pub fn projection_first() -> Program {
    proj(0)
}

/// `μx. 1`: a search whose predicate is never satisfied.
pub fn always_diverge() -> Program {
    Program::diverge()
}

pub fn constant(n: u64) -> Program {
    konst(n)
}

/// Returns the oracle bit at a fixed position.
pub fn query_at(position: u64) -> Program {
    op(Op::Query, vec![konst(position)])
}

/// Halts on `n` exactly when the oracle has a one at `n`; the domain is the
/// set of ones of the oracle string.
pub fn enumerate_oracle_ones() -> Program {
    semi_decide(op(Op::Query, vec![proj(0)]))
}

/// Halts exactly on the inputs listed.
pub fn domain_exactly(members: &[u64]) -> Program {
    let test = members
        .iter()
        .fold(konst(0u32), |acc, &m| or(acc, eq(proj(0), konst(m))));
    semi_decide(test)
}

/// Halts exactly on inputs below `k`.
pub fn domain_below(k: u64) -> Program {
    semi_decide(lt(proj(0), konst(k)))
}
