//! Small combinator layer for writing programs by hand.
//!
//! Expressions are programs over an implicit argument vector; `arity` is the
//! length of that vector wherever a combinator has to re-thread it.

use super::program::{Nat, Op, Program};

pub fn konst(n: impl Into<Nat>) -> Program {
    Program::Const(n.into())
}

pub fn proj(i: usize) -> Program {
    Program::Proj(i)
}

pub fn call(f: Program, args: Vec<Program>) -> Program {
    Program::Comp(Box::new(f), args)
}

pub fn op(o: Op, args: Vec<Program>) -> Program {
    call(Program::Op(o), args)
}

pub fn cond(c: Program, t: Program, e: Program) -> Program {
    Program::Cond(Box::new(c), Box::new(t), Box::new(e))
}

pub fn mu(f: Program) -> Program {
    Program::Mu(Box::new(f))
}

pub fn prim_rec(base: Program, step: Program) -> Program {
    Program::PrimRec(Box::new(base), Box::new(step))
}

pub fn succ(a: Program) -> Program {
    op(Op::Succ, vec![a])
}

pub fn add(a: Program, b: Program) -> Program {
    op(Op::Add, vec![a, b])
}

pub fn monus(a: Program, b: Program) -> Program {
    op(Op::Monus, vec![a, b])
}

pub fn mul(a: Program, b: Program) -> Program {
    op(Op::Mul, vec![a, b])
}

pub fn div(a: Program, b: Program) -> Program {
    op(Op::Div, vec![a, b])
}

pub fn modulo(a: Program, b: Program) -> Program {
    op(Op::Mod, vec![a, b])
}

pub fn eq(a: Program, b: Program) -> Program {
    op(Op::Eq, vec![a, b])
}

pub fn lt(a: Program, b: Program) -> Program {
    op(Op::Lt, vec![a, b])
}

pub fn max(a: Program, b: Program) -> Program {
    op(Op::Max, vec![a, b])
}

pub fn pair(a: Program, b: Program) -> Program {
    op(Op::Pair, vec![a, b])
}

pub fn fst(a: Program) -> Program {
    op(Op::Fst, vec![a])
}

pub fn snd(a: Program) -> Program {
    op(Op::Snd, vec![a])
}

pub fn pow2(a: Program) -> Program {
    op(Op::Pow2, vec![a])
}

pub fn bit(x: Program, n: Program) -> Program {
    op(Op::Bit, vec![x, n])
}

pub fn bitlen(a: Program) -> Program {
    op(Op::BitLen, vec![a])
}

pub fn popcount(a: Program) -> Program {
    op(Op::PopCount, vec![a])
}

pub fn or(a: Program, b: Program) -> Program {
    op(Op::Or, vec![a, b])
}

pub fn sqrt(a: Program) -> Program {
    op(Op::Sqrt, vec![a])
}

pub fn not(a: Program) -> Program {
    eq(a, konst(0u32))
}

/// Canonical code of `[start, start + len)`.
pub fn interval(start: Program, len: Program) -> Program {
    let s2 = pow2(start.clone());
    monus(pow2(add(start, len)), s2)
}

/// `p` re-read against the arguments `offset .. offset + arity` of an outer frame.
pub fn lift(p: Program, offset: usize, arity: usize) -> Program {
    call(p, (offset..offset + arity).map(proj).collect())
}

/// The identity frame `[#0, …, #(arity - 1)]`.
pub fn frame(arity: usize) -> Vec<Program> {
    (0..arity).map(proj).collect()
}

/// `step^times(init)` where `step` sees `[k, acc, y…]` and `times`, `init`
/// are expressions over `y…`.
pub fn iterate(times: Program, init: Program, step: Program, arity: usize) -> Program {
    let mut args = vec![times];
    args.extend(frame(arity));
    call(prim_rec(init, step), args)
}

/// Least `k` in `[lo, lo + count)` with `pred(k, y…) != 0`, else `lo + count`.
///
/// Bounded search by primitive recursion, so total whenever `pred`, `lo` and
/// `count` are.
pub fn bounded_min(pred: Program, lo: Program, count: Program, arity: usize) -> Program {
    // frame inside the step: [r, acc, y…]
    let target = add(lift(lo.clone(), 2, arity), proj(0));
    let mut pred_args = vec![target.clone()];
    pred_args.extend((2..2 + arity).map(proj));
    let step = cond(
        lt(proj(1), target.clone()),
        proj(1),
        cond(call(pred, pred_args), target.clone(), succ(target)),
    );
    iterate(count, lo, step, arity)
}

/// A unary program that halts exactly when `pred(n) != 0`, returning 0.
pub fn semi_decide(pred: Program) -> Program {
    // inside mu the frame is [x, n]
    mu(monus(konst(1u32), call(pred, vec![proj(1)])))
}
