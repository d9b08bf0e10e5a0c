//! Parameterisation and the fixed-point construction.

use super::build::{call, konst, op, proj};
use super::codec::{encode, extra_limbs, ProgramCode};
use super::eval::{eval_total, MachineError};
use super::program::{Nat, Op, Program};

/// `p` with its first arguments fixed: the result on `y` runs `p` on
/// `fixed ⌢ y`, where `y` has `rest_arity` entries.
///
/// Purely syntactic: `Comp(p, [Const(a_1), …, Const(a_k), #0, …, #(m-1)])`.
/// The result costs `1 + k + m` more steps than `p` on the joined arguments.
pub fn smn_program(p: &Program, fixed: &[Nat], rest_arity: usize) -> Program {
    let mut args: Vec<Program> = fixed.iter().cloned().map(Program::Const).collect();
    args.extend((0..rest_arity).map(proj));
    call(p.clone(), args)
}

/// s-m-n on codes.
pub fn smn(e: &ProgramCode, fixed: &[Nat], rest_arity: usize) -> ProgramCode {
    ProgramCode(encode(&smn_program(&e.decode(), fixed, rest_arity)))
}

/// Steps `smn_program(p, fixed, m)` spends on top of `p` itself.
pub fn smn_overhead(fixed_len: usize, rest_arity: usize) -> u64 {
    1 + fixed_len as u64 + rest_arity as u64
}

/// A fixed point `j` of a code transformer, with the budget correspondence.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub program: Program,
    pub code: ProgramCode,
    /// `g(j)`, the program whose behaviour `j` reproduces.
    pub image: Program,
    /// `j` on `y` at budget `s + overhead` behaves exactly as `g(j)` on `y`
    /// at budget `s`.
    pub overhead: u64,
}

impl FixedPoint {
    /// Budget for `j` matching budget `s` for `g(j)`.
    pub fn corresponding_budget(&self, s: u64) -> u64 {
        s.saturating_add(self.overhead)
    }
}

/// Recursion theorem for unary programs.
///
/// With `d(x, y) = univ(g(smn(x, x)), y)` the fixed point is
/// `j = smn(d, [⌜d⌝])`: running `j` on `y` computes `g(j)` and hands `y` to it.
pub fn fixed_point(g: &Program) -> Result<FixedPoint, MachineError> {
    if !g.is_total_tier() {
        return Err(MachineError::NotTotalTier);
    }
    let self_apply = op(Op::Smn, vec![proj(0), proj(0)]);
    let d = op(Op::Univ, vec![call(g.clone(), vec![self_apply]), proj(1)]);
    let d_code = encode(&d);
    let program = smn_program(&d, std::slice::from_ref(&d_code), 1);
    let code = ProgramCode(encode(&program));
    let g_run = eval_total(g, std::slice::from_ref(&code.0))?;
    let image_code = g_run.value;
    let image = super::codec::decode(&image_code);
    // j = comp(d; const, #0): 3 steps; d = comp(univ; G, #1): 1;
    // G = comp(g; comp(smn; #0, #0)): 5 plus decoding d and emitting j's code;
    // then g itself; #1: 1; univ: 1 plus decoding g(j).
    let overhead = 3
        + 1
        + 5
        + extra_limbs(&d_code)
        + extra_limbs(&code.0)
        + g_run.steps
        + 1
        + 1
        + extra_limbs(&image_code);
    Ok(FixedPoint {
        program,
        code,
        image,
        overhead,
    })
}

/// Transformer `x ↦ c`.
pub fn constant_transformer(target: &Program) -> Program {
    konst(encode(target))
}

/// Transformer `x ↦ x`.
pub fn identity_transformer() -> Program {
    proj(0)
}
