//! Syntax trees of the two-tier function language.
//!
//! A program denotes a function of an argument vector. Arguments that a
//! program reads past the end of the vector are zero, so every tree is a
//! meaningful program at every arity.

use std::fmt;

use num_bigint::BigUint;

/// Natural numbers as manipulated by the machine.
pub type Nat = BigUint;

/// Built-in primitive functions. Each reads its operands from the front of
/// the argument vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Succ,
    Add,
    /// Truncated subtraction.
    Monus,
    Mul,
    /// `x / 0 = 0`.
    Div,
    /// `x mod 0 = x`.
    Mod,
    Eq,
    Lt,
    Max,
    /// Cantor pairing.
    Pair,
    Fst,
    Snd,
    Pow2,
    /// `bit(x, n)`: the `n`th binary digit of `x`.
    Bit,
    BitLen,
    PopCount,
    Or,
    /// Integer square root.
    Sqrt,
    /// `smn(c, x)`: code of the program `c` with its first argument fixed to `x`.
    Smn,
    /// `clocked(c, o, y, t)`: `1 + value` if program `c` on `[y]` with oracle
    /// `χ_o` halts within `t` steps, else `0`.
    Clocked,
    /// Oracle bit at a position. Partial tier.
    Query,
    /// `univ(c, y)`: runs program `c` on `[y]`. Partial tier.
    Univ,
}

impl Op {
    pub const ALL: [Op; 22] = [
        Op::Succ,
        Op::Add,
        Op::Monus,
        Op::Mul,
        Op::Div,
        Op::Mod,
        Op::Eq,
        Op::Lt,
        Op::Max,
        Op::Pair,
        Op::Fst,
        Op::Snd,
        Op::Pow2,
        Op::Bit,
        Op::BitLen,
        Op::PopCount,
        Op::Or,
        Op::Sqrt,
        Op::Smn,
        Op::Clocked,
        Op::Query,
        Op::Univ,
    ];

    pub fn index(self) -> usize {
        Op::ALL.iter().position(|&o| o == self).expect("op listed")
    }

    pub fn from_index(i: usize) -> Option<Op> {
        Op::ALL.get(i).copied()
    }

    pub fn arity(self) -> usize {
        match self {
            Op::Succ | Op::Fst | Op::Snd | Op::Pow2 | Op::BitLen | Op::PopCount | Op::Sqrt => 1,
            Op::Query => 1,
            Op::Clocked => 4,
            _ => 2,
        }
    }

    /// Total-tier primitives always halt.
    pub fn is_total(self) -> bool {
        !matches!(self, Op::Query | Op::Univ)
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            Op::Succ => "succ",
            Op::Add => "add",
            Op::Monus => "monus",
            Op::Mul => "mul",
            Op::Div => "div",
            Op::Mod => "mod",
            Op::Eq => "eq",
            Op::Lt => "lt",
            Op::Max => "max",
            Op::Pair => "pair",
            Op::Fst => "fst",
            Op::Snd => "snd",
            Op::Pow2 => "pow2",
            Op::Bit => "bit",
            Op::BitLen => "bitlen",
            Op::PopCount => "popcount",
            Op::Or => "or",
            Op::Sqrt => "sqrt",
            Op::Smn => "smn",
            Op::Clocked => "clocked",
            Op::Query => "query",
            Op::Univ => "univ",
        }
    }
}

/// A program of the function language.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Program {
    /// Constant function.
    Const(Nat),
    /// `args[i]`, or `0` when absent.
    Proj(usize),
    /// A primitive applied to the argument vector.
    Op(Op),
    /// `f(g_1(args), …, g_k(args))`.
    Comp(Box<Program>, Vec<Program>),
    /// `h(0, y) = base(y)`, `h(x + 1, y) = step(x, h(x, y), y)`.
    PrimRec(Box<Program>, Box<Program>),
    /// `if c(args) != 0 { t(args) } else { e(args) }`, evaluated lazily.
    Cond(Box<Program>, Box<Program>, Box<Program>),
    /// Least `x` with `f(x, args) = 0`. Partial tier.
    Mu(Box<Program>),
}

impl Program {
    /// The canonical always-diverging program: `μx. 1`.
    pub fn diverge() -> Program {
        Program::Mu(Box::new(Program::Const(Nat::from(1u32))))
    }

    /// True when the program contains no unbounded search, oracle query or
    /// universal call, so it halts on every input.
    pub fn is_total_tier(&self) -> bool {
        match self {
            Program::Const(_) | Program::Proj(_) => true,
            Program::Op(op) => op.is_total(),
            Program::Comp(f, gs) => f.is_total_tier() && gs.iter().all(Program::is_total_tier),
            Program::PrimRec(b, s) => b.is_total_tier() && s.is_total_tier(),
            Program::Cond(c, t, e) => c.is_total_tier() && t.is_total_tier() && e.is_total_tier(),
            Program::Mu(_) => false,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Program::Const(_) | Program::Proj(_) | Program::Op(_) => 1,
            Program::Comp(f, gs) => 1 + f.size() + gs.iter().map(Program::size).sum::<usize>(),
            Program::PrimRec(b, s) => 1 + b.size() + s.size(),
            Program::Cond(c, t, e) => 1 + c.size() + t.size() + e.size(),
            Program::Mu(f) => 1 + f.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Program::Const(_) | Program::Proj(_) | Program::Op(_) => 1,
            Program::Comp(f, gs) => {
                1 + gs
                    .iter()
                    .map(Program::depth)
                    .max()
                    .unwrap_or(0)
                    .max(f.depth())
            }
            Program::PrimRec(b, s) => 1 + b.depth().max(s.depth()),
            Program::Cond(c, t, e) => 1 + c.depth().max(t.depth()).max(e.depth()),
            Program::Mu(f) => 1 + f.depth(),
        }
    }

    /// One instruction per line, children indented under their parent.
    pub fn disassemble(&self) -> String {
        let mut out = String::new();
        self.write_lines(0, &mut out);
        out
    }

    fn write_lines(&self, indent: usize, out: &mut String) {
        use std::fmt::Write;
        let pad = "  ".repeat(indent);
        match self {
            Program::Const(n) => {
                let _ = writeln!(out, "{pad}const {n}");
            }
            Program::Proj(i) => {
                let _ = writeln!(out, "{pad}proj {i}");
            }
            Program::Op(op) => {
                let _ = writeln!(out, "{pad}op {}", op.mnemonic());
            }
            Program::Comp(f, gs) => {
                let _ = writeln!(out, "{pad}comp/{}", gs.len());
                f.write_lines(indent + 1, out);
                for g in gs {
                    g.write_lines(indent + 1, out);
                }
            }
            Program::PrimRec(b, s) => {
                let _ = writeln!(out, "{pad}primrec");
                b.write_lines(indent + 1, out);
                s.write_lines(indent + 1, out);
            }
            Program::Cond(c, t, e) => {
                let _ = writeln!(out, "{pad}cond");
                c.write_lines(indent + 1, out);
                t.write_lines(indent + 1, out);
                e.write_lines(indent + 1, out);
            }
            Program::Mu(f) => {
                let _ = writeln!(out, "{pad}mu");
                f.write_lines(indent + 1, out);
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Program::Const(n) => write!(f, "{n}"),
            Program::Proj(i) => write!(f, "#{i}"),
            Program::Op(op) => f.write_str(op.mnemonic()),
            Program::Comp(h, gs) => {
                write!(f, "{h}(")?;
                for (k, g) in gs.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(")")
            }
            Program::PrimRec(b, s) => write!(f, "rec[{b}; {s}]"),
            Program::Cond(c, t, e) => write!(f, "if[{c}; {t}; {e}]"),
            Program::Mu(g) => write!(f, "mu[{g}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn op_indices_round_trip() {
        for (i, op) in Op::ALL.iter().enumerate() {
            assert_eq!(op.index(), i);
            assert_eq!(Op::from_index(i), Some(*op));
        }
        assert_eq!(Op::from_index(Op::ALL.len()), None);
    }

    #[test]
    fn tiers() {
        assert!(Program::Op(Op::Add).is_total_tier());
        assert!(!Program::Op(Op::Query).is_total_tier());
        assert!(!Program::diverge().is_total_tier());
        let nested = Program::Comp(
            Box::new(Program::Op(Op::Succ)),
            vec![Program::Comp(Box::new(Program::Op(Op::Univ)), vec![])],
        );
        assert!(!nested.is_total_tier());
    }

    #[test]
    fn disassembly_is_one_node_per_line() {
        let p = Program::Comp(
            Box::new(Program::Op(Op::Add)),
            vec![Program::Proj(0), Program::Const(Nat::from(3u32))],
        );
        assert_eq!(p.disassemble(), "comp/2\n  op add\n  proj 0\n  const 3\n");
        assert_eq!(p.disassemble().lines().count(), p.size());
    }
}
