//! Gödel numbering of programs.
//!
//! A code `N` stands for the bit string `w` with `bin(N + 1) = 1w`, which is
//! a bijection between naturals and finite bit strings. The string is read
//! as a prefix-order token stream of Elias-gamma numbers:
//!
//! | tag | node | payload |
//! |-----|------|---------|
//! | 0 | `Const(n)` | `n` |
//! | 1 | `Proj(i)` | `i` |
//! | 2 | `Op(k)` | op index `k` |
//! | 3 | `Comp` | argument count, head, arguments |
//! | 4 | `PrimRec` | base, step |
//! | 5 | `Cond` | test, then, else |
//! | 6 | `Mu` | body |
//!
//! Code length is linear in program size. A string that does not parse as
//! exactly one tree (unknown tag or op, truncation, trailing bits, nesting
//! beyond [`MAX_DECODE_DEPTH`]) decodes to [`Program::diverge`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::program::{Nat, Op, Program};

/// Deepest tree the decoder accepts.
pub const MAX_DECODE_DEPTH: usize = 512;

/// A Gödel number. Every natural is a valid code.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProgramCode(pub Nat);

impl ProgramCode {
    pub fn of(program: &Program) -> ProgramCode {
        ProgramCode(encode(program))
    }

    pub fn decode(&self) -> Program {
        decode(&self.0)
    }

    pub fn value(&self) -> &Nat {
        &self.0
    }
}

impl From<u64> for ProgramCode {
    fn from(n: u64) -> Self {
        ProgramCode(Nat::from(n))
    }
}

impl fmt::Display for ProgramCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for ProgramCode {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse::<BigUint>().map(ProgramCode)
    }
}

impl Program {
    pub fn code(&self) -> ProgramCode {
        ProgramCode::of(self)
    }
}

struct BitWriter {
    bits: Vec<u8>,
}

impl BitWriter {
    fn gamma(&mut self, n: &Nat) {
        let m = n + 1u32;
        let digits = m.to_radix_be(2);
        self.bits.extend(std::iter::repeat_n(0, digits.len() - 1));
        self.bits.extend_from_slice(&digits);
    }

    fn gamma_small(&mut self, n: usize) {
        self.gamma(&Nat::from(n));
    }

    fn program(&mut self, p: &Program) {
        match p {
            Program::Const(n) => {
                self.gamma_small(0);
                self.gamma(n);
            }
            Program::Proj(i) => {
                self.gamma_small(1);
                self.gamma_small(*i);
            }
            Program::Op(op) => {
                self.gamma_small(2);
                self.gamma_small(op.index());
            }
            Program::Comp(f, gs) => {
                self.gamma_small(3);
                self.gamma_small(gs.len());
                self.program(f);
                for g in gs {
                    self.program(g);
                }
            }
            Program::PrimRec(b, s) => {
                self.gamma_small(4);
                self.program(b);
                self.program(s);
            }
            Program::Cond(c, t, e) => {
                self.gamma_small(5);
                self.program(c);
                self.program(t);
                self.program(e);
            }
            Program::Mu(f) => {
                self.gamma_small(6);
                self.program(f);
            }
        }
    }
}

/// Code of a program.
pub fn encode(p: &Program) -> Nat {
    let mut w = BitWriter { bits: vec![1] };
    w.program(p);
    let n = BigUint::from_radix_be(&w.bits, 2).expect("binary digits");
    n - 1u32
}

struct BitReader {
    bits: Vec<u8>,
    pos: usize,
}

struct IllFormed;

impl BitReader {
    fn gamma(&mut self) -> Result<Nat, IllFormed> {
        let mut zeros = 0;
        while self.bits.get(self.pos) == Some(&0) {
            zeros += 1;
            self.pos += 1;
        }
        let end = self.pos + zeros + 1;
        if end > self.bits.len() {
            return Err(IllFormed);
        }
        let m = BigUint::from_radix_be(&self.bits[self.pos..end], 2).ok_or(IllFormed)?;
        self.pos = end;
        Ok(m - 1u32)
    }

    fn small(&mut self) -> Result<usize, IllFormed> {
        let n = self.gamma()?;
        n.to_usize()
            .filter(|&v| v <= u32::MAX as usize)
            .ok_or(IllFormed)
    }

    fn program(&mut self, depth: usize) -> Result<Program, IllFormed> {
        if depth > MAX_DECODE_DEPTH {
            return Err(IllFormed);
        }
        let boxed = |r: &mut Self| r.program(depth + 1).map(Box::new);
        Ok(match self.small()? {
            0 => Program::Const(self.gamma()?),
            1 => Program::Proj(self.small()?),
            2 => Program::Op(Op::from_index(self.small()?).ok_or(IllFormed)?),
            3 => {
                let len = self.small()?;
                // each argument needs at least one bit
                if len > self.bits.len() - self.pos {
                    return Err(IllFormed);
                }
                let f = boxed(self)?;
                let mut gs = Vec::with_capacity(len);
                for _ in 0..len {
                    gs.push(self.program(depth + 1)?);
                }
                Program::Comp(f, gs)
            }
            4 => {
                let b = boxed(self)?;
                Program::PrimRec(b, boxed(self)?)
            }
            5 => {
                let c = boxed(self)?;
                let t = boxed(self)?;
                Program::Cond(c, t, boxed(self)?)
            }
            6 => Program::Mu(boxed(self)?),
            _ => return Err(IllFormed),
        })
    }
}

/// Program denoted by a code; ill-formed codes give [`Program::diverge`].
pub fn decode(code: &Nat) -> Program {
    let m = code + 1u32;
    let mut bits = m.to_radix_be(2);
    if m.is_one() {
        bits.clear();
    } else {
        bits.remove(0);
    }
    let mut r = BitReader { bits, pos: 0 };
    match r.program(0) {
        Ok(p) if r.pos == r.bits.len() => p,
        _ => Program::diverge(),
    }
}

/// True when `code` parses to a tree (rather than defaulting to divergence).
pub fn is_well_formed(code: &Nat) -> bool {
    let p = decode(code);
    p != Program::diverge() || encode(&p) == *code
}

/// Number of 64-bit limbs beyond the first; the interpreter charges this much
/// extra for producing or decoding a value.
pub(crate) fn extra_limbs(n: &Nat) -> u64 {
    if n.is_zero() {
        0
    } else {
        (n.bits() - 1) / 64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    #[test]
    fn small_codes() {
        // "" is ill-formed
        assert_eq!(decode(&nat(0)), Program::diverge());
        // "1" = tag 0 with no payload: truncated
        assert_eq!(decode(&nat(2)), Program::diverge());
        // "11" = Const(0)
        assert_eq!(decode(&nat(6)), Program::Const(nat(0)));
        assert_eq!(encode(&Program::Const(nat(0))), nat(6));
    }

    #[test]
    fn round_trip_examples() {
        let progs = vec![
            Program::Proj(0),
            Program::Op(Op::Univ),
            Program::diverge(),
            Program::Comp(
                Box::new(Program::Op(Op::Add)),
                vec![Program::Proj(1), Program::Const(nat(1 << 40))],
            ),
            Program::PrimRec(Box::new(Program::Proj(0)), Box::new(Program::Op(Op::Succ))),
            Program::Cond(
                Box::new(Program::Proj(0)),
                Box::new(Program::Const(nat(1))),
                Box::new(Program::Comp(Box::new(Program::Proj(3)), vec![])),
            ),
        ];
        for p in progs {
            assert_eq!(decode(&encode(&p)), p, "{p}");
        }
    }

    #[test]
    fn trailing_bits_are_ill_formed() {
        let code = encode(&Program::Proj(2));
        // append a '1' bit to the string: N' + 1 = 2(N + 1) + 1
        let longer = (code + 1u32) * 2u32 + 1u32 - 1u32;
        assert_eq!(decode(&longer), Program::diverge());
        assert!(!is_well_formed(&longer));
    }

    #[test]
    fn unknown_op_is_ill_formed() {
        let mut w = BitWriter { bits: vec![1] };
        w.gamma_small(2);
        w.gamma_small(Op::ALL.len());
        let n = BigUint::from_radix_be(&w.bits, 2).unwrap() - 1u32;
        assert_eq!(decode(&n), Program::diverge());
    }

    #[test]
    fn every_small_integer_decodes() {
        for n in 0..5000u64 {
            let p = decode(&nat(n));
            if is_well_formed(&nat(n)) {
                assert_eq!(encode(&p), nat(n));
            }
        }
    }
}
