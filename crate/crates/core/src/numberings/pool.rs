//! The default numbering pool shipped with the command-line tool.

use super::{adversarial_numbering, CanonicalRule, Registry};
use crate::machine::build::*;
use crate::machine::library;
use crate::machine::Program;

/// Short names of the default pool entries, in id order.
pub const DEFAULT_POOL_NAMES: [&str; 7] = [
    "standard",
    "singleton",
    "initial-interval",
    "shifted-interval",
    "adversarial-identity",
    "wide-block",
    "slow-interval",
];

/// `i ↦ ⟨i, i⟩ = max_{e ≤ i} ⟨e, i⟩`.
pub fn diagonal_pair() -> Program {
    pair(proj(0), proj(0))
}

/// `[i, i + 4⟨i,i⟩ + 4)`: large enough to trip every pair-based strategy.
pub fn wide_block() -> Program {
    interval(proj(0), add(mul(konst(4u32), diagonal_pair()), konst(4u32)))
}

/// `[2i, 3i + 1)`, produced only after `i²` idle iterations, so its stage
/// approximation settles late.
pub fn slow_interval() -> Program {
    let idle = iterate(mul(proj(0), proj(0)), konst(0u32), proj(1), 1);
    add(interval(mul(konst(2u32), proj(0)), succ(proj(0))), idle)
}

/// Registry with the seven rules of [`DEFAULT_POOL_NAMES`].
pub fn default_registry() -> Registry {
    let mut reg = Registry::new();
    reg.register_rule(CanonicalRule::standard());
    let rules = [
        pow2(proj(0)),
        interval(konst(0u32), succ(proj(0))),
        interval(succ(proj(0)), succ(proj(0))),
    ];
    for r in rules {
        reg.register(r).expect("default rules are total");
    }
    reg.register_rule(adversarial_numbering(&library::identity()).expect("identity is total"));
    reg.register(wide_block()).expect("total");
    reg.register(slow_interval()).expect("total");
    reg
}
