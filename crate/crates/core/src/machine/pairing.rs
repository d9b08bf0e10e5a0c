//! Cantor pairing `⟨x, y⟩ = (x + y)(x + y + 1)/2 + y`.

use num_integer::Roots;

use super::program::Nat;

pub fn pair(x: u64, y: u64) -> u64 {
    let s = x + y;
    s * (s + 1) / 2 + y
}

pub fn unpair(z: u64) -> (u64, u64) {
    let w = ((8 * z as u128 + 1).sqrt() as u64 - 1) / 2;
    let t = w * (w + 1) / 2;
    let y = z - t;
    (w - y, y)
}

pub fn pair_nat(x: &Nat, y: &Nat) -> Nat {
    let s = x + y;
    ((&s * (&s + 1u32)) >> 1u32) + y
}

pub fn unpair_nat(z: &Nat) -> (Nat, Nat) {
    let w = (((z << 3u32) + 1u32).sqrt() - 1u32) >> 1u32;
    let t = (&w * (&w + 1u32)) >> 1u32;
    let y = z - t;
    (w - &y, y)
}
