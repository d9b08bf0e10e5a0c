//! The block test: `F_i` are consecutive intervals with `|F_i| = i`, and
//! `U_n` holds the sets missing some `F_i` with `i > n`.

mod dyadic;

use std::ops::{Mul, Sub};

use num_traits::{One, Zero};

pub use dyadic::{DyadicParseError, DyadicRational};

use crate::sets::{FiniteSet, SetPrefix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchnorrError {
    #[error("blocks are indexed from 1")]
    ZeroBlock,
    #[error("truncation needs M > n (got n = {n}, M = {m})")]
    EmptyRange { n: u64, m: u64 },
    #[error("prefix of length {length} does not cover block {block} (needs {needed})")]
    ShortPrefix {
        length: u64,
        block: u64,
        needed: u64,
    },
}

/// `min F_i = i(i-1)/2`.
pub fn block_start(i: u64) -> u64 {
    i * (i.saturating_sub(1)) / 2
}

/// `F_i = [i(i-1)/2, i(i-1)/2 + i)`.
pub fn block(i: u64) -> Result<FiniteSet, SchnorrError> {
    if i == 0 {
        return Err(SchnorrError::ZeroBlock);
    }
    Ok(FiniteSet::interval(block_start(i), i))
}

/// `max F_i`.
pub fn block_max(i: u64) -> u64 {
    block_start(i) + i - 1
}

/// Index of the block containing `x`.
pub fn block_of(x: u64) -> u64 {
    // largest i with i(i-1)/2 <= x
    let mut i = (((8 * x as u128 + 1) as f64).sqrt() as u64).div_ceil(2);
    while block_start(i + 1) <= x {
        i += 1;
    }
    while block_start(i) > x {
        i -= 1;
    }
    i
}

/// Least block index whose minimum exceeds `x`.
pub fn first_block_above(x: u64) -> u64 {
    block_of(x) + 1
}

/// Least `i ∈ (n, M]` with `prefix ∩ F_i = ∅`, if any.
pub fn in_u_n(prefix: &SetPrefix, n: u64, m: u64) -> Result<Option<u64>, SchnorrError> {
    if m <= n {
        return Err(SchnorrError::EmptyRange { n, m });
    }
    let needed = block_max(m) + 1;
    if prefix.length() < needed {
        return Err(SchnorrError::ShortPrefix {
            length: prefix.length(),
            block: m,
            needed,
        });
    }
    Ok((n + 1..=m).find(|&i| {
        let lo = block_start(i);
        prefix
            .members()
            .iter()
            .find(|&x| x >= lo)
            .is_none_or(|x| x > block_max(i))
    }))
}

/// Scalars in which truncated measures can be evaluated.
pub trait MeasureScalar:
    Clone + PartialOrd + Zero + One + Sub<Output = Self> + Mul<Output = Self>
{
    /// `2^{-n}`.
    fn pow2_neg(n: u64) -> Self;
}

impl MeasureScalar for DyadicRational {
    fn pow2_neg(n: u64) -> Self {
        DyadicRational::pow2_neg(n)
    }
}

impl MeasureScalar for f64 {
    fn pow2_neg(n: u64) -> Self {
        2f64.powi(-(n.min(2000) as i32))
    }
}

impl MeasureScalar for f32 {
    fn pow2_neg(n: u64) -> Self {
        2f32.powi(-(n.min(2000) as i32))
    }
}

/// Running values `1 − ∏_{i=n+1}^{k} (1 − 2^{-i})` for `k = n+1 ..= M`.
fn measure_series<T: MeasureScalar>(n: u64, m: u64) -> Result<Vec<T>, SchnorrError> {
    if m <= n {
        return Err(SchnorrError::EmptyRange { n, m });
    }
    let mut survive = T::one();
    let mut out = Vec::with_capacity((m - n) as usize);
    for i in n + 1..=m {
        // a set avoids U at block i with probability 1 − 2^{-i}
        survive = survive * (T::one() - T::pow2_neg(i));
        out.push(T::one() - survive.clone());
    }
    Ok(out)
}

/// Measure of `{R : ∃ i ∈ (n, M]. R ∩ F_i = ∅}`: the blocks are disjoint, so
/// the events are independent and the value is `1 − ∏_{i=n+1}^{M} (1 − 2^{-i})`.
pub fn measure_u_trunc<T: MeasureScalar>(n: u64, m: u64) -> Result<T, SchnorrError> {
    Ok(measure_series::<T>(n, m)?.pop().expect("range is nonempty"))
}

/// Exact comparison of a truncated measure with `2^{-n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: u64,
    pub m: u64,
    pub measure: DyadicRational,
    pub bound: DyadicRational,
    pub holds: bool,
    /// The value never decreased as `M` grew from `n + 1`.
    pub nondecreasing: bool,
}

pub fn check_schnorr_bound(n: u64, m: u64) -> Result<BoundReport, SchnorrError> {
    let series = measure_series::<DyadicRational>(n, m)?;
    let nondecreasing = series.windows(2).all(|w| w[0] <= w[1]);
    let measure = series.last().expect("range is nonempty").clone();
    let bound = DyadicRational::pow2_neg(n);
    Ok(BoundReport {
        n,
        m,
        holds: measure <= bound,
        measure,
        bound,
        nondecreasing,
    })
}
