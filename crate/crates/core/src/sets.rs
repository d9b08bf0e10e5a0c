//! Finite subsets of ω and their canonical codes `Σ_{n∈F} 2^n`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

/// A finite set of naturals, kept sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FiniteSet {
    elements: Vec<u64>,
}

impl FiniteSet {
    pub fn empty() -> Self {
        FiniteSet::default()
    }

    /// From any collection of naturals; duplicates are merged.
    pub fn new(elements: impl IntoIterator<Item = u64>) -> Self {
        let mut elements: Vec<u64> = elements.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        FiniteSet { elements }
    }

    /// From a strictly increasing sequence.
    pub fn from_sorted(elements: Vec<u64>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        FiniteSet { elements }
    }

    pub fn interval(start: u64, len: u64) -> Self {
        FiniteSet {
            elements: (start..start + len).collect(),
        }
    }

    /// Decodes a canonical code.
    pub fn from_code(code: &BigUint) -> Self {
        let mut elements = Vec::with_capacity(code.count_ones() as usize);
        for (w, digit) in code.iter_u64_digits().enumerate() {
            let mut d = digit;
            while d != 0 {
                let tz = d.trailing_zeros() as u64;
                elements.push(w as u64 * 64 + tz);
                d &= d - 1;
            }
        }
        FiniteSet { elements }
    }

    /// The canonical code.
    pub fn code(&self) -> BigUint {
        let mut code = BigUint::zero();
        for &e in &self.elements {
            code.set_bit(e, true);
        }
        code
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<u64> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Undefined (`None`) on the empty set.
    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn is_disjoint(&self, other: &FiniteSet) -> bool {
        self.elements.iter().all(|&x| !other.contains(x))
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        FiniteSet::new(self.elements.iter().chain(&other.elements).copied())
    }

    pub fn difference(&self, other: &FiniteSet) -> FiniteSet {
        FiniteSet::from_sorted(
            self.elements
                .iter()
                .copied()
                .filter(|&x| !other.contains(x))
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.iter().copied()
    }
}

impl FromIterator<u64> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        FiniteSet::new(iter)
    }
}

/// Sorted bracket list, e.g. `[0,2,5]`.
impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed set literal {0:?}")]
pub struct SetParseError(pub String);

impl FromStr for FiniteSet {
    type Err = SetParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| SetParseError(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(FiniteSet::empty());
        }
        inner
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map(FiniteSet::new)
            .map_err(|_| SetParseError(s.to_string()))
    }
}

/// A characteristic prefix of length `length`: the constructed set's members
/// below `length`, with every other position below `length` known absent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SetPrefix {
    length: u64,
    members: FiniteSet,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PrefixError {
    #[error("member {member} lies outside a prefix of length {length}")]
    MemberBeyondLength { member: u64, length: u64 },
}

impl SetPrefix {
    pub fn new(members: FiniteSet, length: u64) -> Result<Self, PrefixError> {
        match members.max() {
            Some(m) if m >= length => Err(PrefixError::MemberBeyondLength { member: m, length }),
            _ => Ok(SetPrefix { length, members }),
        }
    }

    /// The shortest prefix holding `members`.
    pub fn tight(members: FiniteSet) -> Self {
        let length = members.max().map_or(0, |m| m + 1);
        SetPrefix { length, members }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let members = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u64)
            .collect();
        SetPrefix {
            length: bits.len() as u64,
            members: FiniteSet::from_sorted(members),
        }
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn members(&self) -> &FiniteSet {
        &self.members
    }

    pub fn bits(&self) -> Vec<bool> {
        let mut bits = vec![false; self.length as usize];
        for x in self.members.iter() {
            bits[x as usize] = true;
        }
        bits
    }

    /// Membership, or `None` at positions the prefix does not determine.
    pub fn get(&self, x: u64) -> Option<bool> {
        (x < self.length).then(|| self.members.contains(x))
    }

    /// `F ⊆ prefix`, meaning every element of `F` is a member.
    pub fn includes(&self, f: &FiniteSet) -> bool {
        f.is_subset(&self.members)
    }

    /// The principal function as a list: member `k` (from 0) at index `k`.
    pub fn principal(&self) -> &[u64] {
        self.members.elements()
    }

    /// Members of the complement below `length`.
    pub fn complement(&self) -> FiniteSet {
        FiniteSet::from_sorted(
            (0..self.length)
                .filter(|&x| !self.members.contains(x))
                .collect(),
        )
    }

    /// The same prefix read as the complement set.
    pub fn complemented(&self) -> SetPrefix {
        SetPrefix {
            length: self.length,
            members: self.complement(),
        }
    }

    pub fn truncate(&self, length: u64) -> SetPrefix {
        let length = length.min(self.length);
        SetPrefix {
            length,
            members: FiniteSet::from_sorted(self.members.iter().filter(|&x| x < length).collect()),
        }
    }
}

/// `length<TAB>[members]`.
impl fmt::Display for SetPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}", self.length, self.members)
    }
}

impl FromStr for SetPrefix {
    type Err = SetParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SetParseError(s.to_string());
        let (len, members) = s.split_once('\t').ok_or_else(bad)?;
        let length = len.trim().parse().map_err(|_| bad())?;
        let members: FiniteSet = members.parse()?;
        SetPrefix::new(members, length).map_err(|_| bad())
    }
}
