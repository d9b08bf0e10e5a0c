//! A hyperimmune set that defeats every listed modulus of immunity.

use crate::machine::build::*;
use crate::machine::pairing::unpair;
use crate::machine::Program;
use crate::numberings::{witness_numbering, CanonicalRule};
use crate::sets::{FiniteSet, SetPrefix};

use super::ci_hi::apply_u64;
use super::trace::{ConstructionTrace, StageRecord};
use super::ConstructionError;

/// `H_f(n)`: disjoint intervals with `min H_f(n) ≥ n` and
/// `|H_f(n)| = f(2n) + 1`, laid out by `start(0) = 0` and
/// `start(n + 1) = max(start(n) + f(2n) + 1, n + 1)`.
#[derive(Clone, Debug)]
pub struct BlockFamily {
    f: Program,
    starts: Vec<u64>,
    sizes: Vec<u64>,
}

impl BlockFamily {
    pub fn new(f: Program) -> Result<Self, ConstructionError> {
        if !f.is_total_tier() {
            return Err(ConstructionError::NotTotal);
        }
        Ok(BlockFamily {
            f,
            starts: Vec::new(),
            sizes: Vec::new(),
        })
    }

    pub fn function(&self) -> &Program {
        &self.f
    }

    fn extend_to(&mut self, n: u64) -> Result<(), ConstructionError> {
        while self.starts.len() as u64 <= n {
            let k = self.starts.len() as u64;
            let start = match k {
                0 => 0,
                _ => (self.starts[k as usize - 1] + self.sizes[k as usize - 1]).max(k),
            };
            self.starts.push(start);
            self.sizes.push(apply_u64(&self.f, 2 * k)? + 1);
        }
        Ok(())
    }

    pub fn block(&mut self, n: u64) -> Result<FiniteSet, ConstructionError> {
        self.extend_to(n)?;
        Ok(FiniteSet::interval(
            self.starts[n as usize],
            self.sizes[n as usize],
        ))
    }

    pub fn start(&mut self, n: u64) -> Result<u64, ConstructionError> {
        self.extend_to(n)?;
        Ok(self.starts[n as usize])
    }

    /// `n ↦` canonical code of `H_f(n)`, as a total-tier program.
    pub fn program(&self) -> Program {
        let f = |x: Program| call(self.f.clone(), vec![x]);
        // step frame: [k, acc]
        let step = max(
            add(add(proj(1), f(mul(konst(2u32), proj(0)))), konst(1u32)),
            succ(proj(0)),
        );
        let start = iterate(proj(0), konst(0u32), step, 1);
        interval(start, succ(f(mul(konst(2u32), proj(0)))))
    }

    /// A canonical numbering with `D(2n) = H_f(n)`.
    pub fn witness_numbering(&self) -> CanonicalRule {
        witness_numbering(&self.program()).expect("block programs are total")
    }
}

/// One chosen block `H_{f_i}(n_p)` for `p = ⟨i, k⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub p: u64,
    pub i: u64,
    pub k: u64,
    /// Index into the function list (`i mod len`).
    pub function: usize,
    pub n: u64,
    pub block: FiniteSet,
    /// Members of `R` from earlier blocks; `min(block)` is member number
    /// `preceding + 1`, counting from 1.
    pub preceding: u64,
    /// `f_i(preceding + 1)`, which `n` exceeds.
    pub threshold: u64,
}

#[derive(Clone, Debug)]
pub struct HiNotCiRun {
    pub prefix: SetPrefix,
    pub trace: ConstructionTrace,
    pub selections: Vec<Selection>,
    pub families: Vec<BlockFamily>,
}

impl HiNotCiRun {
    /// The numbering `D(2n) = H_{f_c}(n)` that refutes modulus `f_c`.
    pub fn witness_numbering(&self, function: usize) -> CanonicalRule {
        self.families[function].witness_numbering()
    }

    /// Indices `2n_p` at which the witness numbering for `function` lands
    /// inside `R` with more than `f(2n_p)` elements.
    pub fn witness_indices(&self, function: usize) -> Vec<u64> {
        self.selections
            .iter()
            .filter(|s| s.function == function)
            .map(|s| 2 * s.n)
            .collect()
    }
}

/// Chooses blocks for `p = 0 … P-1`. With `p = ⟨i, k⟩` and `s` members
/// already in `R`, `n_p` is least with `n_p > f_i(s + 1)` (and `n_0 > f_i(0)`)
/// whose block lies above every earlier block, so `min H_{f_i}(n_p)` is
/// member `s + 1` of `R`. The function list is cycled by `i`.
pub fn hi_not_ci_run(fns: &[Program], blocks: u64) -> Result<HiNotCiRun, ConstructionError> {
    if fns.is_empty() {
        return Err(ConstructionError::NotTotal);
    }
    if blocks == 0 {
        return Err(ConstructionError::ZeroHorizon);
    }
    let mut families = fns
        .iter()
        .cloned()
        .map(BlockFamily::new)
        .collect::<Result<Vec<_>, _>>()?;
    let mut members = Vec::new();
    let mut selections = Vec::new();
    let mut trace = ConstructionTrace::default();
    for p in 0..blocks {
        let (i, k) = unpair(p);
        let c = (i % fns.len() as u64) as usize;
        let preceding = members.len() as u64;
        let mut threshold = apply_u64(&fns[c], preceding + 1)?;
        if p == 0 {
            threshold = threshold.max(apply_u64(&fns[c], 0)?);
        }
        let floor = members.last().map(|&m: &u64| m + 1).unwrap_or(0);
        let family = &mut families[c];
        let mut n = threshold + 1;
        while family.start(n)? < floor {
            n += 1;
        }
        let block = family.block(n)?;
        members.extend(block.iter());
        trace.push(
            StageRecord::new(p, "block", "R")
                .adding(block.clone())
                .note("i", i)
                .note("k", k)
                .note("n", n)
                .note("threshold", threshold),
        );
        selections.push(Selection {
            p,
            i,
            k,
            function: c,
            n,
            block,
            preceding,
            threshold,
        });
    }
    let prefix = SetPrefix::tight(FiniteSet::from_sorted(members));
    Ok(HiNotCiRun {
        prefix,
        trace,
        selections,
        families,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::library;

    #[test]
    fn block_family_properties() {
        for f in [
            library::constant(0),
            library::identity(),
            library::constant(5),
        ] {
            let mut fam = BlockFamily::new(f.clone()).unwrap();
            let rule = fam.witness_numbering();
            let mut prev: Option<u64> = None;
            for n in 0..30 {
                let b = fam.block(n).unwrap();
                assert!(b.min().unwrap() >= n);
                assert!(b.len() as u64 > apply_u64(&f, 2 * n).unwrap());
                if let Some(m) = prev {
                    assert!(b.min().unwrap() > m);
                }
                prev = b.max();
                assert_eq!(rule.value(2 * n), b);
            }
        }
    }

    #[test]
    fn constant_zero_gives_singletons() {
        let run = hi_not_ci_run(&[library::constant(0)], 6).unwrap();
        assert!(run.selections.iter().all(|s| s.block.len() == 1));
        assert_eq!(run.prefix.members().len(), 6);
    }

    #[test]
    fn identity_first_block() {
        let run = hi_not_ci_run(&[library::identity()], 1).unwrap();
        let s = &run.selections[0];
        assert!(s.n > 0);
        assert!(s.block.len() as u64 > 2 * s.n);
        assert!(s.block.min().unwrap() >= s.n);
    }

    #[test]
    fn minimum_of_each_block_beats_threshold() {
        let fns = [library::constant(2), library::identity()];
        let run = hi_not_ci_run(&fns, 9).unwrap();
        let principal = run.prefix.principal();
        for s in &run.selections {
            // member number s.preceding + 1, counted from 1
            let member = principal[s.preceding as usize];
            assert_eq!(member, s.block.min().unwrap());
            assert!(member > apply_u64(&fns[s.function], s.preceding + 1).unwrap());
        }
        assert_eq!(&run.trace.replay("R"), run.prefix.members());
    }
}
