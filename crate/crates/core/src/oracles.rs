//! Brute-force references for the decision procedures.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::relation::{chipped_cube, decode, is_compatible, ChippedBlock, ChippedCubeSpec, Relation};
use crate::subpower::{self, Budget, GeneratorSource};
use crate::Elem;

/// The `k`-ary term operations of `alg`, each as its value table over `A^k`
/// in index order.
///
/// Computed as the subpower of `A^(n^k)` generated by the `k` projections.
pub fn clone_part(alg: &FiniteAlgebra, k: usize, budget: &Budget) -> Result<Relation> {
    let n = alg.size();
    let width = u32::try_from(k)
        .ok()
        .and_then(|k| n.checked_pow(k))
        .filter(|&w| w <= 1 << 12)
        .ok_or(Error::BudgetExceeded("clone part table width above 4096"))?;
    let projections = (0..k).map(|j| (0..width).map(|c| decode(c as u128, n, k)[j]).collect()).collect();
    let (rel, answer) = subpower::generate(alg, GeneratorSource::explicit(width, projections), None, budget)?;
    if answer.truncated {
        return Err(Error::BudgetExceeded("clone part closure truncated"));
    }
    Ok(rel)
}

/// Identity schemas a term operation can be scanned for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CloneScan {
    /// `f(y,x,…,x) = … = f(x,…,x,y) = x`.
    Nu,
    /// `p(x,y,y) = p(y,y,x) = x`.
    Maltsev,
    /// `t(χ_I(x,y) : ∅ ≠ I ⊆ [d]) = x` coordinatewise, with the nonempty
    /// subsets in binary counter order; arity `2^d − 1`.
    Cube(usize),
}

/// Whether some member of `clone` (a [`clone_part`] of arity `k` over a
/// universe of size `n`) satisfies the identities.
pub fn scan_clone_for(kind: CloneScan, clone: &Relation, n: usize, k: usize) -> Result<bool> {
    let width = n.checked_pow(k as u32).filter(|&w| w == clone.arity());
    if width.is_none() || clone.universe_size() != n {
        return Err(Error::InvalidArgument("relation is not a clone part of this arity"));
    }
    // Argument rows that each identity constrains, paired with the required value.
    let mut rows: Vec<(usize, Elem)> = Vec::new();
    let index = |args: &[Elem]| args.iter().fold(0usize, |acc, &a| acc * n + a as usize);
    for x in 0..n as Elem {
        for y in 0..n as Elem {
            match kind {
                CloneScan::Nu => {
                    if k < 3 {
                        return Err(Error::InvalidArgument("near unanimity needs arity ≥ 3"));
                    }
                    for j in 0..k {
                        let mut args = vec![x; k];
                        args[j] = y;
                        rows.push((index(&args), x));
                    }
                }
                CloneScan::Maltsev => {
                    if k != 3 {
                        return Err(Error::InvalidArgument("Maltsev terms are ternary"));
                    }
                    rows.push((index(&[x, y, y]), x));
                    rows.push((index(&[y, y, x]), x));
                }
                CloneScan::Cube(d) => {
                    if d == 0 || d >= 16 || k != (1 << d) - 1 {
                        return Err(Error::InvalidArgument("cube scan needs arity 2^d − 1"));
                    }
                    // coordinate i of the cube identity: column I holds y iff i ∈ I
                    for i in 0..d {
                        let args: Vec<Elem> =
                            (1..1usize << d).map(|mask| if mask >> i & 1 == 1 { y } else { x }).collect();
                        rows.push((index(&args), x));
                    }
                }
            }
        }
    }
    let found = clone.iter().any(|table| rows.iter().all(|&(r, v)| table[r] == v));
    Ok(found)
}

/// The first compatible `d`-ary chipped cube with one block per coordinate.
///
/// Each coordinate picks a pair of subuniverses `C ⊊ D`; pairs are ordered
/// by `(D, C)` masks and choices enumerated lexicographically.
pub fn exhaustive_chipped_cube_search(
    alg: &FiniteAlgebra,
    d: usize,
    budget: &Budget,
) -> Result<Option<ChippedCubeSpec>> {
    if !alg.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    if d == 0 {
        return Err(Error::InvalidArgument("chipped cube arity must be ≥ 1"));
    }
    let subs = alg.enumerate_subuniverses(None)?;
    let mut pairs = Vec::new();
    for dd in &subs {
        for c in &subs {
            if c.is_proper_subset(dd) {
                pairs.push(ChippedBlock { c: *c, d: *dd, mult: 1 });
            }
        }
    }
    if pairs.is_empty() {
        return Ok(None);
    }
    let total = (pairs.len() as u64).checked_pow(d as u32).filter(|&t| t <= 1 << 24);
    if total.is_none() {
        return Err(Error::BudgetExceeded("too many chipped cube candidates"));
    }
    let mut choice = vec![0usize; d];
    loop {
        let spec = ChippedCubeSpec::new(choice.iter().map(|&i| pairs[i]).collect())?;
        let rel = chipped_cube(&spec, alg.size())?;
        if is_compatible(alg, &rel, budget)? {
            return Ok(Some(spec));
        }
        let mut q = d;
        loop {
            if q == 0 {
                return Ok(None);
            }
            q -= 1;
            choice[q] += 1;
            if choice[q] < pairs.len() {
                break;
            }
            choice[q] = 0;
        }
    }
}
