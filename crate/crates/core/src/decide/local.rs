//! Cube term checks one pair `(a, b) ∈ A^d × A^d` at a time.
//!
//! An algebra has a `d`-dimensional cube term iff for every such pair
//! `⟨A⟩a ∈ Sg{⟨A⟩χ_I(a, b) : I ≠ ∅}`, where the prefix `⟨A⟩ = (0, …, n−1)`
//! can be dropped for idempotent algebras. Pairs agreeing in some coordinate
//! pass trivially, and permuting coordinates of `a` and `b` together does not
//! change the answer, so a pair is described by how many coordinates carry
//! each off-diagonal type `(x, y)`. Coordinates of one type form a block and
//! the query runs on orbits.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::relation::ChiFamily;
use crate::subpower::symmetric::{self, Layout, Orbit};
use crate::subpower::{self, Budget, GeneratorSource, MembershipAnswer};
use crate::Elem;

/// Blocks `(x, y, size)` of one pair profile.
type Profile = Vec<(Elem, Elem, usize)>;

/// The orbit query for a pair profile: generators `χ_I` for every choice of
/// how many coordinates of each block lie in `I`, not all zero.
fn profile_query(alg: &FiniteAlgebra, profile: &Profile, prefix: bool, budget: &Budget) -> Result<MembershipAnswer> {
    let n = alg.size();
    let pre: Vec<Elem> = if prefix { (0..n as Elem).collect() } else { Vec::new() };
    let layout = Layout::new(pre.len(), profile.iter().map(|&(_, _, s)| s).collect())?;
    let counts = |js: &[usize]| -> Vec<Vec<u16>> {
        profile
            .iter()
            .zip(js)
            .map(|(&(x, y, s), &j)| {
                let mut c = vec![0u16; n];
                c[x as usize] = (s - j) as u16;
                c[y as usize] = j as u16;
                c
            })
            .collect()
    };
    let mut gens = Vec::new();
    let mut js = vec![0usize; profile.len()];
    'choices: loop {
        let mut q = js.len();
        loop {
            if q == 0 {
                break 'choices;
            }
            q -= 1;
            js[q] += 1;
            if js[q] <= profile[q].2 {
                break;
            }
            js[q] = 0;
        }
        gens.push(Orbit { prefix: pre.clone(), counts: counts(&js) });
    }
    let target = Orbit { prefix: pre.clone(), counts: counts(&vec![0; profile.len()]) };
    symmetric::membership(alg, &layout, &gens, &target, budget)
}

/// Calls `visit` with every way of spreading `d` coordinates over the
/// off-diagonal types; stops at the first `false`.
fn for_each_profile(n: usize, d: usize, mut visit: impl FnMut(&Profile) -> Result<bool>) -> Result<bool> {
    let types: Vec<(Elem, Elem)> =
        (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x as Elem, y as Elem))).collect();
    let mut profile = Profile::new();
    spread(&types, d, &mut profile, &mut visit)
}

fn spread(
    types: &[(Elem, Elem)],
    left: usize,
    profile: &mut Profile,
    visit: &mut impl FnMut(&Profile) -> Result<bool>,
) -> Result<bool> {
    let Some((&(x, y), rest)) = types.split_first() else {
        return if left == 0 { visit(profile) } else { Ok(true) };
    };
    let lo = if rest.is_empty() { left } else { 0 };
    for c in lo..=left {
        if c > 0 {
            profile.push((x, y, c));
        }
        let go_on = spread(rest, left - c, profile, visit)?;
        if c > 0 {
            profile.pop();
        }
        if !go_on {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether a `d`-dimensional cube term exists, checking pair profiles one at
/// a time.
pub(crate) fn check_cube_local(alg: &FiniteAlgebra, d: usize, budget: &Budget) -> Result<bool> {
    let n = alg.size();
    if d == 0 {
        return Err(Error::InvalidArgument("cube dimension must be ≥ 1"));
    }
    if n == 1 {
        return Ok(true);
    }
    if d > u16::MAX as usize {
        return Err(Error::InvalidArgument("cube dimension too large"));
    }
    let prefix = !alg.is_idempotent();
    for_each_profile(n, d, |profile| {
        let answer = profile_query(alg, profile, prefix, budget)?;
        if answer.truncated {
            return Err(Error::BudgetExceeded("pair membership query truncated"));
        }
        Ok(answer.found)
    })
}

/// Engine for the constant-pair queries of the general decision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PairEngine {
    /// Orbits under permutations of the `d` coordinates.
    #[default]
    Symmetric,
    /// Explicit tuples, generators streamed.
    Explicit,
}

/// `⟨A⟩a^d ∈ Sg{⟨A⟩χ_I(a^d, b^d) : I ≠ ∅}`.
pub fn constant_pair_query(
    alg: &FiniteAlgebra,
    a: Elem,
    b: Elem,
    d: usize,
    engine: PairEngine,
    budget: &Budget,
) -> Result<MembershipAnswer> {
    let n = alg.size();
    if a as usize >= n || b as usize >= n {
        return Err(Error::ElementOutOfRange { element: a.max(b) as usize, size: n });
    }
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be ≥ 1"));
    }
    if a == b {
        return Ok(MembershipAnswer { found: true, closure_size: 1, witness_depth: Some(0), truncated: false });
    }
    match engine {
        PairEngine::Symmetric => profile_query(alg, &vec![(a, b, d)], true, budget),
        PairEngine::Explicit => {
            let prefix: Vec<Elem> = (0..n as Elem).collect();
            let family = ChiFamily::new(&vec![a; d], &vec![b; d], &prefix)?;
            let target = family.target();
            subpower::membership(alg, GeneratorSource::chi_family(family), &target, budget)
        }
    }
}
