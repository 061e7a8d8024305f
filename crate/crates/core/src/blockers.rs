//! Cube term blockers of idempotent algebras.
//!
//! A blocker is a pair of subuniverses `∅ ≠ C ⊊ D` such that every
//! `Dⁿ ∖ (D∖C)ⁿ` is compatible. An idempotent algebra has a cube term iff it
//! has no blocker.

use alloc::vec;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::set::ElementSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blocker {
    pub c: ElementSet,
    pub d: ElementSet,
}

fn require_idempotent(alg: &FiniteAlgebra) -> Result<()> {
    if alg.is_idempotent() {
        Ok(())
    } else {
        Err(Error::NotIdempotent)
    }
}

/// Whether `(c, d)` is a blocker of the idempotent algebra `alg`.
///
/// After the subuniverse checks, each operation table is read once. A tuple
/// over `D` whose value leaves `C` rules out every coordinate where it holds
/// an element of `C`; the pair is a blocker iff every operation keeps at
/// least one coordinate.
pub fn verify_blocker(alg: &FiniteAlgebra, c: &ElementSet, d: &ElementSet) -> Result<bool> {
    require_idempotent(alg)?;
    let n = alg.size();
    if let Some(e) = d.union(c).max_element().filter(|&e| e as usize >= n) {
        return Err(Error::ElementOutOfRange { element: e as usize, size: n });
    }
    if c.is_empty() || !c.is_proper_subset(d) || !alg.is_subuniverse(c) || !alg.is_subuniverse(d) {
        return Ok(false);
    }
    Ok(alg.operations().iter().all(|op| absorbing_coordinate_exists(op.arity(), op.table(), n, c, d)))
}

fn absorbing_coordinate_exists(m: usize, table: &[u8], n: usize, c: &ElementSet, d: &ElementSet) -> bool {
    let mut alive = vec![true; m];
    let mut args = vec![0usize; m];
    let in_d: alloc::vec::Vec<bool> = (0..n).map(|x| d.contains(x as u8)).collect();
    let in_c: alloc::vec::Vec<bool> = (0..n).map(|x| c.contains(x as u8)).collect();
    let mut remaining = m;
    'table: for &value in table {
        let skip = !args.iter().all(|&a| in_d[a]);
        if !skip && !in_c[value as usize] {
            for (j, &a) in args.iter().enumerate() {
                if in_c[a] && alive[j] {
                    alive[j] = false;
                    remaining -= 1;
                    if remaining == 0 {
                        return false;
                    }
                }
            }
        }
        for q in (0..m).rev() {
            args[q] += 1;
            if args[q] < n {
                continue 'table;
            }
            args[q] = 0;
        }
    }
    remaining > 0
}

/// Searches for a blocker in polynomial time.
///
/// For each `c` in increasing order, grows `S` from `{c}`: among `d ∉ S`
/// with inclusion-minimal `Sg(c, d)` it takes the smallest `d`, returns
/// `(S ∩ Sg(c, d), Sg(c, d))` if that is a blocker, and otherwise adds
/// `Sg(c, d)` to `S`.
pub fn find_blocker(alg: &FiniteAlgebra) -> Result<Option<Blocker>> {
    require_idempotent(alg)?;
    let n = alg.size();
    let universe = alg.universe();
    // Sg(c, d) for all pairs, computed once.
    let sg2: alloc::vec::Vec<ElementSet> = (0..n * n).map(|i| alg.sg2((i / n) as u8, (i % n) as u8)).collect();
    for c in 0..n {
        let mut s = ElementSet::singleton(c as u8);
        while s != universe {
            let d_set = minimal_choice(&sg2[c * n..(c + 1) * n], &s);
            let cand_c = s.intersection(&d_set);
            if verify_blocker(alg, &cand_c, &d_set)? {
                return Ok(Some(Blocker { c: cand_c, d: d_set }));
            }
            s = s.union(&d_set);
        }
    }
    Ok(None)
}

/// `Sg(c, d)` for the smallest `d ∉ s` whose generated subuniverse is
/// inclusion-minimal among all `d ∉ s`.
fn minimal_choice(row: &[ElementSet], s: &ElementSet) -> ElementSet {
    let candidates = || (0..row.len()).filter(|&d| !s.contains(d as u8)).map(|d| row[d]);
    candidates().find(|g| candidates().all(|h| !h.is_proper_subset(g))).expect("s is a proper subset of the universe")
}

/// Tries every pair of subuniverses `C ⊊ D`, ordered by `(D, C)` masks.
pub fn exhaustive_blocker_search(alg: &FiniteAlgebra) -> Result<Option<Blocker>> {
    require_idempotent(alg)?;
    let subs = alg.enumerate_subuniverses(None)?;
    for d in &subs {
        for c in &subs {
            if c.is_proper_subset(d) && verify_blocker(alg, c, d)? {
                return Ok(Some(Blocker { c: *c, d: *d }));
            }
        }
    }
    Ok(None)
}
