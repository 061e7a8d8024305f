//! Subuniverses of finite powers `A^k` generated by families of tuples.
//!
//! [`generate`] closes a generator family under the basic operations applied
//! row-wise, breadth first: each round only evaluates argument tuples that
//! use at least one tuple found in the previous round. Generators may be
//! streamed; they are fed in chunks between rounds so that a membership
//! query can stop before the whole family has been produced.
//!
//! [`symmetric`] does the same for relations that are invariant under
//! permuting coordinates inside blocks, working on orbits instead of tuples.

pub mod symmetric;

use core::fmt;
use core::hash::BuildHasher;
use core::ops::ControlFlow;

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{DefaultHashBuilder, HashTable};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::frontier::for_each_frontier_tuple;
use crate::relation::{code_space, ChiFamily, Relation, DENSE_THRESHOLD};
use crate::Elem;

/// Generators fed to the closure loop per round.
const CHUNK: usize = 4096;

/// Resource limits for closure computations. Exceeding any of them stops
/// the computation and sets [`MembershipAnswer::truncated`].
#[derive(Clone)]
pub struct Budget {
    /// Most tuples (or orbits) a closure may hold.
    pub max_tuples: usize,
    /// Approximate memory ceiling for a single closure.
    pub max_bytes: Option<usize>,
    /// Most row-wise operation applications per closure.
    pub max_applications: Option<u64>,
    /// Polled periodically; returning `true` stops the computation.
    pub interrupt: Option<Arc<dyn Fn() -> bool + Send + Sync>>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_tuples: 100_000_000, max_bytes: None, max_applications: None, interrupt: None }
    }
}

impl fmt::Debug for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Budget")
            .field("max_tuples", &self.max_tuples)
            .field("max_bytes", &self.max_bytes)
            .field("max_applications", &self.max_applications)
            .field("interrupt", &self.interrupt.is_some())
            .finish()
    }
}

impl Budget {
    pub fn with_max_tuples(mut self, max_tuples: usize) -> Self {
        self.max_tuples = max_tuples;
        self
    }

    pub fn with_max_bytes(mut self, bytes: usize) -> Self {
        self.max_bytes = Some(bytes);
        self
    }

    pub fn with_max_applications(mut self, apps: u64) -> Self {
        self.max_applications = Some(apps);
        self
    }

    pub fn with_interrupt(mut self, f: impl Fn() -> bool + Send + Sync + 'static) -> Self {
        self.interrupt = Some(Arc::new(f));
        self
    }

    pub(crate) fn meter(&self, bytes_per_item: usize) -> Meter<'_> {
        let by_bytes = self.max_bytes.map(|b| b / bytes_per_item.max(1)).unwrap_or(usize::MAX);
        Meter { budget: self, max_items: self.max_tuples.min(by_bytes), applications: 0, stopped: false }
    }
}

pub(crate) struct Meter<'a> {
    budget: &'a Budget,
    max_items: usize,
    applications: u64,
    stopped: bool,
}

impl Meter<'_> {
    /// Counts one application; false once a limit is hit.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        self.applications += 1;
        if let Some(max) = self.budget.max_applications {
            if self.applications > max {
                self.stopped = true;
            }
        }
        if self.applications & 0xfff == 0 {
            if let Some(int) = &self.budget.interrupt {
                if int() {
                    self.stopped = true;
                }
            }
        }
        !self.stopped
    }

    #[inline]
    pub(crate) fn room_for(&mut self, items: usize) -> bool {
        if items >= self.max_items {
            self.stopped = true;
        }
        !self.stopped
    }

    pub(crate) fn stopped(&self) -> bool {
        self.stopped
    }
}

/// Outcome of a closure run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MembershipAnswer {
    pub found: bool,
    /// Tuples (or orbits) held when the run ended.
    pub closure_size: usize,
    /// Round in which the target appeared; generators fed in the first
    /// round are at depth 0.
    pub witness_depth: Option<usize>,
    /// A budget limit stopped the run before the closure was complete.
    pub truncated: bool,
}

/// A family of generator tuples, all of the same arity.
pub struct GeneratorSource {
    arity: usize,
    iter: Box<dyn Iterator<Item = Vec<Elem>> + Send>,
}

impl GeneratorSource {
    pub fn explicit(arity: usize, tuples: Vec<Vec<Elem>>) -> Self {
        GeneratorSource { arity, iter: Box::new(tuples.into_iter()) }
    }

    pub fn streamed(arity: usize, iter: impl Iterator<Item = Vec<Elem>> + Send + 'static) -> Self {
        GeneratorSource { arity, iter: Box::new(iter) }
    }

    pub fn chi_family(family: ChiFamily) -> Self {
        GeneratorSource { arity: family.arity(), iter: Box::new(family) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Debug for GeneratorSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorSource").field("arity", &self.arity).finish_non_exhaustive()
    }
}

enum Seen {
    Dense(Vec<u64>),
    Sparse(HashTable<u32>),
}

/// Tuples stored back to back in one buffer, with a membership index.
struct TupleStore {
    n: usize,
    width: usize,
    data: Vec<Elem>,
    len: usize,
    seen: Seen,
    hasher: DefaultHashBuilder,
}

impl TupleStore {
    fn new(n: usize, width: usize, dense: bool) -> Self {
        let seen = if dense {
            let space = code_space(n, width).unwrap_or(0) as usize;
            Seen::Dense(vec![0; space.div_ceil(64).max(1)])
        } else {
            Seen::Sparse(HashTable::new())
        };
        TupleStore { n, width, data: Vec::new(), len: 0, seen, hasher: DefaultHashBuilder::default() }
    }

    #[inline]
    fn get(&self, i: usize) -> &[Elem] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    #[inline]
    fn code(&self, t: &[Elem]) -> usize {
        t.iter().fold(0usize, |acc, &e| acc * self.n + e as usize)
    }

    fn contains(&self, t: &[Elem]) -> bool {
        match &self.seen {
            Seen::Dense(bits) => {
                let c = self.code(t);
                bits[c >> 6] >> (c & 63) & 1 == 1
            }
            Seen::Sparse(table) => {
                let h = self.hasher.hash_one(t);
                table.find(h, |&i| self.get(i as usize) == t).is_some()
            }
        }
    }

    /// Inserts `t` unless present; returns whether it was new.
    #[inline]
    fn insert(&mut self, t: &[Elem]) -> bool {
        match &mut self.seen {
            Seen::Dense(bits) => {
                let c = t.iter().fold(0usize, |acc, &e| acc * self.n + e as usize);
                let bit = 1u64 << (c & 63);
                if bits[c >> 6] & bit != 0 {
                    return false;
                }
                bits[c >> 6] |= bit;
            }
            Seen::Sparse(table) => {
                let h = self.hasher.hash_one(t);
                let (data, width) = (&self.data, self.width);
                if table.find(h, |&i| &data[i as usize * width..(i as usize + 1) * width] == t).is_some() {
                    return false;
                }
                let hasher = &self.hasher;
                table.insert_unique(h, self.len as u32, |&i| {
                    hasher.hash_one(&data[i as usize * width..(i as usize + 1) * width])
                });
            }
        }
        self.data.extend_from_slice(t);
        self.len += 1;
        true
    }
}

fn check_tuple(t: &[Elem], arity: usize, n: usize) -> Result<()> {
    if t.len() != arity {
        return Err(Error::ArityMismatch { expected: arity, found: t.len() });
    }
    match t.iter().find(|&&e| e as usize >= n) {
        Some(&e) => Err(Error::ElementOutOfRange { element: e as usize, size: n }),
        None => Ok(()),
    }
}

/// Closes `gens` under the basic operations of `alg` applied row-wise.
///
/// With a `target`, the run stops as soon as the target is produced and the
/// returned relation is the part of the closure found so far. Budget
/// overruns are reported through [`MembershipAnswer::truncated`]; the
/// relation is then a subset of the closure.
pub fn generate(
    alg: &FiniteAlgebra,
    mut gens: GeneratorSource,
    target: Option<&[Elem]>,
    budget: &Budget,
) -> Result<(Relation, MembershipAnswer)> {
    let n = alg.size();
    let width = gens.arity;
    if let Some(t) = target {
        check_tuple(t, width, n)?;
    }
    if width > u32::MAX as usize {
        return Err(Error::InvalidArgument("power arity too large"));
    }
    let space = code_space(n, width);
    let mut dense = matches!(space, Some(s) if s <= DENSE_THRESHOLD);
    let dense_bytes = space.map(|s| (s / 8) as usize).unwrap_or(usize::MAX);
    if dense && budget.max_bytes.is_some_and(|b| dense_bytes > b / 2) {
        dense = false;
    }
    let per_tuple = width + if dense { 0 } else { 16 };
    let mut meter = budget.meter(per_tuple);
    if dense {
        if let Some(b) = budget.max_bytes {
            meter.max_items = (b - dense_bytes) / per_tuple.max(1);
        }
    }

    let mut store = TupleStore::new(n, width, dense);
    let mut found_depth: Option<usize> = None;
    let mut exhausted = false;
    let mut depth = 0usize;
    let mut old = 0usize;
    let mut out = vec![0 as Elem; width];
    let mut args_base = Vec::new();
    let mut mults = Vec::new();

    'rounds: loop {
        // Feed the next chunk of generators.
        if !exhausted {
            for _ in 0..CHUNK {
                match gens.iter.next() {
                    Some(g) => {
                        check_tuple(&g, width, n)?;
                        if store.contains(&g) {
                            continue;
                        }
                        if !meter.room_for(store.len) {
                            break 'rounds;
                        }
                        store.insert(&g);
                        if target == Some(g.as_slice()) {
                            found_depth = Some(depth);
                            break 'rounds;
                        }
                    }
                    None => {
                        exhausted = true;
                        break;
                    }
                }
            }
        }
        let cur = store.len;
        if old == cur {
            if exhausted {
                break;
            }
            depth += 1;
            continue;
        }
        for op in alg.operations() {
            let m = op.arity();
            let table = op.table();
            args_base.resize(m, 0usize);
            mults.clear();
            mults.extend((0..m).map(|j| n.pow((m - 1 - j) as u32)));
            let flow = for_each_frontier_tuple(m, old, cur, |idx| {
                if !meter.tick() {
                    return ControlFlow::Break(false);
                }
                for (b, &i) in args_base.iter_mut().zip(idx) {
                    *b = i * width;
                }
                for (r, slot) in out.iter_mut().enumerate() {
                    let mut k = 0usize;
                    for (b, &mu) in args_base.iter().zip(&mults) {
                        k += store.data[b + r] as usize * mu;
                    }
                    *slot = table[k];
                }
                if store.contains(&out) {
                    return ControlFlow::Continue(());
                }
                if !meter.room_for(store.len) {
                    return ControlFlow::Break(false);
                }
                store.insert(&out);
                if target == Some(out.as_slice()) {
                    return ControlFlow::Break(true);
                }
                ControlFlow::Continue(())
            });
            match flow {
                ControlFlow::Break(true) => {
                    found_depth = Some(depth + 1);
                    break 'rounds;
                }
                ControlFlow::Break(false) => break 'rounds,
                ControlFlow::Continue(()) => {}
            }
        }
        old = cur;
        depth += 1;
    }

    let truncated = meter.stopped() && found_depth.is_none();
    let mut rel = Relation::new(n, width);
    for i in 0..store.len {
        rel.insert(store.get(i))?;
    }
    let answer = MembershipAnswer {
        found: found_depth.is_some(),
        closure_size: store.len,
        witness_depth: found_depth,
        truncated,
    };
    Ok((rel, answer))
}

/// Whether `target` lies in the subpower generated by `gens`.
pub fn membership(
    alg: &FiniteAlgebra,
    gens: GeneratorSource,
    target: &[Elem],
    budget: &Budget,
) -> Result<MembershipAnswer> {
    generate(alg, gens, Some(target), budget).map(|(_, a)| a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::relation::is_compatible;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn tuples(ts: &[&[Elem]]) -> Vec<Vec<Elem>> {
        ts.iter().map(|t| t.to_vec()).collect()
    }

    /// Naive fixpoint: apply every operation to every argument tuple until
    /// nothing changes.
    fn naive_closure(alg: &FiniteAlgebra, gens: &[Vec<Elem>]) -> BTreeSet<Vec<Elem>> {
        let mut set: BTreeSet<Vec<Elem>> = gens.iter().cloned().collect();
        let n = alg.size();
        loop {
            let members: Vec<_> = set.iter().cloned().collect();
            let mut added = false;
            for op in alg.operations() {
                let m = op.arity();
                let total = members.len().pow(m as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut cols = Vec::new();
                    for _ in 0..m {
                        cols.push(&members[c % members.len()]);
                        c /= members.len();
                    }
                    let k = members[0].len();
                    let t: Vec<Elem> = (0..k)
                        .map(|r| {
                            let args: Vec<Elem> = cols.iter().map(|col| col[r]).collect();
                            op.eval(&args, n)
                        })
                        .collect();
                    added |= set.insert(t);
                }
            }
            if !added {
                return set;
            }
        }
    }

    #[test]
    fn lattice_closure() {
        let alg = fixtures::lattice2();
        let gens = GeneratorSource::explicit(2, tuples(&[&[0, 1], &[1, 0]]));
        let (rel, ans) = generate(&alg, gens, None, &Budget::default()).unwrap();
        assert_eq!(rel.to_vec(), tuples(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]));
        assert!(!ans.found && !ans.truncated);
    }

    #[test]
    fn generator_found_at_depth_zero() {
        let alg = fixtures::idempotent_quasigroup(3).unwrap();
        let gens = GeneratorSource::explicit(3, tuples(&[&[0, 1, 2]]));
        let ans = membership(&alg, gens, &[0, 1, 2], &Budget::default()).unwrap();
        assert!(ans.found);
        assert_eq!(ans.witness_depth, Some(0));
    }

    #[test]
    fn meet_cannot_create_ones() {
        let alg = fixtures::semilattice2();
        let gens = GeneratorSource::explicit(2, tuples(&[&[0, 1], &[1, 0]]));
        let (rel, ans) = generate(&alg, gens, Some(&[1, 1]), &Budget::default()).unwrap();
        assert!(!ans.found);
        assert_eq!(rel.to_vec(), tuples(&[&[0, 0], &[0, 1], &[1, 0]]));

        let gens = GeneratorSource::explicit(2, tuples(&[&[0, 1], &[1, 0], &[0, 0]]));
        assert!(!membership(&alg, gens, &[1, 1], &Budget::default()).unwrap().found);
    }

    #[test]
    fn lattice_chi_family_reaches_target() {
        let alg = fixtures::lattice2();
        let fam = ChiFamily::new(&[1, 1], &[0, 0], &[]).unwrap();
        let ans = membership(&alg, GeneratorSource::chi_family(fam), &[1, 1], &Budget::default()).unwrap();
        assert!(ans.found);
        assert_eq!(ans.witness_depth, Some(1));
    }

    #[test]
    fn streamed_generators_match_explicit() {
        let alg = fixtures::semilattice2();
        let fam = ChiFamily::new(&[1; 10], &[0; 10], &[0, 1]).unwrap();
        let all: Vec<_> = fam.clone().collect();
        assert_eq!(all.len(), (1 << 10) - 1);
        let (a, _) = generate(&alg, GeneratorSource::chi_family(fam), None, &Budget::default()).unwrap();
        let (b, _) = generate(&alg, GeneratorSource::explicit(12, all), None, &Budget::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), (1 << 10) - 1);
    }

    #[test]
    fn budget_truncates() {
        let alg = fixtures::lattice2();
        let fam = ChiFamily::new(&[1; 10], &[0; 10], &[]).unwrap();
        let budget = Budget::default().with_max_tuples(100);
        let (rel, ans) = generate(&alg, GeneratorSource::chi_family(fam), None, &budget).unwrap();
        assert!(ans.truncated);
        assert!(rel.len() <= 100);

        let fam = ChiFamily::new(&[1; 10], &[0; 10], &[]).unwrap();
        let budget = Budget::default().with_interrupt(|| true);
        let (_, ans) = generate(&alg, GeneratorSource::chi_family(fam), None, &budget).unwrap();
        assert!(ans.truncated);
    }

    #[test]
    fn rejects_bad_generators() {
        let alg = fixtures::lattice2();
        let gens = GeneratorSource::explicit(2, tuples(&[&[0, 2]]));
        assert!(generate(&alg, gens, None, &Budget::default()).is_err());
        let gens = GeneratorSource::explicit(2, tuples(&[&[0]]));
        assert!(generate(&alg, gens, None, &Budget::default()).is_err());
    }

    fn random_algebra(rng: &mut ChaCha8Rng, n: usize) -> FiniteAlgebra {
        let arities = [1 + rng.gen_range(0..3), 1 + rng.gen_range(0..2)];
        let ops = arities
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let table = (0..n.pow(m as u32)).map(|_| rng.gen_range(0..n) as Elem).collect();
                crate::algebra::OperationTable::new(alloc::format!("f{i}"), m, table)
            })
            .collect();
        FiniteAlgebra::new(None, n, ops).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closure_matches_naive_fixpoint(seed in any::<u64>(), dense in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..4);
            let alg = random_algebra(&mut rng, n);
            let k = rng.gen_range(1..4);
            let gens: Vec<Vec<Elem>> = (0..rng.gen_range(1..4))
                .map(|_| (0..k).map(|_| rng.gen_range(0..n) as Elem).collect())
                .collect();
            let expected = naive_closure(&alg, &gens);
            let budget = if dense { Budget::default() } else { Budget::default().with_max_bytes(64 << 20) };
            let (rel, ans) = generate(&alg, GeneratorSource::explicit(k, gens.clone()), None, &budget).unwrap();
            prop_assert!(!ans.truncated);
            let got: BTreeSet<_> = rel.iter().collect();
            prop_assert_eq!(&got, &expected);
            // closed: compatible with the algebra, and a fixed point
            prop_assert!(is_compatible(&alg, &rel, &Budget::default()).unwrap());
            let (again, _) = generate(&alg, GeneratorSource::explicit(k, rel.to_vec()), None, &Budget::default()).unwrap();
            prop_assert_eq!(&again, &rel);
            // monotone in the generators
            let mut more = gens.clone();
            more.push((0..k).map(|_| rng.gen_range(0..n) as Elem).collect());
            let (bigger, _) = generate(&alg, GeneratorSource::explicit(k, more), None, &Budget::default()).unwrap();
            prop_assert!(rel.iter().all(|t| bigger.contains(&t)));
            // projections of the closure lie in the closure of projected generators
            let proj = rel.project(&[0]).unwrap();
            let pgens: Vec<Vec<Elem>> = gens.iter().map(|g| vec![g[0]]).collect();
            let (pclosure, _) = generate(&alg, GeneratorSource::explicit(1, pgens), None, &Budget::default()).unwrap();
            prop_assert!(proj.iter().all(|t| pclosure.contains(&t)));
        }
    }
}
