//! Finitary relations over a finite universe, the `χ_I` combinator, and
//! chipped cubes.

use core::ops::ControlFlow;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::set::ElementSet;
use crate::subpower::{self, Budget, GeneratorSource};
use crate::Elem;

/// Relations with at most this many codes are stored as a dense bitset.
pub const DENSE_THRESHOLD: u64 = 1 << 26;

/// Largest `Σ |R|^m` that [`is_compatible`] will scan directly.
pub const DIRECT_SCAN_LIMIT: u64 = 1 << 24;

/// Canonical code `Σ tᵢ·n^(k-i)` of a tuple, if it fits in 128 bits.
pub fn encode(tuple: &[Elem], n: usize) -> Option<u128> {
    let mut code: u128 = 0;
    for &e in tuple {
        code = code.checked_mul(n as u128)?.checked_add(e as u128)?;
    }
    Some(code)
}

/// Inverse of [`encode`] for tuples of the given arity.
pub fn decode(mut code: u128, n: usize, arity: usize) -> Vec<Elem> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = (code % n as u128) as Elem;
        code /= n as u128;
    }
    out
}

/// `n^k` when it fits in a `u64`.
pub(crate) fn code_space(n: usize, arity: usize) -> Option<u64> {
    u32::try_from(arity).ok().and_then(|k| (n as u64).checked_pow(k))
}

#[derive(Clone, Debug)]
enum Store {
    Dense { bits: Vec<u64>, len: usize },
    Sparse(BTreeSet<Box<[Elem]>>),
}

/// A set of `arity`-tuples over `{0, …, n-1}`.
///
/// Small code spaces (`n^arity ≤ 2²⁶`) use one bit per tuple; larger ones
/// keep an ordered set of tuples. Either way iteration is in code order.
#[derive(Clone, Debug)]
pub struct Relation {
    n: usize,
    arity: usize,
    store: Store,
}

impl Relation {
    pub fn new(n: usize, arity: usize) -> Self {
        Self::with_threshold(n, arity, DENSE_THRESHOLD)
    }

    pub fn with_threshold(n: usize, arity: usize, dense_threshold: u64) -> Self {
        let store = match code_space(n, arity) {
            Some(space) if space <= dense_threshold => {
                Store::Dense { bits: vec![0; (space as usize).div_ceil(64)], len: 0 }
            }
            _ => Store::Sparse(BTreeSet::new()),
        };
        Relation { n, arity, store }
    }

    pub fn from_tuples<T: AsRef<[Elem]>>(n: usize, arity: usize, tuples: impl IntoIterator<Item = T>) -> Result<Self> {
        let mut rel = Relation::new(n, arity);
        for t in tuples {
            rel.insert(t.as_ref())?;
        }
        Ok(rel)
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.store, Store::Dense { .. })
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Dense { len, .. } => *len,
            Store::Sparse(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check(&self, tuple: &[Elem]) -> Result<()> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: tuple.len() });
        }
        if let Some(&e) = tuple.iter().find(|&&e| e as usize >= self.n) {
            return Err(Error::ElementOutOfRange { element: e as usize, size: self.n });
        }
        Ok(())
    }

    fn dense_index(&self, tuple: &[Elem]) -> usize {
        tuple.iter().fold(0usize, |acc, &e| acc * self.n + e as usize)
    }

    pub fn insert(&mut self, tuple: &[Elem]) -> Result<bool> {
        self.check(tuple)?;
        let idx = self.dense_index_if_dense(tuple);
        Ok(match &mut self.store {
            Store::Dense { bits, len } => {
                let idx = idx.unwrap_or_default();
                let bit = 1u64 << (idx & 63);
                let fresh = bits[idx >> 6] & bit == 0;
                bits[idx >> 6] |= bit;
                *len += fresh as usize;
                fresh
            }
            Store::Sparse(s) => s.insert(tuple.into()),
        })
    }

    fn dense_index_if_dense(&self, tuple: &[Elem]) -> Option<usize> {
        match self.store {
            Store::Dense { .. } => Some(self.dense_index(tuple)),
            Store::Sparse(_) => None,
        }
    }

    pub fn contains(&self, tuple: &[Elem]) -> bool {
        if self.check(tuple).is_err() {
            return false;
        }
        match &self.store {
            Store::Dense { bits, .. } => {
                let idx = self.dense_index(tuple);
                bits[idx >> 6] >> (idx & 63) & 1 == 1
            }
            Store::Sparse(s) => s.contains(tuple),
        }
    }

    /// Members in code order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = Vec<Elem>> + '_> {
        match &self.store {
            Store::Dense { bits, .. } => Box::new(bits.iter().enumerate().flat_map(move |(w, &word)| {
                let mut word = word;
                core::iter::from_fn(move || {
                    if word == 0 {
                        return None;
                    }
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(decode((w * 64 + b) as u128, self.n, self.arity))
                })
            })),
            Store::Sparse(s) => Box::new(s.iter().map(|t| t.to_vec())),
        }
    }

    pub fn to_vec(&self) -> Vec<Vec<Elem>> {
        self.iter().collect()
    }

    /// Same universe, arity and members.
    pub fn same_members(&self, other: &Relation) -> bool {
        self.n == other.n
            && self.arity == other.arity
            && self.len() == other.len()
            && self.iter().all(|t| other.contains(&t))
    }

    /// Projection onto the listed coordinates, in that order.
    pub fn project(&self, coords: &[usize]) -> Result<Relation> {
        if coords.iter().any(|&c| c >= self.arity) {
            return Err(Error::InvalidArgument("projection coordinate out of range"));
        }
        let mut out = Relation::new(self.n, coords.len());
        for t in self.iter() {
            let p: Vec<Elem> = coords.iter().map(|&c| t[c]).collect();
            out.insert(&p)?;
        }
        Ok(out)
    }
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.same_members(other)
    }
}

impl Eq for Relation {}

/// `χ_I(a, b)`: `b` on the coordinates in `subset` (0-based), `a` elsewhere.
pub fn chi(a: &[Elem], b: &[Elem], subset: &[usize]) -> Result<Vec<Elem>> {
    if a.len() != b.len() {
        return Err(Error::ArityMismatch { expected: a.len(), found: b.len() });
    }
    let mut out = a.to_vec();
    for &i in subset {
        if i >= a.len() {
            return Err(Error::InvalidArgument("subset coordinate out of range"));
        }
        out[i] = b[i];
    }
    Ok(out)
}

/// `χ_I(a, b)` where bit `i` of `mask` selects coordinate `i`.
pub fn chi_mask(a: &[Elem], b: &[Elem], mask: u64) -> Vec<Elem> {
    a.iter().zip(b).enumerate().map(|(i, (&x, &y))| if i < 64 && mask >> i & 1 == 1 { y } else { x }).collect()
}

/// The tuples `prefix·χ_I(a, b)` for nonempty `I`, without repeats.
///
/// Two subsets give the same tuple exactly when they agree on the
/// coordinates where `a` and `b` differ, so the stream counts through the
/// subsets of those coordinates (binary counter, lowest coordinate as the
/// lowest bit). The tuple `prefix·a` is included iff some coordinate has
/// `aᵢ = bᵢ`. Cloning restarts the stream.
#[derive(Clone, Debug)]
pub struct ChiFamily {
    prefix: Vec<Elem>,
    a: Vec<Elem>,
    b: Vec<Elem>,
    diff: Vec<usize>,
    next: u64,
    end: u64,
}

impl ChiFamily {
    pub fn new(a: &[Elem], b: &[Elem], prefix: &[Elem]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::ArityMismatch { expected: a.len(), found: b.len() });
        }
        let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
        if diff.len() > 62 {
            return Err(Error::BudgetExceeded("chi family with more than 2^62 members"));
        }
        let has_equal = diff.len() < a.len();
        Ok(ChiFamily {
            prefix: prefix.to_vec(),
            a: a.to_vec(),
            b: b.to_vec(),
            diff: diff.clone(),
            next: if has_equal { 0 } else { 1 },
            end: 1u64 << diff.len(),
        })
    }

    pub fn arity(&self) -> usize {
        self.prefix.len() + self.a.len()
    }

    /// Number of distinct tuples in the family.
    pub fn count(&self) -> u64 {
        let has_equal = self.diff.len() < self.a.len();
        (1u64 << self.diff.len()) - 1 + has_equal as u64
    }

    /// `prefix·a`, the tuple a cube term would produce from the family.
    pub fn target(&self) -> Vec<Elem> {
        let mut t = self.prefix.clone();
        t.extend_from_slice(&self.a);
        t
    }
}

impl Iterator for ChiFamily {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let mut t = self.prefix.clone();
        t.extend_from_slice(&self.a);
        let off = self.prefix.len();
        for (bit, &i) in self.diff.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                t[off + i] = self.b[i];
            }
        }
        Some(t)
    }
}

/// Whether every basic operation, applied row-wise to members of `rel`,
/// lands back in `rel`.
///
/// Scans all argument tuples directly when `Σ |R|^m` is small, and
/// otherwise closes `rel` inside the power and compares sizes.
pub fn is_compatible(alg: &FiniteAlgebra, rel: &Relation, budget: &Budget) -> Result<bool> {
    compatible_with_scan_limit(alg, rel, DIRECT_SCAN_LIMIT, budget)
}

fn compatible_with_scan_limit(alg: &FiniteAlgebra, rel: &Relation, scan_limit: u64, budget: &Budget) -> Result<bool> {
    if rel.universe_size() != alg.size() {
        return Err(Error::InvalidArgument("relation and algebra have different universes"));
    }
    let size = rel.len() as u64;
    let scan_cost = alg
        .operations()
        .iter()
        .map(|op| size.checked_pow(op.arity() as u32).unwrap_or(u64::MAX))
        .fold(0u64, u64::saturating_add);
    if scan_cost <= scan_limit {
        return Ok(direct_scan(alg, rel));
    }
    // One tuple beyond `rel` settles the question, so stop there.
    let budget = budget.clone().with_max_tuples(budget.max_tuples.min(rel.len().saturating_add(1)));
    let gens = GeneratorSource::explicit(rel.arity(), rel.to_vec());
    let (closure, answer) = subpower::generate(alg, gens, None, &budget)?;
    if closure.len() > rel.len() {
        return Ok(false);
    }
    if answer.truncated {
        return Err(Error::BudgetExceeded("compatibility closure truncated"));
    }
    Ok(true)
}

fn direct_scan(alg: &FiniteAlgebra, rel: &Relation) -> bool {
    let members = rel.to_vec();
    let n = alg.size();
    let k = rel.arity();
    let mut out = vec![0 as Elem; k];
    let mut args = Vec::new();
    for op in alg.operations() {
        let m = op.arity();
        args.resize(m, 0 as Elem);
        let flow = crate::frontier::for_each_frontier_tuple(m, 0, members.len(), |idx| {
            for (r, slot) in out.iter_mut().enumerate() {
                for (a, &i) in args.iter_mut().zip(idx) {
                    *a = members[i][r];
                }
                *slot = op.eval(&args, n);
            }
            if rel.contains(&out) {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break(())
            }
        });
        if flow.is_break() {
            return false;
        }
    }
    true
}

/// Whether `(a, b)` witnesses that `rel` is elusive: every `χ_I(a, b)` with
/// `I ≠ ∅` is in `rel` but `a` is not.
pub fn is_elusive_witness(rel: &Relation, a: &[Elem], b: &[Elem]) -> Result<bool> {
    if a.len() != rel.arity() || b.len() != rel.arity() {
        return Err(Error::ArityMismatch { expected: rel.arity(), found: a.len().max(b.len()) });
    }
    if rel.arity() > 30 {
        return Err(Error::BudgetExceeded("elusiveness check beyond 2^30 subsets"));
    }
    if rel.contains(a) {
        return Ok(false);
    }
    Ok((1u64..1 << rel.arity()).all(|mask| rel.contains(&chi_mask(a, b, mask))))
}

/// One block `C | D^mult` of a chipped cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChippedBlock {
    pub c: ElementSet,
    pub d: ElementSet,
    pub mult: usize,
}

/// The relation `∏ Dᵢ^nᵢ ∖ ∏ (Dᵢ∖Cᵢ)^nᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ChippedCubeSpec {
    pub blocks: Vec<ChippedBlock>,
}

impl ChippedCubeSpec {
    pub fn new(blocks: Vec<ChippedBlock>) -> Result<Self> {
        for b in &blocks {
            if b.c.is_empty() || !b.c.is_proper_subset(&b.d) {
                return Err(Error::InvalidArgument("chipped cube block needs ∅ ≠ C ⊊ D"));
            }
            if b.mult == 0 {
                return Err(Error::InvalidArgument("chipped cube block multiplicity must be ≥ 1"));
            }
        }
        Ok(ChippedCubeSpec { blocks })
    }

    pub fn arity(&self) -> usize {
        self.blocks.iter().map(|b| b.mult).sum()
    }

    /// Whether `tuple` lies in the chipped cube.
    pub fn contains(&self, tuple: &[Elem]) -> bool {
        if tuple.len() != self.arity() {
            return false;
        }
        let mut pos = 0;
        let mut chipped = true;
        for b in &self.blocks {
            for &e in &tuple[pos..pos + b.mult] {
                if !b.d.contains(e) {
                    return false;
                }
                if b.c.contains(e) {
                    chipped = false;
                }
            }
            pos += b.mult;
        }
        !chipped
    }
}

/// Materializes a chipped cube over a universe of size `n`.
pub fn chipped_cube(spec: &ChippedCubeSpec, n: usize) -> Result<Relation> {
    let spec = ChippedCubeSpec::new(spec.blocks.clone())?;
    let coords: Vec<Vec<Elem>> = spec.blocks.iter().flat_map(|b| core::iter::repeat_n(b.d.to_vec(), b.mult)).collect();
    if coords.iter().flatten().any(|&e| e as usize >= n) {
        return Err(Error::InvalidArgument("chipped cube set exceeds the universe"));
    }
    let total = coords
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .filter(|&t| t <= DENSE_THRESHOLD)
        .ok_or(Error::BudgetExceeded("chipped cube too large to materialize"))?;
    let mut rel = Relation::new(n, coords.len());
    let mut pos = vec![0usize; coords.len()];
    let mut t: Vec<Elem> = coords.iter().map(|c| c[0]).collect();
    for _ in 0..total {
        if spec.contains(&t) {
            rel.insert(&t)?;
        }
        for q in (0..coords.len()).rev() {
            pos[q] += 1;
            if pos[q] < coords[q].len() {
                t[q] = coords[q][pos[q]];
                break;
            }
            pos[q] = 0;
            t[q] = coords[q][0];
        }
    }
    Ok(rel)
}
