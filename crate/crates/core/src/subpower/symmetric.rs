//! Closure of block-symmetric relations, one orbit at a time.
//!
//! Coordinates are split into a fixed prefix followed by blocks. When the
//! generators are invariant under permuting coordinates inside each block,
//! so is the generated subpower, and it is a union of orbits. An orbit is
//! recorded as its prefix tuple plus, for each block, how often each element
//! occurs there.
//!
//! Applying an `m`-ary operation to orbits `O₁, …, O_m` yields every orbit
//! reachable by lining up representatives row by row. Inside one block this
//! amounts to choosing an `n^m` contingency table whose `j`-th marginal is the
//! count vector of `O_j`; the image orbit counts `f(cell)` weighted by the
//! table. Blocks are independent, so the images combine as a product.

use core::hash::BuildHasher;
use core::ops::ControlFlow;

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{DefaultHashBuilder, HashMap, HashSet, HashTable};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::frontier::for_each_frontier_tuple;
use crate::Elem;

use super::{Budget, MembershipAnswer};

/// Prefix length and block sizes of a symmetric power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub prefix: usize,
    pub blocks: Vec<usize>,
}

impl Layout {
    pub fn new(prefix: usize, blocks: Vec<usize>) -> Result<Self> {
        if blocks.iter().any(|&s| s == 0 || s > u16::MAX as usize) {
            return Err(Error::InvalidArgument("block sizes must lie in 1..=65535"));
        }
        Ok(Layout { prefix, blocks })
    }

    /// Total number of coordinates.
    pub fn arity(&self) -> usize {
        self.prefix + self.blocks.iter().sum::<usize>()
    }
}

/// An orbit of tuples under block-wise coordinate permutations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orbit {
    pub prefix: Vec<Elem>,
    /// `counts[b][x]` is how often `x` occurs in block `b`.
    pub counts: Vec<Vec<u16>>,
}

impl Orbit {
    pub fn of_tuple(layout: &Layout, n: usize, tuple: &[Elem]) -> Result<Orbit> {
        if tuple.len() != layout.arity() {
            return Err(Error::ArityMismatch { expected: layout.arity(), found: tuple.len() });
        }
        if let Some(&e) = tuple.iter().find(|&&e| e as usize >= n) {
            return Err(Error::ElementOutOfRange { element: e as usize, size: n });
        }
        let mut pos = layout.prefix;
        let counts = layout
            .blocks
            .iter()
            .map(|&s| {
                let mut c = vec![0u16; n];
                for &e in &tuple[pos..pos + s] {
                    c[e as usize] += 1;
                }
                pos += s;
                c
            })
            .collect();
        Ok(Orbit { prefix: tuple[..layout.prefix].to_vec(), counts })
    }

    /// The member whose blocks are sorted ascending.
    pub fn representative(&self) -> Vec<Elem> {
        let mut t = self.prefix.clone();
        for c in &self.counts {
            for (x, &k) in c.iter().enumerate() {
                t.extend(core::iter::repeat_n(x as Elem, k as usize));
            }
        }
        t
    }

    fn check(&self, layout: &Layout, n: usize) -> Result<()> {
        if self.prefix.len() != layout.prefix || self.counts.len() != layout.blocks.len() {
            return Err(Error::InvalidArgument("orbit does not match the layout"));
        }
        if let Some(&e) = self.prefix.iter().find(|&&e| e as usize >= n) {
            return Err(Error::ElementOutOfRange { element: e as usize, size: n });
        }
        for (c, &s) in self.counts.iter().zip(&layout.blocks) {
            if c.len() != n || c.iter().map(|&k| k as usize).sum::<usize>() != s {
                return Err(Error::InvalidArgument("orbit block counts do not match the block size"));
            }
        }
        Ok(())
    }

    fn flatten(&self) -> Vec<u16> {
        let mut v: Vec<u16> = self.prefix.iter().map(|&e| e as u16).collect();
        for c in &self.counts {
            v.extend_from_slice(c);
        }
        v
    }

    fn unflatten(flat: &[u16], layout: &Layout, n: usize) -> Orbit {
        let prefix = flat[..layout.prefix].iter().map(|&e| e as Elem).collect();
        let counts = flat[layout.prefix..].chunks(n).map(|c| c.to_vec()).collect();
        Orbit { prefix, counts }
    }
}

/// Count vectors of every image of one block, memoized per operation and
/// input counts.
struct BlockImages<'a> {
    alg: &'a FiniteAlgebra,
    n: usize,
    memo: HashMap<Box<[u16]>, Vec<Box<[u16]>>>,
}

impl BlockImages<'_> {
    fn ensure(&mut self, key: &[u16]) {
        if self.memo.contains_key(key) {
            return;
        }
        let op = &self.alg.operations()[key[0] as usize];
        let inputs: Vec<&[u16]> = key[1..].chunks(self.n).collect();
        let images = joint_images(op.table(), self.n, &inputs);
        self.memo.insert(key.into(), images);
    }
}

/// All `Σ_cells t(c)·e_{f(c)}` over tables `t` on `A^m` with the given
/// marginals, sorted.
fn joint_images(table: &[Elem], n: usize, marginals: &[&[u16]]) -> Vec<Box<[u16]>> {
    let m = marginals.len();
    let cells = table.len();
    // After cell k, remaining counts listed in `closes[k]` must be spent:
    // cell k is the last one (in index order) with that digit value.
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); cells];
    let mut digits = vec![0usize; cells * m];
    for k in 0..cells {
        let mut r = k;
        for j in (0..m).rev() {
            digits[k * m + j] = r % n;
            r /= n;
        }
    }
    for j in 0..m {
        for v in 0..n {
            let last = (0..m).fold(0usize, |acc, q| acc * n + if q == j { v } else { n - 1 });
            closes[last].push(j * n + v);
        }
    }

    let width = m * n + n;
    let mut start = vec![0u16; width];
    for (j, marg) in marginals.iter().enumerate() {
        start[j * n..(j + 1) * n].copy_from_slice(marg);
    }
    let mut layer: HashSet<Box<[u16]>> = HashSet::new();
    layer.insert(start.into());
    for k in 0..cells {
        let cell = &digits[k * m..(k + 1) * m];
        let img = m * n + table[k] as usize;
        let mut next: HashSet<Box<[u16]>> = HashSet::with_capacity(layer.len());
        for st in &layer {
            let tmax = cell.iter().enumerate().map(|(j, &v)| st[j * n + v]).min().unwrap_or(0);
            for t in 0..=tmax {
                let mut s: Box<[u16]> = st.clone();
                for (j, &v) in cell.iter().enumerate() {
                    s[j * n + v] -= t;
                }
                s[img] += t;
                if closes[k].iter().all(|&i| s[i] == 0) {
                    next.insert(s);
                }
            }
        }
        layer = next;
    }
    let mut out: Vec<Box<[u16]>> = layer.into_iter().map(|s| s[m * n..].into()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Closes a set of orbits under the basic operations of `alg`.
///
/// Returns the orbits of the generated subpower (in discovery order) and the
/// usual membership answer; with a `target` the run stops once the target
/// orbit appears. Budget limits count orbits, not tuples.
pub fn generate(
    alg: &FiniteAlgebra,
    layout: &Layout,
    gens: &[Orbit],
    target: Option<&Orbit>,
    budget: &Budget,
) -> Result<(Vec<Orbit>, MembershipAnswer)> {
    let n = alg.size();
    for g in gens.iter().chain(target) {
        g.check(layout, n)?;
    }
    let width = layout.prefix + layout.blocks.len() * n;
    let target_flat = target.map(Orbit::flatten);
    let mut meter = budget.meter(2 * width + 16);
    let hasher = DefaultHashBuilder::default();
    let mut data: Vec<u16> = Vec::new();
    let mut len = 0usize;
    let mut seen: HashTable<u32> = HashTable::new();

    // Inserts `s` unless present; returns whether it was new.
    let insert = |data: &mut Vec<u16>, len: &mut usize, seen: &mut HashTable<u32>, s: &[u16]| {
        let h = hasher.hash_one(s);
        if seen.find(h, |&i| &data[i as usize * width..(i as usize + 1) * width] == s).is_some() {
            return false;
        }
        let d: &Vec<u16> = data;
        seen.insert_unique(h, *len as u32, |&i| hasher.hash_one(&d[i as usize * width..(i as usize + 1) * width]));
        data.extend_from_slice(s);
        *len += 1;
        true
    };

    let mut found_depth = None;
    for g in gens {
        let flat = g.flatten();
        if !meter.room_for(len) {
            break;
        }
        insert(&mut data, &mut len, &mut seen, &flat);
        if target_flat.as_deref() == Some(flat.as_slice()) {
            found_depth = Some(0);
            break;
        }
    }

    let mut images = BlockImages { alg, n, memo: HashMap::new() };
    let mut old = 0usize;
    let mut depth = 0usize;
    let mut out = vec![0u16; width];
    let mut args = Vec::new();
    let mut key = Vec::new();
    let mut choice = vec![0usize; layout.blocks.len()];
    let nb = layout.blocks.len();

    'rounds: while found_depth.is_none() && !meter.stopped() && old < len {
        let cur = len;
        for (oi, op) in alg.operations().iter().enumerate() {
            let m = op.arity();
            let table = op.table();
            args.resize(m, 0usize);
            let flow = for_each_frontier_tuple(m, old, cur, |idx| {
                for (a, &i) in args.iter_mut().zip(idx) {
                    *a = i * width;
                }
                for (r, slot) in out[..layout.prefix].iter_mut().enumerate() {
                    let k = args.iter().fold(0usize, |acc, &a| acc * n + data[a + r] as usize);
                    *slot = table[k] as u16;
                }
                for b in 0..nb {
                    key.clear();
                    key.push(oi as u16);
                    let off = layout.prefix + b * n;
                    for &a in args.iter() {
                        key.extend_from_slice(&data[a + off..a + off + n]);
                    }
                    images.ensure(&key);
                }
                let lists: Vec<&Vec<Box<[u16]>>> = (0..nb)
                    .map(|b| {
                        key.clear();
                        key.push(oi as u16);
                        let off = layout.prefix + b * n;
                        for &a in args.iter() {
                            key.extend_from_slice(&data[a + off..a + off + n]);
                        }
                        &images.memo[key.as_slice()]
                    })
                    .collect();
                choice.fill(0);
                'product: loop {
                    if !meter.tick() {
                        return ControlFlow::Break(false);
                    }
                    for b in 0..nb {
                        let off = layout.prefix + b * n;
                        out[off..off + n].copy_from_slice(&lists[b][choice[b]]);
                    }
                    if !meter.room_for(len) {
                        return ControlFlow::Break(false);
                    }
                    if insert(&mut data, &mut len, &mut seen, &out) && target_flat.as_deref() == Some(out.as_slice()) {
                        return ControlFlow::Break(true);
                    }
                    let mut b = nb;
                    while b > 0 {
                        b -= 1;
                        choice[b] += 1;
                        if choice[b] < lists[b].len() {
                            continue 'product;
                        }
                        choice[b] = 0;
                    }
                    break;
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

    let orbits = data.chunks(width.max(1)).take(len).map(|f| Orbit::unflatten(f, layout, n)).collect();
    let answer = MembershipAnswer {
        found: found_depth.is_some(),
        closure_size: len,
        witness_depth: found_depth,
        truncated: meter.stopped() && found_depth.is_none(),
    };
    Ok((orbits, answer))
}

/// Whether the `target` orbit lies in the subpower generated by `gens`.
pub fn membership(
    alg: &FiniteAlgebra,
    layout: &Layout,
    gens: &[Orbit],
    target: &Orbit,
    budget: &Budget,
) -> Result<MembershipAnswer> {
    generate(alg, layout, gens, Some(target), budget).map(|(_, a)| a)
}
