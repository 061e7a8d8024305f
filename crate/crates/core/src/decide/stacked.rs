//! All pair instances of a term condition stacked into one subpower query.
//!
//! Rows are indexed by a coordinate `i` and a pair `(a, b)` of distinct
//! elements, plus one row per element `a` for the pairs `(a, a)`; the
//! latter look the same for every coordinate and are kept once. The column
//! for a set `I` of coordinates holds `b` in row `(i, (a, b))` when `i ∈ I`
//! and `a` otherwise. A term satisfies the condition iff applying it to the
//! columns yields the column holding `a` everywhere.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::subpower::{self, Budget, GeneratorSource, MembershipAnswer};
use crate::Elem;

/// Which subsets of coordinates become columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnFamily {
    /// All nonempty subsets of `[d]` in binary counter order.
    Cube(usize),
    /// `{1,2}, {1}, {2}, …, {d}`.
    Edge(usize),
    /// `{1}, …, {k}`.
    Nu(usize),
}

impl ColumnFamily {
    /// Number of coordinates.
    pub fn dimension(&self) -> usize {
        match *self {
            ColumnFamily::Cube(d) | ColumnFamily::Edge(d) | ColumnFamily::Nu(d) => d,
        }
    }

    /// The column subsets as bitmasks, bit `i` for coordinate `i + 1`.
    pub fn masks(&self) -> Result<Box<dyn Iterator<Item = u64> + Send>> {
        Ok(match *self {
            ColumnFamily::Cube(d) => {
                if d == 0 || d > 40 {
                    return Err(Error::InvalidArgument("cube dimension must lie in 1..=40"));
                }
                Box::new(1..1u64 << d)
            }
            ColumnFamily::Edge(d) => {
                if !(2..=64).contains(&d) {
                    return Err(Error::InvalidArgument("edge dimension must lie in 2..=64"));
                }
                Box::new(core::iter::once(0b11).chain((0..d).map(|i| 1u64 << i)))
            }
            ColumnFamily::Nu(k) => {
                if !(3..=64).contains(&k) {
                    return Err(Error::InvalidArgument("near unanimity arity must lie in 3..=64"));
                }
                Box::new((0..k).map(|i| 1u64 << i))
            }
        })
    }
}

/// Row profile of the stacked power for `d` coordinates over `n` elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackedInstance {
    n: usize,
    d: usize,
    /// Off-diagonal pairs `(a, b)` in lexicographic order.
    pairs: Vec<(Elem, Elem)>,
}

impl StackedInstance {
    pub fn new(n: usize, d: usize) -> Self {
        let pairs = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a as Elem, b as Elem))).collect();
        StackedInstance { n, d, pairs }
    }

    /// Power arity `n + d·n(n−1)`.
    pub fn arity(&self) -> usize {
        self.n + self.d * self.pairs.len()
    }

    pub fn column(&self, mask: u64) -> Vec<Elem> {
        let mut col: Vec<Elem> = (0..self.n as Elem).collect();
        for i in 0..self.d {
            let hit = i < 64 && mask >> i & 1 == 1;
            col.extend(self.pairs.iter().map(|&(a, b)| if hit { b } else { a }));
        }
        col
    }

    pub fn target(&self) -> Vec<Elem> {
        self.column(0)
    }

    /// Whether applying some term to the family's columns gives the target.
    pub fn query(&self, alg: &FiniteAlgebra, family: ColumnFamily, budget: &Budget) -> Result<MembershipAnswer> {
        if family.dimension() != self.d {
            return Err(Error::InvalidArgument("column family does not match the instance"));
        }
        let masks = family.masks()?;
        let this = self.clone();
        let gens = GeneratorSource::streamed(self.arity(), masks.map(move |m| this.column(m)));
        subpower::membership(alg, gens, &self.target(), budget)
    }
}

/// Runs the stacked query, turning truncation into an error.
pub(crate) fn decide_stacked(alg: &FiniteAlgebra, family: ColumnFamily, budget: &Budget) -> Result<bool> {
    let inst = StackedInstance::new(alg.size(), family.dimension());
    let answer = inst.query(alg, family, budget)?;
    if answer.truncated {
        return Err(Error::BudgetExceeded("stacked membership query truncated"));
    }
    Ok(answer.found)
}
