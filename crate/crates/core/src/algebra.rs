//! Finite algebras given by operation tables.
//!
//! The value of an `m`-ary operation at `(a₁, …, a_m)` is stored at index
//! `a₁·n^(m-1) + … + a_m` of its table, first argument most significant.

use core::fmt;
use core::ops::ControlFlow;

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::error::{Error, Result};
use crate::frontier::for_each_frontier_tuple;
use crate::set::ElementSet;
use crate::{Elem, MAX_UNIVERSE};

/// Largest table an operation may have.
pub const MAX_TABLE_LEN: u64 = 1 << 32;

/// Unchecked algebra data, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraDescription {
    pub name: Option<String>,
    pub size: u64,
    pub operations: Vec<OperationDescription>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationDescription {
    pub name: String,
    pub arity: u64,
    pub table: Vec<u64>,
}

/// One problem found by [`validate`]. `operation` is the position of the
/// operation in the algebra's list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyUniverse,
    UniverseTooLarge { size: u64 },
    ZeroArity { operation: usize },
    TableTooLarge { operation: usize },
    TableLength { operation: usize, expected: u64, found: u64 },
    EntryOutOfRange { operation: usize, index: usize, value: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyUniverse => write!(f, "universe size must be at least 1"),
            Violation::UniverseTooLarge { size } => {
                write!(f, "universe size {size} exceeds the supported maximum {MAX_UNIVERSE}")
            }
            Violation::ZeroArity { operation } => {
                write!(f, "operation {operation}: arity must be at least 1")
            }
            Violation::TableTooLarge { operation } => {
                write!(f, "operation {operation}: table would exceed {MAX_TABLE_LEN} entries")
            }
            Violation::TableLength { operation, expected, found } => {
                write!(f, "operation {operation}: table has {found} entries, expected {expected}")
            }
            Violation::EntryOutOfRange { operation, index, value } => {
                write!(f, "operation {operation}: entry {value} at index {index} is out of range")
            }
        }
    }
}

/// Returns every invariant violation of `desc`. An empty result means the
/// description can be turned into a [`FiniteAlgebra`].
pub fn validate(desc: &AlgebraDescription) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = desc.size;
    if n == 0 {
        out.push(Violation::EmptyUniverse);
    } else if n > MAX_UNIVERSE as u64 {
        out.push(Violation::UniverseTooLarge { size: n });
    }
    for (k, op) in desc.operations.iter().enumerate() {
        if op.arity == 0 {
            out.push(Violation::ZeroArity { operation: k });
            continue;
        }
        if n >= 1 {
            match table_len(n, op.arity) {
                Some(expected) if expected <= MAX_TABLE_LEN => {
                    if op.table.len() as u64 != expected {
                        out.push(Violation::TableLength { operation: k, expected, found: op.table.len() as u64 });
                    }
                }
                _ => out.push(Violation::TableTooLarge { operation: k }),
            }
        }
        for (index, &value) in op.table.iter().enumerate() {
            if value >= n {
                out.push(Violation::EntryOutOfRange { operation: k, index, value });
            }
        }
    }
    out
}

fn table_len(n: u64, arity: u64) -> Option<u64> {
    let arity = u32::try_from(arity).ok()?;
    n.checked_pow(arity)
}

/// A basic operation: its arity and flat value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperationTable {
    name: String,
    arity: usize,
    table: Vec<Elem>,
}

impl OperationTable {
    /// Table entries are checked when the operation is placed in an algebra.
    pub fn new(name: impl Into<String>, arity: usize, table: Vec<Elem>) -> Self {
        OperationTable { name: name.into(), arity, table }
    }

    /// Tabulates `f` over all argument tuples in index order.
    pub fn from_fn(name: impl Into<String>, arity: usize, n: usize, mut f: impl FnMut(&[Elem]) -> Elem) -> Self {
        let len = n.pow(arity as u32);
        let mut table = Vec::with_capacity(len);
        let mut args = vec![0 as Elem; arity];
        for _ in 0..len {
            table.push(f(&args));
            for q in (0..arity).rev() {
                args[q] += 1;
                if (args[q] as usize) < n {
                    break;
                }
                args[q] = 0;
            }
        }
        OperationTable::new(name, arity, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    /// Table lookup without range checks beyond debug assertions.
    #[inline]
    pub fn eval(&self, args: &[Elem], n: usize) -> Elem {
        debug_assert_eq!(args.len(), self.arity);
        let idx = args.iter().fold(0usize, |acc, &a| acc * n + a as usize);
        self.table[idx]
    }

    /// Value of the operation at `args`.
    pub fn apply(&self, args: &[usize], n: usize) -> Result<Elem> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        let mut idx = 0usize;
        for &a in args {
            if a >= n {
                return Err(Error::ElementOutOfRange { element: a, size: n });
            }
            idx = idx * n + a;
        }
        self.table.get(idx).copied().ok_or(Error::InvalidArgument("table shorter than n^arity"))
    }

    fn diagonal_index(&self, a: Elem, n: usize) -> usize {
        (0..self.arity).fold(0usize, |acc, _| acc * n + a as usize)
    }
}

/// A finite algebra on `{0, …, size-1}` with a list of basic operations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: Option<String>,
    size: usize,
    operations: Vec<OperationTable>,
}

impl FiniteAlgebra {
    pub fn new(name: Option<String>, size: usize, operations: Vec<OperationTable>) -> Result<Self> {
        let alg = FiniteAlgebra { name, size, operations };
        let violations = validate(&alg.describe());
        if violations.is_empty() {
            Ok(alg)
        } else {
            Err(Error::InvalidAlgebra(violations))
        }
    }

    pub fn from_description(desc: &AlgebraDescription) -> Result<Self> {
        let violations = validate(desc);
        if !violations.is_empty() {
            return Err(Error::InvalidAlgebra(violations));
        }
        let operations = desc
            .operations
            .iter()
            .map(|op| {
                OperationTable::new(op.name.clone(), op.arity as usize, op.table.iter().map(|&v| v as Elem).collect())
            })
            .collect();
        Ok(FiniteAlgebra { name: desc.name.clone(), size: desc.size as usize, operations })
    }

    pub fn describe(&self) -> AlgebraDescription {
        AlgebraDescription {
            name: self.name.clone(),
            size: self.size as u64,
            operations: self
                .operations
                .iter()
                .map(|op| OperationDescription {
                    name: op.name.clone(),
                    arity: op.arity as u64,
                    table: op.table.iter().map(|&v| v as u64).collect(),
                })
                .collect(),
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn operations(&self) -> &[OperationTable] {
        &self.operations
    }

    /// Largest arity of a basic operation, 0 when there are none.
    pub fn max_arity(&self) -> usize {
        self.operations.iter().map(|op| op.arity).max().unwrap_or(0)
    }

    pub fn universe(&self) -> ElementSet {
        ElementSet::full(self.size)
    }

    /// Whether every basic operation satisfies `f(a, …, a) = a`.
    pub fn is_idempotent(&self) -> bool {
        self.operations
            .iter()
            .all(|op| (0..self.size).all(|a| op.table[op.diagonal_index(a as Elem, self.size)] == a as Elem))
    }

    /// Whether `set` is closed under all basic operations.
    pub fn is_subuniverse(&self, set: &ElementSet) -> bool {
        self.sg(set) == *set
    }

    /// The subuniverse generated by `seed`.
    ///
    /// Grows `S₀ = seed ⊊ S₁ ⊊ …`, where each step only evaluates argument
    /// tuples containing an element added in the previous step.
    pub fn sg(&self, seed: &ElementSet) -> ElementSet {
        let n = self.size;
        let mut set = *seed;
        let mut members: Vec<Elem> = seed.iter().collect();
        let mut old = 0;
        let mut args = Vec::new();
        while old < members.len() {
            let cur = members.len();
            for op in &self.operations {
                args.resize(op.arity, 0);
                let _ = for_each_frontier_tuple::<()>(op.arity, old, cur, |idx| {
                    for (a, &i) in args.iter_mut().zip(idx) {
                        *a = members[i];
                    }
                    let v = op.eval(&args, n);
                    if set.insert(v) {
                        members.push(v);
                    }
                    ControlFlow::Continue(())
                });
            }
            old = cur;
        }
        set
    }

    /// Subuniverse generated by two elements.
    pub fn sg2(&self, a: Elem, b: Elem) -> ElementSet {
        let mut s = ElementSet::singleton(a);
        s.insert(b);
        self.sg(&s)
    }

    /// All nonempty subuniverses, ordered by bitmask.
    ///
    /// Explores the subuniverse lattice from the one-generated subuniverses
    /// by adding one element at a time, so the cost tracks the number of
    /// subuniverses rather than `2ⁿ`. Fails once more than `max_count`
    /// subuniverses are found.
    pub fn enumerate_subuniverses(&self, max_count: Option<usize>) -> Result<Vec<ElementSet>> {
        let cap = max_count.unwrap_or(1 << 16);
        let mut found: HashSet<ElementSet> = HashSet::new();
        let mut queue = VecDeque::new();
        for a in 0..self.size {
            let s = self.sg(&ElementSet::singleton(a as Elem));
            if found.insert(s) {
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            if found.len() > cap {
                return Err(Error::BudgetExceeded("too many subuniverses"));
            }
            for a in 0..self.size {
                let a = a as Elem;
                if s.contains(a) {
                    continue;
                }
                let mut t = s;
                t.insert(a);
                let t = self.sg(&t);
                if found.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        if found.len() > cap {
            return Err(Error::BudgetExceeded("too many subuniverses"));
        }
        let mut out: Vec<_> = found.into_iter().collect();
        out.sort();
        Ok(out)
    }
}
