//! Named example algebras and relations.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{FiniteAlgebra, OperationTable};
use crate::error::{Error, Result};
use crate::relation::Relation;
use crate::Elem;

/// Names accepted by [`fixture`], besides `no_ops<N>`.
pub const FIXTURE_NAMES: [&str; 5] = ["lattice2", "semilattice2", "nand2", "constant3", "constant0_2"];

fn named(name: &str, n: usize, ops: Vec<OperationTable>) -> FiniteAlgebra {
    FiniteAlgebra::new(Some(name.to_string()), n, ops).expect("fixture tables are well formed")
}

/// `({0,1}, ∧, ∨)`.
pub fn lattice2() -> FiniteAlgebra {
    named(
        "lattice2",
        2,
        vec![OperationTable::new("meet", 2, vec![0, 0, 0, 1]), OperationTable::new("join", 2, vec![0, 1, 1, 1])],
    )
}

/// `({0,1}, ∧)`.
pub fn semilattice2() -> FiniteAlgebra {
    named("semilattice2", 2, vec![OperationTable::new("meet", 2, vec![0, 0, 0, 1])])
}

/// `({0,1}, nand)`.
pub fn nand2() -> FiniteAlgebra {
    named("nand2", 2, vec![OperationTable::new("nand", 2, vec![1, 1, 1, 0])])
}

/// `({0,1,2}, c₂)` with the unary constant `c₂(x) = 2`.
pub fn constant3() -> FiniteAlgebra {
    named("constant3", 3, vec![OperationTable::new("c2", 1, vec![2, 2, 2])])
}

/// `({0,1}, c₀)` with the unary constant `c₀(x) = 0`.
pub fn constant0_2() -> FiniteAlgebra {
    named("constant0_2", 2, vec![OperationTable::new("c0", 1, vec![0, 0])])
}

/// The `n`-element set without operations.
pub fn no_ops(n: usize) -> Result<FiniteAlgebra> {
    FiniteAlgebra::new(Some(format!("no_ops{n}")), n, Vec::new())
}

/// Looks up a fixture by name.
pub fn fixture(name: &str) -> Result<FiniteAlgebra> {
    match name {
        "lattice2" => Ok(lattice2()),
        "semilattice2" => Ok(semilattice2()),
        "nand2" => Ok(nand2()),
        "constant3" => Ok(constant3()),
        "constant0_2" => Ok(constant0_2()),
        _ => match name.strip_prefix("no_ops").and_then(|s| s.parse().ok()) {
            Some(n) => no_ops(n),
            None => Err(Error::InvalidArgument("unknown fixture name")),
        },
    }
}

/// An idempotent quasigroup of order `n ≥ 3`.
///
/// Odd orders use `x·y = ((n+1)/2)(x+y) mod n`; even orders take the first
/// idempotent Latin square found by backtracking in row-major order.
pub fn idempotent_quasigroup(n: usize) -> Result<FiniteAlgebra> {
    if n < 3 {
        return Err(Error::InvalidArgument("no idempotent quasigroup of order below 3"));
    }
    if n > crate::MAX_UNIVERSE {
        return Err(Error::InvalidArgument("universe too large"));
    }
    let table = if n % 2 == 1 {
        let h = n.div_ceil(2);
        (0..n * n).map(|i| ((h * (i / n + i % n)) % n) as Elem).collect()
    } else {
        if n > 10 {
            return Err(Error::BudgetExceeded("backtracking quasigroup search limited to n ≤ 10"));
        }
        latin_search(n).ok_or(Error::InvalidArgument("no idempotent Latin square found"))?
    };
    Ok(named(&format!("quasigroup{n}"), n, vec![OperationTable::new("mul", 2, table)]))
}

fn latin_search(n: usize) -> Option<Vec<Elem>> {
    let mut t = vec![usize::MAX; n * n];
    for a in 0..n {
        t[a * n + a] = a;
    }
    let mut row_used = vec![vec![false; n]; n];
    let mut col_used = vec![vec![false; n]; n];
    for a in 0..n {
        row_used[a][a] = true;
        col_used[a][a] = true;
    }
    let cells: Vec<usize> = (0..n * n).filter(|&i| i / n != i % n).collect();

    fn go(k: usize, n: usize, cells: &[usize], t: &mut [usize], row: &mut [Vec<bool>], col: &mut [Vec<bool>]) -> bool {
        let Some(&cell) = cells.get(k) else { return true };
        let (r, c) = (cell / n, cell % n);
        for v in 0..n {
            if row[r][v] || col[c][v] {
                continue;
            }
            row[r][v] = true;
            col[c][v] = true;
            t[cell] = v;
            if go(k + 1, n, cells, t, row, col) {
                return true;
            }
            row[r][v] = false;
            col[c][v] = false;
        }
        false
    }

    go(0, n, &cells, &mut t, &mut row_used, &mut col_used).then(|| t.iter().map(|&v| v as Elem).collect())
}

/// Parameters of the tight example: universe size and operation arities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightExampleParams {
    pub n: usize,
    /// Sorted descending on construction.
    pub arities: Vec<usize>,
}

impl TightExampleParams {
    pub fn new(n: usize, mut arities: Vec<usize>) -> Result<Self> {
        arities.sort_unstable_by(|a, b| b.cmp(a));
        let params = TightExampleParams { n, arities };
        if !(2..=crate::MAX_UNIVERSE).contains(&n) {
            return Err(Error::InvalidArgument("tight example needs 2 ≤ n ≤ 256"));
        }
        if params.arities.is_empty() || params.arities.iter().any(|&m| m < 2) {
            return Err(Error::InvalidArgument("tight example needs at least one operation, all of arity ≥ 2"));
        }
        if n == 2 && params.bound() <= 2 {
            return Err(Error::InvalidArgument("tight example on two elements needs N > 2"));
        }
        Ok(params)
    }

    /// `r = min(ℓ, C(n,2))`.
    pub fn r(&self) -> usize {
        self.arities.len().min(self.n * (self.n - 1) / 2)
    }

    /// `N = 1 + Σ_{i≤r} (mᵢ − 1)`.
    pub fn bound(&self) -> usize {
        1 + self.arities[..self.r()].iter().map(|m| m - 1).sum::<usize>()
    }

    /// Pairs `a < b` in lexicographic order, dealt round-robin into `r` sets.
    pub fn partition(&self) -> Vec<Vec<(Elem, Elem)>> {
        let r = self.r();
        let mut parts = vec![Vec::new(); r];
        let mut k = 0;
        for a in 0..self.n {
            for b in a + 1..self.n {
                parts[k % r].push((a as Elem, b as Elem));
                k += 1;
            }
        }
        parts
    }
}

/// An idempotent algebra with a cube term of dimension `N` and none of
/// dimension `N − 1`.
///
/// Operation `fᵢ` (`i ≤ r`) returns `a` on argument tuples that hold `a`
/// everywhere except for a single `b`, when `(a, b)` is in the `i`-th part;
/// otherwise it returns the maximum of its arguments. Further operations are
/// first projections. With `N = 2` the result is an idempotent quasigroup.
pub fn tight_example(params: &TightExampleParams) -> Result<FiniteAlgebra> {
    let params = TightExampleParams::new(params.n, params.arities.clone())?;
    let n = params.n;
    if params.bound() == 2 {
        return idempotent_quasigroup(n);
    }
    let parts = params.partition();
    let mut ops = Vec::with_capacity(params.arities.len());
    for (i, &m) in params.arities.iter().enumerate() {
        let name = format!("f{}", i + 1);
        let op = match parts.get(i) {
            Some(part) => {
                let mut special = vec![false; n * n];
                for &(a, b) in part {
                    special[a as usize * n + b as usize] = true;
                }
                OperationTable::from_fn(name, m, n, |args| {
                    let lo = *args.iter().min().unwrap();
                    let hi = *args.iter().max().unwrap();
                    let lows = args.iter().filter(|&&x| x == lo).count();
                    let only_two = args.iter().all(|&x| x == lo || x == hi);
                    if lo < hi && only_two && lows == m - 1 && special[lo as usize * n + hi as usize] {
                        lo
                    } else {
                        hi
                    }
                })
            }
            None => OperationTable::from_fn(name, m, n, |args| args[0]),
        };
        ops.push(op);
    }
    let label = format!("tight{n}_{}", params.arities.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("_"));
    FiniteAlgebra::new(Some(label), n, ops)
}

/// `{2^k} ∪ {0,1}^k ∖ {1 0^(k−1)}` over `{0,1,2}`.
pub fn elusive_relation(k: usize) -> Result<Relation> {
    if !(2..=24).contains(&k) {
        return Err(Error::InvalidArgument("relation arity must lie in 2..=24"));
    }
    let mut rel = Relation::new(3, k);
    rel.insert(&vec![2; k])?;
    let mut skip = vec![0; k];
    skip[0] = 1;
    for mask in 0u32..1 << k {
        let t: Vec<Elem> = (0..k).map(|i| (mask >> (k - 1 - i) & 1) as Elem).collect();
        if t != skip {
            rel.insert(&t)?;
        }
    }
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_latin_idempotent(alg: &FiniteAlgebra) -> bool {
        let n = alg.size();
        let t = alg.operations()[0].table();
        (0..n).all(|a| t[a * n + a] as usize == a)
            && (0..n).all(|a| {
                let mut row = vec![false; n];
                let mut col = vec![false; n];
                (0..n).all(|b| {
                    !core::mem::replace(&mut row[t[a * n + b] as usize], true)
                        && !core::mem::replace(&mut col[t[b * n + a] as usize], true)
                })
            })
    }

    #[test]
    fn fixture_tables() {
        assert_eq!(lattice2().operations()[0].table(), [0, 0, 0, 1]);
        assert_eq!(constant3().operations()[0].table(), [2, 2, 2]);
        assert!(fixture("no_ops3").unwrap().operations().is_empty());
        assert_eq!(fixture("no_ops3").unwrap().size(), 3);
        assert!(fixture("bogus").is_err());
        for name in FIXTURE_NAMES {
            assert_eq!(fixture(name).unwrap().name(), Some(name));
        }
    }

    #[test]
    fn quasigroups() {
        let q3 = idempotent_quasigroup(3).unwrap();
        assert_eq!(q3.operations()[0].table(), [0, 2, 1, 2, 1, 0, 1, 0, 2]);
        let q5 = idempotent_quasigroup(5).unwrap();
        assert_eq!(q5.operations()[0].eval(&[1, 2], 5), 4);
        for n in 3..=10 {
            assert!(is_latin_idempotent(&idempotent_quasigroup(n).unwrap()), "n = {n}");
        }
        assert!(idempotent_quasigroup(2).is_err());
    }

    #[test]
    fn tight_parameters() {
        let p = TightExampleParams::new(3, vec![3]).unwrap();
        assert_eq!((p.r(), p.bound()), (1, 3));
        assert_eq!(p.partition(), [vec![(0, 1), (0, 2), (1, 2)]]);
        let p = TightExampleParams::new(3, vec![2, 2, 2, 2]).unwrap();
        assert_eq!(p.bound(), 4);
        let p = TightExampleParams::new(4, vec![2, 2, 2]).unwrap();
        assert_eq!(p.bound(), 4);
        assert_eq!(p.partition()[0], [(0, 1), (1, 2)]);
        assert!(TightExampleParams::new(2, vec![2]).is_err());
        assert!(TightExampleParams::new(3, vec![2, 1]).is_err());
    }

    #[test]
    fn tight_operations() {
        let p = TightExampleParams::new(2, vec![3, 3]).unwrap();
        let alg = tight_example(&p).unwrap();
        assert!(alg.is_idempotent());
        let f1 = &alg.operations()[0];
        assert_eq!(f1.eval(&[0, 0, 1], 2), 0);
        assert_eq!(f1.eval(&[1, 0, 0], 2), 0);
        assert_eq!(f1.eval(&[0, 1, 1], 2), 1);
        let f2 = &alg.operations()[1];
        assert_eq!(f2.eval(&[1, 0, 0], 2), 1);

        let alg = tight_example(&TightExampleParams::new(3, vec![2]).unwrap()).unwrap();
        assert!(is_latin_idempotent(&alg));

        for (n, ar) in [(3, vec![3]), (3, vec![2, 2]), (4, vec![2, 2, 2]), (3, vec![4, 2, 2, 2])] {
            let alg = tight_example(&TightExampleParams::new(n, ar).unwrap()).unwrap();
            assert!(alg.is_idempotent());
            // conservative: every value is one of the arguments
            for op in alg.operations() {
                let m = op.arity();
                for (i, &v) in op.table().iter().enumerate() {
                    let args = crate::relation::decode(i as u128, n, m);
                    assert!(args.contains(&v));
                }
            }
        }
    }

    #[test]
    fn elusive_relation_sizes() {
        let r2 = elusive_relation(2).unwrap();
        assert_eq!(r2.to_vec(), [vec![0, 0], vec![0, 1], vec![1, 1], vec![2, 2]]);
        for k in 2..=6 {
            assert_eq!(elusive_relation(k).unwrap().len(), 1 << k);
        }
        assert!(elusive_relation(1).is_err());
    }
}
