//! Dimension bounds for cube terms.

use alloc::vec::Vec;

use crate::algebra::FiniteAlgebra;

fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `N = 1 + Σ_{i≤r} (mᵢ − 1)` with arities sorted descending and
/// `r = min(ℓ, C(n,2))`.
pub fn bound_idempotent_n(alg: &FiniteAlgebra) -> usize {
    let mut arities: Vec<usize> = alg.operations().iter().map(|op| op.arity()).collect();
    arities.sort_unstable_by(|a, b| b.cmp(a));
    let r = arities.len().min(pairs(alg.size()));
    1 + arities[..r].iter().map(|m| m - 1).sum::<usize>()
}

/// `1 + (m − 1)·C(n,2)` for the largest arity `m`.
pub fn bound_quadratic_linear(alg: &FiniteAlgebra) -> usize {
    1 + alg.max_arity().saturating_sub(1) * pairs(alg.size())
}

/// `n³·m` for the largest arity `m`; 1 on a singleton and 0 without
/// operations.
pub fn bound_general(alg: &FiniteAlgebra) -> usize {
    let n = alg.size();
    if n == 1 {
        1
    } else {
        n.pow(3) * alg.max_arity()
    }
}

/// Whether `N > 2` or `n > 2`, the hypothesis under which `N` bounds the
/// cube dimension of an idempotent algebra without blockers.
pub fn idempotent_bound_applies(alg: &FiniteAlgebra) -> bool {
    bound_idempotent_n(alg) > 2 || alg.size() > 2
}
