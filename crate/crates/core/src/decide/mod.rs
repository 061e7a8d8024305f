//! Cube, edge and near unanimity term decisions.

mod bounds;
mod local;
mod stacked;

use alloc::string::String;

pub use bounds::{bound_general, bound_idempotent_n, bound_quadratic_linear, idempotent_bound_applies};
pub use local::{constant_pair_query, PairEngine};
pub use stacked::{ColumnFamily, StackedInstance};

use crate::algebra::FiniteAlgebra;
use crate::blockers::{find_blocker, Blocker};
use crate::error::{Error, Result};
use crate::relation::code_space;
use crate::set::ElementSet;
use crate::subpower::Budget;
use crate::Elem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CubeVerdict {
    HasCubeTerm,
    NoCubeTerm,
    Undecided,
}

/// Outcome of a cube term decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeDecision {
    pub verdict: CubeVerdict,
    /// The dimension certified, or the largest dimension examined.
    pub dimension_bound: usize,
    /// Depth at which every pair query of the general procedure passed;
    /// a cube term then exists, of dimension at most `dimension_bound`.
    pub witness_dimension: Option<usize>,
    pub blocker: Option<Blocker>,
    /// A pair `(a, b)` whose query failed at `dimension_bound`.
    pub failing_pair: Option<(Elem, Elem)>,
    /// Why the decision is undecided.
    pub note: Option<String>,
}

impl CubeDecision {
    fn has(dimension_bound: usize, witness_dimension: Option<usize>) -> Self {
        CubeDecision {
            verdict: CubeVerdict::HasCubeTerm,
            dimension_bound,
            witness_dimension,
            blocker: None,
            failing_pair: None,
            note: None,
        }
    }

    fn blocked(dimension_bound: usize, blocker: Blocker) -> Self {
        CubeDecision {
            verdict: CubeVerdict::NoCubeTerm,
            dimension_bound,
            witness_dimension: None,
            blocker: Some(blocker),
            failing_pair: None,
            note: None,
        }
    }

    fn failing(verdict: CubeVerdict, dimension_bound: usize, pair: (Elem, Elem)) -> Self {
        CubeDecision {
            verdict,
            dimension_bound,
            witness_dimension: None,
            blocker: None,
            failing_pair: Some(pair),
            note: None,
        }
    }
}

/// How [`check_cube_dim_with`] answers the query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CheckStrategy {
    /// The stacked query when its power has at most 256 codes, otherwise
    /// the pair-by-pair orbit queries.
    #[default]
    Auto,
    Stacked,
    Local,
}

/// Largest stacked power (in codes) that [`CheckStrategy::Auto`] builds.
const AUTO_STACKED_CODES: u64 = 1 << 8;

#[derive(Clone, Debug, Default)]
pub struct DecideOptions {
    /// Largest dimension to examine; `None` means the proven bound.
    pub cap: Option<usize>,
    /// Use the general procedure even for idempotent algebras.
    pub force_general: bool,
    pub engine: PairEngine,
    pub strategy: CheckStrategy,
    pub budget: Budget,
}

/// Whether `alg` has a `d`-dimensional cube term.
pub fn check_cube_dim(alg: &FiniteAlgebra, d: usize, budget: &Budget) -> Result<bool> {
    check_cube_dim_with(alg, d, CheckStrategy::Auto, budget)
}

pub fn check_cube_dim_with(alg: &FiniteAlgebra, d: usize, strategy: CheckStrategy, budget: &Budget) -> Result<bool> {
    if d == 0 {
        return Err(Error::InvalidArgument("cube dimension must be ≥ 1"));
    }
    let stacked = match strategy {
        CheckStrategy::Stacked => true,
        CheckStrategy::Local => false,
        CheckStrategy::Auto => {
            let k = StackedInstance::new(alg.size(), d).arity();
            code_space(alg.size(), k).is_some_and(|c| c <= AUTO_STACKED_CODES)
        }
    };
    if stacked {
        stacked::decide_stacked(alg, ColumnFamily::Cube(d), budget)
    } else {
        local::check_cube_local(alg, d, budget)
    }
}

/// Whether `alg` has a `d`-dimensional edge term (`d ≥ 2`).
pub fn check_edge_dim(alg: &FiniteAlgebra, d: usize, budget: &Budget) -> Result<bool> {
    stacked::decide_stacked(alg, ColumnFamily::Edge(d), budget)
}

/// Whether `alg` has a `k`-ary near unanimity term (`k ≥ 3`).
pub fn check_nu(alg: &FiniteAlgebra, k: usize, budget: &Budget) -> Result<bool> {
    stacked::decide_stacked(alg, ColumnFamily::Nu(k), budget)
}

/// Decides cube terms of an idempotent algebra by searching for a blocker.
///
/// Without a blocker the cube term has dimension at most `N`, except on
/// two elements with `N = 2`, where the general `n³·m` bound is reported.
pub fn decide_cube_idempotent(alg: &FiniteAlgebra) -> Result<CubeDecision> {
    if !alg.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    if alg.size() == 1 {
        return Ok(CubeDecision::has(1, None));
    }
    let bound = if idempotent_bound_applies(alg) {
        bound_idempotent_n(alg).min(bound_quadratic_linear(alg))
    } else {
        bound_general(alg)
    };
    Ok(match find_blocker(alg)? {
        Some(b) => CubeDecision::blocked(bound, b),
        None => CubeDecision::has(bound, None),
    })
}

/// The general decision, run for idempotent algebras too.
///
/// Deepens `d = 1, 2, 4, …` up to `min(cap, n³·m)`. At each `d` every pair
/// `a ≠ b` asks whether `⟨A⟩a^d` is generated by the `⟨A⟩χ_I(a^d, b^d)`.
/// If all pairs pass, there is a cube term. A failure at `n³·m` proves there
/// is none; a failure at a smaller cap leaves the question open.
pub fn decide_cube_general(
    alg: &FiniteAlgebra,
    cap: Option<usize>,
    engine: PairEngine,
    budget: &Budget,
) -> Result<CubeDecision> {
    let n = alg.size();
    if n == 1 {
        return Ok(CubeDecision::has(1, Some(1)));
    }
    let bound = bound_general(alg);
    if bound == 0 {
        return Ok(CubeDecision::failing(CubeVerdict::NoCubeTerm, 0, (0, 1)));
    }
    if cap == Some(0) {
        return Err(Error::InvalidArgument("dimension cap must be ≥ 1"));
    }
    let limit = cap.map_or(bound, |c| c.min(bound));
    let mut d = 1;
    loop {
        let mut failed = None;
        'pairs: for a in 0..n as Elem {
            for b in 0..n as Elem {
                if a == b {
                    continue;
                }
                let answer = constant_pair_query(alg, a, b, d, engine, budget)?;
                if answer.truncated {
                    let mut out = CubeDecision::failing(CubeVerdict::Undecided, d, (a, b));
                    out.failing_pair = None;
                    out.note = Some(alloc::format!("membership query truncated at dimension {d}"));
                    return Ok(out);
                }
                if !answer.found {
                    failed = Some((a, b));
                    break 'pairs;
                }
            }
        }
        match failed {
            None => return Ok(CubeDecision::has(bound, Some(d))),
            Some(pair) if d == limit => {
                return Ok(if limit == bound {
                    CubeDecision::failing(CubeVerdict::NoCubeTerm, d, pair)
                } else {
                    let mut out = CubeDecision::failing(CubeVerdict::Undecided, d, pair);
                    out.note = Some(alloc::format!("no cube term of dimension ≤ {d}"));
                    out
                });
            }
            Some(_) => d = (2 * d).min(limit),
        }
    }
}

/// Routes to the blocker search for idempotent algebras and to the general
/// procedure otherwise.
pub fn decide_cube(alg: &FiniteAlgebra, opts: &DecideOptions) -> Result<CubeDecision> {
    let n = alg.size();
    if n == 1 {
        return Ok(CubeDecision::has(1, Some(1)));
    }
    if alg.operations().is_empty() {
        let blocker = Blocker { c: ElementSet::singleton(0), d: alg.universe() };
        return Ok(CubeDecision::blocked(0, blocker));
    }
    if alg.is_idempotent() && !opts.force_general {
        decide_cube_idempotent(alg)
    } else {
        decide_cube_general(alg, opts.cap, opts.engine, &opts.budget)
    }
}

/// Smallest `d ∈ [2, cap]` with a `d`-dimensional cube term.
pub fn minimal_cube_dimension(alg: &FiniteAlgebra, cap: usize, budget: &Budget) -> Result<Option<usize>> {
    if cap < 2 {
        return Err(Error::InvalidArgument("dimension cap must be ≥ 2"));
    }
    for d in 2..=cap {
        if check_cube_dim(alg, d, budget)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NuVerdict {
    HasNu(usize),
    NoNu,
    Undecided,
}

/// Outcome of a near unanimity decision, with the cube data behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuDecision {
    pub verdict: NuVerdict,
    pub cube: CubeDecision,
    pub minimal_cube_dimension: Option<usize>,
    pub note: Option<String>,
}

/// Decides near unanimity terms.
///
/// Without a cube term there is none. Otherwise, with `d₀` the minimal cube
/// dimension, there is one iff there is one of arity `max(3, d₀)`.
pub fn decide_nu(alg: &FiniteAlgebra, opts: &DecideOptions) -> Result<NuDecision> {
    let cube = decide_cube(alg, opts)?;
    let undecided = |cube: CubeDecision, d0, note: String| NuDecision {
        verdict: NuVerdict::Undecided,
        cube,
        minimal_cube_dimension: d0,
        note: Some(note),
    };
    match cube.verdict {
        CubeVerdict::NoCubeTerm => {
            return Ok(NuDecision { verdict: NuVerdict::NoNu, cube, minimal_cube_dimension: None, note: None })
        }
        CubeVerdict::Undecided => {
            let note = cube.note.clone().unwrap_or_else(|| "cube term decision undecided".into());
            return Ok(undecided(cube, None, note));
        }
        CubeVerdict::HasCubeTerm => {}
    }
    let cap = opts.cap.unwrap_or(usize::MAX).min(cube.dimension_bound).max(2);
    let d0 = match minimal_cube_dimension(alg, cap, &opts.budget) {
        Ok(Some(d0)) => d0,
        Ok(None) => return Ok(undecided(cube, None, alloc::format!("no cube term of dimension ≤ {cap} found"))),
        Err(Error::BudgetExceeded(what)) => return Ok(undecided(cube, None, what.into())),
        Err(e) => return Err(e),
    };
    let k = d0.max(3);
    match check_nu(alg, k, &opts.budget) {
        Ok(true) => Ok(NuDecision { verdict: NuVerdict::HasNu(k), cube, minimal_cube_dimension: Some(d0), note: None }),
        Ok(false) => Ok(NuDecision { verdict: NuVerdict::NoNu, cube, minimal_cube_dimension: Some(d0), note: None }),
        Err(Error::BudgetExceeded(what)) => Ok(undecided(cube, Some(d0), what.into())),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::OperationTable;
    use crate::fixtures;
    use alloc::vec;

    fn set(xs: &[Elem]) -> ElementSet {
        xs.iter().copied().collect()
    }

    #[test]
    fn lattice_checks() {
        let alg = fixtures::lattice2();
        let b = Budget::default();
        for strategy in [CheckStrategy::Stacked, CheckStrategy::Local] {
            assert!(!check_cube_dim_with(&alg, 2, strategy, &b).unwrap());
            assert!(check_cube_dim_with(&alg, 3, strategy, &b).unwrap());
        }
        assert!(!check_edge_dim(&alg, 2, &b).unwrap());
        assert!(check_edge_dim(&alg, 3, &b).unwrap());
        assert!(check_nu(&alg, 3, &b).unwrap());
        assert!(check_nu(&alg, 2, &b).is_err());
        assert_eq!(minimal_cube_dimension(&alg, 5, &b).unwrap(), Some(3));
        let nu = decide_nu(&alg, &DecideOptions::default()).unwrap();
        assert_eq!(nu.verdict, NuVerdict::HasNu(3));
    }

    #[test]
    fn semilattice_decisions() {
        let alg = fixtures::semilattice2();
        let b = Budget::default();
        let dec = decide_cube_idempotent(&alg).unwrap();
        assert_eq!(dec.verdict, CubeVerdict::NoCubeTerm);
        assert_eq!(dec.blocker, Some(Blocker { c: set(&[0]), d: set(&[0, 1]) }));
        assert!(!check_edge_dim(&alg, 3, &b).unwrap());
        assert!(!check_nu(&alg, 3, &b).unwrap());
        assert_eq!(minimal_cube_dimension(&alg, 4, &b).unwrap(), None);
        assert_eq!(decide_nu(&alg, &DecideOptions::default()).unwrap().verdict, NuVerdict::NoNu);
    }

    #[test]
    fn idempotent_bounds_reported() {
        let dec = decide_cube_idempotent(&fixtures::lattice2()).unwrap();
        assert_eq!((dec.verdict, dec.dimension_bound), (CubeVerdict::HasCubeTerm, 16));
        let q3 = fixtures::idempotent_quasigroup(3).unwrap();
        let dec = decide_cube_idempotent(&q3).unwrap();
        assert_eq!((dec.verdict, dec.dimension_bound), (CubeVerdict::HasCubeTerm, 2));
        assert_eq!(decide_cube_idempotent(&fixtures::constant3()), Err(Error::NotIdempotent));
    }

    #[test]
    fn general_examples() {
        let b = Budget::default();
        let dec = decide_cube_general(&fixtures::nand2(), None, PairEngine::Symmetric, &b).unwrap();
        assert_eq!(dec.verdict, CubeVerdict::HasCubeTerm);
        let dec = decide_cube_general(&fixtures::constant0_2(), None, PairEngine::Symmetric, &b).unwrap();
        assert_eq!(dec.verdict, CubeVerdict::NoCubeTerm);
        assert_eq!(dec.dimension_bound, 8);
        assert!(dec.failing_pair.is_some());
        let dec = decide_cube_general(&fixtures::lattice2(), None, PairEngine::Symmetric, &b).unwrap();
        assert_eq!((dec.verdict, dec.dimension_bound, dec.witness_dimension), (CubeVerdict::HasCubeTerm, 16, Some(2)));
        let dec = decide_cube_general(&fixtures::constant3(), Some(4), PairEngine::Symmetric, &b).unwrap();
        assert_eq!(dec.verdict, CubeVerdict::Undecided);
        assert_eq!(dec.dimension_bound, 4);
    }

    #[test]
    fn nu_search_is_not_capped_by_pass_depth() {
        let lattice = fixtures::lattice2();
        let mut ops = lattice.operations().to_vec();
        ops.push(OperationTable::new("zero", 1, vec![0, 0]));
        let alg = FiniteAlgebra::new(None, 2, ops).unwrap();
        let nu = decide_nu(&alg, &DecideOptions::default()).unwrap();
        assert_eq!(nu.cube.witness_dimension, Some(2));
        assert_eq!((nu.verdict, nu.minimal_cube_dimension), (NuVerdict::HasNu(3), Some(3)));
    }

    #[test]
    fn router_short_circuits() {
        let opts = DecideOptions::default();
        let one = fixtures::no_ops(1).unwrap();
        assert_eq!(decide_cube(&one, &opts).unwrap().verdict, CubeVerdict::HasCubeTerm);
        let bare = fixtures::no_ops(3).unwrap();
        let dec = decide_cube(&bare, &opts).unwrap();
        assert_eq!(dec.verdict, CubeVerdict::NoCubeTerm);
        assert_eq!(dec.blocker, Some(Blocker { c: set(&[0]), d: set(&[0, 1, 2]) }));
        assert!(check_edge_dim(&one, 2, &Budget::default()).unwrap());
    }

    #[test]
    fn quasigroup_nu() {
        let q3 = fixtures::idempotent_quasigroup(3).unwrap();
        let b = Budget::default();
        assert!(check_cube_dim(&q3, 2, &b).unwrap());
        assert_eq!(minimal_cube_dimension(&q3, 4, &b).unwrap(), Some(2));
        let nu = decide_nu(&q3, &DecideOptions::default()).unwrap();
        assert_eq!(nu.verdict, NuVerdict::NoNu);
        assert_eq!(nu.minimal_cube_dimension, Some(2));
    }
}
