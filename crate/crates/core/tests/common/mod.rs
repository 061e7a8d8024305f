//! Seeded random idempotent algebras.
#![allow(dead_code)]

use cubeterm_core::{FiniteAlgebra, OperationTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random idempotent operation: diagonal entries fixed, the rest uniform.
pub fn idempotent_op(rng: &mut impl Rng, name: &str, arity: usize, n: usize) -> OperationTable {
    OperationTable::from_fn(name, arity, n, |args| {
        if args.iter().all(|&x| x == args[0]) {
            args[0]
        } else {
            rng.gen_range(0..n) as u8
        }
    })
}

/// The four idempotent binary operations on two elements.
pub fn binary_two_element() -> Vec<FiniteAlgebra> {
    (0..4u8)
        .map(|bits| {
            let table = vec![0, bits & 1, bits >> 1 & 1, 1];
            FiniteAlgebra::new(Some(format!("bin{bits}")), 2, vec![OperationTable::new("f", 2, table)]).unwrap()
        })
        .collect()
}

/// Three elements, one binary and one ternary operation.
pub fn random_three_element(seed: u64) -> FiniteAlgebra {
    let mut r = rng(seed);
    let ops = vec![idempotent_op(&mut r, "f", 2, 3), idempotent_op(&mut r, "g", 3, 3)];
    FiniteAlgebra::new(Some(format!("r3_{seed}")), 3, ops).unwrap()
}

/// Two elements, one to three operations of arity two or three.
pub fn random_two_element(seed: u64) -> FiniteAlgebra {
    let mut r = rng(seed);
    let count = r.gen_range(1..=3);
    let ops = (0..count)
        .map(|i| {
            let arity = r.gen_range(2..=3);
            idempotent_op(&mut r, &format!("f{i}"), arity, 2)
        })
        .collect();
    FiniteAlgebra::new(Some(format!("r2_{seed}")), 2, ops).unwrap()
}

pub fn two_element_sample(count: u64) -> Vec<FiniteAlgebra> {
    (0..count).map(|s| random_two_element(1000 + s)).collect()
}

/// Two elements, one or two operations of arity one to three, not
/// necessarily idempotent.
pub fn random_two_element_any(seed: u64) -> FiniteAlgebra {
    let mut r = rng(seed);
    let count = r.gen_range(1..=2);
    let ops = (0..count)
        .map(|i| {
            let arity = r.gen_range(1..=3);
            OperationTable::from_fn(format!("g{i}"), arity, 2, |_| r.gen_range(0..2))
        })
        .collect();
    FiniteAlgebra::new(Some(format!("a2_{seed}")), 2, ops).unwrap()
}
