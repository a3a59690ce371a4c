//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use hsforge::{generate_hs, CoIdeal, Field, FiniteAlgebra, HSDeriv, MultiIndex};

pub fn algebra(p: u64, exponents: &[u32]) -> Arc<FiniteAlgebra> {
    let field = if p == 0 { Field::Rationals } else { Field::prime(p).expect("prime") };
    Arc::new(FiniteAlgebra::monomial_quotient(field, exponents).expect("algebra"))
}

pub fn boxed(corner: &[u32]) -> Arc<CoIdeal> {
    Arc::new(CoIdeal::boxed(&MultiIndex::new(corner.to_vec())).expect("box"))
}

pub fn total(q: usize, r: u32) -> Arc<CoIdeal> {
    Arc::new(CoIdeal::total_degree(q, r).expect("simplex"))
}

pub fn derivation(a: &Arc<FiniteAlgebra>, delta: &Arc<CoIdeal>, seed: u64) -> HSDeriv {
    generate_hs(a, delta, seed, 1).expect("generate")
}
