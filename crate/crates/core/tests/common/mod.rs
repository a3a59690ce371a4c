#![allow(dead_code)]

use std::sync::Arc;

use hsforge::{CoIdeal, Field, FiniteAlgebra, HSDeriv, LinOp, MultiIndex};

pub fn alg(p: u64, exps: &[u32]) -> Arc<FiniteAlgebra> {
    let f = if p == 0 { Field::Rationals } else { Field::prime(p).unwrap() };
    Arc::new(FiniteAlgebra::monomial_quotient(f, exps).unwrap())
}

pub fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

pub fn boxed(v: &[u32]) -> Arc<CoIdeal> {
    Arc::new(CoIdeal::boxed(&mi(v)).unwrap())
}

pub fn uni(m: u32) -> Arc<CoIdeal> {
    Arc::new(CoIdeal::uni(m))
}

pub fn total(q: usize, r: u32) -> Arc<CoIdeal> {
    Arc::new(CoIdeal::total_degree(q, r).unwrap())
}

/// `(D_0, ..., D_m)` of a uni-variate derivation.
pub fn comps(d: &HSDeriv) -> Vec<LinOp> {
    (0..=d.length().unwrap()).map(|n| d.component(n)).collect()
}

/// Inverse of a uni-variate sequence: `D*_n = -Σ_{i=1}^n D_i D*_{n-i}`.
pub fn inverse_oracle(d: &[LinOp]) -> Vec<LinOp> {
    let f = d[0].field();
    let n = d[0].dim();
    let mut inv = vec![LinOp::identity(f, n)];
    for k in 1..d.len() {
        let mut acc = LinOp::zero(f, n);
        for i in 1..=k {
            acc = acc + &d[i] * &inv[k - i];
        }
        inv.push(-acc);
    }
    inv
}

/// `((D ⊠ E) ∘ (D* ⊠ E*))_{(a,b)} = Σ D_i E_j D*_k E*_l` over
/// `i + k = a`, `j + l = b`.
pub fn commutator_oracle(d: &[LinOp], e: &[LinOp], a: usize, b: usize) -> LinOp {
    let ds = inverse_oracle(d);
    let es = inverse_oracle(e);
    let mut acc = LinOp::zero(d[0].field(), d[0].dim());
    for i in 0..=a {
        for j in 0..=b {
            acc = acc + &d[i] * &e[j] * &ds[a - i] * &es[b - j];
        }
    }
    acc
}

/// All nonzero vectors in `N^q` with entry sum at most `bound`.
pub fn nonzero_vectors(q: usize, bound: u32) -> Vec<Vec<u32>> {
    fn go(q: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == q {
            if prefix.iter().any(|&a| a > 0) {
                out.push(prefix.clone());
            }
            return;
        }
        for a in 0..=left {
            prefix.push(a);
            go(q, left - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = vec![];
    go(q, bound, &mut vec![], &mut out);
    out
}
