//! Order of differential operators on a finite algebra, by nested
//! commutators with multiplication operators.

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::hs::HSDeriv;
use crate::linop::LinOp;
use crate::series::same_algebra;

#[derive(Clone, Debug)]
pub struct OrderReport {
    pub operator: LinOp,
    pub claimed_bound: u32,
    pub verdict: bool,
}

fn mult_ops(algebra: &FiniteAlgebra, indices: &[usize]) -> Vec<LinOp> {
    indices
        .iter()
        .map(|&b| algebra.mult_operator(&algebra.basis_vector(b)).expect("basis vector"))
        .collect()
}

/// `ad_a` and `ad_b` commute for commuting `a, b`, so only nondecreasing
/// sequences of generators need to be visited.
fn vanishes_after(p: &LinOp, ops: &[LinOp], start: usize, depth: u32) -> bool {
    if p.is_zero() {
        return true;
    }
    if depth == 0 {
        return false;
    }
    (start..ops.len()).all(|g| {
        let c = p.bracket(&ops[g]).expect("same dimension");
        vanishes_after(&c, ops, g, depth - 1)
    })
}

/// True iff `P` has order at most `d`: every `(d+1)`-fold commutator with
/// multiplications by generators vanishes.
pub fn order_leq(algebra: &FiniteAlgebra, p: &LinOp, d: u32) -> bool {
    let ops = mult_ops(algebra, algebra.generators());
    vanishes_after(p, &ops, 0, d + 1)
}

/// The same test over every ordered sequence of basis multiplications.
pub fn order_leq_basis(algebra: &FiniteAlgebra, p: &LinOp, d: u32) -> bool {
    fn go(p: &LinOp, ops: &[LinOp], depth: u32) -> bool {
        if p.is_zero() {
            return true;
        }
        if depth == 0 {
            return false;
        }
        ops.iter().all(|a| go(&p.bracket(a).expect("same dimension"), ops, depth - 1))
    }
    let all: Vec<usize> = (0..algebra.dim()).collect();
    go(p, &mult_ops(algebra, &all), d + 1)
}

/// The smallest `d` with `order_leq(P, d)`, or `None` for `P = 0`.
pub fn order_of(algebra: &FiniteAlgebra, p: &LinOp) -> Option<u32> {
    if p.is_zero() {
        return None;
    }
    (0..).find(|&d| order_leq(algebra, p, d))
}

/// `[D_m, E_n] - D_{m-1} E_{n-1} [D_1, E_1]` and whether it has order at
/// most `m + n - 2`.
pub fn lemma44_defect(d: &HSDeriv, e: &HSDeriv) -> Result<(LinOp, OrderReport)> {
    let (m, n) = (d.length()?, e.length()?);
    if m == 0 || n == 0 {
        return Err(Error::Hypothesis("lengths must be at least 1".into()));
    }
    if !same_algebra(d.algebra(), e.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if !d.certified() || !e.certified() {
        return Err(Error::NotCertified);
    }
    let bracket = d.component(m).bracket(&e.component(n))?;
    let correction = d.component(m - 1) * e.component(n - 1) * d.component(1).bracket(&e.component(1))?;
    let defect = bracket - correction;
    let bound = m + n - 2;
    let verdict = order_leq(d.algebra(), &defect, bound);
    Ok((defect.clone(), OrderReport { operator: defect, claimed_bound: bound, verdict }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coideal::CoIdeal;
    use crate::field::Field;
    use crate::generate::generate_hs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn alg(p: u64, exps: &[u32]) -> Arc<FiniteAlgebra> {
        Arc::new(FiniteAlgebra::monomial_quotient(Field::prime(p).unwrap(), exps).unwrap())
    }

    #[test]
    fn multiplications_and_derivations() {
        let a = alg(5, &[3, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x: Vec<_> = (0..a.dim()).map(|_| a.field().random(&mut rng)).collect();
        let m = a.mult_operator(&x).unwrap();
        assert!(order_leq(&a, &m, 0));
        let d = generate_hs(&a, &Arc::new(CoIdeal::uni(1)), 3, 1).unwrap().component(1);
        assert!(order_leq(&a, &d, 1));
        assert!(!order_leq(&a, &d, 0));
        assert_eq!(order_of(&a, &d), Some(1));
    }

    #[test]
    fn components_have_order_at_most_their_degree() {
        let a = alg(3, &[3, 3]);
        let delta = Arc::new(CoIdeal::total_degree(2, 3).unwrap());
        for seed in 0..5 {
            let d = generate_hs(&a, &delta, seed, 1).unwrap();
            for (alpha, op) in d.coeffs() {
                let k = alpha.degree() as u32;
                assert!(order_leq(&a, op, k));
                assert_eq!(order_leq(&a, op, k), order_leq_basis(&a, op, k));
            }
        }
    }

    #[test]
    fn generator_and_basis_checks_agree_on_random_operators() {
        let a = alg(2, &[2, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let p = LinOp::random(a.field(), a.dim(), &mut rng);
            for d in 0..4 {
                assert_eq!(order_leq(&a, &p, d), order_leq_basis(&a, &p, d));
            }
        }
    }

    #[test]
    fn lemma44_small_cases() {
        let a = alg(5, &[4]);
        for seed in 0..10 {
            let d = generate_hs(&a, &Arc::new(CoIdeal::uni(2)), seed, 1).unwrap();
            let e = generate_hs(&a, &Arc::new(CoIdeal::uni(1)), seed + 100, 1).unwrap();
            let (_, report) = lemma44_defect(&d, &e).unwrap();
            assert!(report.verdict);
            let (defect, _) = lemma44_defect(&e, &e).unwrap();
            assert!(defect.is_zero());
        }
    }
}
