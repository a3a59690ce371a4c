//! Random valid HS-derivations on monomial quotients, built from algebra
//! maps `Φ: A -> A[[s]]_Δ` with `Φ(x_i) = x_i u_i`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::FiniteAlgebra;
use crate::coideal::{CoIdeal, MultiIndex};
use crate::error::{Error, Result};
use crate::hs::HSDeriv;
use crate::linop::LinOp;
use crate::series::{OpSeries, UnitSeries};
use crate::substitution::{alg_series_mul, AlgSeries};

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A generator depending only on `(seed, variable, α)`, so that the
/// coefficient at `α` is the same on every co-ideal containing `α`.
fn coefficient_rng(seed: u64, var: usize, alpha: &MultiIndex) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    h = splitmix(h ^ var as u64);
    h = splitmix(h ^ alpha.q() as u64);
    for &a in alpha.entries() {
        h = splitmix(h ^ a as u64);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// A random certified HS-derivation over `Δ` with `D_α = 0` for
/// `0 < |α| < vanish_below`. Truncation-compatible: generating on a
/// smaller co-ideal gives the truncation.
pub fn generate_hs(
    algebra: &Arc<FiniteAlgebra>,
    coideal: &Arc<CoIdeal>,
    seed: u64,
    vanish_below: u32,
) -> Result<HSDeriv> {
    let exps = algebra.exponents().ok_or(Error::NotMonomialQuotient)?.to_vec();
    let e = vanish_below.max(1) as u64;
    let units: Vec<AlgSeries> = (0..exps.len())
        .map(|var| {
            let mut u = AlgSeries::new();
            u.insert(MultiIndex::zero(coideal.q()), algebra.one_element());
            for alpha in coideal.members().iter().filter(|a| a.degree() >= e) {
                let mut rng = coefficient_rng(seed, var, alpha);
                let c: Vec<_> = (0..algebra.dim()).map(|_| algebra.field().random(&mut rng)).collect();
                if !algebra.is_zero_element(&c) {
                    u.insert(alpha.clone(), c);
                }
            }
            u
        })
        .collect();
    hs_from_units(algebra, coideal, &units)
}

/// The HS-derivation read off from `Φ(x_i) = x_i u_i`. Each `u_i` must have
/// constant term one.
pub fn hs_from_units(
    algebra: &Arc<FiniteAlgebra>,
    coideal: &Arc<CoIdeal>,
    units: &[AlgSeries],
) -> Result<HSDeriv> {
    let exps = algebra.exponents().ok_or(Error::NotMonomialQuotient)?.to_vec();
    if units.len() != exps.len() {
        return Err(Error::LengthMismatch(exps.len(), units.len()));
    }
    let zero = MultiIndex::zero(coideal.q());
    for u in units {
        if u.get(&zero) != Some(&algebra.one_element()) {
            return Err(Error::NotUnit);
        }
    }
    // powers[i][k] = u_i^k
    let powers: Vec<Vec<AlgSeries>> = units
        .iter()
        .zip(&exps)
        .map(|(u, &e)| {
            let mut out = vec![];
            let mut acc = AlgSeries::new();
            acc.insert(zero.clone(), algebra.one_element());
            for _ in 0..e {
                out.push(acc.clone());
                acc = alg_series_mul(algebra, coideal, &acc, u);
            }
            out
        })
        .collect();
    let n = algebra.dim();
    let field = algebra.field();
    // images[b] = Φ(b) as an A-valued series.
    let mut columns: std::collections::BTreeMap<MultiIndex, Vec<Vec<_>>> = Default::default();
    for (b, label) in algebra.basis_labels().iter().enumerate() {
        let mut prod = AlgSeries::new();
        prod.insert(zero.clone(), algebra.basis_vector(b));
        for (i, &a) in label.iter().enumerate() {
            if a > 0 {
                prod = alg_series_mul(algebra, coideal, &prod, &powers[i][a as usize]);
            }
        }
        for (alpha, c) in prod {
            columns.entry(alpha).or_insert_with(|| vec![algebra.zero_element(); n])[b] = c;
        }
    }
    let coeffs = columns.into_iter().map(|(alpha, cols)| (alpha, LinOp::from_columns(field, &cols)));
    let s = OpSeries::from_coeffs(algebra.clone(), coideal.clone(), coeffs)?;
    let s = UnitSeries::new(s)?;
    // Valid by construction; re-verified when paranoid.
    Ok(HSDeriv::closed(s, true))
}
