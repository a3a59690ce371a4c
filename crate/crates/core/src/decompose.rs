//! Factorization of a multi-variate HS-derivation into uni-variate pieces,
//! one per ray, composed in ascending ray order.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::Serialize;

use crate::coideal::{CoIdeal, MultiIndex};
use crate::error::{Error, Result};
use crate::hs::HSDeriv;
use crate::linop::LinOp;
use crate::ray_order::{in_s, is_primitive, ray_compare, ray_data, sorted_rays};
use crate::substitution::{monomial_substitution, product_substitution, SubstitutionMap};

/// One peeling step: `D = (ψ_β • factor) ∘ remainder`.
#[derive(Clone, Debug)]
pub struct Peel {
    pub factor: HSDeriv,
    pub remainder: HSDeriv,
    /// The remainder vanishes on `S_β ⊔ P_β`.
    pub support_ok: bool,
    /// `(ψ_β • factor) ∘ remainder` reproduces the input.
    pub recomposition_ok: bool,
}

/// Splits off the ray `β` from a derivation supported in `T_β ∪ {0}`.
pub fn peel_ray(d: &HSDeriv, beta: &MultiIndex) -> Result<Peel> {
    if !is_primitive(beta) {
        return Err(Error::Hypothesis(format!("{beta} is not primitive")));
    }
    if let Some(bad) = d.support().find(|g| in_s(beta, g)) {
        return Err(Error::SupportHypothesis(bad.clone()));
    }
    let factor = d.restrict_to_ray(beta)?;
    let psi = monomial_substitution(d.algebra().clone(), beta, d.coideal().clone())?;
    let remainder = psi.act(&factor.inverse())?.compose(d)?;
    let orbit = ray_data(d.coideal(), beta)?.orbit;
    let support_ok = !remainder.support().any(|g| in_s(beta, g) || orbit.contains(g));
    let recomposition_ok = &psi.act(&factor)?.compose(&remainder)? == d;
    Ok(Peel { factor, remainder, support_ok, recomposition_ok })
}

/// Peels every ray strictly below `β` and returns the uni-variate factor on
/// `β` (the component `E^β` of the decomposition).
pub fn ray_factor(d: &HSDeriv, beta: &MultiIndex) -> Result<HSDeriv> {
    let mut current = d.clone();
    for ray in sorted_rays(d.coideal())? {
        if ray_compare(&ray, beta)? != Ordering::Less {
            break;
        }
        let peel = peel_ray(&current, &ray)?;
        if !peel.support_ok || !peel.recomposition_ok {
            return Err(Error::Certificate(format!("peeling ray {ray} failed its checks")));
        }
        current = peel.remainder;
    }
    current.restrict_to_ray(beta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionCertificate {
    /// Per peel: the remainder vanishes on `S_{β^{i+1}}`.
    pub support_steps: Vec<bool>,
    /// Per peel: the step recomposes to its input.
    pub step_recomposition: Vec<bool>,
    /// Per factor: Leibniz re-verified.
    pub factors_leibniz: Vec<bool>,
    /// The last remainder is the identity.
    pub remainder_identity: bool,
    /// The ordered composition of all factors equals the input.
    pub recomposition_equal: bool,
    pub passed: bool,
}

/// The factor family `(β^i, E^i)` in ascending ray order.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub coideal: Arc<CoIdeal>,
    pub factors: Vec<(MultiIndex, HSDeriv)>,
    pub certificate: DecompositionCertificate,
}

/// Peels every ray of `Δ` in ascending order.
pub fn decompose(d: &HSDeriv) -> Result<Decomposition> {
    if !d.certified() {
        return Err(Error::NotCertified);
    }
    let rays = sorted_rays(d.coideal())?;
    let mut current = d.clone();
    let mut factors = Vec::with_capacity(rays.len());
    let mut support_steps = Vec::with_capacity(rays.len());
    let mut step_recomposition = Vec::with_capacity(rays.len());
    for beta in rays {
        let peel = peel_ray(&current, &beta)?;
        support_steps.push(peel.support_ok);
        step_recomposition.push(peel.recomposition_ok);
        factors.push((beta, peel.factor));
        current = peel.remainder;
    }
    let factors_leibniz = factors.iter().map(|(_, e)| e.recheck().passed).collect::<Vec<_>>();
    let remainder_identity = current.is_identity();
    let recomposition_equal = &recompose(d.coideal(), &factors)? == d;
    let passed = support_steps.iter().all(|&b| b)
        && step_recomposition.iter().all(|&b| b)
        && factors_leibniz.iter().all(|&b| b)
        && remainder_identity
        && recomposition_equal;
    Ok(Decomposition {
        coideal: d.coideal().clone(),
        factors,
        certificate: DecompositionCertificate {
            support_steps,
            step_recomposition,
            factors_leibniz,
            remainder_identity,
            recomposition_equal,
            passed,
        },
    })
}

fn check_alignment(delta: &Arc<CoIdeal>, factors: &[(MultiIndex, HSDeriv)]) -> Result<()> {
    let rays = sorted_rays(delta)?;
    if rays.len() != factors.len() {
        return Err(Error::MisalignedRays(format!(
            "{} rays but {} factors",
            rays.len(),
            factors.len()
        )));
    }
    for (ray, (beta, e)) in rays.iter().zip(factors) {
        if ray != beta {
            return Err(Error::MisalignedRays(format!("expected ray {ray}, found {beta}")));
        }
        let m = ray_data(delta, ray)?.multiplicity;
        if e.length()? != m {
            return Err(Error::MisalignedRays(format!(
                "factor on {ray} has length {}, expected {m}",
                e.length()?
            )));
        }
    }
    Ok(())
}

/// `(ψ_{β^1} • E^1) ∘ ... ∘ (ψ_{β^C} • E^C)`.
pub fn recompose(delta: &Arc<CoIdeal>, factors: &[(MultiIndex, HSDeriv)]) -> Result<HSDeriv> {
    check_alignment(delta, factors)?;
    let algebra = factors[0].1.algebra().clone();
    let mut acc = HSDeriv::identity(algebra.clone(), delta.clone());
    for (beta, e) in factors {
        let psi = monomial_substitution(algebra.clone(), beta, delta.clone())?;
        acc = acc.compose(&psi.act(e)?)?;
    }
    Ok(acc)
}

/// The product form `ψ_Δ • (E^1 ⊠ ... ⊠ E^C)`.
#[derive(Clone, Debug)]
pub struct BoxtimesForm {
    pub substitution: SubstitutionMap,
    pub product: HSDeriv,
}

/// `E^1 ⊠ ... ⊠ E^C` together with `ψ_Δ`.
pub fn boxtimes_form(delta: &Arc<CoIdeal>, factors: &[(MultiIndex, HSDeriv)]) -> Result<BoxtimesForm> {
    check_alignment(delta, factors)?;
    let algebra = factors[0].1.algebra().clone();
    let substitution = product_substitution(algebra, delta.clone())?;
    let mut product = factors[0].1.clone();
    for (_, e) in &factors[1..] {
        product = product.external_product(e)?;
    }
    Ok(BoxtimesForm { substitution, product })
}

/// Decomposes and re-expresses `D` in the product form, checking
/// `ψ_Δ • (E^1 ⊠ ... ⊠ E^C) = D`.
pub fn boxtimes_decompose(d: &HSDeriv) -> Result<(BoxtimesForm, bool)> {
    let dec = decompose(d)?;
    let form = boxtimes_form(&dec.coideal, &dec.factors)?;
    let agrees = &form.substitution.act(&form.product)? == d;
    Ok((form, agrees))
}

/// `E^β_n` of a derivation given by its total-degree truncations
/// `r ↦ D^r` over `Δ^r = Δ ∩ {|α| ≤ r}`. Computes at the first level
/// containing `nβ` and at the next one, and requires them to agree.
pub fn tower_component(
    provider: &dyn Fn(u32) -> Result<HSDeriv>,
    beta: &MultiIndex,
    n: u32,
) -> Result<LinOp> {
    if !is_primitive(beta) {
        return Err(Error::Hypothesis(format!("{beta} is not primitive")));
    }
    let level = (n as u64 * beta.degree()).max(1) as u32;
    let low = provider(level)?;
    let high = provider(level + 1)?;
    if n == 0 {
        return Ok(LinOp::identity(low.algebra().field(), low.algebra().dim()));
    }
    if **low.coideal() != high.coideal().truncate_degree(level as u64) {
        return Err(Error::IncompatibleTower(format!("level {level} is not Δ^{level}")));
    }
    if high.truncate(low.coideal())? != low {
        return Err(Error::IncompatibleTower(format!(
            "level {} does not truncate to level {level}",
            level + 1
        )));
    }
    let target = beta.scaled(n);
    if !low.coideal().contains(&target) {
        return Err(Error::NotMember(target));
    }
    let e_low = ray_factor(&low, beta)?;
    let e_high = ray_factor(&high, beta)?;
    if e_high.truncate(e_low.coideal())? != e_low {
        return Err(Error::IncompatibleTower(format!(
            "factor on {beta} changes between levels {level} and {}",
            level + 1
        )));
    }
    Ok(e_low.component(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteAlgebra;
    use crate::field::Field;
    use crate::generate::generate_hs;

    fn alg() -> Arc<FiniteAlgebra> {
        Arc::new(FiniteAlgebra::monomial_quotient(Field::prime(5).unwrap(), &[3, 3]).unwrap())
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn single_ray_peels_to_identity() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&mi(&[2, 2])).unwrap());
        let beta = mi(&[1, 1]);
        let psi = monomial_substitution(a.clone(), &beta, delta.clone()).unwrap();
        let e = generate_hs(&a, psi.source(), 2, 1).unwrap();
        let d = psi.act(&e).unwrap();
        let peel = peel_ray(&d, &beta).unwrap();
        assert_eq!(peel.factor.series(), e.series());
        assert!(peel.remainder.is_identity());
    }

    #[test]
    fn first_peel_reads_the_lowest_ray() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&mi(&[2, 2])).unwrap());
        let d = generate_hs(&a, &delta, 7, 1).unwrap();
        let peel = peel_ray(&d, &mi(&[0, 1])).unwrap();
        assert_eq!(peel.factor.component(1), d.at(&[0, 1]));
        assert_eq!(peel.factor.component(2), d.at(&[0, 2]));
        assert!(peel.support_ok && peel.recomposition_ok);
    }

    #[test]
    fn support_hypothesis_is_enforced() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&mi(&[2, 2])).unwrap());
        let d = generate_hs(&a, &delta, 7, 1).unwrap();
        assert_eq!(peel_ray(&d, &mi(&[1, 1])).err(), Some(Error::SupportHypothesis(mi(&[0, 1]))));
    }

    #[test]
    fn identity_decomposes_trivially() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&mi(&[2, 2])).unwrap());
        let dec = decompose(&HSDeriv::identity(a, delta)).unwrap();
        assert!(dec.certificate.passed);
        assert!(dec.factors.iter().all(|(_, e)| e.is_identity()));
    }

    #[test]
    fn round_trip_and_product_form() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&mi(&[1, 1])).unwrap());
        let d = generate_hs(&a, &delta, 3, 1).unwrap();
        let dec = decompose(&d).unwrap();
        assert!(dec.certificate.passed, "{:?}", dec.certificate);
        let (form, agrees) = boxtimes_decompose(&d).unwrap();
        assert!(agrees);
        assert_eq!(**form.substitution.source(), CoIdeal::boxed(&mi(&[1, 1, 1])).unwrap());
    }

    #[test]
    fn misaligned_factors_are_rejected() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&mi(&[1, 1])).unwrap());
        let d = generate_hs(&a, &delta, 3, 1).unwrap();
        let mut factors = decompose(&d).unwrap().factors;
        factors.swap(0, 1);
        assert!(matches!(recompose(&delta, &factors), Err(Error::MisalignedRays(_))));
        factors.pop();
        assert!(matches!(recompose(&delta, &factors), Err(Error::MisalignedRays(_))));
    }

    #[test]
    fn uncertified_input_is_refused() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&mi(&[1, 1])).unwrap());
        let d = generate_hs(&a, &delta, 3, 1).unwrap();
        let raw = HSDeriv::uncertified(d.into_series());
        assert_eq!(decompose(&raw).err(), Some(Error::NotCertified));
    }

    #[test]
    fn tower_stabilizes_on_finite_coideal() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&mi(&[2, 2])).unwrap());
        let d = generate_hs(&a, &delta, 12, 1).unwrap();
        let dec = decompose(&d).unwrap();
        let provider = |r: u32| d.truncate(&Arc::new(delta.truncate_degree(r as u64)));
        for (beta, e) in &dec.factors {
            for n in 1..=e.length().unwrap() {
                assert_eq!(tower_component(&provider, beta, n).unwrap(), e.component(n));
            }
        }
    }
}
