//! Hasse–Schmidt derivations: Leibniz certification and the group
//! structure inherited from the unit series.

use std::collections::BTreeMap;
use std::ops::Deref;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::coideal::{CoIdeal, MultiIndex};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linop::LinOp;
use crate::ray_order::{in_s, ray_data};
use crate::series::{OpSeries, UnitSeries};

/// Whether group operations re-run the Leibniz check on their results.
/// On in debug builds and with the `paranoid` feature.
pub fn paranoid() -> bool {
    cfg!(debug_assertions) || cfg!(feature = "paranoid")
}

/// Outcome of [`leibniz_check`]. A violation names the smallest failing
/// index in graded-lex order and the first failing basis pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeibnizReport {
    pub passed: bool,
    pub violation: Option<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub alpha: String,
    #[serde(skip)]
    pub index: MultiIndex,
    pub i: usize,
    pub j: usize,
}

impl LeibnizReport {
    fn fail(alpha: &MultiIndex, i: usize, j: usize) -> Self {
        LeibnizReport {
            passed: false,
            violation: Some(Violation { alpha: alpha.to_string(), index: alpha.clone(), i, j }),
        }
    }

    pub fn into_result(self) -> Result<()> {
        match self.violation {
            None => Ok(()),
            Some(v) => Err(Error::Leibniz { alpha: v.index, i: v.i, j: v.j }),
        }
    }
}

/// Checks `D_0 = Id`, `D_α(1) = 0` for `α ≠ 0`, and
/// `D_α(b_i x) = Σ_{β+γ=α} D_β(b_i) D_γ(x)` for every member `α`, basis
/// element `b_i` and algebra generator `x`. Since the generators generate
/// `A`, induction on monomials gives the rule on every basis pair.
pub fn leibniz_check(d: &OpSeries) -> LeibnizReport {
    let alg = d.algebra();
    let n = alg.dim();
    let zero = MultiIndex::zero(d.coideal().q());
    if !d.is_unit() {
        return LeibnizReport::fail(&zero, 0, 0);
    }
    // Images of basis vectors, per supported index.
    let columns: BTreeMap<&MultiIndex, Vec<Vec<Scalar>>> =
        d.coeffs().iter().map(|(a, op)| (a, (0..n).map(|j| op.column(j)).collect())).collect();
    let f = alg.field();
    let unit = alg.unit_index();
    for alpha in d.coideal().members() {
        let d_alpha = columns.get(alpha);
        if !alpha.is_zero() && d_alpha.is_some_and(|cols| !alg.is_zero_element(&cols[unit])) {
            return LeibnizReport::fail(alpha, unit, unit);
        }
        let pairs: Vec<(&Vec<Vec<Scalar>>, &Vec<Vec<Scalar>>)> = divisors(alpha)
            .into_iter()
            .filter_map(|beta| {
                let cb = columns.get(&beta)?;
                let cg = columns.get(&alpha.checked_sub(&beta).expect("divisor"))?;
                Some((cb, cg))
            })
            .collect();
        for i in 0..n {
            for &j in alg.generators() {
                let mut lhs = alg.zero_element();
                if let Some(cols) = d_alpha {
                    for (l, c) in alg.basis_product(i, j) {
                        for (t, v) in cols[*l].iter().enumerate() {
                            if !f.is_zero(v) {
                                lhs[t] = f.add(&lhs[t], &f.mul(c, v));
                            }
                        }
                    }
                }
                let mut rhs = alg.zero_element();
                for (cb, cg) in &pairs {
                    alg.mul_acc(&mut rhs, &cb[i], &cg[j]);
                }
                if lhs != rhs {
                    return LeibnizReport::fail(alpha, i, j);
                }
            }
        }
    }
    LeibnizReport { passed: true, violation: None }
}

/// All `β ≤ α`.
fn divisors(alpha: &MultiIndex) -> Vec<MultiIndex> {
    let bound = alpha.entries();
    let mut out = vec![];
    let mut cur = vec![0u32; bound.len()];
    loop {
        out.push(MultiIndex::new(cur.clone()));
        let mut k = 0;
        while k < cur.len() && cur[k] == bound[k] {
            cur[k] = 0;
            k += 1;
        }
        if k == cur.len() {
            return out;
        }
        cur[k] += 1;
    }
}

/// A unit series together with whether it is known to satisfy the
/// Leibniz identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSDeriv {
    series: UnitSeries,
    certified: bool,
}

impl HSDeriv {
    /// Runs [`leibniz_check`]; fails with the first violation.
    pub fn certify(series: OpSeries) -> Result<HSDeriv> {
        leibniz_check(&series).into_result()?;
        Ok(HSDeriv { series: UnitSeries::new(series)?, certified: true })
    }

    pub fn uncertified(series: UnitSeries) -> HSDeriv {
        HSDeriv { series, certified: false }
    }

    /// Result of an operation under which HS-derivations are closed.
    pub(crate) fn closed(series: UnitSeries, inputs_certified: bool) -> HSDeriv {
        if inputs_certified && paranoid() {
            if let Err(e) = leibniz_check(&series).into_result() {
                panic!("closure violated: {e}");
            }
        }
        HSDeriv { series, certified: inputs_certified }
    }

    pub fn identity(algebra: Arc<FiniteAlgebra>, coideal: Arc<CoIdeal>) -> HSDeriv {
        HSDeriv { series: UnitSeries::identity(algebra, coideal), certified: true }
    }

    /// `(Id, D_1, ..., D_m)` over `{0, ..., m}`, certified.
    pub fn univariate(algebra: Arc<FiniteAlgebra>, components: Vec<LinOp>) -> Result<HSDeriv> {
        let coideal = Arc::new(CoIdeal::uni(components.len() as u32));
        let mut s = OpSeries::identity(algebra, coideal);
        for (r, op) in components.into_iter().enumerate() {
            s.set(MultiIndex::new(vec![r as u32 + 1]), op)?;
        }
        HSDeriv::certify(s)
    }

    pub fn series(&self) -> &UnitSeries {
        &self.series
    }

    pub fn into_series(self) -> UnitSeries {
        self.series
    }

    pub fn certified(&self) -> bool {
        self.certified
    }

    pub fn recheck(&self) -> LeibnizReport {
        leibniz_check(&self.series)
    }

    /// Largest `m` in a one-variable co-ideal.
    pub fn length(&self) -> Result<u32> {
        if self.coideal().q() != 1 {
            return Err(Error::NotUnivariate);
        }
        Ok(self.coideal().members().last().map(|m| m.entries()[0]).unwrap_or(0))
    }

    /// `D_n` of a one-variable derivation; zero past the length.
    pub fn component(&self, n: u32) -> LinOp {
        self.coeff_or_zero(&MultiIndex::new(vec![n]))
    }

    pub fn at(&self, alpha: &[u32]) -> LinOp {
        self.coeff_or_zero(&MultiIndex::new(alpha.to_vec()))
    }

    pub fn compose(&self, other: &HSDeriv) -> Result<HSDeriv> {
        let s = self.series.mul(&other.series)?;
        Ok(HSDeriv::closed(s, self.certified && other.certified))
    }

    pub fn inverse(&self) -> HSDeriv {
        HSDeriv::closed(self.series.inverse(), self.certified)
    }

    pub fn truncate(&self, target: &Arc<CoIdeal>) -> Result<HSDeriv> {
        Ok(HSDeriv::closed(self.series.truncate(target)?, self.certified))
    }

    /// `D ⊠ E` over `Δ_1 × Δ_2`, coefficient `D_α ∘ E_β` at `(α, β)`.
    pub fn external_product(&self, other: &HSDeriv) -> Result<HSDeriv> {
        if !crate::series::same_algebra(self.algebra(), other.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let coideal = Arc::new(self.coideal().product(other.coideal())?);
        let mut coeffs = Vec::new();
        for (a, d) in self.coeffs() {
            for (b, e) in other.coeffs() {
                coeffs.push((a.concat(b), d * e));
            }
        }
        let s = OpSeries::from_coeffs(self.algebra().clone(), coideal, coeffs)?;
        Ok(HSDeriv::closed(UnitSeries::new(s)?, self.certified && other.certified))
    }

    /// `(E_r := D_{rβ})_{0 ≤ r ≤ m_β}`. Certified only when `D` is and no
    /// coefficient of `D` lies strictly below the ray of `β`.
    pub fn restrict_to_ray(&self, beta: &MultiIndex) -> Result<HSDeriv> {
        let data = ray_data(self.coideal(), beta)?;
        let hypothesis = !self.support().any(|g| in_s(beta, g));
        let uni = Arc::new(CoIdeal::uni(data.multiplicity));
        let mut s = OpSeries::identity(self.algebra().clone(), uni);
        for (r, gamma) in data.orbit.iter().enumerate() {
            if let Some(op) = self.coeff(gamma) {
                s.set(MultiIndex::new(vec![r as u32 + 1]), op.clone())?;
            }
        }
        Ok(HSDeriv::closed(UnitSeries::new(s)?, self.certified && hypothesis))
    }
}

impl Deref for HSDeriv {
    type Target = OpSeries;
    fn deref(&self) -> &OpSeries {
        &self.series
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::generate::generate_hs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg() -> Arc<FiniteAlgebra> {
        Arc::new(FiniteAlgebra::monomial_quotient(Field::prime(5).unwrap(), &[3, 3]).unwrap())
    }

    #[test]
    fn identity_passes() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&MultiIndex::from([2, 2])).unwrap());
        assert!(leibniz_check(&OpSeries::identity(a, delta)).passed);
    }

    #[test]
    fn random_coefficient_fails_at_its_index() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&MultiIndex::from([2, 2])).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let alpha = MultiIndex::from([1, 1]);
        let mut s = OpSeries::identity(a.clone(), delta);
        s.set(alpha.clone(), LinOp::random(a.field(), a.dim(), &mut rng)).unwrap();
        let report = leibniz_check(&s);
        assert!(!report.passed);
        assert_eq!(report.violation.unwrap().index, alpha);
    }

    #[test]
    fn degree_one_of_composition_adds() {
        let a = alg();
        let delta = Arc::new(CoIdeal::uni(3));
        let d = generate_hs(&a, &delta, 1, 1).unwrap();
        let e = generate_hs(&a, &delta, 2, 1).unwrap();
        let de = d.compose(&e).unwrap();
        assert_eq!(de.component(1), d.component(1) + e.component(1));
        assert!(de.recheck().passed);
        let inv = d.inverse();
        assert_eq!(d.compose(&inv).unwrap(), HSDeriv::identity(a.clone(), delta.clone()));
        assert_eq!(inv.component(1), -d.component(1));
        let d1 = d.component(1);
        assert_eq!(inv.component(2), &d1 * &d1 - d.component(2));
        assert_eq!(de.inverse(), e.inverse().compose(&inv).unwrap());
    }

    #[test]
    fn external_product_coefficients() {
        let a = alg();
        let d = generate_hs(&a, &Arc::new(CoIdeal::uni(2)), 3, 1).unwrap();
        let e = generate_hs(&a, &Arc::new(CoIdeal::uni(2)), 4, 1).unwrap();
        let f = d.external_product(&e).unwrap();
        assert_eq!(f.at(&[1, 1]), d.component(1) * e.component(1));
        assert_eq!(f.at(&[2, 0]), d.component(2));
        assert!(f.recheck().passed);
        let id = HSDeriv::identity(a.clone(), Arc::new(CoIdeal::uni(2)));
        let embedded = d.external_product(&id).unwrap();
        assert!(embedded.support().all(|m| m.entries()[1] == 0));
    }

    #[test]
    fn restriction_hypothesis_controls_certification() {
        let a = alg();
        let delta = Arc::new(CoIdeal::boxed(&MultiIndex::from([2, 2])).unwrap());
        let d = generate_hs(&a, &delta, 5, 1).unwrap();
        // Generic D has support below (1,1), so the restriction is not trusted.
        assert!(d.support().any(|g| in_s(&MultiIndex::from([1, 1]), g)));
        assert!(!d.restrict_to_ray(&MultiIndex::from([1, 1])).unwrap().certified());
        // The lowest ray has an empty S-set.
        let e = d.restrict_to_ray(&MultiIndex::from([0, 1])).unwrap();
        assert!(e.certified());
        assert_eq!(e.component(2), d.at(&[0, 2]));
    }
}
