//! Integrals of derivations: brackets, `p`-th powers, and a search oracle
//! for extending a derivation to a Hasse–Schmidt derivation.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::coideal::{CoIdeal, MultiIndex};
use crate::decompose::ray_factor;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::hs::HSDeriv;
use crate::linop::LinOp;
use crate::linsolve::solve;
use crate::ray_order::{in_s, is_primitive};
use crate::series::{same_algebra, OpSeries};

/// A length-`m` HS-derivation whose first component is `derivation`.
#[derive(Clone, Debug)]
pub struct IntegralCertificate {
    pub derivation: LinOp,
    pub length: u32,
    pub integral: HSDeriv,
    pub leibniz_ok: bool,
    pub component_one_ok: bool,
}

impl IntegralCertificate {
    fn new(derivation: LinOp, integral: HSDeriv) -> Result<Self> {
        let length = integral.length()?;
        let leibniz_ok = integral.recheck().passed;
        let component_one_ok = integral.component(1) == derivation;
        Ok(IntegralCertificate { derivation, length, integral, leibniz_ok, component_one_ok })
    }

    pub fn passed(&self) -> bool {
        self.leibniz_ok && self.component_one_ok
    }
}

fn univariate_pair(d: &HSDeriv, e: &HSDeriv) -> Result<u32> {
    let (m, n) = (d.length()?, e.length()?);
    if m != n {
        return Err(Error::LengthsDiffer(m as usize, n as usize));
    }
    if !same_algebra(d.algebra(), e.algebra()) {
        return Err(Error::AlgebraMismatch);
    }
    if !d.certified() || !e.certified() {
        return Err(Error::NotCertified);
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct BracketIntegral {
    /// `F = (D ⊠ E) ∘ (D* ⊠ E*)` over `box((m, m))`.
    pub product: HSDeriv,
    /// `F_{(r,0)} = F_{(0,r)} = 0` for all `r ≥ 1`.
    pub axes_vanish: bool,
    pub certificate: IntegralCertificate,
}

impl BracketIntegral {
    pub fn passed(&self) -> bool {
        self.axes_vanish && self.certificate.passed()
    }
}

/// A length-`m` integral of `[D_1, E_1]`: the factor on the ray `(1,1)` of
/// `(D ⊠ E) ∘ (D* ⊠ E*)`.
pub fn bracket_integral(d: &HSDeriv, e: &HSDeriv) -> Result<BracketIntegral> {
    let m = univariate_pair(d, e)?;
    if m == 0 {
        return Err(Error::Hypothesis("length must be at least 1".into()));
    }
    let f = d.external_product(e)?.compose(&d.inverse().external_product(&e.inverse())?)?;
    let axes_vanish = (1..=m).all(|r| f.at(&[r, 0]).is_zero() && f.at(&[0, r]).is_zero());
    let integral = ray_factor(&f, &MultiIndex::from([1, 1]))?;
    let bracket = d.component(1).bracket(&e.component(1))?;
    let certificate = IntegralCertificate::new(bracket, integral)?;
    Ok(BracketIntegral { product: f, axes_vanish, certificate })
}

#[derive(Clone, Debug)]
pub struct PowerIntegral {
    pub p: u64,
    pub alpha: u32,
    /// `(Id, E_1, ..., E_{p^{α+1}})` with `E = D^p` below the top index.
    pub power: HSDeriv,
    pub delta_p: LinOp,
    /// `E_n = 0` for `1 ≤ n < p`.
    pub low_vanish: bool,
    /// `E_p = D_1^p`.
    pub top_is_delta_p: bool,
    /// The convolution power and the binomial expansion agree below the
    /// top index, and the two evaluations of the top term agree.
    pub dual_route_agrees: bool,
    pub leibniz_ok: bool,
}

impl PowerIntegral {
    pub fn passed(&self) -> bool {
        self.low_vanish && self.top_is_delta_p && self.dual_route_agrees && self.leibniz_ok
    }
}

/// `Σ_{a_1+...+a_k = n, a_j > 0} D_{a_1} ∘ ... ∘ D_{a_k}`.
fn compositions_sum(comps: &[LinOp], k: u32, n: u32, field: Field, dim: usize) -> LinOp {
    if k == 0 {
        return if n == 0 { LinOp::identity(field, dim) } else { LinOp::zero(field, dim) };
    }
    let mut acc = LinOp::zero(field, dim);
    for a in 1..=n {
        if (a as usize) >= comps.len() {
            break;
        }
        if n - a < k - 1 {
            break;
        }
        acc = acc + &comps[a as usize] * compositions_sum(comps, k - 1, n - a, field, dim);
    }
    acc
}

/// Extends `E = D^p` from length `p^{α+1} - 1` to `p^{α+1}` by the sum
/// over index tuples avoiding the top index.
pub fn p_power_integral(d: &HSDeriv) -> Result<PowerIntegral> {
    let field = d.algebra().field();
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::NeedsPositiveCharacteristic);
    }
    let len = d.length()?;
    let top = len as u64 + 1;
    let mut alpha = 0u32;
    let mut pp = p;
    while pp < top {
        pp *= p;
        alpha += 1;
    }
    if pp != top {
        return Err(Error::BadPowerLength { length: len as usize, p });
    }
    if !d.certified() {
        return Err(Error::NotCertified);
    }
    let dim = d.algebra().dim();
    let comps: Vec<LinOp> = (0..=len).map(|n| d.component(n)).collect();

    // Convolution power over {0..len}.
    let mut power = d.series().clone();
    for _ in 1..p {
        power = power.mul(d.series())?;
    }
    // Binomial expansion.
    let mut dual_route_agrees = true;
    for n in 1..=len {
        let mut acc = LinOp::zero(field, dim);
        for k in 1..=p.min(n as u64) as u32 {
            let c = field.binomial(p, k as u64);
            if field.is_zero(&c) {
                continue;
            }
            acc = acc + compositions_sum(&comps, k, n, field, dim).scale(&c);
        }
        if acc != power.coeff_or_zero(&MultiIndex::new(vec![n])) {
            dual_route_agrees = false;
        }
    }

    // Top term, by dynamic programming over tuple prefixes:
    // S(k, r) = Σ_{i < top, i ≤ r} D_i ∘ S(k-1, r-i).
    let top = top as u32;
    let mut table: Vec<LinOp> = (0..=top)
        .map(|r| if r == 0 { LinOp::identity(field, dim) } else { LinOp::zero(field, dim) })
        .collect();
    for _ in 0..p {
        table = (0..=top)
            .map(|r| {
                let mut acc = LinOp::zero(field, dim);
                for i in 0..=r.min(top - 1).min(len) {
                    acc = acc + &comps[i as usize] * &table[(r - i) as usize];
                }
                acc
            })
            .collect();
    }
    let e_top = table[top as usize].clone();
    // Second evaluation: the convolution power of D extended by zero.
    let wide = Arc::new(CoIdeal::uni(top));
    let extended = OpSeries::from_coeffs(
        d.algebra().clone(),
        wide.clone(),
        d.coeffs().iter().map(|(a, op)| (a.clone(), op.clone())),
    )?;
    let mut ext_power = extended.clone();
    for _ in 1..p {
        ext_power = ext_power.mul(&extended)?;
    }
    if ext_power.coeff_or_zero(&MultiIndex::new(vec![top])) != e_top {
        dual_route_agrees = false;
    }

    let mut components: Vec<LinOp> =
        (1..=len).map(|n| power.coeff_or_zero(&MultiIndex::new(vec![n]))).collect();
    components.push(e_top);
    let delta_p = comps[1].pow(p as u32);
    let low_vanish = components[..(p as usize - 1)].iter().all(|c| c.is_zero());
    let top_is_delta_p = components[p as usize - 1] == delta_p;
    let mut s = OpSeries::identity(d.algebra().clone(), wide);
    for (n, op) in components.into_iter().enumerate() {
        s.set(MultiIndex::new(vec![n as u32 + 1]), op)?;
    }
    let (power, leibniz_ok) = match HSDeriv::certify(s.clone()) {
        Ok(h) => (h, true),
        Err(_) => (HSDeriv::uncertified(crate::series::UnitSeries::new(s)?), false),
    };
    Ok(PowerIntegral {
        p,
        alpha,
        power,
        delta_p,
        low_vanish,
        top_is_delta_p,
        dual_route_agrees,
        leibniz_ok,
    })
}

/// Linear equations `Σ coeff·x_var = rhs` over unknowns indexed densely.
struct System {
    field: Field,
    nvars: usize,
    rows: Vec<BTreeMap<usize, Scalar>>,
    rhs: Vec<Scalar>,
}

impl System {
    fn new(field: Field, nvars: usize) -> Self {
        System { field, nvars, rows: vec![], rhs: vec![] }
    }

    fn push(&mut self, row: BTreeMap<usize, Scalar>, rhs: Scalar) {
        let f = self.field;
        let row: BTreeMap<usize, Scalar> = row.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        if row.is_empty() && f.is_zero(&rhs) {
            return;
        }
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    fn solve(&self) -> Option<Vec<Scalar>> {
        let f = self.field;
        let dense: Vec<Vec<Scalar>> = self
            .rows
            .iter()
            .map(|row| {
                let mut v = vec![f.zero(); self.nvars];
                for (k, c) in row {
                    v[*k] = c.clone();
                }
                v
            })
            .collect();
        solve(f, &dense, &self.rhs, self.nvars)
    }
}

fn add_to(f: Field, row: &mut BTreeMap<usize, Scalar>, var: usize, c: &Scalar) {
    let slot = row.entry(var).or_insert_with(|| f.zero());
    *slot = f.add(slot, c);
}

/// Columns of each operator, `cols[k][j] = D_k(b_j)`.
fn columns(ops: &[LinOp]) -> Vec<Vec<Vec<Scalar>>> {
    ops.iter().map(|op| (0..op.dim()).map(|j| op.column(j)).collect()).collect()
}

/// Adds, for unknown `X` at variable offset `base`, the coefficients of
/// `X(b_i b_j) - X(b_i) b_j - b_i X(b_j)` in coordinate `r`.
fn leibniz_operator_terms(
    alg: &FiniteAlgebra,
    row: &mut BTreeMap<usize, Scalar>,
    base: usize,
    i: usize,
    j: usize,
    r: usize,
) {
    let f = alg.field();
    let n = alg.dim();
    for (l, c) in alg.basis_product(i, j) {
        add_to(f, row, base + r * n + l, c);
    }
    for t in 0..n {
        for (l, c) in alg.basis_product(t, j) {
            if *l == r {
                add_to(f, row, base + t * n + i, &f.neg(c));
            }
        }
        for (l, c) in alg.basis_product(i, t) {
            if *l == r {
                add_to(f, row, base + t * n + j, &f.neg(c));
            }
        }
    }
}

/// `Σ_{lo ≤ a ≤ hi} D_a(b_i) D_{k-a}(b_j)` with `cols` indexed by degree.
fn known_sum(
    alg: &FiniteAlgebra,
    cols: &[Vec<Vec<Scalar>>],
    k: usize,
    lo: usize,
    hi: usize,
    i: usize,
    j: usize,
) -> Vec<Scalar> {
    let mut acc = alg.zero_element();
    for a in lo..=hi {
        if a >= cols.len() || k - a >= cols.len() {
            continue;
        }
        alg.mul_acc(&mut acc, &cols[a][i], &cols[k - a][j]);
    }
    acc
}

fn unknown_to_linop(field: Field, n: usize, x: &[Scalar]) -> LinOp {
    let rows = (0..n).map(|r| x[r * n..(r + 1) * n].to_vec()).collect();
    LinOp::from_rows(field, rows).expect("square")
}

/// Solves for `D_k` given `D_0..D_{k-1}` (`known[a] = D_a`). With
/// `lookahead`, solves jointly for `(D_k, D_{k+1})` and returns the `D_k`
/// part, so that the chosen `D_k` admits a further extension.
fn solve_stage(alg: &FiniteAlgebra, known: &[LinOp], lookahead: bool) -> Option<LinOp> {
    let f = alg.field();
    let n = alg.dim();
    let k = known.len();
    let nn = n * n;
    let cols = columns(known);
    let mut sys = System::new(f, if lookahead { 2 * nn } else { nn });
    for i in 0..n {
        for j in i..n {
            // Degree k: L(X) = Σ_{0<a<k} D_a(b_i) D_{k-a}(b_j).
            let rhs = known_sum(alg, &cols, k, 1, k - 1, i, j);
            for r in 0..n {
                let mut row = BTreeMap::new();
                leibniz_operator_terms(alg, &mut row, 0, i, j, r);
                sys.push(row, rhs[r].clone());
            }
            if !lookahead {
                continue;
            }
            // Degree k+1: L(Y) - D_1(b_i) X(b_j) - X(b_i) D_1(b_j)
            //   = Σ_{1<a<k} D_a(b_i) D_{k+1-a}(b_j).
            let rhs = if k >= 3 { known_sum(alg, &cols, k + 1, 2, k - 1, i, j) } else { alg.zero_element() };
            let d1 = &cols[1];
            for r in 0..n {
                let mut row = BTreeMap::new();
                leibniz_operator_terms(alg, &mut row, nn, i, j, r);
                for t in 0..n {
                    for s in 0..n {
                        // D_1(b_i) X(b_j): coefficient of X[t][j] is Σ_s D1[s][i] c_{s t r}.
                        if !f.is_zero(&d1[i][s]) {
                            for (l, c) in alg.basis_product(s, t) {
                                if *l == r {
                                    add_to(f, &mut row, t * n + j, &f.neg(&f.mul(&d1[i][s], c)));
                                }
                            }
                        }
                        // X(b_i) D_1(b_j): coefficient of X[t][i] is Σ_s c_{t s r} D1[s][j].
                        if !f.is_zero(&d1[j][s]) {
                            for (l, c) in alg.basis_product(t, s) {
                                if *l == r {
                                    add_to(f, &mut row, t * n + i, &f.neg(&f.mul(&d1[j][s], c)));
                                }
                            }
                        }
                    }
                }
                sys.push(row, rhs[r].clone());
            }
        }
    }
    let x = sys.solve()?;
    Some(unknown_to_linop(f, n, &x[..nn]))
}

/// One more component `D_{m+1}` for a certified length-`m` derivation, or
/// `None` when the Leibniz system at degree `m+1` is inconsistent. The
/// solution has every free unknown set to zero.
pub fn extend_one_step(d: &HSDeriv) -> Result<Option<LinOp>> {
    let m = d.length()?;
    if !d.certified() {
        return Err(Error::NotCertified);
    }
    let known: Vec<LinOp> = (0..=m).map(|a| d.component(a)).collect();
    Ok(solve_stage(d.algebra(), &known, false))
}

/// Searches for a length-`m` integral of `delta`, extending one component
/// at a time with one stage of lookahead. `None` means no extension was
/// found along this path; for `m ≤ 3` that is a proof of non-integrability.
pub fn is_m_integrable(
    algebra: &Arc<FiniteAlgebra>,
    delta: &LinOp,
    m: u32,
) -> Result<Option<IntegralCertificate>> {
    if !algebra.is_k_derivation(delta) {
        return Err(Error::NotADerivation);
    }
    if m == 0 {
        return Err(Error::Hypothesis("m must be at least 1".into()));
    }
    let mut known = vec![LinOp::identity(algebra.field(), algebra.dim()), delta.clone()];
    for k in 2..=m {
        match solve_stage(algebra, &known, k < m) {
            Some(x) => known.push(x),
            None => return Ok(None),
        }
    }
    let integral = HSDeriv::univariate(algebra.clone(), known[1..].to_vec())?;
    Ok(Some(IntegralCertificate::new(delta.clone(), integral)?))
}

#[derive(Clone, Debug)]
pub struct RayCorollaryReport {
    /// The factor on `α`, truncated to length `d p^s`.
    pub factor: HSDeriv,
    /// `E_r = 0` for `1 ≤ r < d` and `E_d = D_{dα}`.
    pub factor_matches: bool,
    pub certificate: Option<IntegralCertificate>,
}

impl RayCorollaryReport {
    pub fn passed(&self) -> bool {
        self.factor_matches && self.certificate.as_ref().is_some_and(|c| c.passed())
    }
}

/// For `D` vanishing below the ray of `α` up to `dα` and on `α, ..., (d-1)α`,
/// exhibits a `p^s`-integral of `D_{dα}`.
pub fn ray_corollary_check(d: &HSDeriv, alpha: &MultiIndex, dd: u32, s: u32) -> Result<RayCorollaryReport> {
    let field = d.algebra().field();
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::NeedsPositiveCharacteristic);
    }
    if !is_primitive(alpha) {
        return Err(Error::Hypothesis(format!("{alpha} is not primitive")));
    }
    if dd == 0 || s == 0 {
        return Err(Error::Hypothesis("d and s must be at least 1".into()));
    }
    let len = dd as u64 * p.pow(s);
    let far = alpha.scaled(len as u32);
    if !d.coideal().contains(&far) {
        return Err(Error::NotMember(far));
    }
    let d_alpha = alpha.scaled(dd);
    if let Some(bad) = d
        .support()
        .find(|g| in_s(alpha, g) && g.leq(&d_alpha).unwrap_or(false))
    {
        return Err(Error::SupportHypothesis(bad.clone()));
    }
    for r in 1..dd {
        let g = alpha.scaled(r);
        if d.coeff(&g).is_some() {
            return Err(Error::SupportHypothesis(g));
        }
    }
    let factor = ray_factor(d, alpha)?.truncate(&Arc::new(CoIdeal::uni(len as u32)))?;
    let target = d.coeff_or_zero(&d_alpha);
    let factor_matches =
        (1..dd).all(|r| factor.component(r).is_zero()) && factor.component(dd) == target;
    let certificate = is_m_integrable(d.algebra(), &target, p.pow(s) as u32)?;
    Ok(RayCorollaryReport { factor, factor_matches, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate_hs;

    fn alg(p: u64, exps: &[u32]) -> Arc<FiniteAlgebra> {
        let f = if p == 0 { Field::Rationals } else { Field::prime(p).unwrap() };
        Arc::new(FiniteAlgebra::monomial_quotient(f, exps).unwrap())
    }

    #[test]
    fn bracket_of_self_has_zero_first_component() {
        let a = alg(5, &[3, 3]);
        let d = generate_hs(&a, &Arc::new(CoIdeal::uni(2)), 1, 1).unwrap();
        let b = bracket_integral(&d, &d).unwrap();
        assert!(b.passed());
        assert!(b.certificate.integral.component(1).is_zero());
    }

    #[test]
    fn bracket_lengths_must_match() {
        let a = alg(5, &[3, 3]);
        let d = generate_hs(&a, &Arc::new(CoIdeal::uni(2)), 1, 1).unwrap();
        let e = generate_hs(&a, &Arc::new(CoIdeal::uni(3)), 2, 1).unwrap();
        assert_eq!(bracket_integral(&d, &e).err(), Some(Error::LengthsDiffer(2, 3)));
    }

    #[test]
    fn p_power_in_characteristic_two() {
        let a = alg(2, &[2, 2]);
        let d = generate_hs(&a, &Arc::new(CoIdeal::uni(3)), 5, 1).unwrap();
        let pw = p_power_integral(&d).unwrap();
        assert!(pw.passed(), "{pw:?}");
        assert_eq!(pw.power.length().unwrap(), 4);
        assert!(pw.power.component(1).is_zero());
        assert_eq!(pw.alpha, 1);
    }

    #[test]
    fn p_power_rejects_bad_input() {
        let a = alg(2, &[2, 2]);
        let d = generate_hs(&a, &Arc::new(CoIdeal::uni(2)), 5, 1).unwrap();
        assert!(matches!(p_power_integral(&d), Err(Error::BadPowerLength { .. })));
        let q = alg(0, &[2]);
        let d = generate_hs(&q, &Arc::new(CoIdeal::uni(1)), 5, 1).unwrap();
        assert_eq!(p_power_integral(&d).err(), Some(Error::NeedsPositiveCharacteristic));
    }

    #[test]
    fn extension_over_rationals_always_succeeds() {
        let a = alg(0, &[3, 2]);
        let mut d = generate_hs(&a, &Arc::new(CoIdeal::uni(1)), 3, 1).unwrap();
        for _ in 0..3 {
            let next = extend_one_step(&d).unwrap().expect("char 0 extends");
            let mut comps: Vec<LinOp> = (1..=d.length().unwrap()).map(|n| d.component(n)).collect();
            comps.push(next);
            d = HSDeriv::univariate(a.clone(), comps).unwrap();
        }
    }

    #[test]
    fn identity_extends_by_zero() {
        let a = alg(3, &[3]);
        let id = HSDeriv::identity(a.clone(), Arc::new(CoIdeal::uni(2)));
        assert!(extend_one_step(&id).unwrap().unwrap().is_zero());
        let zero = LinOp::zero(a.field(), a.dim());
        let cert = is_m_integrable(&a, &zero, 4).unwrap().unwrap();
        assert!(cert.passed());
        assert!(cert.integral.is_identity());
    }

    #[test]
    fn plain_partial_is_not_two_integrable_in_characteristic_two() {
        // d/dx on F_2[x]/(x^2): a D_2 would need D_2(x^2) = D_1(x)^2 = 1,
        // but x^2 = 0.
        let a = alg(2, &[2]);
        let f = a.field();
        let dx = LinOp::from_columns(f, &[a.zero_element(), a.basis_vector(0)]);
        assert!(a.is_k_derivation(&dx));
        assert!(is_m_integrable(&a, &dx, 2).unwrap().is_none());
        assert!(is_m_integrable(&a, &dx, 1).unwrap().is_some());
    }

    #[test]
    fn non_derivations_are_rejected() {
        let a = alg(3, &[3]);
        let id = LinOp::identity(a.field(), a.dim());
        assert_eq!(is_m_integrable(&a, &id, 2).err(), Some(Error::NotADerivation));
    }
}
