//! Substitution maps `A[[s]]_Δ -> A[[t]]_∇` and their action on
//! HS-derivations.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::coideal::{CoIdeal, MultiIndex};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::hs::HSDeriv;
use crate::linop::LinOp;
use crate::ray_order::{ray_data, sorted_rays};
use crate::series::{same_algebra, same_coideal, OpSeries, UnitSeries};

/// A series with coefficients in `A`, keyed by target index.
pub type AlgSeries = BTreeMap<MultiIndex, Vec<Scalar>>;

/// Product of two `A`-valued series truncated to `target`.
pub(crate) fn alg_series_mul(
    alg: &FiniteAlgebra,
    target: &CoIdeal,
    a: &AlgSeries,
    b: &AlgSeries,
) -> AlgSeries {
    let mut out: AlgSeries = BTreeMap::new();
    for (g1, c1) in a {
        for (g2, c2) in b {
            let g = g1 + g2;
            if !target.contains(&g) {
                continue;
            }
            let slot = out.entry(g).or_insert_with(|| alg.zero_element());
            alg.mul_acc(slot, c1, c2);
        }
    }
    out.retain(|_, c| !alg.is_zero_element(c));
    out
}

/// An `A`-algebra map sending each source variable into the ideal of the
/// target variables.
#[derive(Clone, Debug)]
pub struct SubstitutionMap {
    algebra: Arc<FiniteAlgebra>,
    source: Arc<CoIdeal>,
    target: Arc<CoIdeal>,
    images: Vec<AlgSeries>,
    /// Exponents when every image is a coefficient-one monomial.
    monomial: Option<Vec<MultiIndex>>,
}

impl SubstitutionMap {
    /// General map with `A`-valued images. Checks that images have no
    /// constant term and that the map kills every index outside the source.
    pub fn new(
        algebra: Arc<FiniteAlgebra>,
        source: Arc<CoIdeal>,
        target: Arc<CoIdeal>,
        images: Vec<AlgSeries>,
    ) -> Result<Self> {
        if images.len() != source.q() {
            return Err(Error::LengthMismatch(source.q(), images.len()));
        }
        let zero = MultiIndex::zero(target.q());
        for (i, img) in images.iter().enumerate() {
            for (g, c) in img {
                if g.q() != target.q() {
                    return Err(Error::LengthMismatch(target.q(), g.q()));
                }
                if c.len() != algebra.dim() {
                    return Err(Error::DimensionMismatch { expected: algebra.dim(), found: c.len() });
                }
                if *g == zero && !algebra.is_zero_element(c) {
                    return Err(Error::ConstantTerm(i));
                }
            }
        }
        let images: Vec<AlgSeries> = images
            .into_iter()
            .map(|img| {
                img.into_iter()
                    .filter(|(g, c)| target.contains(g) && !algebra.is_zero_element(c))
                    .collect()
            })
            .collect();
        let map = SubstitutionMap { algebra, source, target, images, monomial: None };
        map.check_well_defined()?;
        Ok(map)
    }

    /// `s_i ↦ t^{γ_i}` with coefficient one.
    pub fn monomial(
        algebra: Arc<FiniteAlgebra>,
        source: Arc<CoIdeal>,
        target: Arc<CoIdeal>,
        exponents: Vec<MultiIndex>,
    ) -> Result<Self> {
        if exponents.len() != source.q() {
            return Err(Error::LengthMismatch(source.q(), exponents.len()));
        }
        let one = algebra.one_element();
        let mut images = Vec::with_capacity(exponents.len());
        for (i, g) in exponents.iter().enumerate() {
            if g.q() != target.q() {
                return Err(Error::LengthMismatch(target.q(), g.q()));
            }
            if g.is_zero() {
                return Err(Error::ConstantTerm(i));
            }
            let mut img = AlgSeries::new();
            if target.contains(g) {
                img.insert(g.clone(), one.clone());
            }
            images.push(img);
        }
        let map = SubstitutionMap { algebra, source, target, images, monomial: Some(exponents) };
        map.check_well_defined()?;
        Ok(map)
    }

    pub fn source(&self) -> &Arc<CoIdeal> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CoIdeal> {
        &self.target
    }

    pub fn images(&self) -> &[AlgSeries] {
        &self.images
    }

    pub fn monomial_exponents(&self) -> Option<&[MultiIndex]> {
        self.monomial.as_deref()
    }

    /// Every index just outside the source co-ideal must map to zero.
    fn check_well_defined(&self) -> Result<()> {
        let q = self.source.q();
        for delta in self.source.members() {
            for i in 0..q {
                let alpha = delta + &MultiIndex::unit(q, i);
                if self.source.contains(&alpha) {
                    continue;
                }
                let vanishes = match &self.monomial {
                    Some(exps) => !self.target.contains(&self.monomial_image(exps, &alpha)),
                    None => self.power(&alpha).is_empty(),
                };
                if !vanishes {
                    return Err(Error::Hypothesis(format!(
                        "substitution does not vanish on {alpha}, which lies outside the source"
                    )));
                }
            }
        }
        Ok(())
    }

    fn monomial_image(&self, exps: &[MultiIndex], alpha: &MultiIndex) -> MultiIndex {
        let mut out = MultiIndex::zero(self.target.q());
        for (a, g) in alpha.entries().iter().zip(exps) {
            if *a > 0 {
                out = &out + &g.scaled(*a);
            }
        }
        out
    }

    /// `φ(s^α)` truncated to the target.
    pub fn power(&self, alpha: &MultiIndex) -> AlgSeries {
        let mut acc = AlgSeries::new();
        acc.insert(MultiIndex::zero(self.target.q()), self.algebra.one_element());
        for (i, &a) in alpha.entries().iter().enumerate() {
            for _ in 0..a {
                acc = alg_series_mul(&self.algebra, &self.target, &acc, &self.images[i]);
                if acc.is_empty() {
                    return acc;
                }
            }
        }
        acc
    }

    fn check_input(&self, d: &HSDeriv) -> Result<()> {
        if !same_algebra(&self.algebra, d.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        if !same_coideal(&self.source, d.coideal()) {
            return Err(Error::CoIdealMismatch);
        }
        Ok(())
    }

    /// `φ • D = Σ_α φ(s^α) D_α`.
    pub fn act(&self, d: &HSDeriv) -> Result<HSDeriv> {
        self.check_input(d)?;
        let series = match &self.monomial {
            Some(exps) => {
                let mut acc: BTreeMap<MultiIndex, LinOp> = BTreeMap::new();
                for (alpha, op) in d.coeffs() {
                    let g = self.monomial_image(exps, alpha);
                    if !self.target.contains(&g) {
                        continue;
                    }
                    match acc.get_mut(&g) {
                        Some(slot) => *slot = &*slot + op,
                        None => {
                            acc.insert(g, op.clone());
                        }
                    }
                }
                OpSeries::from_coeffs(self.algebra.clone(), self.target.clone(), acc)?
            }
            None => self.act_series(d)?,
        };
        Ok(HSDeriv::closed(UnitSeries::new(series)?, d.certified()))
    }

    /// The action computed by expanding `φ(s^α)` and multiplying by
    /// coefficient operators, whatever the shape of the images.
    pub fn act_general(&self, d: &HSDeriv) -> Result<HSDeriv> {
        self.check_input(d)?;
        let series = self.act_series(d)?;
        Ok(HSDeriv::closed(UnitSeries::new(series)?, d.certified()))
    }

    fn act_series(&self, d: &HSDeriv) -> Result<OpSeries> {
        let mut acc: BTreeMap<MultiIndex, LinOp> = BTreeMap::new();
        for (alpha, op) in d.coeffs() {
            for (g, c) in self.power(alpha) {
                let term = self.algebra.mult_operator(&c)? * op;
                match acc.get_mut(&g) {
                    Some(slot) => *slot = &*slot + &term,
                    None => {
                        acc.insert(g, term);
                    }
                }
            }
        }
        OpSeries::from_coeffs(self.algebra.clone(), self.target.clone(), acc)
    }
}

/// `ψ_{β,Δ}: A[[μ]]_{m_β} -> A[[s]]_Δ`, `μ ↦ s^β`.
pub fn monomial_substitution(
    algebra: Arc<FiniteAlgebra>,
    beta: &MultiIndex,
    delta: Arc<CoIdeal>,
) -> Result<SubstitutionMap> {
    let m = ray_data(&delta, beta)?.multiplicity;
    SubstitutionMap::monomial(algebra, Arc::new(CoIdeal::uni(m)), delta, vec![beta.clone()])
}

/// `ψ_Δ: A[[t_1..t_C]]_∇ -> A[[s]]_Δ`, `t_i ↦ s^{β^i}` over the box
/// `∇ = {γ ≤ (m_1, ..., m_C)}` of ray multiplicities.
pub fn product_substitution(
    algebra: Arc<FiniteAlgebra>,
    delta: Arc<CoIdeal>,
) -> Result<SubstitutionMap> {
    let rays = sorted_rays(&delta)?;
    let bounds = rays
        .iter()
        .map(|b| ray_data(&delta, b).map(|d| d.multiplicity))
        .collect::<Result<Vec<_>>>()?;
    let nabla = Arc::new(CoIdeal::boxed(&MultiIndex::new(bounds))?);
    SubstitutionMap::monomial(algebra, nabla, delta, rays)
}
