//! Truncated power series with operator coefficients, `End_k(A)[[s]]_Δ`.

use std::collections::BTreeMap;
use std::ops::Deref;
use std::sync::Arc;

use crate::algebra::FiniteAlgebra;
use crate::coideal::{CoIdeal, MultiIndex};
use crate::error::{Error, Result};
use crate::linop::LinOp;

/// A series `Σ_{α ∈ Δ} r_α s^α`. Only nonzero coefficients are stored.
#[derive(Clone, Debug)]
pub struct OpSeries {
    algebra: Arc<FiniteAlgebra>,
    coideal: Arc<CoIdeal>,
    coeffs: BTreeMap<MultiIndex, LinOp>,
}

pub(crate) fn same_algebra(a: &Arc<FiniteAlgebra>, b: &Arc<FiniteAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn same_coideal(a: &Arc<CoIdeal>, b: &Arc<CoIdeal>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for OpSeries {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && same_coideal(&self.coideal, &other.coideal)
            && self.coeffs == other.coeffs
    }
}

impl Eq for OpSeries {}

impl OpSeries {
    pub fn zero(algebra: Arc<FiniteAlgebra>, coideal: Arc<CoIdeal>) -> Self {
        OpSeries { algebra, coideal, coeffs: BTreeMap::new() }
    }

    /// The unit `𝕀`: identity at 0 and nothing else.
    pub fn identity(algebra: Arc<FiniteAlgebra>, coideal: Arc<CoIdeal>) -> Self {
        let mut s = Self::zero(algebra, coideal);
        let q = s.coideal.q();
        let id = LinOp::identity(s.algebra.field(), s.algebra.dim());
        s.coeffs.insert(MultiIndex::zero(q), id);
        s
    }

    pub fn from_coeffs(
        algebra: Arc<FiniteAlgebra>,
        coideal: Arc<CoIdeal>,
        coeffs: impl IntoIterator<Item = (MultiIndex, LinOp)>,
    ) -> Result<Self> {
        let mut s = Self::zero(algebra, coideal);
        for (alpha, op) in coeffs {
            s.set(alpha, op)?;
        }
        Ok(s)
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn coideal(&self) -> &Arc<CoIdeal> {
        &self.coideal
    }

    /// Stored (nonzero) coefficients in graded-lex order.
    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, LinOp> {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Option<&LinOp> {
        self.coeffs.get(alpha)
    }

    /// The coefficient at `α`, materializing zero.
    pub fn coeff_or_zero(&self, alpha: &MultiIndex) -> LinOp {
        self.coeffs
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| LinOp::zero(self.algebra.field(), self.algebra.dim()))
    }

    /// Sets a coefficient; zero operators are dropped.
    pub fn set(&mut self, alpha: MultiIndex, op: LinOp) -> Result<()> {
        if !self.coideal.contains(&alpha) {
            return Err(Error::NotMember(alpha));
        }
        if op.dim() != self.algebra.dim() {
            return Err(Error::DimensionMismatch { expected: self.algebra.dim(), found: op.dim() });
        }
        if op.field() != self.algebra.field() {
            return Err(Error::AlgebraMismatch);
        }
        if op.is_zero() {
            self.coeffs.remove(&alpha);
        } else {
            self.coeffs.insert(alpha, op);
        }
        Ok(())
    }

    pub fn support(&self) -> impl Iterator<Item = &MultiIndex> {
        self.coeffs.keys()
    }

    pub fn is_unit(&self) -> bool {
        let id = LinOp::identity(self.algebra.field(), self.algebra.dim());
        self.coeffs.get(&MultiIndex::zero(self.coideal.q())) == Some(&id)
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.len() == 1 && self.is_unit()
    }

    fn check_compatible(&self, other: &OpSeries) -> Result<()> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch);
        }
        if !same_coideal(&self.coideal, &other.coideal) {
            return Err(Error::CoIdealMismatch);
        }
        Ok(())
    }

    /// Cauchy product; indices leaving `Δ` are discarded.
    pub fn mul(&self, other: &OpSeries) -> Result<OpSeries> {
        self.check_compatible(other)?;
        let mut acc: BTreeMap<MultiIndex, LinOp> = BTreeMap::new();
        for (beta, d) in &self.coeffs {
            for (gamma, e) in &other.coeffs {
                let alpha = beta + gamma;
                if !self.coideal.contains(&alpha) {
                    continue;
                }
                let prod = d * e;
                match acc.get_mut(&alpha) {
                    Some(slot) => *slot = &*slot + &prod,
                    None => {
                        acc.insert(alpha, prod);
                    }
                }
            }
        }
        acc.retain(|_, op| !op.is_zero());
        Ok(OpSeries { algebra: self.algebra.clone(), coideal: self.coideal.clone(), coeffs: acc })
    }

    /// `r*` by the graded recursion `r*_α = -Σ_{β ≠ 0} r_β r*_{α-β}`,
    /// indices processed in graded-lex order.
    pub fn inverse(&self) -> Result<OpSeries> {
        if !self.is_unit() {
            return Err(Error::NotUnit);
        }
        let zero = MultiIndex::zero(self.coideal.q());
        let mut inv: BTreeMap<MultiIndex, LinOp> = BTreeMap::new();
        inv.insert(zero.clone(), self.coeffs[&zero].clone());
        for alpha in self.coideal.members().iter().skip(1) {
            let mut acc: Option<LinOp> = None;
            for (beta, r) in self.coeffs.range(..=alpha.clone()) {
                if beta.is_zero() {
                    continue;
                }
                let Some(rest) = alpha.checked_sub(beta) else { continue };
                let Some(tail) = inv.get(&rest) else { continue };
                let term = r * tail;
                acc = Some(match acc {
                    Some(a) => a + term,
                    None => term,
                });
            }
            if let Some(a) = acc {
                let neg = -a;
                if !neg.is_zero() {
                    inv.insert(alpha.clone(), neg);
                }
            }
        }
        Ok(OpSeries { algebra: self.algebra.clone(), coideal: self.coideal.clone(), coeffs: inv })
    }

    /// Restriction to a smaller co-ideal.
    pub fn truncate(&self, target: &Arc<CoIdeal>) -> Result<OpSeries> {
        if !target.is_subset_of(&self.coideal) {
            return Err(Error::NotSubCoIdeal);
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(a, _)| target.contains(a))
            .map(|(a, op)| (a.clone(), op.clone()))
            .collect();
        Ok(OpSeries { algebra: self.algebra.clone(), coideal: target.clone(), coeffs })
    }

    /// Keeps the coefficients whose index satisfies `keep`, over the same
    /// co-ideal.
    pub fn filtered(&self, keep: impl Fn(&MultiIndex) -> bool) -> OpSeries {
        let coeffs =
            self.coeffs.iter().filter(|(a, _)| keep(a)).map(|(a, op)| (a.clone(), op.clone())).collect();
        OpSeries { algebra: self.algebra.clone(), coideal: self.coideal.clone(), coeffs }
    }
}

/// A series whose coefficient at 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitSeries(OpSeries);

impl UnitSeries {
    pub fn new(series: OpSeries) -> Result<Self> {
        if !series.is_unit() {
            return Err(Error::NotUnit);
        }
        Ok(UnitSeries(series))
    }

    pub fn identity(algebra: Arc<FiniteAlgebra>, coideal: Arc<CoIdeal>) -> Self {
        UnitSeries(OpSeries::identity(algebra, coideal))
    }

    pub fn mul(&self, other: &UnitSeries) -> Result<UnitSeries> {
        self.0.mul(&other.0).map(UnitSeries)
    }

    pub fn inverse(&self) -> UnitSeries {
        UnitSeries(self.0.inverse().expect("unit series invert"))
    }

    pub fn truncate(&self, target: &Arc<CoIdeal>) -> Result<UnitSeries> {
        self.0.truncate(target).map(UnitSeries)
    }

    pub fn into_inner(self) -> OpSeries {
        self.0
    }
}

impl Deref for UnitSeries {
    type Target = OpSeries;
    fn deref(&self) -> &OpSeries {
        &self.0
    }
}

/// Left-to-right product `r_1 ∘ ... ∘ r_m`; the empty family gives `𝕀`.
pub fn ordered_compose(
    algebra: Arc<FiniteAlgebra>,
    coideal: Arc<CoIdeal>,
    family: &[UnitSeries],
) -> Result<UnitSeries> {
    let mut acc = UnitSeries::identity(algebra, coideal);
    for r in family {
        acc = acc.mul(r)?;
    }
    Ok(acc)
}
