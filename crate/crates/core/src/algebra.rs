//! Finite-dimensional commutative algebras given by structure constants.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linop::LinOp;

/// Default bound on `dim A` for monomial quotients.
pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// A commutative, associative, unital algebra over a [`Field`], stored as a
/// sparse multiplication table on a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    field: Field,
    dim: usize,
    /// Exponent vectors labelling the basis (monomials for quotients).
    basis_labels: Vec<Vec<u32>>,
    /// `table[i * dim + j]` lists the nonzero `(l, c[i][j][l])`.
    table: Vec<Vec<(usize, Scalar)>>,
    unit_index: usize,
    generators: Vec<usize>,
    exponents: Option<Vec<u32>>,
}

impl FiniteAlgebra {
    /// `k[x_1..x_n] / (x_1^{e_1}, ..., x_n^{e_n})` with the monomial basis,
    /// `x_1` varying fastest.
    pub fn monomial_quotient(field: Field, exponents: &[u32]) -> Result<Self> {
        Self::monomial_quotient_capped(field, exponents, DEFAULT_DIMENSION_CAP)
    }

    pub fn monomial_quotient_capped(field: Field, exponents: &[u32], cap: usize) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::StructureConstants("no variables".into()));
        }
        if let Some(index) = exponents.iter().position(|&e| e == 0) {
            return Err(Error::ZeroExponent { index });
        }
        let dim128: u128 = exponents.iter().map(|&e| e as u128).product();
        if dim128 > cap as u128 {
            return Err(Error::DimensionCap { dim: dim128, cap });
        }
        let dim = dim128 as usize;

        let basis_labels: Vec<Vec<u32>> = (0..dim).map(|i| decode(i, exponents)).collect();
        let one = field.one();
        let mut table = Vec::with_capacity(dim * dim);
        for a in &basis_labels {
            for b in &basis_labels {
                let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let entry = encode(&sum, exponents)
                    .map(|l| vec![(l, one.clone())])
                    .unwrap_or_default();
                table.push(entry);
            }
        }
        let generators = exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e >= 2)
            .map(|(v, _)| {
                let mut label = vec![0; exponents.len()];
                label[v] = 1;
                encode(&label, exponents).expect("x_v survives when e_v >= 2")
            })
            .collect();
        let alg = FiniteAlgebra {
            field,
            dim,
            basis_labels,
            table,
            unit_index: 0,
            generators,
            exponents: Some(exponents.to_vec()),
        };
        // Monomial tables are associative by construction; the O(dim^3)
        // check only runs in debug builds.
        debug_assert!(dim > 64 || alg.check_axioms().is_ok());
        Ok(alg)
    }

    /// Builds an algebra from a dense table `c[i][j][l]` and checks
    /// commutativity, associativity and the unit eagerly.
    pub fn from_structure_constants(
        field: Field,
        constants: Vec<Vec<Vec<Scalar>>>,
        unit_index: usize,
    ) -> Result<Self> {
        let dim = constants.len();
        if dim == 0 {
            return Err(Error::StructureConstants("empty basis".into()));
        }
        if unit_index >= dim {
            return Err(Error::StructureConstants("unit index out of range".into()));
        }
        let mut table = Vec::with_capacity(dim * dim);
        for row in &constants {
            if row.len() != dim {
                return Err(Error::StructureConstants("table is not dim x dim x dim".into()));
            }
            for entry in row {
                if entry.len() != dim {
                    return Err(Error::StructureConstants("table is not dim x dim x dim".into()));
                }
                table.push(
                    entry
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !field.is_zero(c))
                        .map(|(l, c)| (l, c.clone()))
                        .collect(),
                );
            }
        }
        let basis_labels = (0..dim)
            .map(|i| {
                let mut v = vec![0; dim];
                v[i] = 1;
                v
            })
            .collect();
        let alg = FiniteAlgebra {
            field,
            dim,
            basis_labels,
            table,
            unit_index,
            generators: (0..dim).filter(|&i| i != unit_index).collect(),
            exponents: None,
        };
        alg.check_axioms()?;
        Ok(alg)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.dim;
        let f = self.field;
        // Sparse linear combination of basis products.
        let combine = |terms: &[(usize, Scalar)], other: usize, left: bool| {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (l, c) in terms {
                let prod = if left {
                    self.basis_product(*l, other)
                } else {
                    self.basis_product(other, *l)
                };
                for (t, d) in prod {
                    let e = acc.entry(*t).or_insert_with(|| f.zero());
                    *e = f.add(e, &f.mul(c, d));
                }
            }
            acc.retain(|_, v| !f.is_zero(v));
            acc
        };
        let as_map = |terms: &[(usize, Scalar)]| {
            let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (l, c) in terms {
                let e = m.entry(*l).or_insert_with(|| f.zero());
                *e = f.add(e, c);
            }
            m.retain(|_, v| !f.is_zero(v));
            m
        };
        for i in 0..n {
            for j in 0..n {
                if as_map(self.basis_product(i, j)) != as_map(self.basis_product(j, i)) {
                    return Err(Error::StructureConstants(format!("b{i} b{j} != b{j} b{i}")));
                }
            }
            if as_map(self.basis_product(self.unit_index, i)) != as_map(&[(i, f.one())]) {
                return Err(Error::StructureConstants(format!("unit fails on b{i}")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // (b_i b_j) b_k against b_i (b_j b_k)
                    let left = combine(self.basis_product(i, j), k, true);
                    let right = combine(self.basis_product(j, k), i, false);
                    if left != right {
                        return Err(Error::StructureConstants(format!(
                            "(b{i} b{j}) b{k} != b{i} (b{j} b{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_labels(&self) -> &[Vec<u32>] {
        &self.basis_labels
    }

    pub fn unit_index(&self) -> usize {
        self.unit_index
    }

    /// Basis indices of the algebra generators `x_1, ..., x_n` (generators
    /// that vanish, `e_i = 1`, are omitted).
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// The exponents `e_i` when this is a monomial quotient.
    pub fn exponents(&self) -> Option<&[u32]> {
        self.exponents.as_deref()
    }

    /// Index of the monomial `x^a` if it is a nonzero basis element.
    pub fn monomial_index(&self, a: &[u32]) -> Option<usize> {
        self.exponents.as_deref().and_then(|e| encode(a, e))
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim + j]
    }

    pub fn zero_element(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim]
    }

    pub fn one_element(&self) -> Vec<Scalar> {
        self.basis_vector(self.unit_index)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero_element();
        v[i] = self.field.one();
        v
    }

    pub fn is_zero_element(&self, a: &[Scalar]) -> bool {
        a.iter().all(|c| self.field.is_zero(c))
    }

    /// Product of two coordinate vectors.
    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let mut out = self.zero_element();
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if f.is_zero(bj) {
                    continue;
                }
                let ab = f.mul(ai, bj);
                for (l, c) in self.basis_product(i, j) {
                    out[*l] = f.add(&out[*l], &f.mul(&ab, c));
                }
            }
        }
        out
    }

    /// Adds `a * b` into `acc`.
    pub(crate) fn mul_acc(&self, acc: &mut [Scalar], a: &[Scalar], b: &[Scalar]) {
        let f = self.field;
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if f.is_zero(bj) {
                    continue;
                }
                let ab = f.mul(ai, bj);
                for (l, c) in self.basis_product(i, j) {
                    acc[*l] = f.add(&acc[*l], &f.mul(&ab, c));
                }
            }
        }
    }

    pub fn add(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, y)).collect()
    }

    /// The operator `x -> a x`.
    pub fn mult_operator(&self, a: &[Scalar]) -> Result<LinOp> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: a.len() });
        }
        let columns: Vec<Vec<Scalar>> =
            (0..self.dim).map(|j| self.mul(a, &self.basis_vector(j))).collect();
        Ok(LinOp::from_columns(self.field, &columns))
    }

    /// True iff `T(ab) = T(a) b + a T(b)` on all basis pairs.
    pub fn is_k_derivation(&self, t: &LinOp) -> bool {
        if t.dim() != self.dim || t.field() != self.field {
            return false;
        }
        let images: Vec<Vec<Scalar>> = (0..self.dim).map(|j| t.column(j)).collect();
        for i in 0..self.dim {
            for j in i..self.dim {
                let prod = self.mul(&self.basis_vector(i), &self.basis_vector(j));
                let lhs = t.apply(&prod);
                let mut rhs = self.mul(&images[i], &self.basis_vector(j));
                self.mul_acc(&mut rhs, &self.basis_vector(i), &images[j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

fn decode(mut index: usize, exponents: &[u32]) -> Vec<u32> {
    exponents
        .iter()
        .map(|&e| {
            let a = (index % e as usize) as u32;
            index /= e as usize;
            a
        })
        .collect()
}

fn encode(a: &[u32], exponents: &[u32]) -> Option<usize> {
    if a.len() != exponents.len() {
        return None;
    }
    let mut index = 0usize;
    for (&ai, &e) in a.iter().zip(exponents).rev() {
        if ai >= e {
            return None;
        }
        index = index * e as usize + ai as usize;
    }
    Some(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    #[test]
    fn two_variable_basis_order() {
        let a = FiniteAlgebra::monomial_quotient(f5(), &[3, 3]).unwrap();
        assert_eq!(a.dim(), 9);
        let labels: Vec<Vec<u32>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![2, 0],
            vec![0, 1],
            vec![1, 1],
            vec![2, 1],
            vec![0, 2],
            vec![1, 2],
            vec![2, 2],
        ];
        assert_eq!(a.basis_labels(), &labels[..]);
        assert_eq!(a.generators(), &[1, 3]);
    }

    #[test]
    fn exponent_one_gives_the_field() {
        let a = FiniteAlgebra::monomial_quotient(Field::Rationals, &[1]).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(a.generators().is_empty());
    }

    #[test]
    fn truncation_rule() {
        let f2 = Field::prime(2).unwrap();
        let a = FiniteAlgebra::monomial_quotient(f2, &[4]).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(a.basis_product(3, 1).is_empty());
        assert_eq!(a.basis_product(2, 1), &[(3, f2.one())]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            FiniteAlgebra::monomial_quotient(f5(), &[3, 0]),
            Err(Error::ZeroExponent { index: 1 })
        );
        assert!(matches!(
            FiniteAlgebra::monomial_quotient(f5(), &[100, 100]),
            Err(Error::DimensionCap { .. })
        ));
        assert!(FiniteAlgebra::monomial_quotient_capped(f5(), &[100, 100], 10_000).is_ok());
    }

    #[test]
    fn structure_constants_are_validated() {
        let f = f5();
        let (z, o) = (f.zero(), f.one());
        // k[e]/(e^2 - e) is fine.
        let ok = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![z.clone(), o.clone()]],
        ];
        assert!(FiniteAlgebra::from_structure_constants(f, ok, 0).is_ok());
        // b1 b0 = 0 but b0 b1 = b1: not commutative, and b0 is no unit.
        let bad = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), z.clone()], vec![z.clone(), o.clone()]],
        ];
        assert!(FiniteAlgebra::from_structure_constants(f, bad, 0).is_err());
    }

    #[test]
    fn mult_operator_examples() {
        let f = f5();
        let a = FiniteAlgebra::monomial_quotient(f, &[3]).unwrap();
        assert_eq!(a.mult_operator(&a.one_element()).unwrap(), LinOp::identity(f, 3));
        assert_eq!(a.mult_operator(&a.zero_element()).unwrap(), LinOp::zero(f, 3));
        let x = a.mult_operator(&a.basis_vector(1)).unwrap();
        assert_eq!(x.column(0), a.basis_vector(1));
        assert_eq!(x.column(1), a.basis_vector(2));
        assert_eq!(x.column(2), a.zero_element());
        assert!(a.mult_operator(&[f.one()]).is_err());
    }

    #[test]
    fn derivation_predicate() {
        let f = f5();
        let a = FiniteAlgebra::monomial_quotient(f, &[3, 3]).unwrap();
        assert!(a.is_k_derivation(&LinOp::zero(f, 9)));
        assert!(!a.is_k_derivation(&LinOp::identity(f, 9)));
        // d/dx: x^i y^j -> i x^{i-1} y^j
        let mut cols = Vec::new();
        for label in a.basis_labels() {
            let mut v = a.zero_element();
            if label[0] > 0 {
                let idx = a.monomial_index(&[label[0] - 1, label[1]]).unwrap();
                v[idx] = f.from_i64(label[0] as i64);
            }
            cols.push(v);
        }
        // In F_5[x]/(x^3), d/dx is not a derivation: d(x^2 * x) = d(0) = 0
        // but 2x * x + x^2 * 1 = 3x^2.
        assert!(!a.is_k_derivation(&LinOp::from_columns(f, &cols)));
        // x d/dx is one: it preserves the ideal (x^3).
        let xdx = a.mult_operator(&a.basis_vector(1)).unwrap() * LinOp::from_columns(f, &cols);
        assert!(a.is_k_derivation(&xdx));
    }
}
