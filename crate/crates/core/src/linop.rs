//! Dense `k`-linear endomorphisms of a finite-dimensional algebra.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// A square matrix over the base field. Column `j` is the image of basis
/// vector `j`, so entry `(i, j)` is the `b_i`-coordinate of `T(b_j)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinOp {
    field: Field,
    dim: usize,
    /// Row-major.
    data: Vec<Scalar>,
}

impl LinOp {
    pub fn zero(field: Field, dim: usize) -> Self {
        LinOp { field, dim, data: vec![field.zero(); dim * dim] }
    }

    pub fn identity(field: Field, dim: usize) -> Self {
        let mut m = Self::zero(field, dim);
        for i in 0..dim {
            m.data[i * dim + i] = field.one();
        }
        m
    }

    pub fn from_columns(field: Field, columns: &[Vec<Scalar>]) -> Self {
        let dim = columns.len();
        let mut m = Self::zero(field, dim);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim, "column {j} has the wrong length");
            for (i, v) in col.iter().enumerate() {
                m.data[i * dim + j] = v.clone();
            }
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend(row);
        }
        Ok(LinOp { field, dim, data })
    }

    pub fn random<R: Rng + ?Sized>(field: Field, dim: usize, rng: &mut R) -> Self {
        LinOp { field, dim, data: (0..dim * dim).map(|_| field.random(rng)).collect() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.data.chunks(self.dim.max(1))
    }

    /// Image of basis vector `j`.
    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.dim).map(|i| self.data[i * self.dim + j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| self.field.is_zero(c))
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.dim);
        let f = self.field;
        self.rows()
            .map(|row| {
                row.iter().zip(v).fold(f.zero(), |acc, (a, b)| {
                    if f.is_zero(a) || f.is_zero(b) {
                        acc
                    } else {
                        f.add(&acc, &f.mul(a, b))
                    }
                })
            })
            .collect()
    }

    fn check_same(&self, other: &LinOp) -> Result<()> {
        if self.field != other.field {
            return Err(Error::AlgebraMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinOp) -> Result<LinOp> {
        self.check_same(other)?;
        let n = self.dim;
        let data = match self.field {
            Field::Prime(p) => {
                let a: Vec<u64> = self.data.iter().map(Field::residue).collect();
                let b: Vec<u64> = other.data.iter().map(Field::residue).collect();
                let mut out = vec![0u64; n * n];
                for i in 0..n {
                    for k in 0..n {
                        let aik = a[i * n + k];
                        if aik == 0 {
                            continue;
                        }
                        let row = &b[k * n..(k + 1) * n];
                        let acc = &mut out[i * n..(i + 1) * n];
                        for (o, &bkj) in acc.iter_mut().zip(row) {
                            *o = (*o + aik * bkj) % p;
                        }
                    }
                }
                out.into_iter().map(Scalar::Residue).collect()
            }
            Field::Rationals => {
                let f = self.field;
                let mut out = vec![f.zero(); n * n];
                for i in 0..n {
                    for k in 0..n {
                        let aik = Field::rational(&self.data[i * n + k]);
                        if num_traits::Zero::is_zero(aik) {
                            continue;
                        }
                        for j in 0..n {
                            let bkj = Field::rational(&other.data[k * n + j]);
                            if num_traits::Zero::is_zero(bkj) {
                                continue;
                            }
                            if let Scalar::Rational(o) = &mut out[i * n + j] {
                                *o += aik * bkj;
                            }
                        }
                    }
                }
                out
            }
        };
        Ok(LinOp { field: self.field, dim: n, data })
    }

    fn zip_with(&self, other: &LinOp, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<LinOp> {
        self.check_same(other)?;
        Ok(LinOp {
            field: self.field,
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect(),
        })
    }

    pub fn try_add(&self, other: &LinOp) -> Result<LinOp> {
        let f = self.field;
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn try_sub(&self, other: &LinOp) -> Result<LinOp> {
        let f = self.field;
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, c: &Scalar) -> LinOp {
        let f = self.field;
        LinOp { field: f, dim: self.dim, data: self.data.iter().map(|a| f.mul(a, c)).collect() }
    }

    /// `[P, Q] = PQ - QP`.
    pub fn bracket(&self, other: &LinOp) -> Result<LinOp> {
        self.compose(other)?.try_sub(&other.compose(self)?)
    }

    pub fn pow(&self, k: u32) -> LinOp {
        let mut acc = LinOp::identity(self.field, self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Entries as canonical strings, row by row.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.rows().map(|r| r.iter().map(|c| self.field.format(c)).collect()).collect()
    }
}

impl fmt::Debug for LinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinOp[{}; ", self.field)?;
        for (i, row) in self.to_string_rows().iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

// Operator sugar; these panic on field or dimension mismatch.
macro_rules! binop {
    ($trait:ident, $method:ident, $call:ident) => {
        impl $trait<&LinOp> for &LinOp {
            type Output = LinOp;
            fn $method(self, rhs: &LinOp) -> LinOp {
                self.$call(rhs).expect("operator mismatch")
            }
        }
        impl $trait<LinOp> for LinOp {
            type Output = LinOp;
            fn $method(self, rhs: LinOp) -> LinOp {
                (&self).$call(&rhs).expect("operator mismatch")
            }
        }
        impl $trait<&LinOp> for LinOp {
            type Output = LinOp;
            fn $method(self, rhs: &LinOp) -> LinOp {
                (&self).$call(rhs).expect("operator mismatch")
            }
        }
        impl $trait<LinOp> for &LinOp {
            type Output = LinOp;
            fn $method(self, rhs: LinOp) -> LinOp {
                self.$call(&rhs).expect("operator mismatch")
            }
        }
    };
}

binop!(Mul, mul, compose);
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);

impl Neg for &LinOp {
    type Output = LinOp;
    fn neg(self) -> LinOp {
        let f = self.field;
        LinOp { field: f, dim: self.dim, data: self.data.iter().map(|a| f.neg(a)).collect() }
    }
}

impl Neg for LinOp {
    type Output = LinOp;
    fn neg(self) -> LinOp {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteAlgebra;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bracket_with_self_vanishes() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = LinOp::random(f, 4, &mut rng);
        assert!(p.bracket(&p).unwrap().is_zero());
        assert_eq!(LinOp::identity(f, 4).compose(&p).unwrap(), p);
    }

    #[test]
    fn mismatches_are_errors() {
        let f = Field::prime(5).unwrap();
        let a = LinOp::zero(f, 2);
        assert!(a.compose(&LinOp::zero(f, 3)).is_err());
        assert!(a.try_add(&LinOp::zero(Field::Rationals, 2)).is_err());
    }

    /// Entry-wise triple loop over generic scalars.
    fn naive_product(a: &LinOp, b: &LinOp) -> LinOp {
        let f = a.field();
        let n = a.dim();
        let mut out = LinOp::zero(f, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = f.zero();
                for k in 0..n {
                    acc = f.add(&acc, &f.mul(a.get(i, k), b.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    #[test]
    fn fast_product_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for field in [Field::prime(7).unwrap(), Field::Rationals] {
            for _ in 0..10 {
                let a = LinOp::random(field, 5, &mut rng);
                let b = LinOp::random(field, 5, &mut rng);
                assert_eq!(&a * &b, naive_product(&a, &b));
            }
        }
    }

    #[test]
    fn derivative_bracket_two_ways() {
        // Over F_5[x]/(x^3): D = x d/dx (a derivation), X = multiplication by x.
        // [D, X] is multiplication by D(x) = x.
        let f = Field::prime(5).unwrap();
        let alg = FiniteAlgebra::monomial_quotient(f, &[3]).unwrap();
        let mut two_x2 = alg.zero_element();
        two_x2[2] = f.from_i64(2);
        let d = LinOp::from_columns(f, &[alg.zero_element(), alg.basis_vector(1), two_x2]);
        let x = alg.mult_operator(&alg.basis_vector(1)).unwrap();
        let via_ops = d.bracket(&x).unwrap();
        let via_matrices = naive_product(&d, &x) - naive_product(&x, &d);
        assert_eq!(via_ops, via_matrices);
        assert_eq!(via_ops, alg.mult_operator(&d.apply(&alg.basis_vector(1))).unwrap());
    }
}
