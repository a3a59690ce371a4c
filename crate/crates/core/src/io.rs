//! JSON documents for algebras, operators and series. Field entries are
//! decimal strings: residues for `F_p`, `"num/den"` for `Q`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteAlgebra;
use crate::coideal::{CoIdealDoc, MultiIndex};
use crate::error::{Error, Result};
use crate::field::{Field, FieldDoc};
use crate::hs::HSDeriv;
use crate::linop::LinOp;
use crate::series::{OpSeries, UnitSeries};

pub type Matrix = Vec<Vec<String>>;

/// `{"field": {"p": 5}, "exponents": [3, 3]}`, or a dense structure-constant
/// table `c[i][j][l]` with a unit index.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraDoc {
    pub field: FieldDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure_constants: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_index: Option<usize>,
}

impl AlgebraDoc {
    pub fn from_algebra(a: &FiniteAlgebra) -> Self {
        let field = a.field();
        if let Some(e) = a.exponents() {
            return AlgebraDoc {
                field: field.into(),
                exponents: Some(e.to_vec()),
                structure_constants: None,
                unit_index: None,
            };
        }
        let n = a.dim();
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = vec![field.zero(); n];
                        for (l, c) in a.basis_product(i, j) {
                            v[*l] = field.add(&v[*l], c);
                        }
                        v.iter().map(|c| field.format(c)).collect()
                    })
                    .collect()
            })
            .collect();
        AlgebraDoc {
            field: field.into(),
            exponents: None,
            structure_constants: Some(table),
            unit_index: Some(a.unit_index()),
        }
    }

    pub fn to_algebra(&self) -> Result<FiniteAlgebra> {
        let field = self.field.to_field()?;
        match (&self.exponents, &self.structure_constants) {
            (Some(e), None) => FiniteAlgebra::monomial_quotient(field, e),
            (None, Some(table)) => {
                let parsed = table
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|entry| entry.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                FiniteAlgebra::from_structure_constants(field, parsed, self.unit_index.unwrap_or(0))
            }
            _ => Err(Error::Parse(
                "algebra needs exactly one of \"exponents\" and \"structure_constants\"".into(),
            )),
        }
    }
}

fn matrix_of(op: &LinOp) -> Matrix {
    op.to_string_rows()
}

fn parse_matrix(field: Field, dim: usize, m: &Matrix) -> Result<LinOp> {
    if m.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: m.len() });
    }
    let rows = m
        .iter()
        .map(|row| {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            row.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    LinOp::from_rows(field, rows)
}

/// A single operator on an algebra: `{"algebra": ..., "matrix": [[...]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LinOpDoc {
    pub algebra: AlgebraDoc,
    pub matrix: Matrix,
}

impl LinOpDoc {
    pub fn new(algebra: &FiniteAlgebra, op: &LinOp) -> Self {
        LinOpDoc { algebra: AlgebraDoc::from_algebra(algebra), matrix: matrix_of(op) }
    }

    pub fn load(&self) -> Result<(Arc<FiniteAlgebra>, LinOp)> {
        let a = self.algebra.to_algebra()?;
        let op = parse_matrix(a.field(), a.dim(), &self.matrix)?;
        Ok((Arc::new(a), op))
    }
}

/// `{"algebra": ..., "coideal": ..., "coeffs": {"1,2": [[...]], ...}}`, with
/// `"certified"` present for HS-derivations.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesDoc {
    pub algebra: AlgebraDoc,
    pub coideal: CoIdealDoc,
    pub coeffs: BTreeMap<String, Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
}

impl SeriesDoc {
    pub fn from_series(s: &OpSeries) -> Self {
        SeriesDoc {
            algebra: AlgebraDoc::from_algebra(s.algebra()),
            coideal: s.coideal().to_doc(),
            coeffs: s.coeffs().iter().map(|(a, op)| (a.key(), matrix_of(op))).collect(),
            certified: None,
        }
    }

    pub fn from_hs(d: &HSDeriv) -> Self {
        SeriesDoc { certified: Some(d.certified()), ..Self::from_series(d) }
    }

    pub fn to_series(&self) -> Result<OpSeries> {
        let a = Arc::new(self.algebra.to_algebra()?);
        let delta = Arc::new(self.coideal.to_coideal()?);
        let mut s = OpSeries::zero(a.clone(), delta);
        for (key, m) in &self.coeffs {
            let alpha = MultiIndex::parse_key(key)?;
            s.set(alpha, parse_matrix(a.field(), a.dim(), m)?)?;
        }
        Ok(s)
    }

    /// Loads an HS-derivation. The Leibniz rule is always re-checked; a
    /// document claiming `"certified": true` that fails it is an error.
    pub fn to_hs(&self) -> Result<HSDeriv> {
        let s = self.to_series()?;
        if self.certified == Some(false) {
            return Ok(HSDeriv::uncertified(UnitSeries::new(s)?));
        }
        HSDeriv::certify(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coideal::CoIdeal;
    use crate::generate::generate_hs;

    #[test]
    fn series_round_trip() {
        for f in [Field::prime(5).unwrap(), Field::Rationals] {
            let a = Arc::new(FiniteAlgebra::monomial_quotient(f, &[3, 2]).unwrap());
            let delta = Arc::new(CoIdeal::total_degree(2, 3).unwrap());
            let d = generate_hs(&a, &delta, 11, 1).unwrap();
            let doc = SeriesDoc::from_hs(&d);
            let text = serde_json::to_string(&doc).unwrap();
            let back: SeriesDoc = serde_json::from_str(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.to_hs().unwrap(), d);
        }
    }

    #[test]
    fn structure_constant_algebra_round_trip() {
        let f = Field::prime(3).unwrap();
        let (z, o) = (f.zero(), f.one());
        // k[e]/(e^2 - e), basis (1, e).
        let table = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![z.clone(), o.clone()]],
        ];
        let a = FiniteAlgebra::from_structure_constants(f, table, 0).unwrap();
        let doc = AlgebraDoc::from_algebra(&a);
        assert_eq!(doc.to_algebra().unwrap(), a);
        let op = LinOp::identity(f, 2);
        let (a2, op2) = LinOpDoc::new(&a, &op).load().unwrap();
        assert_eq!((*a2).clone(), a);
        assert_eq!(op2, op);
    }

    #[test]
    fn parses_the_documented_forms() {
        let text = r#"{"algebra":{"field":{"p":3},"exponents":[3]},
            "coideal":{"q":1,"box":[1]},
            "coeffs":{"0":[["1","0","0"],["0","1","0"],["0","0","1"]],
                      "1":[["0","1","0"],["0","0","2"],["0","0","0"]]},
            "certified":true}"#;
        let doc: SeriesDoc = serde_json::from_str(text).unwrap();
        let d = doc.to_hs().unwrap();
        assert!(d.certified());
        assert_eq!(d.length().unwrap(), 1);
    }

    #[test]
    fn false_certificate_claims_are_caught() {
        let text = r#"{"algebra":{"field":{"p":5},"exponents":[3]},
            "coideal":{"q":1,"box":[1]},
            "coeffs":{"0":[["1","0","0"],["0","1","0"],["0","0","1"]],
                      "1":[["1","0","0"],["0","0","0"],["0","0","0"]]},
            "certified":true}"#;
        let doc: SeriesDoc = serde_json::from_str(text).unwrap();
        assert!(doc.to_hs().is_err());
        let bad = r#"{"algebra":{"field":{"p":4},"exponents":[3]},"matrix":[]}"#;
        let doc: LinOpDoc = serde_json::from_str(bad).unwrap();
        assert_eq!(doc.load().err(), Some(Error::NotPrime(4)));
    }
}
