//! Exact arithmetic for multi-variate Hasse–Schmidt derivations on
//! finite-dimensional algebras over `F_p` and `Q`.

pub mod algebra;
pub mod coideal;
pub mod decompose;
pub mod error;
pub mod field;
pub mod generate;
pub mod hs;
pub mod integrability;
pub mod io;
pub mod linop;
pub mod linsolve;
pub mod order;
pub mod ray_order;
pub mod series;
pub mod substitution;

pub use algebra::FiniteAlgebra;
pub use coideal::{CoIdeal, MultiIndex};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use generate::generate_hs;
pub use decompose::{
    boxtimes_decompose, boxtimes_form, decompose, peel_ray, ray_factor, recompose, tower_component,
    Decomposition, DecompositionCertificate,
};
pub use hs::{leibniz_check, HSDeriv, LeibnizReport};
pub use integrability::{
    bracket_integral, extend_one_step, is_m_integrable, p_power_integral, ray_corollary_check,
    BracketIntegral, IntegralCertificate, PowerIntegral, RayCorollaryReport,
};
pub use io::{AlgebraDoc, LinOpDoc, SeriesDoc};
pub use linop::LinOp;
pub use order::{lemma44_defect, order_leq, order_of, OrderReport};
pub use ray_order::{ray_compare, ray_data, sorted_rays, RayData};
pub use series::{ordered_compose, OpSeries, UnitSeries};
pub use substitution::{monomial_substitution, product_substitution, SubstitutionMap};
