//! Exact exterior algebra on a finite set of named 1-form generators.
//!
//! Conventions used throughout the crate:
//!
//! * `v ∧ w = v ⊗ w − w ⊗ v`, so `(dx1∧dx2)(e1, e2) = 1`.
//! * Interior products contract the first slot; a multivector
//!   `v₁∧…∧vₖ` contracts `v₁` first, giving `f(v₁,…,vₖ,·)`.
//! * Complex generators are stored in conjugate pairs; a form is real when
//!   it equals its conjugate.

mod coeff;
mod derivative;
mod form;
pub mod json;
mod space;

pub use coeff::{Coefficient, ParamCoeff};
pub use derivative::StructureEquations;
pub use form::{hodge_star, rank_one_forms, sort_with_sign, Form, Monomial, VectorSlot};
pub use space::{GeneratorSpace, GeneratorSpec};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("coefficient would be quadratic in parameters")]
    AffineOverflow,
    #[error("operands live on different generator spaces")]
    SpaceMismatch,
    #[error("expected forms of pure degree one")]
    NotDegreeOne,
    #[error("expected constant coefficients")]
    ParametricInput,
    #[error("Hodge star needs the standard real space of dimension 4 or 6")]
    UnsupportedSpace,
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("invalid generator space: {0}")]
    InvalidSpace(String),
    #[error("no differential recorded for generator {0}")]
    MissingDifferential(String),
    #[error("malformed form JSON: {0}")]
    Json(String),
}
