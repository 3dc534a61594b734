//! Exact computations for SU(3)-structures in real dimension six.
//!
//! Everything is done at a point or on a Lie algebra, with Gaussian rational
//! coefficients (plus `√2` where a frame normalisation requires it), so every
//! identity the crate asserts is checked with zero tolerance. The only
//! floating-point code is the unit phase of a Lagrangian plane and the SU(3)
//! witness in [`calibration`].

pub mod calibration;
pub mod cartan;
pub mod curvature;
pub mod exterior;
pub mod linalg;
pub mod quat;
pub mod scalar;
pub mod su3;
pub mod surd;

pub use exterior::{Coefficient, ExteriorError, Form, GeneratorSpace, ParamCoeff, VectorSlot};
pub use scalar::GaussianRational;
