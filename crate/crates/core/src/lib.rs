//! Hyperbolic programming over straight-line-program polynomials.

// `!(x > 0.0)` is used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod barriers;
pub mod bench;
pub mod builders;
pub mod cone;
pub mod error;
pub mod format;
pub mod ipm;
pub mod monomial;
pub mod scalar;
pub mod slp;

pub use error::{Error, Result};
pub use monomial::{mono_to_slp, Monomial, MonomialPoly};
pub use scalar::{Real, Scalar};
pub use slp::{EvalTape, Op, SlpBuilder, SlpNode, SlpProgram};

/// Double-precision program.
pub type Slp = SlpProgram<f64>;
/// Double-precision monomial polynomial.
pub type Poly = MonomialPoly<f64>;
