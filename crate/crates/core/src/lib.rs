//! Weighted harmonic analysis in the Bessel setting `(R_+, |·|, x^{2λ} dx)`.
//!
//! Weight constants for the classes `A_p(μ)` and `Ã_{p,κ}`, dyadic and sparse
//! operators, Orlicz norms, the Bessel Riesz kernel and BMO-type norms, all
//! computed at desk scale with explicit error control.

pub mod bmo;
pub mod dyadic;
pub mod error;
pub mod measure;
pub mod operators;
pub mod orlicz;
pub mod quad;
pub mod riesz;
pub mod weights;

pub use error::{Error, Result};
pub use measure::{Against, Atom, BesselMeasure, FuncExpr, Interval, IntervalSet};
