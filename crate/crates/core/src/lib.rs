//! Exact arithmetic for certificates about integral-valued polynomials on sets
//! of algebraic integers: Newton polygons, Dedekind's index criterion,
//! pseudo-monotone sequences, ball covers, and polynomial closures.

pub mod arith;
pub mod closure;
pub mod corpus;
pub mod element;
pub mod error;
pub mod families;
pub mod fp;
pub mod index;
pub mod ivp;
pub mod newton;
pub mod poly;
pub mod resultant;
pub mod sequence;
pub mod val;
pub mod verify;

pub use error::{Error, Result};
pub use fp::FpPoly;
pub use poly::RatPoly;
pub use val::Val;
