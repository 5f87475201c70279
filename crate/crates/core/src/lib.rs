//! Dirichlet L-functions, character-twisted Riesz series, and numerical
//! verification of the identities that connect them to the critical zeros.

pub mod arith;
pub mod criteria;
pub mod error;
pub mod identity;
pub mod lfunc;
mod quad;
pub mod riesz;
pub mod special;
pub mod zerodata;

pub use error::{Error, Result};
