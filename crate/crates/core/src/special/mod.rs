//! Complex special functions: Γ, ₁F₁, Hurwitz ζ and Bernoulli numbers.

mod bernoulli;
pub(crate) mod dd;
mod gamma;
pub(crate) mod hurwitz;
mod kummer;

pub use bernoulli::{bernoulli_exact, bernoulli_numbers, MAX_BERNOULLI};
pub use gamma::{gamma_complex, gamma_real, ln_gamma, rgamma};
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_ds};
pub use kummer::{kummer_1f1, kummer_1f1_direct, kummer_1f1_transformed, kummer_1f1_with};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Series tolerances and term budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub target_abs_tol: f64,
    pub target_rel_tol: f64,
    pub max_terms: usize,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            target_abs_tol: 1e-13,
            target_rel_tol: 1e-12,
            max_terms: 1_000_000,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(target_abs_tol: f64, target_rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(target_abs_tol > 0.0 && target_rel_tol > 0.0) || max_terms == 0 {
            return Err(Error::InvalidArgument(
                "tolerances must be positive and max_terms at least 1".into(),
            ));
        }
        Ok(PrecisionPolicy {
            target_abs_tol,
            target_rel_tol,
            max_terms,
        })
    }
}
