//! The celestial integral and its derived invariants.

mod chain;
mod integral;
mod invariants;

use thiserror::Error;

use crate::chow::ChowError;
use crate::exactnum::NumError;
use crate::model::ModelError;

pub use chain::{manifest, ManifestationChain};
pub use integral::{
    alt_form_average, alt_form_strata, integrate_class, integrate_degree, log_chern, weight,
};
pub use invariants::{
    csm_set, csm_stratum, divisor_action, ix_function, stringy_class, stringy_coefficient,
    stringy_hypersurface, zeta_class, zeta_degree, ConstructibleFunction, Flavor, ZetaDegree,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CelestialError {
    #[error("UndefinedMultiplicity: 1 + m vanishes identically for component {0}")]
    UndefinedMultiplicity(String),
    #[error("NotLogTerminal: omega flavor needs k < d+1 (d = {d}, k = {k})")]
    NotLogTerminal { d: i64, k: i64 },
    #[error("PreconditionViolated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Num(#[from] NumError),
}

impl CelestialError {
    pub fn is_input_error(&self) -> bool {
        match self {
            CelestialError::Model(e) => e.is_input_error(),
            CelestialError::Chow(e) => e.is_input_error(),
            CelestialError::Num(e) => matches!(e, NumError::Parse(_)),
            _ => false,
        }
    }
}
