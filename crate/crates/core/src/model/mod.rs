//! Resolution data: normal-crossing configurations, stratum selections,
//! degree-level tables, fibered tables, and point blow-up transport.

mod config;
mod degree;
pub mod file;
mod selection;
mod transport;

use thiserror::Error;

use crate::chow::ChowError;
use crate::exactnum::NumError;

pub use config::{Component, Decomposition, NCConfig, Regime};
pub use degree::{chi_from_open, chi_mobius, DegreeConfig, FiberedConfig};
pub use selection::{mask_of, subsets_of, StratumSelection};
pub use transport::{blowup_transport, BlowupStep, Transported};

/// Bitmask over component indices; bit `j` set means `E_j ∈ I`.
pub type Mask = u64;

/// Largest supported number of components.
pub const MAX_COMPONENTS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("UniverseMismatch: selections over {0} and {1} components")]
    UniverseMismatch(usize, usize),
    #[error("NormalCrossingViolation: {0}")]
    NormalCrossingViolation(String),
    #[error("MissingDecomposition: component {0} has no (a, k) decomposition")]
    MissingDecomposition(String),
    #[error("ConfigError: {0}")]
    Config(String),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Num(#[from] NumError),
}

impl ModelError {
    pub fn is_input_error(&self) -> bool {
        match self {
            ModelError::Config(_) => true,
            ModelError::Chow(e) => e.is_input_error(),
            ModelError::Num(e) => matches!(e, NumError::Parse(_)),
            _ => false,
        }
    }
}
