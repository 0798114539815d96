//! Graded Chow rings given by finite presentations, their classes, and the
//! push-forward maps that connect modifications.

mod catalog;
mod class;
mod map;
mod ring;
pub mod spec;

use thiserror::Error;

use crate::exactnum::NumError;

pub use catalog::{
    blowup_point, blowup_point_named, point_ring, product, projective, projective_named, Blowup,
};
pub use class::ChowClass;
pub use map::PushForwardMap;
pub use ring::{BasisElement, ChowRing, RingParts};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("PresentationError: {0}")]
    Presentation(String),
    #[error("RingMismatch: {0}")]
    RingMismatch(String),
    #[error("NotADivisor: {0}")]
    NotADivisor(String),
    #[error("UnsupportedCatalog: {0}")]
    UnsupportedCatalog(String),
    #[error("NoRingStructure: ring {0} is group-only")]
    NoRingStructure(String),
    #[error("MissingData: {0}")]
    MissingData(String),
    #[error("NotInvertible: {0}")]
    NotInvertible(String),
    #[error("ParseError: {0}")]
    Parse(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

impl ChowError {
    /// Parse and presentation problems are input errors; the rest are
    /// computation errors.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            ChowError::Presentation(_) | ChowError::Parse(_) | ChowError::Num(NumError::Parse(_))
        )
    }
}
