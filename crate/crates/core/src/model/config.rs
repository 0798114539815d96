use std::sync::Arc;

use num_traits::{One, Zero};

use super::{Mask, ModelError, MAX_COMPONENTS};
use crate::chow::{ChowClass, ChowRing};
use crate::{RatFunc, Rational};

/// `m_j = a·m + k`: order `a` of the integrand divisor along `E_j` and
/// discrepancy `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub a: Rational,
    pub k: Rational,
}

impl Decomposition {
    pub fn value(&self) -> RatFunc {
        RatFunc::linear(self.a.clone(), self.k.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub name: String,
    pub class: ChowClass,
    pub mult: RatFunc,
    pub decomposition: Option<Decomposition>,
}

impl Component {
    pub fn new(name: impl Into<String>, class: ChowClass, mult: RatFunc) -> Component {
        Component {
            name: name.into(),
            class,
            mult,
            decomposition: None,
        }
    }

    pub fn decomposed(name: impl Into<String>, class: ChowClass, a: Rational, k: Rational) -> Component {
        let d = Decomposition { a, k };
        Component {
            name: name.into(),
            class,
            mult: d.value(),
            decomposition: Some(d),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    LogTerminal,
    /// Some constant multiplicity is `≤ −1`; computations proceed formally.
    OutsideLogTerminal,
}

/// A resolving object: a ring with named normal-crossing components and
/// their multiplicities in `D + K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCConfig {
    ring: Arc<ChowRing>,
    components: Vec<Component>,
}

impl NCConfig {
    pub fn new(ring: Arc<ChowRing>, components: Vec<Component>) -> Result<NCConfig, ModelError> {
        if components.len() > MAX_COMPONENTS {
            return Err(ModelError::Config(format!("at most {MAX_COMPONENTS} components")));
        }
        for (i, c) in components.iter().enumerate() {
            if !c.class.ring().same_as(&ring) {
                return Err(ModelError::Config(format!("component {} lives in another ring", c.name)));
            }
            c.class.ensure_divisor()?;
            if components[..i].iter().any(|d| d.name == c.name) {
                return Err(ModelError::Config(format!("duplicate component name {}", c.name)));
            }
        }
        Ok(NCConfig { ring, components })
    }

    pub fn ring(&self) -> &Arc<ChowRing> {
        &self.ring
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c.name == name)
    }

    pub fn mask_of_names<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<Mask, ModelError> {
        names.into_iter().try_fold(0, |m, n| {
            self.index_of(n)
                .map(|i| m | (1 << i))
                .ok_or_else(|| ModelError::Config(format!("unknown component {n}")))
        })
    }

    pub fn mults(&self) -> Vec<RatFunc> {
        self.components.iter().map(|c| c.mult.clone()).collect()
    }

    pub fn regime(&self) -> Regime {
        let minus_one = -Rational::one();
        let outside = self
            .components
            .iter()
            .any(|c| c.mult.as_constant().is_some_and(|v| v <= minus_one));
        if outside {
            Regime::OutsideLogTerminal
        } else {
            Regime::LogTerminal
        }
    }

    /// Copy with multiplicities replaced (classes kept).
    pub fn with_mults(&self, mults: &[RatFunc]) -> NCConfig {
        assert_eq!(mults.len(), self.len());
        NCConfig {
            ring: self.ring.clone(),
            components: self
                .components
                .iter()
                .zip(mults)
                .map(|(c, m)| Component {
                    mult: m.clone(),
                    decomposition: None,
                    ..c.clone()
                })
                .collect(),
        }
    }

    /// Multiplicities `a_j·m + k_j` from the decompositions.
    pub fn zeta_mults(&self) -> Result<Vec<RatFunc>, ModelError> {
        self.components
            .iter()
            .map(|c| {
                c.decomposition
                    .as_ref()
                    .map(Decomposition::value)
                    .ok_or_else(|| ModelError::MissingDecomposition(c.name.clone()))
            })
            .collect()
    }

    /// Discrepancies `k_j` alone (the `m = 0` specialization).
    pub fn discrepancies(&self) -> Result<Vec<RatFunc>, ModelError> {
        self.components
            .iter()
            .map(|c| {
                c.decomposition
                    .as_ref()
                    .map(|d| RatFunc::constant(d.k.clone()))
                    .ok_or_else(|| ModelError::MissingDecomposition(c.name.clone()))
            })
            .collect()
    }

    /// True when no component carries a nonzero divisor order.
    pub fn is_discrepancy_only(&self) -> bool {
        self.components.iter().all(|c| match &c.decomposition {
            Some(d) => d.a.is_zero(),
            None => c.mult.is_constant(),
        })
    }

    /// `Σ m_j E_j` as a class.
    pub fn divisor(&self) -> ChowClass {
        self.components
            .iter()
            .fold(ChowClass::zero(self.ring.clone()), |acc, c| {
                acc.checked_add(&c.class.scale(&c.mult)).expect("same ring")
            })
    }

    pub fn with_components(&self, components: Vec<Component>) -> Result<NCConfig, ModelError> {
        NCConfig::new(self.ring.clone(), components)
    }
}
