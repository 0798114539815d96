use std::collections::BTreeMap;

use num_traits::Zero;

use super::{subsets_of, Decomposition, Mask, ModelError, MAX_COMPONENTS};
use crate::{RatFunc, Rational};

/// Open-stratum Euler characteristics from closed ones:
/// `χ(E_I°) = Σ_{I'⊇I} (−1)^{|I'|−|I|} χ(E_{I'})`. Zero entries are dropped.
pub fn chi_mobius(closed: &BTreeMap<Mask, Rational>) -> BTreeMap<Mask, Rational> {
    let mut out: BTreeMap<Mask, Rational> = BTreeMap::new();
    for (&big, chi) in closed {
        for small in subsets_of(big) {
            let term = if (big ^ small).count_ones() % 2 == 0 {
                chi.clone()
            } else {
                -chi.clone()
            };
            *out.entry(small).or_insert_with(Rational::zero) += term;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Inverse of [`chi_mobius`]: `χ(E_I) = Σ_{I'⊇I} χ(E_{I'}°)`.
pub fn chi_from_open(open: &BTreeMap<Mask, Rational>) -> BTreeMap<Mask, Rational> {
    let mut out: BTreeMap<Mask, Rational> = BTreeMap::new();
    for (&big, chi) in open {
        for small in subsets_of(big) {
            *out.entry(small).or_insert_with(Rational::zero) += chi;
        }
    }
    out.retain(|k, v| *k == 0 || !v.is_zero());
    out
}

/// Purely combinatorial data: multiplicities and `χ(E_I)` for every
/// nonempty intersection (`I = ∅` gives `χ(V)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeConfig {
    pub dim: usize,
    pub names: Vec<String>,
    pub mults: Vec<RatFunc>,
    pub decompositions: Vec<Option<Decomposition>>,
    pub chi_closed: BTreeMap<Mask, Rational>,
}

impl DegreeConfig {
    pub fn new(
        dim: usize,
        names: Vec<String>,
        mults: Vec<RatFunc>,
        chi_closed: BTreeMap<Mask, Rational>,
    ) -> Result<DegreeConfig, ModelError> {
        let n = names.len();
        let decompositions = vec![None; n];
        DegreeConfig {
            dim,
            names,
            mults,
            decompositions,
            chi_closed,
        }
        .validated()
    }

    pub(crate) fn validated(self) -> Result<DegreeConfig, ModelError> {
        let n = self.names.len();
        if n > MAX_COMPONENTS || self.mults.len() != n || self.decompositions.len() != n {
            return Err(ModelError::Config("component lists have inconsistent lengths".into()));
        }
        if !self.chi_closed.contains_key(&0) {
            return Err(ModelError::Config("chi_closed needs an entry for the empty set".into()));
        }
        if let Some(k) = self.chi_closed.keys().find(|&&k| k >> n != 0) {
            return Err(ModelError::Config(format!("chi_closed entry {k:#b} uses undeclared components")));
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn chi_open(&self) -> BTreeMap<Mask, Rational> {
        chi_mobius(&self.chi_closed)
    }

    pub fn chi(&self, stratum: Mask) -> Rational {
        self.chi_closed.get(&stratum).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn with_mults(&self, mults: Vec<RatFunc>) -> DegreeConfig {
        assert_eq!(mults.len(), self.len());
        DegreeConfig {
            mults,
            decompositions: vec![None; self.len()],
            ..self.clone()
        }
    }

    pub fn zeta_mults(&self) -> Result<Vec<RatFunc>, ModelError> {
        self.decompositions
            .iter()
            .zip(&self.names)
            .map(|(d, n)| {
                d.as_ref()
                    .map(Decomposition::value)
                    .ok_or_else(|| ModelError::MissingDecomposition(n.clone()))
            })
            .collect()
    }

    pub fn discrepancies(&self) -> Result<Vec<RatFunc>, ModelError> {
        self.decompositions
            .iter()
            .zip(&self.names)
            .map(|(d, n)| {
                d.as_ref()
                    .map(|d| RatFunc::constant(d.k.clone()))
                    .ok_or_else(|| ModelError::MissingDecomposition(n.clone()))
            })
            .collect()
    }
}

/// Fiberwise data behind `I_X`: base strata `T` with `χ(T)`, and for each
/// `T` the Euler characteristics `χ(E_I° ∩ π⁻¹(t))` of a fiber over a
/// point `t ∈ T`, assumed constant along `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberedConfig {
    pub base: Vec<(String, Rational)>,
    pub names: Vec<String>,
    pub mults: Vec<RatFunc>,
    pub fiber_chi: Vec<BTreeMap<Mask, Rational>>,
}

impl FiberedConfig {
    pub fn new(
        base: Vec<(String, Rational)>,
        names: Vec<String>,
        mults: Vec<RatFunc>,
        fiber_chi: Vec<BTreeMap<Mask, Rational>>,
    ) -> Result<FiberedConfig, ModelError> {
        let n = names.len();
        if mults.len() != n || fiber_chi.len() != base.len() || n > MAX_COMPONENTS {
            return Err(ModelError::Config("fibered config has inconsistent lengths".into()));
        }
        for (i, (t, _)) in base.iter().enumerate() {
            if base[..i].iter().any(|(s, _)| s == t) {
                return Err(ModelError::Config(format!("duplicate base stratum {t}")));
            }
            if fiber_chi[i].keys().any(|&k| k >> n != 0) {
                return Err(ModelError::Config(format!("fiber table of {t} uses undeclared components")));
            }
        }
        Ok(FiberedConfig {
            base,
            names,
            mults,
            fiber_chi,
        })
    }
}
