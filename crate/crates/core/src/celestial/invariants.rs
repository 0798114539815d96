use std::fmt;

use num_traits::{One, Zero};

use super::integral::{integrate_class, integrate_degree, log_chern, weight};
use super::{manifest, CelestialError, ManifestationChain};
use crate::chow::ChowClass;
use crate::exactnum::{rational_poles, Poles};
use crate::model::{DegreeConfig, FiberedConfig, Mask, NCConfig, StratumSelection};
use crate::{RatFunc, Rational};

/// Zeta function: the integral with multiplicities `a_j·m + k_j`.
pub fn zeta_class(config: &NCConfig, sel: &StratumSelection) -> Result<ChowClass, CelestialError> {
    let mults = config.zeta_mults()?;
    integrate_class(&config.with_mults(&mults), sel)
}

/// Degree of the zeta function with its poles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaDegree {
    pub value: RatFunc,
    pub poles: Poles,
}

pub fn zeta_degree(config: &DegreeConfig, sel: &StratumSelection) -> Result<ZetaDegree, CelestialError> {
    let mults = config.zeta_mults()?;
    let value = integrate_degree(&config.with_mults(mults), sel)?;
    let poles = rational_poles(&value);
    Ok(ZetaDegree { value, poles })
}

/// `c_SM(E_I°) = c(TV(−log E)) · Π_{i∈I} E_i ∩ [V]`.
pub fn csm_stratum(config: &NCConfig, stratum: Mask) -> Result<ChowClass, CelestialError> {
    let meet = config
        .components()
        .iter()
        .enumerate()
        .filter(|(i, _)| stratum & (1 << i) != 0)
        .try_fold(config.ring().fundamental(), |acc, (_, c)| acc.checked_mul(&c.class))?;
    Ok(log_chern(config)?.checked_mul(&meet)?)
}

/// Configuration carrying discrepancies only: the `k_j` of decomposed
/// components, or constant multiplicities as given.
fn discrepancy_config(config: &NCConfig) -> Result<NCConfig, CelestialError> {
    if config.components().iter().all(|c| c.decomposition.is_some()) {
        return Ok(config.with_mults(&config.discrepancies()?));
    }
    if config.components().iter().all(|c| c.mult.is_constant()) {
        return Ok(config.clone());
    }
    Err(CelestialError::PreconditionViolated(
        "discrepancy-only multiplicities required".into(),
    ))
}

/// CSM class of the selected set, manifested along `chain`.
pub fn csm_set(
    config: &NCConfig,
    sel: &StratumSelection,
    chain: &ManifestationChain,
) -> Result<ChowClass, CelestialError> {
    let k = discrepancy_config(config)?;
    Ok(manifest(&integrate_class(&k, sel)?, chain)?)
}

/// Stringy Chern class: the whole-space integral of the zero divisor.
pub fn stringy_class(config: &NCConfig, chain: &ManifestationChain) -> Result<ChowClass, CelestialError> {
    csm_set(config, &crate::model::StratumSelection::whole(config.len()), chain)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Relative canonical divisor from Kähler differentials.
    UpperOmega,
    /// Relative canonical divisor from the double dual of top forms.
    LowerOmega,
}

impl std::str::FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Omega" | "Ω" => Ok(Flavor::UpperOmega),
            "omega" | "ω" => Ok(Flavor::LowerOmega),
            _ => Err(format!("unknown flavor {s:?}; use Omega or omega")),
        }
    }
}

/// Correction coefficient for a hypersurface whose singular locus `B` has a
/// normal cone with fibers of degree `k` cones over `P^{d−1}`-hypersurfaces.
pub fn stringy_coefficient(d: i64, k: i64, flavor: Flavor) -> Result<Rational, CelestialError> {
    if d < 1 || k < 1 {
        return Err(CelestialError::PreconditionViolated(format!("need d, k >= 1 (d = {d}, k = {k})")));
    }
    let q = |n: i64| Rational::from_integer(n.into());
    let pow = num_traits::pow(q(1 - k), (d + 1) as usize);
    let base = (pow - Rational::one()) / q(k);
    match flavor {
        Flavor::UpperOmega => Ok((base + Rational::one()) / q(d)),
        Flavor::LowerOmega if k >= d + 1 => Err(CelestialError::NotLogTerminal { d, k }),
        Flavor::LowerOmega => Ok((base + q(k)) / q(d + 1 - k)),
    }
}

/// `csm_X + coeff · c(TB) ∩ [B]`.
pub fn stringy_hypersurface(
    n: usize,
    d: i64,
    k: i64,
    csm_x: &ChowClass,
    c_b: &ChowClass,
    flavor: Flavor,
) -> Result<ChowClass, CelestialError> {
    if csm_x.ring().dim() != n {
        return Err(CelestialError::PreconditionViolated(format!(
            "ambient class has dimension {}, expected {n}",
            csm_x.ring().dim()
        )));
    }
    let coeff = stringy_coefficient(d, k, flavor)?;
    Ok(csm_x.checked_add(&c_b.scale_rational(&coeff))?)
}

/// Action of a divisor class on a class: the ring product.
pub fn divisor_action(div: &ChowClass, c: &ChowClass) -> Result<ChowClass, CelestialError> {
    div.ensure_divisor()?;
    Ok(div.checked_mul(c)?)
}

/// A constructible function: one value per base stratum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructibleFunction {
    pub entries: Vec<(String, Rational, RatFunc)>,
}

impl ConstructibleFunction {
    pub fn value(&self, stratum: &str) -> Option<&RatFunc> {
        self.entries.iter().find(|(n, _, _)| n == stratum).map(|(_, _, v)| v)
    }

    /// `Σ_T χ(T) · value(T)`.
    pub fn integral(&self) -> RatFunc {
        self.entries.iter().map(|(_, chi, v)| v.scale(chi)).sum()
    }

    pub fn evaluate(&self, x: &Rational) -> Result<ConstructibleFunction, CelestialError> {
        let entries = self
            .entries
            .iter()
            .map(|(n, chi, v)| Ok((n.clone(), chi.clone(), RatFunc::constant(v.evaluate(x)?))))
            .collect::<Result<_, CelestialError>>()?;
        Ok(ConstructibleFunction { entries })
    }
}

impl fmt::Display for ConstructibleFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, _, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{n}: {v}")?;
        }
        Ok(())
    }
}

/// `I_X(D, S)(t) = Σ_{I∈Σ} χ(E_I° ∩ π⁻¹(t)) / Π_{i∈I}(1+m_i)` per stratum.
pub fn ix_function(config: &FiberedConfig, sel: &StratumSelection) -> Result<ConstructibleFunction, CelestialError> {
    let inv = config
        .names
        .iter()
        .zip(&config.mults)
        .map(|(n, m)| {
            (m + &RatFunc::one())
                .inv()
                .map_err(|_| CelestialError::UndefinedMultiplicity(n.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if sel.universe() != config.names.len() {
        return Err(crate::model::ModelError::UniverseMismatch(sel.universe(), config.names.len()).into());
    }
    let entries = config
        .base
        .iter()
        .zip(&config.fiber_chi)
        .map(|((name, chi), fiber)| {
            let v: RatFunc = fiber
                .iter()
                .filter(|(s, c)| sel.contains(**s) && !c.is_zero())
                .map(|(s, c)| weight(&inv, *s).scale(c))
                .sum();
            (name.clone(), chi.clone(), v)
        })
        .collect();
    Ok(ConstructibleFunction { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::projective;
    use crate::model::Component;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn stringy_coefficients() {
        for flavor in [Flavor::UpperOmega, Flavor::LowerOmega] {
            assert!(stringy_coefficient(2, 1, flavor).unwrap().is_zero());
        }
        assert_eq!(stringy_coefficient(2, 2, Flavor::LowerOmega).unwrap(), q(1, 1));
        assert!(matches!(
            stringy_coefficient(2, 3, Flavor::LowerOmega),
            Err(CelestialError::NotLogTerminal { d: 2, k: 3 })
        ));
    }

    #[test]
    fn csm_of_strata() {
        let p2 = projective(2);
        let h = ChowClass::named(&p2, "h").unwrap();
        let one = NCConfig::new(p2.clone(), vec![Component::new("L", h.clone(), RatFunc::zero())]).unwrap();
        assert_eq!(csm_stratum(&one, 1).unwrap().to_string(), "h + 2*h^2");
        let two = NCConfig::new(
            p2,
            vec![
                Component::new("L1", h.clone(), RatFunc::zero()),
                Component::new("L2", h, RatFunc::zero()),
            ],
        )
        .unwrap();
        assert_eq!(csm_stratum(&two, 1).unwrap().to_string(), "h + h^2");
    }

    #[test]
    fn divisor_action_examples() {
        let p2 = projective(2);
        let h = ChowClass::named(&p2, "h").unwrap();
        let c = p2.tangent_chern().unwrap();
        assert_eq!(divisor_action(&h, &c).unwrap().to_string(), "h + 3*h^2");
        assert!(divisor_action(&ChowClass::zero(p2.clone()), &c).unwrap().is_zero());
        assert!(divisor_action(&c, &h).is_err());
    }
}
