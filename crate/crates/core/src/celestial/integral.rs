use std::collections::HashMap;

use super::CelestialError;
use crate::chow::ChowClass;
use crate::model::{subsets_of, DegreeConfig, Mask, NCConfig, StratumSelection};
use crate::RatFunc;

fn check_mults<'a>(
    names: impl IntoIterator<Item = &'a String>,
    mults: &[RatFunc],
) -> Result<Vec<RatFunc>, CelestialError> {
    names
        .into_iter()
        .zip(mults)
        .map(|(n, m)| {
            (m + &RatFunc::one())
                .inv()
                .map_err(|_| CelestialError::UndefinedMultiplicity(n.clone()))
        })
        .collect()
}

/// `Π_{i∈I} 1/(1+m_i)` given precomputed reciprocals.
pub fn weight(inverses: &[RatFunc], stratum: Mask) -> RatFunc {
    inverses
        .iter()
        .enumerate()
        .filter(|(i, _)| stratum & (1 << i) != 0)
        .map(|(_, w)| w.clone())
        .product()
}

fn full_mask(n: usize) -> Mask {
    if n == 0 {
        0
    } else {
        Mask::MAX >> (64 - n)
    }
}

/// Memoized intersection products `Π_{i∈I} E_i`.
struct Intersections<'a> {
    config: &'a NCConfig,
    cache: HashMap<Mask, ChowClass>,
}

impl<'a> Intersections<'a> {
    fn new(config: &'a NCConfig) -> Self {
        let mut cache = HashMap::new();
        cache.insert(0, config.ring().fundamental());
        Intersections { config, cache }
    }

    fn get(&mut self, mask: Mask) -> Result<ChowClass, CelestialError> {
        if let Some(c) = self.cache.get(&mask) {
            return Ok(c.clone());
        }
        let top = 63 - mask.leading_zeros() as usize;
        let rest = self.get(mask & !(1 << top))?;
        let c = if rest.is_zero() {
            rest
        } else {
            rest.checked_mul(&self.config.components()[top].class)?
        };
        self.cache.insert(mask, c.clone());
        Ok(c)
    }
}

/// `c(TV(−log E)) ∩ [V] = c(TV) / Π_j (1+E_j) ∩ [V]`.
pub fn log_chern(config: &NCConfig) -> Result<ChowClass, CelestialError> {
    let ring = config.ring();
    let one = ring.fundamental();
    let denom = config
        .components()
        .iter()
        .try_fold(one.clone(), |acc, c| acc.checked_mul(&one.checked_add(&c.class)?))?;
    Ok(ring.tangent_chern()?.checked_div(&denom)?)
}

/// The manifestation at the resolving object:
/// `c(TV(−log E)) · Σ_{I∈Σ} Π_{i∈I} E_i/(1+m_i) ∩ [V]`.
pub fn integrate_class(config: &NCConfig, sel: &StratumSelection) -> Result<ChowClass, CelestialError> {
    let names: Vec<String> = config.components().iter().map(|c| c.name.clone()).collect();
    let inv = check_mults(&names, &config.mults())?;
    if sel.universe() != config.len() {
        return Err(crate::model::ModelError::UniverseMismatch(sel.universe(), config.len()).into());
    }
    let mut prods = Intersections::new(config);
    let mut sum = ChowClass::zero(config.ring().clone());
    for stratum in sel.iter() {
        let p = prods.get(stratum)?;
        if !p.is_zero() {
            sum = sum.checked_add(&p.scale(&weight(&inv, stratum)))?;
        }
    }
    if sum.is_zero() {
        return Ok(sum);
    }
    Ok(log_chern(config)?.checked_mul(&sum)?)
}

/// Whole-space form `Σ_I (−1)^{|I|} Π_{i∈I} m_i/(1+m_i) · c(TE_I) ∩ [E_I]`,
/// with `c(TE_I) ∩ [E_I] = c(TV) · Π_{i∈I} E_i/(1+E_i)`.
pub fn alt_form_strata(config: &NCConfig) -> Result<ChowClass, CelestialError> {
    let names: Vec<String> = config.components().iter().map(|c| c.name.clone()).collect();
    let inv = check_mults(&names, &config.mults())?;
    let ring = config.ring();
    let one = ring.fundamental();
    let ctv = ring.tangent_chern()?;
    let factors = config
        .components()
        .iter()
        .map(|c| c.class.checked_div(&one.checked_add(&c.class)?))
        .collect::<Result<Vec<_>, _>>()?;
    let mut sum = ChowClass::zero(ring.clone());
    for stratum in subsets_of(full_mask(config.len())) {
        let mut term = ctv.clone();
        let mut coeff = RatFunc::one();
        for (i, c) in config.components().iter().enumerate() {
            if stratum & (1 << i) != 0 {
                term = term.checked_mul(&factors[i])?;
                coeff = &coeff * &(&(-&c.mult) * &inv[i]);
            }
        }
        sum = sum.checked_add(&term.scale(&coeff))?;
    }
    Ok(sum)
}

/// Whole-space form `(1/Π_j(1+m_j)) · Σ_I m_I · c(TV(−log E^I)) ∩ [V]`.
pub fn alt_form_average(config: &NCConfig) -> Result<ChowClass, CelestialError> {
    let names: Vec<String> = config.components().iter().map(|c| c.name.clone()).collect();
    let inv = check_mults(&names, &config.mults())?;
    let ring = config.ring();
    let one = ring.fundamental();
    let ctv = ring.tangent_chern()?;
    let inverses = config
        .components()
        .iter()
        .map(|c| one.checked_add(&c.class)?.inverse())
        .collect::<Result<Vec<_>, _>>()?;
    let mut sum = ChowClass::zero(ring.clone());
    for stratum in subsets_of(full_mask(config.len())) {
        let mut term = ctv.clone();
        let mut coeff = RatFunc::one();
        for (i, c) in config.components().iter().enumerate() {
            if stratum & (1 << i) != 0 {
                term = term.checked_mul(&inverses[i])?;
                coeff = &coeff * &c.mult;
            }
        }
        if !coeff.is_zero() {
            sum = sum.checked_add(&term.scale(&coeff))?;
        }
    }
    let total: RatFunc = inv.iter().cloned().product();
    Ok(sum.scale(&total))
}

/// `Σ_{I∈Σ} χ(E_I°) / Π_{i∈I}(1+m_i)`.
pub fn integrate_degree(config: &DegreeConfig, sel: &StratumSelection) -> Result<RatFunc, CelestialError> {
    let inv = check_mults(&config.names, &config.mults)?;
    if sel.universe() != config.len() {
        return Err(crate::model::ModelError::UniverseMismatch(sel.universe(), config.len()).into());
    }
    Ok(config
        .chi_open()
        .iter()
        .filter(|(stratum, _)| sel.contains(**stratum))
        .map(|(stratum, chi)| weight(&inv, *stratum).scale(chi))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{projective, ChowClass};
    use crate::model::Component;

    fn p2_lines(mults: &[i64]) -> NCConfig {
        let p2 = projective(2);
        let h = ChowClass::named(&p2, "h").unwrap();
        let comps = mults
            .iter()
            .enumerate()
            .map(|(i, &m)| Component::new(format!("L{i}"), h.clone(), RatFunc::from_i64(m)))
            .collect();
        NCConfig::new(p2, comps).unwrap()
    }

    #[test]
    fn log_chern_examples() {
        assert_eq!(log_chern(&p2_lines(&[])).unwrap().to_string(), "[V] + 3*h + 3*h^2");
        assert_eq!(log_chern(&p2_lines(&[0])).unwrap().to_string(), "[V] + 2*h + h^2");
        assert_eq!(log_chern(&p2_lines(&[0, 0])).unwrap().to_string(), "[V] + h");
    }

    #[test]
    fn line_with_multiplicity_one() {
        let cfg = p2_lines(&[1]);
        let c = integrate_class(&cfg, &StratumSelection::whole(1)).unwrap();
        assert_eq!(c.to_string(), "[V] + (5/2)*h + 2*h^2");
        assert_eq!(alt_form_strata(&cfg).unwrap(), c);
        assert_eq!(alt_form_average(&cfg).unwrap(), c);
    }

    #[test]
    fn undefined_multiplicity() {
        let cfg = p2_lines(&[-1]);
        assert!(matches!(
            integrate_class(&cfg, &StratumSelection::whole(1)),
            Err(CelestialError::UndefinedMultiplicity(_))
        ));
    }

    #[test]
    fn empty_selection_is_zero() {
        let cfg = p2_lines(&[1]);
        assert!(integrate_class(&cfg, &StratumSelection::empty(1)).unwrap().is_zero());
    }
}
