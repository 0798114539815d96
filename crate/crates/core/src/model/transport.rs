use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{subsets_of, Component, Decomposition, DegreeConfig, Mask, ModelError, NCConfig, StratumSelection};
use crate::chow::{blowup_point_named, Blowup};
use crate::{RatFunc, Rational};

/// Blow-up of a point lying exactly on the components in `contains`. The
/// exceptional divisor is appended as the last component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupStep {
    pub contains: Mask,
    pub name: String,
}

impl BlowupStep {
    pub fn new(contains: Mask, name: impl Into<String>) -> BlowupStep {
        BlowupStep {
            contains,
            name: name.into(),
        }
    }
}

fn q(n: usize) -> Rational {
    Rational::from_integer((n as i64).into())
}

fn check_contains(step: &BlowupStep, len: usize, dim: usize) -> Result<(), ModelError> {
    if step.contains >> len != 0 {
        return Err(ModelError::Config("center lies on an undeclared component".into()));
    }
    if step.contains.count_ones() as usize > dim {
        return Err(ModelError::NormalCrossingViolation(format!(
            "{} components through a point in dimension {dim}",
            step.contains.count_ones()
        )));
    }
    Ok(())
}

fn new_multiplicity(
    components: &[(RatFunc, Option<Decomposition>)],
    contains: Mask,
    d: usize,
) -> (RatFunc, Option<Decomposition>) {
    let through = || {
        components
            .iter()
            .enumerate()
            .filter(move |(j, _)| contains & (1 << j) != 0)
            .map(|(_, c)| c)
    };
    let m0 = through().fold(RatFunc::constant(q(d - 1)), |acc, (m, _)| &acc + m);
    let dec = through()
        .map(|(_, dec)| dec.clone())
        .collect::<Option<Vec<_>>>()
        .map(|decs| Decomposition {
            a: decs.iter().map(|x| x.a.clone()).sum(),
            k: decs.iter().map(|x| x.k.clone()).sum::<Rational>() + q(d - 1),
        });
    (m0, dec)
}

/// Result of transporting a configuration through a point blow-up.
#[derive(Clone, Debug)]
pub struct Transported {
    pub config: NCConfig,
    pub selection: StratumSelection,
    pub blowup: Blowup,
}

/// Blows up a point, giving the exceptional component multiplicity
/// `m_0 = (d−1) + Σ_{E_j ∋ B} m_j`, replacing components through the point
/// by proper transforms and pulling back the others.
pub fn blowup_transport(
    config: &NCConfig,
    step: &BlowupStep,
    sel: &StratumSelection,
) -> Result<Transported, ModelError> {
    let d = config.ring().dim();
    check_contains(step, config.len(), d)?;
    if sel.universe() != config.len() {
        return Err(ModelError::UniverseMismatch(sel.universe(), config.len()));
    }
    if config.index_of(&step.name).is_some() {
        return Err(ModelError::Config(format!("component name {} already used", step.name)));
    }
    if step.contains.count_ones() as usize == d && d > 0 {
        let meet = config
            .components()
            .iter()
            .enumerate()
            .filter(|(j, _)| step.contains & (1 << j) != 0)
            .try_fold(config.ring().fundamental(), |acc, (_, c)| acc.checked_mul(&c.class))?;
        if meet.degree().as_constant().is_none_or(|v| v <= Rational::zero()) {
            return Err(ModelError::NormalCrossingViolation(
                "components through the center do not meet in points".into(),
            ));
        }
    }

    let blowup = blowup_point_named(config.ring(), &step.name)?;
    let mut components = Vec::with_capacity(config.len() + 1);
    for (j, c) in config.components().iter().enumerate() {
        let through = step.contains & (1 << j) != 0;
        let mult = if through { Rational::one() } else { Rational::zero() };
        components.push(Component {
            class: blowup.proper_transform(&c.class, &mult)?,
            ..c.clone()
        });
    }
    let pairs: Vec<_> = config
        .components()
        .iter()
        .map(|c| (c.mult.clone(), c.decomposition.clone()))
        .collect();
    let (mult, decomposition) = new_multiplicity(&pairs, step.contains, d);
    components.push(Component {
        name: step.name.clone(),
        class: blowup.exceptional.clone(),
        mult,
        decomposition,
    });
    Ok(Transported {
        config: NCConfig::new(blowup.ring.clone(), components)?,
        selection: sel.transport_point(step.contains),
        blowup,
    })
}

impl DegreeConfig {
    /// Degree-level transport through a point blow-up. The exceptional
    /// divisor is `P^{d−1}`; for `I ⊆ contains`, `E_I` loses the point and
    /// gains `P^{d−|I|−1}`, and `E ∩ Ẽ_I ≅ P^{d−1−|I|}`.
    pub fn transport_point(&self, step: &BlowupStep) -> Result<DegreeConfig, ModelError> {
        let d = self.dim;
        check_contains(step, self.len(), d)?;
        let n = self.len();
        let new_bit: Mask = 1 << n;
        let mut chi: BTreeMap<Mask, Rational> = self.chi_closed.clone();
        for i in subsets_of(step.contains) {
            let k = i.count_ones() as usize;
            let entry = chi.get(&i).cloned().ok_or_else(|| {
                ModelError::NormalCrossingViolation(format!(
                    "center lies on components {i:#b} that do not meet"
                ))
            })?;
            let updated = entry - Rational::one() + q(d - k);
            if updated.is_zero() && i != 0 {
                chi.remove(&i);
            } else {
                chi.insert(i, updated);
            }
            if d > k {
                chi.insert(i | new_bit, q(d - k));
            }
        }
        let pairs: Vec<_> = self
            .mults
            .iter()
            .cloned()
            .zip(self.decompositions.iter().cloned())
            .collect();
        let (m0, dec) = new_multiplicity(&pairs, step.contains, d);
        let mut names = self.names.clone();
        names.push(step.name.clone());
        let mut mults = self.mults.clone();
        mults.push(m0);
        let mut decompositions = self.decompositions.clone();
        decompositions.push(dec);
        DegreeConfig {
            dim: d,
            names,
            mults,
            decompositions,
            chi_closed: chi,
        }
        .validated()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{projective, ChowClass};

    fn rf(n: i64) -> RatFunc {
        RatFunc::from_i64(n)
    }

    #[test]
    fn exceptional_multiplicity_rule() {
        let p2 = projective(2);
        let line = Component::new("L", ChowClass::named(&p2, "h").unwrap(), rf(3));
        let cfg = NCConfig::new(p2, vec![line]).unwrap();
        let sel = StratumSelection::whole(1);
        let off = blowup_transport(&cfg, &BlowupStep::new(0, "e"), &sel).unwrap();
        assert_eq!(off.config.components()[1].mult, rf(1));
        assert_eq!(off.config.components()[0].class.to_string(), "h");
        let on = blowup_transport(&cfg, &BlowupStep::new(1, "e"), &sel).unwrap();
        assert_eq!(on.config.components()[1].mult, rf(4));
        assert_eq!(on.config.components()[0].class.to_string(), "h - e");
    }

    #[test]
    fn too_many_components_through_center() {
        let p2 = projective(2);
        let h = ChowClass::named(&p2, "h").unwrap();
        let comps = (0..3).map(|i| Component::new(format!("L{i}"), h.clone(), rf(0))).collect();
        let cfg = NCConfig::new(p2, comps).unwrap();
        let err = blowup_transport(&cfg, &BlowupStep::new(0b111, "e"), &StratumSelection::whole(3)).unwrap_err();
        assert!(matches!(err, ModelError::NormalCrossingViolation(_)));
    }

    #[test]
    fn degree_transport_adds_one_on_surfaces() {
        let base = DegreeConfig::new(2, vec!["L".into()], vec![rf(1)], [(0, q(3)), (1, q(2))].into()).unwrap();
        let t = base.transport_point(&BlowupStep::new(1, "e")).unwrap();
        assert_eq!(t.chi(0), q(4));
        assert_eq!(t.chi(1), q(2));
        assert_eq!(t.chi(2), q(2));
        assert_eq!(t.chi(3), q(1));
        assert_eq!(t.mults[1], rf(2));
    }
}
