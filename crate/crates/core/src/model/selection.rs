use std::collections::BTreeSet;

use super::{Mask, ModelError, MAX_COMPONENTS};

/// A constructible set in canonical form: the family `Σ ⊆ 2^J` of open
/// strata `E_I°` it consists of.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StratumSelection {
    universe: usize,
    strata: BTreeSet<Mask>,
}

pub fn mask_of(indices: impl IntoIterator<Item = usize>) -> Mask {
    indices.into_iter().fold(0, |m, i| m | (1 << i))
}

/// All submasks of `mask`, including 0 and `mask` itself.
pub fn subsets_of(mask: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

fn full(universe: usize) -> Mask {
    if universe == 0 {
        0
    } else {
        Mask::MAX >> (64 - universe)
    }
}

impl StratumSelection {
    fn check_universe(universe: usize) {
        assert!(universe <= MAX_COMPONENTS, "at most {MAX_COMPONENTS} components");
    }

    pub fn empty(universe: usize) -> Self {
        Self::check_universe(universe);
        StratumSelection {
            universe,
            strata: BTreeSet::new(),
        }
    }

    /// Every open stratum, including the dense one.
    pub fn whole(universe: usize) -> Self {
        Self::check_universe(universe);
        StratumSelection {
            universe,
            strata: subsets_of(full(universe)).collect(),
        }
    }

    /// The closed set `∪_{ℓ∈L} E_ℓ`: all `I` meeting `L`.
    pub fn from_closed(universe: usize, closed: Mask) -> Self {
        Self::check_universe(universe);
        StratumSelection {
            universe,
            strata: subsets_of(full(universe)).filter(|i| i & closed != 0).collect(),
        }
    }

    pub fn from_strata(universe: usize, strata: impl IntoIterator<Item = Mask>) -> Result<Self, ModelError> {
        Self::check_universe(universe);
        let strata: BTreeSet<Mask> = strata.into_iter().collect();
        if let Some(bad) = strata.iter().find(|&&s| s & !full(universe) != 0) {
            return Err(ModelError::Config(format!(
                "stratum {bad:#b} outside a universe of {universe} components"
            )));
        }
        Ok(StratumSelection { universe, strata })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, stratum: Mask) -> bool {
        self.strata.contains(&stratum)
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Mask> + '_ {
        self.strata.iter().copied()
    }

    fn combine(
        &self,
        other: &Self,
        f: impl Fn(&BTreeSet<Mask>, &BTreeSet<Mask>) -> BTreeSet<Mask>,
    ) -> Result<Self, ModelError> {
        if self.universe != other.universe {
            return Err(ModelError::UniverseMismatch(self.universe, other.universe));
        }
        Ok(StratumSelection {
            universe: self.universe,
            strata: f(&self.strata, &other.strata),
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self, ModelError> {
        self.combine(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, ModelError> {
        self.combine(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self, ModelError> {
        self.combine(other, |a, b| a - b)
    }

    pub fn complement(&self) -> Self {
        StratumSelection {
            universe: self.universe,
            strata: &Self::whole(self.universe).strata - &self.strata,
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.strata.is_disjoint(&other.strata)
    }

    /// Selection after blowing up a point lying exactly on the components
    /// `contains`; the exceptional divisor gets index `universe`. Strata over
    /// the point are selected iff the stratum `contains` was.
    pub fn transport_point(&self, contains: Mask) -> Self {
        let new_bit: Mask = 1 << self.universe;
        let mut strata = self.strata.clone();
        if self.strata.contains(&contains) {
            strata.extend(subsets_of(full(self.universe)).map(|i| i | new_bit));
        }
        StratumSelection {
            universe: self.universe + 1,
            strata,
        }
    }

    /// Same strata viewed in a larger universe (new components unselected).
    pub fn widen(&self, universe: usize) -> Self {
        assert!(universe >= self.universe);
        StratumSelection {
            universe,
            strata: self.strata.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_sets_and_whole_space() {
        let s = StratumSelection::from_closed(2, 0b01);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0b01, 0b11]);
        assert!(StratumSelection::from_closed(2, 0).is_empty());
        let w = StratumSelection::whole(1);
        assert_eq!(w.iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(w.complement().is_empty());
    }

    #[test]
    fn union_of_closed_is_closed_of_union() {
        for l1 in 0..8 {
            for l2 in 0..8 {
                let a = StratumSelection::from_closed(3, l1);
                let b = StratumSelection::from_closed(3, l2);
                assert_eq!(a.union(&b).unwrap(), StratumSelection::from_closed(3, l1 | l2));
            }
        }
    }

    #[test]
    fn universe_mismatch() {
        let a = StratumSelection::whole(1);
        let b = StratumSelection::whole(2);
        assert_eq!(a.union(&b), Err(ModelError::UniverseMismatch(1, 2)));
    }

    #[test]
    fn transport_matches_closed_rule() {
        // B on E_1, L = {E_1}: every stratum through the new component joins.
        let s = StratumSelection::from_closed(2, 0b01).transport_point(0b01);
        assert_eq!(s, StratumSelection::from_closed(3, 0b101));
        // B off L: strata meeting both E and L are empty and left out.
        let s = StratumSelection::from_closed(2, 0b01).transport_point(0b10);
        assert_eq!(s, StratumSelection::from_closed(2, 0b01).widen(3));
        assert_eq!(StratumSelection::whole(2).transport_point(0), StratumSelection::whole(3));
    }

    #[test]
    fn subsets_enumerates_all() {
        let mut v: Vec<Mask> = subsets_of(0b101).collect();
        v.sort();
        assert_eq!(v, vec![0, 1, 4, 5]);
    }
}
