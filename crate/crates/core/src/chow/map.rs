use std::sync::Arc;

use num_traits::{One, Zero};

use super::{ChowClass, ChowError, ChowRing};
use crate::{RatFunc, Rational};

/// Proper birational push-forward between two presentations, optionally with
/// the pull-back algebra map in the opposite direction.
///
/// `forward[i]` is the image of source basis element `i` as a dense vector
/// over the target basis; `pullback[j]` is the image of target element `j`
/// over the source basis.
#[derive(Clone, Debug)]
pub struct PushForwardMap {
    source: Arc<ChowRing>,
    target: Arc<ChowRing>,
    forward: Vec<Vec<Rational>>,
    pullback: Option<Vec<Vec<Rational>>>,
}

impl PushForwardMap {
    /// Builds and validates a map. Checks: equal dimension, grading,
    /// `[source] ↦ [target]`, degree preservation and, when a pull-back is
    /// given, the algebra-map property, `forward ∘ pullback = id` and the
    /// projection formula on every basis pair.
    pub fn new(
        source: Arc<ChowRing>,
        target: Arc<ChowRing>,
        forward: Vec<Vec<Rational>>,
        pullback: Option<Vec<Vec<Rational>>>,
    ) -> Result<PushForwardMap, ChowError> {
        let map = PushForwardMap {
            source,
            target,
            forward,
            pullback,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn source(&self) -> &Arc<ChowRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ChowRing> {
        &self.target
    }

    pub fn has_pullback(&self) -> bool {
        self.pullback.is_some()
    }

    fn err(&self, msg: String) -> ChowError {
        ChowError::Presentation(format!(
            "map {} -> {}: {msg}",
            self.source.label(),
            self.target.label()
        ))
    }

    fn validate(&self) -> Result<(), ChowError> {
        let (s, t) = (&self.source, &self.target);
        if s.dim() != t.dim() {
            return Err(self.err("dimension not preserved".into()));
        }
        if self.forward.len() != s.rank() || self.forward.iter().any(|v| v.len() != t.rank()) {
            return Err(self.err("forward table has wrong shape".into()));
        }
        for (i, v) in self.forward.iter().enumerate() {
            if let Some((k, _)) = v.iter().enumerate().find(|(k, c)| !c.is_zero() && t.codim(*k) != s.codim(i)) {
                return Err(self.err(format!(
                    "grading violation: {} pushes onto {}",
                    s.name(i),
                    t.name(k)
                )));
            }
        }
        if !self.forward[0][0].is_one() {
            return Err(self.err("fundamental class does not push to the fundamental class".into()));
        }
        for i in s.codim_indices(s.dim()) {
            let pushed: Rational = self.forward[i]
                .iter()
                .enumerate()
                .map(|(k, c)| c * t.degree_of_basis(k))
                .sum();
            if &pushed != s.degree_of_basis(i) {
                return Err(self.err(format!("degree of {} not preserved", s.name(i))));
            }
        }
        let Some(pb) = &self.pullback else {
            return Ok(());
        };
        if pb.len() != t.rank() || pb.iter().any(|v| v.len() != s.rank()) {
            return Err(self.err("pullback table has wrong shape".into()));
        }
        if !s.has_products() || !t.has_products() {
            return Err(self.err("a pullback requires product tables on both rings".into()));
        }
        for (j, v) in pb.iter().enumerate() {
            if v.iter().enumerate().any(|(k, c)| !c.is_zero() && s.codim(k) != t.codim(j)) {
                return Err(self.err(format!("pullback of {} is not homogeneous", t.name(j))));
            }
        }
        let sc = |v: &[Rational]| ChowClass::from_rationals(s.clone(), v);
        let tc = |v: &[Rational]| ChowClass::from_rationals(t.clone(), v);
        for a in 0..t.rank() {
            let pa = sc(&pb[a]);
            let back = self.push_forward(&pa)?;
            if back != ChowClass::basis(t.clone(), a) {
                return Err(self.err(format!("forward(pullback({})) != {}", t.name(a), t.name(a))));
            }
            for b in a..t.rank() {
                let lhs = sc(&pb[a]).checked_mul(&sc(&pb[b]))?;
                let rhs = self.pull_back(&tc(&t.product_vector(a, b)?))?;
                if lhs != rhs {
                    return Err(self.err(format!(
                        "pullback is not multiplicative on ({}, {})",
                        t.name(a),
                        t.name(b)
                    )));
                }
            }
            for beta in 0..s.rank() {
                let b = ChowClass::basis(s.clone(), beta);
                let lhs = self.push_forward(&pa.checked_mul(&b)?)?;
                let rhs = ChowClass::basis(t.clone(), a).checked_mul(&self.push_forward(&b)?)?;
                if lhs != rhs {
                    return Err(self.err(format!(
                        "projection formula fails on ({}, {})",
                        t.name(a),
                        s.name(beta)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn push_forward(&self, c: &ChowClass) -> Result<ChowClass, ChowError> {
        if !c.ring().same_as(&self.source) {
            return Err(ChowError::RingMismatch(format!(
                "push-forward from {} applied to a class in {}",
                self.source.label(),
                c.ring().label()
            )));
        }
        Ok(apply(&self.target, &self.forward, c))
    }

    pub fn pull_back(&self, c: &ChowClass) -> Result<ChowClass, ChowError> {
        if !c.ring().same_as(&self.target) {
            return Err(ChowError::RingMismatch(format!(
                "pull-back to {} applied to a class in {}",
                self.target.label(),
                c.ring().label()
            )));
        }
        let pb = self.pullback.as_ref().ok_or_else(|| {
            ChowError::MissingData(format!("map to {} has no pullback", self.target.label()))
        })?;
        Ok(apply(&self.source, pb, c))
    }

    /// `other ∘ self`: push along `self`, then along `other`.
    pub fn then(&self, other: &PushForwardMap) -> Result<PushForwardMap, ChowError> {
        if !self.target.same_as(&other.source) {
            return Err(ChowError::RingMismatch(format!(
                "cannot compose {} -> {} with {} -> {}",
                self.source.label(),
                self.target.label(),
                other.source.label(),
                other.target.label()
            )));
        }
        let forward = compose(&self.forward, &other.forward, other.target.rank());
        let pullback = match (&other.pullback, &self.pullback) {
            (Some(p2), Some(p1)) => Some(compose(p2, p1, self.source.rank())),
            _ => None,
        };
        Ok(PushForwardMap {
            source: self.source.clone(),
            target: other.target.clone(),
            forward,
            pullback,
        })
    }

    /// Image of source basis element `i`.
    pub fn forward_row(&self, i: usize) -> &[Rational] {
        &self.forward[i]
    }
}

fn apply(target: &Arc<ChowRing>, table: &[Vec<Rational>], c: &ChowClass) -> ChowClass {
    let mut out = vec![RatFunc::zero(); target.rank()];
    for (i, a) in c.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (k, w) in table[i].iter().enumerate() {
            if !w.is_zero() {
                out[k] = &out[k] + &a.scale(w);
            }
        }
    }
    ChowClass::from_coeffs(target.clone(), out).expect("rank matches target")
}

/// Rows of `first` mapped through `second`.
fn compose(first: &[Vec<Rational>], second: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    first
        .iter()
        .map(|row| {
            let mut out = vec![Rational::zero(); width];
            for (j, a) in row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, b) in second[j].iter().enumerate() {
                    out[k] += a * b;
                }
            }
            out
        })
        .collect()
}
