//! JSON presentations of rings and push-forward maps.
//!
//! ```json
//! {"type": "projective", "n": 2}
//! {"type": "product", "factors": [{"type": "projective", "n": 1}, {"type": "projective", "n": 1}]}
//! {"type": "blowup_point", "base": {"type": "projective", "n": 2}, "times": 3}
//! {"type": "literal", "dim": 1, "basis": [["[V]"], ["p"]],
//!  "products": {}, "degree": {"p": 1}, "chern": "[V] + 2*p", "point": "p"}
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Deserialize;
use serde_json::Value;

use super::class::json_ratfunc;
use super::{blowup_point_named, product, projective_named, BasisElement, Blowup, ChowClass, ChowError, ChowRing, PushForwardMap, RingParts};
use crate::Rational;

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingSpec {
    Projective {
        n: usize,
        #[serde(default)]
        var: Option<String>,
    },
    Product {
        factors: Vec<RingSpec>,
    },
    BlowupPoint {
        base: Box<RingSpec>,
        #[serde(default = "one")]
        times: usize,
        #[serde(default)]
        names: Option<Vec<String>>,
    },
    Literal(LiteralSpec),
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiteralSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub dim: usize,
    /// Basis names per codimension, starting with the fundamental class.
    pub basis: Vec<Vec<String>>,
    /// `"a*b": class` for every pair of positive-codimension basis elements
    /// whose codimensions sum to at most `dim`.
    #[serde(default)]
    pub products: BTreeMap<String, String>,
    pub degree: BTreeMap<String, Value>,
    #[serde(default)]
    pub chern: Option<Value>,
    #[serde(default)]
    pub point: Option<String>,
    #[serde(default)]
    pub group_only: bool,
}

/// A loaded ring and, for blow-up specs, the blow-ups that built it (first
/// performed first).
#[derive(Clone, Debug)]
pub struct LoadedRing {
    pub ring: Arc<ChowRing>,
    pub blowups: Vec<Blowup>,
}

impl LoadedRing {
    /// Push-forward maps from this ring down to the innermost base.
    pub fn chain_to_base(&self) -> Vec<PushForwardMap> {
        self.blowups.iter().rev().map(|b| b.map.clone()).collect()
    }
}

pub fn parse_ring_value(v: &Value) -> Result<LoadedRing, ChowError> {
    let spec: RingSpec = serde_json::from_value(v.clone())
        .map_err(|e| ChowError::Parse(format!("ring spec: {e}")))?;
    load_ring(&spec)
}

pub fn load_ring(spec: &RingSpec) -> Result<LoadedRing, ChowError> {
    match spec {
        RingSpec::Projective { n, var } => Ok(LoadedRing {
            ring: projective_named(*n, var.as_deref().unwrap_or("h")),
            blowups: Vec::new(),
        }),
        RingSpec::Product { factors } => {
            let mut iter = factors.iter();
            let first = iter
                .next()
                .ok_or_else(|| ChowError::Parse("product needs at least one factor".into()))?;
            let mut ring = load_ring(first)?.ring;
            for f in iter {
                ring = product(&ring, &load_ring(f)?.ring)?;
            }
            Ok(LoadedRing {
                ring,
                blowups: Vec::new(),
            })
        }
        RingSpec::BlowupPoint { base, times, names } => {
            let inner = load_ring(base)?;
            let names: Vec<String> = match names {
                Some(v) if v.len() == *times => v.clone(),
                Some(_) => return Err(ChowError::Parse("names must list one entry per blow-up".into())),
                None if *times == 1 => vec!["e".into()],
                None => (1..=*times).map(|i| format!("e{i}")).collect(),
            };
            let mut ring = inner.ring;
            let mut blowups = inner.blowups;
            for name in &names {
                let b = blowup_point_named(&ring, name)?;
                ring = b.ring.clone();
                blowups.push(b);
            }
            Ok(LoadedRing { ring, blowups })
        }
        RingSpec::Literal(lit) => Ok(LoadedRing {
            ring: Arc::new(ring_literal(lit)?),
            blowups: Vec::new(),
        }),
    }
}

fn constant_vector(c: &ChowClass) -> Result<Vec<Rational>, ChowError> {
    c.coeffs()
        .iter()
        .map(|x| {
            x.as_constant()
                .ok_or_else(|| ChowError::Parse(format!("non-constant coefficient {x} in {c}")))
        })
        .collect()
}

/// Builds a ring from a literal presentation and validates every axiom.
pub fn ring_literal(lit: &LiteralSpec) -> Result<ChowRing, ChowError> {
    let label = lit.name.clone().unwrap_or_else(|| "literal".into());
    let perr = |m: String| ChowError::Presentation(format!("{label}: {m}"));
    if lit.basis.len() != lit.dim + 1 {
        return Err(perr(format!("basis must list codimensions 0..={}", lit.dim)));
    }
    if lit.basis[0].len() != 1 {
        return Err(perr("codimension 0 must hold exactly the fundamental class".into()));
    }
    let basis: Vec<BasisElement> = lit
        .basis
        .iter()
        .enumerate()
        .flat_map(|(k, names)| {
            names.iter().map(move |n| BasisElement {
                name: n.clone(),
                codim: k,
            })
        })
        .collect();
    let r = basis.len();

    let mut degree = vec![None; r];
    for (name, v) in &lit.degree {
        let i = basis
            .iter()
            .position(|b| &b.name == name)
            .ok_or_else(|| perr(format!("degree given for unknown element {name}")))?;
        let d = json_ratfunc(v)?
            .as_constant()
            .ok_or_else(|| perr(format!("degree of {name} is not a number")))?;
        degree[i] = Some(d);
    }

    // Parse classes in a group-only shell first; products come after.
    let shell = Arc::new(ChowRing::from_parts(RingParts {
        label: label.clone(),
        dim: lit.dim,
        basis: basis.clone(),
        products: None,
        degree: degree.clone(),
        tangent_chern: None,
        point: None,
    })?);
    let parse_vec = |s: &str| -> Result<Vec<Rational>, ChowError> {
        constant_vector(&ChowClass::parse(&shell, s)?)
    };

    let chern = match &lit.chern {
        None => None,
        Some(Value::String(s)) => Some(parse_vec(s)?),
        Some(Value::Array(items)) => {
            let terms = items
                .iter()
                .map(|t| t.as_str().map(str::to_string).ok_or_else(|| perr("chern terms must be strings".into())))
                .collect::<Result<Vec<_>, _>>()?;
            Some(parse_vec(&terms.join(" + "))?)
        }
        Some(other) => Some(constant_vector(&ChowClass::from_json(&shell, other)?)?),
    };
    let point = lit.point.as_deref().map(parse_vec).transpose()?;

    let products = if lit.group_only {
        if !lit.products.is_empty() {
            return Err(perr("group_only rings cannot list products".into()));
        }
        None
    } else {
        let mut table: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; r]; r];
        for (key, val) in &lit.products {
            let (i, j) = split_pair(&shell, key).ok_or_else(|| perr(format!("bad product key {key:?}")))?;
            let v = parse_vec(val)?;
            if let Some(prev) = &table[j][i] {
                if *prev != v {
                    return Err(perr(format!(
                        "non-commutative pair ({}, {})",
                        basis[i].name, basis[j].name
                    )));
                }
            }
            if table[i][j].is_some() && i != j {
                return Err(perr(format!("product {key} listed twice")));
            }
            table[i][j] = Some(v.clone());
            table[j][i] = Some(v);
        }
        let mut dense = vec![vec![vec![Rational::zero(); r]; r]; r];
        for i in 0..r {
            for j in 0..r {
                let ci = basis[i].codim;
                let cj = basis[j].codim;
                dense[i][j] = if i == 0 || j == 0 {
                    let mut v = vec![Rational::zero(); r];
                    v[i + j] = Rational::from_integer(1.into());
                    v
                } else if let Some(v) = table[i][j].take() {
                    v
                } else if ci + cj > lit.dim {
                    vec![Rational::zero(); r]
                } else {
                    return Err(perr(format!(
                        "missing product {}*{}",
                        basis[i].name, basis[j].name
                    )));
                };
            }
        }
        Some(dense)
    };

    ChowRing::from_parts(RingParts {
        label,
        dim: lit.dim,
        basis,
        products,
        degree,
        tangent_chern: chern,
        point,
    })
}

fn split_pair(ring: &ChowRing, key: &str) -> Option<(usize, usize)> {
    key.char_indices()
        .filter(|&(_, c)| c == '*')
        .find_map(|(pos, _)| {
            let a = ring.index_of(key[..pos].trim())?;
            let b = ring.index_of(key[pos + 1..].trim())?;
            Some((a, b))
        })
}

/// A push-forward map given by images of source basis elements.
/// Unlisted source elements map to zero.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub target: RingSpec,
    pub forward: BTreeMap<String, String>,
    #[serde(default)]
    pub pullback: Option<BTreeMap<String, String>>,
}

pub fn load_map(source: &Arc<ChowRing>, spec: &MapSpec) -> Result<PushForwardMap, ChowError> {
    let target = load_ring(&spec.target)?.ring;
    let mut forward = vec![vec![Rational::zero(); target.rank()]; source.rank()];
    for (name, img) in &spec.forward {
        let i = source
            .index_of(name)
            .ok_or_else(|| ChowError::Parse(format!("unknown source element {name}")))?;
        forward[i] = constant_vector(&ChowClass::parse(&target, img)?)?;
    }
    let pullback = match &spec.pullback {
        None => None,
        Some(pb) => {
            let mut rows = vec![vec![Rational::zero(); source.rank()]; target.rank()];
            for (name, img) in pb {
                let j = target
                    .index_of(name)
                    .ok_or_else(|| ChowError::Parse(format!("unknown target element {name}")))?;
                rows[j] = constant_vector(&ChowClass::parse(source, img)?)?;
            }
            Some(rows)
        }
    };
    PushForwardMap::new(source.clone(), target, forward, pullback)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::projective;
    use serde_json::json;

    fn literal(v: Value) -> Result<ChowRing, ChowError> {
        let spec: LiteralSpec = serde_json::from_value(v).unwrap();
        ring_literal(&spec)
    }

    #[test]
    fn literal_plane_matches_catalog() {
        let r = literal(json!({
            "dim": 2, "basis": [["[V]"], ["h"], ["h^2"]],
            "products": {"h*h": "h^2"}, "degree": {"h^2": 1},
            "chern": "[V] + 3*h + 3*h^2", "point": "h^2", "name": "P2"
        }))
        .unwrap();
        assert_eq!(r, *projective(2));
    }

    #[test]
    fn literal_rejects_bad_associativity() {
        let e = literal(json!({
            "dim": 2, "basis": [["[V]"], ["a", "b"], ["p"]],
            "products": {"a*a": "p", "a*b": "p", "b*b": "0"}, "degree": {"p": 1}
        }));
        assert!(e.is_ok());
        let bad = literal(json!({
            "dim": 3, "basis": [["[V]"], ["a", "b"], ["x", "y"], ["p"]],
            "products": {"a*a": "x", "a*b": "y", "b*b": "0",
                         "a*x": "p", "a*y": "0", "b*x": "p", "b*y": "0"},
            "degree": {"p": 1}
        }))
        .unwrap_err();
        assert!(bad.to_string().contains("non-associative"), "{bad}");
    }

    #[test]
    fn literal_reports_missing_data() {
        let missing_deg = literal(json!({
            "dim": 1, "basis": [["[V]"], ["p"]], "degree": {}
        }))
        .unwrap_err();
        assert!(missing_deg.to_string().contains("missing degree"));
        let missing_prod = literal(json!({
            "dim": 2, "basis": [["[V]"], ["h"], ["h^2"]], "degree": {"h^2": 1}
        }))
        .unwrap_err();
        assert!(missing_prod.to_string().contains("missing product h*h"));
        let grading = literal(json!({
            "dim": 2, "basis": [["[V]"], ["h"], ["h^2"]],
            "products": {"h*h": "h"}, "degree": {"h^2": 1}
        }))
        .unwrap_err();
        assert!(grading.to_string().contains("grading"));
    }

    #[test]
    fn blowup_spec_provides_chain() {
        let v = json!({"type": "blowup_point", "base": {"type": "projective", "n": 2}, "times": 3});
        let loaded = parse_ring_value(&v).unwrap();
        assert_eq!(loaded.blowups.len(), 3);
        let chain = loaded.chain_to_base();
        let mut c = loaded.ring.tangent_chern().unwrap();
        for m in &chain {
            c = m.push_forward(&c).unwrap();
        }
        assert_eq!(c.to_string(), "[V] + 3*h + 6*h^2");
    }
}
