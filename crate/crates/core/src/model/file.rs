//! JSON problem files.
//!
//! ```json
//! {
//!   "name": "p2_line",
//!   "ring": {"type": "projective", "n": 2},
//!   "components": [{"name": "L", "class": "h", "mult": 1}],
//!   "selection": {"whole": true},
//!   "chains": {"down": ["base"]},
//!   "degree": {"dim": 2, "chi_closed": {"": 3, "L": 2}}
//! }
//! ```
//!
//! `mult` is a number, a rational-function string, or `{"a": .., "k": ..}`.
//! `selection` is `{"whole": true}`, `{"closed": [names]}` or
//! `{"strata": [[names], ...]}`; it defaults to the whole space.
//! `expect` records results that `celint verify` checks the file against.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::{Component, Decomposition, DegreeConfig, FiberedConfig, Mask, ModelError, NCConfig, StratumSelection};
use crate::chow::spec::{load_map, load_ring, LoadedRing, MapSpec, RingSpec};
use crate::chow::{ChowClass, ChowError, PushForwardMap};
use crate::exactnum::parse_ratfunc;
use crate::{RatFunc, Rational};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemSpec {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    ring: Option<RingSpec>,
    #[serde(default)]
    components: Vec<ComponentSpec>,
    #[serde(default)]
    selection: Option<Value>,
    #[serde(default)]
    chains: BTreeMap<String, Vec<Value>>,
    #[serde(default)]
    degree: Option<DegreeSpec>,
    #[serde(default)]
    fibered: Option<FiberedSpec>,
    #[serde(default)]
    expect: Option<Expectations>,
}

/// Recorded results a fixture must reproduce; checked by `verify`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    /// Chain the class-level integral is pushed along before comparing.
    #[serde(default)]
    pub manifest: Option<String>,
    /// Class-level integral, in the notation of the target ring.
    #[serde(default)]
    pub integral: Option<String>,
    /// Degree of the integral (degree table when present).
    #[serde(default)]
    pub degree: Option<String>,
    /// Degree of the zeta function.
    #[serde(default)]
    pub zeta_degree: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentSpec {
    name: String,
    #[serde(default)]
    class: Option<String>,
    mult: Value,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreeSpec {
    #[serde(default = "two")]
    dim: usize,
    chi_closed: BTreeMap<String, Value>,
}

fn two() -> usize {
    2
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberedSpec {
    base: Vec<BaseStratum>,
    fiber_chi: BTreeMap<String, BTreeMap<String, Value>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseStratum {
    name: String,
    chi: Value,
}

/// A loaded problem file.
#[derive(Clone, Debug)]
pub struct Problem {
    pub name: String,
    pub component_names: Vec<String>,
    pub ring: Option<LoadedRing>,
    pub config: Option<NCConfig>,
    pub degree: Option<DegreeConfig>,
    pub fibered: Option<FiberedConfig>,
    pub selection: StratumSelection,
    pub chains: BTreeMap<String, Vec<PushForwardMap>>,
    pub expect: Option<Expectations>,
}

impl Problem {
    pub fn chain(&self, name: &str) -> Result<&[PushForwardMap], ModelError> {
        self.chains
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| ModelError::Config(format!("no chain named {name:?} in {}", self.name)))
    }

    pub fn require_config(&self) -> Result<&NCConfig, ModelError> {
        self.config
            .as_ref()
            .ok_or_else(|| ModelError::Config(format!("{} has no ring-level configuration", self.name)))
    }

    pub fn require_degree(&self) -> Result<&DegreeConfig, ModelError> {
        self.degree
            .as_ref()
            .ok_or_else(|| ModelError::Config(format!("{} has no degree table", self.name)))
    }

    pub fn require_fibered(&self) -> Result<&FiberedConfig, ModelError> {
        self.fibered
            .as_ref()
            .ok_or_else(|| ModelError::Config(format!("{} has no fibered table", self.name)))
    }

    /// Parses a selection document against this problem's components.
    pub fn parse_selection(&self, v: &Value) -> Result<StratumSelection, ModelError> {
        parse_selection(&self.component_names, v)
    }
}

fn cfg(msg: impl Into<String>) -> ModelError {
    ModelError::Config(msg.into())
}

fn rational(v: &Value) -> Result<Rational, ModelError> {
    let f = json_ratfunc(v)?;
    f.as_constant().ok_or_else(|| cfg(format!("expected a number, got {v}")))
}

fn json_ratfunc(v: &Value) -> Result<RatFunc, ModelError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(RatFunc::from_i64)
            .ok_or_else(|| cfg(format!("non-integer number {n}; write fractions as strings"))),
        Value::String(s) => Ok(parse_ratfunc(s)?),
        _ => Err(cfg(format!("expected a number or string, got {v}"))),
    }
}

fn parse_mult(v: &Value) -> Result<(RatFunc, Option<Decomposition>), ModelError> {
    match v {
        Value::Object(map) => {
            if map.keys().any(|k| k != "a" && k != "k") {
                return Err(cfg(format!("multiplicity object takes keys a and k, got {v}")));
            }
            let get = |k: &str| map.get(k).map(rational).transpose();
            let d = Decomposition {
                a: get("a")?.unwrap_or_default(),
                k: get("k")?.unwrap_or_default(),
            };
            Ok((d.value(), Some(d)))
        }
        other => Ok((json_ratfunc(other)?, None)),
    }
}

fn names_mask(names: &[String], list: &str) -> Result<Mask, ModelError> {
    if list.trim().is_empty() {
        return Ok(0);
    }
    list.split(',').try_fold(0, |m, n| {
        let n = n.trim();
        names
            .iter()
            .position(|x| x == n)
            .map(|i| m | (1 << i))
            .ok_or_else(|| cfg(format!("unknown component {n}")))
    })
}

fn array_mask(names: &[String], v: &Value) -> Result<Mask, ModelError> {
    let items = v.as_array().ok_or_else(|| cfg(format!("expected a list of names, got {v}")))?;
    items.iter().try_fold(0, |m, item| {
        let n = item.as_str().ok_or_else(|| cfg("component names must be strings"))?;
        Ok(m | names_mask(names, n)?)
    })
}

pub fn parse_selection(names: &[String], v: &Value) -> Result<StratumSelection, ModelError> {
    let n = names.len();
    let obj = v.as_object().ok_or_else(|| cfg(format!("bad selection {v}")))?;
    if obj.len() != 1 {
        return Err(cfg(format!("selection must have exactly one key, got {v}")));
    }
    let (key, val) = obj.iter().next().unwrap();
    match key.as_str() {
        "whole" if val == &Value::Bool(true) => Ok(StratumSelection::whole(n)),
        "closed" => Ok(StratumSelection::from_closed(n, array_mask(names, val)?)),
        "strata" => {
            let items = val.as_array().ok_or_else(|| cfg("strata must be a list"))?;
            let masks = items
                .iter()
                .map(|s| array_mask(names, s))
                .collect::<Result<Vec<_>, _>>()?;
            StratumSelection::from_strata(n, masks)
        }
        _ => Err(cfg(format!("unknown selection {v}"))),
    }
}

fn chi_table(names: &[String], t: &BTreeMap<String, Value>) -> Result<BTreeMap<Mask, Rational>, ModelError> {
    t.iter()
        .map(|(k, v)| Ok((names_mask(names, k)?, rational(v)?)))
        .collect()
}

pub fn load_problem(path: &Path) -> Result<Problem, ModelError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| cfg(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| cfg(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("problem");
    parse_problem(&v, stem)
}

pub fn parse_problem(v: &Value, default_name: &str) -> Result<Problem, ModelError> {
    let spec: ProblemSpec = serde_json::from_value(v.clone()).map_err(|e| cfg(e.to_string()))?;
    let name = spec.name.clone().unwrap_or_else(|| default_name.to_string());
    let names: Vec<String> = spec.components.iter().map(|c| c.name.clone()).collect();
    let mults = spec
        .components
        .iter()
        .map(|c| parse_mult(&c.mult))
        .collect::<Result<Vec<_>, _>>()?;

    let ring = spec.ring.as_ref().map(load_ring).transpose()?;
    let config = match &ring {
        None => {
            if spec.components.iter().any(|c| c.class.is_some()) {
                return Err(cfg("component classes need a ring"));
            }
            None
        }
        Some(loaded) => {
            let comps = spec
                .components
                .iter()
                .zip(&mults)
                .map(|(c, (m, d))| {
                    let src = c
                        .class
                        .as_deref()
                        .ok_or_else(|| cfg(format!("component {} needs a class", c.name)))?;
                    Ok(Component {
                        name: c.name.clone(),
                        class: ChowClass::parse(&loaded.ring, src)?,
                        mult: m.clone(),
                        decomposition: d.clone(),
                    })
                })
                .collect::<Result<Vec<_>, ModelError>>()?;
            Some(NCConfig::new(loaded.ring.clone(), comps)?)
        }
    };

    let selection = match &spec.selection {
        None => StratumSelection::whole(names.len()),
        Some(v) => parse_selection(&names, v)?,
    };

    let degree = spec
        .degree
        .as_ref()
        .map(|d| -> Result<DegreeConfig, ModelError> {
            DegreeConfig {
                dim: d.dim,
                names: names.clone(),
                mults: mults.iter().map(|(m, _)| m.clone()).collect(),
                decompositions: mults.iter().map(|(_, d)| d.clone()).collect(),
                chi_closed: chi_table(&names, &d.chi_closed)?,
            }
            .validated()
        })
        .transpose()?;

    let fibered = spec
        .fibered
        .as_ref()
        .map(|f| -> Result<FiberedConfig, ModelError> {
            let base = f
                .base
                .iter()
                .map(|b| Ok((b.name.clone(), rational(&b.chi)?)))
                .collect::<Result<Vec<_>, ModelError>>()?;
            if let Some(k) = f.fiber_chi.keys().find(|k| !base.iter().any(|(b, _)| b == *k)) {
                return Err(cfg(format!("fiber table for unknown base stratum {k}")));
            }
            let tables = base
                .iter()
                .map(|(b, _)| f.fiber_chi.get(b).map_or(Ok(BTreeMap::new()), |t| chi_table(&names, t)))
                .collect::<Result<Vec<_>, _>>()?;
            FiberedConfig::new(base, names.clone(), mults.iter().map(|(m, _)| m.clone()).collect(), tables)
        })
        .transpose()?;

    if let Some(chain) = spec.expect.as_ref().and_then(|e| e.manifest.as_ref()) {
        if !spec.chains.contains_key(chain) {
            return Err(cfg(format!("expectation refers to unknown chain {chain}")));
        }
    }
    let mut chains = BTreeMap::new();
    for (cname, steps) in &spec.chains {
        let loaded = ring
            .as_ref()
            .ok_or_else(|| cfg(format!("chain {cname} needs a ring")))?;
        let mut current = loaded.ring.clone();
        let mut maps = Vec::new();
        for step in steps {
            match step {
                Value::String(s) if s == "base" => {
                    if !current.same_as(&loaded.ring) {
                        return Err(cfg(format!("chain {cname}: \"base\" must start from the problem ring")));
                    }
                    for m in loaded.chain_to_base() {
                        current = m.target().clone();
                        maps.push(m);
                    }
                }
                other => {
                    let ms: MapSpec = serde_json::from_value(other.clone())
                        .map_err(|e| cfg(format!("chain {cname}: {e}")))?;
                    let m = load_map(&current, &ms).map_err(|e| match e {
                        ChowError::Presentation(s) => ModelError::Config(format!("chain {cname}: {s}")),
                        e => e.into(),
                    })?;
                    current = m.target().clone();
                    maps.push(m);
                }
            }
        }
        chains.insert(cname.clone(), maps);
    }

    Ok(Problem {
        name,
        component_names: names,
        ring,
        config,
        degree,
        fibered,
        selection,
        chains,
        expect: spec.expect,
    })
}
