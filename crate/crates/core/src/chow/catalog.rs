//! Closed-form constructors: projective spaces, products, point blow-ups.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::{BasisElement, ChowClass, ChowError, ChowRing, PushForwardMap, RingParts};
use crate::Rational;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn binomial(n: usize, k: usize) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * q((n - i) as i64) / q(i as i64 + 1))
}

fn power_name(var: &str, k: usize) -> String {
    if k == 1 {
        var.to_string()
    } else {
        format!("{var}^{k}")
    }
}

/// The point ring `A_*(pt) = Q`.
pub fn point_ring() -> Arc<ChowRing> {
    projective(0)
}

/// `P^n` with hyperplane class `h`.
pub fn projective(n: usize) -> Arc<ChowRing> {
    projective_named(n, "h")
}

/// `P^n` with basis `[V], var, var^2, …, var^n`, `deg var^n = 1` and
/// `c(TP^n) = (1+var)^{n+1}` truncated.
pub fn projective_named(n: usize, var: &str) -> Arc<ChowRing> {
    let r = n + 1;
    let basis = (0..r)
        .map(|k| BasisElement {
            name: if k == 0 { "[V]".into() } else { power_name(var, k) },
            codim: k,
        })
        .collect();
    let products = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let mut v = vec![Rational::zero(); r];
                    if i + j <= n {
                        v[i + j] = Rational::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut degree = vec![None; r];
    degree[n] = Some(Rational::one());
    let chern = (0..r).map(|k| binomial(n + 1, k)).collect();
    let mut point = vec![Rational::zero(); r];
    point[n] = Rational::one();
    let ring = ChowRing::from_parts(RingParts {
        label: if n == 0 { "pt".into() } else { format!("P{n}") },
        dim: n,
        basis,
        products: Some(products),
        degree,
        tangent_chern: Some(chern),
        point: Some(point),
    })
    .expect("projective presentation is valid");
    Arc::new(ring)
}

/// Inserts a factor index after the leading letters of each `*`-separated
/// piece: `h^2` becomes `h1^2`.
fn indexed_name(name: &str, idx: usize) -> String {
    name.split('*')
        .map(|piece| {
            let cut = piece
                .find(|c: char| !c.is_ascii_alphabetic())
                .unwrap_or(piece.len());
            format!("{}{idx}{}", &piece[..cut], &piece[cut..])
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn require_products(r: &ChowRing) -> Result<(), ChowError> {
    if r.has_products() {
        Ok(())
    } else {
        Err(ChowError::UnsupportedCatalog(format!(
            "{} has no product table",
            r.label()
        )))
    }
}

/// Tensor product `R1 ⊗ R2` with multiplicative degree and the external
/// product of tangent Chern classes. Colliding basis names get factor indices.
pub fn product(r1: &Arc<ChowRing>, r2: &Arc<ChowRing>) -> Result<Arc<ChowRing>, ChowError> {
    require_products(r1)?;
    require_products(r2)?;
    let clash = r1
        .basis()
        .iter()
        .skip(1)
        .any(|b| r2.index_of(&b.name).is_some_and(|j| j != 0));
    let (a, b) = if clash {
        (
            Arc::new(r1.renamed(|s| indexed_name(s, 1), r1.label().into())),
            Arc::new(r2.renamed(|s| indexed_name(s, 2), r2.label().into())),
        )
    } else {
        (r1.clone(), r2.clone())
    };

    let mut pairs: Vec<(usize, usize)> = (0..a.rank())
        .flat_map(|i| (0..b.rank()).map(move |j| (i, j)))
        .collect();
    pairs.sort_by_key(|&(i, j)| (a.codim(i) + b.codim(j), j, i));
    let pos = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).unwrap();
    let n = pairs.len();
    let dim = a.dim() + b.dim();

    let basis = pairs
        .iter()
        .map(|&(i, j)| BasisElement {
            name: match (i, j) {
                (0, 0) => "[V]".to_string(),
                (0, j) => b.name(j).to_string(),
                (i, 0) => a.name(i).to_string(),
                (i, j) => format!("{}*{}", a.name(i), b.name(j)),
            },
            codim: a.codim(i) + b.codim(j),
        })
        .collect();
    let tensor = |u: &[Rational], v: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (i, x) in u.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in v.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                out[pos(i, j)] += x * y;
            }
        }
        out
    };
    let mut products = vec![vec![Vec::new(); n]; n];
    for (s, &(i1, j1)) in pairs.iter().enumerate() {
        for (t, &(i2, j2)) in pairs.iter().enumerate() {
            products[s][t] = tensor(&a.product_vector(i1, i2)?, &b.product_vector(j1, j2)?);
        }
    }
    let degree = pairs
        .iter()
        .map(|&(i, j)| {
            (a.codim(i) + b.codim(j) == dim).then(|| a.degree_of_basis(i) * b.degree_of_basis(j))
        })
        .collect();
    let chern = match (a.tangent_chern_raw(), b.tangent_chern_raw()) {
        (Some(u), Some(v)) => Some(tensor(u, v)),
        _ => None,
    };
    let point = match (a.point_raw(), b.point_raw()) {
        (Some(u), Some(v)) => Some(tensor(u, v)),
        _ => None,
    };
    let label = match (a.dim(), b.dim()) {
        (0, _) => b.label().to_string(),
        (_, 0) => a.label().to_string(),
        _ => format!("{}x{}", a.label(), b.label()),
    };
    Ok(Arc::new(ChowRing::from_parts(RingParts {
        label,
        dim,
        basis,
        products: Some(products),
        degree,
        tangent_chern: chern,
        point,
    })?))
}

/// Output of a blow-up constructor: the new ring, the blow-down map, the
/// exceptional divisor class, the center's `c(TB) ∩ [B]` in the target, and
/// the codimension of the center.
#[derive(Clone, Debug)]
pub struct Blowup {
    pub ring: Arc<ChowRing>,
    pub map: PushForwardMap,
    pub exceptional: ChowClass,
    pub center: ChowClass,
    pub codim: usize,
}

impl Blowup {
    /// `pullback(D) − mult · E` for a divisor `D` on the target.
    pub fn proper_transform(&self, divisor: &ChowClass, mult: &Rational) -> Result<ChowClass, ChowError> {
        divisor.ensure_divisor()?;
        self.map
            .pull_back(divisor)?
            .checked_sub(&self.exceptional.scale_rational(mult))
    }
}

/// Blow-up of a ring at a point, exceptional class named `e`.
pub fn blowup_point(base: &Arc<ChowRing>) -> Result<Blowup, ChowError> {
    blowup_point_named(base, "e")
}

/// Blow-up at a point. New basis `e, e^2, …, e^{n-1}` with `π*a · e = 0` for
/// `a` of positive codimension and `e^n = (−1)^{n−1}·pt`. The tangent Chern
/// class is `π*c(TV) + (1+e)(1−e)^n − 1`.
pub fn blowup_point_named(base: &Arc<ChowRing>, name: &str) -> Result<Blowup, ChowError> {
    let n = base.dim();
    if n == 0 {
        return Err(ChowError::UnsupportedCatalog("cannot blow up a point in a point".into()));
    }
    require_products(base)?;
    let point = base.point_raw().map(<[Rational]>::to_vec).ok_or_else(|| {
        ChowError::UnsupportedCatalog(format!("{} has no designated point class", base.label()))
    })?;
    if base.index_of(name).is_some() || (2..n).any(|k| base.index_of(&power_name(name, k)).is_some()) {
        return Err(ChowError::Presentation(format!(
            "exceptional name {name} already used in {}",
            base.label()
        )));
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Slot {
        Base(usize),
        Exc(usize),
    }
    let mut slots: Vec<Slot> = (0..base.rank()).map(Slot::Base).collect();
    slots.extend((1..n).map(Slot::Exc));
    let codim = |s: &Slot| match *s {
        Slot::Base(i) => base.codim(i),
        Slot::Exc(k) => k,
    };
    slots.sort_by_key(codim);
    let r = slots.len();
    let at = |s: Slot| slots.iter().position(|&x| x == s).unwrap();
    let lift = |v: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); r];
        for (i, c) in v.iter().enumerate() {
            out[at(Slot::Base(i))] = c.clone();
        }
        out
    };
    let sign = if n % 2 == 1 { q(1) } else { q(-1) };

    let mut products = vec![vec![vec![Rational::zero(); r]; r]; r];
    for (s, &x) in slots.iter().enumerate() {
        for (t, &y) in slots.iter().enumerate() {
            products[s][t] = match (x, y) {
                (Slot::Base(i), Slot::Base(j)) => lift(&base.product_vector(i, j)?),
                (Slot::Base(0), Slot::Exc(k)) | (Slot::Exc(k), Slot::Base(0)) => {
                    let mut v = vec![Rational::zero(); r];
                    v[at(Slot::Exc(k))] = Rational::one();
                    v
                }
                (Slot::Base(_), Slot::Exc(_)) | (Slot::Exc(_), Slot::Base(_)) => vec![Rational::zero(); r],
                (Slot::Exc(j), Slot::Exc(k)) => {
                    let mut v = vec![Rational::zero(); r];
                    if j + k < n {
                        v[at(Slot::Exc(j + k))] = Rational::one();
                    } else if j + k == n {
                        v = lift(&point).into_iter().map(|c| c * &sign).collect();
                    }
                    v
                }
            };
        }
    }
    let basis = slots
        .iter()
        .map(|s| BasisElement {
            name: match *s {
                Slot::Base(i) => base.name(i).to_string(),
                Slot::Exc(k) => power_name(name, k),
            },
            codim: codim(s),
        })
        .collect();
    let degree = slots
        .iter()
        .map(|s| match *s {
            Slot::Base(i) if base.codim(i) == n => Some(base.degree_of_basis(i).clone()),
            _ => None,
        })
        .collect();
    let ring = Arc::new(ChowRing::from_parts(RingParts {
        label: format!("Bl({})", base.label()),
        dim: n,
        basis,
        products: Some(products),
        degree,
        tangent_chern: None,
        point: Some(lift(&point)),
    })?);
    let exceptional = if n == 1 {
        ring.point_class()?
    } else {
        ChowClass::basis(ring.clone(), at(Slot::Exc(1)))
    };
    let ring = match base.tangent_chern_raw() {
        None => ring,
        Some(c) => {
            let one = ring.fundamental();
            let plus = one.checked_add(&exceptional)?;
            let minus = one.checked_sub(&exceptional)?;
            let corr = plus.checked_mul(&minus.pow(n as u32)?)?.checked_sub(&one)?;
            let total = ChowClass::from_rationals(ring.clone(), &lift(c)).checked_add(&corr)?;
            let raw = total
                .coeffs()
                .iter()
                .map(|x| x.as_constant().expect("constant coefficients"))
                .collect();
            Arc::new(ring.with_tangent_chern(raw)?)
        }
    };
    let exceptional = ChowClass::from_coeffs(ring.clone(), exceptional.coeffs().to_vec())?;

    let forward = slots
        .iter()
        .map(|s| {
            let mut v = vec![Rational::zero(); base.rank()];
            if let Slot::Base(i) = *s {
                v[i] = Rational::one();
            }
            v
        })
        .collect();
    let pullback = (0..base.rank()).map(|i| {
        let mut v = vec![Rational::zero(); r];
        v[at(Slot::Base(i))] = Rational::one();
        v
    });
    let map = PushForwardMap::new(ring.clone(), base.clone(), forward, Some(pullback.collect()))?;
    let center = ChowClass::from_rationals(base.clone(), &point);
    Ok(Blowup {
        ring,
        map,
        exceptional,
        center,
        codim: n,
    })
}
