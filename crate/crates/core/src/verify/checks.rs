use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::CheckReport;
use crate::celestial::{
    alt_form_average, alt_form_strata, csm_stratum, integrate_class, integrate_degree, manifest,
    CelestialError, ManifestationChain,
};
use crate::chow::{blowup_point_named, ChowClass, ChowRing};
use crate::model::{
    blowup_transport, subsets_of, BlowupStep, DegreeConfig, Mask, NCConfig, StratumSelection,
};
use crate::{RatFunc, Rational};

type Result<T> = std::result::Result<T, CelestialError>;

fn describe(config: &NCConfig) -> String {
    let comps: Vec<String> = config
        .components()
        .iter()
        .map(|c| format!("{}={} m={}", c.name, c.class, c.mult))
        .collect();
    format!("{} {{{}}}", config.ring().label(), comps.join(", "))
}

/// Push-forward of the blown-up integral equals the original integral.
pub fn check_key(config: &NCConfig, sel: &StratumSelection, step: &BlowupStep) -> Result<CheckReport> {
    let before = integrate_class(config, sel)?;
    let t = blowup_transport(config, step, sel)?;
    let after = integrate_class(&t.config, &t.selection)?;
    let pushed = t.blowup.map.push_forward(&after)?;
    Ok(CheckReport::compare(
        "key",
        format!("{} center on {:#b}", describe(config), step.contains),
        &pushed,
        &before,
    ))
}

/// One side of a change of variables: a configuration with its selection
/// and the chain manifesting it on the common target.
#[derive(Clone, Debug)]
pub struct CovSide {
    pub config: NCConfig,
    pub selection: StratumSelection,
    pub chain: ManifestationChain,
}

/// `∫_X 1(D) = ∫_Y 1(D + K_ρ)`, both manifested on `X`.
///
/// When `x` lives on `X` itself and `y`'s chain carries pull-backs, the
/// divisor identity `π^*D_X + K_ρ = D_Y` is enforced first.
pub fn check_cov(x: &CovSide, y: &CovSide, k_rho: &ChowClass) -> Result<CheckReport> {
    if x.chain.is_empty() && y.chain.maps().iter().all(|m| m.has_pullback()) {
        let expected = y.chain.pull_back(&x.config.divisor())?.checked_add(k_rho)?;
        if expected != y.config.divisor() {
            return Err(CelestialError::PreconditionViolated(format!(
                "pulled-back divisor plus K is {expected}, configuration carries {}",
                y.config.divisor()
            )));
        }
    }
    let lhs = manifest(&integrate_class(&x.config, &x.selection)?, &x.chain)?;
    let rhs = manifest(&integrate_class(&y.config, &y.selection)?, &y.chain)?;
    Ok(CheckReport::compare(
        "cov",
        format!("{} vs {}", describe(&x.config), describe(&y.config)),
        &lhs,
        &rhs,
    ))
}

/// The constructible set `S` for a degree-level invariance check.
#[derive(Clone, Debug)]
pub enum DenloeSet {
    Strata(StratumSelection),
    /// The blown-up point itself.
    CenterPoint,
}

/// `Σ χ(E_I° ∩ S)/Π(1+m_i)` is unchanged by a point blow-up.
pub fn check_denloe(dc: &DegreeConfig, set: &DenloeSet, step: &BlowupStep) -> Result<CheckReport> {
    let after_config = dc.transport_point(step)?;
    let (before, after, what) = match set {
        DenloeSet::Strata(sel) => (
            integrate_degree(dc, sel)?,
            integrate_degree(&after_config, &sel.transport_point(step.contains))?,
            "S from strata",
        ),
        DenloeSet::CenterPoint => {
            let mut before = RatFunc::one();
            for (j, m) in dc.mults.iter().enumerate() {
                if step.contains & (1 << j) != 0 {
                    let denom = &RatFunc::one() + m;
                    before = before
                        .checked_div(&denom)
                        .map_err(|_| CelestialError::UndefinedMultiplicity(dc.names[j].clone()))?;
                }
            }
            let exceptional = StratumSelection::from_closed(after_config.len(), 1 << dc.len());
            (before, integrate_degree(&after_config, &exceptional)?, "S = center")
        }
    };
    Ok(CheckReport::compare(
        "denloe",
        format!("{what}, center on {:#b}, {} components", step.contains, dc.len()),
        &after,
        &before,
    ))
}

/// The manifestation formula and both alternate forms agree.
pub fn check_altexp(config: &NCConfig) -> Result<CheckReport> {
    let direct = integrate_class(config, &StratumSelection::whole(config.len()))?;
    let strata = alt_form_strata(config)?;
    let average = alt_form_average(config)?;
    let rhs = if strata != direct { strata } else { average };
    Ok(CheckReport::compare("altexp", describe(config), &direct, &rhs))
}

/// `∫_{A∪B} = ∫_A + ∫_B` for disjoint selections.
pub fn check_additivity(config: &NCConfig, a: &StratumSelection, b: &StratumSelection) -> Result<CheckReport> {
    if !a.is_disjoint(b) {
        return Err(CelestialError::PreconditionViolated("selections overlap".into()));
    }
    let union = integrate_class(config, &a.union(b)?)?;
    let sum = integrate_class(config, a)?.checked_add(&integrate_class(config, b)?)?;
    Ok(CheckReport::compare(
        "additivity",
        format!("{} |A|={} |B|={}", describe(config), a.len(), b.len()),
        &union,
        &sum,
    ))
}

/// `Σ_I c_SM(E_I°) = c(TV) ∩ [V]`.
pub fn check_csm_normalization(config: &NCConfig) -> Result<CheckReport> {
    let mut total = ChowClass::zero(config.ring().clone());
    for mask in subsets_of(full_mask(config.len())) {
        total = total.checked_add(&csm_stratum(config, mask)?)?;
    }
    let expected = config.ring().tangent_chern()?;
    Ok(CheckReport::compare("csm-normalization", describe(config), &total, &expected))
}

/// Evaluating the symbolic integral at `x` equals integrating the
/// specialized multiplicities.
pub fn check_specialization(config: &NCConfig, sel: &StratumSelection, x: &Rational) -> Result<CheckReport> {
    let symbolic = integrate_class(config, sel)?.evaluate(x)?;
    let mults = config
        .mults()
        .iter()
        .map(|m| m.evaluate(x).map(RatFunc::constant))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let special = integrate_class(&config.with_mults(&mults), sel)?;
    Ok(CheckReport::compare(
        "specialization",
        format!("{} at m={x}", describe(config)),
        &symbolic,
        &special,
    ))
}

fn full_mask(n: usize) -> Mask {
    if n == 0 {
        0
    } else {
        Mask::MAX >> (Mask::BITS as usize - n)
    }
}

/// Resolution data of one side of a K-equivalence-type comparison.
#[derive(Clone, Debug)]
pub struct SpellData {
    /// Configuration at the common ring carrying `D + K`.
    pub config: NCConfig,
    /// Pull-back of the divisor.
    pub divisor: ChowClass,
    /// Relative canonical divisor of the resolution.
    pub canonical: ChowClass,
    /// Chain from the common ring down to the variety (with pull-backs).
    pub chain: ManifestationChain,
}

fn pulled_c1(data: &SpellData) -> Result<ChowClass> {
    let target = data
        .chain
        .maps()
        .last()
        .map(|m| m.target().clone())
        .unwrap_or_else(|| data.config.ring().clone());
    let c1 = target.tangent_chern()?.graded_piece(1);
    Ok(data.chain.pull_back(&c1)?)
}

/// `∫_X 1(D_X) = ∫_Y 1(D_Y)` at the common ring, and
/// `(c₁(X) − D_Y)^i · ∫ = (c₁(Y) − D_X)^i · ∫`. Degrees are reported in the
/// context line.
pub fn check_spell_elgen(x: &SpellData, y: &SpellData, sel: &StratumSelection, i: u32) -> Result<CheckReport> {
    let kx = x.divisor.checked_add(&x.canonical)?;
    let ky = y.divisor.checked_add(&y.canonical)?;
    if kx != ky {
        return Err(CelestialError::PreconditionViolated(format!("D_X + K_X = {kx} but D_Y + K_Y = {ky}")));
    }
    for (side, data, sum) in [("X", x, &kx), ("Y", y, &ky)] {
        if &data.config.divisor() != sum {
            return Err(CelestialError::PreconditionViolated(format!(
                "{side}: configuration divisor {} differs from D + K = {sum}",
                data.config.divisor()
            )));
        }
    }
    let int_x = integrate_class(&x.config, sel)?;
    let int_y = integrate_class(&y.config, sel)?;
    if int_x != int_y {
        return Ok(CheckReport::compare("spell", "integrals at the common ring", &int_x, &int_y));
    }
    let lhs = pulled_c1(x)?.checked_sub(&y.divisor)?.pow(i)?.checked_mul(&int_x)?;
    let rhs = pulled_c1(y)?.checked_sub(&x.divisor)?.pow(i)?.checked_mul(&int_y)?;
    Ok(CheckReport::compare(
        "spell",
        format!("i={i}, degrees {} and {}", lhs.degree(), rhs.degree()),
        &lhs,
        &rhs,
    ))
}

/// The blow-up identities for a point center `B` in `V`:
/// push-forwards of `c(TW)`, `c(TF) ∩ [F]`, `c(TW)/(1+F)` and, for divisors
/// `(E_j, through_B)` with at least one through `B`, of
/// `c(TW)/((1+F)Π(1+F_j))`. Each identity yields one report.
pub fn check_necfacts(base: &std::sync::Arc<ChowRing>, divisors: &[(ChowClass, bool)]) -> Result<Vec<CheckReport>> {
    let d = base.dim();
    let name = ["e", "f", "g", "x"]
        .into_iter()
        .find(|n| base.basis().iter().all(|b| !b.name.starts_with(n)))
        .unwrap_or("exc");
    let bl = blowup_point_named(base, name)?;
    let cw = bl.ring.tangent_chern()?;
    let cv = base.tangent_chern()?;
    let pt = base.point_class()?;
    let f = &bl.exceptional;
    let one_f = bl.ring.fundamental().checked_add(f)?;
    let ctx = |k: usize| format!("({k}) on {} -> {}", bl.ring.label(), base.label());
    let push = |c: &ChowClass| bl.map.push_forward(c);
    let qd = |n: i64| Rational::from_integer(n.into());

    let mut reports = vec![
        CheckReport::compare(
            "necfacts",
            ctx(2),
            &push(&cw)?,
            &cv.checked_add(&pt.scale_rational(&qd(d as i64 - 1)))?,
        ),
        CheckReport::compare(
            "necfacts",
            ctx(3),
            &push(&cw.checked_div(&one_f)?.checked_mul(f)?)?,
            &pt.scale_rational(&qd(d as i64)),
        ),
        CheckReport::compare("necfacts", ctx(4), &push(&cw.checked_div(&one_f)?)?, &cv.checked_sub(&pt)?),
    ];
    if divisors.iter().any(|(_, through)| *through) {
        let mut upstairs = cw.checked_div(&one_f)?;
        let mut downstairs = cv.clone();
        for (e, through) in divisors {
            let mult = if *through { Rational::one() } else { Rational::zero() };
            let fj = bl.proper_transform(e, &mult)?;
            upstairs = upstairs.checked_div(&bl.ring.fundamental().checked_add(&fj)?)?;
            downstairs = downstairs.checked_div(&base.fundamental().checked_add(e)?)?;
        }
        reports.push(CheckReport::compare("necfacts", ctx(5), &push(&upstairs)?, &downstairs));
    }
    Ok(reports)
}

/// Degree set of `∫ 1(K)` over canonical representatives. With a declared
/// Calabi-Yau model the set must be `{χ(Y)}`; otherwise it is only reported.
pub fn check_can_degree(
    representatives: &[(NCConfig, ManifestationChain)],
    calabi_yau_chi: Option<&Rational>,
) -> Result<CheckReport> {
    let mut degrees = BTreeSet::new();
    for (config, chain) in representatives {
        let whole = StratumSelection::whole(config.len());
        let deg = manifest(&integrate_class(config, &whole)?, chain)?.degree();
        let value = deg.as_constant().ok_or_else(|| {
            CelestialError::PreconditionViolated(format!("degree {deg} is not a number"))
        })?;
        degrees.insert(value);
    }
    let render = |s: &BTreeSet<Rational>| {
        let parts: Vec<String> = s.iter().map(ToString::to_string).collect();
        format!("{{{}}}", parts.join(", "))
    };
    let lhs = render(&degrees);
    let rhs = match calabi_yau_chi {
        Some(chi) => render(&BTreeSet::from([chi.clone()])),
        None => lhs.clone(),
    };
    Ok(CheckReport::compare(
        "can-degree",
        format!("{} representatives", representatives.len()),
        &lhs,
        &rhs,
    ))
}
