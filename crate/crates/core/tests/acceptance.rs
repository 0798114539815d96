//! Acceptance criteria, one line each. Every comparison is exact equality.
//! Oracles are built here by hand (binomial Chern classes, truncated power
//! series, literal expected classes) rather than taken from the engine.

use std::collections::BTreeSet;
use std::fmt::{Debug, Display};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use celint_core::celestial::{
    csm_set, integrate_class, integrate_degree, ix_function, manifest, stringy_class, stringy_coefficient,
    zeta_degree, CelestialError, Flavor, ManifestationChain,
};
use celint_core::chow::{blowup_point, product, projective, projective_named, ChowClass, ChowRing};
use celint_core::model::file::{load_problem, Problem};
use celint_core::model::{
    BlowupStep, Component, DegreeConfig, Mask, NCConfig, StratumSelection,
};
use celint_core::verify::suites::{run_all, seed_from_env, SuiteOptions};
use celint_core::verify::{check_spell_elgen, SpellData};
use celint_core::{RatFunc, Rational};

type Outcome = Result<String, String>;

fn fixture(name: &str) -> Result<Problem, String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"));
    load_problem(&path).map_err(|e| format!("{name}: {e}"))
}

fn err<E: Display>(e: E) -> String {
    e.to_string()
}

fn same<T: PartialEq + Debug>(what: &str, lhs: &T, rhs: &T) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: {lhs:?} != {rhs:?}"))
    }
}

fn same_shown<T: PartialEq + Display>(what: &str, lhs: &T, rhs: &T) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{what}: {lhs} != {rhs}"))
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn qq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn c(n: i64) -> RatFunc {
    RatFunc::from_i64(n)
}

fn m() -> RatFunc {
    RatFunc::var()
}

fn div(a: &RatFunc, b: &RatFunc) -> RatFunc {
    a.checked_div(b).expect("nonzero divisor")
}

/// Class from `(basis name, coefficient)` pairs.
fn class(ring: &Arc<ChowRing>, terms: &[(&str, RatFunc)]) -> Result<ChowClass, String> {
    let mut coeffs = vec![RatFunc::zero(); ring.rank()];
    for (name, v) in terms {
        let i = ring.index_of(name).ok_or_else(|| format!("no basis element {name}"))?;
        coeffs[i] = &coeffs[i] + v;
    }
    ChowClass::from_coeffs(ring.clone(), coeffs).map_err(err)
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `(1+h)^{n+1}` on `P^n`, named `h^k`.
fn chern_projective(ring: &Arc<ChowRing>, n: i64) -> Result<ChowClass, String> {
    let names: Vec<String> = (0..=n)
        .map(|k| match k {
            0 => "[V]".to_string(),
            1 => "h".to_string(),
            _ => format!("h^{k}"),
        })
        .collect();
    let terms: Vec<(&str, RatFunc)> = names
        .iter()
        .enumerate()
        .map(|(k, s)| (s.as_str(), c(binomial(n + 1, k as i64))))
        .collect();
    class(ring, &terms)
}

fn whole(config: &NCConfig) -> StratumSelection {
    StratumSelection::whole(config.len())
}

fn empty_config(ring: &Arc<ChowRing>) -> Result<NCConfig, String> {
    NCConfig::new(ring.clone(), Vec::new()).map_err(err)
}

fn chain(p: &Problem, name: &str) -> Result<ManifestationChain, String> {
    ManifestationChain::new(p.chain(name).map_err(err)?.to_vec()).map_err(err)
}

fn integral_at(p: &Problem, chain_name: Option<&str>) -> Result<ChowClass, String> {
    let config = p.require_config().map_err(err)?;
    let i = integrate_class(config, &p.selection).map_err(err)?;
    match chain_name {
        Some(n) => manifest(&i, &chain(p, n)?).map_err(err),
        None => Ok(i),
    }
}

fn criterion_1() -> Outcome {
    let p1 = projective(1);
    let p2 = projective(2);
    let p3 = projective(3);
    let l = projective_named(1, "L");
    let p1p1 = product(&l, &l).map_err(err)?;
    let cases: Vec<(&str, Arc<ChowRing>, ChowClass, i64)> = vec![
        ("P1", p1.clone(), chern_projective(&p1, 1)?, 2),
        ("P2", p2.clone(), chern_projective(&p2, 2)?, 3),
        ("P3", p3.clone(), chern_projective(&p3, 3)?, 4),
        (
            "P1xP1",
            p1p1.clone(),
            class(&p1p1, &[("[V]", c(1)), ("L1", c(2)), ("L2", c(2)), ("L1*L2", c(4))])?,
            4,
        ),
    ];
    for (name, ring, expected, chi) in cases {
        let config = empty_config(&ring)?;
        let got = integrate_class(&config, &whole(&config)).map_err(err)?;
        same_shown(name, &got, &expected)?;
        same_shown(&format!("chi({name})"), &got.degree(), &c(chi))?;
    }
    Ok("c(TX) for P1, P2, P3, P1xP1; chi 2, 3, 4, 4".into())
}

/// Truncated power series in one divisor class `h` with `h^{n+1} = 0`.
fn series_mul(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    let n = a.len();
    let mut out = vec![RatFunc::zero(); n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] = &out[i + j] + &(&a[i] * &b[j]);
        }
    }
    out
}

fn series_inv_linear(a: &RatFunc, n: usize) -> Vec<RatFunc> {
    // 1/(1 + a h) = Σ (−a)^k h^k
    let neg = -a;
    (0..n).map(|k| neg.pow(k as i32).expect("power")).collect()
}

fn criterion_2() -> Outcome {
    let p = fixture("p2_line")?;
    let got = integral_at(&p, None)?;
    // (1+h)^3 / (1+h) · (1 + h/(1+m)) at m = 1.
    let cx = vec![c(1), c(3), c(3)];
    let weight = vec![c(1), div(&c(1), &c(2)), c(0)];
    let oracle = series_mul(&series_mul(&cx, &series_inv_linear(&c(1), 3)), &weight);
    let ring = p.ring.as_ref().ok_or("no ring")?.ring.clone();
    let expected = class(&ring, &[("[V]", oracle[0].clone()), ("h", oracle[1].clone()), ("h^2", oracle[2].clone())])?;
    same_shown("P2 line", &got, &expected)?;
    same(
        "rendering",
        &got.to_string(),
        &"[V] + (5/2)*h + 2*h^2".to_string(),
    )?;
    Ok(got.to_string())
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    for (name, n, d, z) in [
        ("dnotdiv_p2", 2i64, 2i64, vec![("h^2", 1)]),
        ("dnotdiv_p3", 3, 3, vec![("h^3", 1)]),
        ("dnotdiv_p3_line", 3, 2, vec![("h^2", 1), ("h^3", 2)]),
    ] {
        let p = fixture(name)?;
        let got = integral_at(&p, Some("down"))?;
        let target = got.ring().clone();
        let factor = div(&m(), &(&c(d) + &m()));
        let cz: Vec<(&str, RatFunc)> = z.iter().map(|(s, k)| (*s, c(*k))).collect();
        let correction = class(&target, &cz)?.scale(&factor);
        let expected = chern_projective(&target, n)?
            .checked_sub(&correction)
            .map_err(err)?;
        same_shown(name, &got, &expected)?;
        notes.push(format!("{name}: {got}"));
    }
    Ok(notes.join("; "))
}

fn criterion_4() -> Outcome {
    let a = fixture("diffman_p2")?;
    let in_p1p1 = integral_at(&a, Some("toP1xP1"))?;
    let expected_a = class(
        in_p1p1.ring(),
        &[
            ("[V]", c(1)),
            ("L1", div(&c(3), &c(2))),
            ("L2", div(&c(3), &c(2))),
            ("L1*L2", c(3)),
        ],
    )?;
    same_shown("P2 in P1xP1", &in_p1p1, &expected_a)?;
    same_shown("deg", &in_p1p1.degree(), &c(3))?;

    let b = fixture("diffman_p1p1")?;
    let in_p2 = integral_at(&b, Some("toP2"))?;
    let expected_b = class(in_p2.ring(), &[("[V]", c(1)), ("h", div(&c(5), &c(2))), ("h^2", c(4))])?;
    same_shown("P1xP1 in P2", &in_p2, &expected_b)?;
    same_shown("deg", &in_p2.degree(), &c(4))?;
    Ok(format!("{in_p1p1}; {in_p2}"))
}

fn criterion_5() -> Outcome {
    let p = fixture("cusp")?;
    let dc = p.require_degree().map_err(err)?;
    let z = zeta_degree(dc, &p.selection).map_err(err)?;
    let expected = &c(3) - &div(&(&c(12) * &m()), &(&c(5) + &(&c(6) * &m())));
    same_shown("zeta", &z.value, &expected)?;
    same("poles", &z.poles.rational, &BTreeSet::from([qq(-5, 6)]))?;
    same("irrational poles", &z.poles.irrational_factors.len(), &0)?;
    same("Z(1)", &z.value.evaluate(&q(1)).map_err(err)?, &qq(21, 11))?;
    // The class-level zeta, pushed to P2, has the same degree.
    let config = p.require_config().map_err(err)?;
    let class_zeta = celint_core::celestial::zeta_class(config, &p.selection).map_err(err)?;
    let pushed = manifest(&class_zeta, &chain(&p, "down")?).map_err(err)?;
    same_shown("class-level degree", &pushed.degree(), &expected)?;
    Ok(format!("Z = {} (3 - 12*m/(5+6*m)), poles {}, Z(1) = 21/11", z.value, z.poles))
}

fn criterion_6() -> Outcome {
    let p = fixture("ids")?;
    let fc = p.require_fibered().map_err(err)?;
    let on_d = ["D-(S+p)", "S.D", "p"];
    let in_s = ["S-D", "S.D"];
    let drop = div(&m(), &(&c(1) + &m()));
    let f = ix_function(fc, &p.selection).map_err(err)?;
    for (name, _, v) in &f.entries {
        let expected = if on_d.contains(&name.as_str()) { &c(1) - &drop } else { c(1) };
        same_shown(&format!("I_X at {name}"), v, &expected)?;
    }
    let s = p.parse_selection(&serde_json::json!({"closed": ["S"]})).map_err(err)?;
    let fs = ix_function(fc, &s).map_err(err)?;
    for (name, _, v) in &fs.entries {
        let in_s_here = in_s.contains(&name.as_str());
        let expected = match (in_s_here, on_d.contains(&name.as_str())) {
            (true, true) => &c(1) - &drop,
            (true, false) => c(1),
            _ => c(0),
        };
        same_shown(&format!("I_X(S) at {name}"), v, &expected)?;
    }
    Ok(format!("whole: {}; S: {}", f.to_string().replace('\n', ", "), fs.to_string().replace('\n', ", ")))
}

fn criterion_7() -> Outcome {
    let p = fixture("cusp")?;
    let config = p.require_config().map_err(err)?;
    let curve = p
        .parse_selection(&serde_json::json!({"closed": ["D", "E1", "E2", "E3"]}))
        .map_err(err)?;
    let csm = csm_set(config, &curve, &chain(&p, "down")?).map_err(err)?;
    // The normalization P1 -> C is bijective, so chi(C) = chi(P1) = 2.
    let chi_c = c(2);
    let expected = class(csm.ring(), &[("h", c(3)), ("h^2", chi_c.clone())])?;
    same_shown("csm", &csm, &expected)?;
    same_shown("deg", &csm.degree(), &chi_c)?;

    // Degree-level sum over open strata, Möbius inversion done here.
    let dc = p.require_degree().map_err(err)?;
    let closed = &dc.chi_closed;
    let n = dc.len();
    let ks: Vec<Rational> = dc
        .decompositions
        .iter()
        .map(|d| d.as_ref().map(|d| d.k.clone()).ok_or("missing k"))
        .collect::<Result<_, _>>()?;
    let mut sum = q(0);
    for i in 1..(1u64 << n) {
        let mut open = q(0);
        for (j, v) in closed {
            if j & i == i {
                let sign = if (j.count_ones() - i.count_ones()) % 2 == 0 { q(1) } else { q(-1) };
                open += sign * v;
            }
        }
        let denom: Rational = (0..n)
            .filter(|b| i & (1 << b) != 0)
            .map(|b| q(1) + &ks[b])
            .product();
        sum += open / denom;
    }
    same("degree-level sum", &sum, &q(2))?;
    Ok(format!("c_SM = {csm}, sum over strata = {sum}"))
}

fn criterion_8() -> Outcome {
    let p = fixture("flop")?;
    let got = integral_at(&p, Some("toX"))?;
    let one_m = &c(1) + &m();
    let sq = &one_m * &one_m;
    let expected = class(
        got.ring(),
        &[
            ("[X]", c(1)),
            ("D", div(&(&c(3) + &(&c(2) * &m())), &one_m)),
            ("L", div(&(&(&c(2) + &m()) * &(&c(4) + &(&c(3) * &m()))), &sq)),
            ("P", div(&(&(&c(3) + &m()) * &(&c(2) + &m())), &sq)),
        ],
    )?;
    same_shown("flop", &got, &expected)?;
    let at0 = got.evaluate(&q(0)).map_err(err)?;
    let expected0 = class(got.ring(), &[("[X]", c(1)), ("D", c(3)), ("L", c(8)), ("P", c(6))])?;
    same_shown("m = 0", &at0, &expected0)?;
    same_shown("stringy degree", &at0.degree(), &c(6))?;
    let stringy = stringy_class(p.require_config().map_err(err)?, &chain(&p, "toX")?).map_err(err)?;
    same_shown("stringy class", &stringy, &expected0)?;
    let at_minus2 = got.evaluate(&q(-2)).map_err(err)?;
    same_shown("m = -2", &at_minus2, &class(got.ring(), &[("[X]", c(1)), ("D", c(1))])?)?;
    Ok(format!("m=0: {at0}; m=-2: {at_minus2}"))
}

/// Euler characteristic of a smooth degree-`k` hypersurface of `P^{d}`:
/// top coefficient of `(1+h)^{d+1} · k h / (1 + k h)`.
fn hypersurface_chi(d: i64, k: i64) -> Rational {
    let n = (d + 1) as usize;
    let cx: Vec<RatFunc> = (0..n as i64).map(|j| c(binomial(d + 1, j))).collect();
    let mut kh = vec![RatFunc::zero(); n];
    kh[1] = c(k);
    let s = series_mul(&series_mul(&cx, &series_inv_linear(&c(k), n)), &kh);
    s[d as usize].as_constant().expect("constant")
}

fn criterion_9() -> Outcome {
    let mut checked = 0;
    for d in 2..=4i64 {
        for k in 1..=d {
            // Fiber over a point of B: a degree-k hypersurface of P^d,
            // weighted by 1/(1 + discrepancy); the correction replaces the point.
            let chi_f = hypersurface_chi(d, k);
            for (flavor, disc) in [(Flavor::UpperOmega, d - 1), (Flavor::LowerOmega, d - k)] {
                let oracle = chi_f.clone() / q(1 + disc) - q(1);
                let got = stringy_coefficient(d, k, flavor).map_err(err)?;
                same(&format!("d={d} k={k} {flavor:?}"), &got, &oracle)?;
                if k == 1 {
                    same("k = 1 correction", &got, &q(0))?;
                }
                checked += 1;
            }
        }
        match stringy_coefficient(d, d + 1, Flavor::LowerOmega) {
            Err(CelestialError::NotLogTerminal { .. }) => {}
            other => return Err(format!("omega at k = d+1 = {}: {other:?}", d + 1)),
        }
    }
    Ok(format!("{checked} grid values; omega rejects k = d+1"))
}

fn criterion_10() -> Outcome {
    let seed = seed_from_env()?;
    let opts = SuiteOptions {
        seed,
        count: 100,
        ..SuiteOptions::default()
    };
    let reports = run_all(&opts);
    let mut notes = Vec::new();
    for r in &reports {
        if !r.passed() {
            let first = r.reports.iter().find(|c| !c.passed).map(ToString::to_string);
            return Err(format!("{} failed {} instances: {}", r.suite, r.failed_instances, first.unwrap_or_default()));
        }
        notes.push(format!("{} {}/{}", r.suite, r.instances - r.failed_instances, r.instances));
    }
    Ok(format!("seed {seed}: {}", notes.join(", ")))
}

fn criterion_11() -> Outcome {
    let mut notes = Vec::new();
    for n in [2i64, 3] {
        let base = projective(n as usize);
        let bl = blowup_point(&base).map_err(err)?;
        let w = bl.ring.clone();
        let chi_bl = w.tangent_chern().map_err(err)?.degree();
        // E ≅ P^{n−1}.
        let chi_e = c(n);
        let dn = c(n);
        let rhs = &chi_bl + &(&div(&(&c(1) - &dn), &dn) * &chi_e);
        same_shown(&format!("P{n} formula"), &c(n + 1), &rhs)?;

        // The same number from the integral: exceptional multiplicity n−1.
        let e = Component::new("E", bl.exceptional.clone(), c(n - 1));
        let config = NCConfig::new(w.clone(), vec![e]).map_err(err)?;
        let pushed = bl.map.push_forward(&integrate_class(&config, &whole(&config)).map_err(err)?).map_err(err)?;
        same_shown(&format!("P{n} integral"), &pushed.degree(), &c(n + 1))?;

        // X = P^n (K = (n−1)E, D = 0) against Y = Bl (K = 0, D = (n−1)E).
        let ke = bl.exceptional.scale(&c(n - 1));
        let zero = ChowClass::zero(w.clone());
        let down = ManifestationChain::new(vec![bl.map.clone()]).map_err(err)?;
        let x = SpellData {
            config: config.clone(),
            divisor: zero.clone(),
            canonical: ke.clone(),
            chain: down,
        };
        let y = SpellData {
            config: config.clone(),
            divisor: ke,
            canonical: zero,
            chain: ManifestationChain::identity(),
        };
        let rep = check_spell_elgen(&x, &y, &whole(&config), 0).map_err(err)?;
        if !rep.passed {
            return Err(rep.to_string());
        }
        notes.push(format!("{} = {chi_bl} + ({}/{n})*{chi_e}", n + 1, 1 - n));
    }

    let p = fixture("diffman_p2")?;
    let w = p.ring.as_ref().ok_or("no ring")?.ring.clone();
    let cls = |s: &str| ChowClass::parse(&w, s).map_err(err);
    let comps = |f: i64| -> Result<NCConfig, String> {
        NCConfig::new(
            w.clone(),
            vec![
                Component::new("F1", cls("L1 - e")?, c(f)),
                Component::new("F2", cls("L2 - e")?, c(f)),
                Component::new("E", cls("e")?, c(0)),
            ],
        )
        .map_err(err)
    };
    // X = P2 (K_X = F1 + F2, D_X = 0); Y = P1xP1 (K_Y = e, D_Y = F1 + F2 − e).
    let x = SpellData {
        config: comps(1)?,
        divisor: cls("0")?,
        canonical: cls("L1 + L2 - 2*e")?,
        chain: chain(&p, "toP2")?,
    };
    let y = SpellData {
        config: comps(1)?,
        divisor: cls("L1 + L2 - 3*e")?,
        canonical: cls("e")?,
        chain: chain(&p, "toP1xP1")?,
    };
    for i in 0..=1 {
        let rep = check_spell_elgen(&x, &y, &whole(&x.config), i).map_err(err)?;
        if !rep.passed {
            return Err(rep.to_string());
        }
        notes.push(format!("diffman i={i}: {}", rep.context));
    }
    Ok(notes.join("; "))
}

fn criterion_12() -> Outcome {
    // Finite instances of blow-up invariance of the degree-level zeta
    // function: the cusp table under further point blow-ups.
    let p = fixture("cusp")?;
    let dc = p.require_degree().map_err(err)?;
    let base = zeta_degree(dc, &p.selection).map_err(err)?.value;
    let mut count = 0;
    let centers: Vec<Mask> = vec![0, 0b0001, 0b0010, 0b1000, 0b1001, 0b1010, 0b1100];
    for &first in &centers {
        let step = BlowupStep::new(first, "B1");
        let dc1: DegreeConfig = dc.transport_point(&step).map_err(err)?;
        let sel1 = p.selection.transport_point(first);
        same_shown("zeta after one blow-up", &zeta_degree(&dc1, &sel1).map_err(err)?.value, &base)?;
        for second in [0, 1 << 4, (1 << 4) | 1] {
            let step2 = BlowupStep::new(second, "B2");
            let Ok(dc2) = dc1.transport_point(&step2) else { continue };
            let sel2 = sel1.transport_point(second);
            same_shown("zeta after two blow-ups", &zeta_degree(&dc2, &sel2).map_err(err)?.value, &base)?;
            count += 1;
        }
    }
    // The degree-level integral at a sample multiplicity agrees as well.
    let at1 = integrate_degree(&dc.with_mults(vec![c(1); dc.len()]), &p.selection).map_err(err)?;
    same("chi of the resolution", &dc.chi_closed.get(&0), &Some(&q(6)))?;
    Ok(format!(
        "desk-scale instances only: zeta invariant over {count} two-step blow-up sequences of the cusp; \
         all-multiplicity-1 integral {at1}; general claims covered by criterion 10"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Chern normalization", criterion_1),
        ("hypersurface formula", criterion_2),
        ("point and line in projective space", criterion_3),
        ("P2 and P1xP1 manifest in each other", criterion_4),
        ("cusp zeta function", criterion_5),
        ("constructible function I_X", criterion_6),
        ("CSM class of the cuspidal cubic", criterion_7),
        ("quadric cone flop", criterion_8),
        ("stringy hypersurface closed forms", criterion_9),
        ("seeded property suites", criterion_10),
        ("blow-up/blow-down identities", criterion_11),
        ("large-scale claims at desk scale", criterion_12),
    ];
    let mut failures = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {:>2} PASS  {title}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {title}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
