use std::fmt::Write as _;
use std::path::Path;

use celint_core::celestial::{
    csm_set, csm_stratum, integrate_class, integrate_degree, ix_function, manifest, stringy_class,
    stringy_coefficient, zeta_class, zeta_degree, CelestialError, Flavor, ManifestationChain,
};
use celint_core::chow::spec::parse_ring_value;
use celint_core::chow::{ChowClass, ChowError};
use celint_core::exactnum::{parse_ratfunc, parse_rational, rational_poles, NumError};
use celint_core::model::file::{load_problem, Expectations, Problem};
use celint_core::model::{BlowupStep, ModelError, StratumSelection};
use celint_core::verify::suites::{run_suite, seed_from_env, Suite, SuiteOptions, SuiteReport};
use celint_core::verify::{
    check_altexp, check_csm_normalization, check_denloe, check_key, CheckReport, DenloeSet,
};
use celint_core::{RatFunc, Rational};
use serde_json::{json, Value};
use thiserror::Error;

use crate::{Common, Format, Verb};

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: 0 }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or invalid input.
    #[error("{0}")]
    Input(String),
    /// Valid input on which a computation failed.
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Compute(_) => 1,
            CliError::Input(_) => 2,
        }
    }

    fn classify(input: bool, msg: String) -> CliError {
        if input {
            CliError::Input(msg)
        } else {
            CliError::Compute(msg)
        }
    }
}

impl From<CelestialError> for CliError {
    fn from(e: CelestialError) -> Self {
        CliError::classify(e.is_input_error(), e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::classify(e.is_input_error(), e.to_string())
    }
}

impl From<ChowError> for CliError {
    fn from(e: ChowError) -> Self {
        CliError::classify(e.is_input_error(), e.to_string())
    }
}

impl From<NumError> for CliError {
    fn from(e: NumError) -> Self {
        CliError::classify(matches!(e, NumError::Parse(_)), e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(verb: Verb) -> Result<Output> {
    match verb {
        Verb::Ring { file, format } => ring(&file, format),
        Verb::Integrate(c) => integrate(&c),
        Verb::Degree(c) => degree(&c),
        Verb::Zeta { common, degree } => zeta(&common, degree),
        Verb::Csm { common, stratum } => csm(&common, stratum.as_deref()),
        Verb::Ix(c) => ix(&c),
        Verb::Stringy {
            file,
            manifest,
            hypersurface,
            d,
            k,
            flavor,
            format,
        } => {
            if hypersurface {
                let flavor: Flavor = flavor.parse().map_err(CliError::Input)?;
                let (d, k) = (d.expect("clap requires d"), k.expect("clap requires k"));
                let c = stringy_coefficient(d, k, flavor)?;
                Ok(Output::ok(render_value(&RatFunc::constant(c), format)))
            } else {
                let file = file.ok_or_else(|| CliError::Input("stringy needs a file or --hypersurface".into()))?;
                let p = load(&file)?;
                let chain = chain(&p, manifest.as_deref())?;
                let class = stringy_class(p.require_config()?, &chain)?;
                Ok(Output::ok(render_class(&class, format)))
            }
        }
        Verb::Verify {
            files,
            suite,
            seed,
            count,
            jobs,
            formal,
            report,
            format,
        } => {
            let seed = match seed {
                Some(s) => s,
                None => seed_from_env().map_err(CliError::Input)?,
            };
            let suites = suite
                .iter()
                .map(|s| s.parse::<Suite>().map_err(CliError::Input))
                .collect::<Result<Vec<_>>>()?;
            let opts = SuiteOptions {
                seed,
                count,
                jobs,
                formal,
            };
            verify(&files, &suites, &opts, report.as_deref(), format)
        }
    }
}

fn load(path: &Path) -> Result<Problem> {
    Ok(load_problem(path)?)
}

fn selection(p: &Problem, over: Option<&str>) -> Result<StratumSelection> {
    match over {
        None => Ok(p.selection.clone()),
        Some(src) => {
            let v: Value = serde_json::from_str(src).map_err(|e| CliError::Input(format!("--select: {e}")))?;
            Ok(p.parse_selection(&v)?)
        }
    }
}

fn chain(p: &Problem, name: Option<&str>) -> Result<ManifestationChain> {
    match name {
        None => Ok(ManifestationChain::identity()),
        Some(n) => Ok(ManifestationChain::new(p.chain(n)?.to_vec())?),
    }
}

/// Accepts `m=VALUE` or a bare value.
fn eval_point(src: Option<&str>) -> Result<Option<Rational>> {
    src.map(|s| {
        let v = s.strip_prefix("m=").unwrap_or(s);
        parse_rational(v.trim()).map_err(CliError::from)
    })
    .transpose()
}

fn finish_class(class: ChowClass, c: &Common) -> Result<Output> {
    let class = match eval_point(c.eval.as_deref())? {
        Some(x) => class.evaluate(&x)?,
        None => class,
    };
    Ok(Output::ok(render_class(&class, c.format)))
}

fn finish_value(value: RatFunc, c: &Common) -> Result<Output> {
    let value = match eval_point(c.eval.as_deref())? {
        Some(x) => RatFunc::constant(value.evaluate(&x)?),
        None => value,
    };
    Ok(Output::ok(render_value(&value, c.format)))
}

fn render_class(class: &ChowClass, format: Format) -> String {
    match format {
        Format::Text => format!("{class}\n"),
        Format::Json => pretty(&json!({
            "ring": class.ring().label(),
            "class": class.to_json(),
        })),
    }
}

fn render_value(v: &RatFunc, format: Format) -> String {
    match format {
        Format::Text => format!("{v}\n"),
        Format::Json => pretty(&json!({ "value": v.to_string() })),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn ring(path: &Path, format: Format) -> Result<Output> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let ring = if v.get("type").is_some() {
        parse_ring_value(&v)?.ring
    } else {
        load(path)?
            .ring
            .ok_or_else(|| CliError::Input(format!("{} declares no ring", path.display())))?
            .ring
    };
    let chern = ring.tangent_chern().ok();
    Ok(Output::ok(match format {
        Format::Text => {
            let mut s = ring.to_string();
            if let Some(c) = &chern {
                writeln!(s, "c(TV) = {c}").expect("write to string");
            }
            s
        }
        Format::Json => {
            let basis: Vec<Value> = ring
                .basis()
                .iter()
                .map(|b| json!({ "name": b.name, "codim": b.codim }))
                .collect();
            pretty(&json!({
                "label": ring.label(),
                "dim": ring.dim(),
                "basis": basis,
                "chern": chern.map(|c| c.to_json()),
            }))
        }
    }))
}

fn integrate(c: &Common) -> Result<Output> {
    let p = load(&c.file)?;
    let sel = selection(&p, c.select.as_deref())?;
    let class = integrate_class(p.require_config()?, &sel)?;
    finish_class(manifest(&class, &chain(&p, c.manifest.as_deref())?)?, c)
}

fn degree(c: &Common) -> Result<Output> {
    let p = load(&c.file)?;
    let sel = selection(&p, c.select.as_deref())?;
    let value = match &p.degree {
        Some(dc) => integrate_degree(dc, &sel)?,
        None => integrate_class(p.require_config()?, &sel)?.degree(),
    };
    finish_value(value, c)
}

fn zeta(c: &Common, degree_only: bool) -> Result<Output> {
    let p = load(&c.file)?;
    let sel = selection(&p, c.select.as_deref())?;
    if !degree_only {
        let class = zeta_class(p.require_config()?, &sel)?;
        return finish_class(manifest(&class, &chain(&p, c.manifest.as_deref())?)?, c);
    }
    let (value, poles) = match &p.degree {
        Some(dc) => {
            let z = zeta_degree(dc, &sel)?;
            (z.value, z.poles)
        }
        None => {
            let v = zeta_class(p.require_config()?, &sel)?.degree();
            let poles = rational_poles(&v);
            (v, poles)
        }
    };
    if c.eval.is_some() {
        return finish_value(value, c);
    }
    Ok(Output::ok(match c.format {
        Format::Text => format!("{value}\npoles: {poles}\n"),
        Format::Json => pretty(&json!({
            "value": value.to_string(),
            "poles": poles.rational.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "irrational_factors": poles.irrational_factors.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })),
    }))
}

fn csm(c: &Common, stratum: Option<&str>) -> Result<Output> {
    let p = load(&c.file)?;
    let config = p.require_config()?;
    let chain = chain(&p, c.manifest.as_deref())?;
    let class = match stratum {
        Some(names) => {
            let mask = config.mask_of_names(names.split(',').map(str::trim).filter(|s| !s.is_empty()))?;
            manifest(&csm_stratum(config, mask)?, &chain)?
        }
        None => csm_set(config, &selection(&p, c.select.as_deref())?, &chain)?,
    };
    finish_class(class, c)
}

fn ix(c: &Common) -> Result<Output> {
    let p = load(&c.file)?;
    let sel = selection(&p, c.select.as_deref())?;
    let f = ix_function(p.require_fibered()?, &sel)?;
    let f = match eval_point(c.eval.as_deref())? {
        Some(x) => f.evaluate(&x)?,
        None => f,
    };
    Ok(Output::ok(match c.format {
        Format::Text => format!("{f}\nintegral: {}\n", f.integral()),
        Format::Json => {
            let values: serde_json::Map<String, Value> = f
                .entries
                .iter()
                .map(|(name, _, v)| (name.clone(), Value::String(v.to_string())))
                .collect();
            pretty(&json!({ "values": values, "integral": f.integral().to_string() }))
        }
    }))
}

fn failed(name: &str, context: String, msg: String) -> CheckReport {
    CheckReport {
        name: name.into(),
        passed: false,
        lhs: "error".into(),
        rhs: msg,
        context,
    }
}

/// Checks applicable to a fixture: the three forms, CSM normalization,
/// invariance under a generic point blow-up (class and degree level).
fn fixture_checks(path: &Path) -> Vec<CheckReport> {
    let label = path.display().to_string();
    let p = match load_problem(path) {
        Ok(p) => p,
        Err(e) => return vec![failed("load", label, e.to_string())],
    };
    let mut out = Vec::new();
    let mut push = |name: &str, r: std::result::Result<CheckReport, CelestialError>| {
        out.push(match r {
            Ok(mut rep) => {
                rep.context = format!("{label}: {}", rep.context);
                rep
            }
            Err(e) => failed(name, label.clone(), e.to_string()),
        })
    };
    if let Some(config) = &p.config {
        push("altexp", check_altexp(config));
        if config.ring().tangent_chern().is_ok() {
            push("csm-normalization", check_csm_normalization(config));
        }
        if config.ring().point_class().is_ok() && config.ring().has_products() {
            let step = BlowupStep::new(0, fresh_name(&p.component_names));
            push("key", check_key(config, &p.selection, &step));
        }
    }
    if let Some(dc) = &p.degree {
        let step = BlowupStep::new(0, fresh_name(&p.component_names));
        push(
            "denloe",
            check_denloe(dc, &DenloeSet::Strata(p.selection.clone()), &step),
        );
    }
    if let Some(e) = &p.expect {
        out.extend(expectation_checks(&p, e).into_iter().map(|r| match r {
            Ok(mut rep) => {
                rep.context = format!("{label}: {}", rep.context);
                rep
            }
            Err(e) => failed("expect", label.clone(), e.to_string()),
        }));
    }
    out
}

/// Recorded values of a fixture against freshly computed ones.
fn expectation_checks(p: &Problem, e: &Expectations) -> Vec<Result<CheckReport>> {
    let mut out = Vec::new();
    if let Some(src) = &e.integral {
        out.push((|| {
            let config = p.require_config()?;
            let got = manifest(&integrate_class(config, &p.selection)?, &chain(p, e.manifest.as_deref())?)?;
            let want = ChowClass::parse(got.ring(), src)?;
            Ok(CheckReport::compare("expect-integral", "class", &got, &want))
        })());
    }
    if let Some(src) = &e.degree {
        out.push((|| {
            let got = match &p.degree {
                Some(dc) => integrate_degree(dc, &p.selection)?,
                None => integrate_class(p.require_config()?, &p.selection)?.degree(),
            };
            Ok(CheckReport::compare("expect-degree", "degree", &got, &parse_ratfunc(src)?))
        })());
    }
    if let Some(src) = &e.zeta_degree {
        out.push((|| {
            let got = match &p.degree {
                Some(dc) => zeta_degree(dc, &p.selection)?.value,
                None => zeta_class(p.require_config()?, &p.selection)?.degree(),
            };
            Ok(CheckReport::compare("expect-zeta", "zeta degree", &got, &parse_ratfunc(src)?))
        })());
    }
    out
}

fn fresh_name(names: &[String]) -> String {
    (0..)
        .map(|i| format!("B{i}"))
        .find(|n| !names.contains(n))
        .expect("unbounded supply")
}

fn verify(
    files: &[std::path::PathBuf],
    suites: &[Suite],
    opts: &SuiteOptions,
    report: Option<&Path>,
    format: Format,
) -> Result<Output> {
    let fixture_reports: Vec<CheckReport> = files.iter().flat_map(|f| fixture_checks(f)).collect();
    let suite_list: Vec<Suite> = match (files.is_empty(), suites.is_empty()) {
        (_, false) => suites.to_vec(),
        (true, true) => Suite::ALL.to_vec(),
        (false, true) => Vec::new(),
    };
    let suite_reports: Vec<SuiteReport> = suite_list.iter().map(|s| run_suite(*s, opts)).collect();
    let all_passed =
        fixture_reports.iter().all(|r| r.passed) && suite_reports.iter().all(SuiteReport::passed);
    let doc = json!({
        "seed": opts.seed,
        "passed": all_passed,
        "fixtures": fixture_reports,
        "suites": suite_reports,
    });
    if let Some(path) = report {
        std::fs::write(path, pretty(&doc))
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    let text = match format {
        Format::Json => pretty(&doc),
        Format::Text => {
            let mut s = String::new();
            for r in &fixture_reports {
                writeln!(s, "{r}").expect("write to string");
            }
            for sr in &suite_reports {
                for r in &sr.reports {
                    writeln!(s, "{r}").expect("write to string");
                }
                writeln!(
                    s,
                    "suite {} (seed {}): {}/{} instances passed",
                    sr.suite,
                    sr.seed,
                    sr.instances - sr.failed_instances,
                    sr.instances
                )
                .expect("write to string");
            }
            s
        }
    };
    Ok(Output {
        text,
        code: if all_passed { 0 } else { 3 },
    })
}
