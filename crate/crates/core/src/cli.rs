//! Command runner behind the `hardylab` binary: one [`RunConfig`] in, one
//! versioned JSON or CSV report out.
//!
//! JSON objects are built from `serde_json::Value`, whose maps are ordered,
//! so identical configurations give byte-identical output.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry;
use crate::herglotz::{Atom, DiscreteMeasure};
use crate::means::{self, csv_float};
use crate::verify::{self, CheckResult, Suite, SuiteConfig, Target};
use crate::zoo::{self, Family, Function, FunctionSpec};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Build,
    Coeffs,
    Means,
    Exponent,
    Geometry,
    Verify,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Coeffs => "coeffs",
            Command::Means => "means",
            Command::Exponent => "exponent",
            Command::Geometry => "geometry",
            Command::Verify => "verify",
            Command::Report => "report",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::BadConfig(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub function: Option<FunctionSpec>,
    /// Analyse `f'` instead of `f` (`--family sector-deriv`).
    pub target: Target,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    /// Per-check tolerance overrides, keyed by check-id prefix.
    pub tolerances: BTreeMap<String, f64>,
    pub p: Option<f64>,
    pub radii: Option<Vec<f64>>,
    pub suite: Option<Suite>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            function: None,
            target: Target::Function,
            output_path: None,
            format: Format::Json,
            seed: 7,
            tolerances: BTreeMap::new(),
            p: None,
            radii: None,
            suite: None,
        }
    }

    pub fn with_function(mut self, spec: FunctionSpec, target: Target) -> Self {
        self.function = Some(spec);
        self.target = target;
        self
    }

    fn require_function(&self) -> Result<&FunctionSpec> {
        self.function
            .as_ref()
            .ok_or_else(|| Error::BadConfig(format!("'{}' needs --family", self.command.name())))
    }
}

/// Numeric flags shared by all subcommands.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FamilyFlags {
    pub alpha: Option<f64>,
    pub t: Option<f64>,
    pub r: Option<f64>,
    pub eps: Option<f64>,
    pub beta: Option<f64>,
    /// `arg/π:weight` pairs for `convex_from_measure`.
    pub atoms: Option<String>,
}

/// Parses `--family` (a `-deriv` suffix selects `f'`) plus its parameters.
pub fn function_from_flags(family: &str, order: usize, flags: &FamilyFlags) -> Result<(FunctionSpec, Target)> {
    let (name, target) = match family.strip_suffix("-deriv").or_else(|| family.strip_suffix("_deriv")) {
        Some(base) => (base, Target::Derivative),
        None => (family, Target::Function),
    };
    let family = Family::from_str(name)?;
    let mut spec = FunctionSpec::new(family, order);
    for (key, value) in [("alpha", flags.alpha), ("t", flags.t), ("r", flags.r), ("eps", flags.eps), ("beta", flags.beta)] {
        if let Some(v) = value {
            spec = spec.with(key, v);
        }
    }
    if let Some(atoms) = &flags.atoms {
        spec = spec.with("measure", parse_atoms(atoms)?);
    }
    Ok((spec, target))
}

/// `"0:0.5,1:0.5"` into a measure.
pub fn parse_atoms(text: &str) -> Result<DiscreteMeasure> {
    let atoms = text
        .split(',')
        .map(|pair| {
            let (a, w) = pair
                .split_once(':')
                .ok_or_else(|| Error::BadConfig(format!("atom '{pair}' is not arg:weight")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::BadConfig(format!("bad number '{s}'")))
            };
            Ok(Atom::new(parse(a)?, parse(w)?))
        })
        .collect::<Result<Vec<_>>>()?;
    DiscreteMeasure::new(atoms)
}

/// Parses a comma-separated radius list.
pub fn parse_radii(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::BadConfig(format!("bad radius '{s}'")))
        })
        .collect()
}

/// A finished report: JSON document, CSV rendering and overall verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub csv: String,
    pub passed: bool,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
        }
    }
}

fn envelope(cfg: &RunConfig, body: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command.name(),
        "function": cfg.function,
        "target": cfg.target,
        "seed": cfg.seed,
        "result": body,
    })
}

fn key_value_csv(pairs: &[(&str, f64)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in pairs {
        let _ = writeln!(out, "{k},{}", csv_float(*v));
    }
    out
}

fn evaluator(f: &Function, target: Target) -> &crate::series::PointEvaluator {
    match target {
        Target::Function => f.f(),
        Target::Derivative => f.df(),
    }
}

fn build_section(f: &Function) -> (Value, Vec<(&'static str, f64)>) {
    let a2 = f.a2();
    let a3 = f.series.coeff(3);
    let body = json!({
        "family": f.spec.family,
        "order": f.series.order(),
        "a2": [a2.re, a2.im],
        "a3": [a3.re, a3.im],
        "evaluator": format!("{:?}", f.map.f.kind()),
        "trust_radius": f.map.f.trust_radius(),
        "poles": f.poles,
        "is_convex": f.is_convex(),
        "measure": f.measure,
        "metadata": f.metadata,
    });
    let pairs = vec![
        ("a2_re", a2.re),
        ("a2_im", a2.im),
        ("a3_re", a3.re),
        ("a3_im", a3.im),
        ("trust_radius", f.map.f.trust_radius()),
    ];
    (body, pairs)
}

fn coeffs_section(f: &Function) -> (Value, String) {
    let coeffs: Vec<[f64; 2]> = f.series.coeffs().iter().map(|c| [c.re, c.im]).collect();
    let mut csv = String::from("n,re,im\n");
    for (n, c) in coeffs.iter().enumerate() {
        let _ = writeln!(csv, "{n},{},{}", csv_float(c[0]), csv_float(c[1]));
    }
    let a2 = f.a2();
    (json!({ "order": f.series.order(), "a2": [a2.re, a2.im], "coefficients": coeffs }), csv)
}

fn exponent_section(f: &Function, cfg: &RunConfig) -> Result<(Value, String)> {
    let radii = cfg.radii.clone().unwrap_or_else(means::default_ladder);
    let eval = evaluator(f, cfg.target);
    let est = match cfg.p {
        Some(p) => means::blowup_exponent(eval, p, &radii)?,
        None => {
            let threshold = cfg.tolerances.get("hardy_threshold").copied().unwrap_or(0.0);
            means::hardy_critical_exponent(eval, verify::HARDY_BRACKET, &radii, threshold)?
        }
    };
    let body = json!({
        "gamma": est.gamma,
        "gamma_signed": est.gamma_signed,
        "stderr": est.stderr,
        "p_star": est.p_star,
        "bracket": est.bracket,
        "profile": est.profile,
    });
    Ok((body, est.to_csv()))
}

fn geometry_section(f: &Function) -> Result<(Value, String)> {
    let lower = geometry::lower_order(&f.map, 24, 200);
    let mut body = json!({ "lower_order": lower });
    let mut csv = key_value_csv(&[("lower_order", lower.beta)]);
    if let Some(&t0) = f.poles.first() {
        let ladder = means::default_ladder();
        let a_limit = geometry::radial_a_limit(&f.map, t0, &ladder)?;
        let ht = geometry::half_tangents(f.df(), t0, &geometry::default_half_tangent_levels())?;
        body["pole"] = json!(t0);
        body["radial_a_limit"] = json!(a_limit);
        body["angle_from_a_limit"] = json!(PI * a_limit);
        body["half_tangents"] = json!(ht);
        csv = key_value_csv(&[
            ("lower_order", lower.beta),
            ("pole", t0),
            ("radial_a_limit", a_limit),
            ("theta_plus", ht.theta_plus),
            ("theta_minus", ht.theta_minus),
            ("delta", ht.delta),
        ]);
    }
    Ok((body, csv))
}

/// Checks that apply to a single map: growth, coefficients, and for convex
/// maps the pre-Schwarzian bound.
pub fn function_checks(f: &Function) -> Result<Vec<CheckResult>> {
    let mut out: Vec<CheckResult> = Vec::new();
    if f.is_convex() {
        out.extend(verify::check_gronwall(f));
        out.extend(verify::check_coeff_bound(f, f.series.order())?);
        out.push(verify::check_a3_bounds(f));
        out.push(verify::check_preschwarzian_bound(f));
        if f.a2().norm() <= 1e-10 {
            out.push(verify::check_distortion_a2zero(f)?);
        }
    }
    out.push(verify::check_coeff_asymptotics(f));
    out.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(out)
}

/// Applies `tolerances` overrides: a key matches every check whose id
/// starts with it.
pub fn apply_tolerances(results: &mut [CheckResult], tolerances: &BTreeMap<String, f64>) {
    for c in results.iter_mut() {
        if let Some(tol) = tolerances
            .iter()
            .filter(|(k, _)| c.check_id.starts_with(k.as_str()))
            .max_by_key(|(k, _)| k.len())
            .map(|(_, &t)| t)
        {
            c.tol = tol;
            c.passed = c.margin >= -tol;
        }
    }
}

fn checks_csv(results: &[CheckResult]) -> String {
    let mut out = String::from("check_id,passed,margin,tol,samples\n");
    for c in results {
        let _ = writeln!(out, "{},{},{},{},{}", c.check_id, c.passed, csv_float(c.margin), csv_float(c.tol), c.samples);
    }
    out
}

/// Runs the configured command without touching the filesystem.
pub fn execute(cfg: &RunConfig) -> Result<Report> {
    let built = match (&cfg.function, cfg.command) {
        (Some(spec), _) => Some(zoo::build(spec)?),
        (None, Command::Verify) => None,
        (None, _) => {
            cfg.require_function()?;
            None
        }
    };
    let (body, csv, passed) = match cfg.command {
        Command::Build => {
            let f = built.as_ref().expect("function checked");
            let (body, pairs) = build_section(f);
            (body, key_value_csv(&pairs), true)
        }
        Command::Coeffs => {
            let (body, csv) = coeffs_section(built.as_ref().expect("function checked"));
            (body, csv, true)
        }
        Command::Means => {
            let f = built.as_ref().expect("function checked");
            let p = cfg.p.unwrap_or(1.0);
            let radii = cfg.radii.clone().unwrap_or_else(means::default_ladder);
            let profile = means::MeansProfile::compute(evaluator(f, cfg.target), p, &radii)?;
            let csv = profile.to_csv();
            (json!({ "profile": profile }), csv, true)
        }
        Command::Exponent => {
            let (body, csv) = exponent_section(built.as_ref().expect("function checked"), cfg)?;
            (body, csv, true)
        }
        Command::Geometry => {
            let (body, csv) = geometry_section(built.as_ref().expect("function checked"))?;
            (body, csv, true)
        }
        Command::Verify => {
            let mut results = match (&built, cfg.suite) {
                (_, Some(suite)) => verify::run_suite(suite, &SuiteConfig { seed: cfg.seed, ..Default::default() })?,
                (Some(f), None) => function_checks(f)?,
                (None, None) => verify::run_suite(Suite::All, &SuiteConfig { seed: cfg.seed, ..Default::default() })?,
            };
            apply_tolerances(&mut results, &cfg.tolerances);
            let passed = results.iter().all(|c| c.passed);
            let failed = results.iter().filter(|c| !c.passed).count();
            let csv = checks_csv(&results);
            (json!({ "suite": cfg.suite, "passed": passed, "failed": failed, "checks": results }), csv, passed)
        }
        Command::Report => {
            let f = built.as_ref().expect("function checked");
            let (build, pairs) = build_section(f);
            let (exponent, _) = exponent_section(f, cfg)?;
            let (geometry, _) = geometry_section(f)?;
            let checks = function_checks(f)?;
            let passed = checks.iter().all(|c| c.passed);
            let mut csv = key_value_csv(&pairs);
            if let Some(p) = exponent["p_star"].as_f64() {
                let _ = writeln!(csv, "p_star,{}", csv_float(p));
            }
            let body = json!({
                "build": build,
                "exponent": exponent,
                "geometry": geometry,
                "checks": checks,
                "passed": passed,
            });
            (body, csv, passed)
        }
    };
    Ok(Report {
        json: envelope(cfg, body),
        csv,
        passed,
    })
}

/// Exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

/// Runs the command, writes the report to `output_path` (or stdout) and
/// returns the process exit status.
pub fn run(cfg: &RunConfig) -> i32 {
    let report = match execute(cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let text = report.render(cfg.format);
    match &cfg.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_IO;
            }
        }
        None => print!("{text}"),
    }
    if report.passed {
        0
    } else {
        EXIT_CHECK_FAILED
    }
}
