//! One runnable check per inequality or identity, each returning a
//! [`CheckResult`] whose margin is positive when the statement holds with slack.
//!
//! Grid checks share the canonical grid of 24 radii `tanh((j+1)/6)` and 256
//! equally spaced angles. Randomized checks draw convex maps from measures
//! with 2 to 5 atoms, uniform arguments and Dirichlet weights; map `i` of a
//! run with seed `s` uses ChaCha stream `i` of seed `s`, so results do not
//! depend on scheduling.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry;
use crate::herglotz::{self, Atom, DiscreteMeasure};
use crate::means;
use crate::series::{PointEvaluator, TaylorSeries, C64};
use crate::zoo::{self, Family, Function, FunctionSpec, LacunarySequence};

/// Slack accepted by grid inequalities.
pub const GRID_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub function_spec: Option<FunctionSpec>,
    pub params: BTreeMap<String, f64>,
    /// Positive when satisfied with slack.
    pub margin: f64,
    pub tol: f64,
    pub passed: bool,
    pub samples: usize,
}

impl CheckResult {
    pub fn new(check_id: impl Into<String>, spec: Option<&FunctionSpec>, margin: f64, tol: f64, samples: usize) -> Self {
        Self {
            check_id: check_id.into(),
            function_spec: spec.cloned(),
            params: BTreeMap::new(),
            margin,
            tol,
            passed: margin >= -tol,
            samples,
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

/// `(radii, angles)` of the canonical grid.
pub fn canonical_grid() -> (Vec<f64>, Vec<f64>) {
    let radii = (0..24).map(|j| ((j + 1) as f64 / 6.0).tanh()).collect();
    let thetas = (0..256).map(|k| 2.0 * PI * k as f64 / 256.0).collect();
    (radii, thetas)
}

/// Canonical grid restricted to radii the evaluators accept.
fn grid_for(f: &Function) -> (Vec<f64>, Vec<f64>) {
    let (radii, thetas) = canonical_grid();
    let limit = f.map.f.trust_radius().min(f.map.df.trust_radius()).min(f.map.d2f.trust_radius());
    (radii.into_iter().filter(|&r| r <= limit).collect(), thetas)
}

/// Real values of `s_α(r)` and `s_α'(r)`.
pub fn sector_on_axis(alpha: f64, r: f64) -> (f64, f64) {
    let w = (1.0 + r) / (1.0 - r);
    let value = if alpha == 0.0 {
        0.5 * w.ln()
    } else {
        (alpha * w.ln()).exp_m1() / (2.0 * alpha)
    };
    (value, (1.0 - r).powf(-1.0 - alpha) * (1.0 + r).powf(alpha - 1.0))
}

/// `ℓ_α'(r) = 1/(1 + 2αr + r²)`.
pub fn strip_derivative_on_axis(alpha: f64, r: f64) -> f64 {
    1.0 / (1.0 + 2.0 * alpha * r + r * r)
}

fn rel(bound: f64, value: f64) -> f64 {
    (bound - value) / bound.abs().max(f64::MIN_POSITIVE)
}

/// Growth and distortion sandwiches `ℓ_α(r) ≤ |f| ≤ s_α(r)` and
/// `ℓ_α'(r) ≤ |f'| ≤ s_α'(r)` with `α = |a₂|`, relative margins.
pub fn check_gronwall(f: &Function) -> [CheckResult; 2] {
    let alpha = f.a2().norm().min(1.0);
    let (radii, thetas) = grid_for(f);
    let values = f.polar_grid(&radii, &thetas);
    let mut growth = f64::INFINITY;
    let mut distortion = f64::INFINITY;
    for (i, &r) in radii.iter().enumerate() {
        let (s, ds) = sector_on_axis(alpha, r);
        let l = zoo::strip_on_axis(alpha, r);
        let dl = strip_derivative_on_axis(alpha, r);
        for (j, &t) in thetas.iter().enumerate() {
            let m = values[i][j].norm();
            let dm = f.map.df.eval(C64::from_polar(r, t)).norm();
            growth = growth.min(rel(s, m)).min(-rel(l, m) * l / m.max(l));
            distortion = distortion.min(rel(ds, dm)).min(-rel(dl, dm) * dl / dm.max(dl));
        }
    }
    let n = radii.len() * thetas.len();
    [
        CheckResult::new("gronwall_growth", Some(&f.spec), growth, GRID_TOL, n).with("alpha", alpha),
        CheckResult::new("gronwall_distortion", Some(&f.spec), distortion, GRID_TOL, n).with("alpha", alpha),
    ]
}

/// Coefficients `c_k` of `2zf'/f - 1 = 1 + Σ c_k z^k`.
pub fn starlike_caratheodory(f: &TaylorSeries) -> Result<TaylorSeries> {
    let q = f.shift_down()?;
    let n = q.order();
    let h = f.derivative().truncate(n).div(&q)?.scale(C64::new(2.0, 0.0))?;
    h.sub(&TaylorSeries::one(n))
}

/// Uniform bound `|a_n| ≤ exp((|a₂|²-1)/2)` for `2 ≤ n ≤ N`, the
/// Marx–Strohhäcker bound `Re(zf'/f) > ½` on the grid, and the full
/// Lebedev–Milin chain `|a_{n+1}|² ≤ exp(Σ_{k≤n} (|c_k|²-4)/(4k))`.
pub fn check_coeff_bound(f: &Function, n_max: usize) -> Result<[CheckResult; 3]> {
    let n_max = n_max.min(f.series.order());
    let a2 = f.a2().norm();
    let bound = ((a2 * a2 - 1.0) / 2.0).exp();
    let uniform = (2..=n_max).map(|n| rel(bound, f.series.coeff(n).norm())).fold(f64::INFINITY, f64::min);

    let (radii, thetas) = grid_for(f);
    let values = f.polar_grid(&radii, &thetas);
    let mut ms = f64::INFINITY;
    for (i, &r) in radii.iter().enumerate() {
        for (j, &t) in thetas.iter().enumerate() {
            let z = C64::from_polar(r, t);
            ms = ms.min((z * f.map.df.eval(z) / values[i][j]).re - 0.5);
        }
    }

    let h = starlike_caratheodory(&f.series.truncate(n_max))?;
    let mut exponent = 0.0;
    let mut chain = f64::INFINITY;
    for n in 1..n_max {
        exponent += (h.coeff(n).norm_sqr() - 4.0) / (4.0 * n as f64);
        let rhs = exponent.exp();
        chain = chain.min(rel(rhs, f.series.coeff(n + 1).norm_sqr()));
    }
    let spec = Some(&f.spec);
    Ok([
        CheckResult::new("coeff_bound_uniform", spec, uniform, GRID_TOL, n_max - 1).with("bound", bound),
        CheckResult::new("marx_strohhacker", spec, ms, GRID_TOL, radii.len() * thetas.len()),
        CheckResult::new("lebedev_milin_chain", spec, chain, GRID_TOL, n_max - 1),
    ])
}

/// `sup_n n^{1-|a₂|} |a_n|`, and for sector maps the limit
/// `n^{1-α} a_n → 2^{α-1}/Γ(α+1)` (within 2%) or, at `α = 0`, the
/// non-vanishing odd subsequence `n a_n = 1`.
pub fn check_coeff_asymptotics(f: &Function) -> CheckResult {
    let a2 = f.a2().norm();
    let n_max = f.series.order();
    let sup = (1..=n_max)
        .map(|n| (n as f64).powf(1.0 - a2) * f.series.coeff(n).norm())
        .fold(0.0, f64::max);
    let sector_alpha = match f.spec.family {
        Family::Sector => f.spec.real("alpha").ok(),
        Family::HalfPlane => Some(1.0),
        _ => None,
    };
    match sector_alpha {
        Some(alpha) if alpha > 0.0 => {
            let limit = 2f64.powf(alpha - 1.0) / gamma_function(alpha + 1.0);
            let n = n_max as f64;
            let value = n.powf(1.0 - alpha) * f.series.coeff(n_max).re;
            let err = (value - limit).abs() / limit;
            CheckResult::new("coeff_asymptotics", Some(&f.spec), 0.02 - err, 0.0, n_max)
                .with("sup", sup)
                .with("limit", limit)
                .with("value", value)
        }
        Some(_) => {
            let last_odd = if n_max % 2 == 1 { n_max } else { n_max - 1 };
            let value = last_odd as f64 * f.series.coeff(last_odd).re;
            CheckResult::new("coeff_asymptotics", Some(&f.spec), 1e-9 - (value - 1.0).abs(), 0.0, n_max)
                .with("sup", sup)
                .with("value", value)
        }
        None => CheckResult::new("coeff_asymptotics", Some(&f.spec), 1.0 / (1.0 + sup), 0.0, n_max).with("sup", sup),
    }
}

/// `|a₃| ≤ (1+2|a₂|²)/3` and `|a₃ - a₂²| ≤ (1-|a₂|²)/3`, absolute margins.
/// Sector maps are the equality case.
pub fn check_a3_bounds(f: &Function) -> CheckResult {
    let a2 = f.a2();
    let a3 = f.series.coeff(3);
    let m1 = (1.0 + 2.0 * a2.norm_sqr()) / 3.0 - a3.norm();
    let m2 = (1.0 - a2.norm_sqr()) / 3.0 - (a3 - a2 * a2).norm();
    let equality = matches!(f.spec.family, Family::Sector | Family::HalfPlane);
    CheckResult::new("a3_bounds", Some(&f.spec), m1.min(m2), 1e-12, 1)
        .with("zygmund_margin", m1)
        .with("hummel_margin", m2)
        .with("equality_case", if equality { 1.0 } else { 0.0 })
}

/// `(1-|z|²) |f''/f'| ≤ 2(1+|a₂|)` on the grid.
pub fn check_preschwarzian_bound(f: &Function) -> CheckResult {
    let bound = 2.0 * (1.0 + f.a2().norm());
    let (radii, thetas) = grid_for(f);
    let mut margin = f64::INFINITY;
    for &r in &radii {
        for &t in &thetas {
            let z = C64::from_polar(r, t);
            let v = match f.map.log_derivative_of_df(z) {
                Ok(q) => (1.0 - r * r) * q.norm(),
                Err(_) => f64::INFINITY,
            };
            margin = margin.min(rel(bound, v));
        }
    }
    CheckResult::new("preschwarzian_bound", Some(&f.spec), margin, GRID_TOL, radii.len() * thetas.len())
}

/// Distortion for `a₂ = 0`: `|f'(z)| ≤ (1-|z|)^{-2(1+3|a₃|)/(3(1+|a₃|))}`,
/// plus the Schwarz–Pick bound `|ψ(ζ)| ≤ (γ+ρ)/(1+γρ)` for
/// `ψ = φ/z`, `φ = (f''/f')/(2 + z f''/f')`, `γ = |ψ(0)| = 3|a₃|`.
pub fn check_distortion_a2zero(f: &Function) -> Result<CheckResult> {
    let a2 = f.a2().norm();
    if a2 > 1e-10 {
        return Err(Error::NotZeroA2(a2));
    }
    let a3 = f.series.coeff(3).norm();
    let exponent = 2.0 * (1.0 + 3.0 * a3) / (3.0 * (1.0 + a3));
    let gamma = 3.0 * a3;
    let (radii, thetas) = grid_for(f);
    let mut distortion = f64::INFINITY;
    let mut schwarz = f64::INFINITY;
    for &r in &radii {
        let bound = (1.0 - r).powf(-exponent);
        let sp = (gamma + r) / (1.0 + gamma * r);
        for &t in &thetas {
            let z = C64::from_polar(r, t);
            distortion = distortion.min(rel(bound, f.map.df.eval(z).norm()));
            let q = f.map.log_derivative_of_df(z)?;
            let psi = q / (q * z + 2.0) / z;
            schwarz = schwarz.min(sp - psi.norm());
        }
    }
    Ok(
        CheckResult::new("distortion_a2_zero", Some(&f.spec), distortion.min(schwarz), GRID_TOL, radii.len() * thetas.len())
            .with("exponent", exponent)
            .with("distortion_margin", distortion)
            .with("schwarz_pick_margin", schwarz),
    )
}

/// Whether the critical exponent belongs to `f` itself or to `f'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Function,
    Derivative,
}

/// A row of the table of critical Hardy exponents.
#[derive(Clone, Debug)]
pub struct HardyEntry {
    pub label: String,
    pub spec: FunctionSpec,
    pub target: Target,
    pub predicted: f64,
}

/// Predicted critical exponents of the extremal families.
pub fn hardy_table() -> Vec<HardyEntry> {
    let n = 16;
    let mut rows = Vec::new();
    let mut push = |label: String, spec: FunctionSpec, target, predicted| {
        rows.push(HardyEntry { label, spec, target, predicted });
    };
    for a in [0.0, 0.5, 1.0] {
        push(format!("sector({a})'"), FunctionSpec::sector(a, n), Target::Derivative, 1.0 / (1.0 + a));
    }
    for a in [0.5, 1.0] {
        push(format!("sector({a})"), FunctionSpec::sector(a, n), Target::Function, 1.0 / a);
    }
    for a in [0.0, 1.0, 2.0] {
        let spec = FunctionSpec::new(Family::StarlikeExtremal, n).with("alpha", a);
        push(format!("starlike_extremal({a})'"), spec.clone(), Target::Derivative, 2.0 / (4.0 + a));
        push(format!("starlike_extremal({a})"), spec, Target::Function, 2.0 / (2.0 + a));
    }
    push("koebe'".into(), FunctionSpec::new(Family::KoebeDilated, n), Target::Derivative, 1.0 / 3.0);
    let ctc = FunctionSpec::new(Family::CtcExtremal, n).with("t", 0.5);
    push("ctc_extremal(0.5)'".into(), ctc.clone(), Target::Derivative, 1.0 / 3.0);
    push("ctc_extremal(0.5)".into(), ctc, Target::Function, 0.5);
    push("r_example'".into(), FunctionSpec::new(Family::RExample, n), Target::Derivative, 0.5);
    push("r_example".into(), FunctionSpec::new(Family::RExample, n), Target::Function, 1.0);
    rows
}

/// Bracket searched for every table entry.
pub const HARDY_BRACKET: (f64, f64) = (0.05, 5.0);

/// Runs the critical-exponent estimator on one table entry; the margin is
/// `0.05 - |p̂ - p*|/p*`.
pub fn check_hardy_entry(entry: &HardyEntry) -> Result<CheckResult> {
    let f = zoo::build(&entry.spec)?;
    let eval = match entry.target {
        Target::Function => f.f(),
        Target::Derivative => f.df(),
    };
    let est = means::hardy_critical_exponent(eval, HARDY_BRACKET, &means::default_ladder(), 0.0)?;
    let p_hat = est.p_star.expect("bisection sets p_star");
    let err = (p_hat - entry.predicted).abs() / entry.predicted;
    Ok(CheckResult::new(format!("hardy_exponent/{}", entry.label), Some(&entry.spec), 0.05 - err, 0.0, est.profile.radii.len())
        .with("p_star", p_hat)
        .with("predicted", entry.predicted)
        .with("derivative", if entry.target == Target::Derivative { 1.0 } else { 0.0 }))
}

pub fn check_hardy_table() -> Result<Vec<CheckResult>> {
    hardy_table().par_iter().map(check_hardy_entry).collect()
}

/// `λ = 1/(2 - √(2-α))`, `γ = 4λ² e^{2-4λ}`.
pub fn hayman_gamma(alpha: f64) -> Result<(f64, f64)> {
    if !(0.0..=2.0).contains(&alpha) {
        return Err(Error::ParamOutOfRange {
            name: "alpha",
            value: alpha,
            range: "[0, 2]",
        });
    }
    let lambda = 1.0 / (2.0 - (2.0 - alpha).sqrt());
    Ok((lambda, 4.0 * lambda * lambda * (2.0 - 4.0 * lambda).exp()))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation of `Γ(x)` (reflection below ½).
pub fn gamma_function(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_function(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Prawitz's inequality as a check; margin relative.
pub fn check_prawitz(label: &str, f: &PointEvaluator, spec: Option<&FunctionSpec>, p: f64, r: f64) -> Result<CheckResult> {
    let out = means::prawitz_check(f, p, r, 2)?;
    Ok(CheckResult::new(format!("prawitz/{label}/p={p}/r={r}"), spec, rel(out.rhs, out.lhs), 1e-6, 1)
        .with("p", p)
        .with("r", r)
        .with("lhs", out.lhs)
        .with("rhs", out.rhs))
}

/// `t̂` for `s_α` at `p = 1` against `1 - α`, margin `0.05 - |t̂ - (1-α)|`.
pub fn check_smoothness(alpha: f64) -> Result<CheckResult> {
    let s = zoo::sector(alpha, 16)?;
    let t = means::hl_smoothness_rate(s.df(), 1.0, &means::default_ladder())?;
    Ok(CheckResult::new(format!("smoothness_rate/sector({alpha})"), Some(&s.spec), 0.05 - (t - (1.0 - alpha)).abs(), 0.0, 1)
        .with("t_hat", t)
        .with("predicted", 1.0 - alpha))
}

/// `m δ_1` plus the remaining mass split over `e^{±2πi/3}`.
pub fn spread_measure(m: f64) -> Result<DiscreteMeasure> {
    if m >= 1.0 {
        return Ok(DiscreteMeasure::dirac(0.0));
    }
    let rest = 0.5 * (1.0 - m);
    DiscreteMeasure::new(vec![Atom::new(0.0, m), Atom::new(2.0 / 3.0, rest), Atom::new(-2.0 / 3.0, rest)])
}

/// Agreement of the three descriptions of the angle at infinity:
/// `(2μ(λ₀)-1)π`, `π lim A_f` and the half-tangent opening.
pub fn check_angle_triangle(mu: &DiscreteMeasure, pole_arg_over_pi: f64, order: usize) -> Result<CheckResult> {
    let f = zoo::convex_from_measure(mu, order)?;
    let t0 = -pole_arg_over_pi * PI;
    let measure = mu.angle_at_infinity(pole_arg_over_pi)?;
    let radial = PI * geometry::radial_a_limit(&f.map, t0, &means::default_ladder())?;
    let tangent = geometry::half_tangents(f.df(), t0, &geometry::default_half_tangent_levels())?.delta;
    let spread = (measure - radial).abs().max((measure - tangent).abs()).max((radial - tangent).abs());
    Ok(CheckResult::new("angle_at_infinity", Some(&f.spec), 0.02 - spread, 0.0, 3)
        .with("measure", measure)
        .with("radial", radial)
        .with("half_tangent", tangent)
        .with("pole_mass", mu.mass_at(pole_arg_over_pi)))
}

/// Per-map random generator: stream `index` of `seed`.
pub fn map_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A random measure with 2 to 5 atoms.
pub fn random_measure(seed: u64, index: u64) -> DiscreteMeasure {
    let mut rng = map_rng(seed, index);
    let atoms = rng.gen_range(2..=5);
    DiscreteMeasure::random(&mut rng, atoms)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Convex,
    Hardy,
    Geometry,
    Construction,
    Appendix,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "convex" => Ok(Suite::Convex),
            "hardy" => Ok(Suite::Hardy),
            "geometry" => Ok(Suite::Geometry),
            "construction" => Ok(Suite::Construction),
            "appendix" => Ok(Suite::Appendix),
            "all" => Ok(Suite::All),
            other => Err(Error::BadConfig(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub random_maps: usize,
    pub appendix_samples: usize,
    pub coefficient_order: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            random_maps: 100,
            appendix_samples: 100_000,
            coefficient_order: 256,
        }
    }
}

/// Checks on random and designated convex maps.
pub fn convex_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let n = cfg.coefficient_order;
    let random: Vec<Vec<CheckResult>> = (0..cfg.random_maps as u64)
        .into_par_iter()
        .map(|i| -> Result<Vec<CheckResult>> {
            let mu = random_measure(cfg.seed, i);
            let f = zoo::convex_from_measure(&mu, n)?;
            let tag = |mut c: CheckResult| {
                c.check_id = format!("{}/random#{i:03}", c.check_id);
                c
            };
            let mut out: Vec<CheckResult> = check_gronwall(&f).into_iter().map(tag).collect();
            out.extend(check_coeff_bound(&f, n)?.into_iter().map(tag));
            out.push(tag(check_a3_bounds(&f)));
            out.push(tag(check_preschwarzian_bound(&f)));
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<CheckResult> = random.into_iter().flatten().collect();

    let designated = |label: &str, mut checks: Vec<CheckResult>| {
        for c in checks.iter_mut() {
            c.check_id = format!("{}/{label}", c.check_id);
        }
        checks
    };
    for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let s = zoo::sector(alpha, n)?;
        let label = format!("sector({alpha})");
        let mut checks: Vec<CheckResult> = check_gronwall(&s).into();
        checks.extend(check_coeff_bound(&s, n)?);
        checks.push(check_a3_bounds(&s));
        checks.push(check_preschwarzian_bound(&s));
        out.extend(designated(&label, checks));
    }
    let s_half = zoo::sector(0.5, 2000)?;
    out.extend(designated("sector(0.5)", vec![check_coeff_asymptotics(&s_half)]));
    let s0 = zoo::sector(0.0, 2001)?;
    out.extend(designated("sector(0)", vec![check_coeff_asymptotics(&s0)]));
    let p = zoo::polylog(0.5, n)?;
    out.extend(designated("polylog(0.5)", vec![check_coeff_bound(&p, n)?[0].clone()]));
    let p1 = zoo::polylog(1.0, n)?;
    out.extend(designated("polylog(1)", vec![check_a3_bounds(&p1)]));

    let s0 = zoo::sector(0.0, 64)?;
    out.extend(designated("sector(0)", vec![check_distortion_a2zero(&s0)?]));
    let rot = zoo::convex_from_measure(&DiscreteMeasure::new(vec![Atom::new(0.5, 0.5), Atom::new(-0.5, 0.5)])?, 64)?;
    out.extend(designated("rotated_strip", vec![check_distortion_a2zero(&rot)?]));
    let sym = zoo::convex_from_measure(
        &DiscreteMeasure::new(vec![
            Atom::new(0.25, 0.25),
            Atom::new(0.75, 0.25),
            Atom::new(-0.25, 0.25),
            Atom::new(-0.75, 0.25),
        ])?,
        64,
    )?;
    out.extend(designated("four_atom_symmetric", vec![check_distortion_a2zero(&sym)?]));
    Ok(out)
}

/// Critical exponents, Prawitz and smoothness rates.
pub fn hardy_suite() -> Result<Vec<CheckResult>> {
    let mut out = check_hardy_table()?;
    let identity = PointEvaluator::closed_form(|z| z);
    let zoo_maps = [
        ("koebe", zoo::koebe_dilated(1.0, 16)?),
        ("sector(0.5)", zoo::sector(0.5, 16)?),
        ("starlike_extremal(1)", zoo::starlike_extremal(1.0, 16)?),
    ];
    let mut maps: Vec<(&str, &PointEvaluator, Option<&FunctionSpec>)> = vec![("identity", &identity, None)];
    maps.extend(zoo_maps.iter().map(|(l, f)| (*l, f.f(), Some(&f.spec))));
    let cases: Vec<(usize, f64, f64)> = (0..maps.len())
        .flat_map(|i| [0.3, 0.45].into_iter().flat_map(move |p| [0.5, 0.9].into_iter().map(move |r| (i, p, r))))
        .collect();
    let prawitz: Vec<CheckResult> = cases
        .par_iter()
        .map(|&(i, p, r)| check_prawitz(maps[i].0, maps[i].1, maps[i].2, p, r))
        .collect::<Result<_>>()?;
    out.extend(prawitz);
    for alpha in [0.0, 0.5] {
        out.push(check_smoothness(alpha)?);
    }
    Ok(out)
}

/// Lower order, angle at infinity and sector containment.
pub fn geometry_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let s = zoo::sector(alpha, 16)?;
        let est = geometry::lower_order(&s.map, 24, 200);
        out.push(
            CheckResult::new(format!("lower_order/sector({alpha})"), Some(&s.spec), 1e-6 - (est.beta - alpha).abs(), 0.0, est.samples)
                .with("beta", est.beta),
        );
    }
    for m in [0.5, 0.625, 0.75, 1.0] {
        let mut c = check_angle_triangle(&spread_measure(m)?, 0.0, 32)?;
        c.check_id = format!("{}/m={m}", c.check_id);
        out.push(c);
    }
    for alpha in [0.25, 0.5, 0.75] {
        let s = zoo::sector(alpha, 16)?;
        let wide = geometry::sector_containment(&s.map, alpha * PI + 0.05, 10_000, Some(0.0))?;
        let narrow = geometry::sector_containment(&s.map, alpha * PI - 0.05, 10_000, Some(0.0))?;
        let ok = wide.contained && !narrow.contained;
        out.push(
            CheckResult::new(format!("sector_containment/sector({alpha})"), Some(&s.spec), if ok { 1.0 } else { -1.0 }, 0.0, wide.samples)
                .with("wide_contained", wide.contained as u8 as f64)
                .with("narrow_contained", narrow.contained as u8 as f64)
                .with("apex_re", wide.apex.re)
                .with("narrow_excess", narrow.worst_excess),
        );
    }
    Ok(out)
}

/// Coefficient identity `a₂ = 2r + ε/4` on random admissible parameters,
/// the defining equation of `ε₀`, and the reach of `a₂` over `Ω`.
pub fn construction_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let seq = LacunarySequence::default_up_to(64);
    let mut rng = map_rng(cfg.seed, 1 << 40);
    let mut out = Vec::new();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let r = rng.gen_range(0.01..0.99);
        let eps = omega_sample(&mut rng, r)?;
        let f = zoo::lpr_composition(r, eps, &seq, 64)?;
        worst = worst.max((f.a2() - C64::new(2.0 * r + eps / 4.0, 0.0)).norm());
    }
    out.push(CheckResult::new("construction_a2", None, 1e-10 - worst, 0.0, 20).with("max_error", worst));
    let residual = (1..100)
        .map(|k| {
            let r = k as f64 / 100.0;
            let e = zoo::eps0_solve(r).expect("r in (0,1)");
            (2f64.powf(e) / (1.0 - 3.0 * e) * r - 1.0).abs()
        })
        .fold(0.0, f64::max);
    out.push(CheckResult::new("eps0_equation", None, 1e-12 - residual, 0.0, 99).with("max_residual", residual));
    let (lo, hi) = a2_sweep(&seq)?;
    out.push(
        CheckResult::new("construction_a2_range", None, (0.01 - lo).min(hi - 1.99), 0.0, 2)
            .with("min_a2", lo)
            .with("max_a2", hi),
    );
    Ok(out)
}

/// A random admissible `ε` for the given `r`.
pub fn omega_sample<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Result<f64> {
    let bound = zoo::omega_bound(r)?;
    Ok(bound * (1.0 - rng.gen::<f64>()))
}

/// Smallest and largest `a₂` along the sweep `r ∈ {10⁻³, ..., 0.999}`,
/// each computed from the constructed series.
pub fn a2_sweep(seq: &LacunarySequence) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..=40 {
        let r = 1e-3 + (0.999 - 1e-3) * k as f64 / 40.0;
        let bound = zoo::omega_bound(r)?;
        for eps in [bound * 1e-3, bound] {
            let a2 = zoo::lpr_composition(r, eps, seq, 16)?.a2().re;
            lo = lo.min(a2);
            hi = hi.max(a2);
        }
    }
    Ok((lo, hi))
}

/// Randomized search for counterexamples to the half-mass structure theorem.
pub fn appendix_suite(cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut rng = map_rng(cfg.seed, 1 << 41);
    let mut out = Vec::new();
    let report = herglotz::appendix_search(&mut rng, cfg.appendix_samples, herglotz::APPENDIX_TOL);
    out.push(
        CheckResult::new("appendix_search", None, -(report.counterexamples as f64), 0.0, report.samples)
            .with("feasible", report.feasible as f64)
            .with("triggered", report.triggered as f64)
            .with("worst_mass_defect", report.worst_mass_defect)
            .with("worst_off_antipode", report.worst_off_antipode),
    );
    for (label, mu) in [
        ("strip", DiscreteMeasure::two_point(0.5)?),
        ("lopsided", DiscreteMeasure::two_point(0.75)?),
    ] {
        let c = mu.appendix_check(herglotz::APPENDIX_TOL);
        out.push(
            CheckResult::new(format!("appendix_check/{label}"), None, if c.conforms { 0.0 } else { -1.0 }, 0.0, 1)
                .with("triggered", c.triggered as u8 as f64),
        );
    }
    Ok(out)
}

/// Runs a suite; results are sorted by check id.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckResult>> {
    let mut out = match suite {
        Suite::Convex => convex_suite(cfg)?,
        Suite::Hardy => hardy_suite()?,
        Suite::Geometry => geometry_suite()?,
        Suite::Construction => construction_suite(cfg)?,
        Suite::Appendix => appendix_suite(cfg)?,
        Suite::All => {
            let mut all = convex_suite(cfg)?;
            all.extend(hardy_suite()?);
            all.extend(geometry_suite()?);
            all.extend(construction_suite(cfg)?);
            all.extend(appendix_suite(cfg)?);
            all
        }
    };
    out.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(out)
}

/// Fixed-width summary, one line per check.
pub fn summary_table(results: &[CheckResult]) -> String {
    let width = results.iter().map(|c| c.check_id.len()).max().unwrap_or(8).max(8);
    let mut out = format!("{:<width$}  {:>6}  {:>14}  {:>8}\n", "check", "status", "margin", "samples");
    for c in results {
        let _ = writeln!(
            out,
            "{:<width$}  {:>6}  {:>14.6e}  {:>8}",
            c.check_id,
            if c.passed { "pass" } else { "FAIL" },
            c.margin,
            c.samples
        );
    }
    let failed = results.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", results.len(), failed);
    out
}
