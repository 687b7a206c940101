//! Named functions and extremal families.
//!
//! Every constructor returns a [`Function`]: a normalized Taylor series of the
//! requested order together with pointwise evaluators for `f`, `f'` and `f''`.
//! Where the derivative has a closed form the evaluators are pole-accurate up
//! to the unit circle; `f` itself is then either a closed form or the ray
//! integral of `f'`. Families without closed forms fall back to Horner
//! evaluation of the series, which refuses radii beyond its trust radius.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herglotz::{Atom, DiscreteMeasure};
use crate::quadrature::{integrate_ray, integrate_ray_cumulative};
use crate::series::{HolomorphicMap, PointEvaluator, TaylorSeries, C64};

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Sector,
    Strip,
    KoebeDilated,
    HalfPlane,
    Polylog,
    LprPhi,
    ConvexFromMeasure,
    AlexanderStarlike,
    StarlikeExtremal,
    CtcExtremal,
    CtcThreeAtom,
    RExample,
    SqrtTransform,
    Pfaltzgraff,
    LprComposition,
}

impl Family {
    pub const ALL: [Family; 15] = [
        Family::Sector,
        Family::Strip,
        Family::KoebeDilated,
        Family::HalfPlane,
        Family::Polylog,
        Family::LprPhi,
        Family::ConvexFromMeasure,
        Family::AlexanderStarlike,
        Family::StarlikeExtremal,
        Family::CtcExtremal,
        Family::CtcThreeAtom,
        Family::RExample,
        Family::SqrtTransform,
        Family::Pfaltzgraff,
        Family::LprComposition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Sector => "sector",
            Family::Strip => "strip",
            Family::KoebeDilated => "koebe_dilated",
            Family::HalfPlane => "half_plane",
            Family::Polylog => "polylog",
            Family::LprPhi => "lpr_phi",
            Family::ConvexFromMeasure => "convex_from_measure",
            Family::AlexanderStarlike => "alexander_starlike",
            Family::StarlikeExtremal => "starlike_extremal",
            Family::CtcExtremal => "ctc_extremal",
            Family::CtcThreeAtom => "ctc_three_atom",
            Family::RExample => "r_example",
            Family::SqrtTransform => "sqrt_transform",
            Family::Pfaltzgraff => "pfaltzgraff",
            Family::LprComposition => "lpr_composition",
        }
    }

    /// Families whose members are convex maps.
    pub fn is_convex(self) -> bool {
        matches!(
            self,
            Family::Sector | Family::Strip | Family::HalfPlane | Family::ConvexFromMeasure | Family::Polylog
        )
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts the snake_case tag, its kebab-case spelling and a few short aliases.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match key.as_str() {
            "koebe" => Some(Family::KoebeDilated),
            "lpr" | "phi" => Some(Family::LprPhi),
            "convex" | "measure" => Some(Family::ConvexFromMeasure),
            "alexander" => Some(Family::AlexanderStarlike),
            "starlike" => Some(Family::StarlikeExtremal),
            "ctc" => Some(Family::CtcExtremal),
            "ctc3" => Some(Family::CtcThreeAtom),
            "sqrt" => Some(Family::SqrtTransform),
            _ => None,
        };
        alias
            .or_else(|| Family::ALL.into_iter().find(|f| f.name() == key))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// A named parameter value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Complex { re: f64, im: f64 },
    RealList(Vec<f64>),
    Measure(DiscreteMeasure),
}

impl From<f64> for ParamValue {
    fn from(x: f64) -> Self {
        ParamValue::Real(x)
    }
}

impl From<C64> for ParamValue {
    fn from(z: C64) -> Self {
        ParamValue::Complex { re: z.re, im: z.im }
    }
}

impl From<DiscreteMeasure> for ParamValue {
    fn from(m: DiscreteMeasure) -> Self {
        ParamValue::Measure(m)
    }
}

impl From<&LacunarySequence> for ParamValue {
    fn from(s: &LacunarySequence) -> Self {
        ParamValue::RealList(s.exponents.iter().map(|&n| n as f64).collect())
    }
}

/// Declarative description of a zoo member; serializes to
/// `{family, params, order}` plus `source` for transforms of another member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub family: Family,
    #[serde(default)]
    pub params: BTreeMap<String, ParamValue>,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Box<FunctionSpec>>,
}

impl FunctionSpec {
    pub fn new(family: Family, order: usize) -> Self {
        Self {
            family,
            params: BTreeMap::new(),
            order,
            source: None,
        }
    }

    pub fn with(mut self, name: &str, value: impl Into<ParamValue>) -> Self {
        self.params.insert(name.to_string(), value.into());
        self
    }

    pub fn with_source(mut self, source: FunctionSpec) -> Self {
        self.source = Some(Box::new(source));
        self
    }

    pub fn sector(alpha: f64, order: usize) -> Self {
        Self::new(Family::Sector, order).with("alpha", alpha)
    }

    pub fn measure(mu: DiscreteMeasure, order: usize) -> Self {
        Self::new(Family::ConvexFromMeasure, order).with("measure", mu)
    }

    fn real_opt(&self, name: &'static str) -> Result<Option<f64>> {
        match self.params.get(name) {
            None => Ok(None),
            Some(ParamValue::Real(x)) => Ok(Some(*x)),
            Some(other) => Err(Error::BadConfig(format!("parameter {name} must be real, got {other:?}"))),
        }
    }

    pub fn real(&self, name: &'static str) -> Result<f64> {
        self.real_opt(name)?.ok_or(Error::MissingParam(name))
    }

    pub fn real_or(&self, name: &'static str, default: f64) -> Result<f64> {
        Ok(self.real_opt(name)?.unwrap_or(default))
    }

    fn measure_param(&self) -> Result<DiscreteMeasure> {
        match self.params.get("measure") {
            Some(ParamValue::Measure(m)) => Ok(m.clone()),
            Some(other) => Err(Error::BadConfig(format!("parameter measure must be a list of atoms, got {other:?}"))),
            None => Err(Error::MissingParam("measure")),
        }
    }

    fn sequence_param(&self) -> Result<LacunarySequence> {
        match self.params.get("seq") {
            None => Ok(LacunarySequence::default_up_to(self.order.max(1) as u64)),
            Some(ParamValue::RealList(v)) => {
                let mut ints = Vec::with_capacity(v.len());
                for &x in v {
                    if x.fract() != 0.0 || !(1.0..=u64::MAX as f64).contains(&x) {
                        return Err(Error::InvalidSequence(format!("{x} is not a positive integer")));
                    }
                    ints.push(x as u64);
                }
                LacunarySequence::new(ints)
            }
            Some(ParamValue::Real(x)) => Self::new(self.family, self.order)
                .with("seq", ParamValue::RealList(vec![*x]))
                .sequence_param(),
            Some(other) => Err(Error::InvalidSequence(format!("{other:?}"))),
        }
    }

    fn source_or(&self, default: impl FnOnce() -> FunctionSpec) -> FunctionSpec {
        self.source.as_deref().cloned().unwrap_or_else(default)
    }
}

/// Strictly increasing positive exponents starting at 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct LacunarySequence {
    exponents: Vec<u64>,
}

impl TryFrom<Vec<u64>> for LacunarySequence {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<LacunarySequence> for Vec<u64> {
    fn from(s: LacunarySequence) -> Self {
        s.exponents
    }
}

impl LacunarySequence {
    pub fn new(exponents: Vec<u64>) -> Result<Self> {
        if exponents.first() != Some(&1) {
            return Err(Error::InvalidSequence("the first exponent must be 1".into()));
        }
        if exponents.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSequence("exponents must increase strictly".into()));
        }
        Ok(Self { exponents })
    }

    /// `{1, 4, 16, 64, ...}` up to `max`.
    pub fn default_up_to(max: u64) -> Self {
        let mut exponents = vec![1];
        let mut n: u64 = 4;
        while n <= max {
            exponents.push(n);
            n = n.saturating_mul(4);
        }
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Exponents not exceeding `n`; the rest cannot influence coefficients up to `z^n`.
    pub fn truncated(&self, n: usize) -> Vec<usize> {
        self.exponents
            .iter()
            .filter(|&&e| e <= n as u64)
            .map(|&e| e as usize)
            .collect()
    }
}

type PointFn = dyn Fn(C64) -> C64 + Send + Sync;

/// A constructed function.
#[derive(Clone)]
pub struct Function {
    pub spec: FunctionSpec,
    pub series: TaylorSeries,
    pub map: HolomorphicMap,
    /// Herglotz measure of `1 + z f''/f'`, for convex members built from atoms.
    pub measure: Option<DiscreteMeasure>,
    /// Boundary parameters `t₀` (radians) at which `f` is infinite.
    pub poles: Vec<f64>,
    /// Construction metadata, e.g. the rotation applied to normalize `ℓ_α`.
    pub metadata: BTreeMap<String, f64>,
    ray_df: Option<Arc<PointFn>>,
}

impl fmt::Debug for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Function")
            .field("family", &self.spec.family)
            .field("order", &self.series.order())
            .field("evaluator", &self.map.kind())
            .finish()
    }
}

impl Function {
    fn from_series(spec: FunctionSpec, series: TaylorSeries) -> Self {
        let map = HolomorphicMap::from_series(&series);
        Self {
            spec,
            series,
            map,
            measure: None,
            poles: Vec::new(),
            metadata: BTreeMap::new(),
            ray_df: None,
        }
    }

    fn closed(
        spec: FunctionSpec,
        series: TaylorSeries,
        f: impl Fn(C64) -> C64 + Send + Sync + 'static,
        df: impl Fn(C64) -> C64 + Send + Sync + 'static,
        d2f: impl Fn(C64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            map: HolomorphicMap {
                f: PointEvaluator::closed_form(f),
                df: PointEvaluator::closed_form(df),
                d2f: PointEvaluator::closed_form(d2f),
            },
            ..Self::from_series(spec, series)
        }
    }

    /// `f` is the ray integral of the closed-form `df`.
    fn by_quadrature(
        spec: FunctionSpec,
        series: TaylorSeries,
        df: impl Fn(C64) -> C64 + Send + Sync + 'static,
        d2f: impl Fn(C64) -> C64 + Send + Sync + 'static,
    ) -> Self {
        let df: Arc<PointFn> = Arc::new(df);
        let df_f = df.clone();
        let df_e = df.clone();
        Self {
            map: HolomorphicMap {
                f: PointEvaluator::closed_form(move |z| integrate_ray(&*df_f, z)),
                df: PointEvaluator::closed_form(move |z| df_e(z)),
                d2f: PointEvaluator::closed_form(d2f),
            },
            ray_df: Some(df),
            ..Self::from_series(spec, series)
        }
    }

    fn with_poles(mut self, poles: Vec<f64>) -> Self {
        self.poles = poles;
        self
    }

    fn with_measure(mut self, mu: DiscreteMeasure) -> Self {
        self.poles = mu.poles().into_iter().map(|a| a * PI).collect();
        self.measure = Some(mu);
        self
    }

    pub fn a2(&self) -> C64 {
        self.series.coeff(2)
    }

    pub fn f(&self) -> &PointEvaluator {
        &self.map.f
    }

    pub fn df(&self) -> &PointEvaluator {
        &self.map.df
    }

    pub fn is_convex(&self) -> bool {
        self.spec.family.is_convex()
    }

    /// Values of `f` on the polar grid `radii × thetas` (row per radius).
    /// Quadrature-backed maps integrate each ray once, cumulatively.
    pub fn polar_grid(&self, radii: &[f64], thetas: &[f64]) -> Vec<Vec<C64>> {
        use rayon::prelude::*;
        let columns: Vec<Vec<C64>> = thetas
            .par_iter()
            .map(|&t| match &self.ray_df {
                Some(df) => integrate_ray_cumulative(&**df, t, radii),
                None => radii
                    .iter()
                    .map(|&r| self.map.f.eval(C64::from_polar(r, t)))
                    .collect(),
            })
            .collect();
        (0..radii.len())
            .map(|i| columns.iter().map(|col| col[i]).collect())
            .collect()
    }
}

/// `e^u - 1` without cancellation for small `u`.
fn cexpm1(u: C64) -> C64 {
    let (s, c) = u.im.sin_cos();
    let half = (0.5 * u.im).sin();
    C64::new(u.re.exp_m1() * c - 2.0 * half * half, u.re.exp() * s)
}

/// `log(1 + w)` without cancellation for small `w`.
fn clog1p(w: C64) -> C64 {
    if w.norm_sqr() > 0.25 {
        return (ONE + w).ln();
    }
    let modulus = 0.5 * (w.re * (2.0 + w.re) + w.im * w.im).ln_1p();
    C64::new(modulus, w.im.atan2(1.0 + w.re))
}

/// `log((1+z)/(1-z)) = 2 artanh z`.
fn log_ratio(z: C64) -> C64 {
    clog1p(z) - clog1p(-z)
}

fn check_range(name: &'static str, value: f64, ok: bool, range: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange { name, value, range })
    }
}

/// `(1-z)^{-a}(1+z)^{-b}` as a series of the given order.
fn two_pole_series(a: f64, b: f64, order: usize) -> Result<TaylorSeries> {
    TaylorSeries::binomial(C64::new(-1.0, 0.0), -a, order).mul(&TaylorSeries::binomial(ONE, -b, order))
}

/// `s_α'` as a closure.
fn sector_df(alpha: f64) -> impl Fn(C64) -> C64 + Send + Sync + Clone {
    move |z: C64| (ONE - z).powf(-1.0 - alpha) * (ONE + z).powf(alpha - 1.0)
}

/// `s_α''/s_α'`.
fn sector_q(alpha: f64) -> impl Fn(C64) -> C64 + Send + Sync + Clone {
    move |z: C64| (z + alpha) * 2.0 / (ONE - z * z)
}

/// The sector map `s_α`, onto a sector of opening `απ`; `s_0` is `artanh`.
pub fn sector(alpha: f64, order: usize) -> Result<Function> {
    check_range("alpha", alpha, (0.0..=1.0).contains(&alpha), "[0, 1]")?;
    let order = order.max(1);
    let series = two_pole_series(1.0 + alpha, 1.0 - alpha, order - 1)?.integrate();
    let spec = FunctionSpec::sector(alpha, order);
    let f = move |z: C64| {
        let l = log_ratio(z);
        if alpha == 0.0 {
            l * 0.5
        } else {
            cexpm1(l * alpha) / (2.0 * alpha)
        }
    };
    let df = sector_df(alpha);
    let q = sector_q(alpha);
    let df2 = df.clone();
    let mu = DiscreteMeasure::two_point(0.5 * (1.0 + alpha))?;
    Ok(Function::closed(spec, series, f, df, move |z| df2(z) * q(z)).with_measure(mu))
}

/// The half-plane map `z/(1-z) = s_1`.
pub fn half_plane(order: usize) -> Result<Function> {
    let mut f = sector(1.0, order)?;
    f.spec = FunctionSpec::new(Family::HalfPlane, order.max(1));
    Ok(f)
}

/// The strip map `ℓ_α` normalized by the rotation `z ↦ -ℓ(-z)`, so that
/// `ℓ_α' = 1/(1 + 2αz + z²)`, `a₂ = -α` and `ℓ_α(r) = ∫₀^r dx/(1+2αx+x²)`
/// on the positive axis: the Gronwall lower envelope.
pub fn strip(alpha: f64, order: usize) -> Result<Function> {
    check_range("alpha", alpha, (0.0..1.0).contains(&alpha), "[0, 1)")?;
    let order = order.max(1);
    let mut c = vec![0.0; order];
    c[0] = 1.0;
    if order > 1 {
        c[1] = -2.0 * alpha;
    }
    for n in 2..order {
        c[n] = -2.0 * alpha * c[n - 1] - c[n - 2];
    }
    let series = TaylorSeries::from_real(&c)?.integrate();
    let s = (1.0 - alpha * alpha).sqrt();
    let lam = C64::new(alpha, s);
    let f = move |z: C64| (clog1p(lam * z) - clog1p(lam.conj() * z)) / C64::new(0.0, 2.0 * s);
    let den = move |z: C64| ONE + z * 2.0 * alpha + z * z;
    let df = move |z: C64| den(z).inv();
    let d2f = move |z: C64| -(z + alpha) * 2.0 / (den(z) * den(z));
    // ℓ' = (1 + λz)^{-1} (1 + conj(λ) z)^{-1}: half-mass atoms at -λ and -conj(λ)
    let arg = (-lam).arg() / PI;
    let mu = DiscreteMeasure::new(vec![Atom::new(-arg, 0.5), Atom::new(arg, 0.5)])?;
    let mut fun = Function::closed(FunctionSpec::new(Family::Strip, order).with("alpha", alpha), series, f, df, d2f)
        .with_measure(mu);
    fun.metadata.insert("rotation_over_pi".into(), 1.0);
    Ok(fun)
}

/// Positive-axis values of the normalized strip map, the Gronwall lower bound.
pub fn strip_on_axis(alpha: f64, r: f64) -> f64 {
    if alpha >= 1.0 {
        return r / (1.0 + r);
    }
    let s = (1.0 - alpha * alpha).sqrt();
    ((r + alpha) / s).atan() / s - (alpha / s).atan() / s
}

/// `k_r(z) = k(rz)/r` with `k(z) = z/(1-z)²`.
pub fn koebe_dilated(r: f64, order: usize) -> Result<Function> {
    check_range("r", r, r > 0.0 && r <= 1.0, "(0, 1]")?;
    let order = order.max(1);
    let series = TaylorSeries::from_fn(order, |n| C64::new(n as f64 * r.powi(n as i32 - 1), 0.0))?;
    let spec = FunctionSpec::new(Family::KoebeDilated, order).with("r", r);
    let fun = Function::closed(spec, series, move |z| koebe_r(r, z), move |z| koebe_r_d1(r, z), move |z| {
        koebe_r_d2(r, z)
    });
    Ok(if r == 1.0 { fun.with_poles(vec![0.0]) } else { fun })
}

fn koebe_r(r: f64, w: C64) -> C64 {
    w / (ONE - w * r).powi(2)
}

fn koebe_r_d1(r: f64, w: C64) -> C64 {
    (ONE + w * r) / (ONE - w * r).powi(3)
}

fn koebe_r_d2(r: f64, w: C64) -> C64 {
    (w * r + 2.0) * (2.0 * r) / (ONE - w * r).powi(4)
}

/// `Σ zⁿ/nᵗ` (Horner evaluation only).
pub fn polylog(t: f64, order: usize) -> Result<Function> {
    check_range("t", t, t >= 0.0, "[0, inf)")?;
    let order = order.max(1);
    let series = TaylorSeries::from_fn(order, |n| {
        C64::new(if n == 0 { 0.0 } else { (n as f64).powf(-t) }, 0.0)
    })?;
    let fun = Function::from_series(FunctionSpec::new(Family::Polylog, order).with("t", t), series);
    Ok(if t <= 1.0 { fun.with_poles(vec![0.0]) } else { fun })
}

fn lacunary_exponent(exps: &[usize], scale: f64) -> impl Fn(C64) -> (C64, C64) + Send + Sync + Clone {
    let exps = exps.to_vec();
    move |z: C64| {
        let mut s = ZERO;
        let mut ds = ZERO;
        for &n in &exps {
            s += z.powu(n as u32);
            ds += z.powu(n as u32 - 1) * n as f64;
        }
        (s * scale, ds * scale)
    }
}

/// `Φ' = exp(½ Σ z^{n_p})` as a series of the given order.
pub fn lpr_phi_prime(seq: &LacunarySequence, order: usize) -> Result<TaylorSeries> {
    lacunary_exp_series(seq, 0.5, order)
}

fn lacunary_exp_series(seq: &LacunarySequence, scale: f64, order: usize) -> Result<TaylorSeries> {
    let exps = seq.truncated(order);
    TaylorSeries::from_fn(order, |n| C64::new(if exps.contains(&n) { scale } else { 0.0 }, 0.0))?.exp()
}

/// `Φ(z) = ∫₀^z exp(½ Σ w^{n_p}) dw`, with the sequence truncated to `n_p ≤ N`.
pub fn lpr_phi(seq: &LacunarySequence, order: usize) -> Result<Function> {
    let order = order.max(1);
    let series = lpr_phi_prime(seq, order - 1)?.integrate();
    let spec = FunctionSpec::new(Family::LprPhi, order).with("seq", seq);
    let e = lacunary_exponent(&seq.truncated(order), 0.5);
    let e2 = e.clone();
    Ok(Function::by_quadrature(spec, series, move |z| e(z).0.exp(), move |z| {
        let (s, ds) = e2(z);
        s.exp() * ds
    }))
}

/// The convex map with `1 + z f''/f' = ∫ (1+λz)/(1-λz) dμ(λ)`, i.e.
/// `f' = Π (1 - λ_j z)^{-2 t_j}`.
pub fn convex_from_measure(mu: &DiscreteMeasure, order: usize) -> Result<Function> {
    let order = order.max(1);
    let n = order - 1;
    let log_df = TaylorSeries::from_fn(n, |k| {
        if k == 0 {
            ZERO
        } else {
            mu.moment(k as u32) * (2.0 / k as f64)
        }
    })?;
    let series = log_df.exp()?.integrate();
    let spec = FunctionSpec::measure(mu.clone(), order);
    let atoms: Vec<(C64, f64)> = mu.atoms().iter().map(|a| (a.lambda(), a.weight)).collect();
    if let [(lam, _)] = atoms[..] {
        return Ok(Function::closed(
            spec,
            series,
            move |z| z / (ONE - lam * z),
            move |z| (ONE - lam * z).powi(-2),
            move |z| (ONE - lam * z).powi(-3) * lam * 2.0,
        )
        .with_measure(mu.clone()));
    }
    let (df, q) = measure_df(atoms);
    let df2 = df.clone();
    Ok(Function::by_quadrature(spec, series, move |z| df(z), move |z| df2(z) * q(z)).with_measure(mu.clone()))
}

type MeasureClosures = (
    Arc<dyn Fn(C64) -> C64 + Send + Sync>,
    Arc<dyn Fn(C64) -> C64 + Send + Sync>,
);

/// `f'` and `f''/f'` of the convex map generated by the atoms.
fn measure_df(atoms: Vec<(C64, f64)>) -> MeasureClosures {
    let a1 = atoms.clone();
    let df = move |z: C64| {
        let log: C64 = a1.iter().map(|&(l, t)| clog1p(-l * z) * (-2.0 * t)).sum();
        log.exp()
    };
    let q = move |z: C64| atoms.iter().map(|&(l, t)| l * (2.0 * t) / (ONE - l * z)).sum();
    (Arc::new(df), Arc::new(q))
}

/// Derivative of `f''/f'` for the convex map generated by the atoms.
fn measure_q_prime(atoms: Vec<(C64, f64)>) -> impl Fn(C64) -> C64 + Send + Sync {
    move |z: C64| atoms.iter().map(|&(l, t)| l * l * (2.0 * t) / (ONE - l * z).powi(2)).sum()
}

/// Alexander's transform `z h'(z)`, starlike when `h` is convex.
pub fn alexander_starlike(h: &Function) -> Result<Function> {
    let order = h.series.order();
    let series = h.series.derivative().shift_up();
    let spec = FunctionSpec::new(Family::AlexanderStarlike, order).with_source(h.spec.clone());
    let Some(mu) = &h.measure else {
        return Ok(Function::from_series(spec, series));
    };
    let atoms: Vec<(C64, f64)> = mu.atoms().iter().map(|a| (a.lambda(), a.weight)).collect();
    let (hd, q) = measure_df(atoms.clone());
    let dq = measure_q_prime(atoms);
    let (hd1, q1) = (hd.clone(), q.clone());
    let (hd2, q2) = (hd.clone(), q.clone());
    // f = z h', f' = h'(1 + zq), f'' = h'(2q + z(q' + q²))
    Ok(Function::closed(
        spec,
        series,
        move |z| z * hd(z),
        move |z| hd1(z) * (ONE + z * q1(z)),
        move |z| {
            let qz = q2(z);
            hd2(z) * (qz * 2.0 + z * (dq(z) + qz * qz))
        },
    )
    .with_poles(h.poles.clone()))
}

/// `z/((1-z)^{1+α/2}(1+z)^{1-α/2})`, starlike with `a₂ = α`.
pub fn starlike_extremal(alpha: f64, order: usize) -> Result<Function> {
    check_range("alpha", alpha, (0.0..=2.0).contains(&alpha), "[0, 2]")?;
    let order = order.max(1);
    let a = 1.0 + 0.5 * alpha;
    let b = 1.0 - 0.5 * alpha;
    let series = two_pole_series(a, b, order - 1)?.shift_up();
    let spec = FunctionSpec::new(Family::StarlikeExtremal, order).with("alpha", alpha);
    let f = move |z: C64| z * (ONE - z).powf(-a) * (ONE + z).powf(-b);
    let df = move |z: C64| (ONE + z * alpha + z * z) * (ONE - z).powf(-1.0 - a) * (ONE + z).powf(-1.0 - b);
    let q = move |z: C64| (z * 2.0 + alpha) / (ONE + z * alpha + z * z) + (1.0 + a) / (ONE - z) - (1.0 + b) / (ONE + z);
    let poles = if alpha == 0.0 { vec![0.0, PI] } else { vec![0.0] };
    Ok(Function::closed(spec, series, f, df, move |z| df(z) * q(z)).with_poles(poles))
}

/// `t k(z) + (1-t) s_0(z)`, close-to-convex with `a₂ = 2t`.
pub fn ctc_extremal(t: f64, order: usize) -> Result<Function> {
    check_range("t", t, t > 0.0 && t <= 1.0, "(0, 1]")?;
    let order = order.max(1);
    let k = koebe_dilated(1.0, order)?.series;
    let s0 = sector(0.0, order)?.series;
    let series = k.scale(C64::new(t, 0.0))?.add(&s0.scale(C64::new(1.0 - t, 0.0))?)?;
    let spec = FunctionSpec::new(Family::CtcExtremal, order).with("t", t);
    let f = move |z: C64| koebe_r(1.0, z) * t + log_ratio(z) * (0.5 * (1.0 - t));
    let df = move |z: C64| (ONE + z) / (ONE - z).powi(3) * t + (ONE - z * z).inv() * (1.0 - t);
    let d2f = move |z: C64| (z * 2.0 + 4.0) / (ONE - z).powi(4) * t + z * 2.0 / (ONE - z * z).powi(2) * (1.0 - t);
    Ok(Function::closed(spec, series, f, df, d2f).with_poles(vec![0.0]))
}

/// Parameters `(t, θ)` giving `a₂ = 0` for a given `β`.
pub fn ctc_three_atom_zero_a2(beta: f64) -> (f64, f64) {
    ((3.0 + beta) / 8.0, (-(1.0 + 3.0 * beta) / (3.0 + beta)).acos())
}

/// `f' = s_β' · h` with `h` the Carathéodory function of
/// `t δ_μ + t δ_μ̄ + (1-2t) δ_1`, `μ = e^{iθ}`. Defaults tune `a₂ = 0`.
pub fn ctc_three_atom(beta: f64, t: Option<f64>, theta: Option<f64>, order: usize) -> Result<Function> {
    check_range("beta", beta, (0.0..1.0).contains(&beta), "[0, 1)")?;
    let (t0, th0) = ctc_three_atom_zero_a2(beta);
    let t = t.unwrap_or(t0);
    let theta = theta.unwrap_or(th0);
    check_range("t", t, t > 0.0 && t < 0.5, "(0, 1/2)")?;
    check_range("theta", theta, theta > 0.0 && theta < PI, "(0, pi)")?;
    let order = order.max(1);
    let mu = DiscreteMeasure::new(vec![
        Atom::new(theta / PI, t),
        Atom::new(-theta / PI, t),
        Atom::new(0.0, 1.0 - 2.0 * t),
    ])?;
    let series = two_pole_series(1.0 + beta, 1.0 - beta, order - 1)?
        .mul(&mu.caratheodory_series(order - 1))?
        .integrate();
    let spec = FunctionSpec::new(Family::CtcThreeAtom, order)
        .with("beta", beta)
        .with("t", t)
        .with("theta", theta);
    let m = C64::from_polar(1.0, theta);
    let atoms = [(m, t), (m.conj(), t), (ONE, 1.0 - 2.0 * t)];
    let h = move |z: C64| -> C64 { atoms.iter().map(|&(l, w)| (ONE + l * z) / (ONE - l * z) * w).sum() };
    let dh = move |z: C64| -> C64 { atoms.iter().map(|&(l, w)| l * (2.0 * w) / (ONE - l * z).powi(2)).sum() };
    let sd = sector_df(beta);
    let q = sector_q(beta);
    let sd2 = sd.clone();
    let h2 = h;
    Ok(Function::by_quadrature(spec, series, move |z| sd(z) * h(z), move |z| {
        sd2(z) * (q(z) * h2(z) + dh(z))
    })
    .with_poles(vec![0.0]))
}

/// `z/(1+z²)`.
pub fn r_example(order: usize) -> Result<Function> {
    let order = order.max(1);
    let series = TaylorSeries::from_fn(order, |n| {
        C64::new(
            if n % 2 == 1 {
                if (n / 2) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            } else {
                0.0
            },
            0.0,
        )
    })?;
    Ok(Function::closed(
        FunctionSpec::new(Family::RExample, order),
        series,
        |z| z / (ONE + z * z),
        |z| (ONE - z * z) / (ONE + z * z).powi(2),
        |z| -z * 2.0 * (C64::new(3.0, 0.0) - z * z) / (ONE + z * z).powi(3),
    )
    .with_poles(vec![PI / 2.0, -PI / 2.0]))
}

/// The odd function `g(z) = √(f(z²))`, computed as `z (f(w)/w)^{1/2}` at `w = z²`.
pub fn sqrt_transform(source: &Function, order: usize) -> Result<Function> {
    let order = order.max(1);
    let q = source.series.shift_down()?;
    let series = q.pow(0.5)?.substitute_power(2).shift_up().truncate(order);
    let series = if series.order() < order { series.pad_polynomial(order) } else { series };
    let spec = FunctionSpec::new(Family::SqrtTransform, order).with_source(source.spec.clone());
    let near = series.clone();
    let src = source.map.clone();
    let poles: Vec<f64> = source
        .poles
        .iter()
        .flat_map(|&t| [0.5 * t, 0.5 * t + PI])
        .map(|t| (t + PI).rem_euclid(2.0 * PI) - PI)
        .collect();
    // Near the origin the closed-form expressions cancel; the series is exact there.
    let near_radius = 0.3f64.min(near.trust_radius());
    let jet = move |z: C64| -> [C64; 3] {
        if z.norm() < near_radius {
            return near.eval_jet(z);
        }
        let w = z * z;
        let s = (src.f.eval(w) / w).sqrt();
        let g = z * s;
        let fd = src.df.eval(w);
        let g1 = fd / s;
        let g2 = (fd + w * 2.0 * src.d2f.eval(w) - g1 * g1) / g;
        [g, g1, g2]
    };
    let (j0, j1, j2) = (jet.clone(), jet.clone(), jet);
    let mut fun = Function::closed(spec, series, move |z| j0(z)[0], move |z| j1(z)[1], move |z| j2(z)[2]);
    if source.map.kind() == crate::series::EvaluatorKind::HornerSeries {
        fun.map = HolomorphicMap::from_series(&fun.series);
    }
    Ok(fun.with_poles(poles))
}

/// `g(z) = ∫₀^z f'(ζ)^ε dζ`.
pub fn pfaltzgraff(source: &Function, eps: f64, order: usize) -> Result<Function> {
    check_range("eps", eps, eps > 0.0 && eps <= 0.25, "(0, 1/4]")?;
    let order = order.max(1);
    let spec = FunctionSpec::new(Family::Pfaltzgraff, order)
        .with("eps", eps)
        .with_source(source.spec.clone());
    if source.spec.family == Family::LprPhi {
        let seq = source.spec.sequence_param()?;
        return pfaltzgraff_lpr(&seq, eps, order, spec);
    }
    let series = source.series.derivative().truncate(order - 1).pow(eps)?.integrate();
    Ok(Function::from_series(spec, series))
}

fn pfaltzgraff_lpr(seq: &LacunarySequence, eps: f64, order: usize, spec: FunctionSpec) -> Result<Function> {
    let series = lacunary_exp_series(seq, 0.5 * eps, order - 1)?.integrate();
    let e = lacunary_exponent(&seq.truncated(order), 0.5 * eps);
    let e2 = e.clone();
    Ok(Function::by_quadrature(spec, series, move |z| e(z).0.exp(), move |z| {
        let (s, ds) = e2(z);
        s.exp() * ds
    }))
}

/// The unique root of `2^ε/(1-3ε) = 1/r` in `(0, 1/3)`.
pub fn eps0_solve(r: f64) -> Result<f64> {
    check_range("r", r, r > 0.0 && r < 1.0, "(0, 1)")?;
    let g = |e: f64| r * 2f64.powf(e) / (1.0 - 3.0 * e) - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0 / 3.0);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if g(hi).abs() < g(lo).abs() { hi } else { lo })
}

/// `min(ε₀(r), 1/4)`, the largest admissible `ε` for the composition.
pub fn omega_bound(r: f64) -> Result<f64> {
    Ok(eps0_solve(r)?.min(0.25))
}

/// Whether `(r, ε)` lies in `Ω = {0 < r < 1, 0 < ε ≤ min(ε₀(r), 1/4)}`.
pub fn in_omega(r: f64, eps: f64) -> bool {
    r > 0.0 && r < 1.0 && eps > 0.0 && omega_bound(r).is_ok_and(|b| eps <= b)
}

/// `f = k_r ∘ g` with `g = ∫ Φ'^ε`, so that `a₂(f) = 2r + ε/4`.
pub fn lpr_composition(r: f64, eps: f64, seq: &LacunarySequence, order: usize) -> Result<Function> {
    let bound = if r > 0.0 && r < 1.0 { omega_bound(r)? } else { f64::NAN };
    if !in_omega(r, eps) {
        return Err(Error::NotInOmega { r, eps, bound });
    }
    let order = order.max(1);
    let gspec = FunctionSpec::new(Family::Pfaltzgraff, order)
        .with("eps", eps)
        .with_source(FunctionSpec::new(Family::LprPhi, order).with("seq", seq));
    let g = pfaltzgraff_lpr(seq, eps, order, gspec)?;
    let series = koebe_dilated(r, order)?.series.compose(&g.series)?;
    let spec = FunctionSpec::new(Family::LprComposition, order)
        .with("r", r)
        .with("eps", eps)
        .with("seq", seq);
    let gm = g.map.clone();
    let (g1, g2) = (gm.clone(), gm.clone());
    Ok(Function::closed(
        spec,
        series,
        move |z| koebe_r(r, gm.f.eval(z)),
        move |z| koebe_r_d1(r, g1.f.eval(z)) * g1.df.eval(z),
        move |z| {
            let w = g2.f.eval(z);
            let d = g2.df.eval(z);
            koebe_r_d2(r, w) * d * d + koebe_r_d1(r, w) * g2.d2f.eval(z)
        },
    ))
}

/// Builds any zoo member from its declarative spec.
pub fn build(spec: &FunctionSpec) -> Result<Function> {
    let n = spec.order;
    if n == 0 {
        return Err(Error::BadConfig("order must be at least 1".into()));
    }
    let mut fun = match spec.family {
        Family::Sector => sector(spec.real("alpha")?, n),
        Family::Strip => strip(spec.real("alpha")?, n),
        Family::KoebeDilated => koebe_dilated(spec.real_or("r", 1.0)?, n),
        Family::HalfPlane => half_plane(n),
        Family::Polylog => polylog(spec.real("t")?, n),
        Family::LprPhi => lpr_phi(&spec.sequence_param()?, n),
        Family::ConvexFromMeasure => convex_from_measure(&spec.measure_param()?, n),
        Family::AlexanderStarlike => {
            let src = build(&spec.source_or(|| FunctionSpec::sector(0.5, n)))?;
            alexander_starlike(&src)
        }
        Family::StarlikeExtremal => starlike_extremal(spec.real("alpha")?, n),
        Family::CtcExtremal => ctc_extremal(spec.real("t")?, n),
        Family::CtcThreeAtom => ctc_three_atom(
            spec.real("beta")?,
            spec.real_opt("t")?,
            spec.real_opt("theta")?,
            n,
        ),
        Family::RExample => r_example(n),
        Family::SqrtTransform => {
            let src = build(&spec.source_or(|| FunctionSpec::new(Family::LprPhi, n)))?;
            sqrt_transform(&src, n)
        }
        Family::Pfaltzgraff => {
            let src = build(&spec.source_or(|| FunctionSpec::new(Family::LprPhi, n)))?;
            pfaltzgraff(&src, spec.real("eps")?, n)
        }
        Family::LprComposition => lpr_composition(spec.real("r")?, spec.real("eps")?, &spec.sequence_param()?, n),
    }?;
    // keep the caller's spelling of the spec (optional parameters stay implicit)
    if spec.family != Family::CtcThreeAtom {
        fun.spec = spec.clone();
    }
    Ok(fun)
}
