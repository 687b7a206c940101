//! Truncated complex Taylor series.
//!
//! A [`TaylorSeries`] of order `N` stores the coefficients of `z^0 ..= z^N`
//! and nothing beyond. Binary operations truncate to the smaller order of
//! their operands so no coefficient is ever reported that the inputs do not
//! determine. Every operation checks its output for non-finite values and
//! fails with [`Error::NonFinite`] instead of propagating NaN or infinity.
//!
//! Multiplication is the plain Cauchy product (`O(N^2)`); composition uses
//! Horner's scheme on series (`O(N^3)`), which is adequate for the orders
//! used by compositions here (a few hundred).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerance used when a constant term is required to equal one.
const UNIT_CONSTANT_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorSeries {
    coeffs: Vec<C64>,
}

impl fmt::Debug for TaylorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<_> = self.coeffs.iter().take(8).collect();
        write!(f, "TaylorSeries(order {}, {:?}", self.order(), shown)?;
        if self.coeffs.len() > 8 {
            write!(f, ", ...")?;
        }
        write!(f, ")")
    }
}

fn check_finite(coeffs: Vec<C64>, op: &'static str) -> Result<TaylorSeries> {
    if coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        Ok(TaylorSeries { coeffs })
    } else {
        Err(Error::NonFinite(op))
    }
}

impl TaylorSeries {
    /// Builds a series from coefficients `c[0], c[1], ...`; the order is `len - 1`.
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Ok(Self::zero(0));
        }
        check_finite(coeffs, "new")
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    /// Series of order `order` whose n-th coefficient is `f(n)`.
    pub fn from_fn(order: usize, f: impl Fn(usize) -> C64) -> Result<Self> {
        check_finite((0..=order).map(f).collect(), "from_fn")
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![ZERO; order + 1],
        }
    }

    pub fn constant(c: C64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// The identity map `z`.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = ONE;
        }
        s
    }

    /// Binomial series of `(1 + c z)^exponent`.
    pub fn binomial(c: C64, exponent: f64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut b = ONE;
        coeffs.push(b);
        for n in 1..=order {
            b = b * c * ((exponent - (n as f64 - 1.0)) / n as f64);
            coeffs.push(b);
        }
        Self { coeffs }
    }

    /// Geometric series `1 / (1 - c z)`.
    pub fn geometric(c: C64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut b = ONE;
        for _ in 0..=order {
            coeffs.push(b);
            b *= c;
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero beyond the truncation order is *not* implied,
    /// so this panics when `n > order`.
    pub fn coeff(&self, n: usize) -> C64 {
        self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Raises the order by padding with zeros. Only meaningful for polynomials.
    pub fn pad_polynomial(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(self.order()) + 1, ZERO);
        Self { coeffs }
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() <= tol)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        check_finite(
            (0..=n).map(|k| self.coeffs[k] + other.coeffs[k]).collect(),
            "add",
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        check_finite(
            (0..=n).map(|k| self.coeffs[k] - other.coeffs[k]).collect(),
            "sub",
        )
    }

    pub fn scale(&self, c: C64) -> Result<Self> {
        check_finite(self.coeffs.iter().map(|&a| a * c).collect(), "scale")
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..=n)
            .map(|k| (0..=k).fold(ZERO, |acc, j| acc + a[j] * b[k - j]))
            .collect();
        check_finite(coeffs, "mul")
    }

    /// Quotient `self / other`; requires `other(0) != 0`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let b0 = other.coeffs[0];
        if b0 == ZERO {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order().min(other.order());
        let b = &other.coeffs;
        let mut q: Vec<C64> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let s = (1..=k).fold(self.coeffs[k], |acc, j| acc - b[j] * q[k - j]);
            q.push(s / b0);
        }
        check_finite(q, "div")
    }

    /// `outer(inner(z))`; requires `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.coeffs[0] != ZERO {
            return Err(Error::InnerConstantNonzero(format!("{}", inner.coeffs[0])));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] += self.coeffs[k];
        }
        check_finite(acc.coeffs, "compose")
    }

    /// `exp(self)` via `n b_n = sum_k k a_k b_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        let a = &self.coeffs;
        let n = self.order();
        let mut b = Vec::with_capacity(n + 1);
        b.push(a[0].exp());
        for m in 1..=n {
            let s = (1..=m).fold(ZERO, |acc, k| acc + a[k] * b[m - k] * k as f64);
            b.push(s / m as f64);
        }
        check_finite(b, "exp")
    }

    /// Principal logarithm; requires constant term 1 so that `log 1 = 0`.
    pub fn log(&self) -> Result<Self> {
        let a = &self.coeffs;
        if (a[0] - ONE).norm() > UNIT_CONSTANT_TOL {
            return Err(Error::LogConstantNotOne(format!("{}", a[0])));
        }
        let n = self.order();
        let mut l = vec![ZERO; n + 1];
        for m in 1..=n {
            let s = (1..m).fold(a[m] * m as f64, |acc, k| acc - l[k] * a[m - k] * k as f64);
            l[m] = s / m as f64;
        }
        check_finite(l, "log")
    }

    /// `self^alpha`.
    ///
    /// A constant term `c != 1` is factored out as `c^alpha` on the principal
    /// branch (`arg c` in `(-pi, pi]`); the remaining unit-constant series is
    /// raised with Miller's recurrence `n b_n = sum_k ((alpha+1)k - n) a_k b_{n-k}`.
    pub fn pow(&self, alpha: f64) -> Result<Self> {
        let c = self.coeffs[0];
        if c == ZERO {
            return Err(Error::ConstantNotOne);
        }
        let n = self.order();
        let a: Vec<C64> = self.coeffs.iter().map(|&x| x / c).collect();
        let mut b = Vec::with_capacity(n + 1);
        b.push(ONE);
        for m in 1..=n {
            let mf = m as f64;
            let s = (1..=m).fold(ZERO, |acc, k| {
                acc + a[k] * b[m - k] * ((alpha + 1.0) * k as f64 - mf)
            });
            b.push(s / mf);
        }
        let lead = if c == ONE { ONE } else { c.powf(alpha) };
        check_finite(b.into_iter().map(|x| x * lead).collect(), "pow")
    }

    /// Term-wise derivative; the order drops by one (order 0 stays order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &c)| c * n as f64)
                .collect(),
        }
    }

    /// Antiderivative vanishing at 0; the order rises by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| c / (n as f64 + 1.0)),
        );
        Self { coeffs }
    }

    /// Multiplies by `z`, raising the order by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ZERO);
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Divides by `z`; requires the constant term to vanish.
    pub fn shift_down(&self) -> Result<Self> {
        if self.coeffs[0] != ZERO {
            return Err(Error::InnerConstantNonzero(format!("{}", self.coeffs[0])));
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Substitutes `z -> z^k`.
    pub fn substitute_power(&self, k: usize) -> Self {
        let order = self.order() * k;
        let mut s = Self::zero(order);
        for (n, &c) in self.coeffs.iter().enumerate() {
            s.coeffs[n * k] = c;
        }
        s
    }

    /// Radius beyond which the truncation error of Horner evaluation dominates.
    pub fn trust_radius(&self) -> f64 {
        let n = self.order().max(1) as f64;
        (1.0 - 10.0 / n).max(0.5)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: C64) -> C64 {
        if z.norm() > self.trust_radius() {
            log::warn!(
                "evaluating an order-{} series at |z| = {} beyond its trust radius",
                self.order(),
                z.norm()
            );
        }
        self.horner(z)
    }

    fn horner(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value, first and second derivative in one Horner pass.
    pub fn eval_jet(&self, z: C64) -> [C64; 3] {
        let mut p = ZERO;
        let mut dp = ZERO;
        let mut d2p = ZERO;
        for &c in self.coeffs.iter().rev() {
            d2p = d2p * z + dp * 2.0;
            dp = dp * z + p;
            p = p * z + c;
        }
        [p, dp, d2p]
    }

    /// Taylor coefficients of `w -> self(center + w)`, truncated to the same order.
    ///
    /// Computed by repeated synthetic division; reliable while `|center|` stays
    /// well inside the trust radius.
    pub fn recenter(&self, center: C64) -> Result<Self> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for k in 0..n {
            for j in (k..n - 1).rev() {
                let next = c[j + 1];
                c[j] += center * next;
            }
        }
        check_finite(c, "recenter")
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.order().min(other.order());
        (0..=n)
            .map(|k| (self.coeffs[k] - other.coeffs[k]).norm())
            .fold(0.0, f64::max)
    }
}

/// How a [`PointEvaluator`] computes its values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluatorKind {
    ClosedForm,
    HornerSeries,
}

type PointFn = dyn Fn(C64) -> C64 + Send + Sync;

/// A pointwise evaluator on the unit disk.
#[derive(Clone)]
pub struct PointEvaluator {
    f: Arc<PointFn>,
    kind: EvaluatorKind,
    trust_radius: f64,
}

impl fmt::Debug for PointEvaluator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointEvaluator")
            .field("kind", &self.kind)
            .field("trust_radius", &self.trust_radius)
            .finish()
    }
}

impl PointEvaluator {
    pub fn closed_form(f: impl Fn(C64) -> C64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            kind: EvaluatorKind::ClosedForm,
            trust_radius: 1.0,
        }
    }

    pub fn horner(series: TaylorSeries) -> Self {
        let trust_radius = series.trust_radius();
        Self {
            f: Arc::new(move |z| series.horner(z)),
            kind: EvaluatorKind::HornerSeries,
            trust_radius,
        }
    }

    pub fn kind(&self) -> EvaluatorKind {
        self.kind
    }

    pub fn trust_radius(&self) -> f64 {
        self.trust_radius
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.f)(z)
    }

    /// Checks the radius against the trust radius before evaluating, and the
    /// value for finiteness after.
    pub fn try_eval(&self, z: C64) -> Result<C64> {
        self.check_radius(z.norm())?;
        let w = (self.f)(z);
        if w.re.is_finite() && w.im.is_finite() {
            Ok(w)
        } else {
            Err(Error::NonFiniteSample(format!("{z}")))
        }
    }

    /// Series evaluators refuse radii beyond `1 - 10/N`; closed forms accept
    /// anything inside the closed disk.
    pub fn check_radius(&self, r: f64) -> Result<()> {
        let limit = match self.kind {
            EvaluatorKind::ClosedForm => 1.0,
            EvaluatorKind::HornerSeries => self.trust_radius,
        };
        if r > limit {
            Err(Error::OutsideTrustRadius {
                radius: r,
                trust: self.trust_radius,
            })
        } else {
            Ok(())
        }
    }
}

/// A holomorphic map together with its first two derivatives.
#[derive(Clone, Debug)]
pub struct HolomorphicMap {
    pub f: PointEvaluator,
    pub df: PointEvaluator,
    pub d2f: PointEvaluator,
}

impl HolomorphicMap {
    pub fn from_series(series: &TaylorSeries) -> Self {
        let d1 = series.derivative();
        let d2 = d1.derivative();
        Self {
            f: PointEvaluator::horner(series.clone()),
            df: PointEvaluator::horner(d1),
            d2f: PointEvaluator::horner(d2),
        }
    }

    pub fn kind(&self) -> EvaluatorKind {
        self.f.kind()
    }

    /// `f''(z) / f'(z)`.
    pub fn log_derivative_of_df(&self, z: C64) -> Result<C64> {
        let d1 = self.df.eval(z);
        if d1.norm() == 0.0 || !d1.re.is_finite() {
            return Err(Error::DerivativeVanishes(format!("{z}")));
        }
        Ok(self.d2f.eval(z) / d1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn koebe(order: usize) -> TaylorSeries {
        TaylorSeries::from_fn(order, |n| c(n as f64)).unwrap()
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = TaylorSeries::from_real(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        let b = TaylorSeries::from_real(&[1.0, -1.0, 0.0, 0.0]).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.coeffs(), &[c(1.0), c(0.0), c(-1.0), c(0.0)]);
    }

    #[test]
    fn mul_geometric_times_one_minus_z() {
        let g = TaylorSeries::geometric(ONE, 20);
        let p = g.mul(&TaylorSeries::from_real(&[1.0, -1.0]).unwrap().pad_polynomial(20)).unwrap();
        assert_eq!(p.coeff(0), ONE);
        assert!(p.coeffs()[1..].iter().all(|&x| x == ZERO));
    }

    #[test]
    fn mul_truncates_to_min_order() {
        let a = TaylorSeries::one(10);
        let b = TaylorSeries::one(4);
        assert_eq!(a.mul(&b).unwrap().order(), 4);
        assert_eq!(a.add(&b).unwrap().order(), 4);
    }

    #[test]
    fn div_cases() {
        let one = TaylorSeries::one(16);
        let omz = TaylorSeries::from_real(&[1.0, -1.0]).unwrap().pad_polynomial(16);
        let g = one.div(&omz).unwrap();
        assert!(g.coeffs().iter().all(|&x| (x - ONE).norm() < 1e-15));

        let num = TaylorSeries::from_real(&[1.0, 0.0, -1.0]).unwrap().pad_polynomial(16);
        let q = num.div(&omz).unwrap();
        assert!((q.coeff(0) - ONE).norm() < 1e-15 && (q.coeff(1) - ONE).norm() < 1e-15);
        assert!(q.coeffs()[2..].iter().all(|x| x.norm() < 1e-15));

        let k = koebe(16);
        let inv_sq = TaylorSeries::binomial(c(-1.0), -2.0, 16);
        let z = k.div(&inv_sq).unwrap();
        assert!(z.max_abs_diff(&TaylorSeries::identity(16)) < 1e-12);

        assert_eq!(
            one.div(&TaylorSeries::identity(16)),
            Err(Error::ZeroConstantTerm)
        );
    }

    #[test]
    fn compose_cases() {
        let n = 24;
        let k = koebe(n);
        assert_eq!(k.compose(&TaylorSeries::identity(n)).unwrap(), k);

        let m = TaylorSeries::geometric(ONE, n).sub(&TaylorSeries::one(n)).unwrap();
        let mm = m.compose(&m).unwrap();
        for j in 1..=n {
            assert!((mm.coeff(j).re - 2f64.powi(j as i32 - 1)).abs() < 1e-9);
        }

        let minus_z = TaylorSeries::identity(n).scale(c(-1.0)).unwrap();
        let kk = k.compose(&minus_z).unwrap();
        for j in 1..=n {
            let expected = -(j as f64) * (-1f64).powi(j as i32 + 1);
            assert!((kk.coeff(j).re - expected).abs() < 1e-12);
        }
        assert!(matches!(
            k.compose(&TaylorSeries::one(n)),
            Err(Error::InnerConstantNonzero(_))
        ));
    }

    #[test]
    fn exp_log_cases() {
        assert_eq!(TaylorSeries::zero(8).exp().unwrap(), TaylorSeries::one(8));

        let g = TaylorSeries::geometric(ONE, 30);
        let l = g.log().unwrap();
        for n in 1..=30 {
            assert!((l.coeff(n).re - 1.0 / n as f64).abs() < 1e-14);
        }

        let one_plus_z = TaylorSeries::from_real(&[1.0, 1.0]).unwrap().pad_polynomial(64);
        let back = one_plus_z.log().unwrap().exp().unwrap();
        assert!(back.max_abs_diff(&one_plus_z) < 1e-13);

        assert!(matches!(
            TaylorSeries::constant(c(2.0), 4).log(),
            Err(Error::LogConstantNotOne(_))
        ));
    }

    #[test]
    fn pow_cases() {
        // binomial recurrence oracle for (1-z)^{-2}: (n+1)
        let omz = TaylorSeries::from_real(&[1.0, -1.0]).unwrap().pad_polynomial(40);
        let p = omz.pow(-2.0).unwrap();
        for n in 0..=40 {
            assert!((p.coeff(n).re - (n as f64 + 1.0)).abs() < 1e-10);
        }
        let ratio = TaylorSeries::from_real(&[1.0, 1.0])
            .unwrap()
            .pad_polynomial(10)
            .div(&omz.truncate(10))
            .unwrap();
        let h = ratio.pow(0.5).unwrap();
        // ((1+z)/(1-z))^{1/2} = 1 + z + ...
        assert!((h.coeff(1) - ONE).norm() < 1e-15);
        assert_eq!(ratio.pow(0.0).unwrap(), TaylorSeries::one(10));

        let sq = ratio.pow(2.0).unwrap();
        assert!(sq.max_abs_diff(&ratio.mul(&ratio).unwrap()) < 1e-12);

        // non-unit constant: principal branch
        let four = TaylorSeries::constant(c(4.0), 3);
        assert!((four.pow(0.5).unwrap().coeff(0) - c(2.0)).norm() < 1e-15);
        assert_eq!(TaylorSeries::zero(3).pow(0.5), Err(Error::ConstantNotOne));
    }

    #[test]
    fn derivative_integral_cases() {
        let k = koebe(30);
        let dk = k.derivative();
        for n in 0..30 {
            assert_eq!(dk.coeff(n).re, ((n + 1) * (n + 1)) as f64);
        }
        let inv = TaylorSeries::binomial(c(-1.0), -1.0, 31).pad_polynomial(31);
        let inv_sq_minus = TaylorSeries::one(31)
            .div(&TaylorSeries::from_real(&[1.0, 0.0, -1.0]).unwrap().pad_polynomial(31))
            .unwrap();
        let s0 = inv_sq_minus.integrate();
        for k in 0..15 {
            assert!((s0.coeff(2 * k + 1).re - 1.0 / (2 * k + 1) as f64).abs() < 1e-15);
            assert_eq!(s0.coeff(2 * k + 2).re, 0.0);
        }
        assert_eq!(TaylorSeries::zero(5).integrate(), TaylorSeries::zero(6));
        assert_eq!(inv.integrate().derivative(), inv);
    }

    #[test]
    fn eval_cases() {
        let g = TaylorSeries::geometric(ONE, 200);
        assert!((g.eval(c(0.5)) - c(2.0)).norm() < 1e-14);
        // approach the covering radius from inside the trust radius
        let k = koebe(8000);
        let r = -0.995;
        let v = k.eval(c(r));
        assert!((v.re - r / (1.0 - r) / (1.0 - r)).abs() < 1e-9);
        assert!((v.re + 0.25).abs() < 2e-6);
        let s = TaylorSeries::from_real(&[3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.eval(ZERO), c(3.0));
    }

    #[test]
    fn jet_matches_derivative_series() {
        let k = koebe(40);
        let z = C64::new(0.3, -0.2);
        let [f, df, d2f] = k.eval_jet(z);
        assert!((f - k.eval(z)).norm() < 1e-13);
        assert!((df - k.derivative().eval(z)).norm() < 1e-12);
        assert!((d2f - k.derivative().derivative().eval(z)).norm() < 1e-11);
    }

    #[test]
    fn recenter_matches_derivatives() {
        let g = TaylorSeries::geometric(ONE, 60);
        let zeta = C64::new(0.2, 0.1);
        let shifted = g.recenter(zeta).unwrap();
        // 1/(1 - zeta - w) = sum w^k / (1-zeta)^{k+1}
        for k in 0..10 {
            let expected = (ONE - zeta).powi(-(k as i32) - 1);
            assert!((shifted.coeff(k) - expected).norm() < 1e-10);
        }
    }

    #[test]
    fn non_finite_rejected() {
        assert_eq!(
            TaylorSeries::new(vec![C64::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite("new"))
        );
        let huge = TaylorSeries::from_real(&[1.0, 1e300, 0.0]).unwrap();
        assert!(huge.mul(&huge).is_err());
    }

    #[test]
    fn closed_form_agrees_with_horner() {
        let n = 64;
        let g = TaylorSeries::geometric(ONE, n);
        let closed = PointEvaluator::closed_form(|z| ONE / (ONE - z));
        let horner = PointEvaluator::horner(g);
        assert_eq!(horner.kind(), EvaluatorKind::HornerSeries);
        for k in 0..32 {
            let z = C64::from_polar(0.5, k as f64 * 0.2);
            let diff = (closed.eval(z) - horner.eval(z)).norm();
            // truncation tail 0.5^65 / 0.5 is far below this bound
            assert!(diff <= 10.0 * f64::EPSILON * n as f64);
        }
        assert!(horner.try_eval(c(0.9)).is_err());
        assert!(closed.try_eval(c(0.9)).is_ok());
    }

    fn unit_series(order: usize) -> impl Strategy<Value = TaylorSeries> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), order + 1).prop_map(|v| {
            TaylorSeries::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn ring_axioms(a in unit_series(128), b in unit_series(128), c in unit_series(128)) {
            let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
            let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
            let scale = 1.0 + lhs.coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max);
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12 * scale);
            let d1 = a.mul(&b.add(&c).unwrap()).unwrap();
            let d2 = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert!(d1.max_abs_diff(&d2) < 1e-12 * scale);
        }

        #[test]
        fn pow_round_trip(tail in unit_series(128), alpha in 0.1f64..3.0) {
            // keep the series a small perturbation of 1 so both powers stay tame
            let mut coeffs: Vec<C64> = tail.coeffs().iter().enumerate()
                .map(|(n, &x)| x * 0.5f64.powi(n as i32 + 1)).collect();
            coeffs[0] = ONE;
            let a = TaylorSeries::new(coeffs).unwrap();
            let back = a.pow(alpha).unwrap().pow(1.0 / alpha).unwrap();
            prop_assert!(back.max_abs_diff(&a) < 1e-10);
        }

        #[test]
        fn derivative_undoes_integral(a in unit_series(100)) {
            let back = a.integrate().derivative();
            for (x, y) in back.coeffs().iter().zip(a.coeffs()) {
                prop_assert!((x - y).norm() <= 1e-14 * y.norm().max(1e-300));
            }
        }
    }
}
