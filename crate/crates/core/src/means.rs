//! Integral means `M_p(r, f)` and the growth exponents derived from them.
//!
//! All circle integrals use the equal-weight periodic trapezoid rule with
//! `n_θ = max(2048, 64/(1-r))` nodes unless told otherwise. Sums are formed
//! sequentially after a parallel evaluation pass so results do not depend on
//! scheduling.
//!
//! Growth exponents come from the radial ladder `r_k = 1 - 2^{-k}`. Writing
//! `x = 1/(1-r)`, the estimator regresses the logarithm of the increments
//! `M_p^p(r_{k+1}) - M_p^p(r_k)` on `log x`. Increments remove the additive
//! constant that biases a plain log-log fit, and the slope is signed: it is
//! positive when the means blow up like `x^γ`, zero for logarithmic growth
//! and negative when they converge. The critical Hardy exponent is the zero
//! crossing of this signed slope as a function of `p`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::series::{EvaluatorKind, PointEvaluator, C64};

/// Rungs at the top of the ladder used by the regressions.
pub const FIT_RUNGS: usize = 6;

/// `1 - 2^{-k}` for `k = 3..=12`.
pub fn default_ladder() -> Vec<f64> {
    ladder(3, 12)
}

pub fn ladder(k_min: i32, k_max: i32) -> Vec<f64> {
    (k_min..=k_max).map(|k| 1.0 - 2f64.powi(-k)).collect()
}

/// `max(2048, ⌈64/(1-r)⌉)`.
pub fn default_n_theta(r: f64) -> usize {
    let resolve = (64.0 / (1.0 - r)).ceil();
    if resolve.is_finite() {
        (resolve as usize).max(2048)
    } else {
        usize::MAX
    }
}

/// Formats a float with 17 significant digits, independent of locale.
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn circle_values(f: &PointEvaluator, r: f64, n_theta: usize) -> Result<Vec<C64>> {
    f.check_radius(r)?;
    let step = 2.0 * PI / n_theta as f64;
    let values: Vec<C64> = (0..n_theta)
        .into_par_iter()
        .map(|k| f.eval(C64::from_polar(r, step * k as f64)))
        .collect();
    if let Some(k) = values.iter().position(|w| !(w.re.is_finite() && w.im.is_finite())) {
        return Err(Error::NonFiniteSample(format!("{}", C64::from_polar(r, step * k as f64))));
    }
    Ok(values)
}

/// `M_p^p(r, f) = (1/2π) ∫ |f(re^{iθ})|^p dθ`.
pub fn integral_means_pow(f: &PointEvaluator, p: f64, r: f64, n_theta: usize) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::ParamOutOfRange { name: "p", value: p, range: "(0, inf)" });
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::ParamOutOfRange { name: "r", value: r, range: "(0, 1)" });
    }
    if n_theta < 64 {
        return Err(Error::ParamOutOfRange {
            name: "n_theta",
            value: n_theta as f64,
            range: "[64, inf)",
        });
    }
    let values = circle_values(f, r, n_theta)?;
    let sum: f64 = values.iter().map(|w| w.norm().powf(p)).sum();
    Ok(sum / n_theta as f64)
}

/// `M_p(r, f)`.
pub fn integral_means(f: &PointEvaluator, p: f64, r: f64, n_theta: usize) -> Result<f64> {
    Ok(integral_means_pow(f, p, r, n_theta)?.powf(1.0 / p))
}

/// `M_∞(r, f)`: grid maximum refined by one parabolic (Newton) step in θ.
pub fn max_modulus(f: &PointEvaluator, r: f64, n_theta: usize) -> Result<f64> {
    let n_theta = n_theta.max(8);
    let values = circle_values(f, r, n_theta)?;
    let (k, best) = values
        .iter()
        .map(|w| w.norm())
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
    let step = 2.0 * PI / n_theta as f64;
    let left = values[(k + n_theta - 1) % n_theta].norm();
    let right = values[(k + 1) % n_theta].norm();
    let curvature = left - 2.0 * best + right;
    if curvature < 0.0 {
        let shift = 0.5 * (left - right) / curvature;
        if shift.abs() <= 1.0 {
            let theta = step * (k as f64 + shift);
            let polished = f.eval(C64::from_polar(r, theta)).norm();
            if polished.is_finite() {
                return Ok(best.max(polished));
            }
        }
    }
    Ok(best)
}

/// Moduli `|f(re^{iθ})|` along a radius, for inspecting boundary behaviour.
pub fn radial_trace(f: &PointEvaluator, theta: f64, radii: &[f64]) -> Result<Vec<f64>> {
    radii
        .iter()
        .map(|&r| f.try_eval(C64::from_polar(r, theta)).map(|w| w.norm()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeansProfile {
    pub p: f64,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub n_theta: Vec<usize>,
    pub evaluator_kind: EvaluatorKind,
}

impl MeansProfile {
    /// `M_p(r)` on each radius with the default node count.
    pub fn compute(f: &PointEvaluator, p: f64, radii: &[f64]) -> Result<Self> {
        check_increasing(radii)?;
        let n_theta: Vec<usize> = radii.iter().map(|&r| default_n_theta(r)).collect();
        let values = radii
            .iter()
            .zip(&n_theta)
            .map(|(&r, &n)| integral_means(f, p, r, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            p,
            radii: radii.to_vec(),
            values,
            n_theta,
            evaluator_kind: f.kind(),
        })
    }

    /// Hardy's convexity theorem makes `M_p` nondecreasing in `r`.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0] * (1.0 - slack) - slack)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,r,n_theta,M_p\n");
        for ((r, n), m) in self.radii.iter().zip(&self.n_theta).zip(&self.values) {
            let _ = writeln!(out, "{},{},{},{}", csv_float(self.p), csv_float(*r), n, csv_float(*m));
        }
        out
    }
}

fn check_increasing(radii: &[f64]) -> Result<()> {
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::BadConfig("radii must increase strictly inside (0, 1)".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    /// `max(0, γ)`, the blow-up exponent of `M_p^p` in `1/(1-r)`.
    pub gamma: f64,
    /// The signed regression slope; negative when the means converge.
    pub gamma_signed: f64,
    pub stderr: f64,
    /// Critical Hardy exponent, when a bracket was searched.
    pub p_star: Option<f64>,
    pub bracket: Option<(f64, f64)>,
    /// Means at the rungs that entered the last fit.
    pub profile: MeansProfile,
}

impl ExponentEstimate {
    pub fn to_csv(&self) -> String {
        self.profile.to_csv()
    }
}

/// Least-squares slope and its standard error.
fn slope(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return Err(Error::RegressionIllConditioned("fewer than two points".into()));
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 1e-12) {
        return Err(Error::RegressionIllConditioned("abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    let stderr = if xs.len() > 2 {
        let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - my - b * (x - mx)).powi(2)).sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    if !b.is_finite() {
        return Err(Error::RegressionIllConditioned("non-finite slope".into()));
    }
    Ok((b, stderr))
}

/// Blow-up exponent of `M_p^p(r, f)` from the top [`FIT_RUNGS`] radii.
pub fn blowup_exponent(f: &PointEvaluator, p: f64, radii: &[f64]) -> Result<ExponentEstimate> {
    check_increasing(radii)?;
    let top = &radii[radii.len().saturating_sub(FIT_RUNGS)..];
    if top.len() < 3 {
        return Err(Error::RegressionIllConditioned("need at least three radii".into()));
    }
    let n_theta: Vec<usize> = top.iter().map(|&r| default_n_theta(r)).collect();
    let powers = top
        .iter()
        .zip(&n_theta)
        .map(|(&r, &n)| integral_means_pow(f, p, r, n))
        .collect::<Result<Vec<_>>>()?;
    let mut xs = Vec::with_capacity(top.len() - 1);
    let mut ys = Vec::with_capacity(top.len() - 1);
    for k in 0..top.len() - 1 {
        let x0 = 1.0 / (1.0 - top[k]);
        let x1 = 1.0 / (1.0 - top[k + 1]);
        // converged means leave increments at rounding level; floor them so
        // the slope reads as strongly negative instead of undefined
        let floor = 1e-15 * powers[k + 1].abs().max(f64::MIN_POSITIVE);
        let inc = (powers[k + 1] - powers[k]).max(floor);
        xs.push(0.5 * (x0.ln() + x1.ln()));
        // dividing by log(x1/x0) keeps a logarithmic growth at slope zero on any ladder
        ys.push((inc / (x1 / x0).ln()).ln());
    }
    let (b, stderr) = slope(&xs, &ys)?;
    let profile = MeansProfile {
        p,
        radii: top.to_vec(),
        values: powers.iter().map(|v| v.powf(1.0 / p)).collect(),
        n_theta,
        evaluator_kind: f.kind(),
    };
    Ok(ExponentEstimate {
        gamma: b.max(0.0),
        gamma_signed: b,
        stderr,
        p_star: None,
        bracket: None,
        profile,
    })
}

/// Critical Hardy exponent: bisection on `p` for the crossing of the signed
/// blow-up slope through `threshold` (0 by default).
pub fn hardy_critical_exponent(
    f: &PointEvaluator,
    bracket: (f64, f64),
    radii: &[f64],
    threshold: f64,
) -> Result<ExponentEstimate> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::BadConfig(format!("invalid bracket [{lo}, {hi}]")));
    }
    let g_lo = blowup_exponent(f, lo, radii)?.gamma_signed;
    let mut est_hi = blowup_exponent(f, hi, radii)?;
    if !(g_lo <= threshold && est_hi.gamma_signed > threshold) {
        return Err(Error::NoBracket {
            lo,
            hi,
            gamma_lo: g_lo,
            gamma_hi: est_hi.gamma_signed,
        });
    }
    let mut best = None;
    while hi - lo > 1e-5 * hi {
        let mid = 0.5 * (lo + hi);
        let est = blowup_exponent(f, mid, radii)?;
        if est.gamma_signed > threshold {
            hi = mid;
            est_hi = est;
        } else {
            lo = mid;
            best = Some(est);
        }
    }
    let mut est = best.unwrap_or(est_hi);
    est.p_star = Some(0.5 * (lo + hi));
    est.bracket = Some(bracket);
    Ok(est)
}

/// `t̂ = 1 - (growth exponent of M_p(r, f'))`, the boundary smoothness in
/// the Hardy–Littlewood sense `M_p(r, f') = O((1-r)^{t-1})`.
pub fn hl_smoothness_rate(f_prime: &PointEvaluator, p: f64, radii: &[f64]) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::ParamOutOfRange { name: "p", value: p, range: "[1, inf)" });
    }
    let est = blowup_exponent(f_prime, p, radii)?;
    Ok(1.0 - est.gamma / p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrawitzOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Mass of `[0, 2^-40]` relative to `r^p`.
const PRAWITZ_TAIL: f64 = 1.0 / 1_099_511_627_776.0;

/// `M_p^p(r, f) ≤ p ∫₀^r M_∞^p(t, f) dt/t`.
///
/// The right side is integrated in `s = (t/r)^p`, where it becomes
/// `∫₀¹ M_∞^p(r s^{1/p}) ds/s`, an integrand that tends to `r^p` at `s = 0`
/// for normalized `f`. `n_quad` is the panel count per dyadic interval;
/// convergence is confirmed by doubling it.
pub fn prawitz_check(f: &PointEvaluator, p: f64, r: f64, n_quad: usize) -> Result<PrawitzOutcome> {
    let lhs = integral_means_pow(f, p, r, default_n_theta(r))?;
    let integrand = |s: f64| -> f64 {
        let t = r * s.powf(1.0 / p);
        let m = max_modulus(f, t, default_n_theta(t)).unwrap_or(f64::NAN);
        m.powf(p) / s
    };
    // s^{1/p} is not smooth at 0, so panels are dyadic towards 0; below
    // s = 2^-40 the integrand is r^p to within O(s^{1/p}).
    let n = n_quad.max(1);
    let tail = r.powf(p) * PRAWITZ_TAIL;
    let dyadic = |panels: usize| -> f64 {
        (0..40)
            .map(|k| {
                let b = 0.5f64.powi(k);
                quadrature::composite(0.5 * b, b, panels, integrand)
            })
            .sum::<f64>()
            + tail
    };
    let coarse = dyadic(n);
    let fine = dyadic(2 * n);
    if !fine.is_finite() || (fine - coarse).abs() > 1e-9 * fine.abs() {
        return Err(Error::QuadratureDiverged(format!("Prawitz integral {coarse} vs {fine}")));
    }
    Ok(PrawitzOutcome {
        lhs,
        rhs: fine,
        holds: lhs <= fine * (1.0 + 1e-6),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    const ONE: C64 = C64::new(1.0, 0.0);

    fn pole(a: f64) -> PointEvaluator {
        PointEvaluator::closed_form(move |z| (ONE - z).powf(-a))
    }

    #[test]
    fn simple_means() {
        let c = PointEvaluator::closed_form(|_| C64::new(3.0, -4.0));
        let id = PointEvaluator::closed_form(|z| z);
        for &p in &[0.5, 1.0, 2.0] {
            for &r in &[0.1, 0.7] {
                assert!((integral_means(&c, p, r, 64).unwrap() - 5.0).abs() < 1e-13);
                assert!((integral_means(&id, p, r, 64).unwrap() - r).abs() < 1e-14);
            }
        }
        assert!(integral_means(&id, 1.0, 1.0, 64).is_err());
        assert!(integral_means(&id, 0.0, 0.5, 64).is_err());
        assert!(integral_means(&id, 1.0, 0.5, 63).is_err());
    }

    #[test]
    fn means_match_brute_force_and_closed_form() {
        // ∫|1-re^{iθ}|^{-2} dθ/2π = 1/(1-r²)
        let f = pole(2.0);
        let m = integral_means(&f, 1.0, 0.9, default_n_theta(0.9)).unwrap();
        assert!((m - 1.0 / (1.0 - 0.81)).abs() < 1e-12 * m);
        let brute = integral_means(&f, 1.0, 0.9, 1_000_000).unwrap();
        assert!((m - brute).abs() < 1e-8 * brute);
    }

    #[test]
    fn doubling_nodes_changes_little() {
        for f in [zoo::sector(0.5, 64).unwrap(), zoo::koebe_dilated(1.0, 64).unwrap()] {
            for &r in &[0.5, 0.9, 0.99] {
                let n = default_n_theta(r);
                let a = integral_means(f.f(), 1.0, r, n).unwrap();
                let b = integral_means(f.f(), 1.0, r, 2 * n).unwrap();
                assert!((a - b).abs() < 1e-6 * b);
            }
        }
    }

    #[test]
    fn max_modulus_examples() {
        let k = zoo::koebe_dilated(1.0, 16).unwrap();
        let s = zoo::sector(0.5, 16).unwrap();
        for &r in &[0.3, 0.9, 0.999] {
            let m = max_modulus(k.f(), r, default_n_theta(r)).unwrap();
            assert!((m - r / (1.0 - r).powi(2)).abs() < 1e-12 * m);
            let m = max_modulus(s.f(), r, 2048).unwrap();
            assert!((m - s.f().eval(C64::new(r, 0.0)).re).abs() < 1e-12 * m);
        }
        let id = PointEvaluator::closed_form(|z| z);
        assert!((max_modulus(&id, 0.4, 100).unwrap() - 0.4).abs() < 1e-15);
        // a maximum between nodes is recovered by the polish step
        let off = PointEvaluator::closed_form(|z| (ONE - z * C64::from_polar(1.0, -0.0123)).inv());
        let m = max_modulus(&off, 0.5, 64).unwrap();
        assert!((m - 2.0).abs() < 1e-4);
    }

    #[test]
    fn blowup_of_pure_poles() {
        let radii = default_ladder();
        let est = blowup_exponent(&pole(2.0), 1.0, &radii).unwrap();
        assert!((est.gamma - 1.0).abs() < 0.05, "{est:?}");
        let est = blowup_exponent(&pole(1.0), 0.5, &radii).unwrap();
        assert!(est.gamma < 0.02 && est.gamma_signed < 0.0, "{est:?}");
        let est = blowup_exponent(&PointEvaluator::closed_form(|z| z + 1.0), 1.0, &radii).unwrap();
        assert_eq!(est.gamma, 0.0);
        for &a in &[1.0, 2.0, 3.0] {
            for &pa in &[1.25, 1.7, 2.5] {
                let p = pa / a;
                {
                    let est = blowup_exponent(&pole(a), p, &radii).unwrap();
                    let expected = p * a - 1.0;
                    assert!((est.gamma - expected).abs() < 0.05 * expected, "a={a} p={p} {est:?}");
                }
            }
        }
    }

    #[test]
    fn critical_exponents_of_derivatives() {
        let radii = default_ladder();
        for &a in &[0.0, 0.5, 1.0] {
            let s = zoo::sector(a, 16).unwrap();
            let est = hardy_critical_exponent(s.df(), (0.2, 1.5), &radii, 0.0).unwrap();
            let expected = 1.0 / (1.0 + a);
            assert!((est.p_star.unwrap() - expected).abs() < 0.05 * expected, "{a} {est:?}");
        }
        let k = zoo::koebe_dilated(1.0, 16).unwrap();
        let est = hardy_critical_exponent(k.df(), (0.1, 1.0), &radii, 0.0).unwrap();
        assert!((est.p_star.unwrap() - 1.0 / 3.0).abs() < 0.05 / 3.0);
        assert!(matches!(
            hardy_critical_exponent(k.df(), (0.5, 1.0), &radii, 0.0),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn smoothness_rates() {
        let radii = default_ladder();
        for &a in &[0.0, 0.5] {
            let s = zoo::sector(a, 16).unwrap();
            let t = hl_smoothness_rate(s.df(), 1.0, &radii).unwrap();
            assert!((t - (1.0 - a)).abs() < 0.05, "{a} {t}");
        }
        let s0 = zoo::sector(0.0, 16).unwrap();
        let t = hl_smoothness_rate(s0.df(), 2.0, &radii).unwrap();
        assert!((t - 0.5).abs() < 0.05, "{t}");
        let poly = PointEvaluator::closed_form(|z| ONE + z * 2.0);
        assert!((hl_smoothness_rate(&poly, 1.0, &radii).unwrap() - 1.0).abs() < 1e-12);
        assert!(hl_smoothness_rate(&poly, 0.5, &radii).is_err());
    }

    #[test]
    fn prawitz_cases() {
        let id = PointEvaluator::closed_form(|z| z);
        let out = prawitz_check(&id, 0.7, 0.8, 4).unwrap();
        assert!((out.lhs - 0.8f64.powf(0.7)).abs() < 1e-12);
        assert!((out.rhs - out.lhs).abs() < 1e-12 && out.holds);
        let k = zoo::koebe_dilated(1.0, 16).unwrap();
        assert!(prawitz_check(k.f(), 0.4, 0.9, 2).unwrap().holds);
        let s = zoo::sector(0.5, 16).unwrap();
        assert!(prawitz_check(s.f(), 0.6, 0.95, 2).unwrap().holds);
    }

    #[test]
    fn profile_is_monotone_and_serializes() {
        let s = zoo::sector(0.5, 16).unwrap();
        let prof = MeansProfile::compute(s.f(), 1.0, &[0.5, 0.9, 0.99]).unwrap();
        assert!(prof.is_monotone(1e-9));
        let csv = prof.to_csv();
        assert!(csv.starts_with("p,r,n_theta,M_p\n1.0000000000000000e0,5.0000000000000000e-1,2048,"));
        let back: MeansProfile = serde_json::from_str(&serde_json::to_string(&prof).unwrap()).unwrap();
        assert_eq!(back, prof);
    }

    #[test]
    fn series_evaluators_refuse_the_boundary() {
        let s = zoo::polylog(1.0, 64).unwrap();
        assert!(matches!(
            integral_means(s.f(), 1.0, 0.9, 2048),
            Err(Error::OutsideTrustRadius { .. })
        ));
    }
}
