//! Gauss–Legendre panels and graded path integrals for closed-form derivatives.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::series::C64;

const NODES: usize = 20;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NODES)
            .expect("degree >= 2")
            .as_node_weight_pairs()
            .to_vec()
    })
}

/// Single Gauss–Legendre panel for a real integrand on `[a, b]`.
pub fn panel(a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    rule()
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

/// Composite rule with `panels` equal panels.
pub fn composite(a: f64, b: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| panel(a + k as f64 * h, a + (k + 1) as f64 * h, &mut f))
        .sum()
}

/// Splits `[a, b]` (with `b <= 1`) into panels whose length never exceeds
/// their distance to the unit circle, so singularities on `|w| = 1` stay
/// outside the Bernstein ellipse of every panel. When `b = 1` the grading
/// stops at panels of length `1e-15`; the integrand must then be integrable.
fn graded_panels(mut a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    while b - a > (1.0 - b).max(1e-15) {
        let mid = a + 0.5 * (b - a);
        out.push((a, mid));
        a = mid;
    }
    // nodes of a sliver ending on the circle can round onto the singularity
    if b < 1.0 || b - a > 1e-15 {
        out.push((a, b));
    }
    out
}

/// `∫ df` along the radial segment `t e^{iθ}`, `t ∈ [a, b]`.
fn ray_segment(df: &dyn Fn(C64) -> C64, dir: C64, a: f64, b: f64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (lo, hi) in graded_panels(a, b) {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let s: C64 = rule()
            .iter()
            .map(|&(x, w)| df(dir * (mid + half * x)) * w)
            .sum();
        acc += s * half;
    }
    acc * dir
}

/// `f(z) = ∫_0^z df(w) dw` along the straight segment from the origin.
pub fn integrate_ray(df: &dyn Fn(C64) -> C64, z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        return C64::new(0.0, 0.0);
    }
    ray_segment(df, z / r, 0.0, r)
}

/// Values of `∫_0^{r e^{iθ}} df` at every radius in `radii` (increasing).
pub fn integrate_ray_cumulative(df: &dyn Fn(C64) -> C64, theta: f64, radii: &[f64]) -> Vec<C64> {
    let dir = C64::from_polar(1.0, theta);
    let mut acc = C64::new(0.0, 0.0);
    let mut last = 0.0;
    radii
        .iter()
        .map(|&r| {
            acc += ray_segment(df, dir, last, r);
            last = r;
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panel_integrates_polynomials() {
        let v = panel(0.0, 2.0, |x| x.powi(7));
        assert!((v - 2f64.powi(8) / 8.0).abs() < 1e-12);
    }

    #[test]
    fn ray_integral_of_singular_derivative() {
        // ∫_0^z dw/(1-w)^2 = z/(1-z)
        let df = |w: C64| (C64::new(1.0, 0.0) - w).powi(-2);
        for &(r, t) in &[(0.5, 0.3), (0.999, 0.0), (0.999999, 0.001), (0.9, 2.0)] {
            let z = C64::from_polar(r, t);
            let exact = z / (C64::new(1.0, 0.0) - z);
            let got = integrate_ray(&df, z);
            assert!((got - exact).norm() <= 1e-12 * exact.norm().max(1.0), "{r} {t}");
        }
    }

    #[test]
    fn ray_reaches_the_circle_for_integrable_singularities() {
        // ∫_0^1 (1-w)^{-1/2} dw = 2
        let df = |w: C64| (C64::new(1.0, 0.0) - w).powf(-0.5);
        let got = integrate_ray(&df, C64::new(1.0, 0.0));
        assert!((got.re - 2.0).abs() < 1e-7, "{got}");
    }

    #[test]
    fn cumulative_matches_pointwise() {
        let df = |w: C64| (C64::new(1.0, 0.0) - w * w).inv();
        let radii = [0.1, 0.5, 0.9, 0.99, 0.9999];
        let cum = integrate_ray_cumulative(&df, 0.4, &radii);
        for (r, v) in radii.iter().zip(cum) {
            let z = C64::from_polar(*r, 0.4);
            let exact = 0.5 * ((C64::new(1.0, 0.0) + z) / (C64::new(1.0, 0.0) - z)).ln();
            assert!((v - exact).norm() < 1e-12);
        }
    }
}
