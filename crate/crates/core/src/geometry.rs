//! Pre-Schwarzian geometry: `A_f`, Koebe transforms, the lower order and
//! the angle at infinity.
//!
//! Boundary points are given by their parameter `t₀`, the point being
//! `e^{it₀}`. For a map generated by a Herglotz measure, an atom at `λ`
//! corresponds to the boundary point `conj(λ)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::means::csv_float;
use crate::series::{EvaluatorKind, HolomorphicMap, PointEvaluator, TaylorSeries, C64};

const ONE: C64 = C64::new(1.0, 0.0);

/// `A_f(ζ) = ½(1-|ζ|²) f''(ζ)/f'(ζ) - conj(ζ)`.
pub fn pre_schwarzian_a(map: &HolomorphicMap, zeta: C64) -> Result<C64> {
    let q = map.log_derivative_of_df(zeta)?;
    let a = q * (0.5 * (1.0 - zeta.norm_sqr())) - zeta.conj();
    if a.re.is_finite() && a.im.is_finite() {
        Ok(a)
    } else {
        Err(Error::DerivativeVanishes(format!("{zeta}")))
    }
}

/// `A_f(ζ)` read from a Taylor series.
pub fn pre_schwarzian_a_series(f: &TaylorSeries, zeta: C64) -> Result<C64> {
    let [_, d1, d2] = f.eval_jet(zeta);
    if d1.norm() == 0.0 {
        return Err(Error::DerivativeVanishes(format!("{zeta}")));
    }
    Ok(d2 / d1 * (0.5 * (1.0 - zeta.norm_sqr())) - zeta.conj())
}

/// `F_ζ(z) = (f((ζ+z)/(1+conj(ζ)z)) - f(ζ)) / ((1-|ζ|²) f'(ζ))`, so that
/// `F_ζ = z + A_f(ζ) z² + ...`.
pub fn koebe_transform(f: &TaylorSeries, zeta: C64, order: usize) -> Result<TaylorSeries> {
    let s = 1.0 - zeta.norm_sqr();
    if !(s > 0.0) {
        return Err(Error::ParamOutOfRange {
            name: "|zeta|",
            value: zeta.norm(),
            range: "[0, 1)",
        });
    }
    let n = order.min(f.order());
    let g = f.recenter(zeta)?.truncate(n);
    let d1 = g.coeff(1);
    if d1.norm() == 0.0 {
        return Err(Error::DerivativeVanishes(format!("{zeta}")));
    }
    // (ζ+z)/(1+conj(ζ)z) - ζ = s z / (1 + conj(ζ) z)
    let w = TaylorSeries::geometric(-zeta.conj(), n).shift_up().truncate(n).scale(C64::new(s, 0.0))?;
    let h = g.compose(&w)?;
    let norm = d1 * s;
    let mut c: Vec<C64> = h.coeffs().iter().map(|&c| c / norm).collect();
    c[0] = C64::new(0.0, 0.0);
    TaylorSeries::new(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerOrderMethod {
    Grid,
    GridPlusLocalDescent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerOrderEstimate {
    /// Smallest `|A_f|` found; an upper bound for the lower order.
    pub beta: f64,
    pub argmin_point: C64,
    pub samples: usize,
    pub method: LowerOrderMethod,
}

/// Upper bound for `β = inf |A_f|`: a hyperbolically uniform grid
/// `ρ = tanh(k/8)`, `k = 0..=grid_density`, with `⌈8/(1-ρ)⌉` angles per
/// circle, followed by `descent_steps` adaptive coordinate-descent steps
/// from the best five grid points.
pub fn lower_order(map: &HolomorphicMap, grid_density: usize, descent_steps: usize) -> LowerOrderEstimate {
    let rho_max = match map.kind() {
        EvaluatorKind::ClosedForm => 1.0 - 1e-12,
        EvaluatorKind::HornerSeries => map.df.trust_radius(),
    };
    let mut points = vec![C64::new(0.0, 0.0)];
    for k in 1..=grid_density {
        let rho = (k as f64 / 8.0).tanh();
        if rho >= rho_max {
            break;
        }
        let m = ((8.0 / (1.0 - rho)).ceil() as usize).clamp(8, 1 << 16);
        points.extend((0..m).map(|j| C64::from_polar(rho, 2.0 * PI * j as f64 / m as f64)));
    }
    let values: Vec<f64> = points
        .par_iter()
        .map(|&z| pre_schwarzian_a(map, z).map(|a| a.norm()).unwrap_or(f64::INFINITY))
        .collect();
    let samples = points.len();
    let mut order: Vec<usize> = (0..samples).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut best = (values[order[0]], points[order[0]]);
    if descent_steps == 0 {
        return LowerOrderEstimate {
            beta: best.0,
            argmin_point: best.1,
            samples,
            method: LowerOrderMethod::Grid,
        };
    }
    let eval = |z: C64| -> f64 {
        if z.norm() >= rho_max {
            return f64::INFINITY;
        }
        pre_schwarzian_a(map, z).map(|a| a.norm()).unwrap_or(f64::INFINITY)
    };
    let starts: Vec<(f64, C64)> = order.iter().take(5).map(|&i| (values[i], points[i])).collect();
    let refined: Vec<(f64, C64)> = starts
        .par_iter()
        .map(|&(v0, z0)| {
            let (mut v, mut z) = (v0, z0);
            let mut h = 0.1 * (1.0 - z.norm()).max(1e-3);
            for _ in 0..descent_steps {
                let mut moved = false;
                for dir in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
                    let cand = z + dir * h;
                    let vc = eval(cand);
                    if vc < v {
                        v = vc;
                        z = cand;
                        moved = true;
                        break;
                    }
                }
                if moved {
                    h *= 1.5;
                } else {
                    h *= 0.5;
                }
                if h < 1e-15 {
                    break;
                }
            }
            (v, z)
        })
        .collect();
    for r in refined {
        if r.0 < best.0 {
            best = r;
        }
    }
    LowerOrderEstimate {
        beta: best.0,
        argmin_point: best.1,
        samples,
        method: LowerOrderMethod::GridPlusLocalDescent,
    }
}

/// Polynomial extrapolation to `h = 0` through the points `(h_i, v_i)` (Neville).
pub fn extrapolate_to_zero(hs: &[f64], vs: &[f64]) -> f64 {
    let mut p = vs.to_vec();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let (hi, hj) = (hs[i], hs[i + level]);
            p[i] = (hj * p[i] - hi * p[i + 1]) / (hj - hi);
        }
    }
    p[0]
}

/// `lim_{x→1⁻} Re(z₀ A_f(x z₀))` for the boundary point `z₀ = e^{it₀}`,
/// extrapolated from the top four radii. For a measure-generated convex map
/// this is `2μ(conj z₀) - 1 = Θ/π`.
pub fn radial_a_limit(map: &HolomorphicMap, t0: f64, radii: &[f64]) -> Result<f64> {
    if radii.len() < 2 {
        return Err(Error::BadConfig("need at least two radii".into()));
    }
    let z0 = C64::from_polar(1.0, t0);
    let top = &radii[radii.len().saturating_sub(4)..];
    let values = top
        .iter()
        .map(|&x| pre_schwarzian_a(map, z0 * x).map(|a| (z0 * a).re))
        .collect::<Result<Vec<_>>>()?;
    let hs: Vec<f64> = top.iter().map(|&x| 1.0 - x).collect();
    Ok(extrapolate_to_zero(&hs, &values))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfTangentEstimate {
    pub theta_plus: f64,
    pub theta_minus: f64,
    /// `theta_plus - theta_minus`, the opening at infinity.
    pub delta: f64,
    pub t0: f64,
    /// `(δ, tangent argument on the + side, on the - side)` per level.
    pub trace: Vec<(f64, f64, f64)>,
}

impl HalfTangentEstimate {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("delta,arg_tangent_plus,arg_tangent_minus\n");
        for (d, a, b) in &self.trace {
            let _ = writeln!(out, "{},{},{}", csv_float(*d), csv_float(*a), csv_float(*b));
        }
        out
    }
}

fn wrap_pi(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// Default levels `k` of the approach `δ = 2^{-k}`.
pub fn default_half_tangent_levels() -> Vec<i32> {
    (6..=16).collect()
}

/// Directions `ϑ±` in which the two boundary arcs next to `e^{it₀}` run
/// off to infinity.
///
/// The boundary tangent `arg(i z f'(z))` is sampled on the paths
/// `z = (1-δ²) e^{i(t₀ ± δ)}`, which hug the circle closer than they approach
/// the pole, and extrapolated to `δ = 0`. Leaving the pole on the `+` side the
/// tangent points inward (`ϑ₊ + π`); approaching it on the `-` side it points
/// outward (`ϑ₋`). The opening `ϑ₊ - ϑ₋` is taken in `(-π/2, 3π/2]`.
pub fn half_tangents(df: &PointEvaluator, t0: f64, levels: &[i32]) -> Result<HalfTangentEstimate> {
    if levels.len() < 2 {
        return Err(Error::BadConfig("need at least two approach levels".into()));
    }
    let tangent = |delta: f64, side: f64| -> Result<f64> {
        let z = C64::from_polar(1.0 - delta * delta, t0 + side * delta);
        let v = C64::new(0.0, 1.0) * z * df.try_eval(z)?;
        if v.norm() == 0.0 {
            return Err(Error::DerivativeVanishes(format!("{z}")));
        }
        Ok(v.arg())
    };
    let mut hs = Vec::with_capacity(levels.len());
    let mut plus: Vec<f64> = Vec::with_capacity(levels.len());
    let mut minus: Vec<f64> = Vec::with_capacity(levels.len());
    for &k in levels {
        let delta = 2f64.powi(-k);
        hs.push(delta);
        for (side, track) in [(1.0, &mut plus), (-1.0, &mut minus)] {
            let raw = tangent(delta, side)?;
            let value = match track.last() {
                None => raw,
                Some(&prev) => {
                    let v = prev + wrap_pi(raw - prev);
                    let jump = (v - prev).abs();
                    if jump > PI / 2.0 {
                        return Err(Error::ArgUnwrapFailure { jump });
                    }
                    v
                }
            };
            track.push(value);
        }
    }
    let trace = hs
        .iter()
        .zip(plus.iter().zip(&minus))
        .map(|(&h, (&a, &b))| (h, a, b))
        .collect();
    // the paths are smooth in δ; extrapolate from the finest few levels
    let tail = hs.len().saturating_sub(3);
    let tp = extrapolate_to_zero(&hs[tail..], &plus[tail..]);
    let tm = extrapolate_to_zero(&hs[tail..], &minus[tail..]);
    let theta_minus = wrap_pi(tm);
    let turning = (tm - tp).rem_euclid(2.0 * PI);
    let turning = if turning >= 1.5 * PI { turning - 2.0 * PI } else { turning };
    let delta = PI - turning;
    Ok(HalfTangentEstimate {
        theta_plus: theta_minus + delta,
        theta_minus,
        delta,
        t0,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContainmentOutcome {
    pub contained: bool,
    /// Apex of the first admissible sector (or of the last one tried).
    pub apex: C64,
    /// Direction of the sector axis.
    pub axis: f64,
    /// Largest angular excess over half the aperture at the reported apex.
    pub worst_excess: f64,
    pub samples: usize,
}

/// Boundary parameters: half uniform on the circle, half clustered
/// geometrically towards `t₀` from both sides (offsets down to `1e-200`).
pub fn boundary_samples(t0: Option<f64>, samples: usize) -> Vec<f64> {
    let samples = samples.max(4);
    let Some(t0) = t0 else {
        return (0..samples).map(|k| -PI + 2.0 * PI * (k as f64 + 0.5) / samples as f64).collect();
    };
    let uniform = samples / 2;
    let graded = (samples - uniform) / 2;
    let mut ts: Vec<f64> = (0..uniform)
        .map(|k| t0 - PI + 2.0 * PI * (k as f64 + 0.5) / uniform as f64)
        .collect();
    let (lo, hi) = (-200.0f64, -2.0f64);
    for k in 0..graded {
        let e = lo + (hi - lo) * k as f64 / (graded.max(2) - 1) as f64;
        let d = 10f64.powf(e);
        ts.push(t0 + d);
        ts.push(t0 - d);
    }
    ts
}

/// Searches an apex on the ray opposite the axis so that every boundary
/// sample lies in the sector `|arg(w - x₀) - axis| ≤ aperture/2`.
///
/// With a pole at `e^{it₀}` the axis bisects the half tangents there; for
/// bounded maps the axis is arbitrary (0) and a distant apex always works.
/// Closed-form maps are sampled on the unit circle, series maps on their
/// trust radius.
pub fn sector_containment(
    map: &HolomorphicMap,
    aperture: f64,
    samples: usize,
    t0: Option<f64>,
) -> Result<ContainmentOutcome> {
    if !(aperture > 0.0 && aperture <= PI) {
        return Err(Error::ParamOutOfRange {
            name: "aperture",
            value: aperture,
            range: "(0, pi]",
        });
    }
    let radius = match map.kind() {
        EvaluatorKind::ClosedForm => 1.0,
        EvaluatorKind::HornerSeries => map.f.trust_radius(),
    };
    let axis = match t0 {
        None => 0.0,
        Some(t) => match half_tangents(&map.df, t, &default_half_tangent_levels()) {
            Ok(h) => wrap_pi(0.5 * (h.theta_plus + h.theta_minus)),
            Err(_) => map.f.eval(C64::from_polar(1.0 - 1e-9, t)).arg(),
        },
    };
    let ts = boundary_samples(t0, samples);
    let values: Vec<C64> = ts
        .par_iter()
        .map(|&t| map.f.eval(C64::from_polar(radius, t)))
        .filter(|w| w.re.is_finite() && w.im.is_finite())
        .collect();
    let mut bulk: Vec<f64> = values.iter().map(|w| w.norm()).collect();
    bulk.sort_by(f64::total_cmp);
    let scale = bulk.get(bulk.len() / 2).copied().unwrap_or(1.0).max(1e-300);
    let dir = C64::from_polar(1.0, axis);
    let half = 0.5 * aperture;
    let excess_at = |apex: C64| -> f64 {
        values
            .iter()
            .map(|&w| {
                let d = w - apex;
                if d.norm() == 0.0 {
                    0.0
                } else {
                    wrap_pi(d.arg() - axis).abs() - half
                }
            })
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut distances = vec![0.0];
    let steps = 64;
    distances.extend((0..=steps).map(|k| scale * 10f64.powf(-3.0 + 9.0 * k as f64 / steps as f64)));
    let mut last = (C64::new(0.0, 0.0), f64::INFINITY);
    for d in distances {
        let apex = -dir * d;
        let excess = excess_at(apex);
        if excess <= 1e-12 {
            return Ok(ContainmentOutcome {
                contained: true,
                apex,
                axis,
                worst_excess: excess,
                samples: values.len(),
            });
        }
        last = (apex, excess);
    }
    Ok(ContainmentOutcome {
        contained: false,
        apex: last.0,
        axis,
        worst_excess: last.1,
        samples: values.len(),
    })
}

/// `|A_f(ζ)|` for the sector map, `α² + 4(1-α²) y²/|1-z²|²` under the root.
pub fn sector_a_modulus(alpha: f64, z: C64) -> f64 {
    (alpha * alpha + 4.0 * (1.0 - alpha * alpha) * z.im * z.im / (ONE - z * z).norm_sqr()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herglotz::{Atom, DiscreteMeasure};
    use crate::zoo;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn a_at_origin_is_a2() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mu = DiscreteMeasure::random(&mut rng, 4);
        for f in [zoo::sector(0.3, 32).unwrap(), zoo::convex_from_measure(&mu, 32).unwrap()] {
            let a = pre_schwarzian_a(&f.map, C64::new(0.0, 0.0)).unwrap();
            assert!((a - f.a2()).norm() < 1e-15);
            assert_eq!(pre_schwarzian_a_series(&f.series, C64::new(0.0, 0.0)).unwrap(), f.a2());
        }
    }

    #[test]
    fn sector_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for &alpha in &[0.0, 0.4, 1.0] {
            let s = zoo::sector(alpha, 16).unwrap();
            for _ in 0..50 {
                let z = C64::from_polar(rng.gen_range(0.0..0.99), rng.gen_range(-PI..PI));
                let a = pre_schwarzian_a(&s.map, z).unwrap().norm();
                assert!((a - sector_a_modulus(alpha, z)).abs() < 1e-12 * a.max(1.0));
            }
            if alpha == 1.0 {
                for &x in &[-0.9, 0.0, 0.5, 0.999] {
                    let a = pre_schwarzian_a(&s.map, C64::new(x, 0.0)).unwrap();
                    assert!((a.norm() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn koebe_transform_second_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mu = DiscreteMeasure::random(&mut rng, 3);
        let funcs = vec![
            zoo::sector(0.5, 128).unwrap(),
            zoo::convex_from_measure(&mu, 128).unwrap(),
            zoo::koebe_dilated(1.0, 128).unwrap(),
            zoo::r_example(128).unwrap(),
            zoo::ctc_extremal(0.4, 128).unwrap(),
            zoo::lpr_phi(&zoo::LacunarySequence::default_up_to(128), 128).unwrap(),
        ];
        for f in &funcs {
            for _ in 0..50 {
                let z = C64::from_polar(rng.gen_range(0.0..0.45), rng.gen_range(-PI..PI));
                let t = koebe_transform(&f.series, z, 32).unwrap();
                assert!(t.coeff(0).norm() < 1e-12 && (t.coeff(1) - ONE).norm() < 1e-10, "{f:?}");
                let a = pre_schwarzian_a(&f.map, z).unwrap();
                assert!((t.coeff(2) - a).norm() < 1e-10, "{f:?} at {z}");
            }
        }
        let s = zoo::sector(0.2, 64).unwrap();
        assert!(koebe_transform(&s.series, C64::new(0.0, 0.0), 64).unwrap().max_abs_diff(&s.series) < 1e-15);
        // transforms of the half-plane map are again half-plane maps
        let h = zoo::half_plane(128).unwrap();
        let t = koebe_transform(&h.series, C64::new(0.5, 0.0), 24).unwrap();
        assert!((t.coeff(2).norm() - 1.0).abs() < 1e-10);
        let lam = t.coeff(2);
        for n in 1..=24 {
            assert!((t.coeff(n) - lam.powu(n as u32 - 1)).norm() < 1e-9);
        }
    }

    #[test]
    fn lower_order_of_sectors() {
        for &alpha in &[0.0, 0.25, 0.5, 1.0] {
            let s = zoo::sector(alpha, 16).unwrap();
            let est = lower_order(&s.map, 24, 200);
            assert!((est.beta - alpha).abs() < 1e-6, "{alpha} {est:?}");
            assert!(est.beta <= alpha + 1e-9);
            assert!(est.argmin_point.im.abs() < 1e-6 || alpha == 1.0);
        }
        let mu = DiscreteMeasure::new(vec![
            Atom::new(0.0, 1.0 / 3.0),
            Atom::new(2.0 / 3.0, 1.0 / 3.0),
            Atom::new(-2.0 / 3.0, 1.0 / 3.0),
        ])
        .unwrap();
        let f = zoo::convex_from_measure(&mu, 16).unwrap();
        let est = lower_order(&f.map, 32, 200);
        assert!(est.beta < 0.02, "{est:?}");
    }

    #[test]
    fn radial_limits() {
        let radii = crate::means::default_ladder();
        for &alpha in &[0.0, 0.5, 1.0] {
            let s = zoo::sector(alpha, 16).unwrap();
            assert!((radial_a_limit(&s.map, 0.0, &radii).unwrap() - alpha).abs() < 1e-12);
        }
        let f = zoo::convex_from_measure(&DiscreteMeasure::two_point(0.75).unwrap(), 16).unwrap();
        assert!((radial_a_limit(&f.map, 0.0, &radii).unwrap() - 0.5).abs() < 1e-6);
        // an atom at λ = i is felt at the boundary point -i
        let mu = DiscreteMeasure::new(vec![Atom::new(0.5, 0.7), Atom::new(-0.2, 0.3)]).unwrap();
        let f = zoo::convex_from_measure(&mu, 16).unwrap();
        assert!((radial_a_limit(&f.map, -PI / 2.0, &radii).unwrap() - 0.4).abs() < 1e-6);
    }

    #[test]
    fn half_tangent_openings() {
        let levels = default_half_tangent_levels();
        for &alpha in &[0.0, 0.25, 0.5, 1.0] {
            let s = zoo::sector(alpha, 16).unwrap();
            let h = half_tangents(s.df(), 0.0, &levels).unwrap();
            assert!((h.delta - alpha * PI).abs() < 0.02, "{alpha} {h:?}");
            assert!((h.theta_plus - 0.5 * alpha * PI).abs() < 0.02, "{alpha} {h:?}");
        }
        let mu = DiscreteMeasure::new(vec![Atom::new(0.5, 0.625), Atom::new(-0.2, 0.2), Atom::new(0.9, 0.175)]).unwrap();
        let f = zoo::convex_from_measure(&mu, 16).unwrap();
        let h = half_tangents(f.df(), -PI / 2.0, &levels).unwrap();
        assert!((h.delta - 0.25 * PI).abs() < 0.02, "{h:?}");
        assert!(h.trace_csv().lines().count() == levels.len() + 1);
    }

    #[test]
    fn containment_of_sectors() {
        for &alpha in &[0.25, 0.5, 0.75] {
            let s = zoo::sector(alpha, 16).unwrap();
            let wide = sector_containment(&s.map, alpha * PI + 0.05, 10_000, Some(0.0)).unwrap();
            assert!(wide.contained, "{alpha} {wide:?}");
            let narrow = sector_containment(&s.map, alpha * PI - 0.05, 10_000, Some(0.0)).unwrap();
            assert!(!narrow.contained, "{alpha} {narrow:?}");
        }
        let mu = DiscreteMeasure::new(vec![
            Atom::new(0.0, 0.4),
            Atom::new(2.0 / 3.0, 0.3),
            Atom::new(-2.0 / 3.0, 0.3),
        ])
        .unwrap();
        let bounded = zoo::convex_from_measure(&mu, 16).unwrap();
        let out = sector_containment(&bounded.map, 0.1, 2000, None).unwrap();
        assert!(out.contained, "{out:?}");
        assert!(sector_containment(&bounded.map, 4.0, 10, None).is_err());
    }

    #[test]
    fn extrapolation_is_exact_on_polynomials() {
        let hs = [0.4, 0.2, 0.1];
        let vs: Vec<f64> = hs.iter().map(|h| 3.0 - 2.0 * h + 5.0 * h * h).collect();
        assert!((extrapolate_to_zero(&hs, &vs) - 3.0).abs() < 1e-13);
    }
}
