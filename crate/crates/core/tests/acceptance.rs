//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Reference values are computed here from closed forms (or statrs for Γ)
//! rather than taken from the checks under test.

use std::f64::consts::PI;
use std::time::Instant;

use hardylab::herglotz::{self, APPENDIX_TOL};
use hardylab::verify::{self, map_rng, random_measure, spread_measure};
use hardylab::zoo::{self, LacunarySequence};
use hardylab::{geometry, means, PointEvaluator, C64};
use statrs::function::gamma::gamma;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn sector_coefficients() -> hardylab::Result<Outcome> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let s = zoo::sector(alpha, 64)?;
        worst = worst
            .max((s.series.coeff(2) - C64::new(alpha, 0.0)).norm())
            .max((s.series.coeff(3) - C64::new((1.0 + 2.0 * alpha * alpha) / 3.0, 0.0)).norm());
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(outcome(worst <= 1e-12 && secs < 1.0, format!("max error {worst:.1e}, {secs:.2}s")))
}

fn hardy_exponents() -> hardylab::Result<Outcome> {
    let cases: Vec<(&str, zoo::Function, f64)> = vec![
        ("sector(0)'", zoo::sector(0.0, 16)?, 1.0),
        ("sector(1/2)'", zoo::sector(0.5, 16)?, 2.0 / 3.0),
        ("sector(1)'", zoo::sector(1.0, 16)?, 0.5),
        ("koebe'", zoo::koebe_dilated(1.0, 16)?, 1.0 / 3.0),
        ("ctc_extremal(1/2)'", zoo::ctc_extremal(0.5, 16)?, 1.0 / 3.0),
        ("starlike_extremal(0)'", zoo::starlike_extremal(0.0, 16)?, 0.5),
        ("starlike_extremal(1)'", zoo::starlike_extremal(1.0, 16)?, 0.4),
        ("starlike_extremal(2)'", zoo::starlike_extremal(2.0, 16)?, 1.0 / 3.0),
        ("r_example'", zoo::r_example(16)?, 0.5),
    ];
    let ladder = means::default_ladder();
    assert!((ladder.last().unwrap() - (1.0 - 2f64.powi(-12))).abs() < 1e-15);
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    for (label, f, predicted) in &cases {
        let start = Instant::now();
        let est = means::hardy_critical_exponent(f.df(), verify::HARDY_BRACKET, &ladder, 0.0)?;
        let secs = start.elapsed().as_secs_f64();
        let p = est.p_star.unwrap_or(f64::NAN);
        let err = (p - predicted).abs() / predicted;
        if !(err <= 0.05 && secs < 30.0) {
            ok = false;
            println!("    {label}: p* {p:.4} vs {predicted:.4}, {secs:.1}s");
        }
        worst = worst.max(err);
        slowest = slowest.max(secs);
    }
    Ok(outcome(ok, format!("{} maps, worst relative error {worst:.3}, slowest {slowest:.1}s", cases.len())))
}

fn coefficient_asymptotics() -> hardylab::Result<Outcome> {
    let n = 2000;
    let s = zoo::sector(0.5, n)?;
    let value = (n as f64).sqrt() * s.series.coeff(n).re;
    let limit = 2f64.powf(-0.5) / gamma(1.5);
    let err = (value - limit).abs() / limit;
    let mut violations = 0;
    for i in 0..100 {
        let f = zoo::convex_from_measure(&random_measure(7, i), 256)?;
        let bound = ((f.a2().norm_sqr() - 1.0) / 2.0).exp();
        violations += (2..=256).filter(|&k| f.series.coeff(k).norm() > bound * (1.0 + 1e-12)).count();
    }
    Ok(outcome(
        err < 0.02 && violations == 0,
        format!("n^(1/2) a_n at n=2000: {value:.6} vs {limit:.6} (rel {err:.1e}); {violations} bound violations over 100 maps"),
    ))
}

fn lower_order_and_angle() -> hardylab::Result<Outcome> {
    let start = Instant::now();
    let mut beta_err = 0.0f64;
    for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let est = geometry::lower_order(&zoo::sector(alpha, 16)?.map, 24, 200);
        beta_err = beta_err.max((est.beta - alpha).abs());
    }
    let mut spread = 0.0f64;
    for m in [0.5, 0.625, 0.75, 1.0] {
        let mu = spread_measure(m)?;
        let f = zoo::convex_from_measure(&mu, 32)?;
        // atom at λ = 1 is the boundary point z = 1
        let by_measure = (2.0 * m - 1.0) * PI;
        let radial = PI * geometry::radial_a_limit(&f.map, 0.0, &means::default_ladder())?;
        let tangent = geometry::half_tangents(f.df(), 0.0, &geometry::default_half_tangent_levels())?.delta;
        spread = spread
            .max((by_measure - radial).abs())
            .max((by_measure - tangent).abs())
            .max((radial - tangent).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    Ok(outcome(
        beta_err <= 1e-6 && spread <= 0.02 && secs < 20.0,
        format!("lower order error {beta_err:.1e}, angle spread {spread:.1e} rad, {secs:.1}s"),
    ))
}

fn containment() -> hardylab::Result<Outcome> {
    let mut ok = true;
    let mut detail = Vec::new();
    for alpha in [0.25, 0.5, 0.75] {
        let s = zoo::sector(alpha, 16)?;
        let wide = geometry::sector_containment(&s.map, alpha * PI + 0.05, 10_000, Some(0.0))?;
        let narrow = geometry::sector_containment(&s.map, alpha * PI - 0.05, 10_000, Some(0.0))?;
        ok &= wide.contained && !narrow.contained && wide.samples == 10_000;
        detail.push(format!("{alpha}: {}/{}", wide.contained, !narrow.contained));
    }
    Ok(outcome(ok, format!("contained/excluded {}", detail.join(", "))))
}

fn gronwall() -> hardylab::Result<Outcome> {
    let (radii, thetas) = verify::canonical_grid();
    let mut violations = 0;
    let mut points = 0;
    for i in 0..100 {
        let f = zoo::convex_from_measure(&random_measure(7, i), 64)?;
        let alpha = f.a2().norm();
        let grid = f.polar_grid(&radii, &thetas);
        for (j, &r) in radii.iter().enumerate() {
            let (upper, dupper) = verify::sector_on_axis(alpha, r);
            let lower = zoo::strip_on_axis(alpha, r);
            let dlower = 1.0 / (1.0 + 2.0 * alpha * r + r * r);
            for (k, &t) in thetas.iter().enumerate() {
                let m = grid[j][k].norm();
                let dm = f.df().eval(C64::from_polar(r, t)).norm();
                points += 1;
                let slack = 1e-9;
                if m > upper * (1.0 + slack) || m < lower * (1.0 - slack) || dm > dupper * (1.0 + slack) || dm < dlower * (1.0 - slack) {
                    violations += 1;
                }
            }
        }
    }
    Ok(outcome(violations == 0, format!("{violations} violations over {points} grid points")))
}

fn prawitz() -> hardylab::Result<Outcome> {
    let identity = PointEvaluator::closed_form(|z| z);
    let koebe = zoo::koebe_dilated(1.0, 16)?;
    let sector = zoo::sector(0.5, 16)?;
    let starlike = zoo::starlike_extremal(1.0, 16)?;
    let maps: [&PointEvaluator; 4] = [&identity, koebe.f(), sector.f(), starlike.f()];
    let mut failures = 0;
    let mut tightest = f64::INFINITY;
    for f in maps {
        for p in [0.3, 0.45] {
            for r in [0.5, 0.9] {
                let out = means::prawitz_check(f, p, r, 2)?;
                if out.lhs > out.rhs * (1.0 + 1e-6) {
                    failures += 1;
                }
                tightest = tightest.min((out.rhs - out.lhs) / out.rhs);
            }
        }
    }
    Ok(outcome(failures == 0, format!("{failures} failures in 16 cases, tightest relative slack {tightest:.1e}")))
}

fn smoothness() -> hardylab::Result<Outcome> {
    let mut worst = 0.0f64;
    for alpha in [0.0, 0.5] {
        let t = means::hl_smoothness_rate(zoo::sector(alpha, 16)?.df(), 1.0, &means::default_ladder())?;
        worst = worst.max((t - (1.0 - alpha)).abs());
    }
    Ok(outcome(worst <= 0.05, format!("max |t - (1-alpha)| = {worst:.3}")))
}

fn construction() -> hardylab::Result<Outcome> {
    let seq = LacunarySequence::default_up_to(64);
    let mut rng = map_rng(11, 0);
    let mut a2_err = 0.0f64;
    for _ in 0..20 {
        let r = 0.01 + 0.98 * rand::Rng::gen::<f64>(&mut rng);
        let eps = verify::omega_sample(&mut rng, r)?;
        assert!(zoo::in_omega(r, eps));
        let f = zoo::lpr_composition(r, eps, &seq, 64)?;
        a2_err = a2_err.max((f.a2() - C64::new(2.0 * r + eps / 4.0, 0.0)).norm());
    }
    let mut residual = 0.0f64;
    for k in 1..100 {
        let r = k as f64 / 100.0;
        let e = zoo::eps0_solve(r)?;
        residual = residual.max((2f64.powf(e) / (1.0 - 3.0 * e) * r - 1.0).abs());
    }
    let (lo, hi) = verify::a2_sweep(&seq)?;
    Ok(outcome(
        a2_err <= 1e-10 && residual <= 1e-12 && lo <= 0.01 && hi >= 1.99,
        format!("a2 error {a2_err:.1e}, eps0 residual {residual:.1e}, sweep [{lo:.4}, {hi:.4}]"),
    ))
}

fn appendix() -> hardylab::Result<Outcome> {
    let mut rng = map_rng(7, 1 << 41);
    let report = herglotz::appendix_search(&mut rng, 100_000, APPENDIX_TOL);
    Ok(outcome(
        report.counterexamples == 0 && report.samples == 100_000,
        format!(
            "{} samples, {} feasible, {} triggered, {} counterexamples",
            report.samples, report.feasible, report.triggered, report.counterexamples
        ),
    ))
}

type Criterion = fn() -> hardylab::Result<Outcome>;

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("sector coefficients", sector_coefficients),
        ("critical Hardy exponents", hardy_exponents),
        ("coefficient asymptotics and uniform bound", coefficient_asymptotics),
        ("lower order and angle at infinity", lower_order_and_angle),
        ("sector containment", containment),
        ("growth and distortion sandwich", gronwall),
        ("Prawitz inequality", prawitz),
        ("smoothness rate", smoothness),
        ("coefficient construction over Omega", construction),
        ("half-mass measure structure", appendix),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        failed += !result.passed as usize;
        println!(
            "criterion {:>2} {}: {} ({}; {:.1}s)",
            i + 1,
            if result.passed { "PASS" } else { "FAIL" },
            name,
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("criterion 11 NOT REPRODUCIBLE: a.e. nonexistence of radial limits and strict Hardy-space non-membership cannot be decided from finite radii; only the blow-up signature of criterion 2 is asserted");
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
