//! Truncated series algebra: products, composition, exp/log and recentering.

use hardylab::{TaylorSeries, C64};

fn main() -> hardylab::Result<()> {
    let n = 12;
    // z/(1-z)² from the geometric series
    let g = TaylorSeries::geometric(C64::new(1.0, 0.0), n);
    let koebe = g.mul(&g)?.shift_up().truncate(n);
    println!("koebe coefficients: {:?}", koebe.coeffs().iter().map(|c| c.re).collect::<Vec<_>>());

    let z = TaylorSeries::identity(n);
    let e = z.exp()?;
    let back = e.log()?;
    println!("log(exp z) - z, max coefficient error: {:.2e}", back.max_abs_diff(&z));

    let sq = TaylorSeries::binomial(C64::new(-1.0, 0.0), -0.5, n);
    let squared = sq.pow(2.0)?;
    println!("((1-z)^(-1/2))^2 vs 1/(1-z): {:.2e}", squared.max_abs_diff(&g));

    let inner = z.scale(C64::new(0.5, 0.0))?;
    let composed = g.compose(&inner)?;
    println!("1/(1-z/2) a_5 = {} (exact {})", composed.coeff(5).re, 0.5f64.powi(5));

    let zeta = C64::new(0.3, 0.1);
    let shifted = koebe.recenter(zeta)?;
    println!("recentered constant term {:.6} vs direct {:.6}", shifted.coeff(0), koebe.eval(zeta));
    println!("trust radius at order {n}: {}", koebe.trust_radius());
    Ok(())
}
