//! Lower order of sector maps, and three routes to the angle at infinity.

use std::f64::consts::PI;

use hardylab::verify::spread_measure;
use hardylab::{geometry, means, zoo};

fn main() -> hardylab::Result<()> {
    for alpha in [0.0, 0.5, 1.0] {
        let est = geometry::lower_order(&zoo::sector(alpha, 16)?.map, 24, 200);
        println!("sector({alpha}): lower order {:.8} at {:.4}", est.beta, est.argmin_point);
    }
    println!("{:>6} {:>10} {:>10} {:>10}", "mass", "measure", "radial A", "tangents");
    for m in [0.5, 0.625, 0.75, 1.0] {
        let mu = spread_measure(m)?;
        let f = zoo::convex_from_measure(&mu, 32)?;
        let radial = PI * geometry::radial_a_limit(&f.map, 0.0, &means::default_ladder())?;
        let ht = geometry::half_tangents(f.df(), 0.0, &geometry::default_half_tangent_levels())?;
        println!("{m:>6} {:>10.6} {:>10.6} {:>10.6}", mu.angle_at_infinity(0.0)?, radial, ht.delta);
    }
    Ok(())
}
