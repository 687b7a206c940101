//! Whether s_α(D) fits in a sector of a given aperture.

use std::f64::consts::PI;

use hardylab::{geometry, zoo};

fn main() -> hardylab::Result<()> {
    for alpha in [0.25, 0.5, 0.75] {
        let s = zoo::sector(alpha, 16)?;
        for delta in [0.05, -0.05] {
            let out = geometry::sector_containment(&s.map, alpha * PI + delta, 10_000, Some(0.0))?;
            println!(
                "alpha {alpha}, aperture {:+.2} rad from alpha*pi: contained {} (apex {:.3}, worst excess {:.2e})",
                delta, out.contained, out.apex, out.worst_excess
            );
        }
    }
    Ok(())
}
