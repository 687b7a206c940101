//! Growth and distortion sandwich on random convex maps, and Prawitz's
//! bound of integral means by maximum modulus.

use hardylab::verify::{check_gronwall, random_measure};
use hardylab::{means, zoo};

fn main() -> hardylab::Result<()> {
    let mut growth = f64::INFINITY;
    let mut distortion = f64::INFINITY;
    for i in 0..10 {
        let f = zoo::convex_from_measure(&random_measure(7, i), 64)?;
        let [g, d] = check_gronwall(&f);
        growth = growth.min(g.margin);
        distortion = distortion.min(d.margin);
    }
    println!("10 maps: smallest growth margin {growth:.3e}, distortion margin {distortion:.3e}");

    let k = zoo::koebe_dilated(1.0, 16)?;
    for p in [0.3, 0.45] {
        for r in [0.5, 0.9] {
            let out = means::prawitz_check(k.f(), p, r, 2)?;
            println!("koebe p={p} r={r}: M_p^p = {:.6} <= {:.6} ({})", out.lhs, out.rhs, out.holds);
        }
    }
    Ok(())
}
