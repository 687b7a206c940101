//! Coefficient bounds on random convex maps: the uniform bound, the
//! Lebedev–Milin chain and the Marx–Strohhäcker bound.

use hardylab::verify::{check_coeff_bound, random_measure};
use hardylab::zoo;

fn main() -> hardylab::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut worst = [f64::INFINITY; 3];
    for i in 0..20 {
        let mu = random_measure(seed, i);
        let f = zoo::convex_from_measure(&mu, 256)?;
        let checks = check_coeff_bound(&f, 256)?;
        for (w, c) in worst.iter_mut().zip(&checks) {
            *w = w.min(c.margin);
        }
        println!("map {i:>2}: |a2| = {:.4}, atoms = {}", f.a2().norm(), mu.atoms().len());
    }
    println!("smallest margins: uniform {:.3e}, Re(zf'/f) - 1/2 {:.3e}, chain {:.3e}", worst[0], worst[1], worst[2]);
    Ok(())
}
