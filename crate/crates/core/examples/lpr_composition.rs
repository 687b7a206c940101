//! The lacunary map Φ, and compositions k_r ∘ g whose second coefficient
//! 2r + ε/4 sweeps (0, 2).

use hardylab::zoo::{self, LacunarySequence};

fn main() -> hardylab::Result<()> {
    let seq = LacunarySequence::default_up_to(256);
    let phi = zoo::lpr_phi(&seq, 256)?;
    println!("Phi: a2 = {}, exponents {:?}", phi.a2().re, seq.truncated(256));

    for r in [0.001, 0.1, 0.5, 0.9, 0.999] {
        let bound = zoo::omega_bound(r)?;
        let f = zoo::lpr_composition(r, bound, &seq, 32)?;
        println!("r = {r:<6} eps0 = {:.6}  a2 = {:.6}  (2r + eps/4 = {:.6})", zoo::eps0_solve(r)?, f.a2().re, 2.0 * r + bound / 4.0);
    }
    if let Err(e) = zoo::lpr_composition(0.9, 0.2, &seq, 32) {
        println!("outside the admissible set: {e}");
    }
    Ok(())
}
