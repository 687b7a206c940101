//! Coefficients of the sector maps s_α and the extremal a₃ relation.

use hardylab::zoo;

fn main() -> hardylab::Result<()> {
    println!("{:>6} {:>14} {:>14} {:>14}", "alpha", "a2", "a3", "(1+2a^2)/3");
    for alpha in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let s = zoo::sector(alpha, 64)?;
        println!(
            "{alpha:>6} {:>14.10} {:>14.10} {:>14.10}",
            s.series.coeff(2).re,
            s.series.coeff(3).re,
            (1.0 + 2.0 * alpha * alpha) / 3.0
        );
    }
    let s = zoo::sector(0.5, 2000)?;
    for n in [10, 100, 1000, 2000] {
        println!("n = {n:>4}: sqrt(n) a_n = {:.6}", (n as f64).sqrt() * s.series.coeff(n).re);
    }
    Ok(())
}
