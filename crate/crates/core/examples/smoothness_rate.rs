//! Fitted smoothness rate 1 - γ/p of s_α' at p = 1, with the means profile.

use hardylab::{means, zoo};

fn main() -> hardylab::Result<()> {
    for alpha in [0.0, 0.25, 0.5, 0.75] {
        let s = zoo::sector(alpha, 16)?;
        let t = means::hl_smoothness_rate(s.df(), 1.0, &means::default_ladder())?;
        println!("alpha {alpha}: t = {t:.4} (1 - alpha = {:.4})", 1.0 - alpha);
    }
    let est = means::blowup_exponent(zoo::sector(0.5, 16)?.df(), 1.0, &means::default_ladder())?;
    print!("{}", est.to_csv());
    Ok(())
}
