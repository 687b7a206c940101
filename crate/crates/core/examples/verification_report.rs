//! Runs a verification suite and prints the summary table.
//!
//! ```bash
//! cargo run --release --example verification_report -- convex 7
//! cargo run --release --example verification_report -- all
//! ```

use std::time::Instant;

use hardylab::verify::{run_suite, summary_table, Suite, SuiteConfig};

fn main() -> hardylab::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("convex").parse()?;
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    let cfg = SuiteConfig { seed, ..Default::default() };

    let start = Instant::now();
    let results = run_suite(suite, &cfg)?;
    print!("{}", summary_table(&results));
    println!("elapsed {:.1}s", start.elapsed().as_secs_f64());
    Ok(())
}
