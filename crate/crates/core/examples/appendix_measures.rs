//! Random search over measures with a half-mass atom and zero first moment;
//! every such measure should be the two antipodal half atoms.

use hardylab::herglotz::{appendix_search, DiscreteMeasure, APPENDIX_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hardylab::Result<()> {
    let samples = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let report = appendix_search(&mut rng, samples, APPENDIX_TOL);
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));

    let strip = DiscreteMeasure::two_point(0.5)?;
    let check = strip.appendix_check(APPENDIX_TOL);
    println!("strip measure: triggered {}, conforms {}", check.triggered, check.conforms);
    Ok(())
}
