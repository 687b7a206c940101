//! Critical Hardy exponents of the extremal families, estimated from the
//! blow-up of integral means near the circle.
//!
//! ```bash
//! cargo run --release --example hardy_exponents
//! ```

use hardylab::verify::{check_hardy_entry, hardy_table};

fn main() -> hardylab::Result<()> {
    println!("{:<26} {:>10} {:>10} {:>8}", "map", "estimate", "predicted", "ok");
    for entry in hardy_table() {
        let c = check_hardy_entry(&entry)?;
        println!("{:<26} {:>10.4} {:>10.4} {:>8}", entry.label, c.params["p_star"], entry.predicted, c.passed);
    }
    Ok(())
}
