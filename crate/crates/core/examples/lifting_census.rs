//! Which groups arise when an automorphism of the base lifts to a cover,
//! plus the explicit dihedral table.
//!
//! ```text
//! cargo run --example lifting_census
//! ```

use godeaux::cover::{classify_lift, explicit_d4, LiftSpec};

fn main() -> godeaux::error::Result<()> {
    for spec in [LiftSpec::case_a(), LiftSpec::case_b(), LiftSpec::double(4), LiftSpec::double(3)] {
        let census = classify_lift(&spec)?;
        println!("{census}");
        for e in &census.extensions {
            println!("    rho^2 = {:<4} -> {}", e.power, e.label);
        }
    }
    let d4 = explicit_d4()?;
    println!("\nexplicit D4: {:?}", d4.status);
    println!("{}", d4.to_canonical_json());
    Ok(())
}
