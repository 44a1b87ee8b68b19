//! Draw a family over F_13 and certify it: quasi-smooth, free action of
//! g, g^2, g^3, and a divisorial fixed part for the involution.
//!
//! ```text
//! cargo run --example family_certificates -- 42
//! ```

use godeaux::family::verify_equivariance;
use godeaux::variety::{certify_random_draw, Checks};

fn main() -> godeaux::error::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let p = 13;
    let draw = certify_random_draw(p, seed, 3, Checks::ALL)?;
    println!("seed {seed} over F_{p}");
    println!("q0 = {}", draw.family.q0);
    println!("q2 = {}", draw.family.q2);
    for r in &draw.resamples {
        println!("resampled attempt {}: {:?}", r.attempt, r.failed);
    }
    for r in draw.reports.iter().chain([&verify_equivariance(&draw.family)]) {
        println!("{:<20} {:?}", r.check, r.status);
    }
    println!("certified: {}", draw.passed());
    Ok(())
}
