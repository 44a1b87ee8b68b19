//! The quadric cone with its involution: the invariant map to P^4, the
//! images of the fixed points and a point count over F_13.
//!
//! ```text
//! cargo run --example quadric_cone
//! ```

use godeaux::quadric::{tau_fixed_points, tau_fixed_points_symbolic, verify_invariant_map, ConeSetup};

fn main() -> godeaux::error::Result<()> {
    let c = ConeSetup::rational();
    println!("cone: {}", c.cone);
    for (f, img) in c.invariant_basis.iter().zip(c.image_ring.names()) {
        println!("  {img} = {f}");
    }
    let report = verify_invariant_map(&c, &[13, 29])?;
    println!("invariant map: {:?}", report.status);

    for q in tau_fixed_points_symbolic(&c)? {
        let q: Vec<String> = q.iter().map(ToString::to_string).collect();
        println!("fixed point [{}]", q.join(", "));
    }
    println!("fixed points over F_13: {}", tau_fixed_points(&c, 13)?.len());
    Ok(())
}
