//! The order-4 projectivity cycling four points of the plane and the
//! involution it induces on the pencil of conics through them.
//!
//! ```text
//! cargo run --example pencil_of_conics
//! ```

use godeaux::quadric::{conic_discriminant, pencil_of_conics, PointsFile};

fn main() -> godeaux::error::Result<()> {
    let points = PointsFile::standard().to_points()?;
    let pc = pencil_of_conics(&points)?;
    for row in pc.phi_rows() {
        println!("phi | {}", row.join(" "));
    }
    for p in &points {
        let img: Vec<String> = pc.apply_phi(p).iter().map(ToString::to_string).collect();
        let p: Vec<String> = p.iter().map(ToString::to_string).collect();
        println!("[{}] -> [{}]", p.join(":"), img.join(":"));
    }
    println!("pencil: <{}, {}>", pc.pencil[0], pc.pencil[1]);
    for c in &pc.fixed {
        println!("fixed member {c}  (disc {})", conic_discriminant(c)?);
    }
    println!("reducible = ({}) * ({})", pc.lines[0], pc.lines[1]);
    for (a, b) in &pc.iota {
        println!("iota: {a:?} -> {b:?}");
    }
    println!("{:?}", pc.report()?.status);
    Ok(())
}
