//! Invariants of the Enriques double cover and of the bidouble cover of F2,
//! before and after contracting (-1)-curves.
//!
//! ```text
//! cargo run --example cover_invariants
//! ```

use godeaux::cover::{
    bidouble_invariants, double_invariants, validate_bidouble, validate_double, BidoubleData, DoubleData,
    PicardModel,
};
use godeaux::suite::nodal_summands;

fn main() -> godeaux::error::Result<()> {
    let (m, file) = PicardModel::preset("enriques")?;
    let d = DoubleData::from_model(&m, &file)?;
    println!("{m}");
    println!("building data: {:?}", validate_double(&m, &d)?.status);
    let inv = double_invariants(&m, &d, m.chi)?;
    let n = nodal_summands(&m, &file.double.as_ref().expect("double cover").b) as u32;
    let s = inv.contract(n);
    println!("double cover: chi = {}, K^2 = {}", inv.chi, inv.k2);
    println!("after {n} contractions: chi = {}, K^2 = {}\n", s.chi, s.k2);

    let (m, file) = PicardModel::preset("f2")?;
    let d = BidoubleData::from_model(&m, &file)?;
    let (report, l3) = validate_bidouble(&m, &d)?;
    println!("{m}");
    println!("building data: {:?}, L3 = {}", report.status, m.format(&l3));
    let t0 = bidouble_invariants(&m, &d, m.chi)?;
    let t = t0.contract(file.contracted_curves);
    println!("T0: chi = {}, K^2 = {}", t0.chi, t0.k2);
    println!("T:  chi = {}, K^2 = {}", t.chi, t.k2);
    if let Some(k) = file.free_quotient {
        let q = t.free_quotient(k)?;
        println!("T / Z{k}: chi = {}, K^2 = {}", q.chi, q.k2);
    }
    Ok(())
}
