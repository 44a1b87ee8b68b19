//! Sign-type tables of the two involution lifts on the all-ones family,
//! compared with the expected 3x4 table.
//!
//! ```text
//! cargo run --example table1
//! ```

use godeaux::exact::Field;
use godeaux::family::{build_family, FamilyParams};
use godeaux::rep::SigmaTable;

fn main() -> godeaux::error::Result<()> {
    let family = build_family(&FamilyParams::all_ones(Field::Rational, true))?;
    println!("q0 = {}\nq2 = {}\n", family.q0, family.q2);

    let expected = SigmaTable { lift: family.sigma.label, rows: SigmaTable::expected() };
    println!("expected:\n{}\n", expected.render());

    let cmp = family.sigma_tables()?;
    for t in &cmp.tables {
        println!("{}:\n{}", t.lift, t.render());
        println!("differs at {:?}\n", cmp.mismatched_cells[&t.lift.to_string()]);
    }
    if cmp.matching.is_empty() {
        // search every diagonal sign lift, not only the two natural ones
        let others = family.sign_lifts_matching_table()?;
        println!("no lift matches; diagonal sign lifts that would: {}", others.len());
    } else {
        println!("matching lifts: {:?}", cmp.matching);
    }
    Ok(())
}
