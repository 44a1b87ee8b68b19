//! Classify every shipped degeneration of the branch data, and read a
//! configuration from JSON.
//!
//! ```text
//! cargo run --example degenerations
//! ```

use godeaux::quadric::{classify_degeneration, intersection_count, BranchConfig, ConfigFile, DegenerationCase};

fn main() -> godeaux::error::Result<()> {
    let p = 13;
    for case in DegenerationCase::ALL {
        let cfg = BranchConfig::example(case);
        let v = classify_degeneration(&cfg, p)?;
        let census = match intersection_count(&cfg, p) {
            Ok(n) => format!("B1.B2 = {} ({} points seen)", n.lattice, n.points.len()),
            Err(e) => format!("{e}"),
        };
        println!(
            "{:<8} normal={:<5} normalization={:<17} nu(T)={:<7} nu(S)={:<7} {census}",
            case.to_string(),
            v.normal,
            v.normalization.to_string(),
            v.nu_t,
            v.nu_s
        );
    }

    let json = r#"{"case": "deg3", "b1": [{"form": "y0 + 2 * y3"}, {"form": "y0 + y1 + 2 * y2 + 5 * y3"}], "b3": "y0 + 3 * y3"}"#;
    let cfg = BranchConfig::new(ConfigFile::from_json(json)?)?;
    println!("\nfrom json: {}", classify_degeneration(&cfg, p)?.report().to_canonical_json());
    Ok(())
}
