//! 2-divisibility in finite abelian groups and Picard lattices, and the
//! even-set rule for disjoint nodes.
//!
//! ```text
//! cargo run --example divisibility
//! ```

use num_bigint::BigInt;

use godeaux::cover::{even_node_set, PicardModel};
use godeaux::exact::FinAbGroup;

fn v(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn main() -> godeaux::error::Result<()> {
    let g = FinAbGroup::from_invariants(&[2, 4])?;
    for (x, modulo) in [(v(&[0, 2]), vec![]), (v(&[1, 0]), vec![]), (v(&[1, 0]), vec![v(&[1, 2])])] {
        let h = g.is_two_divisible(&x, &modulo)?;
        println!("{g}: {x:?} mod {modulo:?} -> {} {:?}", h.divisible, h.witness.map(|w| w.1));
    }

    let (k3, _) = PicardModel::preset("k3_even_eight")?;
    let nodes: Vec<_> = (1..=8).map(|i| k3.class(&format!("C{i}"))).collect::<Result<_, _>>()?;
    for k in [8, 7, 4] {
        let r = even_node_set(&k3, &nodes[..k], None)?;
        println!("{k} nodes: {:?} {}", r.status, r.message.unwrap_or_default());
    }

    let (enr, _) = PicardModel::preset("enriques")?;
    let b = enr.parse("2E + 2C5 + 2N")?;
    let half = enr.is_two_divisible(&b, &[])?;
    println!("B = {} halves to {:?}", enr.format(&b), half.half.map(|h| enr.format(&h)));
    Ok(())
}
