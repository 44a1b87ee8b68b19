//! Weighted graded polynomial rings and their scaled-permutation automorphisms.

mod map;
mod poly;
mod ring;
mod text;

pub use map::{apply_map, MonomialMap};
pub use poly::{jacobian, Jacobian, WPoly};
pub use ring::{Monomial, WRing};
pub use text::parse_poly;
