//! Lattice-level calculus of double and bidouble covers.

pub mod lattice;
pub mod lift;
pub mod ops;

pub use lattice::{DivClass, Half, ModelFile, PicardModel};
pub use lift::{
    classify_lift, composite_galois_label, explicit_d4, lemma_div_geo, CoverKind, Extension, LiftCensus, LiftSpec,
};
pub use ops::{
    bidouble_invariants, double_invariants, enriques_arithmetic, even_node_set, validate_bidouble, validate_double,
    BidoubleData, CoverInvariants, DoubleData,
};
