//! Brute-force verification over prime fields.

pub mod checks;
pub mod fp;
pub mod points;

pub use checks::{
    certify_random_draw, check_free_action, check_quasi_smooth, check_sigma_fixed_part, fixed_locus, run_checks,
    surface_points, CertifiedDraw, Checks, Resample,
};
pub use fp::{same_point_geometric, FpMap, FpPoly};
pub use points::{ambient_point_count, enumerate_points, enumerate_points_serial, PointSet, WProjPoint};
