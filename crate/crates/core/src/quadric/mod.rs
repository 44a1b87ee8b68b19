//! The quadric cone, its degenerate branch configurations and the pencil of
//! conics through four points.

pub mod cone;
pub mod degenerations;
pub mod pencil;

pub use cone::{fixed_point_report, tau_fixed_points, tau_fixed_points_symbolic, verify_invariant_map, ConeSetup};
pub use degenerations::{
    classify_degeneration, compute_gates, degeneration_report, intersection_count, BranchConfig, ComponentSpec,
    ConfigFile, DegenerationCase, DegenerationVerdict, Gates, IntersectionCount, LocalIntersection, Normalization,
};
pub use pencil::{conic_discriminant, pencil_of_conics, PencilOfConics, PointsFile};
