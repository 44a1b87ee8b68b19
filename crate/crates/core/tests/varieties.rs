use godeaux::exact::{Field, FieldMatrix};
use godeaux::family::{build_family, Equation, FamilyParams};
use godeaux::report::Status;
use godeaux::variety::{check_quasi_smooth, surface_points};
use godeaux::wpoly::jacobian;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// The fast checker compiles the Jacobian to F_p; here it is evaluated
// through the generic exact path and ranked by Gaussian elimination.
#[test]
fn jacobian_rank_matches_generic_path_at_random_points() {
    let p = 13;
    let field = Field::prime(p).unwrap();
    let f = build_family(&FamilyParams::random(field, 42, true)).unwrap();
    assert!(check_quasi_smooth(&f, p).unwrap().passed());
    let jac = jacobian(&[f.q0.clone(), f.q2.clone()]).unwrap();
    let pts = surface_points(&f, p).unwrap();
    let mut all: Vec<_> = pts.iter().cloned().collect();
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(7));
    assert!(all.len() >= 10);
    for pt in &all[..10] {
        let x: Vec<_> = pt.coords().iter().map(|&v| field.from_i64(v as i64)).collect();
        assert!(f.q0.evaluate(&x).unwrap().is_zero());
        assert!(f.q2.evaluate(&x).unwrap().is_zero());
        let rows = jac
            .entries
            .iter()
            .map(|row| row.iter().map(|d| d.evaluate(&x).unwrap()).collect())
            .collect();
        let m = FieldMatrix::new(field, 5, rows).unwrap();
        assert_eq!(m.rank(), 2, "rank drop at {pt}");
    }
}

// Without x1^4 in q0 the point [1:0:0:0:0] lies on both quartics and every
// partial derivative of q0 vanishes there.
#[test]
fn forced_singular_draw_is_rejected_with_witness() {
    let field = Field::prime(13).unwrap();
    let mut params = FamilyParams::all_ones(field, true);
    params.set(Equation::Q0, "x1^4", field.zero()).unwrap();
    let f = build_family(&params).unwrap();
    let r = check_quasi_smooth(&f, 13).unwrap();
    assert_eq!(r.status, Status::Fail);
    let json = r.to_canonical_json();
    assert!(json.contains("[1,0,0,0,0]"), "{json}");
}
