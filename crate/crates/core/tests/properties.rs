use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use godeaux::cover::{composite_galois_label, even_node_set, lemma_div_geo, PicardModel};
use godeaux::exact::{smith_normal_form, ExactScalar, Field, GroupLabel, IntMatrix, SmallGroup};
use godeaux::family::{build_family, FamilyParams};
use godeaux::quadric::{
    classify_degeneration, conic_discriminant, intersection_count, pencil_of_conics, BranchConfig, ComponentSpec,
    ConfigFile, DegenerationCase,
};
use godeaux::report::Status;
use godeaux::rep::{character_of, relation_grading, CyclicAction};
use godeaux::suite::{random_group, two_divisible_brute};
use godeaux::variety::{enumerate_points, enumerate_points_serial};
use godeaux::wpoly::{Monomial, WPoly, WRing};

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn random_poly(field: Field, degree: u32, coeffs: &[i64]) -> WPoly {
    let ring = WRing::godeaux();
    let terms = ring
        .monomials_of_degree(degree)
        .into_iter()
        .zip(coeffs.iter().cycle())
        .map(|(m, &c)| (m, field.from_i64(c)));
    WPoly::from_terms(&ring, field, terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalization(
        rows in 1usize..4, cols in 1usize..5, entries in prop::collection::vec(-20i64..20, 16),
    ) {
        let m = IntMatrix::new(rows, cols, big(&entries[..rows * cols])).unwrap();
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.d.is_diagonal());
        prop_assert!(s.u.det().unwrap().abs().is_one());
        prop_assert!(s.v.det().unwrap().abs().is_one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0] == BigInt::from(0) {
                prop_assert_eq!(&w[1], &BigInt::from(0));
            } else {
                prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
            }
        }
    }

    #[test]
    fn two_divisibility_matches_exhaustive_search(seed in any::<u64>(), g in prop::collection::vec(0i64..64, 4), n_mod in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let group = random_group(&mut rng, 64);
        let elt = |off: usize| group.reduce(&big(&g.iter().map(|x| x + off as i64 * 7).take(group.rank()).collect::<Vec<_>>())).unwrap();
        let x = elt(0);
        let modulo: Vec<_> = (1..=n_mod).map(elt).collect();
        let fast = group.is_two_divisible(&x, &modulo).unwrap();
        prop_assert_eq!(fast.divisible, two_divisible_brute(&group, &x, &modulo).unwrap());
        if let Some((_, h)) = fast.witness {
            // 2h = g modulo the subgroup, so g - 2h is divisible by 2 trivially
            let twice = group.add(&h, &h).unwrap();
            prop_assert!(two_divisible_brute(&group, &twice, &modulo).unwrap());
        }
    }

    #[test]
    fn classification_is_invariant_under_relabeling(
        gens in prop::collection::vec(Just((0..4usize).collect::<Vec<_>>()).prop_shuffle(), 1..3),
        shuffle_seed in any::<u64>(),
    ) {
        // S4 itself is beyond the classifier's range
        let Ok(g) = SmallGroup::from_permutations(&gens) else { return Ok(()) };
        let mut perm: Vec<usize> = (0..g.order()).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(g.classify(), h.classify());
        prop_assert_eq!(g.order_census(), h.order_census());
    }

    #[test]
    fn maps_compose_and_dualize(coeffs in prop::collection::vec(-6i64..6, 1..20), point in prop::collection::vec(0i64..13, 5), a in 0u32..4, b in 0u32..4) {
        let field = Field::prime(13).unwrap();
        let ring = WRing::godeaux();
        let f = random_poly(field, 4, &coeffs);
        let gen = CyclicAction::godeaux_generator();
        let ma = gen.power(a).to_map(&ring, field).unwrap();
        let mb = gen.power(b).to_map(&ring, field).unwrap();
        let direct = mb.apply(&ma.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(&direct, &mb.compose(&ma).unwrap().apply(&f).unwrap());
        prop_assert_eq!(&direct, &gen.power((a + b) % 4).to_map(&ring, field).unwrap().apply(&f).unwrap());
        let x: Vec<ExactScalar> = point.iter().map(|&v| field.from_i64(v)).collect();
        prop_assert_eq!(ma.apply(&f).unwrap().evaluate(&x).unwrap(), f.evaluate(&ma.apply_point(&x)).unwrap());
    }

    #[test]
    fn euler_relation_for_weighted_homogeneous(degree in 1u32..6, coeffs in prop::collection::vec(-9i64..9, 1..30)) {
        let field = Field::Rational;
        let ring = WRing::godeaux();
        let f = random_poly(field, degree, &coeffs);
        let mut euler = WPoly::zero(&ring, field);
        for (i, &w) in ring.weights().iter().enumerate() {
            let term = WPoly::var(&ring, field, i).mul(&f.derivative(i)).scale(&field.from_i64(w as i64));
            euler = euler.add(&term);
        }
        prop_assert_eq!(euler, f.scale(&field.from_i64(degree as i64)));
    }

    #[test]
    fn characters_add_under_multiplication(a in prop::collection::vec(0u32..6, 5), b in prop::collection::vec(0u32..6, 5)) {
        let g = CyclicAction::godeaux_generator();
        let (ma, mb) = (Monomial(a), Monomial(b));
        prop_assert_eq!(character_of(&ma.mul(&mb), &g), (character_of(&ma, &g) + character_of(&mb, &g)) % 4);
    }

    #[test]
    fn enforced_relations_are_graded_for_both_lifts(seed in any::<u64>()) {
        let f = build_family(&FamilyParams::random(Field::Rational, seed, true)).unwrap();
        for (q, character) in [(&f.q0, 0), (&f.q2, 2)] {
            for lift in f.lifts() {
                let gr = relation_grading(q, &f.g, lift).unwrap();
                prop_assert_eq!((gr.degree, gr.character), (4, character));
            }
        }
    }

    #[test]
    fn direct_sum_adds_intersection_numbers(a in prop::collection::vec(-5i64..5, 12), b in prop::collection::vec(-5i64..5, 12)) {
        let (m1, _) = PicardModel::preset("enriques").unwrap();
        let (m2, _) = PicardModel::preset("f2").unwrap();
        let x = m1.from_coords(&a[..m1.rank()], &vec![0; m1.torsion_orders().len()]).unwrap();
        let y = m2.from_coords(&b[..m2.rank()], &vec![0; m2.torsion_orders().len()]).unwrap();
        let s = m1.direct_sum(&m2).unwrap();
        let xy = s.embed_pair(&x, &y).unwrap();
        prop_assert_eq!(s.square(&xy).unwrap(), m1.square(&x).unwrap() + m2.square(&y).unwrap());
    }

    #[test]
    fn even_sets_among_eight_disjoint_nodes(mask in 1u32..256) {
        let (k3, _) = PicardModel::preset("k3_even_eight").unwrap();
        let classes: Vec<_> = (1..=8).filter(|i| mask & (1 << (i - 1)) != 0).map(|i| k3.class(&format!("C{i}")).unwrap()).collect();
        let r = even_node_set(&k3, &classes, None).unwrap();
        prop_assert_ne!(r.status, Status::Error);
        prop_assert_eq!(r.status == Status::Pass, classes.len() == 8);
    }

    #[test]
    fn galois_criterion_matches_parity(di in 0usize..4, k in 0i64..6, half_square in 1i64..4) {
        let d = [2u32, 3, 4, 6][di];
        let k = k % d as i64;
        let gram = vec![vec![2 * half_square]];
        let x = PicardModel::new("x", vec!["h".into()], gram.clone(), vec![], vec![], true, 1).unwrap();
        let y = PicardModel::new("y", vec!["h".into()], gram, vec![d as u64], vec!["eta".into()], true, 1).unwrap();
        let eta = y.class("eta").unwrap();
        let dclass = y.parse(&format!("2h + {k}*eta")).unwrap();
        let label = composite_galois_label(&y, &eta, d, &dclass).unwrap();
        let even = y.is_two_divisible(&dclass, &[]).unwrap().divisible;
        prop_assert_eq!(lemma_div_geo(&x, &x.parse("2h").unwrap(), d, &label).unwrap(), even);
        prop_assert!(lemma_div_geo(&x, &x.parse("2h").unwrap(), d, &GroupLabel::cyclic(2)).is_err() || d == 1);
    }

    #[test]
    fn serial_and_parallel_enumeration_agree(seed in 0u64..1000) {
        let field = Field::prime(13).unwrap();
        let f = build_family(&FamilyParams::random(field, seed, true)).unwrap();
        let eqs = [f.q0.clone(), f.q2.clone()];
        let a = enumerate_points(&f.ring, 13, &eqs).unwrap();
        let b = enumerate_points_serial(&f.ring, 13, &eqs).unwrap();
        prop_assert_eq!(a.iter().collect::<Vec<_>>(), b.iter().collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pencil_through_four_random_points(pts in prop::collection::vec(prop::collection::vec(-7i64..8, 3), 4)) {
        let field = Field::Rational;
        let points: Vec<Vec<ExactScalar>> = pts.iter().map(|p| p.iter().map(|&v| field.from_i64(v)).collect()).collect();
        let Ok(pc) = pencil_of_conics(&points) else {
            // three collinear points or a repeated point
            return Ok(());
        };
        prop_assert!(pc.report().unwrap().passed());
        prop_assert_ne!(&pc.fixed[0], &pc.fixed[1]);
        let reducible = pc.fixed.iter().filter(|c| conic_discriminant(c).unwrap().is_zero()).count();
        prop_assert_eq!(reducible, 1);
        for c in &pc.fixed {
            for p in &points {
                prop_assert!(c.evaluate(p).unwrap().is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn verdicts_are_invariant_under_the_involution(ci in 0usize..6, pi in 0usize..3) {
        let case = DegenerationCase::ALL[ci];
        let p = [13u64, 29, 37][pi];
        let cfg = BranchConfig::example(case);
        let a = classify_degeneration(&cfg, p).unwrap();
        let b = classify_degeneration(&cfg.swapped().unwrap(), p).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn intersection_lattice_value_is_eight(coeffs in prop::collection::vec(-4i64..5, 10), pi in 0usize..2) {
        let names = ["y0^2", "y1^2", "y2^2", "y3^2", "y0 y1", "y0 y2", "y0 y3", "y1 y2", "y1 y3", "y2 y3"];
        let form = coeffs
            .iter()
            .zip(names)
            .filter(|(c, _)| **c != 0)
            .map(|(c, m)| format!("{c} * {m}"))
            .collect::<Vec<_>>()
            .join(" + ");
        prop_assume!(!form.is_empty());
        let file = ConfigFile {
            case: DegenerationCase::General,
            b1: vec![ComponentSpec { form, multiplicity: 1 }],
            b3: "y0 + 3 * y3".into(),
            r1: None,
        };
        let Ok(cfg) = BranchConfig::new(file) else { return Ok(()) };
        let Ok(count) = intersection_count(&cfg, [13u64, 29][pi]) else { return Ok(()) };
        prop_assert_eq!(count.lattice, 8);
        prop_assert!(count.multiplicity_sum <= 8);
    }
}
