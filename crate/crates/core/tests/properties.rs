use gerbekit::bundle::BundleData;
use gerbekit::cochain::{d1, Cochain1Alg, Cochain2Alg};
use gerbekit::gerbe::{sweep_section, GerbeData, SectionData};
use gerbekit::liegroup::*;
use gerbekit::pathspace::{apply_generator, EdgePath, TwoCellGenerator};
use gerbekit::simplicial::{permutation_sign, SimplicialComplex};
use nalgebra::Vector3;
use proptest::prelude::*;

fn algebra(r: f64) -> impl Strategy<Value = AlgebraElement> {
    (-r..r, -r..r, -r..r).prop_map(|(a, b, c)| AlgebraElement(Vector3::new(a, b, c)))
}

fn group() -> impl Strategy<Value = Group> {
    prop_oneof![Just(Group::Su2), Just(Group::So3)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn exp_log_round_trip(x in algebra(0.5), g in group()) {
        let back = GroupElement::exp(g, &x).log().unwrap();
        prop_assert!((back - x).norm() < 1e-12);
    }

    #[test]
    fn bracket_is_antisymmetric_and_jacobi(x in algebra(1.0), y in algebra(1.0), z in algebra(1.0)) {
        prop_assert!((x.bracket(&y) + y.bracket(&x)).norm() < 1e-14);
        let jac = x.bracket(&y.bracket(&z)) + y.bracket(&z.bracket(&x)) + z.bracket(&x.bracket(&y));
        prop_assert!(jac.norm() < 1e-13);
    }

    #[test]
    fn adjoint_is_a_homomorphism(seed in any::<u64>(), g in group()) {
        let mut rng = rng_from_seed(seed);
        let (a, b) = (random_group(&mut rng, g), random_group(&mut rng, g));
        prop_assert!(((a * b).adjoint_matrix() - a.adjoint_matrix() * b.adjoint_matrix()).norm() < 1e-12);
        // Ad preserves the bracket
        let (x, y) = (random_algebra(&mut rng, 1.0), random_algebra(&mut rng, 1.0));
        let ad = a.adjoint();
        prop_assert!((ad.apply_algebra(&x.bracket(&y)) - ad.apply_algebra(&x).bracket(&ad.apply_algebra(&y))).norm() < 1e-12);
        prop_assert!(ad.bracket_defect() < 1e-12);
    }

    #[test]
    fn two_cochains_alternate(seed in any::<u64>(), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let c = SimplicialComplex::standard_simplex(2).unwrap();
        let mut rng = rng_from_seed(seed);
        let b = Cochain2Alg::from_fn(&c.cells(2), |_| random_algebra(&mut rng, 1.0));
        let base = b.get([0, 1, 2]).unwrap();
        let v = b.get([perm[0], perm[1], perm[2]]).unwrap();
        prop_assert!((v - base.scale(permutation_sign(&perm) as f64)).norm() < 1e-15);
    }

    #[test]
    fn coboundary_of_exact_one_cochain_vanishes(seed in any::<u64>(), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        let c = SimplicialComplex::standard_simplex(2).unwrap();
        let mut rng = rng_from_seed(seed);
        let lambda: Vec<AlgebraElement> = (0..3).map(|_| random_algebra(&mut rng, 1.0)).collect();
        let a = Cochain1Alg::from_fn(&c.cells(1), |[x, y]| lambda[y] - lambda[x]);
        prop_assert!(d1(&a, [perm[0], perm[1], perm[2]]).unwrap().norm() < 1e-14);
    }

    #[test]
    fn bianchi_holds_on_random_tetrahedra(seed in any::<u64>(), g in group(), perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let c = SimplicialComplex::standard_simplex(3).unwrap();
        let b = BundleData::random(&c, g, &mut rng_from_seed(seed));
        prop_assert!(b.mult_bianchi_defect([perm[0], perm[1], perm[2], perm[3]]).unwrap() < 1e-12);
    }

    #[test]
    fn induced_gerbes_have_trivial_omega(seed in any::<u64>(), g in group(), perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let c = SimplicialComplex::standard_simplex(3).unwrap();
        let gerbe = GerbeData::bundle_induced(&BundleData::random(&c, g, &mut rng_from_seed(seed)), &c).unwrap();
        let sweep = [perm[0], perm[1], perm[2], perm[3]];
        prop_assert!(gerbe.omega_group(sweep).unwrap().distance_to_identity() < 1e-12);
        prop_assert!(gerbe.omega_transport(sweep).unwrap().distance_to_identity() < 1e-12);
    }

    #[test]
    fn insert_then_delete_is_identity(seed in any::<u64>(), g in group(), z in 0usize..4, pos in 0usize..3) {
        let c = SimplicialComplex::standard_simplex(3).unwrap();
        let mut rng = rng_from_seed(seed);
        let bundle = BundleData::random_near_identity(&c, g, 0.5, &mut rng);
        let gerbe = GerbeData::curvature_gerbe(&bundle, &c).unwrap();
        let path = EdgePath::new(vec![0, 1, 2, 3]);
        let (x, y) = (path.0[pos], path.0[pos + 1]);
        prop_assume!(z != x && z != y);
        let ins = TwoCellGenerator::insert(x, z, y, pos);
        let longer = apply_generator(&path, &ins, Some(&c)).unwrap();
        prop_assert_eq!(apply_generator(&longer, &ins.inverse(), Some(&c)).unwrap(), path.clone());
        let s = SectionData::new(path, (0..3).map(|_| random_group(&mut rng, g)).collect()).unwrap();
        let back = sweep_section(&gerbe, &sweep_section(&gerbe, &s, &ins).unwrap(), &ins.inverse()).unwrap();
        for (a, b) in back.arrows.iter().zip(&s.arrows) {
            prop_assert!(a.distance(b) < 1e-12);
        }
    }
}
