mod common;

use common::{fit_slope, EPS};
use gerbekit::bundle::*;
use gerbekit::cochain::{curvature_form, Cochain1Alg};
use gerbekit::liegroup::*;
use gerbekit::pathspace::EdgePath;
use gerbekit::simplicial::SimplicialComplex;

fn delta(n: usize) -> SimplicialComplex {
    SimplicialComplex::standard_simplex(n).unwrap()
}

#[test]
fn holonomy_is_the_ordered_matrix_product() {
    let c = delta(3);
    let mut rng = rng_from_seed(1);
    for group in Group::ALL {
        let b = BundleData::random(&c, group, &mut rng);
        let p = [0, 2, 1, 3, 0];
        let mut m = GroupElement::identity(group).matrix();
        for w in p.windows(2) {
            m *= b.edge(w[0], w[1]).unwrap().matrix();
        }
        let h = b.holonomy(&EdgePath::new(p.to_vec())).unwrap();
        assert!((h.matrix() - m).norm() < 1e-13);
        assert!(b.holonomy(&EdgePath::constant(2)).unwrap().distance_to_identity() == 0.0);
        assert!(b.holonomy(&EdgePath::new(vec![0, 1, 0])).unwrap().distance_to_identity() < 1e-14);
    }
}

#[test]
fn curvature_reverses_to_inverse() {
    let c = delta(2);
    let b = BundleData::random(&c, Group::Su2, &mut rng_from_seed(2));
    let fwd = b.curvature_loop(0, 1, 2).unwrap();
    let rev = b.curvature_loop(0, 2, 1).unwrap();
    assert!((fwd * rev).distance_to_identity() < 1e-14);
    let cc = b.curvature_c(&c).unwrap();
    assert!(cc.get(0, 1, 2).unwrap().distance(&fwd) < 1e-15);
    assert!(cc.get(0, 2, 1).unwrap().distance(&rev) < 1e-14);
}

#[test]
fn pure_gauge_connection_is_flat() {
    let c = delta(3);
    let mut rng = rng_from_seed(3);
    for group in Group::ALL {
        let g: Vec<GroupElement> = (0..4).map(|_| random_group(&mut rng, group)).collect();
        let b = BundleData::from_fn(&c, group, |x, y| g[x].inverse() * g[y]);
        for t in c.cells(2) {
            assert!(b.curvature_loop(t[0], t[1], t[2]).unwrap().distance_to_identity() < 1e-13);
        }
        assert!(BundleData::trivial(&c, group).curvature_loop(0, 1, 2).unwrap().distance_to_identity() == 0.0);
    }
}

#[test]
fn multiplicative_bianchi_holds_for_random_bundles() {
    for n in [3, 4] {
        let c = delta(n);
        for group in Group::ALL {
            let mut rng = rng_from_seed(10 + n as u64);
            for _ in 0..20 {
                let b = BundleData::random(&c, group, &mut rng);
                for cell in c.cells(3) {
                    let cell = [cell[0], cell[1], cell[2], cell[3]];
                    assert!(b.mult_bianchi_defect(cell).unwrap() < 1e-12);
                    assert!(b.mult_bianchi_defect([cell[2], cell[0], cell[3], cell[1]]).unwrap() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn perturbed_face_breaks_bianchi() {
    let c = delta(3);
    let b = BundleData::random(&c, Group::Su2, &mut rng_from_seed(4));
    let cl = |x, y, z| b.curvature_loop(x, y, z).unwrap();
    let kick = GroupElement::exp(Group::Su2, &AlgebraElement::new(0.0, 0.1, 0.0));
    let f = b.edge(0, 1).unwrap();
    let clean = mult_bianchi_defect_with(&f, cl(0, 1, 2), cl(0, 2, 3), cl(0, 3, 1), cl(1, 2, 3)).unwrap();
    let bad = mult_bianchi_defect_with(&f, cl(0, 1, 2) * kick, cl(0, 2, 3), cl(0, 3, 1), cl(1, 2, 3)).unwrap();
    assert!(clean < 1e-12);
    assert!(bad > 0.05);
}

#[test]
fn gauge_conjugates_curvature() {
    let c = delta(3);
    let mut rng = rng_from_seed(5);
    for group in Group::ALL {
        let b = BundleData::random(&c, group, &mut rng);
        let g = BundleGauge::random(4, group, &mut rng);
        let bt = b.gauge_transform(&g).unwrap();
        let (x, y, z) = (2, 0, 3);
        let expected = g.at(x).unwrap().inverse() * b.curvature_loop(x, y, z).unwrap() * g.at(x).unwrap();
        assert!(bt.curvature_loop(x, y, z).unwrap().distance(&expected) < 1e-13);
        assert!(bt.mult_bianchi_defect([0, 1, 2, 3]).unwrap() < 1e-12);
        // acting twice equals acting by the product
        let h = BundleGauge::random(4, group, &mut rng);
        let twice = bt.gauge_transform(&h).unwrap();
        let once = b.gauge_transform(&g.then(&h)).unwrap();
        assert!(twice.edge(1, 3).unwrap().distance(&once.edge(1, 3).unwrap()) < 1e-13);
        let same = b.gauge_transform(&BundleGauge::identity(4, group)).unwrap();
        assert!(same.edge(0, 2).unwrap().distance(&b.edge(0, 2).unwrap()) < 1e-15);
        assert!(b.gauge_transform(&BundleGauge::identity(2, group)).is_err());
    }
}

#[test]
fn linearize_round_trip() {
    let c = delta(3);
    let mut rng = rng_from_seed(6);
    for group in Group::ALL {
        let a = Cochain1Alg::from_fn(&c.cells(1), |_| random_algebra(&mut rng, 0.3));
        let back = BundleData::from_algebra(&c, group, &a).unwrap().linearize().unwrap();
        for e in c.cells(1) {
            assert!((back.get([e[0], e[1]]).unwrap() - a.get([e[0], e[1]]).unwrap()).norm() < 1e-12);
        }
    }
}

#[test]
fn curvature_form_approximates_log_curvature() {
    // log(e^X e^Y e^Z) agrees with X + Y + Z + ½ Σ brackets to third order
    let c = delta(2);
    let ys: Vec<f64> = EPS
        .iter()
        .map(|&eps| {
            (0..10)
                .map(|s| {
                    let mut rng = rng_from_seed(100 + s);
                    let a = Cochain1Alg::from_fn(&c.cells(1), |_| random_algebra(&mut rng, eps));
                    let b = BundleData::from_algebra(&c, Group::Su2, &a).unwrap();
                    let log_c = b.curvature_loop(0, 1, 2).unwrap().log().unwrap();
                    (log_c - curvature_form(&a, [0, 1, 2]).unwrap()).norm()
                })
                .sum::<f64>()
        })
        .collect();
    let slope = fit_slope(&EPS, &ys);
    assert!(slope >= 2.8, "slope {slope}");
}
