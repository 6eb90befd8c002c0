mod common;

use common::{fit_slope, EPS};
use gerbekit::bundle::BundleData;
use gerbekit::cochain::Cochain;
use gerbekit::gerbe::*;
use gerbekit::liegroup::*;
use gerbekit::pathspace::{tetra_sweep_word, EdgePath, TwoCellGenerator};
use gerbekit::sample::{amplitude_gauge, amplitude_linear_gerbe, smooth_linear_gerbe};
use gerbekit::simplicial::{orderings, SimplicialComplex};
use rand::Rng;

fn delta(n: usize) -> SimplicialComplex {
    SimplicialComplex::standard_simplex(n).unwrap()
}

fn induced(c: &SimplicialComplex, group: Group, seed: u64) -> GerbeData {
    let b = BundleData::random(c, group, &mut rng_from_seed(seed));
    GerbeData::bundle_induced(&b, c).unwrap()
}

/// φ and K drawn independently from Haar measure; β derived.
fn haar_gerbe(c: &SimplicialComplex, group: Group, seed: u64) -> GerbeData {
    let mut rng = rng_from_seed(seed);
    let mut phi = Cochain::new();
    for e in c.cells(1) {
        let r = random_group(&mut rng, Group::So3).adjoint_matrix();
        phi.insert_canonical([e[0], e[1]], Automorphism::from_matrix(r)).unwrap();
    }
    let mut k = Cochain::new();
    for t in c.cells(2) {
        k.insert_canonical([t[0], t[1], t[2]], random_group(&mut rng, group)).unwrap();
    }
    GerbeData::new(group, phi, k).unwrap()
}

fn all_tetra_orderings(c: &SimplicialComplex) -> Vec<[usize; 4]> {
    c.cells(3).iter().flat_map(|t| orderings(t)).map(|o| [o[0], o[1], o[2], o[3]]).collect()
}

#[test]
fn induced_and_curvature_gerbes_satisfy_every_identity() {
    let c = delta(4);
    for group in Group::ALL {
        let bundle = BundleData::random(&c, group, &mut rng_from_seed(1));
        for g in [GerbeData::bundle_induced(&bundle, &c).unwrap(), GerbeData::curvature_gerbe(&bundle, &c).unwrap()] {
            for sweep in all_tetra_orderings(&c) {
                assert!(g.omega_group(sweep).unwrap().distance_to_identity() < 1e-12);
                assert!(g.omega_transport(sweep).unwrap().distance_to_identity() < 1e-12);
            }
            for cell in [[0, 1, 2, 3, 4], [3, 1, 4, 0, 2]] {
                assert!(g.cocycle_defect_group(cell).unwrap().distance_to_identity() < 1e-12);
            }
            assert!(g.zigzag_check(1e-10).is_empty());
        }
    }
}

#[test]
fn trivial_gerbe_is_trivial() {
    let c = delta(3);
    let g = GerbeData::trivial(&c, Group::So3).unwrap();
    assert_eq!(g.k_loop(2, 0, 1).unwrap().distance_to_identity(), 0.0);
    assert!(g.beta(1, 3, 0).unwrap().distance_to_identity() < 1e-15);
    assert!(g.phi(3, 1).unwrap().distance_to_identity() < 1e-15);
    let lin = g.linearize().unwrap();
    assert!(lin.nu([0, 1, 2]).unwrap().norm() < 1e-15);
}

#[test]
fn naturality_holds_for_arbitrary_data() {
    // β is derived from φ and K; the squares close whenever K is read consistently at every base
    let c = delta(3);
    let mut rng = rng_from_seed(2);
    for group in Group::ALL {
        let bundle = BundleData::random(&c, group, &mut rng_from_seed(3));
        for g in [GerbeData::curvature_gerbe(&bundle, &c).unwrap(), induced(&c, group, 4)] {
            for t in c.cells(2) {
                for o in orderings(&t) {
                    let tri = [o[0], o[1], o[2]];
                    assert!(g.beta_inverse_defect(tri[0], tri[1], tri[2]).unwrap() < 1e-12);
                    for _ in 0..10 {
                        let u = random_group(&mut rng, group);
                        assert!(g.naturality_defect(tri, &u).unwrap() < 1e-11);
                    }
                }
            }
        }
    }
}

#[test]
fn perturbed_beta_breaks_naturality_linearly() {
    let c = delta(2);
    let base = induced(&c, Group::Su2, 5);
    let u = random_group(&mut rng_from_seed(6), Group::Su2);
    let ts = [1e-2, 1e-3, 1e-4];
    let defects: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let mut g = base.clone();
            let kick = Derivation::ad(&AlgebraElement::new(0.3, -0.2, 0.5)).scale(t).exp();
            let beta = g.beta(0, 1, 2).unwrap();
            g.set_beta([0, 1, 2], beta.compose(&kick)).unwrap();
            g.naturality_defect([0, 2, 1], &u).unwrap()
        })
        .collect();
    assert!(defects.iter().all(|&d| d > 0.0));
    let slope = fit_slope(&ts, &defects);
    assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
}

#[test]
fn reading_k_and_beta_at_another_base() {
    let c = delta(2);
    let g = haar_gerbe(&c, Group::Su2, 7);
    // K_[1 2 0 1] is K_[0 1 2 0] carried to base 1 by φ_10
    let at0 = g.k_loop(0, 1, 2).unwrap();
    let at1 = g.k_loop(1, 2, 0).unwrap();
    assert!(at1.distance(&g.phi(1, 0).unwrap().apply_group(&at0)) < 1e-12);
    assert!((g.k_loop(0, 2, 1).unwrap() * at0).distance_to_identity() < 1e-12);
    assert!(g.k_loop(0, 1, 7).is_err());
}

#[test]
fn linearize_round_trip() {
    let c = delta(3);
    for group in Group::ALL {
        let lin = smooth_linear_gerbe(&c, 0.05, &mut rng_from_seed(8));
        let back = GerbeData::from_linear(group, &lin).unwrap().linearize().unwrap();
        for (e, m) in lin.mu.iter() {
            assert!((back.mu.canonical(e).unwrap().0 - m.0).norm() < 1e-12);
        }
        for (t, b) in lin.b.iter() {
            assert!((*back.b.canonical(t).unwrap() - *b).norm() < 1e-12);
        }
    }
}

#[test]
fn beta_expands_to_fake_curvature() {
    let c = delta(2);
    let ys: Vec<f64> = EPS
        .iter()
        .map(|&h| {
            (0..5)
                .map(|s| {
                    let lin = smooth_linear_gerbe(&c, h, &mut rng_from_seed(20 + s));
                    let g = GerbeData::from_linear(Group::Su2, &lin).unwrap();
                    let lin = g.linearize().unwrap();
                    g.beta_expansion_defect(&lin, [0, 1, 2]).unwrap()
                })
                .sum()
        })
        .collect();
    let slope = fit_slope(&EPS, &ys);
    assert!(slope >= 2.8, "slope {slope}");
}

#[test]
fn transported_omega_agrees_with_quoted_product() {
    let c = delta(3);
    let ys: Vec<f64> = EPS
        .iter()
        .map(|&h| {
            (0..5)
                .map(|s| {
                    let lin = smooth_linear_gerbe(&c, h, &mut rng_from_seed(30 + s));
                    let g = GerbeData::from_linear(Group::So3, &lin).unwrap();
                    all_tetra_orderings(&c)
                        .into_iter()
                        .map(|sw| g.omega_transport(sw).unwrap().distance(&g.omega_group(sw).unwrap()))
                        .sum::<f64>()
                })
                .sum()
        })
        .collect();
    let slope = fit_slope(&EPS, &ys);
    assert!(slope >= 3.8, "slope {slope}");
}

#[test]
fn single_generators_round_trip() {
    let c = delta(3);
    let g = haar_gerbe(&c, Group::Su2, 9);
    let mut rng = rng_from_seed(10);
    let path = EdgePath::new(vec![0, 1, 3, 0, 0, 2]);
    let arrows = (0..5).map(|_| random_group(&mut rng, Group::Su2)).collect();
    let s = SectionData::new(path, arrows).unwrap();
    for gen in [
        TwoCellGenerator::insert(1, 2, 3, 1),
        TwoCellGenerator::loop_insert(0, 1, 2, 3),
        TwoCellGenerator::insert(0, 3, 1, 0),
    ] {
        let there = sweep_section(&g, &s, &gen).unwrap();
        let back = sweep_section(&g, &there, &gen.inverse()).unwrap();
        assert_eq!(back.path, s.path);
        for (a, b) in back.arrows.iter().zip(&s.arrows) {
            assert!(a.distance(b) < 1e-12, "{gen}");
        }
    }
    assert!(SectionData::new(EdgePath::new(vec![0, 1]), vec![]).is_err());
}

#[test]
fn induced_transport_preserves_the_composite() {
    // for φ = Ad f and K = 1 the frame change along an inserted vertex cancels the β twist
    let c = delta(3);
    let g = induced(&c, Group::So3, 11);
    let mut rng = rng_from_seed(12);
    let mut s = SectionData::new(
        EdgePath::new(vec![0, 1, 2, 3]),
        (0..3).map(|_| random_group(&mut rng, Group::So3)).collect(),
    )
    .unwrap();
    let start = s.composite(&g).unwrap();
    for _ in 0..30 {
        let v = s.path.0.clone();
        let p = rng.random_range(0..v.len() - 1);
        let gen = if v.len() > 2 && rng.random_bool(0.5) && p + 2 < v.len() && v[p] != v[p + 2] && v[p + 1] != v[p] {
            TwoCellGenerator::delete(v[p], v[p + 1], v[p + 2], p)
        } else {
            let candidates: Vec<usize> = (0..4).filter(|&z| z != v[p] && z != v[p + 1]).collect();
            if v[p] == v[p + 1] {
                continue;
            }
            TwoCellGenerator::insert(v[p], candidates[rng.random_range(0..candidates.len())], v[p + 1], p)
        };
        s = sweep_section(&g, &s, &gen).unwrap();
        assert!(s.composite(&g).unwrap().distance(&start) < 1e-11);
    }
}

#[test]
fn closed_words_return_to_the_constant_path() {
    let c = delta(3);
    let g = haar_gerbe(&c, Group::Su2, 13);
    let out = run_word(&g, &tetra_sweep_word([2, 0, 3, 1], Some(&c)).unwrap()).unwrap();
    assert_eq!(out.path, EdgePath::constant(2));
    assert_eq!(out.arrows.len(), 1);
    let w = word_value(&g, &tetra_sweep_word([2, 0, 3, 1], None).unwrap()).unwrap();
    assert!(w.distance(&out.arrows[0].inverse()) < 1e-15);
}

#[test]
fn zigzag_sweep_restores_sections() {
    let c = delta(2);
    let mut g = induced(&c, Group::Su2, 14);
    let mut rng = rng_from_seed(15);
    let (x, z, y) = (0, 1, 2);
    let u_xz = random_group(&mut rng, Group::Su2);
    let u_zx = g.phi(z, x).unwrap().apply_group(&u_xz.inverse());
    let u_xy = random_group(&mut rng, Group::Su2);
    let s = SectionData::new(EdgePath::new(vec![x, z, x, y]), vec![u_xz, u_zx, u_xy]).unwrap();
    let out = sweep_backtrack(&g, &s, 1).unwrap();
    assert_eq!(out.path.0, vec![x, y]);
    assert!(out.arrows[0].distance(&u_xy) < 1e-12);
    assert!(sweep_backtrack(&g, &s, 2).is_err());

    // a non-trivial degenerate K is reported and spoils the sweep
    let bad = GroupElement::exp(Group::Su2, &AlgebraElement::new(0.1, 0.0, 0.0));
    g.set_degenerate_k(x, z, bad).unwrap();
    let v = g.zigzag_check(1e-10);
    assert_eq!(v.len(), 1);
    assert_eq!((v[0].x, v[0].z), (x, z));
    common::assert_close(v[0].deviation, bad.distance_to_identity(), 1e-15);
    let out = sweep_backtrack(&g, &s, 1).unwrap();
    assert!(out.arrows[0].distance(&u_xy) > 0.01);
    assert!(g.set_degenerate_k(1, 1, bad).is_err());
}

#[test]
fn zero_gauge_changes_nothing() {
    let c = delta(3);
    let lin = amplitude_linear_gerbe(&c, 0.1, &mut rng_from_seed(16));
    let out = gauge_transform_linear(&lin, &GerbeGauge::zero(&c), &c).unwrap();
    assert_eq!(out.transformed, lin);
    assert!(out.nu_mismatch().unwrap() < 1e-15);
    assert!(out.omega_mismatch().unwrap() < 1e-15);
}

#[test]
fn gauge_predictions_hold_to_second_order() {
    let c = delta(3);
    let deltas = [1e-1, 1e-2, 1e-3];
    let (mut nus, mut omegas) = (vec![], vec![]);
    for &d in &deltas {
        let (mut n, mut o) = (0.0, 0.0);
        for s in 0..5 {
            let mut rng = rng_from_seed(40 + s);
            let lin = amplitude_linear_gerbe(&c, 1e-2, &mut rng);
            let h = amplitude_gauge(&c, d, &mut rng);
            let out = gauge_transform_linear(&lin, &h, &c).unwrap();
            n += out.nu_mismatch().unwrap();
            o += out.omega_mismatch().unwrap();
        }
        nus.push(n);
        omegas.push(o);
    }
    let (sn, so) = (fit_slope(&deltas, &nus), fit_slope(&deltas, &omegas));
    assert!(sn >= 1.8, "nu slope {sn}");
    assert!(so >= 1.8, "omega slope {so}");
}
