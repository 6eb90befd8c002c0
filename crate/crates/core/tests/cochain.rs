mod common;

use common::{fit_slope, EPS};
use gerbekit::bundle::log_curvature;
use gerbekit::cochain::*;
use gerbekit::liegroup::*;
use gerbekit::sample::{amplitude_linear_gerbe, smooth_bundle, smooth_linear_gerbe, Embedding, PolynomialForm};
use gerbekit::simplicial::{permutation_sign, SimplicialComplex};
use nalgebra::Matrix3;

fn delta(n: usize) -> SimplicialComplex {
    SimplicialComplex::standard_simplex(n).unwrap()
}

fn zero_mu(c: &SimplicialComplex) -> Cochain1Der {
    Cochain1Der::from_fn(&c.cells(1), |_| Derivation::zero())
}

fn random_a(c: &SimplicialComplex, seed: u64, scale: f64) -> Cochain1Alg {
    let mut rng = rng_from_seed(seed);
    Cochain1Alg::from_fn(&c.cells(1), |_| random_algebra(&mut rng, scale))
}

fn random_b(c: &SimplicialComplex, seed: u64, scale: f64) -> Cochain2Alg {
    let mut rng = rng_from_seed(seed);
    Cochain2Alg::from_fn(&c.cells(2), |_| random_algebra(&mut rng, scale))
}

/// Mean over seeds of a per-sample size, for each scale of the shared grid.
fn mean_over_seeds(seeds: u64, mut f: impl FnMut(u64, f64) -> f64) -> Vec<f64> {
    EPS.iter().map(|&h| (0..seeds).map(|s| f(s, h)).sum::<f64>() / seeds as f64).collect()
}

#[test]
fn cochain_reversal_and_storage() {
    let c = delta(2);
    let a = random_a(&c, 1, 1.0);
    assert_eq!(a.get([1, 0]).unwrap(), -a.get([0, 1]).unwrap());
    let b = random_b(&c, 2, 1.0);
    let b012 = b.get([0, 1, 2]).unwrap();
    assert_eq!(b.get([1, 2, 0]).unwrap(), b012);
    assert_eq!(b.get([0, 2, 1]).unwrap(), -b012);
    assert!(a.get([0, 5]).is_err());
    let mut x = Cochain1Alg::new();
    x.insert([2, 1], AlgebraElement::basis(0)).unwrap();
    assert_eq!(x.canonical(&[1, 2]).unwrap(), &(-AlgebraElement::basis(0)));
}

#[test]
fn group_cochains_invert_on_reversal() {
    let mut rng = rng_from_seed(3);
    let mut f = Cochain1G::new(Group::Su2);
    let g = random_group(&mut rng, Group::Su2);
    f.insert(1, 0, g).unwrap();
    assert!(f.get(0, 1).unwrap().distance(&g.inverse()) < 1e-15);
    assert!(f.get(1, 0).unwrap().distance(&g) < 1e-15);
    assert!(f.get(0, 2).is_err());
}

#[test]
fn d1_examples() {
    let c = delta(2);
    let zero = Cochain1Alg::from_fn(&c.cells(1), |_| AlgebraElement::zero());
    assert_eq!(d1(&zero, [0, 1, 2]).unwrap().norm(), 0.0);
    // A = dλ is closed
    let lambda = [AlgebraElement::basis(0), AlgebraElement::basis(1).scale(2.0), AlgebraElement::basis(2)];
    let exact = Cochain1Alg::from_fn(&c.cells(1), |[x, y]| lambda[y] - lambda[x]);
    assert!(d1(&exact, [0, 1, 2]).unwrap().norm() < 1e-15);
    let a = random_a(&c, 4, 1.0);
    let by_hand = a.get([0, 1]).unwrap() + a.get([1, 2]).unwrap() - a.get([0, 2]).unwrap();
    assert!((d1(&a, [0, 1, 2]).unwrap() - by_hand).norm() < 1e-15);
    assert!((d1(&a, [0, 2, 1]).unwrap() + by_hand).norm() < 1e-15);
}

#[test]
fn curvature_expansion_is_exact() {
    let c = delta(2);
    for group in Group::ALL {
        let a = random_a(&c, 5, 0.3);
        let m = |x: usize, y: usize| a.get([x, y]).unwrap().matrix(group);
        let n = m(0, 1).nrows();
        let one = nalgebra::DMatrix::<num_complex::Complex64>::identity(n, n);
        let product = (&one + m(0, 1)) * (&one + m(1, 2)) * (&one + m(2, 0)) - &one;
        let parts = d1(&a, [0, 1, 2]).unwrap().matrix(group)
            + curvature_quadratic(group, &a, [0, 1, 2]).unwrap()
            + curvature_cubic(group, &a, [0, 1, 2]).unwrap();
        assert!((product - parts).norm() < 1e-14);
    }
}

#[test]
fn curvature_quadratic_is_homogeneous() {
    let c = delta(2);
    let a = random_a(&c, 6, 1.0);
    let eps = 0.01;
    let small = a.map(|_, x| x.scale(eps));
    for group in Group::ALL {
        let q = curvature_quadratic(group, &a, [0, 1, 2]).unwrap();
        let qs = curvature_quadratic(group, &small, [0, 1, 2]).unwrap();
        assert!((qs - q * num_complex::Complex64::new(eps * eps, 0.0)).norm() < 1e-16);
    }
}

#[test]
fn bianchi_vanishes_for_zero_connection() {
    let c = delta(3);
    let a = Cochain1Alg::from_fn(&c.cells(1), |_| AlgebraElement::zero());
    let f = Cochain2Alg::from_fn(&c.cells(2), |_| AlgebraElement::zero());
    assert_eq!(bianchi_residual_linear(&a, &f, [0, 1, 2, 3]).unwrap().norm(), 0.0);
}

#[test]
fn bianchi_residual_smooth_slope() {
    let c = delta(3);
    let ys = mean_over_seeds(5, |s, h| {
        let (bundle, a) = smooth_bundle(&c, Group::Su2, h, &mut rng_from_seed(s)).unwrap();
        let f = log_curvature(&bundle, &c).unwrap();
        bianchi_residual_linear(&a, &f, [0, 1, 2, 3]).unwrap().norm()
    });
    let slope = fit_slope(&EPS, &ys);
    assert!(slope >= 3.8, "slope {slope}");
}

#[test]
fn nu_zero_and_reversal() {
    let c = delta(2);
    let b0 = Cochain2Alg::from_fn(&c.cells(2), |_| AlgebraElement::zero());
    assert_eq!(nu_component(&zero_mu(&c), &b0, [0, 1, 2]).unwrap().norm(), 0.0);
    let b = random_b(&c, 7, 1.0);
    let n = nu_component(&zero_mu(&c), &b, [0, 1, 2]).unwrap();
    let r = nu_component(&zero_mu(&c), &b, [0, 2, 1]).unwrap();
    assert!((n + r).norm() < 1e-15);
    assert!((n + Derivation::ad(&b.get([0, 1, 2]).unwrap())).norm() < 1e-15);
}

#[test]
fn nu_of_inner_connection_is_ad_of_curvature() {
    // P(ad X ad Y) = ½ ad[X,Y], so for μ = ad A and B = 0 the fake curvature is ad of
    // A_ab + A_bc − A_ac + ½[A_ab, A_bc].
    let c = delta(2);
    let a = random_a(&c, 8, 0.5);
    let mu = a.map(|_, x| Derivation::ad(x));
    let b0 = Cochain2Alg::from_fn(&c.cells(2), |_| AlgebraElement::zero());
    let (ab, bc, ac) = (a.get([0, 1]).unwrap(), a.get([1, 2]).unwrap(), a.get([0, 2]).unwrap());
    let oracle = Derivation::ad(&(ab + bc - ac + ab.bracket(&bc).scale(0.5)));
    assert!((nu_component(&mu, &b0, [0, 1, 2]).unwrap() - oracle).norm() < 1e-14);
}

#[test]
fn omega_of_exact_two_form_vanishes() {
    let c = delta(3);
    let lambda = random_a(&c, 9, 1.0);
    let b = Cochain2Alg::from_fn(&c.cells(2), |[x, y, z]| {
        lambda.get([x, y]).unwrap() + lambda.get([y, z]).unwrap() + lambda.get([z, x]).unwrap()
    });
    let mu = zero_mu(&c);
    for cell in [[0, 1, 2, 3], [2, 0, 3, 1], [3, 2, 1, 0]] {
        assert!(omega_cell(&mu, &b, cell).unwrap().norm() < 1e-14);
        assert!(omega_component(&mu, &b, cell).unwrap().norm() < 1e-14);
    }
}

#[test]
fn omega_component_on_ascending_cells_matches_cell_form() {
    let c = delta(3);
    let mut rng = rng_from_seed(10);
    let mu = Cochain1Der::from_fn(&c.cells(1), |_| random_derivation(&mut rng, 0.3));
    let b = random_b(&c, 11, 0.3);
    // the sweep <0 1 2 3 0> covers (0,1,3,2); every face is read at its own minimum
    let lhs = omega_component(&mu, &b, [0, 1, 2, 3]).unwrap();
    let rhs = omega_cell(&mu, &b, [0, 1, 3, 2]).unwrap();
    assert!((lhs - rhs).norm() < 1e-14);
}

#[test]
fn cocycle_residual_zero_for_flat_data() {
    let c = delta(4);
    let mut rng = rng_from_seed(12);
    let mu = Cochain1Der::from_fn(&c.cells(1), |_| random_derivation(&mut rng, 0.3));
    let b0 = Cochain2Alg::from_fn(&c.cells(2), |_| AlgebraElement::zero());
    assert_eq!(cocycle_residual_linear(&mu, &b0, [0, 1, 2, 3, 4]).unwrap().norm(), 0.0);
}

#[test]
fn cocycle_residual_smooth_slope() {
    let c = delta(4);
    let ys = mean_over_seeds(5, |s, h| {
        let lin = smooth_linear_gerbe(&c, h, &mut rng_from_seed(s));
        cocycle_residual_linear(&lin.mu, &lin.b, [0, 1, 2, 3, 4]).unwrap().norm()
    });
    let slope = fit_slope(&EPS, &ys);
    assert!(slope >= 4.8, "slope {slope}");
}

#[test]
fn cocycle_residual_amplitude_regime_stalls_at_four() {
    // independent per-cell amplitudes μ ~ ε, B ~ ε² carry no smoothness, so the
    // alternated residual only reaches the order of its terms
    let c = delta(4);
    let ys = mean_over_seeds(5, |s, eps| {
        let lin = amplitude_linear_gerbe(&c, eps, &mut rng_from_seed(s));
        cocycle_residual_linear(&lin.mu, &lin.b, [0, 1, 2, 3, 4]).unwrap().norm()
    });
    let slope = fit_slope(&EPS, &ys);
    assert!((slope - 4.0).abs() < 0.1, "slope {slope}");
}

/// (1/120) Σ sgn σ P(σ₀σ₁σ₂)·Q(σ₂σ₃σ₄) with permutations from Heap's algorithm.
fn cup_oracle(p: &Cochain2Der, q: &Cochain2Alg, cell: [usize; 5]) -> AlgebraElement {
    let mut perm = cell;
    let mut counters = [0usize; 5];
    let mut acc = AlgebraElement::zero();
    let mut visit = |v: &[usize; 5]| {
        let s = permutation_sign(v) as f64;
        let pv = p.get([v[0], v[1], v[2]]).unwrap();
        acc += pv.apply(&q.get([v[2], v[3], v[4]]).unwrap()).scale(s / 120.0);
    };
    visit(&perm);
    let mut i = 1;
    while i < 5 {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            visit(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    acc
}

#[test]
fn cup_pair_matches_brute_force_and_is_bilinear() {
    let c = delta(4);
    let mut rng = rng_from_seed(13);
    let p = Cochain2Der::from_fn(&c.cells(2), |_| random_derivation(&mut rng, 1.0));
    let q = random_b(&c, 14, 1.0);
    let q2 = random_b(&c, 15, 1.0);
    let cell = [0, 1, 2, 3, 4];
    let cup = |q: &Cochain2Alg| cup_pair_22(|t| p.get(t), |t| q.get(t), cell).unwrap();
    assert!((cup(&q) - cup_oracle(&p, &q, cell)).norm() < 1e-14);
    let sum = Cochain2Alg::from_fn(&c.cells(2), |[x, y, z]| {
        q.get([x, y, z]).unwrap().scale(2.0) + q2.get([x, y, z]).unwrap()
    });
    assert!((cup(&sum) - (cup(&q).scale(2.0) + cup(&q2))).norm() < 1e-13);
    // odd permutation of the cell flips the sign
    let swapped = cup_pair_22(|t| p.get(t), |t| q.get(t), [1, 0, 2, 3, 4]).unwrap();
    assert!((swapped + cup(&q)).norm() < 1e-14);
    let tr = cup_pair_22_trace(|t| p.get(t), |t| q.get(t), cell).unwrap();
    let mut tr_oracle = 0.0;
    for (perm, s) in signed_permutations(5) {
        let v: Vec<usize> = perm.iter().map(|&i| cell[i]).collect();
        let pv = p.get([v[0], v[1], v[2]]).unwrap();
        let qv = Derivation::ad(&q.get([v[2], v[3], v[4]]).unwrap());
        tr_oracle += s / 120.0 * (0..3).map(|i| (0..3).map(|k| pv.0[(i, k)] * qv.0[(k, i)]).sum::<f64>()).sum::<f64>();
    }
    common::assert_close(tr, tr_oracle, 1e-14);
}

#[test]
fn signed_permutations_are_complete() {
    let perms = signed_permutations(4);
    assert_eq!(perms.len(), 24);
    assert_eq!(perms.iter().map(|(_, s)| s).sum::<f64>(), 0.0);
    assert_eq!(perms[0], (vec![0, 1, 2, 3], 1.0));
    assert_eq!(perms[1], (vec![0, 1, 3, 2], -1.0));
}

#[test]
fn nabla_reduces_to_coboundary() {
    let c = delta(3);
    let mut rng = rng_from_seed(16);
    let xi: Vec<Derivation> = (0..4).map(|_| random_derivation(&mut rng, 1.0)).collect();
    let mu = Cochain1Der::from_fn(&c.cells(1), |_| random_derivation(&mut rng, 1.0));
    let zero_xi = vec![Derivation::zero(); 4];
    assert_eq!(nabla_xi(&mu, &zero_xi, 0, 1).unwrap().norm(), 0.0);
    let flat = zero_mu(&c);
    assert!((nabla_xi(&flat, &xi, 0, 1).unwrap() - (xi[1] - xi[0])).norm() < 1e-15);
    let eta = random_a(&c, 17, 1.0);
    assert!((nabla_eta(&flat, &eta, [0, 1, 2]).unwrap() - d1(&eta, [0, 1, 2]).unwrap()).norm() < 1e-15);
    // ∇ of a coboundary has zero coboundary when μ = 0
    let nxi = Cochain1Der::from_fn(&c.cells(1), |[x, y]| nabla_xi(&flat, &xi, x, y).unwrap());
    assert!(nabla2_xi(&flat, &nxi, [0, 1, 2]).unwrap().norm() < 1e-15);
    let neta = Cochain2Alg::from_fn(&c.cells(2), |t| nabla_eta(&flat, &eta, t).unwrap());
    assert!(nabla2_eta(&flat, &neta, [0, 1, 2, 3]).unwrap().norm() < 1e-14);
    // missing vertex
    assert!(nabla_xi(&mu, &xi[..2], 0, 3).is_err());
}

#[test]
fn nabla_squared_xi_is_curvature_commutator() {
    // for smooth fields the projected ∇²ξ agrees with [F, ξ] one order beyond its size
    let c = delta(2);
    let (mut sizes, mut defects) = (vec![], vec![]);
    for &h in &EPS {
        let (mut size, mut defect) = (0.0, 0.0);
        for s in 0..5 {
            let mut rng = rng_from_seed(100 + s);
            let emb = Embedding::random(&mut rng, 3, 2, h);
            let m = PolynomialForm::random(&mut rng, 2, 1);
            let x = PolynomialForm::random(&mut rng, 2, 0);
            let mu = emb.one_form(&c, &m).map(|_, v| Derivation::ad(v));
            let xi: Vec<Derivation> = emb.points.iter().map(|p| Derivation::ad(&x.eval0(p))).collect();
            let nxi = Cochain1Der::from_fn(&c.cells(1), |[a, b]| nabla_xi(&mu, &xi, a, b).unwrap());
            let n2 = nabla2_xi(&mu, &nxi, [0, 1, 2]).unwrap();
            let b0 = Cochain2Alg::from_fn(&c.cells(2), |_| AlgebraElement::zero());
            let f = nu_component(&mu, &b0, [0, 1, 2]).unwrap().0;
            let comm: Matrix3<f64> = f * xi[0].0 - xi[0].0 * f;
            size += n2.norm();
            defect += (Derivation::project(&n2.0).0 - comm).norm();
        }
        sizes.push(size);
        defects.push(defect);
    }
    let (s_size, s_def) = (fit_slope(&EPS, &sizes), fit_slope(&EPS, &defects));
    assert!((s_size - 2.0).abs() < 0.2, "size slope {s_size}");
    assert!(s_def >= 2.8, "defect slope {s_def}");
}
