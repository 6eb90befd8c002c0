//! Random field fixtures.
//!
//! Two regimes are provided. The smooth regime draws random polynomial forms on
//! R^D and integrates them over a simplex of diameter ~h, so that an edge value
//! is O(h), a triangle value O(h²), and the discrete identities close order by
//! order as h → 0. The amplitude regime scales independent random values per
//! cell by powers of ε.

use nalgebra::{DVector, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bundle::BundleData;
use crate::cochain::{Cochain1Alg, Cochain1Der, Cochain2Alg};
use crate::error::Result;
use crate::gerbe::{GerbeGauge, LinearGerbeData};
use crate::liegroup::{AlgebraElement, Derivation, Group};
use crate::simplicial::SimplicialComplex;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn normal3<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    Vector3::new(normal(rng), normal(rng), normal(rng))
}

/// Algebra-valued k-form on R^D with quadratic polynomial coefficients.
#[derive(Debug, Clone)]
pub struct PolynomialForm {
    dim: usize,
    components: Vec<Vec<usize>>,
    constant: Vec<Vector3<f64>>,
    linear: Vec<Vec<Vector3<f64>>>,
    quadratic: Vec<Vec<Vec<Vector3<f64>>>>,
}

fn index_sets(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    match degree {
        0 => vec![vec![]],
        1 => (0..dim).map(|i| vec![i]).collect(),
        2 => (0..dim).flat_map(|i| (i + 1..dim).map(move |j| vec![i, j])).collect(),
        _ => panic!("forms of degree above 2 are not needed"),
    }
}

impl PolynomialForm {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, degree: usize) -> Self {
        let components = index_sets(dim, degree);
        let n = components.len();
        let constant = (0..n).map(|_| normal3(rng)).collect();
        let linear = (0..n).map(|_| (0..dim).map(|_| normal3(rng)).collect()).collect();
        let quadratic = (0..n)
            .map(|_| (0..dim).map(|_| (0..dim).map(|_| normal3(rng) * 0.5).collect()).collect())
            .collect();
        Self { dim, components, constant, linear, quadratic }
    }

    fn value(&self, p: &DVector<f64>, comp: usize) -> Vector3<f64> {
        let mut v = self.constant[comp];
        for i in 0..self.dim {
            v += self.linear[comp][i] * p[i];
            for j in 0..self.dim {
                v += self.quadratic[comp][i][j] * (p[i] * p[j]);
            }
        }
        v
    }

    /// Value of a 0-form at a point.
    pub fn eval0(&self, p: &DVector<f64>) -> AlgebraElement {
        AlgebraElement(self.value(p, 0))
    }

    /// Integral of a 1-form over the segment a → b (two-point Gauss, exact here).
    pub fn integrate1(&self, a: &DVector<f64>, b: &DVector<f64>) -> AlgebraElement {
        let u = b - a;
        let g = 0.5 - 0.5 / 3f64.sqrt();
        let mut tot = Vector3::zeros();
        for t in [g, 1.0 - g] {
            let p = a + &u * t;
            for (n, idx) in self.components.iter().enumerate() {
                tot += self.value(&p, n) * (0.5 * u[idx[0]]);
            }
        }
        AlgebraElement(tot)
    }

    /// Integral of a 2-form over the oriented triangle (a, b, c), degree-2 exact rule.
    pub fn integrate2(&self, a: &DVector<f64>, b: &DVector<f64>, c: &DVector<f64>) -> AlgebraElement {
        let (u, v) = (b - a, c - a);
        let mut tot = Vector3::zeros();
        for (s, t) in [(1.0 / 6.0, 1.0 / 6.0), (2.0 / 3.0, 1.0 / 6.0), (1.0 / 6.0, 2.0 / 3.0)] {
            let p = a + &u * s + &v * t;
            for (n, idx) in self.components.iter().enumerate() {
                let (i, j) = (idx[0], idx[1]);
                tot += self.value(&p, n) * ((u[i] * v[j] - u[j] * v[i]) / 6.0);
            }
        }
        AlgebraElement(tot)
    }
}

/// Vertices of a complex placed at h·Q/√D for standard Gaussian Q in R^D, so
/// edges have length about h·√2 whatever the dimension.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub dim: usize,
    pub points: Vec<DVector<f64>>,
}

impl Embedding {
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n_vertices: usize, dim: usize, h: f64) -> Self {
        let s = h / (dim as f64).sqrt();
        let points = (0..n_vertices).map(|_| DVector::from_fn(dim, |_, _| normal(rng) * s)).collect();
        Self { dim, points }
    }

    pub fn one_form(&self, complex: &SimplicialComplex, form: &PolynomialForm) -> Cochain1Alg {
        Cochain1Alg::from_fn(&complex.cells(1), |[x, y]| form.integrate1(&self.points[x], &self.points[y]))
    }

    pub fn two_form(&self, complex: &SimplicialComplex, form: &PolynomialForm) -> Cochain2Alg {
        Cochain2Alg::from_fn(&complex.cells(2), |[x, y, z]| {
            form.integrate2(&self.points[x], &self.points[y], &self.points[z])
        })
    }
}

fn embedding_dim(complex: &SimplicialComplex) -> usize {
    complex.n_vertices().saturating_sub(1).max(1)
}

/// Smooth-regime bundle: f = exp(∫a) for a random 1-form a on a simplex of size h.
/// Returns the bundle and A = ∫a.
pub fn smooth_bundle<R: Rng + ?Sized>(
    complex: &SimplicialComplex,
    group: Group,
    h: f64,
    rng: &mut R,
) -> Result<(BundleData, Cochain1Alg)> {
    let dim = embedding_dim(complex);
    let emb = Embedding::random(rng, complex.n_vertices(), dim, h);
    let a = emb.one_form(complex, &PolynomialForm::random(rng, dim, 1));
    Ok((BundleData::from_algebra(complex, group, &a)?, a))
}

/// Smooth-regime linear gerbe data: μ = ad ∫m, B = ∫b.
pub fn smooth_linear_gerbe<R: Rng + ?Sized>(complex: &SimplicialComplex, h: f64, rng: &mut R) -> LinearGerbeData {
    let dim = embedding_dim(complex);
    let emb = Embedding::random(rng, complex.n_vertices(), dim, h);
    let m = PolynomialForm::random(rng, dim, 1);
    let b = PolynomialForm::random(rng, dim, 2);
    let mu = emb.one_form(complex, &m).map(|_, x| Derivation::ad(x));
    LinearGerbeData { mu, b: emb.two_form(complex, &b) }
}

/// Amplitude-regime data: μ = ε·ad(m), B = ε²·b with standard normal m, b per cell.
pub fn amplitude_linear_gerbe<R: Rng + ?Sized>(complex: &SimplicialComplex, eps: f64, rng: &mut R) -> LinearGerbeData {
    let mu = Cochain1Der::from_fn(&complex.cells(1), |_| Derivation::ad(&AlgebraElement(normal3(rng) * eps)));
    let b = Cochain2Alg::from_fn(&complex.cells(2), |_| AlgebraElement(normal3(rng) * (eps * eps)));
    LinearGerbeData { mu, b }
}

/// Gauge parameters of size δ: ξ_x = δ·ad(normal), η_xy = δ·normal.
pub fn amplitude_gauge<R: Rng + ?Sized>(complex: &SimplicialComplex, delta: f64, rng: &mut R) -> GerbeGauge {
    let xi = (0..complex.n_vertices()).map(|_| Derivation::ad(&AlgebraElement(normal3(rng) * delta))).collect();
    let eta = Cochain1Alg::from_fn(&complex.cells(1), |_| AlgebraElement(normal3(rng) * delta));
    GerbeGauge { xi, eta }
}
