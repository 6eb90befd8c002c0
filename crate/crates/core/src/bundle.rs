//! Combinatorial G-bundles with connection: holonomy, curvature, the
//! multiplicative Bianchi identity and gauge transformations.

use rand::Rng;

use crate::cochain::{Cochain1Alg, Cochain1G, Cochain2G};
use crate::error::{Error, Result};
use crate::liegroup::{random_algebra, random_group, AlgebraElement, Group, GroupElement};
use crate::pathspace::EdgePath;
use crate::simplicial::SimplicialComplex;

/// Connection f on the edges of a complex; f_yx = f_xy⁻¹ by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleData {
    pub f: Cochain1G,
}

/// Vertex-wise gauge transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleGauge {
    pub g: Vec<GroupElement>,
}

impl BundleData {
    pub fn new(f: Cochain1G) -> Self {
        Self { f }
    }

    pub fn group(&self) -> Group {
        self.f.group
    }

    pub fn trivial(complex: &SimplicialComplex, group: Group) -> Self {
        Self::from_fn(complex, group, |_, _| GroupElement::identity(group))
    }

    pub fn from_fn(
        complex: &SimplicialComplex,
        group: Group,
        mut f: impl FnMut(usize, usize) -> GroupElement,
    ) -> Self {
        let mut c = Cochain1G::new(group);
        for e in complex.cells(1) {
            c.insert(e[0], e[1], f(e[0], e[1])).expect("canonical edge");
        }
        Self { f: c }
    }

    /// Haar-random connection.
    pub fn random<R: Rng + ?Sized>(complex: &SimplicialComplex, group: Group, rng: &mut R) -> Self {
        Self::from_fn(complex, group, |_, _| random_group(rng, group))
    }

    /// f = exp(A) with A a random algebra element of size `scale` per edge.
    pub fn random_near_identity<R: Rng + ?Sized>(
        complex: &SimplicialComplex,
        group: Group,
        scale: f64,
        rng: &mut R,
    ) -> Self {
        Self::from_fn(complex, group, |_, _| GroupElement::exp(group, &random_algebra(rng, scale)))
    }

    /// f = exp(A).
    pub fn from_algebra(complex: &SimplicialComplex, group: Group, a: &Cochain1Alg) -> Result<Self> {
        let mut c = Cochain1G::new(group);
        for e in complex.cells(1) {
            c.insert(e[0], e[1], GroupElement::exp(group, &a.get([e[0], e[1]])?))?;
        }
        Ok(Self { f: c })
    }

    pub fn edge(&self, x: usize, y: usize) -> Result<GroupElement> {
        self.f.get(x, y)
    }

    /// Ordered product f_{x0x1} f_{x1x2} ⋯ along the path.
    pub fn holonomy(&self, path: &EdgePath) -> Result<GroupElement> {
        let mut h = GroupElement::identity(self.group());
        for w in path.vertices().windows(2) {
            h = h * self.edge(w[0], w[1])?;
        }
        Ok(h)
    }

    /// c_xyzx = f_xy f_yz f_zx at any base.
    pub fn curvature_loop(&self, x: usize, y: usize, z: usize) -> Result<GroupElement> {
        self.holonomy(&EdgePath::new(vec![x, y, z, x]))
    }

    /// Curvature on every triangle, at base = smallest vertex.
    pub fn curvature_c(&self, complex: &SimplicialComplex) -> Result<Cochain2G> {
        let mut c = Cochain2G::new(self.group());
        for t in complex.cells(2) {
            c.values.insert_canonical([t[0], t[1], t[2]], self.curvature_loop(t[0], t[1], t[2])?)?;
        }
        Ok(c)
    }

    /// ‖LHS·RHS⁻¹ − I‖ for c_wxyw c_wyzw c_wzxw = f_wx c_xyzx f_xw.
    pub fn mult_bianchi_defect(&self, [w, x, y, z]: [usize; 4]) -> Result<f64> {
        let c = |a, b, d| self.curvature_loop(a, b, d);
        mult_bianchi_defect_with(&self.edge(w, x)?, c(w, x, y)?, c(w, y, z)?, c(w, z, x)?, c(x, y, z)?)
    }

    /// f'_xy = g_x⁻¹ f_xy g_y.
    pub fn gauge_transform(&self, gauge: &BundleGauge) -> Result<Self> {
        let mut out = Cochain1G::new(self.group());
        for (e, f) in self.f.values.iter() {
            let gx = gauge.at(e[0])?;
            let gy = gauge.at(e[1])?;
            out.insert(e[0], e[1], gx.inverse() * *f * gy)?;
        }
        Ok(Self { f: out })
    }

    /// A = log f on every edge.
    pub fn linearize(&self) -> Result<Cochain1Alg> {
        let mut a = Cochain1Alg::new();
        for (e, f) in self.f.values.iter() {
            a.insert_canonical(*e, f.log()?)?;
        }
        Ok(a)
    }
}

/// Bianchi defect from explicit face values, for perturbation tests.
pub fn mult_bianchi_defect_with(
    f_wx: &GroupElement,
    c_wxy: GroupElement,
    c_wyz: GroupElement,
    c_wzx: GroupElement,
    c_xyz: GroupElement,
) -> Result<f64> {
    let lhs = c_wxy * c_wyz * c_wzx;
    let rhs = *f_wx * c_xyz * f_wx.inverse();
    Ok((lhs * rhs.inverse()).distance_to_identity())
}

impl BundleGauge {
    pub fn identity(n_vertices: usize, group: Group) -> Self {
        Self { g: vec![GroupElement::identity(group); n_vertices] }
    }

    pub fn random<R: Rng + ?Sized>(n_vertices: usize, group: Group, rng: &mut R) -> Self {
        Self { g: (0..n_vertices).map(|_| random_group(rng, group)).collect() }
    }

    pub fn at(&self, v: usize) -> Result<GroupElement> {
        self.g.get(v).copied().ok_or_else(|| Error::IncompleteField(vec![v]))
    }

    /// Pointwise product: acting by the result equals acting by self, then other.
    pub fn then(&self, other: &Self) -> Self {
        Self { g: self.g.iter().zip(&other.g).map(|(a, b)| *a * *b).collect() }
    }
}

/// Exact curvature F = log c on every triangle (loop at the smallest vertex).
pub fn log_curvature(b: &BundleData, complex: &SimplicialComplex) -> Result<crate::cochain::Cochain2Alg> {
    let mut out = crate::cochain::Cochain2Alg::new();
    for t in complex.cells(2) {
        let c: AlgebraElement = b.curvature_loop(t[0], t[1], t[2])?.log()?;
        out.insert_canonical([t[0], t[1], t[2]], c)?;
    }
    Ok(out)
}
