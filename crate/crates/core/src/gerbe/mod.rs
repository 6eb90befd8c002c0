//! Gerbe local data (φ, K, β) in the skeletal model, where every fiber is the
//! one-object groupoid with arrows G, connection functors are automorphisms and
//! natural transformations are group elements.
//!
//! K is stored per ascending triangle as the value K_[abca] at the smallest
//! vertex; the reversed orientation reads as the inverse and another base x
//! reads φ_{x,min}(K). β is stored the same way and rebased by φ-conjugation.
//! Degenerate loops [x z z x] carry their own K, keyed by the directed edge.

mod gauge;
mod transport;

use std::collections::BTreeMap;

pub use gauge::{gauge_transform_linear, GaugeOutcome, GerbeGauge};
pub use transport::{run_word, sweep_backtrack, sweep_section, sweep_step, word_value, SectionData};

use crate::bundle::BundleData;
use crate::cochain::{
    cocycle_residual_linear, nu_component, omega_component, sorted, Cochain, Cochain1Der, Cochain2Alg,
    Cochain2Der,
};
use crate::error::{Error, Result};
use crate::liegroup::{Automorphism, Derivation, Group, GroupElement};
use crate::pathspace::{face_scheme_words, tetra_sweep_word};
use crate::simplicial::SimplicialComplex;

#[derive(Debug, Clone, PartialEq)]
pub struct GerbeData {
    group: Group,
    phi: Cochain<2, Automorphism>,
    k: Cochain<3, GroupElement>,
    k_degenerate: BTreeMap<(usize, usize), GroupElement>,
    beta: Cochain<3, Automorphism>,
}

/// Infinitesimal data: φ = 1 + μ, K = 1 + B.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearGerbeData {
    pub mu: Cochain1Der,
    pub b: Cochain2Alg,
}

/// Rotation of (x, y, z) that starts at the smallest vertex.
fn rotate_to_min([x, y, z]: [usize; 3]) -> [usize; 3] {
    if x < y && x < z {
        [x, y, z]
    } else if y < z {
        [y, z, x]
    } else {
        [z, x, y]
    }
}

impl GerbeData {
    /// Builds gerbe data from φ and K, deriving β_xyzx = C_xyzx·Ad(K_[xzyx]).
    pub fn new(group: Group, phi: Cochain<2, Automorphism>, k: Cochain<3, GroupElement>) -> Result<Self> {
        if let Some((cell, g)) = k.iter().find(|(_, g)| g.group() != group) {
            return Err(Error::GroupMismatch {
                expected: group.to_string(),
                found: format!("{} on {:?}", g.group(), cell),
            });
        }
        let mut out = Self { group, phi, k, k_degenerate: BTreeMap::new(), beta: Cochain::new() };
        out.rederive_beta()?;
        Ok(out)
    }

    /// Recomputes the stored β from φ and K.
    pub fn rederive_beta(&mut self) -> Result<()> {
        let mut beta = Cochain::new();
        for (t, _) in self.k.iter() {
            let [a, b, c] = *t;
            let value = self.holonomy_c(a, b, c)?.compose(&self.k_loop(a, c, b)?.adjoint());
            beta.insert_canonical(*t, value)?;
        }
        self.beta = beta;
        Ok(())
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn phi_cochain(&self) -> &Cochain<2, Automorphism> {
        &self.phi
    }

    pub fn k_cochain(&self) -> &Cochain<3, GroupElement> {
        &self.k
    }

    pub fn beta_cochain(&self) -> &Cochain<3, Automorphism> {
        &self.beta
    }

    pub fn degenerate_k(&self) -> &BTreeMap<(usize, usize), GroupElement> {
        &self.k_degenerate
    }

    /// Replaces the stored β on one ascending triangle.
    pub fn set_beta(&mut self, cell: [usize; 3], value: Automorphism) -> Result<()> {
        self.beta.insert_canonical(cell, value)
    }

    /// Replaces K on one ascending triangle. β is not rederived.
    pub fn set_k(&mut self, cell: [usize; 3], value: GroupElement) -> Result<()> {
        self.k.insert_canonical(cell, value)
    }

    /// Sets K on the degenerate loop [x z z x].
    pub fn set_degenerate_k(&mut self, x: usize, z: usize, value: GroupElement) -> Result<()> {
        if x == z {
            return Err(Error::MalformedCell(vec![x, z]));
        }
        self.k_degenerate.insert((x, z), value);
        Ok(())
    }

    /// Triangles carrying K values.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        self.k.iter().map(|(t, _)| *t).collect()
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        self.phi.iter().map(|(e, _)| *e).collect()
    }

    /// φ_xy, with φ_yx = φ_xy⁻¹ and φ_xx = 1.
    pub fn phi(&self, x: usize, y: usize) -> Result<Automorphism> {
        if x == y {
            return Ok(Automorphism::identity());
        }
        let v = self.phi.canonical(&sorted([x, y])).ok_or_else(|| Error::IncompleteField(vec![x, y]))?;
        Ok(if x < y { *v } else { v.inverse() })
    }

    /// C_xyzx = φ_xy φ_yz φ_zx.
    pub fn holonomy_c(&self, x: usize, y: usize, z: usize) -> Result<Automorphism> {
        Ok(self.phi(x, y)?.compose(&self.phi(y, z)?).compose(&self.phi(z, x)?))
    }

    /// K_[x z y x] at base x (also the value of K_[xzy]).
    pub fn k_loop(&self, x: usize, z: usize, y: usize) -> Result<GroupElement> {
        if x == z || z == y || x == y {
            let key = if z != x { (x, z) } else { (x, y) };
            if key.0 == key.1 {
                return Ok(GroupElement::identity(self.group));
            }
            return Ok(self.k_degenerate.get(&key).copied().unwrap_or(GroupElement::identity(self.group)));
        }
        let r = rotate_to_min([x, z, y]);
        let stored = self.k.canonical(&sorted(r)).ok_or_else(|| Error::IncompleteField(vec![x, z, y]))?;
        let at_min = if r[1] < r[2] { *stored } else { stored.inverse() };
        if x == r[0] {
            Ok(at_min)
        } else {
            Ok(self.phi(x, r[0])?.apply_group(&at_min))
        }
    }

    /// β_[x y z x] at base x.
    pub fn beta(&self, x: usize, y: usize, z: usize) -> Result<Automorphism> {
        if x == y || y == z || x == z {
            return Ok(self.k_loop(x, z, y)?.adjoint());
        }
        let r = rotate_to_min([x, y, z]);
        let stored = self.beta.canonical(&sorted(r)).ok_or_else(|| Error::IncompleteField(vec![x, y, z]))?;
        let at_min = if r[1] < r[2] { *stored } else { stored.inverse() };
        if x == r[0] {
            Ok(at_min)
        } else {
            Ok(self.phi(x, r[0])?.compose(&at_min).compose(&self.phi(r[0], x)?))
        }
    }

    /// ‖β_xyzx ∘ β_xzyx − 1‖.
    pub fn beta_inverse_defect(&self, x: usize, y: usize, z: usize) -> Result<f64> {
        Ok(self.beta(x, y, z)?.compose(&self.beta(x, z, y)?).distance_to_identity())
    }

    /// φ = Ad f, K ≡ 1, β = Ad c. Satisfies every gerbe identity exactly.
    pub fn bundle_induced(bundle: &BundleData, complex: &SimplicialComplex) -> Result<Self> {
        let group = bundle.group();
        let mut phi = Cochain::new();
        for (e, f) in bundle.f.values.iter() {
            phi.insert_canonical(*e, f.adjoint())?;
        }
        let mut k = Cochain::new();
        let mut beta = Cochain::new();
        for t in complex.cells(2) {
            let key = [t[0], t[1], t[2]];
            k.insert_canonical(key, GroupElement::identity(group))?;
            beta.insert_canonical(key, bundle.curvature_loop(t[0], t[1], t[2])?.adjoint())?;
        }
        Ok(Self { group, phi, k, k_degenerate: BTreeMap::new(), beta })
    }

    /// φ = Ad f, K = c, so that β ≡ 1. Another exact fixture.
    pub fn curvature_gerbe(bundle: &BundleData, complex: &SimplicialComplex) -> Result<Self> {
        let group = bundle.group();
        let mut phi = Cochain::new();
        for (e, f) in bundle.f.values.iter() {
            phi.insert_canonical(*e, f.adjoint())?;
        }
        let mut k = Cochain::new();
        for t in complex.cells(2) {
            k.insert_canonical([t[0], t[1], t[2]], bundle.curvature_loop(t[0], t[1], t[2])?)?;
        }
        Self::new(group, phi, k)
    }

    pub fn trivial(complex: &SimplicialComplex, group: Group) -> Result<Self> {
        Self::bundle_induced(&BundleData::trivial(complex, group), complex)
    }

    /// φ = exp μ (through Ad exp of its inner part), K = exp B.
    pub fn from_linear(group: Group, lin: &LinearGerbeData) -> Result<Self> {
        let mut phi = Cochain::new();
        for (e, m) in lin.mu.iter() {
            phi.insert_canonical(*e, Automorphism::from_algebra(group, &m.inner_part()))?;
        }
        let mut k = Cochain::new();
        for (t, b) in lin.b.iter() {
            k.insert_canonical(*t, GroupElement::exp(group, b))?;
        }
        Self::new(group, phi, k)
    }

    /// μ = log φ, B = log K on the stored cells.
    pub fn linearize(&self) -> Result<LinearGerbeData> {
        let mut mu = Cochain1Der::new();
        for (e, p) in self.phi.iter() {
            mu.insert_canonical(*e, p.log()?)?;
        }
        let mut b = Cochain2Alg::new();
        for (t, k) in self.k.iter() {
            b.insert_canonical(*t, k.log()?)?;
        }
        Ok(LinearGerbeData { mu, b })
    }

    /// ν on every stored triangle (ascending orientation).
    pub fn fake_curvature(&self) -> Result<Cochain2Der> {
        let lin = self.linearize()?;
        let mut nu = Cochain2Der::new();
        for t in self.triangles() {
            nu.insert_canonical(t, nu_component(&lin.mu, &lin.b, t)?)?;
        }
        Ok(nu)
    }

    /// ‖(β_xyzx − 1) − ν_xyzx‖ on one loop.
    pub fn beta_expansion_defect(&self, lin: &LinearGerbeData, [x, y, z]: [usize; 3]) -> Result<f64> {
        let beta = self.beta(x, y, z)?;
        let nu = nu_component(&lin.mu, &lin.b, [x, y, z])?;
        Ok((beta.matrix() - nalgebra::Matrix3::identity() - nu.matrix()).norm())
    }

    /// Ω for the sweep ⟨v w x y v⟩:
    /// K_[vwxv] · K_[vxyv] · φ_vy(K_[ywxy]⁻¹) · K_[vwyv]⁻¹.
    pub fn omega_group(&self, [v, w, x, y]: [usize; 4]) -> Result<GroupElement> {
        let k1 = self.k_loop(v, w, x)?;
        let k2 = self.k_loop(v, x, y)?;
        let k3 = self.phi(v, y)?.apply_group(&self.k_loop(y, w, x)?.inverse());
        let k4 = self.k_loop(v, w, y)?.inverse();
        Ok(k1 * k2 * k3 * k4)
    }

    /// Ω obtained by transporting a section along the tetrahedron sweep word.
    pub fn omega_transport(&self, tetra: [usize; 4]) -> Result<GroupElement> {
        word_value(self, &tetra_sweep_word(tetra, None)?)
    }

    /// Values of the five pasting schemes F1..F5 on the ordered 4-cell.
    pub fn face_scheme_values(&self, cell: [usize; 5]) -> Result<[GroupElement; 5]> {
        let words = face_scheme_words(cell, None)?;
        let mut out = [GroupElement::identity(self.group); 5];
        for (slot, w) in out.iter_mut().zip(words.iter()) {
            *slot = word_value(self, w)?;
        }
        Ok(out)
    }

    /// F5⁻¹·(F1·F2·F3·F4) on the ordered 4-cell.
    pub fn cocycle_defect_group(&self, cell: [usize; 5]) -> Result<GroupElement> {
        let f = self.face_scheme_values(cell)?;
        Ok(f[4].inverse() * f[0] * f[1] * f[2] * f[3])
    }

    /// Largest of the two naturality defects on the triangle (x, z, y) for the sample u:
    /// φ_xy(u)∘K_[xzy] = K_[xzy]∘φ_xz φ_zy β_yzxy(u) and u∘K_[xzyx] = K_[xzyx]∘C_xzyx β_xyzx(u).
    pub fn naturality_defect(&self, [x, z, y]: [usize; 3], u: &GroupElement) -> Result<f64> {
        let k = self.k_loop(x, z, y)?;
        // arrow composition a∘b is the product b·a
        let lhs3 = k * self.phi(x, y)?.apply_group(u);
        let twist3 = self.phi(x, z)?.compose(&self.phi(z, y)?).compose(&self.beta(y, z, x)?);
        let rhs3 = twist3.apply_group(u) * k;
        let lhs4 = k * *u;
        let twist4 = self.holonomy_c(x, z, y)?.compose(&self.beta(x, y, z)?);
        let rhs4 = twist4.apply_group(u) * k;
        let d3 = (lhs3 * rhs3.inverse()).distance_to_identity();
        let d4 = (lhs4 * rhs4.inverse()).distance_to_identity();
        Ok(d3.max(d4))
    }

    /// Degenerate loops [x z z x] whose K (hence β) deviates from the identity.
    pub fn zigzag_check(&self, tol: f64) -> Vec<ZigzagViolation> {
        let mut out = Vec::new();
        for e in self.edges() {
            for (x, z) in [(e[0], e[1]), (e[1], e[0])] {
                let k = self.k_degenerate.get(&(x, z)).copied().unwrap_or(GroupElement::identity(self.group));
                let deviation = k.distance_to_identity();
                if deviation > tol {
                    out.push(ZigzagViolation { x, z, deviation });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZigzagViolation {
    pub x: usize,
    pub z: usize,
    pub deviation: f64,
}

impl LinearGerbeData {
    /// ν on an ordered triangle.
    pub fn nu(&self, t: [usize; 3]) -> Result<Derivation> {
        nu_component(&self.mu, &self.b, t)
    }

    /// ω for the sweep ⟨v w x y v⟩.
    pub fn omega(&self, sweep: [usize; 4]) -> Result<crate::liegroup::AlgebraElement> {
        omega_component(&self.mu, &self.b, sweep)
    }

    pub fn cocycle_residual(&self, cell: [usize; 5]) -> Result<crate::liegroup::AlgebraElement> {
        cocycle_residual_linear(&self.mu, &self.b, cell)
    }
}
