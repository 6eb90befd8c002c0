//! First-order gauge transformations of linearized gerbe data.

use crate::cochain::{
    nabla2_eta, nabla2_xi, nabla_eta, nabla_xi, nu_component, omega_cell, Cochain1Alg, Cochain1Der,
    Cochain2Alg, Cochain2Der, Cochain3Alg,
};
use crate::error::{Error, Result};
use crate::liegroup::Derivation;
use crate::simplicial::SimplicialComplex;

use super::LinearGerbeData;

/// H_x = 1 + ξ_x on vertices, H_xy = 1 + η_xy on edges.
#[derive(Debug, Clone, PartialEq)]
pub struct GerbeGauge {
    pub xi: Vec<Derivation>,
    pub eta: Cochain1Alg,
}

impl GerbeGauge {
    pub fn zero(complex: &SimplicialComplex) -> Self {
        let eta = Cochain1Alg::from_fn(&complex.cells(1), |_| crate::liegroup::AlgebraElement::zero());
        Self { xi: vec![Derivation::zero(); complex.n_vertices()], eta }
    }

    fn xi_at(&self, v: usize) -> Result<Derivation> {
        self.xi.get(v).copied().ok_or_else(|| Error::IncompleteField(vec![v]))
    }
}

/// Transformed fields together with the predicted transformed curvatures.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeOutcome {
    pub transformed: LinearGerbeData,
    pub nabla_xi: Cochain1Der,
    pub nabla_eta: Cochain2Alg,
    /// ν' = ν + ∇²ξ + ad(ξ·B + ∇η) on ascending triangles.
    pub predicted_nu: Cochain2Der,
    /// ω' = ω − ξ·ω − ∇²η on ascending tetrahedra (oriented-cell convention).
    pub predicted_omega: Cochain3Alg,
}

impl GaugeOutcome {
    /// ν recomputed from the transformed fields, on ascending triangles.
    pub fn recomputed_nu(&self) -> Result<Cochain2Der> {
        let mut out = Cochain2Der::new();
        for (t, _) in self.predicted_nu.iter() {
            out.insert_canonical(*t, nu_component(&self.transformed.mu, &self.transformed.b, *t)?)?;
        }
        Ok(out)
    }

    /// ω recomputed from the transformed fields, on ascending tetrahedra.
    pub fn recomputed_omega(&self) -> Result<Cochain3Alg> {
        let mut out = Cochain3Alg::new();
        for (c, _) in self.predicted_omega.iter() {
            out.insert_canonical(*c, omega_cell(&self.transformed.mu, &self.transformed.b, *c)?)?;
        }
        Ok(out)
    }

    /// Σ over triangles of ‖ν(μ',B') − ν'_predicted‖.
    pub fn nu_mismatch(&self) -> Result<f64> {
        let re = self.recomputed_nu()?;
        Ok(self.predicted_nu.iter().map(|(t, p)| (re.canonical(t).unwrap().0 - p.0).norm()).sum())
    }

    /// Σ over tetrahedra of ‖ω(μ',B') − ω'_predicted‖.
    pub fn omega_mismatch(&self) -> Result<f64> {
        let re = self.recomputed_omega()?;
        Ok(self.predicted_omega.iter().map(|(c, p)| (*re.canonical(c).unwrap() - *p).norm()).sum())
    }
}

/// μ' = μ + ∇ξ and B' = B − ξ·B − ∇η (ξ taken at the loop's smallest vertex),
/// plus the predicted ν' and ω'.
pub fn gauge_transform_linear(
    lin: &LinearGerbeData,
    h: &GerbeGauge,
    complex: &SimplicialComplex,
) -> Result<GaugeOutcome> {
    let mu = &lin.mu;
    let mut nxi = Cochain1Der::new();
    let mut mu2 = Cochain1Der::new();
    for e in complex.cells(1) {
        let (x, y) = (e[0], e[1]);
        let d = nabla_xi(mu, &h.xi, x, y)?;
        nxi.insert_canonical([x, y], d)?;
        mu2.insert_canonical([x, y], mu.get([x, y])? + d)?;
    }
    let mut neta = Cochain2Alg::new();
    let mut xib = Cochain2Alg::new();
    let mut b2 = Cochain2Alg::new();
    for t in complex.cells(2) {
        let key = [t[0], t[1], t[2]];
        let n = nabla_eta(mu, &h.eta, key)?;
        let bv = lin.b.get(key)?;
        let xb = h.xi_at(t[0])?.apply(&bv);
        neta.insert_canonical(key, n)?;
        xib.insert_canonical(key, xb)?;
        b2.insert_canonical(key, bv - xb - n)?;
    }
    let mut predicted_nu = Cochain2Der::new();
    for t in complex.cells(2) {
        let key = [t[0], t[1], t[2]];
        let nu = nu_component(mu, &lin.b, key)?;
        let shift = *xib.canonical(&key).unwrap() + *neta.canonical(&key).unwrap();
        predicted_nu.insert_canonical(key, nu + nabla2_xi(mu, &nxi, key)? + Derivation::ad(&shift))?;
    }
    let mut predicted_omega = Cochain3Alg::new();
    for c in complex.cells(3) {
        let key = [c[0], c[1], c[2], c[3]];
        let om = omega_cell(mu, &lin.b, key)?;
        let value = om - h.xi_at(c[0])?.apply(&om) - nabla2_eta(mu, &neta, key)?;
        predicted_omega.insert_canonical(key, value)?;
    }
    Ok(GaugeOutcome {
        transformed: LinearGerbeData { mu: mu2, b: b2 },
        nabla_xi: nxi,
        nabla_eta: neta,
        predicted_nu,
        predicted_omega,
    })
}
