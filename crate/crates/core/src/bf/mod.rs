//! The discrete BF action S(μ, B) = Σ_cells ∫ tr_ad(ν ∧ [B, ·]) and the check suite.

mod report;
mod suite;

pub use report::{loglog_slope, merge_reports, CheckReport, Measure, Row, CSV_HEADER};
pub use suite::{
    cocycle_alternated, cocycle_identity_defect, expected, naturality_on, omega_cross_on, omega_identity_defect, run_check,
    zigzag_on, RunConfig, CHECK_NAMES, DEFAULT_DELTA, DEFAULT_EPS,
};

use std::collections::{BTreeMap, VecDeque};

use crate::cochain::cup_pair_22_trace;
use crate::error::{Error, Result};
use crate::gerbe::LinearGerbeData;
use crate::simplicial::{permutation_sign, SimplicialComplex};

/// Coherent orientation of the top cells of a closed pseudo-manifold: adjacent
/// cells induce opposite orientations on their shared face. The first cell is +1.
pub fn orient_top_cells(complex: &SimplicialComplex) -> Result<Vec<(Vec<usize>, f64)>> {
    let k = complex.dimension();
    let cells = complex.cells(k);
    if cells.is_empty() {
        return Ok(Vec::new());
    }
    let mut faces: BTreeMap<Vec<usize>, Vec<(usize, f64)>> = BTreeMap::new();
    for (ci, c) in cells.iter().enumerate() {
        for i in 0..c.len() {
            let mut f = c.clone();
            f.remove(i);
            faces.entry(f).or_default().push((ci, if i % 2 == 0 { 1.0 } else { -1.0 }));
        }
    }
    let mut sign = vec![0.0; cells.len()];
    sign[0] = 1.0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(ci) = queue.pop_front() {
        for users in faces.values() {
            let Some(&(_, mine)) = users.iter().find(|(c, _)| *c == ci) else { continue };
            if users.len() != 2 {
                return Err(Error::Invalid("complex is not a closed pseudo-manifold".into()));
            }
            for &(other, theirs) in users.iter().filter(|(c, _)| *c != ci) {
                let wanted = -sign[ci] * mine * theirs;
                if sign[other] == 0.0 {
                    sign[other] = wanted;
                    queue.push_back(other);
                } else if sign[other] != wanted {
                    return Err(Error::Invalid("complex is not orientable".into()));
                }
            }
        }
    }
    if sign.contains(&0.0) {
        return Err(Error::Invalid("complex is not connected".into()));
    }
    Ok(cells.into_iter().zip(sign).collect())
}

/// (1/120) Σ_σ sgn σ tr(ν(σ₀σ₁σ₂) · ad B(σ₂σ₃σ₄)) on one ordered 4-cell.
pub fn bf_density(lin: &LinearGerbeData, cell: [usize; 5]) -> Result<f64> {
    cup_pair_22_trace(|t| lin.nu(t), |t| lin.b.get(t), cell)
}

/// S(μ, B) summed over the coherently oriented 4-cells of a closed 4-complex.
pub fn bf_action(lin: &LinearGerbeData, complex: &SimplicialComplex) -> Result<f64> {
    if complex.dimension() != 4 {
        return Err(Error::UnsupportedDimension(complex.dimension()));
    }
    let mut s = 0.0;
    for (c, o) in orient_top_cells(complex)? {
        s += o * bf_density(lin, [c[0], c[1], c[2], c[3], c[4]])?;
    }
    Ok(s)
}

/// Direct evaluation of the same sum, one ordering at a time, with ν and ad B
/// written out from their component formulas.
pub fn bf_action_bruteforce(lin: &LinearGerbeData, complex: &SimplicialComplex) -> Result<f64> {
    use nalgebra::Matrix3;
    let mu = |a: usize, b: usize| -> Result<Matrix3<f64>> { Ok(lin.mu.get([a, b])?.0) };
    let cross = |v: nalgebra::Vector3<f64>| Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0);
    let mut total = 0.0;
    for (c, o) in orient_top_cells(complex)? {
        let mut acc = 0.0;
        for a in 0..5 {
            for b in 0..5 {
                for d in 0..5 {
                    for e in 0..5 {
                        for f in 0..5 {
                            let idx = [a, b, d, e, f];
                            let sign = permutation_sign(&idx);
                            if sign == 0 {
                                continue;
                            }
                            let v: Vec<usize> = idx.iter().map(|&i| c[i]).collect();
                            let (m01, m12) = (mu(v[0], v[1])?, mu(v[1], v[2])?);
                            let prod = m01 * m12;
                            let nu = m01 + m12 - mu(v[0], v[2])? + (prod - prod.transpose()) * 0.5
                                - cross(lin.b.get([v[0], v[1], v[2]])?.0);
                            let adb = cross(lin.b.get([v[2], v[3], v[4]])?.0);
                            acc += sign as f64 * (nu * adb).trace();
                        }
                    }
                }
            }
        }
        total += o * acc / 120.0;
    }
    Ok(total)
}
