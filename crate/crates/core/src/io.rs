//! JSON formats: complexes and field files.
//!
//! Matrices are row-major lists of rows. Complex entries are `[re, im]` pairs,
//! real entries plain floats. Cell keys are dash-joined ascending vertex ids.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bundle::BundleData;
use crate::cochain::{Cochain, Cochain1G};
use crate::error::{Error, Result};
use crate::gerbe::GerbeData;
use crate::liegroup::{Automorphism, Group, GroupElement};
use crate::simplicial::{cell_key, parse_cell_key, ComplexFile, SimplicialComplex};

/// Tolerance for accepting matrices read from files as group elements.
pub const LOAD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

pub type MatrixRows = Vec<Vec<Entry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldFile {
    pub group: Group,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub edges: BTreeMap<String, MatrixRows>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub triangles: BTreeMap<String, MatrixRows>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub phi: BTreeMap<String, MatrixRows>,
    #[serde(rename = "K", default, skip_serializing_if = "BTreeMap::is_empty")]
    pub k: BTreeMap<String, MatrixRows>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub beta: BTreeMap<String, MatrixRows>,
    /// K on degenerate loops [x z z x], keyed by the directed edge "x-z".
    #[serde(rename = "K_degenerate", default, skip_serializing_if = "BTreeMap::is_empty")]
    pub k_degenerate: BTreeMap<String, MatrixRows>,
}

fn rows_from_group(g: &GroupElement) -> MatrixRows {
    match g {
        GroupElement::Su2(m) => {
            (0..2).map(|i| (0..2).map(|j| Entry::Complex([m[(i, j)].re, m[(i, j)].im])).collect()).collect()
        }
        GroupElement::So3(r) => (0..3).map(|i| (0..3).map(|j| Entry::Real(r[(i, j)])).collect()).collect(),
    }
}

fn rows_from_real(m: &Matrix3<f64>) -> MatrixRows {
    (0..3).map(|i| (0..3).map(|j| Entry::Real(m[(i, j)])).collect()).collect()
}

fn to_dmatrix(rows: &MatrixRows) -> Result<DMatrix<Complex64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::Invalid("matrix must be square and non-empty".into()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| match rows[i][j] {
        Entry::Real(x) => Complex64::new(x, 0.0),
        Entry::Complex([re, im]) => Complex64::new(re, im),
    }))
}

fn group_from_rows(group: Group, rows: &MatrixRows) -> Result<GroupElement> {
    GroupElement::from_matrix(group, &to_dmatrix(rows)?, LOAD_TOL)
}

fn automorphism_from_rows(rows: &MatrixRows) -> Result<Automorphism> {
    let m = to_dmatrix(rows)?;
    if m.nrows() != 3 || m.iter().any(|z| z.im != 0.0) {
        return Err(Error::Invalid("automorphisms are real 3x3 matrices".into()));
    }
    let a = Automorphism::from_matrix(Matrix3::from_fn(|i, j| m[(i, j)].re));
    if !a.is_valid(LOAD_TOL) {
        return Err(Error::Invalid("matrix does not preserve the bracket".into()));
    }
    Ok(a)
}

fn key<const N: usize>(s: &str) -> Result<[usize; N]> {
    let v = parse_cell_key(s)?;
    v.as_slice().try_into().map_err(|_| Error::Invalid(format!("cell key '{s}' must have {N} vertices")))
}

impl FieldFile {
    pub fn new(group: Group) -> Self {
        Self {
            group,
            edges: BTreeMap::new(),
            triangles: BTreeMap::new(),
            phi: BTreeMap::new(),
            k: BTreeMap::new(),
            beta: BTreeMap::new(),
            k_degenerate: BTreeMap::new(),
        }
    }

    /// Edges hold f, triangles the curvature c at the smallest vertex.
    pub fn from_bundle(b: &BundleData, complex: &SimplicialComplex) -> Result<Self> {
        let mut out = Self::new(b.group());
        for (e, f) in b.f.values.iter() {
            out.edges.insert(cell_key(e), rows_from_group(f));
        }
        for (t, c) in b.curvature_c(complex)?.values.iter() {
            out.triangles.insert(cell_key(t), rows_from_group(c));
        }
        Ok(out)
    }

    /// Adds the gerbe sections phi, K, beta (and K_degenerate when set).
    pub fn with_gerbe(mut self, g: &GerbeData) -> Result<Self> {
        if g.group() != self.group {
            return Err(Error::GroupMismatch { expected: self.group.to_string(), found: g.group().to_string() });
        }
        for (e, p) in g.phi_cochain().iter() {
            self.phi.insert(cell_key(e), rows_from_real(p.matrix()));
        }
        for (t, k) in g.k_cochain().iter() {
            self.k.insert(cell_key(t), rows_from_group(k));
        }
        for (t, b) in g.beta_cochain().iter() {
            self.beta.insert(cell_key(t), rows_from_real(b.matrix()));
        }
        for ((x, z), k) in g.degenerate_k() {
            self.k_degenerate.insert(format!("{x}-{z}"), rows_from_group(k));
        }
        Ok(self)
    }

    pub fn from_gerbe(g: &GerbeData) -> Result<Self> {
        Self::new(g.group()).with_gerbe(g)
    }

    pub fn bundle(&self) -> Result<BundleData> {
        if self.edges.is_empty() {
            return Err(Error::Invalid("field file has no \"edges\" section".into()));
        }
        let mut f = Cochain1G::new(self.group);
        for (k, rows) in &self.edges {
            let [x, y] = key::<2>(k)?;
            f.insert(x, y, group_from_rows(self.group, rows)?)?;
        }
        Ok(BundleData::new(f))
    }

    pub fn gerbe(&self) -> Result<GerbeData> {
        if self.phi.is_empty() || self.k.is_empty() {
            return Err(Error::Invalid("field file needs \"phi\" and \"K\" sections".into()));
        }
        let mut phi = Cochain::new();
        for (k, rows) in &self.phi {
            phi.insert_canonical(key::<2>(k)?, automorphism_from_rows(rows)?)?;
        }
        let mut kc = Cochain::new();
        for (k, rows) in &self.k {
            kc.insert_canonical(key::<3>(k)?, group_from_rows(self.group, rows)?)?;
        }
        let mut g = GerbeData::new(self.group, phi, kc)?;
        for (k, rows) in &self.k_degenerate {
            let [x, z] = key::<2>(k)?;
            g.set_degenerate_k(x, z, group_from_rows(self.group, rows)?)?;
        }
        for (k, rows) in &self.beta {
            g.set_beta(key::<3>(k)?, automorphism_from_rows(rows)?)?;
        }
        for t in g.triangles() {
            if !self.beta.is_empty() && !self.beta.contains_key(&cell_key(&t)) {
                return Err(Error::IncompleteField(t.to_vec()));
            }
        }
        Ok(g)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }
}

pub fn read_complex(path: &Path) -> Result<SimplicialComplex> {
    let file: ComplexFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    SimplicialComplex::from_file(&file)
}

pub fn write_complex(complex: &SimplicialComplex, path: &Path) -> Result<()> {
    std::fs::write(path, serde_json::to_string(&complex.to_file())? + "\n")?;
    Ok(())
}

/// A builtin name (`delta4`, `boundary5`, …) or a path to a complex file.
pub fn resolve_complex(name: &str) -> Result<SimplicialComplex> {
    match SimplicialComplex::builtin(name) {
        Ok(c) => Ok(c),
        Err(e) => {
            let p = Path::new(name);
            if p.exists() {
                read_complex(p)
            } else {
                Err(e)
            }
        }
    }
}
