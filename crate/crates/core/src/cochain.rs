//! Cochains on canonical cells and the componentwise discrete operators.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liegroup::{AlgebraElement, Derivation, Group, GroupElement};
use crate::simplicial::permutation_sign;

/// Values that flip sign under odd reorderings of their cell.
pub trait Alternating: Clone {
    fn zero() -> Self;
    fn negate(&self) -> Self;
}

impl Alternating for AlgebraElement {
    fn zero() -> Self {
        AlgebraElement::zero()
    }
    fn negate(&self) -> Self {
        -*self
    }
}

impl Alternating for Derivation {
    fn zero() -> Self {
        Derivation::zero()
    }
    fn negate(&self) -> Self {
        -*self
    }
}

/// Sparse map from canonical (ascending) N-vertex cells to values.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain<const N: usize, V> {
    values: BTreeMap<[usize; N], V>,
}

impl<const N: usize, V> Default for Cochain<N, V> {
    fn default() -> Self {
        Self { values: BTreeMap::new() }
    }
}

pub(crate) fn sorted<const N: usize>(cell: [usize; N]) -> [usize; N] {
    let mut c = cell;
    c.sort_unstable();
    c
}

impl<const N: usize, V> Cochain<N, V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_fn(cells: &[Vec<usize>], mut f: impl FnMut([usize; N]) -> V) -> Self {
        let mut out = Self::new();
        for c in cells {
            let key: [usize; N] = c.as_slice().try_into().expect("cell size mismatch");
            out.values.insert(key, f(key));
        }
        out
    }

    /// Stores a value at an ascending cell.
    pub fn insert_canonical(&mut self, cell: [usize; N], value: V) -> Result<()> {
        if sorted(cell) != cell || permutation_sign(&cell) == 0 {
            return Err(Error::MalformedCell(cell.to_vec()));
        }
        self.values.insert(cell, value);
        Ok(())
    }

    pub fn canonical(&self, cell: &[usize; N]) -> Option<&V> {
        self.values.get(cell)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize; N], &V)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<W>(&self, mut f: impl FnMut(&[usize; N], &V) -> W) -> Cochain<N, W> {
        Cochain { values: self.values.iter().map(|(k, v)| (*k, f(k, v))).collect() }
    }
}

impl<const N: usize, V: Alternating> Cochain<N, V> {
    /// Value on an arbitrary ordering: sign of the reordering, zero if degenerate.
    pub fn get(&self, cell: [usize; N]) -> Result<V> {
        let sign = permutation_sign(&cell);
        if sign == 0 {
            return Ok(V::zero());
        }
        let v = self.values.get(&sorted(cell)).ok_or_else(|| Error::IncompleteField(cell.to_vec()))?;
        Ok(if sign > 0 { v.clone() } else { v.negate() })
    }

    /// Stores a value given at an arbitrary ordering.
    pub fn insert(&mut self, cell: [usize; N], value: V) -> Result<()> {
        let sign = permutation_sign(&cell);
        if sign == 0 {
            return Err(Error::MalformedCell(cell.to_vec()));
        }
        let v = if sign > 0 { value } else { value.negate() };
        self.values.insert(sorted(cell), v);
        Ok(())
    }
}

pub type Cochain1Alg = Cochain<2, AlgebraElement>;
pub type Cochain1Der = Cochain<2, Derivation>;
pub type Cochain2Alg = Cochain<3, AlgebraElement>;
pub type Cochain2Der = Cochain<3, Derivation>;
pub type Cochain3Alg = Cochain<4, AlgebraElement>;

/// G-valued 1-cochain; the reversed edge reads as the inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain1G {
    pub group: Group,
    pub values: Cochain<2, GroupElement>,
}

impl Cochain1G {
    pub fn new(group: Group) -> Self {
        Self { group, values: Cochain::new() }
    }

    pub fn insert(&mut self, x: usize, y: usize, g: GroupElement) -> Result<()> {
        if g.group() != self.group {
            return Err(Error::GroupMismatch {
                expected: self.group.to_string(),
                found: g.group().to_string(),
            });
        }
        match x.cmp(&y) {
            std::cmp::Ordering::Less => self.values.insert_canonical([x, y], g),
            std::cmp::Ordering::Greater => self.values.insert_canonical([y, x], g.inverse()),
            std::cmp::Ordering::Equal => Err(Error::MalformedCell(vec![x, y])),
        }
    }

    /// f_xy, with f_yx = f_xy⁻¹ and f_xx = 1.
    pub fn get(&self, x: usize, y: usize) -> Result<GroupElement> {
        if x == y {
            return Ok(GroupElement::identity(self.group));
        }
        let key = sorted([x, y]);
        let g = self.values.canonical(&key).ok_or_else(|| Error::IncompleteField(vec![x, y]))?;
        Ok(if x < y { *g } else { g.inverse() })
    }
}

/// G-valued 2-cochain on loops based at the smallest vertex. The reversed
/// orientation reads as the inverse, degenerate loops as the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain2G {
    pub group: Group,
    pub values: Cochain<3, GroupElement>,
}

impl Cochain2G {
    pub fn new(group: Group) -> Self {
        Self { group, values: Cochain::new() }
    }

    /// Value on the loop [x y z x]; x must be the smallest vertex.
    pub fn get(&self, x: usize, y: usize, z: usize) -> Result<GroupElement> {
        if x == y || y == z || x == z {
            return Ok(GroupElement::identity(self.group));
        }
        if x > y || x > z {
            return Err(Error::Invalid(format!("loop [{x}{y}{z}{x}] is not based at its smallest vertex")));
        }
        let key = sorted([x, y, z]);
        let g = self.values.canonical(&key).ok_or_else(|| Error::IncompleteField(vec![x, y, z]))?;
        Ok(if y < z { *g } else { g.inverse() })
    }
}

/// A_xy + A_yz + A_zx.
pub fn d1(a: &Cochain1Alg, [x, y, z]: [usize; 3]) -> Result<AlgebraElement> {
    Ok(a.get([x, y])? + a.get([y, z])? + a.get([z, x])?)
}

/// A_xy A_yz + A_yz A_zx + A_xy A_zx as defining-representation matrices.
pub fn curvature_quadratic(group: Group, a: &Cochain1Alg, [x, y, z]: [usize; 3]) -> Result<DMatrix<Complex64>> {
    let (axy, ayz, azx) =
        (a.get([x, y])?.matrix(group), a.get([y, z])?.matrix(group), a.get([z, x])?.matrix(group));
    Ok(&axy * &ayz + &ayz * &azx + &axy * &azx)
}

/// A_xy A_yz A_zx, the remaining term of (1+A_xy)(1+A_yz)(1+A_zx) − 1.
pub fn curvature_cubic(group: Group, a: &Cochain1Alg, [x, y, z]: [usize; 3]) -> Result<DMatrix<Complex64>> {
    let (axy, ayz, azx) =
        (a.get([x, y])?.matrix(group), a.get([y, z])?.matrix(group), a.get([z, x])?.matrix(group));
    Ok(&axy * &ayz * &azx)
}

/// d1 plus the algebra part of the quadratic term (half the brackets).
pub fn curvature_form(a: &Cochain1Alg, [x, y, z]: [usize; 3]) -> Result<AlgebraElement> {
    let (axy, ayz, azx) = (a.get([x, y])?, a.get([y, z])?, a.get([z, x])?);
    let quad = axy.bracket(&ayz) + ayz.bracket(&azx) + axy.bracket(&azx);
    Ok(axy + ayz + azx + quad.scale(0.5))
}

/// F_xyzx − F_wxyw − F_wyzw − F_wzxw + [A_wx, F_xyzx].
pub fn bianchi_residual_linear(
    a: &Cochain1Alg,
    f: &Cochain2Alg,
    [w, x, y, z]: [usize; 4],
) -> Result<AlgebraElement> {
    let fxyz = f.get([x, y, z])?;
    Ok(fxyz - f.get([w, x, y])? - f.get([w, y, z])? - f.get([w, z, x])? + a.get([w, x])?.bracket(&fxyz))
}

/// Fake curvature on the loop [a b c a]:
/// μ_ab + μ_bc − μ_ac + P(μ_ab μ_bc) − ad B_abc, with P the projection onto derivations.
pub fn nu_component(mu: &Cochain1Der, b: &Cochain2Alg, [x, y, z]: [usize; 3]) -> Result<Derivation> {
    let (mxy, myz) = (mu.get([x, y])?, mu.get([y, z])?);
    let linear = mxy + myz - mu.get([x, z])?;
    let quad = Derivation::project(&(mxy.0 * myz.0));
    Ok(linear + quad - Derivation::ad(&b.get([x, y, z])?))
}

/// ω on the oriented cell (a,b,c,d): (dB)_abcd + μ_ab·B_bcd.
pub fn omega_cell(mu: &Cochain1Der, b: &Cochain2Alg, [p, q, r, s]: [usize; 4]) -> Result<AlgebraElement> {
    let bqrs = b.get([q, r, s])?;
    let db = bqrs - b.get([p, r, s])? + b.get([p, q, s])? - b.get([p, q, r])?;
    Ok(db + mu.get([p, q])?.apply(&bqrs))
}

/// B on an oriented triangle read at `base`: the stored value lives at the
/// smallest vertex and is carried over by μ_{base,min} to first order.
pub fn based_two_form(mu: &Cochain1Der, b: &Cochain2Alg, base: usize, t: [usize; 3]) -> Result<AlgebraElement> {
    let value = b.get(t)?;
    let m = *t.iter().min().expect("triangle");
    if base == m {
        return Ok(value);
    }
    Ok(value + mu.get([base, m])?.apply(&value))
}

/// ω for the sweep ⟨v w x y v⟩, which covers the oriented cell (v,w,y,x).
/// Faces through v are read at v and the far face at w, as the sweep sees them.
pub fn omega_component(mu: &Cochain1Der, b: &Cochain2Alg, [v, w, x, y]: [usize; 4]) -> Result<AlgebraElement> {
    let far = based_two_form(mu, b, w, [w, y, x])?;
    let db = far - based_two_form(mu, b, v, [v, y, x])? + based_two_form(mu, b, v, [v, w, x])?
        - based_two_form(mu, b, v, [v, w, y])?;
    Ok(db + mu.get([v, w])?.apply(&b.get([w, y, x])?))
}

/// All orderings of 0..n with their signs, in lexicographic order.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out.into_iter().map(|p| (p.clone(), permutation_sign(&p) as f64)).collect()
}

/// (1/|S₅|) Σ_σ sgn σ · term(σ(cell)): the alternating projection on a 4-cell.
pub fn alternate_4cell<T>(
    cell: [usize; 5],
    zero: T,
    mut term: impl FnMut([usize; 5]) -> Result<T>,
    mut axpy: impl FnMut(&mut T, f64, T),
) -> Result<T> {
    let mut acc = zero;
    for (perm, sign) in signed_permutations(5) {
        let ordered = [cell[perm[0]], cell[perm[1]], cell[perm[2]], cell[perm[3]], cell[perm[4]]];
        let t = term(ordered)?;
        axpy(&mut acc, sign / 120.0, t);
    }
    Ok(acc)
}

/// The three pieces of dω + μ·ω − ν·B for one vertex ordering of a 4-cell:
/// (dω, μ_{01}·ω_{1234}, ν_{012}·B_{234}).
pub fn cocycle_terms(
    mu: &Cochain1Der,
    b: &Cochain2Alg,
    c: [usize; 5],
) -> Result<(AlgebraElement, AlgebraElement, AlgebraElement)> {
    let mut d_omega = AlgebraElement::zero();
    for i in 0..5 {
        let mut face = [0usize; 4];
        let mut k = 0;
        for (j, &v) in c.iter().enumerate() {
            if j != i {
                face[k] = v;
                k += 1;
            }
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        d_omega += omega_cell(mu, b, face)?.scale(sign);
    }
    let mu_omega = mu.get([c[0], c[1]])?.apply(&omega_cell(mu, b, [c[1], c[2], c[3], c[4]])?);
    let nu_b = nu_component(mu, b, [c[0], c[1], c[2]])?.apply(&b.get([c[2], c[3], c[4]])?);
    Ok((d_omega, mu_omega, nu_b))
}

/// dω + μ·ω − ν·B on a 4-cell, as the alternating projection over vertex orderings.
pub fn cocycle_residual_linear(mu: &Cochain1Der, b: &Cochain2Alg, cell: [usize; 5]) -> Result<AlgebraElement> {
    alternate_4cell(
        cell,
        AlgebraElement::zero(),
        |c| {
            let (dw, mw, nb) = cocycle_terms(mu, b, c)?;
            Ok(dw + mw - nb)
        },
        |acc, s, t| *acc += t.scale(s),
    )
}

/// Antisymmetrized pairing of two 2-forms on a 4-cell:
/// (1/120) Σ_σ sgn σ · P(σ₀σ₁σ₂) applied to Q(σ₂σ₃σ₄).
pub fn cup_pair_22(
    p: impl Fn([usize; 3]) -> Result<Derivation>,
    q: impl Fn([usize; 3]) -> Result<AlgebraElement>,
    cell: [usize; 5],
) -> Result<AlgebraElement> {
    alternate_4cell(
        cell,
        AlgebraElement::zero(),
        |c| Ok(p([c[0], c[1], c[2]])?.apply(&q([c[2], c[3], c[4]])?)),
        |acc, s, t| *acc += t.scale(s),
    )
}

/// Scalar variant: (1/120) Σ_σ sgn σ · tr(P(σ₀σ₁σ₂) · ad Q(σ₂σ₃σ₄)).
pub fn cup_pair_22_trace(
    p: impl Fn([usize; 3]) -> Result<Derivation>,
    q: impl Fn([usize; 3]) -> Result<AlgebraElement>,
    cell: [usize; 5],
) -> Result<f64> {
    alternate_4cell(
        cell,
        0.0,
        |c| {
            let pv = p([c[0], c[1], c[2]])?;
            let qv = Derivation::ad(&q([c[2], c[3], c[4]])?);
            Ok((pv.0 * qv.0).trace())
        },
        |acc, s, t| *acc += s * t,
    )
}

/// (∇ξ)_xy = ξ_y − ξ_x + μ_xy ξ_y − ξ_x μ_xy, unprojected.
pub fn nabla_xi(mu: &Cochain1Der, xi: &[Derivation], x: usize, y: usize) -> Result<Derivation> {
    let m = mu.get([x, y])?.0;
    let (xx, xy) = (vertex(xi, x)?.0, vertex(xi, y)?.0);
    Ok(Derivation(xy - xx + m * xy - xx * m))
}

/// (∇η)_xyz = η_xy + η_yz + η_zx + μ_xy·η_yz + μ_xy·η_zx + μ_yz·η_zx.
pub fn nabla_eta(mu: &Cochain1Der, eta: &Cochain1Alg, [x, y, z]: [usize; 3]) -> Result<AlgebraElement> {
    let (exy, eyz, ezx) = (eta.get([x, y])?, eta.get([y, z])?, eta.get([z, x])?);
    let (mxy, myz) = (mu.get([x, y])?, mu.get([y, z])?);
    Ok(exy + eyz + ezx + mxy.apply(&eyz) + mxy.apply(&ezx) + myz.apply(&ezx))
}

/// (∇²ξ)_abc = d(∇ξ)_abc + P((∇ξ)_ab μ_bc + μ_ab (∇ξ)_bc), with ∇ξ given as a 1-cochain.
pub fn nabla2_xi(mu: &Cochain1Der, nxi: &Cochain1Der, [a, b, c]: [usize; 3]) -> Result<Derivation> {
    let (nab, nbc) = (nxi.get([a, b])?, nxi.get([b, c])?);
    let (mab, mbc) = (mu.get([a, b])?, mu.get([b, c])?);
    let quad: Matrix3<f64> = nab.0 * mbc.0 + mab.0 * nbc.0;
    Ok(nab + nbc - nxi.get([a, c])? + Derivation::project(&quad))
}

/// (∇²η)_abcd = d(∇η)_abcd + μ_ab·(∇η)_bcd, with ∇η given as a 2-cochain.
pub fn nabla2_eta(mu: &Cochain1Der, neta: &Cochain2Alg, [a, b, c, d]: [usize; 4]) -> Result<AlgebraElement> {
    let nbcd = neta.get([b, c, d])?;
    let dn = nbcd - neta.get([a, c, d])? + neta.get([a, b, d])? - neta.get([a, b, c])?;
    Ok(dn + mu.get([a, b])?.apply(&nbcd))
}

fn vertex<T>(values: &[T], v: usize) -> Result<&T> {
    values.get(v).ok_or_else(|| Error::IncompleteField(vec![v]))
}
