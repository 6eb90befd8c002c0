//! Transport of sections over path space along generating 2-arrows.
//!
//! A section over (x₀,…,x_n) is a list of arrows u_{j,j+1}; in the skeletal
//! model they are group elements and the arrow composite a∘b is the product b·a.

use crate::error::{Error, Result};
use crate::liegroup::{Automorphism, GroupElement};
use crate::pathspace::{EdgePath, GeneratorKind, HomotopyWord, TwoCellGenerator, WordStep};

use super::GerbeData;

#[derive(Debug, Clone, PartialEq)]
pub struct SectionData {
    pub path: EdgePath,
    pub arrows: Vec<GroupElement>,
}

impl SectionData {
    pub fn new(path: EdgePath, arrows: Vec<GroupElement>) -> Result<Self> {
        if path.len() != arrows.len() + 1 {
            return Err(Error::Invalid(format!(
                "section over {} vertices needs {} arrows, got {}",
                path.len(),
                path.len().saturating_sub(1),
                arrows.len()
            )));
        }
        Ok(Self { path, arrows })
    }

    /// Identity arrows over the path.
    pub fn identity(g: &GerbeData, path: EdgePath) -> Self {
        let n = path.len().saturating_sub(1);
        Self { path, arrows: vec![GroupElement::identity(g.group()); n] }
    }

    /// Composite u₀₁ ∘ φ₀₁(u₁₂) ∘ φ₀₁φ₁₂(u₂₃) ∘ … read in the first fiber.
    pub fn composite(&self, g: &GerbeData) -> Result<GroupElement> {
        let mut out = GroupElement::identity(g.group());
        let mut frame = Automorphism::identity();
        for (j, u) in self.arrows.iter().enumerate() {
            out = frame.apply_group(u) * out;
            frame = frame.compose(&g.phi(self.path.0[j], self.path.0[j + 1])?);
        }
        Ok(out)
    }
}

/// a∘b∘c… as the reversed product.
fn compose_arrows(arrows: &[GroupElement]) -> GroupElement {
    let mut out = arrows[0];
    for a in &arrows[1..] {
        out = *a * out;
    }
    out
}

/// Twists the entries from `start` on by ψ, conjugating ψ along the path.
fn twist_tail(g: &GerbeData, s: &mut SectionData, start: usize, mut psi: Automorphism) -> Result<()> {
    for j in start..s.arrows.len() {
        s.arrows[j] = psi.apply_group(&s.arrows[j]);
        let step = g.phi(s.path.0[j], s.path.0[j + 1])?;
        psi = step.inverse().compose(&psi).compose(&step);
    }
    Ok(())
}

/// Transports a section along one generator.
pub fn sweep_section(g: &GerbeData, s: &SectionData, gen: &TwoCellGenerator) -> Result<SectionData> {
    gen.check(&s.path, None)?;
    if gen.is_identity() {
        return Ok(s.clone());
    }
    let mut out = s.clone();
    let p = gen.position;
    let [x, z, y] = gen.vertices;
    let id = GroupElement::identity(g.group());
    let u = &mut out.arrows;
    let path = &mut out.path.0;
    let twist = match gen.kind {
        GeneratorKind::Insert => {
            u[p] = compose_arrows(&[u[p], g.k_loop(x, z, y)?]);
            path.insert(p + 1, z);
            u.insert(p + 1, id);
            (p + 2, g.beta(y, z, x)?)
        }
        GeneratorKind::Delete => {
            let moved = g.phi(x, z)?.apply_group(&u[p + 1]);
            u[p] = compose_arrows(&[u[p], moved, g.k_loop(x, z, y)?.inverse()]);
            path.remove(p + 1);
            u.remove(p + 1);
            (p + 1, g.beta(y, x, z)?)
        }
        GeneratorKind::LoopInsert => {
            u[p] = compose_arrows(&[u[p], g.k_loop(x, z, y)?]);
            path.splice(p + 1..p + 1, [z, y]);
            u.splice(p + 1..p + 1, [id, id]);
            (p + 3, g.beta(x, y, z)?)
        }
        GeneratorKind::LoopDelete => {
            let phi_xz = g.phi(x, z)?;
            let first = phi_xz.apply_group(&u[p + 1]);
            let second = phi_xz.compose(&g.phi(z, y)?).apply_group(&u[p + 2]);
            u[p] = compose_arrows(&[u[p], first, second, g.k_loop(x, z, y)?.inverse()]);
            path.drain(p + 1..p + 3);
            u.drain(p + 1..p + 3);
            (p + 1, g.beta(x, z, y)?)
        }
    };
    twist_tail(g, &mut out, twist.0, twist.1)?;
    Ok(out)
}

/// Applies a horizontal composite, right to left by position.
pub fn sweep_step(g: &GerbeData, s: &SectionData, step: &WordStep) -> Result<SectionData> {
    let mut cur = s.clone();
    for gen in step.ordered() {
        cur = sweep_section(g, &cur, &gen)?;
    }
    Ok(cur)
}

/// Transports the identity section over the word's start path along the word.
pub fn run_word(g: &GerbeData, word: &HomotopyWord) -> Result<SectionData> {
    let mut s = SectionData::identity(g, word.start.clone());
    for step in &word.steps {
        s = sweep_step(g, &s, step)?;
    }
    Ok(s)
}

/// Group value of a closed word on a constant path: the inverse of the final arrow.
pub fn word_value(g: &GerbeData, word: &HomotopyWord) -> Result<GroupElement> {
    let s = run_word(g, word)?;
    if s.path != word.start || s.arrows.len() != 1 {
        return Err(Error::Invalid(format!("word does not close: ends at {:?}", s.path.0)));
    }
    Ok(s.arrows[0].inverse())
}

/// Removes the backtrack (x, z, x) centred at `position` by the deletion
/// u_xz ∘ φ_xz(u_zx) ∘ K_[xzzx]^*, then absorbs the resulting (x, x) arrow into
/// its neighbour (the next arrow if there is one, else the previous).
pub fn sweep_backtrack(g: &GerbeData, s: &SectionData, position: usize) -> Result<SectionData> {
    let v = &s.path.0;
    if position == 0 || position + 1 >= v.len() || v[position - 1] != v[position + 1] || v[position] == v[position - 1] {
        return Err(Error::InapplicableGenerator {
            generator: format!("backtrack@{position}"),
            path: v.clone(),
        });
    }
    let (x, z) = (v[position - 1], v[position]);
    let mut out = sweep_section(g, s, &TwoCellGenerator::delete(x, z, x, position - 1))?;
    let j = position - 1;
    let degenerate = out.arrows[j];
    if j + 1 < out.arrows.len() {
        out.arrows[j + 1] = compose_arrows(&[degenerate, out.arrows[j + 1]]);
    } else if j > 0 {
        let moved = g.phi(out.path.0[j - 1], x)?.apply_group(&degenerate);
        out.arrows[j - 1] = compose_arrows(&[out.arrows[j - 1], moved]);
    } else {
        return Ok(out);
    }
    out.arrows.remove(j);
    out.path.0.remove(j);
    Ok(out)
}
