//! Edge paths, the generating 2-arrows between them, and the fixed words that
//! sweep a tetrahedron and the boundary of a 4-simplex.

use std::fmt;

use crate::error::{Error, Result};
use crate::simplicial::SimplicialComplex;

/// Sequence of successive neighbour vertices. Repeats and backtracks are kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePath(pub Vec<usize>);

impl EdgePath {
    pub fn new(vertices: Vec<usize>) -> Self {
        Self(vertices)
    }

    pub fn constant(v: usize) -> Self {
        Self(vec![v, v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adjacency of every consecutive distinct pair.
    pub fn validate(&self, complex: &SimplicialComplex) -> Result<()> {
        for w in self.0.windows(2) {
            if w[0] != w[1] && !complex.adjacent(w[0], w[1]) {
                return Err(Error::NotAdjacent(w[0], w[1]));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    /// (…x,y…) → (…x,z,y…)
    Insert,
    /// (…x,z,y…) → (…x,y…)
    Delete,
    /// (…x,x…) → (…x,z,y,x…)
    LoopInsert,
    /// (…x,z,y,x…) → (…x,x…)
    LoopDelete,
}

/// One generating 2-arrow acting at a path position. `vertices` is (x, z, y):
/// z is inserted or removed between x and y, or (z, y) for the loop kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoCellGenerator {
    pub kind: GeneratorKind,
    pub vertices: [usize; 3],
    pub position: usize,
}

impl TwoCellGenerator {
    pub fn insert(x: usize, z: usize, y: usize, position: usize) -> Self {
        Self { kind: GeneratorKind::Insert, vertices: [x, z, y], position }
    }

    pub fn delete(x: usize, z: usize, y: usize, position: usize) -> Self {
        Self { kind: GeneratorKind::Delete, vertices: [x, z, y], position }
    }

    pub fn loop_insert(x: usize, z: usize, y: usize, position: usize) -> Self {
        Self { kind: GeneratorKind::LoopInsert, vertices: [x, z, y], position }
    }

    pub fn loop_delete(x: usize, z: usize, y: usize, position: usize) -> Self {
        Self { kind: GeneratorKind::LoopDelete, vertices: [x, z, y], position }
    }

    /// Insertion or deletion of a vertex equal to a neighbour: the identity 2-arrow.
    pub fn is_identity(&self) -> bool {
        let [x, z, y] = self.vertices;
        matches!(self.kind, GeneratorKind::Insert | GeneratorKind::Delete) && (z == x || z == y)
    }

    /// The generator undoing this one on the resulting path.
    pub fn inverse(&self) -> Self {
        let [x, z, y] = self.vertices;
        let kind = match self.kind {
            GeneratorKind::Insert => GeneratorKind::Delete,
            GeneratorKind::Delete => GeneratorKind::Insert,
            GeneratorKind::LoopInsert => GeneratorKind::LoopDelete,
            GeneratorKind::LoopDelete => GeneratorKind::LoopInsert,
        };
        Self { kind, vertices: [x, z, y], position: self.position }
    }

    fn error(&self, path: &EdgePath) -> Error {
        Error::InapplicableGenerator { generator: self.to_string(), path: path.0.clone() }
    }

    /// Checks the pattern at the position, and adjacency when a complex is given.
    pub fn check(&self, path: &EdgePath, complex: Option<&SimplicialComplex>) -> Result<()> {
        let [x, z, y] = self.vertices;
        let p = self.position;
        let v = &path.0;
        let at = |i: usize| v.get(p + i).copied();
        let pattern_ok = match self.kind {
            GeneratorKind::Insert => at(0) == Some(x) && at(1) == Some(y),
            GeneratorKind::Delete => at(0) == Some(x) && at(1) == Some(z) && at(2) == Some(y),
            GeneratorKind::LoopInsert => at(0) == Some(x) && at(1) == Some(x),
            GeneratorKind::LoopDelete => {
                at(0) == Some(x) && at(1) == Some(z) && at(2) == Some(y) && at(3) == Some(x)
            }
        };
        if !pattern_ok {
            return Err(self.error(path));
        }
        if let (Some(c), false) = (complex, self.is_identity()) {
            let adj = |a: usize, b: usize| a == b || c.adjacent(a, b);
            let pairs: &[(usize, usize)] = match self.kind {
                GeneratorKind::Insert | GeneratorKind::Delete => &[(x, z), (z, y), (x, y)],
                GeneratorKind::LoopInsert | GeneratorKind::LoopDelete => &[(x, z), (z, y), (y, x)],
            };
            for &(a, b) in pairs {
                if !adj(a, b) {
                    return Err(Error::NotAdjacent(a, b));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for TwoCellGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, z, y] = self.vertices;
        let p = self.position;
        match self.kind {
            GeneratorKind::Insert => write!(f, "[{x} {z} {y}]@{p}"),
            GeneratorKind::Delete => write!(f, "[{x} {z} {y}]*@{p}"),
            GeneratorKind::LoopInsert => write!(f, "[{x} {z} {y} {x}]@{p}"),
            GeneratorKind::LoopDelete => write!(f, "[{x} {z} {y} {x}]*@{p}"),
        }
    }
}

/// Applies one generator. Identity generators return the path unchanged.
pub fn apply_generator(
    path: &EdgePath,
    g: &TwoCellGenerator,
    complex: Option<&SimplicialComplex>,
) -> Result<EdgePath> {
    g.check(path, complex)?;
    if g.is_identity() {
        return Ok(path.clone());
    }
    let [_, z, y] = g.vertices;
    let p = g.position;
    let mut v = path.0.clone();
    match g.kind {
        GeneratorKind::Insert => v.insert(p + 1, z),
        GeneratorKind::Delete => {
            v.remove(p + 1);
        }
        GeneratorKind::LoopInsert => {
            v.splice(p + 1..p + 1, [z, y]);
        }
        GeneratorKind::LoopDelete => {
            v.drain(p + 1..p + 3);
        }
    }
    Ok(EdgePath(v))
}

/// A horizontal composite: generators acting at disjoint sites of the same path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordStep(pub Vec<TwoCellGenerator>);

impl WordStep {
    pub fn single(g: TwoCellGenerator) -> Self {
        Self(vec![g])
    }

    /// Generators in application order: right to left by position, so that the
    /// positions (which refer to the incoming path) stay valid.
    pub fn ordered(&self) -> Vec<TwoCellGenerator> {
        let mut gens = self.0.clone();
        gens.sort_by_key(|g| std::cmp::Reverse(g.position));
        gens
    }
}

impl fmt::Display for WordStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|g| g.to_string()).collect();
        f.write_str(&parts.join(" x "))
    }
}

pub fn apply_step(path: &EdgePath, step: &WordStep, complex: Option<&SimplicialComplex>) -> Result<EdgePath> {
    let mut p = path.clone();
    for g in step.ordered() {
        p = apply_generator(&p, &g, complex)?;
    }
    Ok(p)
}

/// A 2-arrow stored as its generator sequence; paths are derived by replay.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyWord {
    pub start: EdgePath,
    pub steps: Vec<WordStep>,
}

impl HomotopyWord {
    pub fn new(start: EdgePath, steps: Vec<WordStep>) -> Self {
        Self { start, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// All paths visited, starting with `start`.
    pub fn replay(&self, complex: Option<&SimplicialComplex>) -> Result<Vec<EdgePath>> {
        let mut out = vec![self.start.clone()];
        for s in &self.steps {
            let next = apply_step(out.last().unwrap(), s, complex)?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn end(&self, complex: Option<&SimplicialComplex>) -> Result<EdgePath> {
        Ok(self.replay(complex)?.pop().unwrap())
    }
}

impl fmt::Display for HomotopyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" ; "))
    }
}

/// Positions i with x_{i-1} = x_{i+1} and x_i ≠ x_{i-1}.
pub fn detect_backtrack(path: &EdgePath) -> Vec<usize> {
    let v = &path.0;
    (1..v.len().saturating_sub(1)).filter(|&i| v[i - 1] == v[i + 1] && v[i] != v[i - 1]).collect()
}

fn check_simplex(vertices: &[usize], complex: Option<&SimplicialComplex>) -> Result<()> {
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            if a == b {
                return Err(Error::MalformedCell(vertices.to_vec()));
            }
            if let Some(c) = complex {
                if !c.adjacent(a, b) {
                    return Err(Error::NotAdjacent(a, b));
                }
            }
        }
    }
    Ok(())
}

fn word(v: usize, steps: Vec<Vec<TwoCellGenerator>>) -> HomotopyWord {
    HomotopyWord::new(EdgePath::constant(v), steps.into_iter().map(WordStep).collect())
}

/// Sweep of the tetrahedron ⟨v w x y v⟩ from (v,v) back to (v,v):
/// (v,v) → (v,w,y,v) → (v,w,x,y,v) → (v,w,x,v) → (v,v).
pub fn tetra_sweep_word(
    [v, w, x, y]: [usize; 4],
    complex: Option<&SimplicialComplex>,
) -> Result<HomotopyWord> {
    check_simplex(&[v, w, x, y], complex)?;
    Ok(word(
        v,
        vec![
            vec![TwoCellGenerator::loop_insert(v, w, y, 0)],
            vec![TwoCellGenerator::insert(w, x, y, 1)],
            vec![TwoCellGenerator::delete(x, y, v, 2)],
            vec![TwoCellGenerator::loop_delete(v, w, x, 0)],
        ],
    ))
}

/// The five pasting schemes F1..F5 on the 4-simplex (v,w,x,y,z). F1..F4 sweep
/// four boundary tetrahedra; F5 sweeps the fifth through the interior route.
pub fn face_scheme_words(
    [v, w, x, y, z]: [usize; 5],
    complex: Option<&SimplicialComplex>,
) -> Result<[HomotopyWord; 5]> {
    use TwoCellGenerator as G;
    check_simplex(&[v, w, x, y, z], complex)?;
    let f1 = tetra_sweep_word([v, w, x, y], complex)?;
    // (v,v) → (v,z,y,v) → (v,w,z,y,v) → (v,w,y,v) → (v,v)
    let f2 = word(
        v,
        vec![
            vec![G::loop_insert(v, z, y, 0)],
            vec![G::insert(v, w, z, 0)],
            vec![G::delete(w, z, y, 1)],
            vec![G::loop_delete(v, w, y, 0)],
        ],
    );
    // (v,v) → (v,z,x,v) → (v,z,x,y,v) → (v,z,y,v) → (v,v)
    let f3 = word(
        v,
        vec![
            vec![G::loop_insert(v, z, x, 0)],
            vec![G::insert(x, y, v, 2)],
            vec![G::delete(z, x, y, 1)],
            vec![G::loop_delete(v, z, y, 0)],
        ],
    );
    // (v,v) → (v,w,x,v) → (v,w,z,x,v) → (v,z,x,v) → (v,v)
    let f4 = word(
        v,
        vec![
            vec![G::loop_insert(v, w, x, 0)],
            vec![G::insert(w, z, x, 1)],
            vec![G::delete(v, w, z, 0)],
            vec![G::loop_delete(v, z, x, 0)],
        ],
    );
    // (v,v) → (v,w,x,v) → (v,w,z,x,y,v) → (v,z,y,v) → (v,w,z,y,v)
    //       → (v,w,y,v) → (v,w,x,y,v) → (v,w,x,v) → (v,v)
    let f5 = word(
        v,
        vec![
            vec![G::loop_insert(v, w, x, 0)],
            vec![G::insert(w, z, x, 1), G::insert(x, y, v, 2)],
            vec![G::delete(v, w, z, 0), G::delete(z, x, y, 2)],
            vec![G::insert(v, w, z, 0)],
            vec![G::delete(w, z, y, 1)],
            vec![G::insert(w, x, y, 1)],
            vec![G::delete(x, y, v, 2)],
            vec![G::loop_delete(v, w, x, 0)],
        ],
    );
    Ok([f1, f2, f3, f4, f5])
}
