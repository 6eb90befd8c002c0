//! Abstract simplicial complexes with canonical (ascending) cell storage.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest cell dimension supported.
pub const MAX_DIM: usize = 5;

/// Sign of the permutation sorting `vertices` ascending; 0 if a vertex repeats.
pub fn permutation_sign(vertices: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            match vertices[i].cmp(&vertices[j]) {
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    sign
}

/// Ordered vertex tuple together with its parity relative to ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrientedCell {
    pub vertices: Vec<usize>,
    pub parity: i32,
}

impl OrientedCell {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        let parity = permutation_sign(&vertices);
        if parity == 0 || vertices.is_empty() {
            return Err(Error::MalformedCell(vertices));
        }
        Ok(Self { vertices, parity })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn canonical(&self) -> Vec<usize> {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v
    }

    pub fn base(&self) -> usize {
        self.vertices[0]
    }

    /// Face opposite position `i`, with the induced orientation sign (-1)^i.
    pub fn face(&self, i: usize) -> (OrientedCell, i32) {
        let mut v = self.vertices.clone();
        v.remove(i);
        let parity = permutation_sign(&v);
        let sign = if i.is_multiple_of(2) { 1 } else { -1 };
        (OrientedCell { vertices: v, parity }, sign)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n_vertices: usize,
    maximal: Vec<Vec<usize>>,
    cells: Vec<BTreeSet<Vec<usize>>>,
}

/// On-disk complex description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: usize,
    pub maximal: Vec<Vec<usize>>,
}

fn subsets(cell: &[usize], out: &mut [BTreeSet<Vec<usize>>]) {
    let n = cell.len();
    for mask in 1u32..(1 << n) {
        let sub: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| cell[i]).collect();
        out[sub.len() - 1].insert(sub);
    }
}

impl SimplicialComplex {
    /// Face closure of the given cells. Vertex count is one past the largest id.
    pub fn build(maximal: &[Vec<usize>]) -> Result<Self> {
        let n = maximal.iter().flatten().map(|&v| v + 1).max().unwrap_or(0);
        Self::build_with_vertices(n, maximal)
    }

    pub fn build_with_vertices(n_vertices: usize, maximal: &[Vec<usize>]) -> Result<Self> {
        let mut cells = vec![BTreeSet::new(); MAX_DIM + 1];
        let mut stored = Vec::with_capacity(maximal.len());
        for cell in maximal {
            if cell.is_empty() || cell.iter().any(|&v| v >= n_vertices) {
                return Err(Error::MalformedCell(cell.clone()));
            }
            let mut c = cell.clone();
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedCell(cell.clone()));
            }
            if c.len() > MAX_DIM + 1 {
                return Err(Error::UnsupportedDimension(c.len() - 1));
            }
            subsets(&c, &mut cells);
            stored.push(c);
        }
        for v in 0..n_vertices {
            cells[0].insert(vec![v]);
        }
        stored.sort();
        stored.dedup();
        Ok(Self { n_vertices, maximal: stored, cells })
    }

    /// The full n-simplex.
    pub fn standard_simplex(n: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        Self::build(&[(0..=n).collect()])
    }

    /// Boundary sphere of the n-simplex.
    pub fn boundary_complex(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        let faces: Vec<Vec<usize>> =
            (0..=n).map(|i| (0..=n).filter(|&j| j != i).collect()).collect();
        Self::build_with_vertices(n + 1, &faces)
    }

    /// Builtin names: `deltaN` (0..=5) and `boundaryN` (1..=5).
    pub fn builtin(name: &str) -> Result<Self> {
        let unknown = || Error::Unknown { kind: "complex", name: name.to_string() };
        if let Some(d) = name.strip_prefix("delta") {
            Self::standard_simplex(d.parse().map_err(|_| unknown())?)
        } else if let Some(d) = name.strip_prefix("boundary") {
            Self::boundary_complex(d.parse().map_err(|_| unknown())?)
        } else {
            Err(unknown())
        }
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        Self::build_with_vertices(file.vertices, &file.maximal)
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile { vertices: self.n_vertices, maximal: self.maximal.clone() }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn maximal(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    /// Canonical (ascending) cells of dimension `k`.
    pub fn cells(&self, k: usize) -> Vec<Vec<usize>> {
        self.cells.get(k).map(|s| s.iter().cloned().collect()).unwrap_or_default()
    }

    pub fn count(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, |s| s.len())
    }

    pub fn dimension(&self) -> usize {
        (0..=MAX_DIM).rev().find(|&k| self.count(k) > 0).unwrap_or(0)
    }

    /// Whether the vertex set (any order) spans a cell. Repeats are collapsed.
    pub fn contains(&self, vertices: &[usize]) -> bool {
        let mut c = vertices.to_vec();
        c.sort_unstable();
        c.dedup();
        !c.is_empty() && self.cells.get(c.len() - 1).is_some_and(|s| s.contains(&c))
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        x != y && self.contains(&[x, y])
    }

    pub fn neighbors(&self, x: usize) -> Vec<usize> {
        (0..self.n_vertices).filter(|&y| self.adjacent(x, y)).collect()
    }

    /// Based loops for triangles (k = 2) or tetrahedra (k = 3): base is the
    /// smallest id, both orientations of each cell.
    pub fn based_loops(&self, k: usize) -> Result<Vec<OrientedCell>> {
        if k != 2 && k != 3 {
            return Err(Error::UnsupportedDimension(k));
        }
        let mut out = Vec::new();
        for c in self.cells(k) {
            out.push(OrientedCell::new(c.clone())?);
            let mut rev = c.clone();
            rev[1..].reverse();
            out.push(OrientedCell::new(rev)?);
        }
        Ok(out)
    }
}

/// Canonical key "i-j-k" for a vertex tuple.
pub fn cell_key(vertices: &[usize]) -> String {
    vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")
}

pub fn parse_cell_key(key: &str) -> Result<Vec<usize>> {
    key.split('-')
        .map(|s| s.parse::<usize>().map_err(|_| Error::Invalid(format!("bad cell key '{key}'"))))
        .collect()
}

impl SimplicialComplex {
    /// Clique complex of an edge list, up to `max_dim`.
    pub fn clique_complex(n_vertices: usize, edges: &[[usize; 2]], max_dim: usize) -> Result<Self> {
        let max_dim = max_dim.min(MAX_DIM);
        let adj = |a: usize, b: usize| edges.iter().any(|e| (e[0] == a && e[1] == b) || (e[0] == b && e[1] == a));
        let mut layer: Vec<Vec<usize>> = (0..n_vertices).map(|v| vec![v]).collect();
        let mut all = layer.clone();
        for _ in 0..max_dim {
            let mut next = Vec::new();
            for c in &layer {
                for v in c[c.len() - 1] + 1..n_vertices {
                    if c.iter().all(|&u| adj(u, v)) {
                        let mut d = c.clone();
                        d.push(v);
                        next.push(d);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        Self::build_with_vertices(n_vertices, &all)
    }
}

/// All orderings of a cell.
pub fn orderings(cell: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = cell.to_vec();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Orderings of a cell that start at its smallest vertex.
pub fn based_orderings(cell: &[usize]) -> Vec<Vec<usize>> {
    let m = *cell.iter().min().expect("non-empty cell");
    let rest: Vec<usize> = cell.iter().copied().filter(|&v| v != m).collect();
    orderings(&rest)
        .into_iter()
        .map(|r| std::iter::once(m).chain(r).collect())
        .collect()
}
