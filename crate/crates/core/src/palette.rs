//! Palette graphs of color subsets of `Z/p`.
//!
//! The palette graph `G(S)` has vertex set `S` and an edge `{a|c|b}` whenever
//! `c = (a+b)/2` also lies in `S`. Connectivity of `G(Im C)` constrains which
//! color sets a knot coloring can use, and affine maps act on the connected
//! minimal subsets with exactly two orbits at `p = 11`.

use crate::modp::{half_raw, AffineMap, ModError, Prime, Residue};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PaletteError {
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("residue {0} out of range for p={1}")]
    OutOfRange(u32, u32),
    #[error("{0:?} is not a subset of the graph's vertex set")]
    NotASubset(Vec<u32>),
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge list is not a spanning tree of the graph")]
    NotASpanningTree,
    #[error("subset size {size} out of range 2..={max}")]
    SizeOutOfRange { size: usize, max: u32 },
    #[error("expected #S = floor(log2 p) + 2 = {expected}, got {got}")]
    WrongSubsetSize { expected: usize, got: usize },
    #[error(transparent)]
    Mod(#[from] ModError),
}

/// Labeled edge `{a|c|b}` with `a < b` and `2c = a + b (mod p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub a: u32,
    pub label: u32,
    pub b: u32,
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}|{}|{}}}", self.a, self.label, self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaletteGraph {
    p: u32,
    vertices: Vec<u32>,
    edges: Vec<Edge>,
}

impl PaletteGraph {
    /// Build `G(S)` by checking every unordered pair of `S`.
    pub fn build(set: &[u32], p: Prime) -> Result<Self, PaletteError> {
        if set.is_empty() {
            return Err(PaletteError::EmptySet);
        }
        let mut vertices: Vec<u32> = set.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        if let Some(&v) = vertices.iter().find(|&&v| v >= p.get()) {
            return Err(PaletteError::OutOfRange(v, p.get()));
        }
        let mut edges = Vec::new();
        for i in 0..vertices.len() {
            for j in (i + 1)..vertices.len() {
                let (a, b) = (vertices[i], vertices[j]);
                let c = half_raw(p, a, b);
                if vertices.binary_search(&c).is_ok() {
                    edges.push(Edge { a, label: c, b });
                }
            }
        }
        edges.sort_unstable();
        Ok(PaletteGraph {
            p: p.get(),
            vertices,
            edges,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_list_string(&self) -> String {
        self.edges
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let idx = |v: u32| self.vertices.binary_search(&v).unwrap();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            let (i, j) = (idx(e.a), idx(e.b));
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(u) = stack.pop() {
                for &v in &adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        let mut out = vec![Vec::new(); count];
        for (i, &c) in comp.iter().enumerate() {
            out[c].push(self.vertices[i]);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Restriction to a vertex subset: drop vertices outside `set` and edges
    /// whose label falls outside `set`. Agrees with rebuilding from scratch.
    pub fn restrict(&self, set: &[u32]) -> Result<PaletteGraph, PaletteError> {
        let mut keep: Vec<u32> = set.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let missing: Vec<u32> = keep
            .iter()
            .copied()
            .filter(|v| self.vertices.binary_search(v).is_err())
            .collect();
        if !missing.is_empty() {
            return Err(PaletteError::NotASubset(missing));
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|e| {
                keep.binary_search(&e.a).is_ok()
                    && keep.binary_search(&e.b).is_ok()
                    && keep.binary_search(&e.label).is_ok()
            })
            .collect();
        Ok(PaletteGraph {
            p: self.p,
            vertices: keep,
            edges,
        })
    }

    /// Deterministic spanning tree: grow breadth-first from the lowest vertex,
    /// scanning neighbors in edge order.
    pub fn spanning_tree(&self) -> Result<Vec<Edge>, PaletteError> {
        if !self.is_connected() {
            return Err(PaletteError::Disconnected);
        }
        let mut in_tree = vec![self.vertices[0]];
        let mut tree = Vec::new();
        while tree.len() + 1 < self.vertices.len() {
            let mut added = false;
            // lowest frontier vertex first, then lowest new edge
            'grow: for &u in in_tree.clone().iter() {
                for e in &self.edges {
                    let other = if e.a == u {
                        e.b
                    } else if e.b == u {
                        e.a
                    } else {
                        continue;
                    };
                    if !in_tree.contains(&other) {
                        in_tree.push(other);
                        in_tree.sort_unstable();
                        tree.push(*e);
                        added = true;
                        break 'grow;
                    }
                }
            }
            if !added {
                return Err(PaletteError::Disconnected);
            }
        }
        tree.sort_unstable();
        Ok(tree)
    }
}

/// The `(k-1) x k` incidence-with-label matrix of a spanning tree: rows are
/// tree edges, columns are vertices; entry 1 at each endpoint, -2 at the
/// label's column, 0 elsewhere.
#[derive(Debug, Clone, Serialize)]
pub struct TreeMatrix {
    pub vertex_order: Vec<u32>,
    pub edge_order: Vec<Edge>,
    pub rows: Vec<Vec<i64>>,
}

impl TreeMatrix {
    pub fn new(graph: &PaletteGraph, tree: &[Edge]) -> Result<Self, PaletteError> {
        if tree.len() + 1 != graph.vertices().len() {
            return Err(PaletteError::NotASpanningTree);
        }
        for e in tree {
            if !graph.edges().contains(e) {
                return Err(PaletteError::NotASpanningTree);
            }
        }
        // acyclicity via union-find
        let n = graph.vertices().len();
        let idx = |v: u32| graph.vertices().binary_search(&v).unwrap();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for e in tree {
            let (ra, rb) = (find(&mut parent, idx(e.a)), find(&mut parent, idx(e.b)));
            if ra == rb {
                return Err(PaletteError::NotASpanningTree);
            }
            parent[ra] = rb;
        }
        let vertex_order = graph.vertices().to_vec();
        let mut rows = Vec::with_capacity(tree.len());
        for e in tree {
            let mut row = vec![0i64; n];
            row[idx(e.a)] += 1;
            row[idx(e.b)] += 1;
            row[idx(e.label)] -= 2;
            rows.push(row);
        }
        Ok(TreeMatrix {
            vertex_order,
            edge_order: tree.to_vec(),
            rows,
        })
    }

    /// Integer determinant of the square matrix obtained by deleting the last
    /// column.
    pub fn reduced_determinant(&self) -> i64 {
        let k = self.rows.len();
        let m: Vec<Vec<i64>> = self.rows.iter().map(|r| r[..k].to_vec()).collect();
        det_i64(m)
    }
}

/// Fraction-free Gaussian elimination (Bareiss) over the integers.
pub(crate) fn det_i64(mut m: Vec<Vec<i64>>) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1i64;
    let mut prev = 1i64;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| m[i][k] != 0);
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Outcome of the determinant checks for a minimal connected subset.
#[derive(Debug, Clone, Serialize)]
pub struct DetReport {
    pub determinant: i64,
    pub is_odd: bool,
    pub below_power_bound: bool,
    pub divisible_by_p: bool,
    pub abs_equals_p: bool,
}

impl DetReport {
    pub fn all_pass(&self) -> bool {
        self.is_odd && self.below_power_bound && self.divisible_by_p && self.abs_equals_p
    }
}

/// Check det(A') is odd, |det| < 2^(k-1), p | det, and |det| = p, for a tree
/// matrix of a connected subset of minimal size `floor(log2 p) + 2`.
pub fn verify_det_properties(m: &TreeMatrix, p: Prime) -> Result<DetReport, PaletteError> {
    let expected = min_connected_size(p);
    if m.vertex_order.len() != expected {
        return Err(PaletteError::WrongSubsetSize {
            expected,
            got: m.vertex_order.len(),
        });
    }
    let det = m.reduced_determinant();
    let k = m.vertex_order.len();
    Ok(DetReport {
        determinant: det,
        is_odd: det.rem_euclid(2) == 1,
        below_power_bound: det.unsigned_abs() < (1u64 << (k - 1)),
        divisible_by_p: det % p.get() as i64 == 0,
        abs_equals_p: det.unsigned_abs() == p.get() as u64,
    })
}

/// `floor(log2 p) + 2`, the minimum size of a connected palette graph with
/// more than one vertex.
pub fn min_connected_size(p: Prime) -> usize {
    (31 - p.get().leading_zeros()) as usize + 2
}

/// Search for a bijection `S -> S2` preserving the "half lands inside" relation
/// on pairs. Plain backtracking; the sets of interest have at most 7 elements.
pub fn palette_isomorphic(s: &[u32], s2: &[u32], p: Prime) -> Option<Vec<(u32, u32)>> {
    let g1 = PaletteGraph::build(s, p).ok()?;
    let g2 = PaletteGraph::build(s2, p).ok()?;
    if g1.vertices().len() != g2.vertices().len() || g1.edges().len() != g2.edges().len() {
        return None;
    }
    let v1 = g1.vertices().to_vec();
    let v2 = g2.vertices().to_vec();
    let n = v1.len();
    let adj = |g: &PaletteGraph, a: u32, b: u32| {
        g.edges().iter().any(|e| (e.a, e.b) == (a.min(b), a.max(b)))
    };
    let mut assign: Vec<Option<u32>> = vec![None; n];
    let mut used = vec![false; n];
    fn backtrack(
        i: usize,
        v1: &[u32],
        v2: &[u32],
        assign: &mut Vec<Option<u32>>,
        used: &mut Vec<bool>,
        adj1: &dyn Fn(u32, u32) -> bool,
        adj2: &dyn Fn(u32, u32) -> bool,
    ) -> bool {
        if i == v1.len() {
            return true;
        }
        for j in 0..v2.len() {
            if used[j] {
                continue;
            }
            let ok = (0..i).all(|k| {
                adj1(v1[i], v1[k]) == adj2(v2[j], assign[k].unwrap())
            });
            if ok {
                assign[i] = Some(v2[j]);
                used[j] = true;
                if backtrack(i + 1, v1, v2, assign, used, adj1, adj2) {
                    return true;
                }
                assign[i] = None;
                used[j] = false;
            }
        }
        false
    }
    let a1 = |a: u32, b: u32| adj(&g1, a, b);
    let a2 = |a: u32, b: u32| adj(&g2, a, b);
    if backtrack(0, &v1, &v2, &mut assign, &mut used, &a1, &a2) {
        Some(
            v1.iter()
                .zip(assign.iter())
                .map(|(&a, b)| (a, b.unwrap()))
                .collect(),
        )
    } else {
        None
    }
}

/// Search all `p(p-1)` affine maps for one with `f(S) = S2`.
pub fn affine_equivalent(s: &[u32], s2: &[u32], p: Prime) -> Option<AffineMap> {
    let mut t1: Vec<u32> = s.to_vec();
    t1.sort_unstable();
    t1.dedup();
    let mut t2: Vec<u32> = s2.to_vec();
    t2.sort_unstable();
    t2.dedup();
    if t1.len() != t2.len() {
        return None;
    }
    AffineMap::all(p).find(|f| f.image(&t1) == t2)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub representative: Vec<u32>,
    pub orbit_size: usize,
    pub members: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub p: u32,
    pub subset_size: usize,
    pub total_subsets: usize,
    pub connected_count: usize,
    pub classes: Vec<ClassReport>,
}

/// Enumerate all `size`-subsets of `Z/p`, keep those with connected palette
/// graph, and group them into affine orbits. Orbits are computed by applying
/// every affine map to each unclassified set, which is cheap at this scale.
pub fn classify_subsets(p: Prime, size: usize) -> Result<ClassificationReport, PaletteError> {
    if size < 2 || size > p.get() as usize {
        return Err(PaletteError::SizeOutOfRange {
            size,
            max: p.get(),
        });
    }
    let mut total = 0usize;
    let mut connected: Vec<Vec<u32>> = Vec::new();
    let mut subset: Vec<u32> = (0..size as u32).collect();
    loop {
        total += 1;
        let g = PaletteGraph::build(&subset, p)?;
        if g.is_connected() {
            connected.push(subset.clone());
        }
        // next combination in lexicographic order
        let n = p.get();
        let k = size;
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if subset[i] != n - (k - i) as u32 {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                i = usize::MAX;
                break;
            }
        }
        if i == usize::MAX {
            break;
        }
    }
    connected.sort();
    let mut classified: Vec<bool> = vec![false; connected.len()];
    let mut classes = Vec::new();
    for i in 0..connected.len() {
        if classified[i] {
            continue;
        }
        let mut members: Vec<Vec<u32>> = AffineMap::all(p)
            .map(|f| f.image(&connected[i]))
            .collect();
        members.sort();
        members.dedup();
        for m in &members {
            if let Ok(j) = connected.binary_search(m) {
                classified[j] = true;
            }
        }
        classes.push(ClassReport {
            representative: members[0].clone(),
            orbit_size: members.len(),
            members,
        });
    }
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(ClassificationReport {
        p: p.get(),
        subset_size: size,
        total_subsets: total,
        connected_count: connected.len(),
        classes,
    })
}

/// Which five-color family formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `{a, b, 3a+9b, 6a+6b, 10a+2b}`, affinely equivalent to `{1,4,6,7,8}`.
    FiveA,
    /// `{a, b, 5a+7b, 2a+10b, 10a+2b}`, affinely equivalent to `{0,4,6,7,8}`.
    FiveB,
}

pub const CANONICAL_A: [u32; 5] = [1, 4, 6, 7, 8];
pub const CANONICAL_B: [u32; 5] = [0, 4, 6, 7, 8];

/// Evaluate a family formula at an ordered pair of distinct residues mod 11.
pub fn palette_family(family: Family, a: Residue, b: Residue) -> Result<Vec<u32>, PaletteError> {
    let p = a.modulus();
    if p != b.modulus() {
        return Err(PaletteError::Mod(ModError::ModulusMismatch(
            p.get(),
            b.modulus().get(),
        )));
    }
    if a == b {
        return Err(PaletteError::Mod(ModError::ZeroAlpha));
    }
    let (av, bv) = (a.get() as i64, b.get() as i64);
    let mut set = match family {
        Family::FiveA => vec![
            p.reduce(av),
            p.reduce(bv),
            p.reduce(3 * av + 9 * bv),
            p.reduce(6 * av + 6 * bv),
            p.reduce(10 * av + 2 * bv),
        ],
        Family::FiveB => vec![
            p.reduce(av),
            p.reduce(bv),
            p.reduce(5 * av + 7 * bv),
            p.reduce(2 * av + 10 * bv),
            p.reduce(10 * av + 2 * bv),
        ],
    };
    set.sort_unstable();
    set.dedup();
    Ok(set)
}

/// The auxiliary seven-vertex graph of the ten-to-five reduction: the palette
/// graph of `{0,4,6,7,8}` extended by vertices 3 and 10 and five extra edges.
pub fn g1_graph(p: Prime) -> PaletteGraph {
    let base = PaletteGraph::build(&CANONICAL_B, p).unwrap();
    let mut vertices = base.vertices.clone();
    vertices.extend_from_slice(&[3, 10]);
    vertices.sort_unstable();
    let mut edges = base.edges.clone();
    for (a, c, b) in [(0, 3, 6), (0, 7, 3), (3, 0, 8), (4, 7, 10), (7, 3, 10)] {
        let (lo, hi) = (a.min(b), a.max(b));
        edges.push(Edge {
            a: lo,
            label: c,
            b: hi,
        });
    }
    edges.sort_unstable();
    PaletteGraph {
        p: p.get(),
        vertices,
        edges,
    }
}
