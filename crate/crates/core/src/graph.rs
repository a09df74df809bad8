//! Undirected simple graphs on vertex set `{1, ..., m}` and the purely
//! combinatorial predicates used throughout the crate: neighborhoods,
//! maximal cliques, chordality and induced-path detection.
//!
//! Vertices are 1-based in every textual and serialized form and 0-based
//! internally.

use crate::error::{Error, Result};

/// Largest vertex count accepted. Neighborhoods are stored as `u64` masks
/// and clique/automorphism enumeration is exponential in the worst case,
/// so this is a deliberate desk-scale bound.
pub const MAX_VERTICES: usize = 32;

/// An undirected simple graph on vertices `0..m` (displayed 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    m: usize,
    /// `adj[i]` has bit `j` set iff `{i,j}` is an edge.
    adj: Vec<u64>,
    /// Sorted list of edges `(i, j)` with `i < j`, 0-based.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from 0-based endpoint pairs. Rejects self-loops,
    /// duplicate edges and out-of-range endpoints.
    pub fn new(m: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("vertex count must be positive".into()));
        }
        if m > MAX_VERTICES {
            return Err(Error::LimitExceeded(format!(
                "graph has {m} vertices; the supported maximum is {MAX_VERTICES}"
            )));
        }
        let mut adj = vec![0u64; m];
        let mut edges = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            if a >= m || b >= m {
                return Err(Error::InvalidInput(format!(
                    "edge ({}, {}) has an endpoint outside 1..={m}",
                    a + 1,
                    b + 1
                )));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop at vertex {}", a + 1)));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if adj[i] >> j & 1 == 1 {
                return Err(Error::InvalidInput(format!(
                    "duplicate edge ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
            edges.push((i, j));
        }
        edges.sort_unstable();
        Ok(Graph { m, adj, edges })
    }

    /// Complete graph on `m` vertices.
    pub fn complete(m: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                edges.push((i, j));
            }
        }
        Graph::new(m, &edges)
    }

    /// Empty graph on `m` vertices.
    pub fn empty(m: usize) -> Result<Self> {
        Graph::new(m, &[])
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted 0-based edge list.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i] >> j & 1 == 1
    }

    /// Neighborhood of `i` as a bit mask.
    pub fn neighbors_mask(&self, i: usize) -> u64 {
        self.adj[i]
    }

    /// Closed neighborhood `N(i) ∪ {i}` as a bit mask.
    pub fn closed_neighborhood(&self, i: usize) -> u64 {
        self.adj[i] | 1 << i
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let mask = self.adj[i];
        (0..self.m).filter(move |j| mask >> j & 1 == 1)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones() as usize
    }

    /// Connected components, each a sorted vertex list.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.m];
        let mut components = Vec::new();
        for start in 0..self.m {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Relabels vertices by `perm` (vertex `i` becomes `perm[i]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let edges: Vec<(usize, usize)> =
            self.edges.iter().map(|&(i, j)| (perm[i], perm[j])).collect();
        Graph::new(self.m, &edges)
    }

    /// All inclusion-maximal cliques, each sorted, the list sorted
    /// lexicographically. Bron–Kerbosch with max-degree pivoting.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let all: u64 = if self.m == 64 { !0 } else { (1 << self.m) - 1 };
        self.bron_kerbosch(0, all, 0, &mut out);
        let mut cliques: Vec<Vec<usize>> = out
            .into_iter()
            .map(|mask| (0..self.m).filter(|v| mask >> v & 1 == 1).collect())
            .collect();
        cliques.sort();
        cliques
    }

    fn bron_kerbosch(&self, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        // Pivot on the vertex of P ∪ X with the most neighbors in P.
        let pivot = Self::mask_iter(p | x)
            .max_by_key(|&u| (self.adj[u] & p).count_ones())
            .unwrap();
        let candidates = p & !self.adj[pivot];
        for v in Self::mask_iter(candidates) {
            self.bron_kerbosch(r | 1 << v, p & self.adj[v], x & self.adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }

    fn mask_iter(mask: u64) -> impl Iterator<Item = usize> {
        (0..64).filter(move |v| mask >> v & 1 == 1)
    }

    /// Chordality check by maximum cardinality search: the reverse visit
    /// order is a perfect elimination ordering iff the graph is chordal.
    pub fn is_chordal(&self) -> bool {
        let m = self.m;
        let mut visited = vec![false; m];
        let mut weight = vec![0usize; m];
        let mut order = Vec::with_capacity(m); // MCS visit order
        for _ in 0..m {
            let v = (0..m)
                .filter(|&v| !visited[v])
                .max_by_key(|&v| weight[v])
                .unwrap();
            visited[v] = true;
            order.push(v);
            for w in self.neighbors(v) {
                if !visited[w] {
                    weight[w] += 1;
                }
            }
        }
        // position[v] = index in the visit order; earlier-visited vertices
        // come later in the elimination order.
        let mut position = vec![0usize; m];
        for (idx, &v) in order.iter().enumerate() {
            position[v] = idx;
        }
        // For each v, its earlier-visited neighbors must form a clique with
        // the latest of them; checking against that single "parent" suffices.
        for (idx, &v) in order.iter().enumerate() {
            let earlier: Vec<usize> =
                self.neighbors(v).filter(|&w| position[w] < idx).collect();
            if let Some(&parent) = earlier.iter().max_by_key(|&&w| position[w]) {
                for &w in &earlier {
                    if w != parent && !self.has_edge(w, parent) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// True iff some induced path on 4 vertices exists.
    pub fn has_induced_4chain(&self) -> bool {
        // Middle edge {b,c}, then ends a ∈ N(b)∖N[c], d ∈ N(c)∖N[b] with
        // {a,d} a non-edge.
        for &(b, c) in &self.edges {
            for (b, c) in [(b, c), (c, b)] {
                let a_set = self.adj[b] & !self.closed_neighborhood(c);
                let d_set = self.adj[c] & !self.closed_neighborhood(b);
                for a in Self::mask_iter(a_set) {
                    let choices = d_set & !self.adj[a] & !(1 << a);
                    if choices != 0 {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Iterator over all `2^(m(m-1)/2)` labeled graphs on `m` vertices, in
/// edge-mask order. Used by the exhaustive verification sweeps.
pub fn enumerate_labeled(m: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let total: u64 = 1 << pairs.len();
    (0..total).map(move |mask| {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        Graph::new(m, &edges).expect("enumerated edge list is valid")
    })
}
