//! The preorder `i ≼ j  ⇔  N(j) ∪ {j} ⊆ N(i) ∪ {i}` on the vertices of a
//! graph, the equivalence classes of mutual comparability, the induced
//! partial order on classes, the size-colored quotient graph, and the
//! red/green/blue edge classification by comparability of endpoints.

use crate::error::{Error, Result};
use crate::graph::Graph;
use serde::Serialize;

/// The closed-neighborhood preorder of a graph, together with its
/// equivalence classes and per-vertex down sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    m: usize,
    /// `rel[i][j]` iff `i ≼ j`.
    rel: Vec<Vec<bool>>,
    /// Equivalence classes of mutual comparability, each sorted, the list
    /// ordered by smallest member.
    classes: Vec<Vec<usize>>,
    /// `class_of[v]` = index into `classes`.
    class_of: Vec<usize>,
    /// `down_sets[i]` = sorted `{ j : j ≼ i }`.
    down_sets: Vec<Vec<usize>>,
}

/// Computes the preorder of `g`: `i ≼ j` iff the closed neighborhood of `j`
/// is contained in the closed neighborhood of `i`.
pub fn compute_preorder(g: &Graph) -> Preorder {
    let m = g.vertex_count();
    let closed: Vec<u64> = (0..m).map(|v| g.closed_neighborhood(v)).collect();
    let mut rel = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            rel[i][j] = closed[j] & !closed[i] == 0;
        }
    }
    let mut class_of = vec![usize::MAX; m];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..m {
        if class_of[v] != usize::MAX {
            continue;
        }
        let idx = classes.len();
        let members: Vec<usize> = (v..m).filter(|&w| rel[v][w] && rel[w][v]).collect();
        for &w in &members {
            class_of[w] = idx;
        }
        classes.push(members);
    }
    let down_sets: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..m).filter(|&j| rel[j][i]).collect())
        .collect();
    Preorder {
        m,
        rel,
        classes,
        class_of,
        down_sets,
    }
}

impl Preorder {
    pub fn vertex_count(&self) -> usize {
        self.m
    }

    /// `i ≼ j`?
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rel[i][j]
    }

    /// `i ∼ j` (both `i ≼ j` and `j ≼ i`)?
    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        self.rel[i][j] && self.rel[j][i]
    }

    /// `i` and `j` comparable in at least one direction?
    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.rel[i][j] || self.rel[j][i]
    }

    /// Down set `↓i = { j : j ≼ i }`, sorted.
    pub fn down_set(&self, i: usize) -> &[usize] {
        &self.down_sets[i]
    }

    /// `max_i |↓i|`.
    pub fn max_down_set_size(&self) -> usize {
        self.down_sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Equivalence classes, sorted by smallest member.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    /// Smallest member of class `c`; the canonical representative.
    pub fn class_rep(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    /// Dimension of the continuous stabilizer: the number of pairs `(i, j)`
    /// with `j ≼ i`, which is `Σ_i |↓i|`.
    pub fn pattern_dimension(&self) -> usize {
        self.down_sets.iter().map(Vec::len).sum()
    }
}

/// The partial order `≼` induced on the equivalence classes, with its
/// cover relation (Hasse diagram).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    /// `leq[a][b]` iff class `a ≼` class `b`.
    leq: Vec<Vec<bool>>,
    /// Cover pairs `(lower, upper)`, sorted.
    hasse: Vec<(usize, usize)>,
    /// `depth[c]` = length of the longest chain strictly below `c`.
    depth: Vec<usize>,
}

/// Builds the poset of equivalence classes from a preorder.
pub fn poset_pc(p: &Preorder) -> Poset {
    let k = p.class_count();
    let mut leq = vec![vec![false; k]; k];
    for a in 0..k {
        for b in 0..k {
            leq[a][b] = p.leq(p.class_rep(a), p.class_rep(b));
        }
    }
    // Cover relation: a ≺ b with nothing strictly between.
    let mut hasse = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a == b || !leq[a][b] {
                continue;
            }
            let covered = (0..k).any(|c| c != a && c != b && leq[a][c] && leq[c][b]);
            if !covered {
                hasse.push((a, b));
            }
        }
    }
    hasse.sort_unstable();
    let mut depth = vec![0usize; k];
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&c| (0..k).filter(|&d| d != c && leq[d][c]).count());
    for &c in &order {
        depth[c] = (0..k)
            .filter(|&d| d != c && leq[d][c])
            .map(|d| depth[d] + 1)
            .max()
            .unwrap_or(0);
    }
    Poset { leq, hasse, depth }
}

impl Poset {
    pub fn class_count(&self) -> usize {
        self.leq.len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Cover pairs `(lower, upper)`.
    pub fn hasse_edges(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn depth(&self, c: usize) -> usize {
        self.depth[c]
    }

    /// Classes with no strictly smaller class.
    pub fn minimal_classes(&self) -> Vec<usize> {
        let k = self.class_count();
        (0..k)
            .filter(|&c| (0..k).all(|d| d == c || !self.leq[d][c]))
            .collect()
    }

    /// The canonical linear extension: classes sorted by (depth, index).
    /// Class indices are already ordered by smallest member, so this is
    /// deterministic.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.class_count()).collect();
        order.sort_by_key(|&c| (self.depth[c], c));
        order
    }
}

/// The quotient graph on equivalence classes, with the class-size coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredQuotient {
    /// `sizes[c]` = |class c|.
    sizes: Vec<usize>,
    adj: Vec<Vec<bool>>,
    /// Sorted class pairs `(a, b)`, `a < b`, joined by some original edge.
    edges: Vec<(usize, usize)>,
}

/// Builds the size-colored quotient graph: one vertex per class, an edge
/// between distinct classes joined by any edge of `g`.
pub fn quotient_colored(g: &Graph, p: &Preorder) -> ColoredQuotient {
    let k = p.class_count();
    let sizes: Vec<usize> = p.classes().iter().map(Vec::len).collect();
    let mut adj = vec![vec![false; k]; k];
    let mut edges = Vec::new();
    for &(i, j) in g.edges() {
        let (a, b) = (p.class_of(i), p.class_of(j));
        if a != b && !adj[a.min(b)][a.max(b)] {
            adj[a][b] = true;
            adj[b][a] = true;
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    ColoredQuotient { sizes, adj, edges }
}

impl ColoredQuotient {
    pub fn class_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adj[a][b]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[a];
        (0..self.sizes.len()).filter(move |&b| row[b])
    }
}

/// Edge classification by comparability of the endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeColor {
    /// `i ∼ j`: comparable both ways.
    Red,
    /// Exactly one of `i ≼ j`, `j ≼ i`.
    Green,
    /// Incomparable endpoints.
    Blue,
}

/// Per-edge colors, aligned with `Graph::edges()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    colors: Vec<EdgeColor>,
}

/// Colors every edge of `g` red, green or blue.
pub fn color_edges(g: &Graph, p: &Preorder) -> EdgeColoring {
    let colors = g
        .edges()
        .iter()
        .map(|&(i, j)| {
            let ij = p.leq(i, j);
            let ji = p.leq(j, i);
            match (ij, ji) {
                (true, true) => EdgeColor::Red,
                (false, false) => EdgeColor::Blue,
                _ => EdgeColor::Green,
            }
        })
        .collect();
    EdgeColoring { colors }
}

impl EdgeColoring {
    pub fn colors(&self) -> &[EdgeColor] {
        &self.colors
    }

    pub fn count(&self, color: EdgeColor) -> usize {
        self.colors.iter().filter(|&&c| c == color).count()
    }
}

/// Sorted down set of `i`: the operation form of [`Preorder::down_set`].
pub fn down_set(p: &Preorder, i: usize) -> Result<Vec<usize>> {
    if i >= p.vertex_count() {
        return Err(Error::InvalidInput(format!(
            "vertex {} out of range 1..={}",
            i + 1,
            p.vertex_count()
        )));
    }
    Ok(p.down_set(i).to_vec())
}
