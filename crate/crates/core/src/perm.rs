//! Permutations, finite permutation groups, graph automorphism enumeration
//! (with color refinement pruning) and the order-preserving lifting of
//! quotient automorphisms to vertex permutations.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::preorder::{ColoredQuotient, Preorder};
use nalgebra::DMatrix;

/// A permutation of `0..n`, stored as its image vector: `i ↦ images[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds from an image vector, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&v| self.images[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v] = i;
        }
        Permutation { images }
    }

    /// Permutation matrix `P` with `P e_j = e_{π(j)}`, so that the map
    /// `π ↦ P_π` is a group homomorphism.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.images.len();
        DMatrix::from_fn(n, n, |r, c| if self.images[c] == r { 1.0 } else { 0.0 })
    }

    /// 1-based image vector, for serialized output.
    pub fn images_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v + 1).collect()
    }
}

/// A finite permutation group given by the full element list, sorted for
/// deterministic iteration, identity first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    perms: Vec<Permutation>,
}

impl PermGroup {
    /// Wraps an element list. The list must contain the identity and be
    /// closed under composition and inverse; [`PermGroup::is_group`]
    /// verifies that.
    pub fn new(mut perms: Vec<Permutation>) -> Self {
        perms.sort();
        perms.dedup();
        PermGroup { perms }
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.perms.binary_search(p).is_ok()
    }

    /// Closure check of the group axioms.
    pub fn is_group(&self) -> bool {
        let n = match self.perms.first() {
            Some(p) => p.len(),
            None => return false,
        };
        if !self.contains(&Permutation::identity(n)) {
            return false;
        }
        for a in &self.perms {
            if !self.contains(&a.inverse()) {
                return false;
            }
            for b in &self.perms {
                if !self.contains(&a.compose(b)) {
                    return false;
                }
            }
        }
        true
    }

    /// A small generating set, extracted greedily: add any element not yet
    /// generated, then re-close.
    pub fn generators(&self) -> Vec<Permutation> {
        let n = match self.perms.first() {
            Some(p) => p.len(),
            None => return Vec::new(),
        };
        let mut gens: Vec<Permutation> = Vec::new();
        let mut generated = vec![Permutation::identity(n)];
        for p in &self.perms {
            if generated.contains(p) {
                continue;
            }
            gens.push(p.clone());
            // Re-close under the enlarged generating set.
            let mut frontier = generated.clone();
            frontier.push(p.clone());
            generated = close_under_composition(frontier);
            if generated.len() == self.perms.len() {
                break;
            }
        }
        gens
    }
}

fn close_under_composition(seed: Vec<Permutation>) -> Vec<Permutation> {
    let mut out: Vec<Permutation> = seed;
    out.sort();
    out.dedup();
    loop {
        let mut new = Vec::new();
        for a in &out {
            for b in &out {
                let c = a.compose(b);
                if out.binary_search(&c).is_err() && !new.contains(&c) {
                    new.push(c);
                }
            }
        }
        if new.is_empty() {
            return out;
        }
        out.extend(new);
        out.sort();
        out.dedup();
    }
}

/// Enumerates all automorphisms of a vertex-colored graph given by an
/// adjacency predicate: permutations preserving both adjacency and colors.
///
/// Backtracking over vertices in decreasing-degree order, pruning by the
/// invariant (color, degree, sorted multiset of neighbor (color, degree)
/// pairs). Exponential in the worst case; fine at desk scale.
fn colored_automorphisms<F>(n: usize, adj: F, colors: &[usize]) -> Vec<Permutation>
where
    F: Fn(usize, usize) -> bool,
{
    if n == 0 {
        return vec![];
    }
    let degree: Vec<usize> = (0..n).map(|v| (0..n).filter(|&w| adj(v, w)).count()).collect();
    let invariant: Vec<(usize, usize, Vec<(usize, usize)>)> = (0..n)
        .map(|v| {
            let mut nbrs: Vec<(usize, usize)> = (0..n)
                .filter(|&w| adj(v, w))
                .map(|w| (colors[w], degree[w]))
                .collect();
            nbrs.sort_unstable();
            (colors[v], degree[v], nbrs)
        })
        .collect();

    // Assign high-degree vertices first: they prune hardest.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(degree[v]));

    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut found = Vec::new();
    search(
        n,
        &adj,
        &invariant,
        &order,
        0,
        &mut image,
        &mut used,
        &mut found,
    );
    found.sort();
    found
}

#[allow(clippy::too_many_arguments)]
fn search<F>(
    n: usize,
    adj: &F,
    invariant: &[(usize, usize, Vec<(usize, usize)>)],
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
    found: &mut Vec<Permutation>,
) where
    F: Fn(usize, usize) -> bool,
{
    if depth == n {
        found.push(Permutation::from_images(image.to_vec()).unwrap());
        return;
    }
    let v = order[depth];
    for target in 0..n {
        if used[target] || invariant[v] != invariant[target] {
            continue;
        }
        // Adjacency with every already-assigned vertex must be preserved.
        let ok = order[..depth]
            .iter()
            .all(|&w| adj(v, w) == adj(target, image[w]));
        if !ok {
            continue;
        }
        image[v] = target;
        used[target] = true;
        search(n, adj, invariant, order, depth + 1, image, used, found);
        image[v] = usize::MAX;
        used[target] = false;
    }
}

/// All automorphisms of `g`.
pub fn graph_automorphisms(g: &Graph) -> PermGroup {
    let n = g.vertex_count();
    let colors = vec![0usize; n];
    PermGroup::new(colored_automorphisms(n, |i, j| g.has_edge(i, j), &colors))
}

/// All automorphisms of the quotient graph preserving the class sizes.
pub fn colored_quotient_automorphisms(q: &ColoredQuotient) -> PermGroup {
    let k = q.class_count();
    PermGroup::new(colored_automorphisms(k, |a, b| q.has_edge(a, b), q.sizes()))
}

/// Lifts a quotient automorphism `tau` to a vertex permutation: the k-th
/// smallest member of each class goes to the k-th smallest member of the
/// image class. Rejects `tau` if some image class has a different size.
pub fn lift(tau: &Permutation, p: &Preorder) -> Result<Permutation> {
    if tau.len() != p.class_count() {
        return Err(Error::InvalidInput(format!(
            "permutation acts on {} points but there are {} classes",
            tau.len(),
            p.class_count()
        )));
    }
    let classes = p.classes();
    let mut images = vec![0usize; p.vertex_count()];
    for (c, members) in classes.iter().enumerate() {
        let target = &classes[tau.apply(c)];
        if target.len() != members.len() {
            return Err(Error::InvalidInput(format!(
                "class size not preserved: |class {}| = {} but |class {}| = {}",
                c + 1,
                members.len(),
                tau.apply(c) + 1,
                target.len()
            )));
        }
        for (k, &v) in members.iter().enumerate() {
            images[v] = target[k];
        }
    }
    Permutation::from_images(images)
}

/// The lifted image of the colored-quotient automorphism group: the
/// discrete factor of the stabilizer group, acting on vertices.
pub fn lifted_quotient_group(p: &Preorder, q: &ColoredQuotient) -> PermGroup {
    let quotient_group = colored_quotient_automorphisms(q);
    let lifted: Vec<Permutation> = quotient_group
        .elements()
        .iter()
        .map(|tau| lift(tau, p).expect("color-preserving automorphisms lift"))
        .collect();
    PermGroup::new(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::{compute_preorder, quotient_colored};
    use crate::testgraphs::{bull, four_cycle, p3};

    #[test]
    fn compose_and_inverse() {
        let a = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let b = a.inverse();
        assert!(a.compose(&b).is_identity());
        assert!(b.compose(&a).is_identity());
        // Matrix form is a homomorphism.
        let c = Permutation::from_images(vec![0, 2, 1]).unwrap();
        let prod = a.compose(&c);
        assert_eq!(a.matrix() * c.matrix(), prod.matrix());
    }

    #[test]
    fn p3_automorphisms() {
        let group = graph_automorphisms(&p3());
        assert_eq!(group.order(), 2);
        assert!(group.contains(&Permutation::from_images(vec![0, 2, 1]).unwrap()));
        assert!(group.is_group());
    }

    #[test]
    fn four_cycle_automorphisms_dihedral() {
        let group = graph_automorphisms(&four_cycle());
        assert_eq!(group.order(), 8);
        assert!(group.is_group());
    }

    #[test]
    fn bull_automorphisms() {
        let group = graph_automorphisms(&bull());
        assert_eq!(group.order(), 2);
        assert!(group.contains(&Permutation::from_images(vec![1, 0, 2, 4, 3]).unwrap()));
    }

    #[test]
    fn complete_graph_automorphisms() {
        let group = graph_automorphisms(&Graph::complete(4).unwrap());
        assert_eq!(group.order(), 24);
        assert!(group.is_group());
    }

    #[test]
    fn quotient_automorphism_orders() {
        for (g, expected) in [
            (Graph::complete(4).unwrap(), 1),
            (p3(), 2),
            (bull(), 2),
            (four_cycle(), 8),
        ] {
            let p = compute_preorder(&g);
            let q = quotient_colored(&g, &p);
            assert_eq!(colored_quotient_automorphisms(&q).order(), expected);
        }
    }

    #[test]
    fn size_coloring_blocks_swaps() {
        // Paw graph: triangle 1-2-3 plus pendant 4 on 1. Classes {1}, {2,3},
        // {4}: quotient is a path with sizes (1,2,1); the size coloring
        // forbids swapping the endpoints.
        let g = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
        let p = compute_preorder(&g);
        let q = quotient_colored(&g, &p);
        assert_eq!(colored_quotient_automorphisms(&q).order(), 1);
    }

    #[test]
    fn lift_bull_swap() {
        let g = bull();
        let p = compute_preorder(&g);
        // Classes are singletons {1},{2},{3},{4},{5}; quotient swap
        // (1 2)(4 5) lifts to the same vertex permutation.
        let tau = Permutation::from_images(vec![1, 0, 2, 4, 3]).unwrap();
        let sigma = lift(&tau, &p).unwrap();
        assert_eq!(sigma.images(), &[1, 0, 2, 4, 3]);
        assert!(lift(&Permutation::identity(5), &p).unwrap().is_identity());
    }

    #[test]
    fn lift_multi_member_classes() {
        // Two disjoint edges: classes {1,2} and {3,4}; swapping the classes
        // must send 1↦3, 2↦4.
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        let p = compute_preorder(&g);
        let tau = Permutation::from_images(vec![1, 0]).unwrap();
        let sigma = lift(&tau, &p).unwrap();
        assert_eq!(sigma.images(), &[2, 3, 0, 1]);
    }

    #[test]
    fn lift_rejects_size_mismatch() {
        // Paw graph: classes {1}, {2,3}, {4} — swapping class 1 with class
        // {2,3} is size-mismatched.
        let g = Graph::new(4, &[(0, 1), (0, 2), (1, 2), (0, 3)]).unwrap();
        let p = compute_preorder(&g);
        let tau = Permutation::from_images(vec![1, 0, 2]).unwrap();
        assert!(lift(&tau, &p).is_err());
    }

    #[test]
    fn lift_is_homomorphism() {
        for g in [p3(), bull(), four_cycle(), Graph::new(4, &[(0, 1), (2, 3)]).unwrap()] {
            let p = compute_preorder(&g);
            let q = quotient_colored(&g, &p);
            let group = colored_quotient_automorphisms(&q);
            for a in group.elements() {
                for b in group.elements() {
                    let lhs = lift(&a.compose(b), &p).unwrap();
                    let rhs = lift(a, &p).unwrap().compose(&lift(b, &p).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn generators_generate() {
        let group = graph_automorphisms(&four_cycle());
        let gens = group.generators();
        assert!(gens.len() <= 3);
        let closure = close_under_composition(
            gens.iter()
                .cloned()
                .chain(std::iter::once(Permutation::identity(4)))
                .collect(),
        );
        assert_eq!(closure.len(), group.order());
    }
}
