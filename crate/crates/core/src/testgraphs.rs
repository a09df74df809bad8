//! Small named graphs used as fixtures throughout the test suites.

use crate::graph::Graph;

/// Path on three vertices with center 1 (edges {1,2} and {1,3}).
pub fn p3() -> Graph {
    Graph::new(3, &[(0, 1), (0, 2)]).unwrap()
}

/// The bull graph: triangle 1-2-3 with horns 4 (at 1) and 5 (at 2).
pub fn bull() -> Graph {
    Graph::new(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)]).unwrap()
}

/// Cycle 1-2-3-4-1.
pub fn four_cycle() -> Graph {
    Graph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
}

/// Path 1-2-...-m.
pub fn path(m: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (0..m - 1).map(|i| (i, i + 1)).collect();
    Graph::new(m, &edges).unwrap()
}

/// Star with center 1 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<(usize, usize)> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::new(leaves + 1, &edges).unwrap()
}
