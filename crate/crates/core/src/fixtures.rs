//! Graphs used throughout the tests and documentation.

use crate::graph::{Vertex, WeightedGraph};

/// Vertex ids of [`mm`] in canonical order.
pub const MM_IDS: [&str; 10] = ["v1", "v2", "v3", "v4", "w3", "w4", "v5", "v6", "v7", "v8"];

/// Resolution graph of `z² = (y + x³)(y + x²)(x³⁴ − y¹³)`: two chains
/// `v3–v4` and `w3–w4` joining `v2` to `v5`, a leaf `v1` on `v2`, and the
/// tail `v5–v6–v7–v8`.
pub fn mm() -> WeightedGraph {
    let e = [-1, -6, -3, -3, -3, -3, -1, -5, -2, -2];
    let vertices = MM_IDS.iter().zip(e).map(|(id, e)| Vertex::new(*id, 0, e)).collect();
    let edges = [
        ("v1", "v2"),
        ("v2", "v3"),
        ("v3", "v4"),
        ("v4", "v5"),
        ("v2", "w3"),
        ("w3", "w4"),
        ("w4", "v5"),
        ("v5", "v6"),
        ("v6", "v7"),
        ("v7", "v8"),
    ];
    WeightedGraph::new(vertices, &edges).expect("MM graph is valid")
}

/// Two (-2)-curves meeting once, vertices `u` and `w`.
pub fn a2() -> WeightedGraph {
    WeightedGraph::new(vec![Vertex::new("u", 0, -2), Vertex::new("w", 0, -2)], &[("u", "w")])
        .expect("A2 is valid")
}

/// A single curve `v` with the given genus and self-intersection.
pub fn single(genus: i64, self_intersection: i64) -> WeightedGraph {
    WeightedGraph::new(vec![Vertex::new("v", genus, self_intersection)], &[] as &[(&str, &str)])
        .expect("single vertex is valid")
}
