//! Small named graphs used throughout the tests and the command-line examples.

use crate::graph::{Colour, Edge, Graph, Leg};

fn edge(id: u32, a: u32, b: u32, colour: Colour) -> Edge {
    Edge { id, ends: [a, b], colour }
}

fn leg(label: u32, at: u32) -> Leg {
    Leg { label, at }
}

fn build(vertices: Vec<u32>, edges: Vec<Edge>, legs: Vec<Leg>) -> Graph {
    Graph::new(vertices, edges, legs)
        .and_then(Graph::into_holocoloured)
        .expect("fixture graphs are valid")
}

/// Three vertices; edges 1 = (0,2), 2 = (0,1) and the double edge 3, 4 = (1,2).
/// Legs 1 and 2 sit at vertex 0, leg 3 at vertex 1, leg 4 at vertex 2.
pub fn dunce_cap() -> Graph {
    build(
        vec![0, 1, 2],
        vec![edge(1, 0, 2, 1), edge(2, 0, 1, 2), edge(3, 2, 1, 3), edge(4, 2, 1, 4)],
        vec![leg(1, 0), leg(2, 0), leg(3, 1), leg(4, 2)],
    )
}

/// Two vertices joined by three edges, one leg on each vertex.
pub fn sunrise() -> Graph {
    build(
        vec![0, 1],
        vec![edge(1, 0, 1, 1), edge(2, 0, 1, 2), edge(3, 0, 1, 3)],
        vec![leg(1, 0), leg(2, 1)],
    )
}

/// Two vertices joined by two edges coloured 1 and 2, one leg on each vertex.
pub fn bubble() -> Graph {
    build(vec![0, 1], vec![edge(1, 0, 1, 1), edge(2, 0, 1, 2)], vec![leg(1, 0), leg(2, 1)])
}

/// A 3-cycle with edges 1 = (0,1), 2 = (1,2), 3 = (2,0) and leg `i` at vertex `i - 1`.
pub fn triangle() -> Graph {
    build(
        vec![0, 1, 2],
        vec![edge(1, 0, 1, 1), edge(2, 1, 2, 2), edge(3, 2, 0, 3)],
        vec![leg(1, 0), leg(2, 1), leg(3, 2)],
    )
}

/// A single self-loop of the given colour with one leg.
pub fn tadpole(colour: Colour) -> Graph {
    build(vec![0], vec![edge(1, 0, 0, colour)], vec![leg(1, 0)])
}

/// The rose with `n` petals coloured `1..=n` and no legs.
pub fn rose(n: u32) -> Graph {
    build(vec![0], (1..=n).map(|i| edge(i, 0, 0, i)).collect(), vec![])
}

/// Rank 3: the Dunce's cap on vertices 0, 1, 2 with a bubble (edges 5, 6)
/// hanging off vertex 0 towards vertex 3. Contains the nested chain
/// `{3,4} ⊂ {1,2,3,4}`. Leg 1 at vertex 1, leg 2 at vertex 3.
pub fn dunce_with_bubble() -> Graph {
    build(
        vec![0, 1, 2, 3],
        vec![
            edge(1, 0, 2, 1),
            edge(2, 0, 1, 2),
            edge(3, 2, 1, 3),
            edge(4, 2, 1, 4),
            edge(5, 0, 3, 5),
            edge(6, 0, 3, 6),
        ],
        vec![leg(1, 1), leg(2, 3)],
    )
}

/// Every named fixture, for sweeps.
pub fn all() -> Vec<(&'static str, Graph)> {
    vec![
        ("dunce_cap", dunce_cap()),
        ("sunrise", sunrise()),
        ("bubble", bubble()),
        ("triangle", triangle()),
        ("tadpole", tadpole(1)),
        ("rose2", rose(2)),
        ("dunce_with_bubble", dunce_with_bubble()),
    ]
}

/// A random connected holocoloured multigraph (self-loops and parallel edges
/// allowed) with `n_edges ≥ n_vertices − 1` edges and `legs` legs.
pub fn random_connected<R: rand::Rng + ?Sized>(rng: &mut R, n_vertices: u32, n_edges: u32, legs: u32) -> Graph {
    assert!(n_vertices >= 1 && n_edges + 1 >= n_vertices, "too few edges to connect");
    let mut edges = Vec::new();
    for v in 1..n_vertices {
        let u = rng.random_range(0..v);
        edges.push((u, v));
    }
    while (edges.len() as u32) < n_edges {
        edges.push((rng.random_range(0..n_vertices), rng.random_range(0..n_vertices)));
    }
    // shuffle so that tree edges are not always the low ids
    use rand::seq::SliceRandom;
    edges.shuffle(rng);
    let edges = edges.into_iter().enumerate().map(|(i, (a, b))| edge(i as u32 + 1, a, b, i as u32 + 1)).collect();
    let legs = (1..=legs).map(|l| leg(l, rng.random_range(0..n_vertices))).collect();
    build((0..n_vertices).collect(), edges, legs)
}
