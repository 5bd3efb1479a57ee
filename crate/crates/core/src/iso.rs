//! Canonical labelling of coloured multigraphs with labelled legs.
//!
//! Vertex classes are refined by colour refinement, then every ordering
//! compatible with the refined classes is tried and the lexicographically
//! smallest encoding wins. Exhaustive, so only meant for small graphs.

use crate::graph::{Colour, Graph, LegLabel};

/// Relabelling-invariant encoding of a graph. Two graphs are isomorphic
/// (respecting colours when requested, and always respecting leg labels)
/// iff their canonical forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n_vertices: u32,
    pub leg_count: u32,
    /// `(a, b, colour)` with `a <= b`, sorted; colour is 0 for uncoloured forms.
    pub edges: Vec<(u32, u32, Colour)>,
    /// `(label, vertex)`, sorted by label.
    pub legs: Vec<(LegLabel, u32)>,
}

impl CanonicalForm {
    /// Rebuilds a graph from the form, numbering edges `1..` in form order.
    /// Uncoloured forms get colour 1 on every edge.
    pub fn to_graph(&self) -> Graph {
        use crate::graph::{Edge, Leg};
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b, c))| Edge { id: i as u32 + 1, ends: [a, b], colour: c.max(1) })
            .collect();
        let legs = self.legs.iter().map(|&(label, at)| Leg { label, at }).collect();
        Graph::new((0..self.n_vertices).collect(), edges, legs).expect("canonical form is consistent")
    }
}

/// Canonical form plus every vertex relabelling attaining it.
#[derive(Clone, Debug)]
pub struct Labelling {
    pub form: CanonicalForm,
    /// Each entry maps vertex index (position in `g.vertices()`) to its new label.
    pub optimal: Vec<Vec<u32>>,
}

impl Labelling {
    /// Vertex automorphisms as permutations of vertex indices.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let first = &self.optimal[0];
        let mut inverse = vec![0usize; first.len()];
        for (i, &l) in first.iter().enumerate() {
            inverse[l as usize] = i;
        }
        // alpha = first^{-1} . pi
        self.optimal
            .iter()
            .map(|pi| pi.iter().map(|&l| inverse[l as usize]).collect())
            .collect()
    }
}

fn refine(g: &Graph, coloured: bool) -> Vec<usize> {
    let n = g.n_vertices();
    let col = |c: Colour| if coloured { c } else { 0 };
    let mut class: Vec<usize> = {
        let sigs: Vec<(Vec<LegLabel>, usize, Vec<Colour>)> = (0..n)
            .map(|i| {
                let v = g.vertices()[i];
                let legs = g.legs().iter().filter(|l| l.at == v).map(|l| l.label).collect();
                let mut loops: Vec<Colour> =
                    g.edges().iter().filter(|e| e.is_loop() && e.ends[0] == v).map(|e| col(e.colour)).collect();
                loops.sort_unstable();
                (legs, g.valence(v), loops)
            })
            .collect();
        rank_of(&sigs)
    };
    loop {
        let distinct = class.iter().collect::<std::collections::BTreeSet<_>>().len();
        let sigs: Vec<(usize, Vec<(usize, Colour)>)> = (0..n)
            .map(|i| {
                let v = g.vertices()[i];
                let mut nb: Vec<(usize, Colour)> = g
                    .edges()
                    .iter()
                    .filter(|e| !e.is_loop())
                    .filter_map(|e| match e.ends {
                        [a, b] if a == v => Some((class[g.vertex_index(b)], col(e.colour))),
                        [a, b] if b == v => Some((class[g.vertex_index(a)], col(e.colour))),
                        _ => None,
                    })
                    .collect();
                nb.sort_unstable();
                (class[i], nb)
            })
            .collect();
        let next = rank_of(&sigs);
        let now = next.iter().collect::<std::collections::BTreeSet<_>>().len();
        class = next;
        if now == distinct {
            return class;
        }
    }
}

fn rank_of<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(s).expect("present")).collect()
}

fn encode(g: &Graph, labels: &[u32], coloured: bool) -> CanonicalForm {
    let mut edges: Vec<(u32, u32, Colour)> = g
        .edges()
        .iter()
        .map(|e| {
            let a = labels[g.vertex_index(e.ends[0])];
            let b = labels[g.vertex_index(e.ends[1])];
            (a.min(b), a.max(b), if coloured { e.colour } else { 0 })
        })
        .collect();
    edges.sort_unstable();
    let legs = g.legs().iter().map(|l| (l.label, labels[g.vertex_index(l.at)])).collect();
    CanonicalForm { n_vertices: g.n_vertices() as u32, leg_count: g.leg_count(), edges, legs }
}

/// Computes the canonical form and all optimal relabellings.
pub fn canonical_labelling(g: &Graph, coloured: bool) -> Labelling {
    let class = refine(g, coloured);
    let n_classes = class.iter().max().map_or(0, |m| m + 1);
    let blocks: Vec<Vec<usize>> =
        (0..n_classes).map(|c| (0..class.len()).filter(|&i| class[i] == c).collect()).collect();
    let mut labels = vec![0u32; class.len()];
    let mut best: Option<Labelling> = None;
    assign_blocks(g, coloured, &blocks, 0, 0, &mut labels, &mut best);
    best.unwrap_or_else(|| Labelling { form: encode(g, &[], coloured), optimal: vec![vec![]] })
}

fn assign_blocks(
    g: &Graph,
    coloured: bool,
    blocks: &[Vec<usize>],
    block: usize,
    offset: u32,
    labels: &mut Vec<u32>,
    best: &mut Option<Labelling>,
) {
    if block == blocks.len() {
        let form = encode(g, labels, coloured);
        match best {
            Some(b) if form > b.form => {}
            Some(b) if form == b.form => b.optimal.push(labels.clone()),
            _ => *best = Some(Labelling { form, optimal: vec![labels.clone()] }),
        }
        return;
    }
    let members = &blocks[block];
    let mut order: Vec<u32> = (0..members.len() as u32).collect();
    permute(&mut order, 0, &mut |perm| {
        for (slot, &i) in members.iter().enumerate() {
            labels[i] = offset + perm[slot];
        }
        assign_blocks(g, coloured, blocks, block + 1, offset + members.len() as u32, labels, best);
    });
}

fn permute(items: &mut Vec<u32>, k: usize, f: &mut dyn FnMut(&[u32])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

pub fn canonical_form(g: &Graph, coloured: bool) -> CanonicalForm {
    canonical_labelling(g, coloured).form
}

/// True iff a vertex/edge bijection preserves incidence, colours and legs.
pub fn coloured_isomorphic(g: &Graph, h: &Graph) -> bool {
    g.n_vertices() == h.n_vertices()
        && g.n_edges() == h.n_edges()
        && canonical_form(g, true) == canonical_form(h, true)
}
