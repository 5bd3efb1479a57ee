//! Cells of the moduli spaces X_{n,k} of holocoloured graphs.
//!
//! Uncoloured admissible graphs (rank n, core, every vertex of valence ≥ 3
//! counting legs) are generated from the rose with all legs at its vertex by
//! repeatedly splitting a vertex in two; every admissible graph arises this
//! way because contracting a non-loop edge preserves admissibility. Injective
//! colourings into `1..=3(n−1)+k` are then listed once per orbit of the
//! graph's automorphism group acting on edges.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Colour, Edge, EdgeSet, Graph, Leg};
use crate::iso::{canonical_form, canonical_labelling, CanonicalForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuliError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("{what} = {value} exceeds the configured limit {limit}")]
    Guard { what: &'static str, value: usize, limit: usize },
    #[error("X_{{{n},{k}}} has {count} cells, more than the configured limit {limit}")]
    TooManyCells { n: u32, k: u32, count: u128, limit: usize },
}

/// Scale guards for enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliConfig {
    pub max_rank: u32,
    pub max_legs: u32,
    pub max_cells: usize,
    /// Optional upper bound on vertex valence (legs counted).
    pub max_valence: Option<usize>,
}

impl Default for ModuliConfig {
    fn default() -> Self {
        ModuliConfig { max_rank: 3, max_legs: 4, max_cells: 200_000, max_valence: None }
    }
}

/// Number of available colours, `3(n−1)+k`: the most edges an admissible graph can have.
pub fn colour_capacity(n: u32, k: u32) -> Result<u32, ModuliError> {
    if n == 0 {
        return Err(ModuliError::ZeroRank);
    }
    Ok(3 * (n - 1) + k)
}

/// Rank n, core, and every vertex of valence at least 3 (and at most `max_valence`).
pub fn is_admissible(g: &Graph, n: u32, max_valence: Option<usize>) -> bool {
    g.is_connected()
        && g.rank() == n as usize
        && g.is_core()
        && g.vertices().iter().all(|&v| {
            let val = g.valence(v);
            val >= 3 && max_valence.is_none_or(|m| val <= m)
        })
}

fn check_guards(n: u32, k: u32, config: &ModuliConfig) -> Result<(), ModuliError> {
    colour_capacity(n, k)?;
    if n > config.max_rank {
        return Err(ModuliError::Guard { what: "rank", value: n as usize, limit: config.max_rank as usize });
    }
    if k > config.max_legs {
        return Err(ModuliError::Guard { what: "legs", value: k as usize, limit: config.max_legs as usize });
    }
    Ok(())
}

fn rose_with_legs(n: u32, k: u32) -> Graph {
    let edges = (1..=n).map(|i| Edge { id: i, ends: [0, 0], colour: 1 }).collect();
    let legs = (1..=k).map(|l| Leg { label: l, at: 0 }).collect();
    Graph::new(vec![0], edges, legs).expect("rose is valid")
}

/// An item incident to a vertex: one end of an edge, or a leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Incidence {
    End { edge: usize, side: usize },
    Leg(usize),
}

/// All graphs obtained from `g` by splitting one vertex into two joined by a new
/// edge, each side keeping at least two of the old incidences.
fn vertex_splits(g: &Graph) -> Vec<Graph> {
    let fresh_vertex = g.vertices().iter().max().map_or(0, |m| m + 1);
    let fresh_edge = g.edges().iter().map(|e| e.id).max().unwrap_or(0) + 1;
    let mut out = Vec::new();
    for &v in g.vertices() {
        let mut items = Vec::new();
        for (i, e) in g.edges().iter().enumerate() {
            for side in 0..2 {
                if e.ends[side] == v {
                    items.push(Incidence::End { edge: i, side });
                }
            }
        }
        for (i, l) in g.legs().iter().enumerate() {
            if l.at == v {
                items.push(Incidence::Leg(i));
            }
        }
        if items.len() < 4 {
            continue;
        }
        // the first item stays on v, so each split is produced once
        for mask in 0u64..(1 << (items.len() - 1)) {
            let moved: Vec<Incidence> =
                (1..items.len()).filter(|i| mask >> (i - 1) & 1 == 1).map(|i| items[i]).collect();
            if moved.len() < 2 || items.len() - moved.len() < 2 {
                continue;
            }
            let mut edges = g.edges().to_vec();
            let mut legs = g.legs().to_vec();
            for item in &moved {
                match *item {
                    Incidence::End { edge, side } => edges[edge].ends[side] = fresh_vertex,
                    Incidence::Leg(i) => legs[i].at = fresh_vertex,
                }
            }
            edges.push(Edge { id: fresh_edge, ends: [v, fresh_vertex], colour: 1 });
            let mut vertices = g.vertices().to_vec();
            vertices.push(fresh_vertex);
            out.push(Graph::new(vertices, edges, legs).expect("split keeps the graph valid"));
        }
    }
    out
}

/// One representative per isomorphism class of uncoloured admissible graphs
/// (legs stay labelled), in canonical-form order. Every edge has colour 1.
pub fn enumerate_uncoloured(n: u32, k: u32, config: &ModuliConfig) -> Result<Vec<Graph>, ModuliError> {
    check_guards(n, k, config)?;
    let mut seen: BTreeMap<CanonicalForm, Graph> = BTreeMap::new();
    let mut frontier = vec![rose_with_legs(n, k)];
    let max_vertices = (2 * (n - 1) + k).max(1) as usize;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in frontier {
            let form = canonical_form(&g, false);
            if seen.contains_key(&form) {
                continue;
            }
            let g = form.to_graph();
            if g.n_vertices() < max_vertices {
                next.extend(vertex_splits(&g).into_iter().filter(|h| h.is_core()));
            }
            seen.insert(form, g);
        }
        frontier = next;
    }
    Ok(seen.into_values().filter(|g| is_admissible(g, n, config.max_valence)).collect())
}

/// Edge classes of a canonical graph: runs of parallel edges (same endpoints).
fn parallel_classes(g: &Graph) -> Vec<(u32, u32, usize)> {
    let mut classes: Vec<(u32, u32, usize)> = Vec::new();
    for e in g.edges() {
        match classes.last_mut() {
            Some((a, b, m)) if [*a, *b] == e.ends => *m += 1,
            _ => classes.push((e.ends[0], e.ends[1], 1)),
        }
    }
    classes
}

/// The automorphism group of `g` acting on its parallel classes, as class permutations.
fn class_actions(g: &Graph, classes: &[(u32, u32, usize)]) -> Vec<Vec<usize>> {
    let index: HashMap<(u32, u32), usize> = classes.iter().enumerate().map(|(i, &(a, b, _))| ((a, b), i)).collect();
    canonical_labelling(g, false)
        .automorphisms()
        .into_iter()
        .map(|alpha| {
            classes
                .iter()
                .map(|&(a, b, _)| {
                    let x = g.vertices()[alpha[g.vertex_index(a)]];
                    let y = g.vertices()[alpha[g.vertex_index(b)]];
                    index[&(x.min(y), x.max(y))]
                })
                .collect()
        })
        .collect()
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// Number of colour orbits of `g`: injective colourings divided by the order of
/// the edge permutation group (which acts freely on them). That group is the
/// set of class permutations induced by vertex automorphisms, extended by
/// arbitrary permutations within each parallel class.
fn orbit_count(g: &Graph, capacity: u32) -> u128 {
    let classes = parallel_classes(g);
    let n = g.n_edges() as u128;
    if n > capacity as u128 {
        return 0;
    }
    let colourings = factorial(capacity as u128) / factorial(capacity as u128 - n);
    let induced: BTreeSet<Vec<usize>> = class_actions(g, &classes).into_iter().collect();
    let within: u128 = classes.iter().map(|c| factorial(c.2 as u128)).product();
    colourings / (induced.len() as u128 * within)
}

/// Total number of cells of X_{n,k}, computed without listing them.
pub fn count_cells(n: u32, k: u32, config: &ModuliConfig) -> Result<u128, ModuliError> {
    let capacity = colour_capacity(n, k)?;
    Ok(enumerate_uncoloured(n, k, config)?.iter().map(|g| orbit_count(g, capacity)).sum())
}

/// Orbit representatives of injective colourings, as colour sets per class.
fn colour_orbits(classes: &[(u32, u32, usize)], actions: &[Vec<usize>], capacity: u32) -> Vec<Vec<Vec<Colour>>> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<Colour>> = Vec::new();
    let mut used = BTreeSet::new();
    assign_classes(classes, 0, capacity, &mut used, &mut current, &mut |assignment| {
        let minimal = actions.iter().all(|act| {
            let mut image = vec![Vec::new(); assignment.len()];
            for (c, set) in assignment.iter().enumerate() {
                image[act[c]] = set.clone();
            }
            image.as_slice() >= assignment
        });
        if minimal {
            out.push(assignment.to_vec());
        }
    });
    out
}

fn assign_classes(
    classes: &[(u32, u32, usize)],
    idx: usize,
    capacity: u32,
    used: &mut BTreeSet<Colour>,
    current: &mut Vec<Vec<Colour>>,
    emit: &mut dyn FnMut(&[Vec<Colour>]),
) {
    if idx == classes.len() {
        emit(current);
        return;
    }
    let free: Vec<Colour> = (1..=capacity).filter(|c| !used.contains(c)).collect();
    for set in free.into_iter().combinations(classes[idx].2) {
        used.extend(&set);
        current.push(set);
        assign_classes(classes, idx + 1, capacity, used, current, emit);
        let set = current.pop().expect("pushed above");
        for c in set {
            used.remove(&c);
        }
    }
}

/// A cell of X_{n,k}: a holocoloured admissible graph in coloured canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub graph: Graph,
    pub form: CanonicalForm,
}

impl Cell {
    fn from_graph(g: &Graph) -> Self {
        let form = canonical_form(g, true);
        let graph = form.to_graph().into_holocoloured().expect("colourings are injective");
        Cell { graph, form }
    }

    /// Dimension of the open simplex, `N − 1`.
    pub fn dimension(&self) -> usize {
        self.graph.n_edges() - 1
    }

    /// Colours in edge order.
    pub fn colours(&self) -> Vec<Colour> {
        self.graph.edges().iter().map(|e| e.colour).collect()
    }
}

/// One holocoloured representative per coloured-isomorphism class, ordered by
/// dimension and then by canonical form.
pub fn enumerate_admissible(n: u32, k: u32) -> Result<Vec<Cell>, ModuliError> {
    enumerate_admissible_with(n, k, &ModuliConfig::default())
}

pub fn enumerate_admissible_with(n: u32, k: u32, config: &ModuliConfig) -> Result<Vec<Cell>, ModuliError> {
    let capacity = colour_capacity(n, k)?;
    let graphs = enumerate_uncoloured(n, k, config)?;
    let count: u128 = graphs.iter().map(|g| orbit_count(g, capacity)).sum();
    if count > config.max_cells as u128 {
        return Err(ModuliError::TooManyCells { n, k, count, limit: config.max_cells });
    }
    let mut cells: Vec<Cell> = graphs
        .par_iter()
        .flat_map_iter(|g| {
            let classes = parallel_classes(g);
            let actions = class_actions(g, &classes);
            colour_orbits(&classes, &actions, capacity)
                .into_iter()
                .map(|assignment| {
                    let colours: Vec<Colour> = assignment.into_iter().flatten().collect();
                    let edges =
                        g.edges().iter().zip(colours).map(|(e, colour)| Edge { colour, ..e.clone() }).collect();
                    Cell::from_graph(&Graph::new(g.vertices().to_vec(), edges, g.legs().to_vec()).expect("valid"))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    cells.sort_by(|a, b| a.dimension().cmp(&b.dimension()).then_with(|| a.form.cmp(&b.form)));
    Ok(cells)
}

/// True iff some forest contraction of `b` is coloured-isomorphic to `a`.
pub fn face_relation(a: &Cell, b: &Cell) -> bool {
    let (na, nb) = (a.graph.n_edges(), b.graph.n_edges());
    if na > nb || a.graph.rank() != b.graph.rank() {
        return false;
    }
    let ids = b.graph.edge_ids();
    let related = ids.iter().combinations(nb - na).any(|f| {
        let forest: EdgeSet = f.into_iter().collect();
        b.graph.is_forest(&forest) && canonical_form(&b.graph.contract(&forest), true) == a.form
    });
    related
}

/// The poset of cells with its covering relation (single-edge contractions).
#[derive(Clone, Debug)]
pub struct ModuliPoset {
    pub n: u32,
    pub k: u32,
    pub cells: Vec<Cell>,
    /// `(i, j)` with cell `i` obtained from cell `j` by contracting one non-loop edge.
    pub covers: Vec<(usize, usize)>,
}

impl ModuliPoset {
    pub fn build(n: u32, k: u32, config: &ModuliConfig) -> Result<Self, ModuliError> {
        let cells = enumerate_admissible_with(n, k, config)?;
        let index: HashMap<&CanonicalForm, usize> = cells.iter().enumerate().map(|(i, c)| (&c.form, i)).collect();
        let mut covers: Vec<(usize, usize)> = cells
            .par_iter()
            .enumerate()
            .flat_map_iter(|(j, cell)| {
                cell.graph
                    .edges()
                    .iter()
                    .filter(|e| !e.is_loop())
                    .filter_map(|e| index.get(&canonical_form(&cell.graph.contract(&EdgeSet::from([e.id])), true)))
                    .map(|&i| (i, j))
                    .collect::<Vec<_>>()
            })
            .collect();
        covers.sort_unstable();
        covers.dedup();
        Ok(ModuliPoset { n, k, cells, covers })
    }

    /// Cells per dimension `0..=max`; empty for an empty complex.
    pub fn f_vector(&self) -> Vec<usize> {
        f_vector(&self.cells)
    }

    /// `a ≤ b` in the reflexive-transitive closure of the covers.
    pub fn is_face(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let mut stack = vec![b];
        let mut seen = BTreeSet::new();
        while let Some(j) = stack.pop() {
            for &(i, jj) in &self.covers {
                if jj == j && seen.insert(i) {
                    if i == a {
                        return true;
                    }
                    stack.push(i);
                }
            }
        }
        false
    }
}

pub fn f_vector(cells: &[Cell]) -> Vec<usize> {
    let Some(top) = cells.iter().map(Cell::dimension).max() else {
        return Vec::new();
    };
    let mut counts = vec![0; top + 1];
    for c in cells {
        counts[c.dimension()] += 1;
    }
    counts
}

/// Minimal edge sets whose vanishing drops the rank: the circuits of `g`.
/// Every face at infinity contains one of these.
pub fn faces_at_infinity(g: &Graph) -> Vec<EdgeSet> {
    g.circuits()
}

/// Serializable summary of a cell.
#[derive(Clone, Debug, Serialize)]
pub struct CellSummary {
    pub dimension: usize,
    pub vertices: Vec<u32>,
    pub edges: Vec<Edge>,
    pub legs: Vec<Leg>,
}

impl From<&Cell> for CellSummary {
    fn from(c: &Cell) -> Self {
        CellSummary {
            dimension: c.dimension(),
            vertices: c.graph.vertices().to_vec(),
            edges: c.graph.edges().to_vec(),
            legs: c.graph.legs().to_vec(),
        }
    }
}
