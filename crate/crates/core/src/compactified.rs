//! Compactified cells: flags of core subgraphs, face descriptors, polytope
//! vertices and facets, and the blow-up charts near the new faces.
//!
//! In a chart for the flag `G ⊋ G₁ ⊋ … ⊋ G_m` the coordinates are named by
//! edge ids: one edge `e₀` of `γ₀ = G/G₁` is set to 1, and each level `i`
//! has a marked edge whose coordinate plays the role of the scale `y_i*`.
//! For `e` in the graded piece `γ_i = G_i/G_{i+1}`,
//! `x_e = y₁*⋯y_i* · t_e` (with `t_e = 1` for the marked edge of level `i`).

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeId, EdgeSet, Graph};
use crate::polynomial::{Coefficient, Monomial, PolyError, Polynomial, VarId};
use crate::power_counting::subgraph_degree;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CellError {
    #[error("invalid flag: {0}")]
    InvalidFlag(String),
    #[error("the cell of a graph needs a connected graph of positive rank")]
    Degenerate,
    #[error("affine edge {0} is not an edge of G/G₁")]
    AffineEdge(EdgeId),
    #[error("expected {expected} marked edges, got {found}")]
    MarkedCount { expected: usize, found: usize },
    #[error("marked edge {edge} does not lie in the graded piece of level {level}")]
    MarkedEdge { level: usize, edge: EdgeId },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A strictly decreasing chain `G ⊋ G₁ ⊋ … ⊋ G_m` of core subgraphs of positive
/// rank (the graph itself is not stored). Ranks strictly decrease along the chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Flag {
    chain: Vec<EdgeSet>,
}

impl Flag {
    pub fn new(g: &Graph, chain: Vec<EdgeSet>) -> Result<Self, CellError> {
        let mut outer = g.edge_ids();
        let mut outer_rank = g.rank();
        for (i, s) in chain.iter().enumerate() {
            let level = i + 1;
            if !s.is_proper_subset(&outer) {
                return Err(CellError::InvalidFlag(format!("G_{level} = {s} is not a proper subgraph of the previous level")));
            }
            let rank = g.subgraph_rank(s);
            if rank == 0 || !g.is_core_subgraph(s) {
                return Err(CellError::InvalidFlag(format!("G_{level} = {s} is not a core subgraph of positive rank")));
            }
            if rank >= outer_rank {
                return Err(CellError::InvalidFlag(format!("rank does not drop at G_{level} = {s}")));
            }
            outer = s.clone();
            outer_rank = rank;
        }
        Ok(Flag { chain })
    }

    pub fn empty() -> Self {
        Flag { chain: Vec::new() }
    }

    /// `[G₁, …, G_m]`.
    pub fn chain(&self) -> &[EdgeSet] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Edge set of the graded piece of level `i` (`0 ≤ i ≤ m`): `E(G_i) \ E(G_{i+1})`
    /// with `G₀ = G` and `G_{m+1} = ∅`.
    pub fn piece_edges(&self, g: &Graph, i: usize) -> EdgeSet {
        let outer = if i == 0 { g.edge_ids() } else { self.chain[i - 1].clone() };
        match self.chain.get(i) {
            Some(inner) => outer.difference(inner),
            None => outer,
        }
    }

    /// The graded piece `γ_i = G_i / G_{i+1}` as a graph.
    pub fn piece(&self, g: &Graph, i: usize) -> Graph {
        let outer = if i == 0 { g.clone() } else { g.restrict(&self.chain[i - 1]) };
        match self.chain.get(i) {
            Some(inner) => outer.contract(inner),
            None => outer,
        }
    }
}

/// All nonempty flags of proper core subgraphs, ordered by length and then by
/// the shortlex positions of their members.
pub fn flags(g: &Graph) -> Vec<Flag> {
    let cores = g.core_subgraphs();
    let mut found: Vec<Vec<usize>> = (0..cores.len())
        .into_par_iter()
        .flat_map_iter(|top| {
            let mut out = Vec::new();
            extend_chain(&cores, &mut vec![top], &mut out);
            out
        })
        .collect();
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    found.into_iter().map(|idx| Flag { chain: idx.into_iter().map(|i| cores[i].clone()).collect() }).collect()
}

fn extend_chain(cores: &[EdgeSet], chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(chain.clone());
    let last = &cores[*chain.last().expect("nonempty chain")];
    for (i, c) in cores.iter().enumerate() {
        // nested cores automatically have smaller rank
        if c.is_proper_subset(last) {
            chain.push(i);
            extend_chain(cores, chain, out);
            chain.pop();
        }
    }
}

/// A face of the compactified cell: contract the forest, then go to infinity
/// along the flag of the contracted graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceDescriptor {
    pub contracted_forest: EdgeSet,
    pub flag: Flag,
}

fn require_cell(g: &Graph) -> Result<(), CellError> {
    if !g.is_connected() || g.rank() == 0 {
        return Err(CellError::Degenerate);
    }
    Ok(())
}

/// A vertex of the compactified cell: a spanning tree and an ordering of the
/// remaining edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolytopeVertex {
    pub tree: EdgeSet,
    pub ordering: Vec<EdgeId>,
}

/// All vertices; there are `#trees · |G|!` of them.
pub fn polytope_vertices(g: &Graph) -> Result<Vec<PolytopeVertex>, CellError> {
    require_cell(g)?;
    let all = g.edge_ids();
    let trees = g.spanning_trees().map_err(|_| CellError::Degenerate)?;
    Ok(trees
        .into_iter()
        .flat_map(|tree| {
            let rest: Vec<EdgeId> = all.difference(&tree).iter().collect();
            let n = rest.len();
            rest.into_iter()
                .permutations(n)
                .map(move |ordering| PolytopeVertex { tree: tree.clone(), ordering })
                .collect::<Vec<_>>()
        })
        .collect())
}

/// Codimension-one faces: `x_e = 0` for each non-loop edge, then one new face
/// per proper core subgraph.
pub fn facets(g: &Graph) -> Result<Vec<FaceDescriptor>, CellError> {
    require_cell(g)?;
    let old = g
        .edges()
        .iter()
        .filter(|e| !e.is_loop())
        .map(|e| FaceDescriptor { contracted_forest: EdgeSet::from([e.id]), flag: Flag::empty() });
    let new = g
        .core_subgraphs()
        .into_iter()
        .map(|gamma| FaceDescriptor { contracted_forest: EdgeSet::new(), flag: Flag { chain: vec![gamma] } });
    Ok(old.chain(new).collect())
}

/// A blow-up chart adapted to a flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub flag: Flag,
    pub affine_edge: EdgeId,
    /// Marked edge of each level `1..=m`; its coordinate is `y_i*`.
    pub marked: Vec<EdgeId>,
    /// Chart coordinates: every edge id except the affine one.
    pub coordinates: Vec<VarId>,
    /// `x_e` as a monomial in the coordinates.
    pub substitution: BTreeMap<EdgeId, Monomial>,
    /// `x_e` on the face, with the scale factors `y_i*` dropped.
    pub local: BTreeMap<EdgeId, Monomial>,
    /// `|E(G_i)|` per level.
    level_sizes: Vec<usize>,
}

pub fn build_chart(g: &Graph, flag: &Flag, affine_edge: EdgeId, marked: &[EdgeId]) -> Result<Chart, CellError> {
    if marked.len() != flag.len() {
        return Err(CellError::MarkedCount { expected: flag.len(), found: marked.len() });
    }
    if !flag.piece_edges(g, 0).contains(affine_edge) {
        return Err(CellError::AffineEdge(affine_edge));
    }
    for (i, &e) in marked.iter().enumerate() {
        if !flag.piece_edges(g, i + 1).contains(e) {
            return Err(CellError::MarkedEdge { level: i + 1, edge: e });
        }
    }
    let mut substitution = BTreeMap::new();
    let mut local = BTreeMap::new();
    for level in 0..=flag.len() {
        let scales: Monomial = marked[..level].iter().map(|&y| (y, 1)).collect();
        let special = if level == 0 { affine_edge } else { marked[level - 1] };
        for e in flag.piece_edges(g, level).iter() {
            let own: Monomial = if e == special { vec![] } else { vec![(e, 1)] };
            let mut full = if level == 0 { own.clone() } else { scales.iter().copied().chain(own.clone()).collect() };
            full.sort_unstable();
            substitution.insert(e, full);
            local.insert(e, own);
        }
    }
    let coordinates = g.edge_ids().iter().filter(|&e| e != affine_edge).collect();
    let level_sizes = flag.chain().iter().map(|s| s.len()).collect();
    Ok(Chart { flag: flag.clone(), affine_edge, marked: marked.to_vec(), coordinates, substitution, local, level_sizes })
}

/// Every chart of a flag: all choices of affine edge and marked edges.
pub fn charts(g: &Graph, flag: &Flag) -> Vec<Chart> {
    let affine: Vec<EdgeId> = flag.piece_edges(g, 0).iter().collect();
    let choices: Vec<Vec<EdgeId>> = (1..=flag.len()).map(|i| flag.piece_edges(g, i).iter().collect()).collect();
    let mut out = Vec::new();
    for &a in &affine {
        for marked in choices.iter().map(|c| c.iter().copied()).multi_cartesian_product() {
            out.push(build_chart(g, flag, a, &marked).expect("choices lie in their pieces"));
        }
        if choices.is_empty() {
            out.push(build_chart(g, flag, a, &[]).expect("affine edge lies in γ₀"));
        }
    }
    out
}

impl Chart {
    /// Exponents of `y_i*` in the Jacobian of the chart map: `|E(G_i)| − 1`.
    pub fn jacobian_exponents(&self) -> Vec<u32> {
        self.level_sizes.iter().map(|&n| n as u32 - 1).collect()
    }

    /// `p ∘ ρ` in the chart coordinates.
    pub fn pullback<C: Coefficient>(&self, p: &Polynomial<C>) -> Result<Polynomial<C>, CellError> {
        Ok(p.substitute_monomials(&self.coordinates, &self.substitution)?)
    }

    /// `p` evaluated on the face coordinates (scale factors dropped), over the chart coordinates.
    pub fn local_pullback<C: Coefficient>(&self, p: &Polynomial<C>) -> Result<Polynomial<C>, CellError> {
        Ok(p.substitute_monomials(&self.coordinates, &self.local)?)
    }

    /// `(p ∘ ρ) / Π (y_i*)^{k_i}`; errors if the division is not exact.
    pub fn pullback_divided<C: Coefficient>(&self, p: &Polynomial<C>, exponents: &[u32]) -> Result<Polynomial<C>, CellError> {
        let mono: Monomial = self.marked.iter().copied().zip(exponents.iter().copied()).collect();
        self.pullback(p)?
            .divide_by_monomial(&mono)
            .ok_or_else(|| CellError::InvalidFlag(format!("pullback is not divisible by {mono:?}")))
    }
}

/// Pulls back along the chart and factors out the largest power of each `y_i*`.
/// Returns the exponents per level and the remainder.
pub fn pullback_scaling<C: Coefficient>(p: &Polynomial<C>, chart: &Chart) -> Result<(Vec<u32>, Polynomial<C>), CellError> {
    if p.is_zero() {
        return Err(CellError::Poly(PolyError::Zero));
    }
    let pulled = chart.pullback(p)?;
    let exponents: Vec<u32> =
        chart.marked.iter().map(|&y| pulled.min_exponent(y).expect("marked coordinate is a chart variable")).collect();
    let remainder = chart.pullback_divided(p, &exponents)?;
    Ok((exponents, remainder))
}

/// `s_{G_i}/2 + 1` for each level; the order of the pole along `y_i* = 0`.
pub fn pole_orders(g: &Graph, flag: &Flag, d: Rational) -> Vec<Rational> {
    let one = Rational::from_integer(1);
    let two = Rational::from_integer(2);
    flag.chain().iter().map(|s| subgraph_degree(g, s, d) / two + one).collect()
}

/// The factorisation of the integrand on a new face: `ψ^{-d/2}` of each factor
/// graph `[γ_m, …, γ₁]` times the full integrand of the quotient `γ₀ = G/G₁`.
#[derive(Clone, Debug)]
pub struct RegularPart {
    pub factors: Vec<Graph>,
    pub quotient: Graph,
}

pub fn face_regular_part(g: &Graph, flag: &Flag) -> RegularPart {
    let factors = (1..=flag.len()).rev().map(|i| flag.piece(g, i)).collect();
    RegularPart { factors, quotient: flag.piece(g, 0) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::symanzik::first_symanzik;
    use crate::ScalarPolynomial;

    fn lengths(fs: &[Flag]) -> Vec<usize> {
        fs.iter().map(Flag::len).collect()
    }

    #[test]
    fn flag_lists() {
        assert_eq!(lengths(&flags(&fixtures::dunce_cap())), vec![1, 1, 1]);
        assert_eq!(lengths(&flags(&fixtures::sunrise())), vec![1, 1, 1]);
        assert!(flags(&fixtures::triangle()).is_empty());
        let nested = flags(&fixtures::dunce_with_bubble());
        assert!(nested.iter().any(|f| f.chain() == [EdgeSet::from([1, 2, 3, 4]), EdgeSet::from([3, 4])]));
    }

    #[test]
    fn flag_validation() {
        let g = fixtures::dunce_cap();
        assert!(Flag::new(&g, vec![EdgeSet::from([3, 4])]).is_ok());
        assert!(Flag::new(&g, vec![EdgeSet::from([1, 3, 4])]).is_err());
        assert!(Flag::new(&g, vec![g.edge_ids()]).is_err());
        let h = fixtures::dunce_with_bubble();
        assert!(Flag::new(&h, vec![EdgeSet::from([3, 4]), EdgeSet::from([1, 2, 3, 4])]).is_err());
    }

    #[test]
    fn polytope_counts() {
        let count = |g: &Graph| (polytope_vertices(g).unwrap().len(), facets(g).unwrap().len());
        assert_eq!(count(&fixtures::sunrise()), (6, 6));
        assert_eq!(count(&fixtures::dunce_cap()), (10, 7));
        assert_eq!(count(&fixtures::tadpole(1)), (1, 0));
        assert_eq!(count(&fixtures::triangle()), (3, 3));
    }

    #[test]
    fn dunce_chart() {
        let g = fixtures::dunce_cap();
        let flag = Flag::new(&g, vec![EdgeSet::from([3, 4])]).unwrap();
        let chart = build_chart(&g, &flag, 1, &[3]).unwrap();
        assert_eq!(chart.substitution[&1], vec![]);
        assert_eq!(chart.substitution[&2], vec![(2, 1)]);
        assert_eq!(chart.substitution[&3], vec![(3, 1)]);
        assert_eq!(chart.substitution[&4], vec![(3, 1), (4, 1)]);
        let psi: ScalarPolynomial = first_symanzik(&g);
        let (exps, rest) = pullback_scaling(&psi, &chart).unwrap();
        assert_eq!(exps, vec![1]);
        // y₁* w + y₀(1 + w) + 1 + w with y₀ = t2, y₁* = t3, w = t4
        let expected = ScalarPolynomial::parse("x3x4 + x2 + x2x4 + 1 + x4").unwrap().with_vars(&[2, 3, 4]).unwrap();
        assert_eq!(rest, expected);
        assert_eq!(chart.jacobian_exponents(), vec![1]);
        assert!(build_chart(&g, &flag, 3, &[3]).is_err());
        assert!(build_chart(&g, &flag, 1, &[1]).is_err());
    }

    #[test]
    fn nested_chart_scales() {
        let g = fixtures::dunce_with_bubble();
        let flag = Flag::new(&g, vec![EdgeSet::from([1, 2, 3, 4]), EdgeSet::from([3, 4])]).unwrap();
        let chart = build_chart(&g, &flag, 5, &[1, 3]).unwrap();
        assert_eq!(chart.substitution[&4], vec![(1, 1), (3, 1), (4, 1)]);
        assert_eq!(chart.substitution[&3], vec![(1, 1), (3, 1)]);
        assert_eq!(chart.substitution[&2], vec![(1, 1), (2, 1)]);
        assert_eq!(chart.substitution[&1], vec![(1, 1)]);
        assert_eq!(chart.substitution[&6], vec![(6, 1)]);
        let (exps, _) = pullback_scaling(&first_symanzik::<Rational>(&g), &chart).unwrap();
        assert_eq!(exps, vec![2, 1]);
    }

    #[test]
    fn poles() {
        let g = fixtures::dunce_cap();
        let flag = Flag::new(&g, vec![EdgeSet::from([3, 4])]).unwrap();
        assert_eq!(pole_orders(&g, &flag, Rational::from_integer(4)), vec![Rational::from_integer(1)]);
        // d = 4 − 2ε with ε = 1/10: s = −2ε|γ|, order 1 − ε
        assert_eq!(pole_orders(&g, &flag, Rational::new(19, 5)), vec![Rational::new(9, 10)]);
    }

    #[test]
    fn regular_parts() {
        let g = fixtures::dunce_cap();
        let flag = Flag::new(&g, vec![EdgeSet::from([3, 4])]).unwrap();
        let part = face_regular_part(&g, &flag);
        assert_eq!(part.factors.len(), 1);
        assert_eq!(part.factors[0].edge_ids(), EdgeSet::from([3, 4]));
        assert_eq!(part.quotient.edge_ids(), EdgeSet::from([1, 2]));
        assert_eq!(part.quotient.rank(), 1);
        let h = fixtures::dunce_with_bubble();
        let flag = Flag::new(&h, vec![EdgeSet::from([1, 2, 3, 4]), EdgeSet::from([3, 4])]).unwrap();
        let part = face_regular_part(&h, &flag);
        assert_eq!(part.factors[0].edge_ids(), EdgeSet::from([3, 4]));
        assert_eq!(part.factors[1].edge_ids(), EdgeSet::from([1, 2]));
        assert_eq!(part.quotient.edge_ids(), EdgeSet::from([5, 6]));
        let empty = face_regular_part(&g, &Flag::empty());
        assert!(empty.factors.is_empty());
        assert_eq!(empty.quotient, g);
    }
}
