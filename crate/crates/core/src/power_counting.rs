//! Superficial degrees of divergence, Weinberg's criterion and forests of
//! divergent subgraphs.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeSet, Graph};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerCountingError {
    #[error("subgraph {subgraph} has superficial degree {degree} > 0; only logarithmic divergences are supported")]
    NonLogarithmic { subgraph: EdgeSet, degree: Rational },
    #[error("forest member {0} is not a subgraph of the parent graph")]
    NotASubgraph(EdgeSet),
    #[error("forest members {0} and {1} overlap without being nested")]
    Overlapping(EdgeSet, EdgeSet),
}

/// `s_γ = d|γ| − 2N_γ` for the whole graph.
pub fn superficial_degree(g: &Graph, d: Rational) -> Rational {
    subgraph_degree(g, &g.edge_ids(), d)
}

/// `s_γ = d|γ| − 2N_γ` for the edge subgraph `gamma`.
pub fn subgraph_degree(g: &Graph, gamma: &EdgeSet, d: Rational) -> Rational {
    d * Rational::from_integer(g.subgraph_rank(gamma) as i64) - Rational::from_integer(2 * gamma.len() as i64)
}

/// A proper core subgraph of positive rank with `s_γ ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivergentSubgraph {
    pub edges: EdgeSet,
    pub rank: usize,
    pub degree: Rational,
}

impl fmt::Display for DivergentSubgraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (s = {})", self.edges, self.degree)
    }
}

/// Proper core subgraphs with `s_γ ≥ 0`, in shortlex order. The graph itself
/// is never listed; see [`superficial_degree`] for the overall degree.
pub fn divergent_subgraphs(g: &Graph, d: Rational) -> Vec<DivergentSubgraph> {
    g.core_subgraphs()
        .into_iter()
        .filter_map(|edges| {
            let degree = subgraph_degree(g, &edges, d);
            (degree >= Rational::from_integer(0)).then(|| DivergentSubgraph { rank: g.subgraph_rank(&edges), edges, degree })
        })
        .collect()
}

/// Weinberg's criterion including the graph itself: every core subgraph of
/// positive rank, `G` included, has `s_γ < 0`.
pub fn is_weinberg_convergent(g: &Graph, d: Rational) -> bool {
    let overall_ok = g.rank() == 0 || superficial_degree(g, d) < Rational::from_integer(0);
    overall_ok && divergent_subgraphs(g, d).is_empty()
}

/// Weinberg's criterion for the projective integral, where an overall
/// divergence only affects a prefactor: proper core subgraphs only.
pub fn is_weinberg_convergent_projective(g: &Graph, d: Rational) -> bool {
    divergent_subgraphs(g, d).is_empty()
}

/// A family of divergent subgraphs, pairwise nested or disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ForestOfDivergents {
    members: Vec<EdgeSet>,
}

impl ForestOfDivergents {
    /// Validates the nested-or-disjoint condition; members are stored in shortlex order.
    pub fn new(g: &Graph, members: Vec<EdgeSet>) -> Result<Self, PowerCountingError> {
        let all = g.edge_ids();
        for m in &members {
            if !m.is_subset(&all) {
                return Err(PowerCountingError::NotASubgraph(m.clone()));
            }
        }
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if !compatible(a, b) {
                    return Err(PowerCountingError::Overlapping(a.clone(), b.clone()));
                }
            }
        }
        let mut members = members;
        members.sort_by(|a, b| a.shortlex_cmp(b));
        members.dedup();
        Ok(ForestOfDivergents { members })
    }

    pub fn empty() -> Self {
        ForestOfDivergents { members: Vec::new() }
    }

    pub fn members(&self) -> &[EdgeSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Union of all member edge sets.
    pub fn support(&self) -> EdgeSet {
        self.members.iter().fold(EdgeSet::new(), |acc, m| acc.union(m))
    }

    /// `(−1)^{|F|}`.
    pub fn sign(&self) -> f64 {
        if self.members.len().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for ForestOfDivergents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Nested or disjoint.
pub fn compatible(a: &EdgeSet, b: &EdgeSet) -> bool {
    a.is_subset(b) || b.is_subset(a) || a.is_disjoint(b)
}

/// Rejects any superficial degree `> 0`, the graph's own included.
pub fn check_logarithmic(g: &Graph, d: Rational) -> Result<(), PowerCountingError> {
    let zero = Rational::from_integer(0);
    if let Some(bad) = divergent_subgraphs(g, d).into_iter().find(|s| s.degree > zero) {
        return Err(PowerCountingError::NonLogarithmic { subgraph: bad.edges, degree: bad.degree });
    }
    let overall = superficial_degree(g, d);
    if g.rank() > 0 && overall > zero {
        return Err(PowerCountingError::NonLogarithmic { subgraph: g.edge_ids(), degree: overall });
    }
    Ok(())
}

/// All forests over the proper divergent subgraphs, the empty forest first,
/// ordered by size and then by the shortlex positions of their members.
/// In `log_only` mode any positive degree (including the graph's) is an error.
pub fn divergence_forests(g: &Graph, d: Rational, log_only: bool) -> Result<Vec<ForestOfDivergents>, PowerCountingError> {
    if log_only {
        check_logarithmic(g, d)?;
    }
    let divergent: Vec<EdgeSet> = divergent_subgraphs(g, d).into_iter().map(|s| s.edges).collect();
    let mut found: Vec<Vec<usize>> = Vec::new();
    extend_forests(&divergent, 0, &mut Vec::new(), &mut found);
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found
        .into_iter()
        .map(|idx| ForestOfDivergents { members: idx.into_iter().map(|i| divergent[i].clone()).collect() })
        .collect())
}

fn extend_forests(sets: &[EdgeSet], from: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(chosen.clone());
    for i in from..sets.len() {
        if chosen.iter().all(|&j| compatible(&sets[i], &sets[j])) {
            chosen.push(i);
            extend_forests(sets, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// The graded pieces `γ / ∪{η ∈ F : η ⊊ γ}` of a forest, one per member, in member order.
pub fn forest_quotients(g: &Graph, forest: &ForestOfDivergents) -> Vec<Graph> {
    forest
        .members()
        .iter()
        .map(|gamma| {
            let inner = forest
                .members()
                .iter()
                .filter(|eta| eta.is_proper_subset(gamma))
                .fold(EdgeSet::new(), |acc, eta| acc.union(eta));
            g.restrict(gamma).contract(&inner)
        })
        .collect()
}
