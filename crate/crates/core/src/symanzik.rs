//! Symanzik polynomials ψ_G, φ_G and the mass-extended Ξ_G.
//!
//! Every polynomial is expressed over the sorted edge ids of the graph it was
//! computed from. Disconnected graphs are handled componentwise: ψ multiplies,
//! and φ = Σ_i φ_i Π_{j≠i} ψ_j.

use itertools::Itertools;

use crate::graph::{EdgeSet, Graph, GraphError};
use crate::kinematics::{canonical_invariant, KinSymbol};
use crate::polynomial::{Coefficient, LinearForm, Polynomial, VarId};
use crate::scalar::ExactScalar;

fn edge_vars(g: &Graph) -> Vec<VarId> {
    g.edges().iter().map(|e| e.id).collect()
}

/// Exponent vector over `vars` with a 1 for every edge outside `inside`.
fn complement_exponents(vars: &[VarId], inside: &EdgeSet) -> Vec<u32> {
    vars.iter().map(|&v| u32::from(!inside.contains(v))).collect()
}

/// The connected components of `g` as graphs (isolated vertices give edgeless graphs).
fn component_graphs(g: &Graph) -> Vec<Graph> {
    g.components()
        .into_iter()
        .map(|vs| {
            let edges: EdgeSet = g
                .edges()
                .iter()
                .filter(|e| vs.contains(&e.ends[0]))
                .map(|e| e.id)
                .collect();
            g.restrict(&edges)
        })
        .collect()
}

fn psi_connected<Q: ExactScalar>(g: &Graph) -> Polynomial<Q> {
    let vars = edge_vars(g);
    let trees = g.spanning_trees().expect("component is connected");
    let one = <Q as num_traits::One>::one();
    Polynomial::from_terms(vars.clone(), trees.iter().map(|t| (complement_exponents(&vars, t), one.clone())))
}

fn phi_connected<Q: ExactScalar>(g: &Graph) -> Polynomial<LinearForm<Q>> {
    let vars = edge_vars(g);
    let forests = g.spanning_two_forests().expect("component is connected");
    let terms = forests.iter().filter_map(|f| {
        let (part, _) = &f.parts[0];
        let legs: Vec<u32> = g.legs().iter().filter(|l| part.contains(&l.at)).map(|l| l.label).collect();
        let subset = canonical_invariant(&legs, g.leg_count())?;
        Some((complement_exponents(&vars, &f.edges()), LinearForm::symbol(KinSymbol::Invariant(subset))))
    });
    Polynomial::from_terms(vars.clone(), terms.collect::<Vec<_>>())
}

/// First Symanzik polynomial: Σ over spanning trees of Π_{e∉T} x_e.
/// The edgeless graph gives 1.
pub fn first_symanzik<Q: ExactScalar>(g: &Graph) -> Polynomial<Q> {
    let vars = edge_vars(g);
    component_graphs(g)
        .iter()
        .fold(Polynomial::one(vars.clone()), |acc, c| acc.mul(&psi_connected(c)))
        .with_vars(&vars)
        .expect("edge variables")
}

/// Second Symanzik polynomial: Σ over spanning 2-forests of s_{I(T₁)} Π_{e∉T₁∪T₂} x_e.
/// A single vertex (or a graph without legs) gives 0.
pub fn second_symanzik<Q: ExactScalar>(g: &Graph) -> Polynomial<LinearForm<Q>> {
    let vars = edge_vars(g);
    let parts = component_graphs(g);
    let psis: Vec<Polynomial<Q>> = parts.iter().map(psi_connected).collect();
    let mut total = Polynomial::zero(vars.clone());
    for (i, c) in parts.iter().enumerate() {
        let mut term = phi_connected::<Q>(c);
        for (j, psi) in psis.iter().enumerate() {
            if j != i {
                term = term.mul_scalar_poly(psi);
            }
        }
        total = total.add(&term);
    }
    total.with_vars(&vars).expect("edge variables")
}

/// Ξ_G = φ_G + ψ_G Σ_e m²_{c(e)} x_e.
pub fn xi_polynomial<Q: ExactScalar>(g: &Graph) -> Polynomial<LinearForm<Q>> {
    let vars = edge_vars(g);
    let psi = first_symanzik::<Q>(g);
    let mut mass = Polynomial::zero(vars.clone());
    for e in g.edges() {
        let x = Polynomial::<LinearForm<Q>>::monomial(
            vars.clone(),
            &[(e.id, 1)],
            LinearForm::symbol(KinSymbol::MassSq(e.colour)),
        )
        .expect("edge variable");
        mass = mass.add(&x);
    }
    second_symanzik::<Q>(g).add(&mass.mul_scalar_poly(&psi))
}

/// ψ_G computed by testing every `(V−1)`-subset of edges for spanning connectivity.
pub fn first_symanzik_oracle<Q: ExactScalar>(g: &Graph) -> Result<Polynomial<Q>, GraphError> {
    let components = g.components().len();
    if components > 1 {
        return Err(GraphError::Disconnected { components });
    }
    let vars = edge_vars(g);
    let all = g.edge_ids();
    let one = <Q as num_traits::One>::one();
    let terms: Vec<(Vec<u32>, Q)> = all
        .iter()
        .combinations(g.n_vertices() - 1)
        .map(|t| t.into_iter().collect::<EdgeSet>())
        .filter(|t| g.delete(&all.difference(t)).is_connected())
        .map(|t| (complement_exponents(&vars, &t), one.clone()))
        .collect();
    Ok(Polynomial::from_terms(vars, terms))
}

/// φ_G computed from `(V−2)`-subsets of edges whose complement splits the graph in two.
pub fn second_symanzik_oracle<Q: ExactScalar>(g: &Graph) -> Result<Polynomial<LinearForm<Q>>, GraphError> {
    let components = g.components().len();
    if components > 1 {
        return Err(GraphError::Disconnected { components });
    }
    let vars = edge_vars(g);
    if g.n_vertices() < 2 {
        return Ok(Polynomial::zero(vars));
    }
    let all = g.edge_ids();
    let mut terms = Vec::new();
    for chosen in all.iter().combinations(g.n_vertices() - 2) {
        let chosen: EdgeSet = chosen.into_iter().collect();
        let split = g.delete(&all.difference(&chosen)).components();
        if split.len() != 2 {
            continue;
        }
        let legs: Vec<u32> = g.legs().iter().filter(|l| split[0].contains(&l.at)).map(|l| l.label).collect();
        if let Some(subset) = canonical_invariant(&legs, g.leg_count()) {
            terms.push((complement_exponents(&vars, &chosen), LinearForm::symbol(KinSymbol::Invariant(subset))));
        }
    }
    Ok(Polynomial::from_terms(vars, terms))
}

/// Lifts a scalar polynomial to linear-form coefficients.
pub fn to_linear<Q: ExactScalar>(p: &Polynomial<Q>) -> Polynomial<LinearForm<Q>> {
    p.map_coefficients(|q| LinearForm::from_scalar(q.clone()))
}
