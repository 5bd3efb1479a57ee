//! Parametric integrands and forest-formula renormalisation with kinematic
//! subtraction at a fixed renormalisation point.
//!
//! For a forest `F` of divergent subgraphs write `P = ψ_{G/F}ψ_F`,
//! `A = Ξ_{G/F}ψ_F + Ξ⁰_Fψ_{G/F}` and `B = Ξ⁰_{G/F}ψ_F + Ξ⁰_Fψ_{G/F}`, where
//! `Ξ⁰` is evaluated at the renormalisation point. The forest integrand is
//! `P^{-d/2} log(A/B)` when `s_G = 0`, and `P^{-d/2}[(P/A)^{-s_G/2} − (P/B)^{-s_G/2}]`
//! when `s_G < 0`. Both are projectively well defined.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::compactified::{CellError, Chart};
use crate::graph::{EdgeId, Graph};
use crate::integration::{integrate, Integrand, IntegrationError, IntegrationMethod, IntegrationResult};
use crate::kinematics::KinematicConfig;
use crate::polynomial::{CompiledPolynomial, PolyError};
use crate::power_counting::{
    divergence_forests, forest_quotients, subgraph_degree, superficial_degree, ForestOfDivergents, PowerCountingError,
};
use crate::scalar::Real;
use crate::symanzik::{first_symanzik, xi_polynomial};
use crate::{GraphPolynomial, Rational, ScalarPolynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenormError {
    #[error("renormalisation point must have strictly positive invariants or strictly positive masses")]
    DegenerateScheme,
    #[error("kinematics are in dimension {kin} but the scheme is in dimension {scheme}")]
    DimensionMismatch { kin: Rational, scheme: Rational },
    #[error("integrands need a connected graph of positive rank")]
    Degenerate,
    #[error("Ξ at the renormalisation point vanishes for forest {0}")]
    VanishingReference(ForestOfDivergents),
    #[error("level {level} of the flag has superficial degree {degree}; local subtraction needs 0")]
    NotLogarithmicLevel { level: usize, degree: Rational },
    #[error(transparent)]
    PowerCounting(#[from] PowerCountingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error(transparent)]
    Integration(#[from] Box<IntegrationError>),
}

impl From<IntegrationError> for RenormError {
    fn from(e: IntegrationError) -> Self {
        RenormError::Integration(Box::new(e))
    }
}

/// Kinematic subtraction at a reference configuration in dimension `d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RenormScheme {
    renorm_point: KinematicConfig,
    d: Rational,
}

impl RenormScheme {
    pub fn new(renorm_point: KinematicConfig, d: Rational) -> Result<Self, RenormError> {
        let generic = !renorm_point.invariants().is_empty() && renorm_point.is_generic();
        if !(generic || renorm_point.masses_positive()) {
            return Err(RenormError::DegenerateScheme);
        }
        let renorm_point = renorm_point.with_dimension(d);
        Ok(RenormScheme { renorm_point, d })
    }

    pub fn renorm_point(&self) -> &KinematicConfig {
        &self.renorm_point
    }

    pub fn d(&self) -> Rational {
        self.d
    }
}

fn to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn slots(g: &Graph) -> BTreeMap<EdgeId, usize> {
    g.edges().iter().enumerate().map(|(i, e)| (e.id, i)).collect()
}

fn compile_scalar<T: Real>(p: &ScalarPolynomial, kin: &KinematicConfig, at: &BTreeMap<EdgeId, usize>) -> Result<CompiledPolynomial<T>, PolyError> {
    p.compile(kin, |v| at.get(&v).copied())
}

fn compile_linear<T: Real>(p: &GraphPolynomial, kin: &KinematicConfig, at: &BTreeMap<EdgeId, usize>) -> Result<CompiledPolynomial<T>, PolyError> {
    p.compile(kin, |v| at.get(&v).copied())
}

/// `f_G = ψ^{-d/2} (ψ/Ξ)^{-s_G/2}` over the edges of `G` in id order.
#[derive(Clone, Debug)]
pub struct BareIntegrand<T> {
    pub graph: Graph,
    pub d: Rational,
    psi: CompiledPolynomial<T>,
    /// Absent when `s_G = 0`, where Ξ drops out.
    xi: Option<CompiledPolynomial<T>>,
    a: T,
    b: T,
}

pub fn bare_integrand<T: Real>(g: &Graph, kin: &KinematicConfig) -> Result<BareIntegrand<T>, RenormError> {
    if !g.is_connected() || g.rank() == 0 {
        return Err(RenormError::Degenerate);
    }
    let at = slots(g);
    let s = superficial_degree(g, kin.d);
    let xi = if s == Rational::from_integer(0) {
        None
    } else {
        Some(compile_linear(&xi_polynomial::<Rational>(g), kin, &at)?)
    };
    Ok(BareIntegrand {
        graph: g.clone(),
        d: kin.d,
        psi: compile_scalar(&first_symanzik::<Rational>(g), kin, &at)?,
        xi,
        a: T::of(-to_f64(kin.d) / 2.0),
        b: T::of(-to_f64(s) / 2.0),
    })
}

impl<T: Real> Integrand<T> for BareIntegrand<T> {
    fn n_vars(&self) -> usize {
        self.graph.n_edges()
    }

    fn eval(&self, x: &[T]) -> T {
        let psi = self.psi.eval(x);
        let base = psi.powf(self.a);
        match &self.xi {
            Some(xi) => base * (psi / xi.eval(x)).powf(self.b),
            None => base,
        }
    }
}

/// One signed forest term `(−1)^{|F|} f_{G,F}`.
#[derive(Clone, Debug)]
pub struct ForestIntegrand<T> {
    pub forest: ForestOfDivergents,
    pub sign: f64,
    n_vars: usize,
    psi_q: CompiledPolynomial<T>,
    xi_q: CompiledPolynomial<T>,
    xi0_q: CompiledPolynomial<T>,
    psi_f: CompiledPolynomial<T>,
    xi0_f: CompiledPolynomial<T>,
    a: T,
    /// `−s_G/2`; zero selects the logarithmic form.
    b: T,
}

impl<T: Real> ForestIntegrand<T> {
    /// The unsigned `f_{G,F}`.
    pub fn unsigned(&self, x: &[T]) -> T {
        let (pq, pf) = (self.psi_q.eval(x), self.psi_f.eval(x));
        let rest = self.xi0_f.eval(x) * pq;
        let a = self.xi_q.eval(x) * pf + rest;
        let b = self.xi0_q.eval(x) * pf + rest;
        if a == b {
            return T::zero();
        }
        let p = pq * pf;
        let prefactor = p.powf(self.a);
        if self.b == T::zero() {
            prefactor * (a / b).ln()
        } else {
            prefactor * ((p / a).powf(self.b) - (p / b).powf(self.b))
        }
    }
}

impl<T: Real> Integrand<T> for ForestIntegrand<T> {
    fn n_vars(&self) -> usize {
        self.n_vars
    }

    fn eval(&self, x: &[T]) -> T {
        T::of(self.sign) * self.unsigned(x)
    }
}

/// `ψ_F = Π ψ_γ` and `Ξ_F = Σ_γ Ξ_γ Π_{γ'≠γ} ψ_{γ'}` over the graded pieces.
fn forest_polynomials(pieces: &[Graph], vars: &[EdgeId]) -> (ScalarPolynomial, GraphPolynomial) {
    let psis: Vec<ScalarPolynomial> = pieces.iter().map(|p| first_symanzik::<Rational>(p).with_vars(vars).expect("piece edges")).collect();
    let mut psi = ScalarPolynomial::one(vars.to_vec());
    for p in &psis {
        psi = psi.mul(p);
    }
    let mut xi = GraphPolynomial::zero(vars.to_vec());
    for (i, piece) in pieces.iter().enumerate() {
        let mut term = xi_polynomial::<Rational>(piece).with_vars(vars).expect("piece edges");
        for (j, p) in psis.iter().enumerate() {
            if j != i {
                term = term.mul_scalar_poly(p);
            }
        }
        xi = xi.add(&term);
    }
    (psi, xi)
}

/// `(−1)^{|F|} f_{G,F}` for an arbitrary forest of subgraphs (members may include `G`,
/// in which case the term vanishes identically).
pub fn forest_integrand<T: Real>(
    g: &Graph,
    forest: &ForestOfDivergents,
    scheme: &RenormScheme,
    kin: &KinematicConfig,
) -> Result<ForestIntegrand<T>, RenormError> {
    if !g.is_connected() || g.rank() == 0 {
        return Err(RenormError::Degenerate);
    }
    if kin.d != scheme.d {
        return Err(RenormError::DimensionMismatch { kin: kin.d, scheme: scheme.d });
    }
    let at = slots(g);
    let vars: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
    let quotient = g.contract(&forest.support());
    let psi_q = first_symanzik::<Rational>(&quotient).with_vars(&vars)?;
    let xi_q = xi_polynomial::<Rational>(&quotient).with_vars(&vars)?;
    let (psi_f, xi_f) = forest_polynomials(&forest_quotients(g, forest), &vars);
    let r = &scheme.renorm_point;
    let out = ForestIntegrand {
        forest: forest.clone(),
        sign: forest.sign(),
        n_vars: vars.len(),
        psi_q: compile_scalar(&psi_q, kin, &at)?,
        xi_q: compile_linear(&xi_q, kin, &at)?,
        xi0_q: compile_linear(&xi_q, r, &at)?,
        psi_f: compile_scalar(&psi_f, kin, &at)?,
        xi0_f: compile_linear(&xi_f, r, &at)?,
        a: T::of(-to_f64(scheme.d) / 2.0),
        b: T::of(-to_f64(superficial_degree(g, scheme.d)) / 2.0),
    };
    let ones = vec![T::one(); vars.len()];
    let reference = out.xi0_q.eval(&ones) * out.psi_f.eval(&ones) + out.xi0_f.eval(&ones) * out.psi_q.eval(&ones);
    // also catches NaN
    if reference.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) && quotient.rank() > 0 {
        return Err(RenormError::VanishingReference(forest.clone()));
    }
    Ok(out)
}

/// The forest sum `Σ_F (−1)^{|F|} f_{G,F}`, one component per forest.
#[derive(Clone, Debug)]
pub struct RenormalisedIntegrand<T> {
    pub graph: Graph,
    pub terms: Vec<ForestIntegrand<T>>,
}

pub fn renormalised_integrand<T: Real>(
    g: &Graph,
    scheme: &RenormScheme,
    kin: &KinematicConfig,
) -> Result<RenormalisedIntegrand<T>, RenormError> {
    let forests = divergence_forests(g, scheme.d, true)?;
    let terms = forests.iter().map(|f| forest_integrand(g, f, scheme, kin)).collect::<Result<_, _>>()?;
    Ok(RenormalisedIntegrand { graph: g.clone(), terms })
}

impl<T: Real> Integrand<T> for RenormalisedIntegrand<T> {
    fn n_vars(&self) -> usize {
        self.graph.n_edges()
    }

    fn eval(&self, x: &[T]) -> T {
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    fn n_components(&self) -> usize {
        self.terms.len()
    }

    fn eval_components(&self, x: &[T], out: &mut [T]) {
        for (o, t) in out.iter_mut().zip(&self.terms) {
            *o = t.eval(x);
        }
    }
}

/// A forest's signed contribution, estimated on the same samples as the total.
/// Individual terms need not converge; only their sum is meaningful.
#[derive(Clone, Debug, Serialize)]
pub struct ForestTerm {
    pub forest: ForestOfDivergents,
    pub sign: f64,
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RenormalisedResult {
    pub result: IntegrationResult<f64>,
    pub forests: Vec<ForestTerm>,
}

/// `∫ Σ_F (−1)^{|F|} f_{G,F} ν_G`, summed pointwise. Only logarithmic (or
/// convergent) graphs with logarithmic subdivergences are accepted.
pub fn renormalised_integral(
    g: &Graph,
    scheme: &RenormScheme,
    kin: &KinematicConfig,
    method: &IntegrationMethod,
) -> Result<RenormalisedResult, RenormError> {
    let f = renormalised_integrand::<f64>(g, scheme, kin)?;
    let result = integrate(&f, method)?;
    let forests = f
        .terms
        .iter()
        .zip(&result.components)
        .map(|(t, c)| ForestTerm { forest: t.forest.clone(), sign: t.sign, value: c.value, error: c.error })
        .collect();
    Ok(RenormalisedResult { result, forests })
}

/// The integrand of a compactified cell in one chart, as a function of the
/// chart coordinates (in [`Chart::coordinates`] order), Jacobian included.
#[derive(Clone, Debug)]
pub struct ChartIntegrand<T> {
    pub chart: Chart,
    pub subtracted: bool,
    n_vars: usize,
    /// Position of `y_i*` among the coordinates, per level.
    scale_slots: Vec<usize>,
    /// Exponent of `y_i*` in front of `f̃`.
    scale_powers: Vec<T>,
    psi: CompiledPolynomial<T>,
    xi: Option<CompiledPolynomial<T>>,
    a: T,
    b: T,
}

impl<T: Real> ChartIntegrand<T> {
    fn reduced(&self, y: &[T]) -> T {
        let psi = self.psi.eval(y);
        let base = psi.powf(self.a);
        match &self.xi {
            Some(xi) => base * (psi / xi.eval(y)).powf(self.b),
            None => base,
        }
    }
}

impl<T: Real> Integrand<T> for ChartIntegrand<T> {
    fn n_vars(&self) -> usize {
        self.n_vars
    }

    fn eval(&self, y: &[T]) -> T {
        let prefactor: T =
            self.scale_slots.iter().zip(&self.scale_powers).map(|(&i, &p)| y[i].powf(p)).fold(T::one(), |a, b| a * b);
        if !self.subtracted {
            return prefactor * self.reduced(y);
        }
        let m = self.scale_slots.len();
        let mut z = y.to_vec();
        let mut total = T::zero();
        for mask in 0u32..(1 << m) {
            for (level, &i) in self.scale_slots.iter().enumerate() {
                z[i] = if mask & (1 << level) != 0 { T::zero() } else { y[i] };
            }
            let term = self.reduced(&z);
            total = if mask.count_ones() % 2 == 0 { total + term } else { total - term };
        }
        prefactor * total
    }
}

fn chart_integrand_impl<T: Real>(
    g: &Graph,
    chart: &Chart,
    kin: &KinematicConfig,
    d: Rational,
    subtracted: bool,
) -> Result<ChartIntegrand<T>, RenormError> {
    if !g.is_connected() || g.rank() == 0 {
        return Err(RenormError::Degenerate);
    }
    let levels = chart.flag.chain();
    let degrees: Vec<Rational> = levels.iter().map(|s| subgraph_degree(g, s, d)).collect();
    if subtracted {
        if let Some((i, &s)) = degrees.iter().enumerate().find(|(_, &s)| s != Rational::from_integer(0)) {
            return Err(RenormError::NotLogarithmicLevel { level: i + 1, degree: s });
        }
    }
    let ranks: Vec<u32> = levels.iter().map(|s| g.subgraph_rank(s) as u32).collect();
    let at: BTreeMap<EdgeId, usize> = chart.coordinates.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let psi = chart.pullback_divided(&first_symanzik::<Rational>(g), &ranks)?;
    let s_g = superficial_degree(g, d);
    let xi = if s_g == Rational::from_integer(0) {
        None
    } else {
        Some(chart.pullback_divided(&xi_polynomial::<Rational>(g), &ranks)?.compile(kin, |v| at.get(&v).copied())?)
    };
    let scale_slots = chart.marked.iter().map(|e| at[e]).collect();
    let scale_powers = if subtracted {
        vec![T::of(-1.0); levels.len()]
    } else {
        degrees.iter().map(|&s| T::of(-to_f64(s) / 2.0 - 1.0)).collect()
    };
    Ok(ChartIntegrand {
        chart: chart.clone(),
        subtracted,
        n_vars: chart.coordinates.len(),
        scale_slots,
        scale_powers,
        psi: psi.compile(kin, |v| at.get(&v).copied())?,
        xi,
        a: T::of(-to_f64(d) / 2.0),
        b: T::of(-to_f64(s_g) / 2.0),
    })
}

/// `Π y_i*^{−s_{G_i}/2−1} f̃` in the chart: the unrenormalised integrand near the face.
pub fn chart_integrand<T: Real>(g: &Graph, chart: &Chart, kin: &KinematicConfig, d: Rational) -> Result<ChartIntegrand<T>, RenormError> {
    chart_integrand_impl(g, chart, kin, d, false)
}

/// `Π y_i*^{−1} Σ_{H ⊆ levels} (−1)^{|H|} f̃|_{y_i* = 0, i ∈ H}`: the integrand
/// with its face divergences removed by local subtraction. Every level of the
/// flag must be logarithmic in dimension `d0`.
pub fn local_subtracted_integrand<T: Real>(
    g: &Graph,
    chart: &Chart,
    kin: &KinematicConfig,
    d0: Rational,
) -> Result<ChartIntegrand<T>, RenormError> {
    chart_integrand_impl(g, chart, kin, d0, true)
}
