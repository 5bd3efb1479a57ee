//! Parametric Feynman integrands of graphs, forest-formula renormalisation of
//! logarithmic divergences, the cell complexes of moduli spaces of coloured
//! graphs with their compactified cells, and numerical evaluation of cell
//! integrals and amplitudes.
//!
//! Symbolic work is exact over a rational field (generic over
//! [`ExactScalar`]); numerical work is generic over [`Real`] (`f32`/`f64`).
//! The aliases below fix the concrete types used by the command-line tool.

pub mod compactified;
pub mod fixtures;
pub mod graph;
pub mod integration;
pub mod iso;
pub mod kinematics;
pub mod moduli;
pub mod polynomial;
pub mod power_counting;
pub mod renormalization;
pub mod scalar;
pub mod symanzik;

pub use graph::{Colour, Edge, EdgeId, EdgeSet, Graph, GraphError, Leg, LegLabel, Subgraph, VertexId};
pub use kinematics::{KinSymbol, KinematicConfig};
pub use polynomial::{Coefficient, LinearForm, Polynomial};
pub use scalar::{ExactScalar, Real};

/// Exact rational numbers used for coefficients and dimensions.
pub type Rational = num_rational::Rational64;
/// Polynomials with rational coefficients (first Symanzik, chart pullbacks).
pub type ScalarPolynomial = Polynomial<Rational>;
/// Polynomials whose coefficients are linear forms in kinematic symbols.
pub type GraphPolynomial = Polynomial<LinearForm<Rational>>;
/// Numerical results in double precision.
pub type IntegrationResult = integration::IntegrationResult<f64>;


