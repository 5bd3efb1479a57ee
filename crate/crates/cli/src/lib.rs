//! Command-line front end: argument handling, input files and JSON reports.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use parafeyn::compactified::{facets, flags, pole_orders, polytope_vertices, CellError};
use parafeyn::graph::Edge;
use parafeyn::integration::{
    amplitude, feynman_integral, IntegrationError, IntegrationMethod, McOptions, Method, QuadOptions,
};
use parafeyn::kinematics::KinematicsError;
use parafeyn::moduli::{colour_capacity, CellSummary, ModuliConfig, ModuliError, ModuliPoset};
use parafeyn::power_counting::{
    divergence_forests, divergent_subgraphs, is_weinberg_convergent, is_weinberg_convergent_projective,
    superficial_degree, PowerCountingError,
};
use parafeyn::renormalization::{renormalised_integral, RenormError, RenormScheme};
use parafeyn::symanzik::{first_symanzik, second_symanzik, xi_polynomial};
use parafeyn::{EdgeSet, Graph, GraphPolynomial, KinematicConfig, Leg, Rational, ScalarPolynomial};

pub const SEED_ENV: &str = "PARAFEYN_SEED";

#[derive(Debug, Parser)]
#[command(name = "parafeyn", version, about = "Parametric Feynman integrals, forest renormalisation and moduli-space cells")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report to this file instead of standard output
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for enumeration and integration
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symanzik polynomials ψ, φ and Ξ of a graph
    Polys { graph: PathBuf },
    /// Superficial degrees, divergent subgraphs and Weinberg's criterion
    PowerCount {
        graph: PathBuf,
        #[arg(long)]
        d: String,
    },
    /// Forests of divergent subgraphs
    Forests {
        graph: PathBuf,
        #[arg(long)]
        d: String,
        /// Refuse graphs with non-logarithmic divergences
        #[arg(long)]
        log_only: bool,
    },
    /// Cells of the moduli space X_{n,k}, its f-vector and face relations
    Cells {
        n: u32,
        k: u32,
        #[command(flatten)]
        guards: Guards,
    },
    /// Vertices, facets, flags and pole orders of the compactified cell
    Faces {
        graph: PathBuf,
        #[arg(long)]
        d: String,
    },
    /// The Feynman integral of a graph without divergent subgraphs
    Integrate {
        graph: PathBuf,
        kinematics: PathBuf,
        #[arg(long)]
        d: Option<String>,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// The forest-formula renormalised integral of a graph
    Renormalize {
        graph: PathBuf,
        kinematics: PathBuf,
        renorm_point: PathBuf,
        #[arg(long)]
        d: Option<String>,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// The renormalised amplitude summed over all cells of X_{n,k}
    Amplitude {
        n: u32,
        k: u32,
        kinematics: PathBuf,
        renorm_point: PathBuf,
        #[arg(long)]
        d: Option<String>,
        #[command(flatten)]
        numerics: Numerics,
        #[command(flatten)]
        guards: Guards,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Mc,
    Quad,
}

#[derive(Debug, Clone, Args)]
pub struct Numerics {
    #[arg(long, value_enum, default_value = "mc")]
    pub method: MethodArg,
    /// Monte Carlo samples [default: 100000]
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub samples: Option<u64>,
    /// Maximum quadrature subdivision depth [default: 14]
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=40))]
    pub depth: Option<u32>,
    /// Monte Carlo seed; falls back to $PARAFEYN_SEED, then 0
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct Guards {
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_cells: u64,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_rank: u32,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub max_legs: u32,
    /// Upper bound on vertex valence, legs included
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..))]
    pub max_valence: Option<u64>,
}

impl Guards {
    fn config(&self) -> ModuliConfig {
        ModuliConfig {
            max_rank: self.max_rank,
            max_legs: self.max_legs,
            max_cells: self.max_cells as usize,
            max_valence: self.max_valence.map(|v| v as usize),
        }
    }
}

/// Input errors exit with 1, mathematical refusals and numerical failures with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{message}")]
    Refusal { message: String, report: Value },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } | CliError::Usage(_) => 1,
            CliError::Refusal { .. } => 2,
        }
    }

    fn input(path: &Path, message: impl ToString) -> Self {
        CliError::Input { path: path.display().to_string(), message: message.to_string() }
    }

    fn refusal(kind: &str, message: String, extra: Value) -> Self {
        let mut report = json!({ "status": "refused", "kind": kind, "message": message });
        if let (Value::Object(map), Value::Object(more)) = (&mut report, extra) {
            map.extend(more);
        }
        CliError::Refusal { message, report }
    }
}

/// Resolved settings shared by the numerical commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub d: Option<Rational>,
    pub method: IntegrationMethod,
    pub seed: u64,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn resolve(numerics: &Numerics, d: Option<&str>, jobs: Option<u64>, env_seed: Option<&str>) -> Result<Self, CliError> {
        let d = d.map(parse_rational).transpose()?;
        let jobs = jobs.map(|j| j as usize);
        let seed = match (numerics.seed, env_seed) {
            (Some(s), _) => s,
            (None, Some(text)) => text
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}={text:?} is not an unsigned integer")))?,
            (None, None) => 0,
        };
        let method = match numerics.method {
            MethodArg::Mc => {
                if numerics.depth.is_some() {
                    return Err(CliError::Usage("--depth applies only to --method quad".into()));
                }
                IntegrationMethod::MonteCarlo(McOptions {
                    samples: numerics.samples.unwrap_or(100_000),
                    seed,
                    jobs,
                    ..McOptions::default()
                })
            }
            MethodArg::Quad => {
                if numerics.samples.is_some() || numerics.seed.is_some() {
                    return Err(CliError::Usage("--samples and --seed apply only to --method mc".into()));
                }
                IntegrationMethod::Quadrature(QuadOptions {
                    max_depth: numerics.depth.unwrap_or(14),
                    jobs,
                    ..QuadOptions::default()
                })
            }
        };
        Ok(RunConfig { d, method, seed, jobs })
    }
}

/// `"4"`, `"-2"`, `"7/2"` or a decimal such as `"3.5"`.
pub fn parse_rational(text: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Usage(format!("cannot read {text:?} as a rational dimension"));
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let (n, d): (i64, i64) = (num.trim().parse().map_err(|_| bad())?, den.trim().parse().map_err(|_| bad())?);
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = t.parse::<i64>() {
        return Ok(Rational::from_integer(n));
    }
    let (int, frac) = t.split_once('.').ok_or_else(bad)?;
    if frac.is_empty() || frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let scale = 10i64.pow(frac.len() as u32);
    let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
    let sign = if int.starts_with('-') { -1 } else { 1 };
    let f: i64 = frac.parse().map_err(|_| bad())?;
    Ok(Rational::new(whole * scale + sign * f, scale))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(path, e))
}

pub fn parse_graph_str(text: &str) -> Result<Graph, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

pub fn parse_graph_file(path: &Path) -> Result<Graph, CliError> {
    parse_graph_str(&read(path)?).map_err(|e| CliError::input(path, e))
}

fn parse_subset_key(key: &str) -> Option<Vec<u32>> {
    let inner = key.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

fn json_dimension(v: &Value) -> Option<Rational> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Some(Rational::from_integer(i)),
            None => parse_rational(&n.to_string()).ok(),
        },
        Value::String(s) => parse_rational(s).ok(),
        _ => None,
    }
}

/// Reads `{"d": 4, "masses": {"1": 1.0}, "invariants": {"[1]": 2.0}}` for a
/// process with `legs` external legs. Complementary subsets are merged;
/// conflicting values are rejected. `d_override` replaces the file's `d`.
pub fn parse_kinematics_str(text: &str, legs: u32, d_override: Option<Rational>) -> Result<KinematicConfig, String> {
    let root: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let obj = root.as_object().ok_or("expected a JSON object")?;
    for key in obj.keys() {
        if !matches!(key.as_str(), "d" | "masses" | "invariants") {
            return Err(format!("{key}: unknown field (expected d, masses, invariants)"));
        }
    }
    let d = match (d_override, obj.get("d")) {
        (Some(d), _) => d,
        (None, Some(v)) => json_dimension(v).ok_or("d: expected a number or a rational string such as \"7/2\"")?,
        (None, None) => return Err("d: missing (give it in the file or with --d)".into()),
    };
    let mut kin = KinematicConfig::new(d, legs);
    let empty = serde_json::Map::new();
    let section = |name: &str| -> Result<&serde_json::Map<String, Value>, String> {
        match obj.get(name) {
            None => Ok(&empty),
            Some(Value::Object(m)) => Ok(m),
            Some(_) => Err(format!("{name}: expected an object")),
        }
    };
    for (key, value) in section("masses")? {
        let colour: u32 = key.trim().parse().map_err(|_| format!("masses.{key}: colour must be a positive integer"))?;
        let m = value.as_f64().ok_or_else(|| format!("masses.{key}: expected a number"))?;
        if colour == 0 {
            return Err(format!("masses.{key}: colour must be a positive integer"));
        }
        kin.set_mass(colour, m).map_err(|e| format!("masses.{key}: {e}"))?;
    }
    for (key, value) in section("invariants")? {
        let subset = parse_subset_key(key).ok_or_else(|| format!("invariants.{key}: key must look like \"[1,2]\""))?;
        let s = value.as_f64().ok_or_else(|| format!("invariants.{key}: expected a number"))?;
        kin.set_invariant(&subset, s).map_err(|e: KinematicsError| format!("invariants.{key}: {e}"))?;
    }
    Ok(kin)
}

pub fn parse_kinematics_file(path: &Path, legs: u32, d_override: Option<Rational>) -> Result<KinematicConfig, CliError> {
    parse_kinematics_str(&read(path)?, legs, d_override).map_err(|e| CliError::input(path, e))
}

fn q(r: Rational) -> String {
    r.to_string()
}

fn edge_sets(sets: &[EdgeSet]) -> Vec<Vec<u32>> {
    sets.iter().map(|s| s.iter().collect()).collect()
}

#[derive(Serialize)]
struct PolysReport {
    edges: Vec<u32>,
    rank: usize,
    psi: String,
    phi: String,
    xi: String,
}

#[derive(Serialize)]
struct DivergentReport {
    edges: Vec<u32>,
    rank: usize,
    degree: String,
}

#[derive(Serialize)]
struct PowerCountReport {
    d: String,
    rank: usize,
    superficial_degree: String,
    divergent_subgraphs: Vec<DivergentReport>,
    weinberg_convergent: bool,
    weinberg_convergent_projective: bool,
}

#[derive(Serialize)]
struct ForestReport {
    members: Vec<Vec<u32>>,
    sign: i32,
}

#[derive(Serialize)]
struct ForestsReport {
    d: String,
    log_only: bool,
    forests: Vec<ForestReport>,
}

#[derive(Serialize)]
struct CellReport {
    index: usize,
    dimension: usize,
    vertices: Vec<u32>,
    edges: Vec<Edge>,
    legs: Vec<Leg>,
}

#[derive(Serialize)]
struct CellsReport {
    n: u32,
    k: u32,
    colours: u32,
    f_vector: Vec<usize>,
    cells: Vec<CellReport>,
    /// `[a, b]`: cell `a` is a codimension-one face of cell `b`.
    face_relations: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct FlagReport {
    chain: Vec<Vec<u32>>,
    pole_orders: Vec<String>,
}

#[derive(Serialize)]
struct FacetReport {
    contracted_forest: Vec<u32>,
    flag: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct VertexReport {
    tree: Vec<u32>,
    ordering: Vec<u32>,
}

#[derive(Serialize)]
struct FacesReport {
    d: String,
    n_vertices: usize,
    n_facets: usize,
    vertices: Vec<VertexReport>,
    facets: Vec<FacetReport>,
    flags: Vec<FlagReport>,
}

#[derive(Serialize)]
struct IntegralReport {
    value: f64,
    error: f64,
    method: Method,
    samples_or_depth: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct ForestTermReport {
    members: Vec<Vec<u32>>,
    sign: i32,
    value: f64,
    error: f64,
}

#[derive(Serialize)]
struct RenormalizeReport {
    #[serde(flatten)]
    integral: IntegralReport,
    forests: Vec<ForestTermReport>,
}

#[derive(Serialize)]
struct CellValueReport {
    cell: CellSummary,
    value: f64,
    error: f64,
    method: Method,
}

#[derive(Serialize)]
struct AmplitudeReport {
    n: u32,
    k: u32,
    #[serde(flatten)]
    integral: IntegralReport,
    per_cell: Vec<CellValueReport>,
}

fn seed_of(method: &IntegrationMethod) -> Option<u64> {
    match method {
        IntegrationMethod::MonteCarlo(o) => Some(o.seed),
        IntegrationMethod::Quadrature(_) => None,
    }
}

fn samples_or_depth(method: &IntegrationMethod) -> u64 {
    match method {
        IntegrationMethod::MonteCarlo(o) => o.samples,
        IntegrationMethod::Quadrature(o) => o.max_depth as u64,
    }
}

fn method_tag(method: &IntegrationMethod) -> Method {
    match method {
        IntegrationMethod::MonteCarlo(_) => Method::MonteCarlo,
        IntegrationMethod::Quadrature(_) => Method::Quadrature,
    }
}

fn power_counting_error(e: PowerCountingError) -> CliError {
    match &e {
        PowerCountingError::NonLogarithmic { subgraph, degree } => CliError::refusal(
            "non_logarithmic",
            e.to_string(),
            json!({ "subgraph": subgraph.iter().collect::<Vec<_>>(), "degree": q(*degree) }),
        ),
        _ => CliError::Usage(e.to_string()),
    }
}

fn moduli_error(e: ModuliError) -> CliError {
    CliError::Usage(e.to_string())
}

fn cell_error(path: &Path, e: CellError) -> CliError {
    CliError::input(path, e)
}

fn integration_error(e: IntegrationError) -> CliError {
    match e {
        IntegrationError::Divergent { ref subgraphs } => {
            CliError::refusal("divergent", e.to_string(), json!({ "subgraphs": edge_sets(subgraphs) }))
        }
        IntegrationError::NonLogarithmicCells { ref offenders } => {
            let message = format!(
                "{} cells have non-logarithmic divergences (first: {}); see the report for the full list",
                offenders.len(),
                offenders.first().map(String::as_str).unwrap_or("")
            );
            CliError::refusal("non_logarithmic", message, json!({ "cells": offenders }))
        }
        IntegrationError::NotConverged { value, error, depth, evaluations } => CliError::refusal(
            "not_converged",
            e.to_string(),
            json!({ "estimate": value, "error": error, "depth": depth, "evaluations": evaluations }),
        ),
        IntegrationError::NonFinite { ref point, value } => CliError::refusal(
            "non_finite",
            e.to_string(),
            json!({ "point": point, "value": value.to_string() }),
        ),
        IntegrationError::Renorm(r) => renorm_error(*r),
        IntegrationError::PowerCounting(p) => power_counting_error(p),
        IntegrationError::Moduli(m) => moduli_error(m),
        other => CliError::Usage(other.to_string()),
    }
}

fn renorm_error(e: RenormError) -> CliError {
    match e {
        RenormError::PowerCounting(p) => power_counting_error(p),
        RenormError::Integration(i) => integration_error(*i),
        other => CliError::Usage(other.to_string()),
    }
}

fn render(g: &Graph) -> PolysReport {
    let psi: ScalarPolynomial = first_symanzik(g);
    let phi: GraphPolynomial = second_symanzik(g);
    let xi: GraphPolynomial = xi_polynomial(g);
    PolysReport { edges: g.edge_ids().iter().collect(), rank: g.rank(), psi: psi.to_string(), phi: phi.to_string(), xi: xi.to_string() }
}

fn to_value<T: Serialize>(report: &T) -> Value {
    serde_json::to_value(report).expect("reports serialise")
}

/// Runs one command and returns its JSON report.
pub fn dispatch(cli: &Cli, env_seed: Option<&str>) -> Result<Value, CliError> {
    match cli.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| execute(cli, env_seed)),
        None => execute(cli, env_seed),
    }
}

fn execute(cli: &Cli, env_seed: Option<&str>) -> Result<Value, CliError> {
    match &cli.command {
        Command::Polys { graph } => {
            let g = parse_graph_file(graph)?;
            Ok(to_value(&render(&g)))
        }
        Command::PowerCount { graph, d } => {
            let g = parse_graph_file(graph)?;
            let d = parse_rational(d)?;
            let report = PowerCountReport {
                d: q(d),
                rank: g.rank(),
                superficial_degree: q(superficial_degree(&g, d)),
                divergent_subgraphs: divergent_subgraphs(&g, d)
                    .into_iter()
                    .map(|s| DivergentReport { edges: s.edges.iter().collect(), rank: s.rank, degree: q(s.degree) })
                    .collect(),
                weinberg_convergent: is_weinberg_convergent(&g, d),
                weinberg_convergent_projective: is_weinberg_convergent_projective(&g, d),
            };
            Ok(to_value(&report))
        }
        Command::Forests { graph, d, log_only } => {
            let g = parse_graph_file(graph)?;
            let d = parse_rational(d)?;
            let forests = divergence_forests(&g, d, *log_only).map_err(power_counting_error)?;
            let report = ForestsReport {
                d: q(d),
                log_only: *log_only,
                forests: forests
                    .iter()
                    .map(|f| ForestReport { members: edge_sets(f.members()), sign: f.sign() as i32 })
                    .collect(),
            };
            Ok(to_value(&report))
        }
        Command::Cells { n, k, guards } => {
            let poset = ModuliPoset::build(*n, *k, &guards.config()).map_err(moduli_error)?;
            let report = CellsReport {
                n: *n,
                k: *k,
                colours: colour_capacity(*n, *k).map_err(moduli_error)?,
                f_vector: poset.f_vector(),
                cells: poset
                    .cells
                    .iter()
                    .enumerate()
                    .map(|(index, c)| CellReport {
                        index,
                        dimension: c.dimension(),
                        vertices: c.graph.vertices().to_vec(),
                        edges: c.graph.edges().to_vec(),
                        legs: c.graph.legs().to_vec(),
                    })
                    .collect(),
                face_relations: poset.covers.iter().map(|&(a, b)| [a, b]).collect(),
            };
            Ok(to_value(&report))
        }
        Command::Faces { graph, d } => {
            let g = parse_graph_file(graph)?;
            let d = parse_rational(d)?;
            let vertices = polytope_vertices(&g).map_err(|e| cell_error(graph, e))?;
            let facet_list = facets(&g).map_err(|e| cell_error(graph, e))?;
            let report = FacesReport {
                d: q(d),
                n_vertices: vertices.len(),
                n_facets: facet_list.len(),
                vertices: vertices
                    .into_iter()
                    .map(|v| VertexReport { tree: v.tree.iter().collect(), ordering: v.ordering })
                    .collect(),
                facets: facet_list
                    .into_iter()
                    .map(|f| FacetReport { contracted_forest: f.contracted_forest.iter().collect(), flag: edge_sets(f.flag.chain()) })
                    .collect(),
                flags: flags(&g)
                    .into_iter()
                    .map(|f| FlagReport {
                        chain: edge_sets(f.chain()),
                        pole_orders: pole_orders(&g, &f, d).into_iter().map(q).collect(),
                    })
                    .collect(),
            };
            Ok(to_value(&report))
        }
        Command::Integrate { graph, kinematics, d, numerics } => {
            let config = RunConfig::resolve(numerics, d.as_deref(), cli.jobs, env_seed)?;
            let g = parse_graph_file(graph)?;
            let kin = parse_kinematics_file(kinematics, g.leg_count(), config.d)?;
            let r = feynman_integral(&g, &kin, &config.method).map_err(integration_error)?;
            Ok(to_value(&IntegralReport {
                value: r.value,
                error: r.error,
                method: r.method,
                samples_or_depth: r.samples_or_depth,
                seed: seed_of(&config.method).filter(|_| r.method == Method::MonteCarlo),
            }))
        }
        Command::Renormalize { graph, kinematics, renorm_point, d, numerics } => {
            let config = RunConfig::resolve(numerics, d.as_deref(), cli.jobs, env_seed)?;
            let g = parse_graph_file(graph)?;
            let kin = parse_kinematics_file(kinematics, g.leg_count(), config.d)?;
            let point = parse_kinematics_file(renorm_point, g.leg_count(), Some(kin.d))?;
            let scheme = RenormScheme::new(point, kin.d).map_err(|e| CliError::input(renorm_point, e))?;
            let r = renormalised_integral(&g, &scheme, &kin, &config.method).map_err(renorm_error)?;
            Ok(to_value(&RenormalizeReport {
                integral: IntegralReport {
                    value: r.result.value,
                    error: r.result.error,
                    method: r.result.method,
                    samples_or_depth: r.result.samples_or_depth,
                    seed: seed_of(&config.method).filter(|_| r.result.method == Method::MonteCarlo),
                },
                forests: r
                    .forests
                    .into_iter()
                    .map(|f| ForestTermReport {
                        members: edge_sets(f.forest.members()),
                        sign: f.sign as i32,
                        value: f.value,
                        error: f.error,
                    })
                    .collect(),
            }))
        }
        Command::Amplitude { n, k, kinematics, renorm_point, d, numerics, guards } => {
            let config = RunConfig::resolve(numerics, d.as_deref(), cli.jobs, env_seed)?;
            let kin = parse_kinematics_file(kinematics, *k, config.d)?;
            let point = parse_kinematics_file(renorm_point, *k, Some(kin.d))?;
            let scheme = RenormScheme::new(point, kin.d).map_err(|e| CliError::input(renorm_point, e))?;
            let a = amplitude(*n, *k, &scheme, &kin, &config.method, &guards.config()).map_err(integration_error)?;
            Ok(to_value(&AmplitudeReport {
                n: a.n,
                k: a.k,
                integral: IntegralReport {
                    value: a.value,
                    error: a.error,
                    method: method_tag(&config.method),
                    samples_or_depth: samples_or_depth(&config.method),
                    seed: seed_of(&config.method),
                },
                per_cell: a
                    .per_cell
                    .into_iter()
                    .map(|c| CellValueReport { cell: c.cell, value: c.value, error: c.error, method: c.method })
                    .collect(),
            }))
        }
    }
}

/// Pretty JSON with sorted object keys and a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
    s.push('\n');
    s
}
