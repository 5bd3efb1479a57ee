//! Numerical integration over the projective simplex, Feynman integrals of
//! convergent graphs, and amplitudes summed over moduli cells.
//!
//! A projective integrand `f` of degree `−N` on `ℝ₊^N` is integrated over
//! the section `{u_i > 0, Σu < 1}` with `x = (u, 1 − Σu)`; for `N = 1` the
//! "integral" is the point value `f(1)`.

use rand::distr::{Distribution, OpenClosed01};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeSet, Graph};
use crate::kinematics::KinematicConfig;
use crate::moduli::{enumerate_admissible_with, Cell, CellSummary, ModuliConfig, ModuliError};
use crate::polynomial::PolyError;
use crate::power_counting::{check_logarithmic, divergent_subgraphs, PowerCountingError};
use crate::renormalization::{bare_integrand, renormalised_integral, RenormError, RenormScheme};
use crate::scalar::Real;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error("integrand is not finite ({value}) at x = {point:?}")]
    NonFinite { point: Vec<f64>, value: f64 },
    #[error("quadrature did not converge: estimate {value} ± {error} after {evaluations} evaluations (max depth {depth})")]
    NotConverged { value: f64, error: f64, depth: u32, evaluations: u64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("divergent graph: subgraphs {} have non-negative superficial degree", list(.subgraphs))]
    Divergent { subgraphs: Vec<EdgeSet> },
    #[error("cells with non-logarithmic divergences: {}", list(.offenders))]
    NonLogarithmicCells { offenders: Vec<String> },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Renorm(#[from] Box<RenormError>),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
    #[error(transparent)]
    PowerCounting(#[from] PowerCountingError),
}

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(", ")
}

impl From<RenormError> for IntegrationError {
    fn from(e: RenormError) -> Self {
        IntegrationError::Renorm(Box::new(e))
    }
}

/// A function on `ℝ₊^N` evaluated at points of the standard simplex. It may
/// consist of several components; the integral of interest is their sum.
pub trait Integrand<T: Real>: Sync {
    fn n_vars(&self) -> usize;

    fn eval(&self, x: &[T]) -> T;

    fn n_components(&self) -> usize {
        1
    }

    fn eval_components(&self, x: &[T], out: &mut [T]) {
        out[0] = self.eval(x);
    }
}

/// A closure as an integrand.
pub struct FnIntegrand<F> {
    pub n_vars: usize,
    pub f: F,
}

impl<T: Real, F: Fn(&[T]) -> T + Sync> Integrand<T> for FnIntegrand<F> {
    fn n_vars(&self) -> usize {
        self.n_vars
    }
    fn eval(&self, x: &[T]) -> T {
        (self.f)(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MonteCarlo,
    Quadrature,
    /// Point evaluation of a zero-dimensional cell.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegrationResult<T> {
    pub value: T,
    pub error: T,
    /// Number of samples (Monte Carlo), maximum depth (quadrature), or 1 (exact).
    pub samples_or_depth: u64,
    pub method: Method,
    /// Per-component estimates on the same samples or mesh.
    pub components: Vec<Estimate<T>>,
}

impl<T: Real> IntegrationResult<T> {
    /// `|self − other| ≤ k·σ_combined`.
    pub fn agrees_with(&self, other: &Self, k: f64) -> bool {
        let sigma = (self.error * self.error + other.error * other.error).sqrt();
        (self.value - other.value).abs() <= T::of(k) * sigma
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct McOptions {
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Samples per independently seeded batch. Results depend on it, not on `jobs`.
    pub batch: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { samples: 100_000, seed: 0, jobs: None, batch: 4096 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadOptions {
    pub max_depth: u32,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evaluations: u64,
    pub jobs: Option<usize>,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { max_depth: 14, rel_tol: 1e-9, abs_tol: 1e-12, max_evaluations: 20_000_000, jobs: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum IntegrationMethod {
    MonteCarlo(McOptions),
    Quadrature(QuadOptions),
}

impl Default for IntegrationMethod {
    fn default() -> Self {
        IntegrationMethod::MonteCarlo(McOptions::default())
    }
}

fn with_pool<R: Send>(jobs: Option<usize>, op: impl FnOnce() -> R + Send) -> R {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(op),
        None => op(),
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn check_finite<T: Real>(x: &[T], values: &[T]) -> Result<(), IntegrationError> {
    match values.iter().find(|v| !v.is_finite()) {
        None => Ok(()),
        Some(v) => Err(IntegrationError::NonFinite {
            point: x.iter().map(|t| t.to_f64().unwrap_or(f64::NAN)).collect(),
            value: v.to_f64().unwrap_or(f64::NAN),
        }),
    }
}

fn point_value<T: Real, I: Integrand<T> + ?Sized>(f: &I) -> Result<IntegrationResult<T>, IntegrationError> {
    let x = [T::one()];
    let mut out = vec![T::zero(); f.n_components()];
    f.eval_components(&x, &mut out);
    check_finite(&x, &out)?;
    let value = out.iter().copied().sum();
    Ok(IntegrationResult {
        value,
        error: T::zero(),
        samples_or_depth: 1,
        method: Method::Exact,
        components: out.into_iter().map(|value| Estimate { value, error: T::zero() }).collect(),
    })
}

/// Running mean and squared deviations of each component plus the total,
/// merged with Chan's pairwise update.
#[derive(Clone, Debug)]
struct Moments<T> {
    n: f64,
    mean: Vec<T>,
    m2: Vec<T>,
}

impl<T: Real> Moments<T> {
    fn empty(width: usize) -> Self {
        Moments { n: 0.0, mean: vec![T::zero(); width], m2: vec![T::zero(); width] }
    }

    fn push(&mut self, values: &[T]) {
        self.n += 1.0;
        let n = T::of(self.n);
        for (i, &v) in values.iter().enumerate() {
            let delta = v - self.mean[i];
            self.mean[i] = self.mean[i] + delta / n;
            self.m2[i] = self.m2[i] + delta * (v - self.mean[i]);
        }
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.n == 0.0 {
            return b;
        }
        if b.n == 0.0 {
            return a;
        }
        let n = a.n + b.n;
        let (wa, wb, w) = (T::of(a.n), T::of(b.n), T::of(a.n * b.n / n));
        let mut out = Moments::empty(a.mean.len());
        out.n = n;
        for i in 0..a.mean.len() {
            let delta = b.mean[i] - a.mean[i];
            out.mean[i] = (a.mean[i] * wa + b.mean[i] * wb) / T::of(n);
            out.m2[i] = a.m2[i] + b.m2[i] + delta * delta * w;
        }
        out
    }
}

/// Reduces in a fixed balanced tree so the result depends only on the order of `items`.
fn pairwise<M: Clone>(mut items: Vec<M>, merge: impl Fn(M, M) -> M + Copy) -> Option<M> {
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => merge(a, b),
                None => a,
            });
        }
        items = next;
    }
    items.pop()
}

/// Uniform samples on the simplex by normalised exponential spacings.
fn sample_simplex<T: Real>(rng: &mut ChaCha8Rng, x: &mut [T]) {
    let mut total = 0.0;
    let mut raw = [0.0f64; 16];
    let mut spill = Vec::new();
    let buf: &mut [f64] = if x.len() <= raw.len() {
        &mut raw[..x.len()]
    } else {
        spill.resize(x.len(), 0.0);
        &mut spill
    };
    for slot in buf.iter_mut() {
        let mut e = 0.0;
        while e == 0.0 {
            let u: f64 = OpenClosed01.sample(rng);
            e = -u.ln();
        }
        *slot = e;
        total += e;
    }
    for (xi, &e) in x.iter_mut().zip(buf.iter()) {
        *xi = T::of(e / total);
    }
}

/// Monte Carlo over the simplex section. Batches are seeded by `(seed, batch index)`
/// and reduced pairwise in batch order, so the result is bitwise independent of `jobs`.
pub fn simplex_integrate_mc<T: Real, I: Integrand<T> + ?Sized>(
    f: &I,
    opts: &McOptions,
) -> Result<IntegrationResult<T>, IntegrationError> {
    let n = f.n_vars();
    if n == 0 {
        return Err(IntegrationError::Unsupported("integrand has no variables".into()));
    }
    if n == 1 {
        return point_value(f);
    }
    if opts.samples < 2 || opts.batch == 0 {
        return Err(IntegrationError::Unsupported("need at least two samples and a positive batch size".into()));
    }
    let width = f.n_components() + 1;
    let batches = opts.samples.div_ceil(opts.batch);
    let run = |b: u64| -> Result<Moments<T>, IntegrationError> {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(b);
        let count = opts.batch.min(opts.samples - b * opts.batch);
        let mut x = vec![T::zero(); n];
        let mut values = vec![T::zero(); width];
        let mut moments = Moments::empty(width);
        for _ in 0..count {
            sample_simplex(&mut rng, &mut x);
            f.eval_components(&x, &mut values[..width - 1]);
            values[width - 1] = values[..width - 1].iter().copied().sum();
            check_finite(&x, &values)?;
            moments.push(&values);
        }
        Ok(moments)
    };
    let per_batch: Vec<Moments<T>> =
        with_pool(opts.jobs, || (0..batches).into_par_iter().map(run).collect::<Result<Vec<_>, _>>())?;
    let m = pairwise(per_batch, Moments::merge).expect("at least one batch");
    let volume = T::of(1.0 / factorial(n - 1));
    let estimate = |i: usize| {
        let var = m.m2[i] / T::of(m.n - 1.0);
        Estimate { value: volume * m.mean[i], error: volume * (var / T::of(m.n)).sqrt() }
    };
    let total = estimate(width - 1);
    Ok(IntegrationResult {
        value: total.value,
        error: total.error,
        samples_or_depth: opts.samples,
        method: Method::MonteCarlo,
        components: (0..width - 1).map(estimate).collect(),
    })
}

/// Vertices of a simplex in `ℝ^dim`, plus its volume.
#[derive(Clone, Debug)]
struct Simplex {
    vertices: Vec<Vec<f64>>,
    volume: f64,
}

fn midpoint(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect()
}

impl Simplex {
    /// Red refinement into `2^dim` congruent-volume children (Bey's scheme in 3D).
    fn children(&self) -> Vec<Simplex> {
        let v = &self.vertices;
        let m = |i: usize, j: usize| midpoint(&v[i], &v[j]);
        let kids: Vec<Vec<Vec<f64>>> = match v.len() {
            2 => vec![vec![v[0].clone(), m(0, 1)], vec![m(0, 1), v[1].clone()]],
            3 => vec![
                vec![v[0].clone(), m(0, 1), m(0, 2)],
                vec![m(0, 1), v[1].clone(), m(1, 2)],
                vec![m(0, 2), m(1, 2), v[2].clone()],
                vec![m(0, 1), m(1, 2), m(0, 2)],
            ],
            4 => {
                let (x01, x02, x03, x12, x13, x23) = (m(0, 1), m(0, 2), m(0, 3), m(1, 2), m(1, 3), m(2, 3));
                vec![
                    vec![v[0].clone(), x01.clone(), x02.clone(), x03.clone()],
                    vec![x01.clone(), v[1].clone(), x12.clone(), x13.clone()],
                    vec![x02.clone(), x12.clone(), v[2].clone(), x23.clone()],
                    vec![x03.clone(), x13.clone(), x23.clone(), v[3].clone()],
                    vec![x01.clone(), x02.clone(), x03.clone(), x13.clone()],
                    vec![x01.clone(), x02.clone(), x12.clone(), x13.clone()],
                    vec![x02.clone(), x03.clone(), x13.clone(), x23.clone()],
                    vec![x02, x12, x13, x23],
                ]
            }
            k => unreachable!("simplices of dimension {} are not refined", k - 1),
        };
        let volume = self.volume / kids.len() as f64;
        kids.into_iter().map(|vertices| Simplex { vertices, volume }).collect()
    }
}

/// Grundmann–Möller rule of degree `2s+1` on the `n`-simplex: barycentric
/// points and weights normalised to sum to one.
fn grundmann_moeller(n: usize, s: usize) -> Vec<(Vec<f64>, f64)> {
    let d = (2 * s + 1) as i32;
    let mut rule = Vec::new();
    for i in 0..=s {
        let denom = (d as usize + n - 2 * i) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let w = sign * denom.powi(d) / (factorial(i) * factorial(d as usize + n - i));
        for beta in compositions(s - i, n + 1) {
            rule.push((beta.iter().map(|&b| (2 * b + 1) as f64 / denom).collect(), w));
        }
    }
    let total: f64 = rule.iter().map(|(_, w)| w).sum();
    rule.into_iter().map(|(p, w)| (p, w / total)).collect()
}

/// All vectors of `parts` non-negative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Vector-valued integrand evaluation shared by the quadrature workers.
type ComponentEval<'a, T> = dyn Fn(&[f64]) -> Result<Vec<T>, IntegrationError> + Sync + 'a;

struct QuadState<'a, T> {
    eval: &'a ComponentEval<'a, T>,
    opts: &'a QuadOptions,
    /// Error budget per unit volume.
    density: f64,
    high: Vec<(Vec<f64>, f64)>,
    low: Vec<(Vec<f64>, f64)>,
    evaluations: std::sync::atomic::AtomicU64,
}

struct Leaf<T> {
    values: Vec<T>,
    error: f64,
    converged: bool,
}

impl<T: Real> QuadState<'_, T> {
    fn apply(&self, s: &Simplex, rule: &[(Vec<f64>, f64)], width: usize) -> Result<Vec<T>, IntegrationError> {
        let dim = s.vertices[0].len();
        let mut acc = vec![T::zero(); width];
        let mut point = vec![0.0; dim];
        for (bary, w) in rule {
            point.iter_mut().for_each(|p| *p = 0.0);
            for (lambda, v) in bary.iter().zip(&s.vertices) {
                for (p, c) in point.iter_mut().zip(v) {
                    *p += lambda * c;
                }
            }
            let fx = (self.eval)(&point)?;
            for (a, v) in acc.iter_mut().zip(fx) {
                *a = *a + v * T::of(w * s.volume);
            }
        }
        self.evaluations.fetch_add(rule.len() as u64, std::sync::atomic::Ordering::Relaxed);
        Ok(acc)
    }

    fn refine(&self, s: &Simplex, width: usize, depth: u32) -> Result<Leaf<T>, IntegrationError> {
        let high = self.apply(s, &self.high, width)?;
        let low = self.apply(s, &self.low, width)?;
        let total = |v: &[T]| v.iter().copied().sum::<T>().to_f64().unwrap_or(f64::NAN);
        let (h, l) = (total(&high), total(&low));
        let diff = (h - l).abs();
        let ok = diff <= self.density * s.volume;
        let used = self.evaluations.load(std::sync::atomic::Ordering::Relaxed);
        if ok || depth >= self.opts.max_depth || used > self.opts.max_evaluations {
            return Ok(Leaf { values: high, error: diff, converged: ok });
        }
        let kids = s.children();
        let leaves: Vec<Leaf<T>> = if depth < 3 {
            kids.par_iter().map(|k| self.refine(k, width, depth + 1)).collect::<Result<_, _>>()?
        } else {
            kids.iter().map(|k| self.refine(k, width, depth + 1)).collect::<Result<_, _>>()?
        };
        let mut out = Leaf { values: vec![T::zero(); width], error: 0.0, converged: true };
        for leaf in leaves {
            for (acc, x) in out.values.iter_mut().zip(&leaf.values) {
                *acc = *acc + *x;
            }
            out.error += leaf.error;
            out.converged &= leaf.converged;
        }
        Ok(out)
    }
}

/// Adaptive quadrature over the given simplices (dimension ≤ 3): a degree-5
/// Grundmann–Möller rule with the embedded degree-3 rule as error estimate,
/// red refinement where they disagree.
fn adaptive<T: Real>(
    pieces: Vec<Simplex>,
    width: usize,
    eval: &ComponentEval<'_, T>,
    opts: &QuadOptions,
) -> Result<IntegrationResult<T>, IntegrationError> {
    let dim = pieces[0].vertices[0].len();
    let total_volume: f64 = pieces.iter().map(|s| s.volume).sum();
    let mut state = QuadState {
        eval,
        opts,
        density: 0.0,
        high: grundmann_moeller(dim, 2),
        low: grundmann_moeller(dim, 1),
        evaluations: 0.into(),
    };
    // the error budget is shared out by volume, scaled by a coarse estimate
    let mut scale = 0.0;
    for s in &pieces {
        let v = state.apply(s, &state.high, width)?;
        scale += v.iter().copied().sum::<T>().to_f64().unwrap_or(f64::NAN);
    }
    state.density = opts.abs_tol.max(opts.rel_tol * scale.abs()) / total_volume;
    let leaves: Vec<Leaf<T>> = with_pool(opts.jobs, || {
        pieces.par_iter().map(|s| state.refine(s, width, 0)).collect::<Result<Vec<_>, _>>()
    })?;
    let mut values = vec![T::zero(); width];
    let (mut error, mut converged) = (0.0, true);
    for leaf in leaves {
        for (acc, x) in values.iter_mut().zip(&leaf.values) {
            *acc = *acc + *x;
        }
        error += leaf.error;
        converged &= leaf.converged;
    }
    let evaluations = state.evaluations.into_inner();
    let value: T = values.iter().copied().sum();
    let v = value.to_f64().unwrap_or(f64::NAN);
    let ok = error <= opts.abs_tol.max(opts.rel_tol * v.abs());
    if evaluations > opts.max_evaluations || !(converged || ok) {
        return Err(IntegrationError::NotConverged { value: v, error, depth: opts.max_depth, evaluations });
    }
    Ok(IntegrationResult {
        value,
        error: T::of(error),
        samples_or_depth: opts.max_depth as u64,
        method: Method::Quadrature,
        // component errors are not tracked separately
        components: values.into_iter().map(|value| Estimate { value, error: T::zero() }).collect(),
    })
}


fn components_at<T: Real, I: Integrand<T> + ?Sized>(f: &I, x: &[T]) -> Result<Vec<T>, IntegrationError> {
    let mut out = vec![T::zero(); f.n_components()];
    f.eval_components(x, &mut out);
    check_finite(x, &out)?;
    Ok(out)
}

/// Deterministic adaptive quadrature over the simplex section; `n_vars ≤ 4`.
pub fn simplex_integrate_quad<T: Real, I: Integrand<T> + ?Sized>(
    f: &I,
    opts: &QuadOptions,
) -> Result<IntegrationResult<T>, IntegrationError> {
    let n = f.n_vars();
    if n == 1 {
        return point_value(f);
    }
    if !(2..=4).contains(&n) {
        return Err(IntegrationError::Unsupported(format!("quadrature supports 1 to 4 variables, got {n}")));
    }
    let dim = n - 1;
    let mut vertices = vec![vec![0.0; dim]];
    for i in 0..dim {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        vertices.push(v);
    }
    let simplex = Simplex { vertices, volume: 1.0 / factorial(dim) };
    let eval = |u: &[f64]| {
        let mut x: Vec<T> = u.iter().map(|&t| T::of(t)).collect();
        x.push(T::of(1.0 - u.iter().sum::<f64>()));
        components_at(f, &x)
    };
    adaptive(vec![simplex], f.n_components(), &eval, opts)
}

/// The same integral computed in the affine chart `x_affine = 1` over
/// `(0,∞)^{N−1}`, mapped to the unit cube by `t = (u/(1−u))³` (the cube
/// keeps the integrand bounded at the far corners) and split into
/// `(N−1)!` simplices. Agrees with [`simplex_integrate_quad`] for integrands
/// homogeneous of degree `−N`.
pub fn affine_integrate_quad<T: Real, I: Integrand<T> + ?Sized>(
    f: &I,
    affine: usize,
    opts: &QuadOptions,
) -> Result<IntegrationResult<T>, IntegrationError> {
    let n = f.n_vars();
    if !(2..=4).contains(&n) || affine >= n {
        return Err(IntegrationError::Unsupported(format!("affine chart {affine} with {n} variables")));
    }
    let dim = n - 1;
    let volume = 1.0 / factorial(dim);
    let pieces: Vec<Simplex> = (0..dim)
        .collect::<Vec<_>>()
        .iter()
        .copied()
        .permutations_of(dim)
        .into_iter()
        .map(|perm| {
            let mut v = vec![0.0; dim];
            let mut vertices = vec![v.clone()];
            for &axis in &perm {
                v[axis] = 1.0;
                vertices.push(v.clone());
            }
            Simplex { vertices, volume }
        })
        .collect();
    let eval = |u: &[f64]| {
        let mut x = Vec::with_capacity(n);
        let mut jacobian = 1.0;
        let mut it = u.iter();
        for i in 0..n {
            if i == affine {
                x.push(T::one());
            } else {
                let ui = *it.next().expect("dim coordinates");
                let r = ui / (1.0 - ui);
                jacobian *= 3.0 * r * r / ((1.0 - ui) * (1.0 - ui));
                x.push(T::of(r * r * r));
            }
        }
        let values = components_at(f, &x)?;
        Ok(values.into_iter().map(|v| v * T::of(jacobian)).collect())
    };
    adaptive(pieces, f.n_components(), &eval, opts)
}

trait Permutations {
    fn permutations_of(self, k: usize) -> Vec<Vec<usize>>;
}

impl<It: Iterator<Item = usize>> Permutations for It {
    fn permutations_of(self, k: usize) -> Vec<Vec<usize>> {
        use itertools::Itertools;
        self.permutations(k).collect()
    }
}

/// Integrates with the chosen method.
pub fn integrate<T: Real, I: Integrand<T> + ?Sized>(
    f: &I,
    method: &IntegrationMethod,
) -> Result<IntegrationResult<T>, IntegrationError> {
    match method {
        IntegrationMethod::MonteCarlo(o) => simplex_integrate_mc(f, o),
        IntegrationMethod::Quadrature(o) => simplex_integrate_quad(f, o),
    }
}

/// `∫_{σ_G} f_G ν_G` for a graph without divergent proper subgraphs.
pub fn feynman_integral(
    g: &Graph,
    kin: &KinematicConfig,
    method: &IntegrationMethod,
) -> Result<IntegrationResult<f64>, IntegrationError> {
    if !g.is_connected() || g.rank() == 0 {
        return Err(IntegrationError::Unsupported("Feynman integrals need a connected graph of positive rank".into()));
    }
    let divergent = divergent_subgraphs(g, kin.d);
    if !divergent.is_empty() {
        return Err(IntegrationError::Divergent { subgraphs: divergent.into_iter().map(|s| s.edges).collect() });
    }
    let f = bare_integrand::<f64>(g, kin)?;
    integrate(&f, method)
}

/// One cell's contribution to an amplitude.
#[derive(Clone, Debug, Serialize)]
pub struct CellContribution {
    pub cell: CellSummary,
    pub value: f64,
    pub error: f64,
    pub method: Method,
}

#[derive(Clone, Debug, Serialize)]
pub struct AmplitudeResult {
    pub n: u32,
    pub k: u32,
    pub value: f64,
    pub error: f64,
    pub per_cell: Vec<CellContribution>,
}

/// The renormalised amplitude: the sum over every cell of X_{n,k} (all
/// dimensions) of its renormalised integral.
pub fn amplitude(
    n: u32,
    k: u32,
    scheme: &RenormScheme,
    kin: &KinematicConfig,
    method: &IntegrationMethod,
    config: &ModuliConfig,
) -> Result<AmplitudeResult, IntegrationError> {
    let cells: Vec<Cell> = enumerate_admissible_with(n, k, config)?;
    let d: Rational = scheme.d();
    let offenders: Vec<String> = cells
        .iter()
        .filter_map(|c| check_logarithmic(&c.graph, d).err().map(|e| format!("{:?}: {e}", c.colours())))
        .collect();
    if !offenders.is_empty() {
        return Err(IntegrationError::NonLogarithmicCells { offenders });
    }
    let mut per_cell = Vec::with_capacity(cells.len());
    for c in &cells {
        let r = renormalised_integral(&c.graph, scheme, kin, method)?;
        per_cell.push(CellContribution {
            cell: CellSummary::from(c),
            value: r.result.value,
            error: r.result.error,
            method: r.result.method,
        });
    }
    let value = per_cell.iter().map(|c| c.value).sum();
    let error = per_cell.iter().map(|c| c.error * c.error).sum::<f64>().sqrt();
    Ok(AmplitudeResult { n, k, value, error, per_cell })
}
