//! Sparse multivariate polynomials with exact coefficients.
//!
//! Variables are identified by `u32` ids (edge ids for graph polynomials,
//! chart coordinates after a pullback). Terms are keyed by exponent vectors
//! over the sorted variable list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Debug, Display};

use thiserror::Error;

use crate::kinematics::{KinSymbol, KinematicConfig, KinematicsError};
use num_rational::Ratio;

use crate::scalar::{to_real, ExactScalar, Real};

pub type VarId = u32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("variable x{0} does not occur in the polynomial's variable list")]
    UnknownVariable(VarId),
    #[error("no value supplied for x{0}")]
    MissingValue(VarId),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("the zero polynomial has no scaling behaviour")]
    Zero,
}

/// Coefficient ring over an exact scalar field.
pub trait Coefficient: Clone + Debug + Display + PartialEq + Send + Sync {
    type Scalar: ExactScalar;
    fn zero() -> Self;
    fn from_scalar(q: Self::Scalar) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn scale(&self, q: &Self::Scalar) -> Self;
    /// Numeric value under a kinematic assignment.
    fn to_real<T: Real>(&self, kin: &KinematicConfig) -> Result<T, KinematicsError>;
}

macro_rules! ratio_coefficient {
    ($($int:ty),*) => {$(
        impl Coefficient for Ratio<$int> {
            type Scalar = Ratio<$int>;
            fn zero() -> Self {
                num_traits::Zero::zero()
            }
            fn from_scalar(q: Self) -> Self {
                q
            }
            fn is_zero(&self) -> bool {
                num_traits::Zero::is_zero(self)
            }
            fn is_one(&self) -> bool {
                num_traits::One::is_one(self)
            }
            fn add_assign(&mut self, other: &Self) {
                *self += *other;
            }
            fn scale(&self, q: &Self) -> Self {
                *self * *q
            }
            fn to_real<T: Real>(&self, _kin: &KinematicConfig) -> Result<T, KinematicsError> {
                Ok(to_real(self))
            }
        }
    )*};
}

ratio_coefficient!(i32, i64, i128);

/// A rational-weighted sum of kinematic symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm<Q> {
    terms: BTreeMap<KinSymbol, Q>,
}

impl<Q: ExactScalar> LinearForm<Q> {
    pub fn symbol(sym: KinSymbol) -> Self {
        LinearForm { terms: BTreeMap::from([(sym, <Q as num_traits::One>::one())]) }
    }

    pub fn terms(&self) -> &BTreeMap<KinSymbol, Q> {
        &self.terms
    }

    /// True when only the unit symbol occurs.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|s| *s == KinSymbol::Unit)
    }

    pub fn unit_part(&self) -> Q {
        self.terms.get(&KinSymbol::Unit).cloned().unwrap_or_else(<Q as num_traits::Zero>::zero)
    }
}

impl<Q: ExactScalar> Display for LinearForm<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (sym, q)) in self.terms.iter().enumerate() {
            let (neg, mag) = if *q < <Q as num_traits::Zero>::zero() { (true, -q.clone()) } else { (false, q.clone()) };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (sym, num_traits::One::is_one(&mag)) {
                (KinSymbol::Unit, _) => write!(f, "{mag}")?,
                (s, true) => write!(f, "{s}")?,
                (s, false) => write!(f, "{mag}*{s}")?,
            }
        }
        Ok(())
    }
}

impl<Q: ExactScalar> Coefficient for LinearForm<Q> {
    type Scalar = Q;
    fn zero() -> Self {
        LinearForm { terms: BTreeMap::new() }
    }
    fn from_scalar(q: Q) -> Self {
        let mut lf = Self::zero();
        if !num_traits::Zero::is_zero(&q) {
            lf.terms.insert(KinSymbol::Unit, q);
        }
        lf
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.is_scalar() && num_traits::One::is_one(&self.unit_part())
    }
    fn add_assign(&mut self, other: &Self) {
        for (sym, q) in &other.terms {
            let entry = self.terms.entry(sym.clone()).or_insert_with(<Q as num_traits::Zero>::zero);
            *entry = entry.clone() + q.clone();
            if num_traits::Zero::is_zero(entry) {
                self.terms.remove(sym);
            }
        }
    }
    fn scale(&self, q: &Q) -> Self {
        if num_traits::Zero::is_zero(q) {
            return Self::zero();
        }
        LinearForm { terms: self.terms.iter().map(|(s, c)| (s.clone(), c.clone() * q.clone())).collect() }
    }
    fn to_real<T: Real>(&self, kin: &KinematicConfig) -> Result<T, KinematicsError> {
        let mut acc = T::zero();
        for (sym, q) in &self.terms {
            acc = acc + to_real::<Q, T>(q) * T::of(kin.value(sym)?);
        }
        Ok(acc)
    }
}

/// A polynomial in the variables `vars` (sorted ids) with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C> {
    vars: Vec<VarId>,
    terms: BTreeMap<Vec<u32>, C>,
}

/// Powers of selected variables, `(var, exponent)` with distinct vars.
pub type Monomial = Vec<(VarId, u32)>;

impl<C> Polynomial<C> {
    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &C)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn position(&self, v: VarId) -> Option<usize> {
        self.vars.binary_search(&v).ok()
    }

    /// Total degree of each term, if all agree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max()
    }

    /// Smallest total degree in the given variables over all terms.
    pub fn min_degree_in(&self, subset: &[VarId]) -> Option<u32> {
        let idx: Vec<usize> = subset.iter().filter_map(|v| self.position(*v)).collect();
        self.terms.keys().map(|e| idx.iter().map(|&i| e[i]).sum::<u32>()).min()
    }

    /// Every exponent is 0 or 1.
    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&p| p <= 1))
    }
}

impl<C> Polynomial<C> {
    /// Exponent of `v` shared by every term (the largest power of `v` dividing the polynomial).
    pub fn min_exponent(&self, v: VarId) -> Option<u32> {
        let i = self.position(v)?;
        self.terms.keys().map(|e| e[i]).min()
    }
}

impl<C: Coefficient> Polynomial<C> {
    /// Collects `(exponents, coefficient)` pairs over `vars`, merging repeats and dropping zeros.
    pub fn from_terms(vars: Vec<VarId>, raw: impl IntoIterator<Item = (Vec<u32>, C)>) -> Self {
        let mut terms: BTreeMap<Vec<u32>, C> = BTreeMap::new();
        for (e, c) in raw {
            match terms.get_mut(&e) {
                Some(acc) => acc.add_assign(&c),
                None => {
                    terms.insert(e, c);
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial { vars, terms }
    }

    pub fn zero(vars: Vec<VarId>) -> Self {
        let mut vars = vars;
        vars.sort_unstable();
        vars.dedup();
        Polynomial { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vec<VarId>, c: C) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one(vars: Vec<VarId>) -> Self {
        Self::constant(vars, C::from_scalar(num_traits::One::one()))
    }

    /// `c · Π x_v^p` for the given monomial.
    pub fn monomial(vars: Vec<VarId>, mono: &[(VarId, u32)], c: C) -> Result<Self, PolyError> {
        let mut p = Self::zero(vars);
        let mut e = vec![0; p.vars.len()];
        for &(v, pow) in mono {
            let i = p.position(v).ok_or(PolyError::UnknownVariable(v))?;
            e[i] += pow;
        }
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        Ok(p)
    }

    pub fn variable(vars: Vec<VarId>, v: VarId) -> Result<Self, PolyError> {
        Self::monomial(vars, &[(v, 1)], C::from_scalar(num_traits::One::one()))
    }

    /// Re-expresses the polynomial over a superset of its variables.
    pub fn with_vars(&self, vars: &[VarId]) -> Result<Self, PolyError> {
        let mut all: Vec<VarId> = vars.to_vec();
        all.sort_unstable();
        all.dedup();
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| all.binary_search(v).map_err(|_| PolyError::UnknownVariable(*v)))
            .collect::<Result<_, _>>()?;
        let width = all.len();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; width];
            for (i, &p) in e.iter().enumerate() {
                ne[map[i]] = p;
            }
            (ne, c.clone())
        });
        Ok(Self::from_terms(all, terms))
    }

    fn aligned(&self, other_vars: &[VarId]) -> (Vec<VarId>, Self) {
        let all: Vec<VarId> =
            self.vars.iter().chain(other_vars).copied().collect::<BTreeSet<_>>().into_iter().collect();
        let me = self.with_vars(&all).expect("superset");
        (all, me)
    }

    pub fn add(&self, other: &Self) -> Self {
        let (all, a) = self.aligned(&other.vars);
        let b = other.with_vars(&all).expect("superset");
        let terms = a.terms.into_iter().chain(b.terms);
        Self::from_terms(all, terms)
    }

    pub fn scale(&self, q: &C::Scalar) -> Self {
        Self::from_terms(self.vars.clone(), self.terms.iter().map(|(e, c)| (e.clone(), c.scale(q))))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-<C::Scalar as num_traits::One>::one()))
    }

    /// Product with a polynomial over the scalar field.
    pub fn mul_scalar_poly(&self, other: &Polynomial<C::Scalar>) -> Self {
        let (all, a) = self.aligned(&other.vars);
        let b = other.with_vars(&all).expect("superset");
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                terms.push((e, ca.scale(cb)));
            }
        }
        Self::from_terms(all, terms)
    }

    /// Substitutes `x_v = 0` and drops `v` from the variable list.
    pub fn restrict_to_zero(&self, v: VarId) -> Result<Self, PolyError> {
        let i = self.position(v).ok_or(PolyError::UnknownVariable(v))?;
        Ok(self.drop_var(i, |p| p == 0))
    }

    /// Substitutes `x_v = 1` and drops `v` from the variable list.
    pub fn restrict_to_one(&self, v: VarId) -> Result<Self, PolyError> {
        let i = self.position(v).ok_or(PolyError::UnknownVariable(v))?;
        Ok(self.drop_var(i, |_| true))
    }

    fn drop_var(&self, i: usize, keep: impl Fn(u32) -> bool) -> Self {
        let mut vars = self.vars.clone();
        vars.remove(i);
        let terms = self.terms.iter().filter(|(e, _)| keep(e[i])).map(|(e, c)| {
            let mut ne = e.clone();
            ne.remove(i);
            (ne, c.clone())
        });
        Self::from_terms(vars, terms)
    }

    /// Substitutes `x_v = 0` keeping `v` in the variable list.
    pub fn set_zero(&self, v: VarId) -> Result<Self, PolyError> {
        let i = self.position(v).ok_or(PolyError::UnknownVariable(v))?;
        let terms = self.terms.iter().filter(|(e, _)| e[i] == 0).map(|(e, c)| (e.clone(), c.clone()));
        Ok(Self::from_terms(self.vars.clone(), terms))
    }

    /// Replaces every variable by a monomial in `new_vars`. Variables missing
    /// from `map` are an error; an empty monomial substitutes the constant 1.
    pub fn substitute_monomials(
        &self,
        new_vars: &[VarId],
        map: &BTreeMap<VarId, Monomial>,
    ) -> Result<Self, PolyError> {
        let mut nv = new_vars.to_vec();
        nv.sort_unstable();
        nv.dedup();
        let mut images: Vec<Vec<(usize, u32)>> = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            let mono = map.get(v).ok_or(PolyError::UnknownVariable(*v))?;
            let img = mono
                .iter()
                .map(|(w, p)| nv.binary_search(w).map(|i| (i, *p)).map_err(|_| PolyError::UnknownVariable(*w)))
                .collect::<Result<Vec<_>, _>>()?;
            images.push(img);
        }
        let width = nv.len();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0u32; width];
            for (i, &p) in e.iter().enumerate() {
                for &(j, q) in &images[i] {
                    ne[j] += p * q;
                }
            }
            (ne, c.clone())
        });
        Ok(Self::from_terms(nv, terms))
    }

    /// Divides by `Π x_v^p`; `None` if some term is not divisible.
    pub fn divide_by_monomial(&self, mono: &[(VarId, u32)]) -> Option<Self> {
        let idx: Vec<(usize, u32)> =
            mono.iter().map(|(v, p)| self.position(*v).map(|i| (i, *p))).collect::<Option<_>>()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            for &(i, p) in &idx {
                ne[i] = ne[i].checked_sub(p)?;
            }
            terms.push((ne, c.clone()));
        }
        Some(Self::from_terms(self.vars.clone(), terms))
    }

    /// Renames variables through `map` (must be injective on `vars`).
    pub fn rename(&self, map: &BTreeMap<VarId, VarId>) -> Result<Self, PolyError> {
        let renamed: Vec<VarId> =
            self.vars.iter().map(|v| map.get(v).copied().ok_or(PolyError::UnknownVariable(*v))).collect::<Result<_, _>>()?;
        let mut sorted = renamed.clone();
        sorted.sort_unstable();
        let perm: Vec<usize> = renamed.iter().map(|v| sorted.binary_search(v).expect("present")).collect();
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; e.len()];
            for (i, &p) in e.iter().enumerate() {
                ne[perm[i]] = p;
            }
            (ne, c.clone())
        });
        Ok(Self::from_terms(sorted, terms))
    }

    /// Lifts coefficients into another coefficient ring.
    pub fn map_coefficients<D: Coefficient<Scalar = C::Scalar>>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.vars.clone(), self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Floating-point value at `values` (aligned with [`Polynomial::vars`]).
    pub fn evaluate<T: Real>(&self, values: &[T], kin: &KinematicConfig) -> Result<T, PolyError> {
        if values.len() != self.vars.len() {
            let missing = self.vars.get(values.len()).copied().unwrap_or_default();
            return Err(PolyError::MissingValue(missing));
        }
        Ok(self.compile(kin, |v| self.position(v))?.eval(values))
    }

    /// Evaluates with values looked up by variable id.
    pub fn evaluate_map<T: Real>(&self, values: &BTreeMap<VarId, T>, kin: &KinematicConfig) -> Result<T, PolyError> {
        let xs: Vec<T> = self
            .vars
            .iter()
            .map(|v| values.get(v).copied().ok_or(PolyError::MissingValue(*v)))
            .collect::<Result<_, _>>()?;
        self.evaluate(&xs, kin)
    }

    /// Resolves coefficients numerically and fixes where each variable is read
    /// from in the argument slice of later evaluations.
    pub fn compile<T: Real>(
        &self,
        kin: &KinematicConfig,
        slot: impl Fn(VarId) -> Option<usize>,
    ) -> Result<CompiledPolynomial<T>, PolyError> {
        let slots: Vec<usize> =
            self.vars.iter().map(|v| slot(*v).ok_or(PolyError::MissingValue(*v))).collect::<Result<_, _>>()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let coeff: T = c.to_real(kin)?;
            let powers = e.iter().enumerate().filter(|(_, &p)| p > 0).map(|(i, &p)| (slots[i], p)).collect();
            terms.push((coeff, powers));
        }
        Ok(CompiledPolynomial { terms })
    }

    /// Renders with the given variable prefix, terms in descending lex order.
    pub fn render(&self, prefix: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| match p {
                    1 => format!("{prefix}{}", self.vars[i]),
                    _ => format!("{prefix}{}^{p}", self.vars[i]),
                })
                .collect();
            let text = c.to_string();
            let compound = text.contains(" + ") || text.contains(" - ");
            let (neg, text) = match text.strip_prefix('-') {
                Some(rest) if !compound => (true, rest.to_string()),
                _ => (false, text),
            };
            let coeff = if compound { format!("({text})") } else { text };
            let body = match (mono.is_empty(), coeff == "1") {
                (true, _) => coeff,
                (false, true) => mono.join("*"),
                (false, false) => format!("{coeff}*{}", mono.join("*")),
            };
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&body);
        }
        out
    }
}

impl<Q: ExactScalar> Polynomial<Q> {
    /// Product of two scalar polynomials.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_scalar_poly(other)
    }

    /// Parses sums of integer multiples of monomials such as
    /// `x3x4 + 2*x1^2*x2 - x5`. Used for fixtures and golden comparisons.
    pub fn parse(text: &str) -> Result<Self, PolyError> {
        let err = |m: &str| PolyError::Parse(format!("{m} in {text:?}"));
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() || cleaned == "0" {
            return Ok(Self::zero(vec![]));
        }
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut sign = false;
        let mut cur = String::new();
        for ch in cleaned.chars() {
            if (ch == '+' || ch == '-') && !cur.is_empty() {
                chunks.push((sign, std::mem::take(&mut cur)));
                sign = ch == '-';
            } else if ch == '-' {
                sign = !sign;
            } else if ch != '+' {
                cur.push(ch);
            }
        }
        chunks.push((sign, cur));
        let mut raw: Vec<(Vec<(VarId, u32)>, Q)> = Vec::new();
        let mut vars = BTreeSet::new();
        for (neg, chunk) in chunks {
            let mut coeff = <Q as num_traits::One>::one();
            let mut mono = Vec::new();
            let bytes: Vec<char> = chunk.chars().collect();
            let mut i = 0;
            let number = |i: &mut usize| -> Option<u32> {
                let start = *i;
                while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                    *i += 1;
                }
                bytes[start..*i].iter().collect::<String>().parse().ok()
            };
            while i < bytes.len() {
                match bytes[i] {
                    '*' => i += 1,
                    'x' => {
                        i += 1;
                        let v = number(&mut i).ok_or_else(|| err("expected variable index"))?;
                        let mut p = 1;
                        if i < bytes.len() && bytes[i] == '^' {
                            i += 1;
                            p = number(&mut i).ok_or_else(|| err("expected exponent"))?;
                        }
                        vars.insert(v);
                        mono.push((v, p));
                    }
                    c if c.is_ascii_digit() => {
                        let n = number(&mut i).ok_or_else(|| err("bad number"))?;
                        coeff = coeff * Q::from_u32(n).ok_or_else(|| err("coefficient overflow"))?;
                    }
                    c => return Err(err(&format!("unexpected {c:?}"))),
                }
            }
            raw.push((mono, if neg { -coeff } else { coeff }));
        }
        let vars: Vec<VarId> = vars.into_iter().collect();
        let mut acc = Self::zero(vars.clone());
        for (mono, c) in raw {
            acc = acc.add(&Self::monomial(vars.clone(), &mono, c)?);
        }
        Ok(acc)
    }
}

impl<C: Coefficient> Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

/// A polynomial with numeric coefficients and fixed argument slots.
#[derive(Clone, Debug)]
pub struct CompiledPolynomial<T> {
    terms: Vec<(T, Vec<(usize, u32)>)>,
}

impl<T: Real> CompiledPolynomial<T> {
    pub fn eval(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for (c, powers) in &self.terms {
            let mut t = *c;
            for &(i, p) in powers {
                t = t * if p == 1 { x[i] } else { x[i].powi(p as i32) };
            }
            acc = acc + t;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
