//! Kinematic symbols and numeric kinematic configurations.
//!
//! External momenta only ever enter through squared sums over subsets of
//! legs. By momentum conservation a subset and its complement give the same
//! invariant; the canonical representative is the one that does not contain
//! the highest leg label.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Colour, LegLabel};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KinematicsError {
    #[error("invariant {subset:?} is not a proper nonempty subset of legs 1..={legs}")]
    InvalidSubset { subset: Vec<LegLabel>, legs: u32 },
    #[error("conflicting values for s{canonical:?}: {first} vs {second}")]
    Conflict { canonical: Vec<LegLabel>, first: f64, second: f64 },
    #[error("mass for colour {colour} must be finite and non-negative, got {value}")]
    BadMass { colour: Colour, value: f64 },
    #[error("no value assigned to {0}")]
    Missing(KinSymbol),
    #[error("configuration has {found} legs but {expected} were expected")]
    LegMismatch { expected: u32, found: u32 },
}

/// A kinematic unknown appearing in polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KinSymbol {
    Unit,
    /// `(Σ_{i ∈ I} p_i)²` for a canonical subset `I`.
    Invariant(Vec<LegLabel>),
    /// Squared mass of a colour.
    MassSq(Colour),
}

impl fmt::Display for KinSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KinSymbol::Unit => write!(f, "1"),
            KinSymbol::Invariant(set) => {
                let parts: Vec<String> = set.iter().map(|l| l.to_string()).collect();
                write!(f, "s[{}]", parts.join(","))
            }
            KinSymbol::MassSq(c) => write!(f, "msq[{c}]"),
        }
    }
}

/// Canonical subset for the invariant of `subset` among legs `1..=legs`.
/// Returns `None` when the invariant vanishes identically (empty or full set).
pub fn canonical_invariant(subset: &[LegLabel], legs: u32) -> Option<Vec<LegLabel>> {
    let mut s: Vec<LegLabel> = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.is_empty() || s.len() as u32 == legs {
        return None;
    }
    if s.last() == Some(&legs) {
        s = (1..=legs).filter(|l| !s.contains(l)).collect();
    }
    Some(s)
}

/// Dimension, masses per colour, and momentum invariants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KinematicConfig {
    pub d: Rational,
    legs: u32,
    masses: BTreeMap<Colour, f64>,
    invariants: BTreeMap<Vec<LegLabel>, f64>,
}

impl KinematicConfig {
    pub fn new(d: Rational, legs: u32) -> Self {
        KinematicConfig { d, legs, masses: BTreeMap::new(), invariants: BTreeMap::new() }
    }

    pub fn legs(&self) -> u32 {
        self.legs
    }

    pub fn masses(&self) -> &BTreeMap<Colour, f64> {
        &self.masses
    }

    pub fn invariants(&self) -> &BTreeMap<Vec<LegLabel>, f64> {
        &self.invariants
    }

    pub fn set_mass(&mut self, colour: Colour, mass: f64) -> Result<(), KinematicsError> {
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(KinematicsError::BadMass { colour, value: mass });
        }
        self.masses.insert(colour, mass);
        Ok(())
    }

    pub fn with_mass(mut self, colour: Colour, mass: f64) -> Result<Self, KinematicsError> {
        self.set_mass(colour, mass)?;
        Ok(self)
    }

    /// Assigns `(Σ_{i ∈ subset} p_i)²`. Supplying a subset and its complement
    /// is allowed as long as the values agree.
    pub fn set_invariant(&mut self, subset: &[LegLabel], value: f64) -> Result<(), KinematicsError> {
        let invalid = || KinematicsError::InvalidSubset { subset: subset.to_vec(), legs: self.legs };
        if subset.iter().any(|&l| l == 0 || l > self.legs) {
            return Err(invalid());
        }
        let canonical = canonical_invariant(subset, self.legs).ok_or_else(invalid)?;
        match self.invariants.get(&canonical) {
            Some(&old) if old != value => {
                Err(KinematicsError::Conflict { canonical, first: old, second: value })
            }
            _ => {
                self.invariants.insert(canonical, value);
                Ok(())
            }
        }
    }

    pub fn with_invariant(mut self, subset: &[LegLabel], value: f64) -> Result<Self, KinematicsError> {
        self.set_invariant(subset, value)?;
        Ok(self)
    }

    /// Numeric value of a symbol; masses enter squared.
    pub fn value(&self, sym: &KinSymbol) -> Result<f64, KinematicsError> {
        match sym {
            KinSymbol::Unit => Some(1.0),
            KinSymbol::Invariant(set) => self.invariants.get(set).copied(),
            KinSymbol::MassSq(c) => self.masses.get(c).map(|m| m * m),
        }
        .ok_or_else(|| KinematicsError::Missing(sym.clone()))
    }

    /// Genericity: every supplied invariant is strictly positive.
    pub fn is_generic(&self) -> bool {
        self.invariants.values().all(|&s| s > 0.0)
    }

    /// Every supplied mass is strictly positive (and at least one is supplied).
    pub fn masses_positive(&self) -> bool {
        !self.masses.is_empty() && self.masses.values().all(|&m| m > 0.0)
    }

    pub fn with_dimension(&self, d: Rational) -> Self {
        KinematicConfig { d, ..self.clone() }
    }
}
