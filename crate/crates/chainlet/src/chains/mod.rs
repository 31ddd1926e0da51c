//! Polypolar chains: finite sums of poles `(p; grad_U^j alpha)` and the operators acting on them.

mod ops;
mod point;
#[cfg(test)]
mod tests;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, KVector, MultiIndex, XElement, XTerm};
use crate::forms::FormError;
use crate::scalar::{ArithmeticMode, Scalar};

pub(crate) use ops::field_at;
pub use ops::{difference_chain, mapping_norm, AxisBox, MappingNormSample, ProductMode};
pub use point::Point;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} is defined only on order-0 (monopolar) chains")]
    OrderNotZero(&'static str),
    #[error("{0} needs a chain of a single grade")]
    NotHomogeneous(&'static str),
    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("pole payload must be nonzero with a single bidegree")]
    BadPayload,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// A point carrying a nonzero payload of one bidegree `(order, grade)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pole<S: Scalar> {
    pub at: Point<S>,
    pub payload: XElement<S>,
}

impl<S: Scalar> Pole<S> {
    pub fn new(at: Point<S>, payload: XElement<S>) -> Result<Self, ChainError> {
        if at.dim() != payload.n() {
            return Err(ChainError::DimensionMismatch {
                expected: payload.n(),
                found: at.dim(),
            });
        }
        if payload.pure_bidegree().is_none() {
            return Err(ChainError::BadPayload);
        }
        Ok(Pole { at, payload })
    }

    /// `(order, grade)`.
    pub fn bidegree(&self) -> (usize, usize) {
        self.payload.pure_bidegree().expect("pole invariant")
    }
}

/// Finite chain `sum_i (p_i; X_i)`, canonical: poles sorted by `(point, bidegree)`, no two
/// sharing a key, no zero payloads. Float chains merge points closer than `1e-12`.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain<S: Scalar> {
    n: usize,
    poles: Vec<Pole<S>>,
}

impl<S: Scalar> Chain<S> {
    pub fn zero(n: usize) -> Self {
        Chain {
            n,
            poles: Vec::new(),
        }
    }

    /// Builds a canonical chain; mixed payloads are split by bidegree.
    pub fn from_parts(
        n: usize,
        parts: impl IntoIterator<Item = (Point<S>, XElement<S>)>,
    ) -> Result<Self, ChainError> {
        let mut flat = Vec::new();
        for (p, x) in parts {
            if p.dim() != n {
                return Err(ChainError::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            if x.n() != n {
                return Err(ChainError::DimensionMismatch {
                    expected: n,
                    found: x.n(),
                });
            }
            flat.push((p, x));
        }
        Ok(Self::canonical(n, flat))
    }

    /// Same as [`Chain::from_parts`] for callers that already checked dimensions.
    pub(crate) fn canonical(n: usize, parts: Vec<(Point<S>, XElement<S>)>) -> Self {
        // one entry per (point, term); merging happens after sorting
        let mut entries: Vec<(Point<S>, XTerm<S>)> = Vec::new();
        for (p, x) in parts {
            for t in x.into_terms() {
                entries.push((p.clone(), t));
            }
        }
        if S::MODE == ArithmeticMode::Float && entries.len() > 1 {
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            let mut rep = entries[0].0.clone();
            for e in entries.iter_mut().skip(1) {
                if e.0.close_to(&rep) {
                    e.0 = rep.clone();
                } else {
                    rep = e.0.clone();
                }
            }
        }
        entries.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then_with(|| a.1.bidegree().cmp(&b.1.bidegree()))
        });
        let mut poles: Vec<Pole<S>> = Vec::new();
        let mut i = 0;
        while i < entries.len() {
            let mut j = i + 1;
            while j < entries.len()
                && entries[j].0 == entries[i].0
                && entries[j].1.bidegree() == entries[i].1.bidegree()
            {
                j += 1;
            }
            let terms: Vec<XTerm<S>> = entries[i..j].iter().map(|e| e.1.clone()).collect();
            let payload = XElement::from_terms(n, terms);
            if !payload.is_zero() {
                poles.push(Pole {
                    at: entries[i].0.clone(),
                    payload,
                });
            }
            i = j;
        }
        Chain { n, poles }
    }

    pub fn single(at: Point<S>, payload: XElement<S>) -> Result<Self, ChainError> {
        let n = at.dim();
        Self::from_parts(n, [(at, payload)])
    }

    /// Order-0 pole `(p; a)`.
    pub fn monopole(at: Point<S>, a: &KVector<S>) -> Result<Self, ChainError> {
        Self::single(at, XElement::from_kvector(a))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poles(&self) -> &[Pole<S>] {
        &self.poles
    }

    pub fn into_poles(self) -> Vec<Pole<S>> {
        self.poles
    }

    pub fn len(&self) -> usize {
        self.poles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.poles.is_empty()
    }

    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.poles.iter().map(|p| p.bidegree()).collect()
    }

    /// The common grade, if every pole has the same one (zero chains have none).
    pub fn grade(&self) -> Option<usize> {
        let gs: BTreeSet<usize> = self.poles.iter().map(|p| p.bidegree().1).collect();
        (gs.len() == 1).then(|| *gs.iter().next().unwrap())
    }

    /// The common order, if unique.
    pub fn order(&self) -> Option<usize> {
        let os: BTreeSet<usize> = self.poles.iter().map(|p| p.bidegree().0).collect();
        (os.len() == 1).then(|| *os.iter().next().unwrap())
    }

    pub fn max_order(&self) -> usize {
        self.poles.iter().map(|p| p.bidegree().0).max().unwrap_or(0)
    }

    pub fn is_monopolar(&self) -> bool {
        self.max_order() == 0
    }

    /// Mass: sum of the payload norms.
    pub fn mass(&self) -> S {
        self.poles
            .iter()
            .fold(S::zero(), |acc, p| acc + p.payload.norm())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ChainError> {
        self.check_dim(other.n)?;
        let parts = self
            .poles
            .iter()
            .chain(&other.poles)
            .map(|p| (p.at.clone(), p.payload.clone()))
            .collect();
        Ok(Self::canonical(self.n, parts))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ChainError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Chain {
            n: self.n,
            poles: self
                .poles
                .iter()
                .map(|p| Pole {
                    at: p.at.clone(),
                    payload: p.payload.neg(),
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Chain {
            n: self.n,
            poles: self
                .poles
                .iter()
                .map(|p| Pole {
                    at: p.at.clone(),
                    payload: p.payload.scale(c),
                })
                .collect(),
        }
    }

    /// Sum of a list of chains in the same dimension.
    pub fn sum<'a>(
        n: usize,
        chains: impl IntoIterator<Item = &'a Chain<S>>,
    ) -> Result<Self, ChainError> {
        let mut parts = Vec::new();
        for c in chains {
            if c.n != n {
                return Err(ChainError::DimensionMismatch {
                    expected: n,
                    found: c.n,
                });
            }
            parts.extend(c.poles.iter().map(|p| (p.at.clone(), p.payload.clone())));
        }
        Ok(Self::canonical(n, parts))
    }

    /// Exact equality for rationals; every residual coefficient below the float tolerance otherwise.
    pub fn close_to(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => d.poles.iter().all(|p| {
                p.payload
                    .terms()
                    .iter()
                    .all(|t| t.coeff.close_to(&S::zero()))
            }),
            Err(_) => false,
        }
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Chain<T> {
        let parts = self
            .poles
            .iter()
            .map(|p| (p.at.map(&f), p.payload.map_scalars(&f)))
            .collect();
        Chain::canonical(self.n, parts)
    }

    pub fn to_f64(&self) -> Chain<f64> {
        self.map_scalars(|c| c.to_f64())
    }

    /// Order-0 view of the support points and their k-vectors, for monopolar chains.
    pub fn monopoles(&self) -> Result<Vec<(Point<S>, KVector<S>)>, ChainError> {
        self.require_order_zero("monopoles")?;
        Ok(self
            .poles
            .iter()
            .map(|p| (p.at.clone(), p.payload.lambda_of_order(0, p.bidegree().1)))
            .collect())
    }

    fn check_dim(&self, m: usize) -> Result<(), ChainError> {
        if m != self.n {
            return Err(ChainError::DimensionMismatch {
                expected: self.n,
                found: m,
            });
        }
        Ok(())
    }

    fn require_order_zero(&self, op: &'static str) -> Result<(), ChainError> {
        if self.is_monopolar() {
            Ok(())
        } else {
            Err(ChainError::OrderNotZero(op))
        }
    }

    /// Applies `f` to each pole payload and re-canonicalizes.
    pub(crate) fn map_payloads(
        &self,
        n_out: usize,
        mut f: impl FnMut(&Pole<S>) -> Result<XElement<S>, ChainError>,
    ) -> Result<Self, ChainError> {
        let mut parts = Vec::with_capacity(self.poles.len());
        for p in &self.poles {
            parts.push((p.at.clone(), f(p)?));
        }
        Ok(Self::canonical(n_out, parts))
    }
}

impl<S: Scalar> fmt::Display for Chain<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, p) in self.poles.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}; {})", p.at, p.payload)?;
        }
        Ok(())
    }
}

/// Basis multi-indices of grade `k` in dimension `n` (convenience re-export for callers).
pub fn basis_of_grade(n: usize, k: usize) -> Vec<MultiIndex> {
    MultiIndex::all_of_grade(n, k)
}
