use std::cmp::Ordering;
use std::fmt;

use crate::scalar::{Scalar, FLOAT_TOL};

/// Support point in `R^n`, totally ordered lexicographically.
#[derive(Clone, Debug)]
pub struct Point<S>(Vec<S>);

impl<S: Scalar> Point<S> {
    pub fn new(coords: Vec<S>) -> Self {
        // adding zero turns a float -0.0 into 0.0 so equality and ordering agree
        Point(coords.into_iter().map(|c| c + S::zero()).collect())
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![S::zero(); n])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn translate(&self, u: &[S]) -> Self {
        Self::new(
            self.0
                .iter()
                .zip(u)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.0.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// `self - other` as a vector.
    pub fn minus(&self, other: &Self) -> Vec<S> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.clone() - b.clone())
            .collect()
    }

    pub fn distance_f64(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = (a.clone() - b.clone()).to_f64();
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Coordinatewise closeness at the float merge tolerance (exact for rationals).
    pub fn close_to(&self, other: &Self) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| {
                if S::MODE == crate::scalar::ArithmeticMode::Float {
                    (a.clone() - b.clone()).abs().to_f64() <= FLOAT_TOL
                } else {
                    a == b
                }
            })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Point<T> {
        Point::new(self.0.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.to_f64()).collect()
    }
}

impl<S: Scalar> PartialEq for Point<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Point<S> {}

impl<S: Scalar> PartialOrd for Point<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Point<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl<S: Scalar> fmt::Display for Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
