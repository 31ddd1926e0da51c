//! Exact discrete exterior calculus over polypolar chains.
//!
//! Chains are finite sums of poles `(p; grad_U^j alpha)`: a point carrying an
//! order-`j` symmetric factor tensored with a `k`-vector. Differential forms
//! act on chains by evaluation, and every operator on one side has an exact
//! dual on the other (boundary / exterior derivative, prederivative /
//! directional derivative, perp / Hodge star, pushforward / pullback).
//!
//! Scalars are generic: [`num_rational::BigRational`] for exact identity checks
//! and `f64` for numerical experiments.

pub mod algebra;
pub mod chains;
pub mod forms;
pub mod geometry;
pub mod io;
pub mod norms;
pub mod scalar;

pub use algebra::{KVector, MultiIndex, SymMonomial, XElement};
pub use chains::{Chain, Point, Pole};
pub use forms::{CoeffFn, Const, Form, SmoothMap};
pub use scalar::{ArithmeticMode, Rational, Scalar};

#[cfg(test)]
mod testutil;
