//! Bracketing the natural norms `|P|^r`: upper bounds from explicit decompositions into
//! difference chains, lower bounds from trig test forms, and an enumeration oracle.

mod brute;
mod columns;
mod dual;
mod simplex;
mod transport;

use std::fmt;

use thiserror::Error;

use crate::algebra::KVector;
use crate::chains::{difference_chain, Chain, ChainError, Point};
use crate::forms::{Form, FormError};
use crate::scalar::Scalar;

pub use brute::{brute_force_norm, BRUTE_FORCE_MAX_POLES};
pub use dual::{lower_bound, DualFamilySpec, LowerBound};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("norm brackets are computed for order-0 chains only")]
    NotMonopolar,
    #[error("instance too large for enumeration: {poles} support points (max {max})")]
    TooLarge { poles: usize, max: usize },
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// One summand `coeff * Delta_U^j (base; alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompPart<S: Scalar> {
    pub base: Point<S>,
    pub steps: Vec<Vec<S>>,
    pub alpha: KVector<S>,
    pub coeff: S,
}

impl<S: Scalar> DecompPart<S> {
    pub fn order(&self) -> usize {
        self.steps.len()
    }

    /// `|coeff| |u_1| ... |u_j| M(alpha)`.
    pub fn cost(&self) -> f64 {
        let len: f64 = self
            .steps
            .iter()
            .map(|u| u.iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt())
            .product();
        self.coeff.abs().to_f64() * len * self.alpha.mass().to_f64()
    }

    pub fn to_chain(&self) -> Result<Chain<S>, ChainError> {
        Ok(difference_chain(&self.steps, &self.base, &self.alpha)?.scale(&self.coeff))
    }
}

/// Explicit decomposition `P = sum_j D^j` into difference chains; its cost bounds `|P|^r` from above.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<S: Scalar> {
    pub n: usize,
    pub r: usize,
    pub parts: Vec<DecompPart<S>>,
}

impl<S: Scalar> Decomposition<S> {
    pub fn cost(&self) -> f64 {
        // an empty f64 sum is -0.0
        self.parts.iter().map(|p| p.cost()).sum::<f64>() + 0.0
    }

    pub fn to_chain(&self) -> Result<Chain<S>, ChainError> {
        let chains = self
            .parts
            .iter()
            .map(|p| p.to_chain())
            .collect::<Result<Vec<_>, _>>()?;
        Chain::sum(self.n, &chains)
    }

    /// Parts sum back to `p` (exactly for rationals).
    pub fn verify(&self, p: &Chain<S>) -> bool {
        match self.to_chain() {
            Ok(c) => c.close_to(p),
            Err(_) => false,
        }
    }

    pub fn max_order(&self) -> usize {
        self.parts.iter().map(|p| p.order()).max().unwrap_or(0)
    }
}

impl<S: Scalar> fmt::Display for Decomposition<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "decomposition r={} parts={} cost={:.12}",
            self.r,
            self.parts.len(),
            self.cost()
        )?;
        for p in &self.parts {
            let steps: Vec<String> = p
                .steps
                .iter()
                .map(|u| {
                    format!(
                        "[{}]",
                        u.iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    )
                })
                .collect();
            writeln!(
                f,
                "  {} * Delta^{}[{}] ({}; {})",
                p.coeff,
                p.order(),
                steps.join(" "),
                p.base,
                p.alpha
            )?;
        }
        Ok(())
    }
}

/// Upper bound for `|P|^r`:
/// r = 0 is the mass decomposition; r = 1 solves a min-cost transport per basis direction with
/// cost `min(|p - q|, 2)`; r >= 2 solves the exact l1 program over order-0, order-1 and
/// parallelogram order-2 columns on the support (norms decrease in r, so r > 2 reuses r = 2).
pub fn upper_bound<S: Scalar>(p: &Chain<S>, r: usize) -> Result<Decomposition<S>, NormError> {
    if !p.is_monopolar() {
        return Err(NormError::NotMonopolar);
    }
    let parts = match r {
        0 => mass_parts(p),
        1 => transport::transport_parts(p),
        _ => {
            let cols = columns::ColumnSet::build(p, 2);
            simplex::lp_parts(p, &cols)?
        }
    };
    Ok(Decomposition { n: p.n(), r, parts })
}

/// Upper bound from the l1 program with columns up to order `min(r, 2)`; the r = 1 case is an
/// independent route to the transport value.
pub fn upper_bound_lp<S: Scalar>(p: &Chain<S>, r: usize) -> Result<Decomposition<S>, NormError> {
    if !p.is_monopolar() {
        return Err(NormError::NotMonopolar);
    }
    let cols = columns::ColumnSet::build(p, r.min(2));
    Ok(Decomposition {
        n: p.n(),
        r,
        parts: simplex::lp_parts(p, &cols)?,
    })
}

fn mass_parts<S: Scalar>(p: &Chain<S>) -> Vec<DecompPart<S>> {
    let mut parts = Vec::new();
    for pole in p.poles() {
        for t in pole.payload.terms() {
            parts.push(DecompPart {
                base: pole.at.clone(),
                steps: vec![],
                alpha: KVector::basis(p.n(), t.idx),
                coeff: t.coeff.clone(),
            });
        }
    }
    parts
}

/// `lower <= |P|^r <= upper` with witnesses for both sides.
#[derive(Clone, Debug)]
pub struct NormBracket<S: Scalar> {
    pub r: usize,
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Form,
    pub upper_witness: Decomposition<S>,
}

impl<S: Scalar> NormBracket<S> {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

pub fn bracket<S: Scalar>(
    p: &Chain<S>,
    r: usize,
    family: &DualFamilySpec,
) -> Result<NormBracket<S>, NormError> {
    let upper_witness = upper_bound(p, r)?;
    let lb = lower_bound(p, r, family)?;
    Ok(NormBracket {
        r,
        lower: lb.value,
        upper: upper_witness.cost(),
        lower_witness: lb.form,
        upper_witness,
    })
}

/// Result of a falsification check `|lhs|^{r_lhs} <= factor |rhs|^{r_rhs}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub lhs_lower: f64,
    pub rhs_upper: f64,
    pub factor: f64,
    pub pass: bool,
}

/// Compares the certified lower bound of the left side with `factor` times the upper bound of the
/// right side. A failure refutes the inequality; a pass is only evidence.
pub fn check_bound<S: Scalar>(
    lhs: &Chain<S>,
    rhs: &Chain<S>,
    factor: f64,
    r_lhs: usize,
    r_rhs: usize,
    family: &DualFamilySpec,
) -> Result<BoundCheck, NormError> {
    let lhs_lower = lower_bound(lhs, r_lhs, family)?.value;
    let rhs_upper = upper_bound(rhs, r_rhs)?.cost();
    let pass = lhs_lower <= factor * rhs_upper * (1.0 + 1e-12) + 1e-12;
    Ok(BoundCheck {
        lhs_lower,
        rhs_upper,
        factor,
        pass,
    })
}
