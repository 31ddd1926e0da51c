//! Tensor Gauss-Legendre quadrature on unit cubes: the independent oracle for integrals of
//! user-supplied forms, evaluated on coefficient functions only.

use std::fmt;
use std::num::NonZeroUsize;
use std::str::FromStr;

use chainlet::algebra::MultiIndex;
use chainlet::forms::Form;
use gauss_quad::GaussLegendre;

use crate::theorems::CellTheorem;
use crate::HarnessError;

/// Nodes per panel and panels per axis.
const NODES: usize = 12;
const PANELS: usize = 4;

/// `int_[0,1]^k f`, composite Gauss-Legendre with `PANELS^k` panels of `NODES^k` nodes.
pub fn unit_cube_integral(k: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
    let rule = GaussLegendre::new(NonZeroUsize::new(NODES).expect("positive"));
    let h = 1.0 / PANELS as f64;
    let mut axis = Vec::with_capacity(NODES * PANELS);
    for p in 0..PANELS {
        let a = p as f64 * h;
        for (x, w) in rule.iter() {
            axis.push((a + (x + 1.0) * h / 2.0, w * h / 2.0));
        }
    }
    let m = axis.len();
    let total = m.pow(k as u32);
    let mut x = vec![0.0; k];
    let mut acc = 0.0;
    for flat in 0..total {
        let mut rest = flat;
        let mut w = 1.0;
        for xi in x.iter_mut() {
            let (node, weight) = axis[rest % m];
            rest /= m;
            *xi = node;
            w *= weight;
        }
        acc += w * f(&x);
    }
    acc
}

/// Unit cells accepted by `verify stokes --domain`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Interval,
    UnitSquare,
    UnitCube,
    /// The unit square in the `x1 x2` plane of `R^3`.
    SquareInR3,
}

impl Domain {
    pub const NAMES: [&'static str; 4] = ["interval", "unit-square", "unit-cube", "square-in-r3"];

    /// `(n, k)`: ambient dimension and cell dimension.
    pub fn dims(self) -> (usize, usize) {
        match self {
            Domain::Interval => (1, 1),
            Domain::UnitSquare => (2, 2),
            Domain::UnitCube => (3, 3),
            Domain::SquareInR3 => (3, 2),
        }
    }
}

impl FromStr for Domain {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "interval" => Ok(Domain::Interval),
            "unit-square" => Ok(Domain::UnitSquare),
            "unit-cube" => Ok(Domain::UnitCube),
            "square-in-r3" => Ok(Domain::SquareInR3),
            _ => Err(HarnessError::Config(format!(
                "unknown domain '{s}' (expected one of {})",
                Domain::NAMES.join(", ")
            ))),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [
            Domain::Interval,
            Domain::UnitSquare,
            Domain::UnitCube,
            Domain::SquareInR3,
        ]
        .iter()
        .position(|d| d == self)
        .expect("listed");
        f.write_str(Domain::NAMES[i])
    }
}

/// `int_cell dw` by quadrature of the top coefficient of `dw` over the cell.
pub fn stokes_reference(w: &Form, domain: Domain) -> Result<f64, HarnessError> {
    let (n, k) = domain.dims();
    let top = w.exterior_d()?.coeff(MultiIndex::full(k));
    Ok(unit_cube_integral(k, |t| {
        let mut x = t.to_vec();
        x.resize(n, 0.0);
        top.eval_f64(&x)
    }))
}

/// Stokes experiment for a user form on a unit cell, classical value from quadrature.
pub fn custom_stokes(literal: &str, domain: Domain) -> Result<CellTheorem, HarnessError> {
    let (n, k) = domain.dims();
    let w = Form::parse(literal, Some(n))?;
    if w.grade() + 1 != k {
        return Err(HarnessError::Config(format!(
            "form '{literal}' has degree {}; the {domain} domain needs degree {}",
            w.grade(),
            k - 1
        )));
    }
    let classical = stokes_reference(&w, domain)?;
    CellTheorem::stokes(
        "custom_stokes",
        &format!("int d({literal}) over the {domain}"),
        n,
        k,
        literal,
        classical,
    )
}
