//! Grid sampling of fields and forms, and binning of chains onto a grid.

use std::collections::BTreeMap;

use crate::algebra::{KVector, XElement};
use crate::chains::{field_at, Chain, Point};
use crate::forms::Form;
use crate::scalar::Scalar;

use super::cells::CubeCell;
use super::GeometryError;

/// Axis box `[lo, hi]` split into `2^level` cells per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid<S> {
    pub lo: Vec<S>,
    pub hi: Vec<S>,
    pub level: u32,
}

impl<S: Scalar> Grid<S> {
    pub fn new(lo: Vec<S>, hi: Vec<S>, level: u32) -> Result<Self, GeometryError> {
        if lo.len() != hi.len() {
            return Err(GeometryError::Invalid(
                "grid corners differ in dimension".into(),
            ));
        }
        if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(GeometryError::Degenerate(
                "grid box has an empty side".into(),
            ));
        }
        Ok(Grid { lo, hi, level })
    }

    pub fn unit(n: usize, level: u32) -> Self {
        Grid {
            lo: vec![S::zero(); n],
            hi: vec![S::one(); n],
            level,
        }
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    fn cells_per_axis(&self) -> i64 {
        1i64 << self.level
    }

    fn width(&self, i: usize) -> S {
        (self.hi[i].clone() - self.lo[i].clone()) / S::from_i64(self.cells_per_axis())
    }

    /// Cell containing `x`: cells are half-open except on the upper face of the box.
    fn cell_of(&self, x: &[S]) -> Option<Vec<i64>> {
        let m = self.cells_per_axis();
        let mut out = Vec::with_capacity(x.len());
        for (i, xi) in x.iter().enumerate() {
            if *xi < self.lo[i] || *xi > self.hi[i] {
                return None;
            }
            let t = (xi.clone() - self.lo[i].clone()) / self.width(i);
            let mut c = t.to_f64().floor() as i64;
            // guard the float floor against rounding at cell faces
            while c > 0 && S::from_i64(c) > t {
                c -= 1;
            }
            while c + 1 < m && S::from_i64(c + 1) <= t {
                c += 1;
            }
            out.push(c.min(m - 1));
        }
        Some(out)
    }

    fn cell_center(&self, c: &[i64]) -> Vec<S> {
        let half = S::one() / S::from_i64(2);
        c.iter()
            .enumerate()
            .map(|(i, &ci)| self.lo[i].clone() + self.width(i) * (S::from_i64(ci) + half.clone()))
            .collect()
    }

    fn as_cube(&self) -> Result<CubeCell<S>, GeometryError> {
        CubeCell::axis_box(&self.lo, &self.hi)
    }
}

/// Riesz chain of a k-form: at each grid cell midpoint `p`, the pole
/// `(p; vol * sum_I w_I(p) e_I)`. Pairing with `eta` is the midpoint rule for `int <eta, w> dV`.
pub fn form_chain<S: Scalar>(w: &Form, grid: &Grid<S>) -> Result<Chain<S>, GeometryError> {
    if w.n() != grid.n() {
        return Err(GeometryError::Invalid(format!(
            "form in dimension {} on a grid in dimension {}",
            w.n(),
            grid.n()
        )));
    }
    let cube = grid.as_cube()?;
    let mut parts = Vec::new();
    let mut err = None;
    cube.for_each_pole(grid.level, |x, vol| {
        if err.is_some() {
            return;
        }
        let v = vol.coeff(crate::algebra::MultiIndex::full(grid.n()));
        match field_at::<S>(w, x) {
            Ok(b) if !b.is_zero() => {
                parts.push((Point::new(x.to_vec()), XElement::from_kvector(&b.scale(&v))))
            }
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(Chain::from_parts(grid.n(), parts)?)
}

/// Chain of the vector field `sum phi_i e_i`, given as the 1-form `sum phi_i dx_i`.
pub fn vector_field_chain<S: Scalar>(
    field: &Form,
    grid: &Grid<S>,
) -> Result<Chain<S>, GeometryError> {
    if field.grade() != 1 {
        return Err(GeometryError::Invalid(format!(
            "vector field given as a {}-form",
            field.grade()
        )));
    }
    form_chain(field, grid)
}

/// One pole per occupied cell: `(cell center; Vec^0 of the poles in the cell)`.
pub fn bin_chain<S: Scalar>(p: &Chain<S>, grid: &Grid<S>) -> Result<Chain<S>, GeometryError> {
    if p.n() != grid.n() {
        return Err(GeometryError::Invalid(format!(
            "chain in dimension {} on a grid in dimension {}",
            p.n(),
            grid.n()
        )));
    }
    let mut bins: BTreeMap<Vec<i64>, Vec<KVector<S>>> = BTreeMap::new();
    for (at, a) in p.monopoles()? {
        let c = grid.cell_of(at.coords()).ok_or_else(|| {
            GeometryError::Invalid(format!("support point {at} outside the grid"))
        })?;
        bins.entry(c).or_default().push(a);
    }
    let mut parts = Vec::new();
    for (c, vs) in bins {
        let center = Point::new(grid.cell_center(&c));
        for v in vs {
            parts.push((center.clone(), XElement::from_kvector(&v)));
        }
    }
    Ok(Chain::from_parts(p.n(), parts)?)
}
