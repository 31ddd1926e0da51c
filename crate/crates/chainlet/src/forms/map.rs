use std::collections::BTreeMap;

use super::{parse::parse_coeff, CoeffFn, FormError};
use crate::algebra::{KVector, MultiIndex, SymMonomial, XElement, XTerm};
use crate::scalar::{Rational, Scalar};

/// Smooth map `R^dom -> R^cod` with symbolic components and an exact Jacobian.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothMap {
    dom: usize,
    comps: Vec<CoeffFn>,
    /// `jac[r][c] = d comp_r / d x_c` (0-based r, c).
    jac: Vec<Vec<CoeffFn>>,
}

impl SmoothMap {
    pub fn new(dom: usize, comps: Vec<CoeffFn>) -> Result<Self, FormError> {
        if let Some(v) = comps.iter().map(|f| f.max_var()).max() {
            if v > dom {
                return Err(FormError::DimensionMismatch {
                    expected: dom,
                    found: v,
                });
            }
        }
        let jac = comps
            .iter()
            .map(|f| (1..=dom).map(|c| f.derivative(c)).collect())
            .collect();
        Ok(SmoothMap { dom, comps, jac })
    }

    /// Comma-separated component list such as `"x1^2, x2"`.
    pub fn parse(s: &str, dom: usize) -> Result<Self, FormError> {
        let comps = s
            .split(',')
            .map(parse_coeff)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(dom, comps)
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, (1..=n).map(CoeffFn::coord).collect()).expect("identity map")
    }

    /// `x -> A x + b` with `A` given row by row.
    pub fn affine(a: &[Vec<Rational>], b: &[Rational]) -> Result<Self, FormError> {
        let dom = a.first().map_or(0, |r| r.len());
        let comps = a
            .iter()
            .zip(b)
            .map(|(row, bi)| {
                row.iter()
                    .enumerate()
                    .fold(CoeffFn::rational(bi.clone()), |acc, (j, aij)| {
                        acc.add(&CoeffFn::coord(j + 1).scale(&super::Const::new(aij.clone())))
                    })
            })
            .collect();
        Self::new(dom, comps)
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[CoeffFn] {
        &self.comps
    }

    /// `d comp_r / d x_c` with 1-based `r`, `c`.
    pub fn jacobian_entry(&self, r: usize, c: usize) -> &CoeffFn {
        &self.jac[r - 1][c - 1]
    }

    /// `self o inner`.
    pub fn compose(&self, inner: &SmoothMap) -> Result<SmoothMap, FormError> {
        if inner.cod() != self.dom {
            return Err(FormError::DimensionMismatch {
                expected: self.dom,
                found: inner.cod(),
            });
        }
        let comps = self
            .comps
            .iter()
            .map(|f| f.substitute(&inner.comps))
            .collect::<Result<Vec<_>, _>>()?;
        SmoothMap::new(inner.dom, comps)
    }

    pub fn apply<S: Scalar>(&self, x: &[S]) -> Result<Vec<S>, FormError> {
        self.check_point(x)?;
        self.comps.iter().map(|f| f.eval(x)).collect()
    }

    pub fn jacobian<S: Scalar>(&self, x: &[S]) -> Result<Vec<Vec<S>>, FormError> {
        self.check_point(x)?;
        self.jac
            .iter()
            .map(|row| row.iter().map(|f| f.eval(x)).collect())
            .collect()
    }

    fn check_point<S>(&self, x: &[S]) -> Result<(), FormError> {
        if x.len() != self.dom {
            return Err(FormError::DimensionMismatch {
                expected: self.dom,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Image of a k-vector under the Jacobian `jac` (columns are images of basis vectors).
    pub fn push_kvector<S: Scalar>(jac: &[Vec<S>], a: &KVector<S>) -> KVector<S> {
        let cod = jac.len();
        let cols: Vec<KVector<S>> = (0..a.n())
            .map(|c| KVector::vector(&jac.iter().map(|row| row[c].clone()).collect::<Vec<_>>()))
            .collect();
        let mut out = KVector::zero(cod, a.grade());
        for (idx, coeff) in a.terms() {
            let mut w = KVector::scalar(cod, coeff.clone());
            for i in idx.iter() {
                w = w.wedge(&cols[i - 1]).expect("same dimension");
            }
            out = out.add(&w).expect("same grade");
        }
        out
    }

    /// Pushforward of an X(V) payload at the point with Jacobian `jac`:
    /// `grad_U alpha -> grad_{J U} (J alpha)`.
    pub fn push_xelement<S: Scalar>(jac: &[Vec<S>], a: &XElement<S>) -> XElement<S> {
        let cod = jac.len();
        let col = |c: usize| -> Vec<S> { jac.iter().map(|row| row[c - 1].clone()).collect() };
        let mut out = Vec::new();
        for t in a.terms() {
            let lam =
                Self::push_kvector(jac, &KVector::basis_scaled(a.n(), t.idx, t.coeff.clone()));
            // symmetric part: product of the image directions, expanded on basis monomials
            let mut sym: BTreeMap<SymMonomial, S> =
                BTreeMap::from([(SymMonomial::unit(), S::one())]);
            for i in t.mono.factors() {
                let v = col(i);
                let mut next: BTreeMap<SymMonomial, S> = BTreeMap::new();
                for (m, c) in &sym {
                    for (r, vr) in v.iter().enumerate() {
                        if vr.is_zero() {
                            continue;
                        }
                        let e = next.entry(m.times_basis(r + 1)).or_insert_with(S::zero);
                        *e = e.clone() + c.clone() * vr.clone();
                    }
                }
                sym = next;
            }
            for (m, c) in &sym {
                for (idx, l) in lam.terms() {
                    out.push(XTerm {
                        mono: m.clone(),
                        idx,
                        coeff: c.clone() * l.clone(),
                    });
                }
            }
        }
        XElement::from_terms(cod, out)
    }

    /// Principal right singular direction of the Jacobian (power iteration on `J^T J`).
    pub fn principal_direction(jac: &[Vec<f64>]) -> Option<Vec<f64>> {
        let dom = jac.first()?.len();
        let mut v = vec![1.0 / (dom as f64).sqrt(); dom];
        for (i, x) in v.iter_mut().enumerate() {
            *x += 1e-3 * (i as f64 + 1.0);
        }
        for _ in 0..200 {
            let jv: Vec<f64> = jac
                .iter()
                .map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum())
                .collect();
            let mut w = vec![0.0; dom];
            for (r, row) in jac.iter().enumerate() {
                for c in 0..dom {
                    w[c] += row[c] * jv[r];
                }
            }
            let norm = super::form::norm2(&w);
            if norm == 0.0 {
                return None;
            }
            v = w.into_iter().map(|x| x / norm).collect();
        }
        Some(v)
    }

    /// Basis multi-indices for `k`-vectors in the domain.
    pub fn domain_basis(&self, k: usize) -> Vec<MultiIndex> {
        MultiIndex::all_of_grade(self.dom, k)
    }
}
