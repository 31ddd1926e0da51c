use std::collections::BTreeSet;
use std::fmt;

use super::{AlgebraError, KVector, MultiIndex, SymMonomial};
use crate::scalar::Scalar;

/// One basis term `coeff * grad_mono (x) e_idx`.
#[derive(Clone, PartialEq, Debug)]
pub struct XTerm<S> {
    pub mono: SymMonomial,
    pub idx: MultiIndex,
    pub coeff: S,
}

impl<S> XTerm<S> {
    pub fn bidegree(&self) -> (usize, usize) {
        (self.mono.order(), self.idx.len())
    }
}

/// Element of the bigraded algebra `X(V) = sum_{j,k} S^j(V) (x) Lambda_k(V)`.
///
/// Terms are kept sorted by `(monomial, multi-index)` with zero coefficients removed.
#[derive(Clone, PartialEq, Debug)]
pub struct XElement<S> {
    n: usize,
    terms: Vec<XTerm<S>>,
}

impl<S: Scalar> XElement<S> {
    pub fn zero(n: usize) -> Self {
        XElement {
            n,
            terms: Vec::new(),
        }
    }

    /// `1 (x) 1`.
    pub fn unit(n: usize) -> Self {
        Self::term(n, SymMonomial::unit(), MultiIndex::EMPTY, S::one())
    }

    pub fn term(n: usize, mono: SymMonomial, idx: MultiIndex, coeff: S) -> Self {
        assert!(
            idx.max_index() <= n && mono.max_index() <= n,
            "index exceeds dimension {n}"
        );
        let mut terms = Vec::new();
        if !coeff.is_zero() {
            terms.push(XTerm { mono, idx, coeff });
        }
        XElement { n, terms }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = XTerm<S>>) -> Self {
        let mut v: Vec<XTerm<S>> = terms.into_iter().collect();
        canonicalize(&mut v);
        XElement { n, terms: v }
    }

    /// Order-0 embedding `1 (x) alpha`.
    pub fn from_kvector(a: &KVector<S>) -> Self {
        Self::from_terms(
            a.n(),
            a.terms().map(|(idx, c)| XTerm {
                mono: SymMonomial::unit(),
                idx,
                coeff: c.clone(),
            }),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[XTerm<S>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<XTerm<S>> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms.iter().map(XTerm::bidegree).collect()
    }

    /// The single bidegree if the element is pure and nonzero.
    pub fn pure_bidegree(&self) -> Option<(usize, usize)> {
        let first = self.terms.first()?.bidegree();
        self.terms
            .iter()
            .all(|t| t.bidegree() == first)
            .then_some(first)
    }

    /// The `S^j (x) Lambda_k` part.
    pub fn component(&self, j: usize, k: usize) -> Self {
        XElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|t| t.bidegree() == (j, k))
                .cloned()
                .collect(),
        }
    }

    /// Sum over `S^j` of the Lambda parts of order `j`, dropping the symmetric factor.
    pub fn lambda_of_order(&self, j: usize, k: usize) -> KVector<S> {
        let mut out = KVector::zero(self.n, k);
        for t in self.terms.iter().filter(|t| t.bidegree() == (j, k)) {
            out.add_term(t.idx, t.coeff.clone());
        }
        out
    }

    fn check_dim(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(AlgebraError::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_dim(other)?;
        Ok(Self::from_terms(
            self.n,
            self.terms.iter().chain(other.terms.iter()).cloned(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        XElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| XTerm {
                    mono: t.mono.clone(),
                    idx: t.idx,
                    coeff: t.coeff.clone() * c.clone(),
                })
                .collect(),
        }
    }

    fn product(&self, other: &Self, normalized: bool) -> Result<Self, AlgebraError> {
        self.check_dim(other)?;
        let two = S::from_i64(2);
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let Some(sign) = a.idx.wedge_sign(b.idx) else {
                    continue;
                };
                let mut c = a.coeff.clone() * b.coeff.clone();
                if sign < 0 {
                    c = -c;
                }
                let (ja, jb) = (a.mono.order(), b.mono.order());
                if normalized && ja >= 1 && jb >= 1 {
                    c = c / two.pow_u32((ja + jb) as u32);
                }
                out.push(XTerm {
                    mono: a.mono.times(&b.mono),
                    idx: a.idx.union(b.idx),
                    coeff: c,
                });
            }
        }
        Ok(Self::from_terms(self.n, out))
    }

    /// Product of X(V) with the factor `1/2^(j1+j2)` when both orders are positive;
    /// plain scalar multiplication of the symmetric parts otherwise.
    pub fn x_product(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.product(other, true)
    }

    /// Graded-commutative tensor product of `S(V)` and `Lambda(V)` (no normalization).
    /// Associative, and the boundary is a derivation for it.
    pub fn koszul_product(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.product(other, false)
    }

    /// Koszul boundary `S^j (x) Lambda_k -> S^{j+1} (x) Lambda_{k-1}`:
    /// `grad_m (x) e_I  ->  sum_p (-1)^p grad_{m e_{I_p}} (x) e_{I \ I_p}`.
    pub fn boundary(&self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * 3);
        for t in &self.terms {
            for (pos, i) in t.idx.iter().enumerate() {
                let c = if pos % 2 == 0 {
                    t.coeff.clone()
                } else {
                    -t.coeff.clone()
                };
                out.push(XTerm {
                    mono: t.mono.times_basis(i),
                    idx: t.idx.without(i),
                    coeff: c,
                });
            }
        }
        Self::from_terms(self.n, out)
    }

    /// Prederivative in direction `u` (components on `e_1..e_n`); raises the order by one.
    pub fn prederivative(&self, u: &[S]) -> Result<Self, AlgebraError> {
        if u.len() != self.n {
            return Err(AlgebraError::DimensionMismatch {
                left: self.n,
                right: u.len(),
            });
        }
        let mut out = Vec::with_capacity(self.terms.len() * u.len());
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for t in &self.terms {
                out.push(XTerm {
                    mono: t.mono.times_basis(i + 1),
                    idx: t.idx,
                    coeff: t.coeff.clone() * ui.clone(),
                });
            }
        }
        Ok(Self::from_terms(self.n, out))
    }

    /// Perp of the Lambda part, symmetric factors unchanged.
    pub fn perp(&self) -> Self {
        let out = self.terms.iter().map(|t| {
            let (j, s) = super::kvector::perp_basis(t.idx, self.n);
            XTerm {
                mono: t.mono.clone(),
                idx: j,
                coeff: if s > 0 {
                    t.coeff.clone()
                } else {
                    -t.coeff.clone()
                },
            }
        });
        Self::from_terms(self.n, out)
    }

    /// Left exterior action `beta ^ (.)` on the Lambda part.
    pub fn wedge_left(&self, beta: &KVector<S>) -> Result<Self, AlgebraError> {
        XElement::from_kvector(beta).koszul_product(self)
    }

    /// Sum of absolute basis coefficients (basis monomials have unit norm).
    pub fn norm(&self) -> S {
        self.terms
            .iter()
            .fold(S::zero(), |acc, t| acc + t.coeff.abs())
    }

    pub fn max_order(&self) -> usize {
        self.terms.iter().map(|t| t.mono.order()).max().unwrap_or(0)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> XElement<T> {
        XElement::from_terms(
            self.n,
            self.terms.iter().map(|t| XTerm {
                mono: t.mono.clone(),
                idx: t.idx,
                coeff: f(&t.coeff),
            }),
        )
    }

    pub fn to_f64(&self) -> XElement<f64> {
        self.map_scalars(|c| c.to_f64())
    }

    /// Same element viewed in a larger (or equal) ambient dimension.
    pub fn with_dim(&self, n: usize) -> Result<Self, AlgebraError> {
        let max = self
            .terms
            .iter()
            .map(|t| t.idx.max_index().max(t.mono.max_index()))
            .max()
            .unwrap_or(0);
        if max > n {
            return Err(AlgebraError::IndexOutOfRange { index: max, n });
        }
        Ok(XElement {
            n,
            terms: self.terms.clone(),
        })
    }

    /// Approximate equality used for float checks (exact for rationals).
    pub fn close_to(&self, other: &Self) -> bool {
        match self.sub(other) {
            Ok(d) => d.terms.iter().all(|t| t.coeff.close_to(&S::zero())),
            Err(_) => false,
        }
    }
}

pub(crate) fn canonicalize<S: Scalar>(v: &mut Vec<XTerm<S>>) {
    v.sort_by(|a, b| (&a.mono, a.idx).cmp(&(&b.mono, b.idx)));
    let mut out: Vec<XTerm<S>> = Vec::with_capacity(v.len());
    for t in v.drain(..) {
        match out.last_mut() {
            Some(last) if last.mono == t.mono && last.idx == t.idx => {
                last.coeff = last.coeff.clone() + t.coeff;
            }
            _ => out.push(t),
        }
    }
    out.retain(|t| !t.coeff.is_zero());
    *v = out;
}

impl<S: Scalar> fmt::Display for XElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}*[{}](x){}", t.coeff, t.mono, t.idx))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn qq(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    fn x(n: usize, mono: &[usize], idx: &[usize], c: Q) -> XElement<Q> {
        XElement::term(
            n,
            SymMonomial::new(mono).unwrap(),
            MultiIndex::new(idx).unwrap(),
            c,
        )
    }

    /// Boundary computed by the defining recursion
    /// `d(alpha ^ v) = d(alpha) v + (-1)^k alpha d(v)`, `d(v) = grad_v(1)`, `d(grad_U a) = grad_U d(a)`.
    fn boundary_by_recursion(a: &XElement<Q>) -> XElement<Q> {
        let n = a.n();
        let mut acc = XElement::zero(n);
        for t in a.terms() {
            let mut idx: Vec<usize> = t.idx.to_vec();
            let mut lam = XElement::unit(n);
            let mut d_lam = XElement::zero(n);
            let mut k = 0usize;
            for v in idx.drain(..) {
                let ev = x(n, &[], &[v], q(1));
                let dv = x(n, &[v], &[], q(1));
                let sign = if k.is_multiple_of(2) { q(1) } else { q(-1) };
                d_lam = d_lam
                    .koszul_product(&ev)
                    .unwrap()
                    .add(&lam.koszul_product(&dv).unwrap().scale(&sign))
                    .unwrap();
                lam = lam.koszul_product(&ev).unwrap();
                k += 1;
            }
            let sym = XElement::term(n, t.mono.clone(), MultiIndex::EMPTY, t.coeff.clone());
            acc = acc.add(&sym.koszul_product(&d_lam).unwrap()).unwrap();
        }
        acc
    }

    #[test]
    fn x_product_examples() {
        let a = x(3, &[], &[1], q(1));
        let b = x(3, &[], &[2], q(1));
        assert_eq!(a.x_product(&b).unwrap(), x(3, &[], &[1, 2], q(1)));
        let a = x(3, &[1], &[2], q(1));
        let b = x(3, &[2], &[3], q(1));
        assert_eq!(a.x_product(&b).unwrap(), x(3, &[1, 2], &[2, 3], qq(1, 4)));
    }

    #[test]
    fn normalized_product_breaks_associativity() {
        let a = x(3, &[1], &[], q(1));
        let b = x(3, &[2], &[], q(1));
        let c = x(3, &[1, 3], &[], q(1));
        let left = a.x_product(&b).unwrap().x_product(&c).unwrap();
        let right = a.x_product(&b.x_product(&c).unwrap()).unwrap();
        assert_eq!(left, x(3, &[1, 1, 2, 3], &[], qq(1, 64)));
        assert_eq!(right, x(3, &[1, 1, 2, 3], &[], qq(1, 128)));
    }

    #[test]
    fn normalized_product_breaks_derivation_identity() {
        let a = x(3, &[], &[1], q(1));
        let b = x(3, &[2], &[3], q(1));
        let lhs = a.x_product(&b).unwrap().boundary();
        let rhs = a
            .boundary()
            .x_product(&b)
            .unwrap()
            .sub(&a.x_product(&b.boundary()).unwrap())
            .unwrap();
        assert_ne!(lhs, rhs);
        let lhs = a.koszul_product(&b).unwrap().boundary();
        let rhs = a
            .boundary()
            .koszul_product(&b)
            .unwrap()
            .sub(&a.koszul_product(&b.boundary()).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn prederivative_examples() {
        let a = x(3, &[], &[2], q(1));
        assert_eq!(
            a.prederivative(&[q(1), q(0), q(0)]).unwrap(),
            x(3, &[1], &[2], q(1))
        );
        let b = x(3, &[2], &[3], q(1));
        assert_eq!(
            b.prederivative(&[q(1), q(0), q(0)]).unwrap(),
            x(3, &[1, 2], &[3], q(1))
        );
        let c = x(3, &[], &[1], q(1));
        let expected = x(3, &[1], &[1], q(1)).add(&x(3, &[2], &[1], q(1))).unwrap();
        assert_eq!(c.prederivative(&[q(1), q(1), q(0)]).unwrap(), expected);
    }

    #[test]
    fn boundary_examples() {
        assert_eq!(x(3, &[], &[1], q(1)).boundary(), x(3, &[1], &[], q(1)));
        let d12 = x(3, &[], &[1, 2], q(1)).boundary();
        let expected = x(3, &[1], &[2], q(1)).sub(&x(3, &[2], &[1], q(1))).unwrap();
        assert_eq!(d12, expected);
        assert!(x(3, &[], &[1, 2, 3], q(1)).boundary().boundary().is_zero());
    }

    #[test]
    fn boundary_of_basis_k_vector_has_k_summands() {
        for n in 1..=5 {
            for k in 0..=n {
                for i in MultiIndex::all_of_grade(n, k) {
                    let b = XElement::<Q>::term(n, SymMonomial::unit(), i, q(1)).boundary();
                    assert_eq!(b.terms().len(), k);
                }
            }
        }
    }

    #[test]
    fn boundary_of_two_vectors_matches_displayed_identity() {
        for n in 2..=4 {
            for u in 1..=n {
                for v in 1..=n {
                    let eu = x(n, &[], &[u], q(1));
                    let ev = x(n, &[], &[v], q(1));
                    let lhs = eu.x_product(&ev).unwrap().boundary();
                    let rhs = eu
                        .boundary()
                        .x_product(&ev)
                        .unwrap()
                        .sub(&eu.x_product(&ev.boundary()).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(x(3, &[], &[1, 2], q(1)).norm(), q(1));
        let a = x(3, &[1], &[2], q(1)).add(&x(3, &[], &[3], q(2))).unwrap();
        assert_eq!(a.norm(), q(3));
    }

    #[test]
    fn component_extraction() {
        let a = x(3, &[1], &[2], q(1)).add(&x(3, &[], &[3], q(2))).unwrap();
        assert_eq!(a.component(1, 1), x(3, &[1], &[2], q(1)));
        assert_eq!(a.component(0, 1), x(3, &[], &[3], q(2)));
        assert!(a.component(2, 0).is_zero());
        assert_eq!(a.pure_bidegree(), None);
    }

    fn arb_xelement(n: usize) -> impl Strategy<Value = XElement<Q>> {
        let term = (
            proptest::collection::vec(1..=n, 0..=2),
            proptest::collection::btree_set(1..=n, 0..=n),
            -4i64..=4,
        );
        proptest::collection::vec(term, 0..5).prop_map(move |ts| {
            XElement::from_terms(
                n,
                ts.into_iter().map(|(m, i, c)| XTerm {
                    mono: SymMonomial::new(&m).unwrap(),
                    idx: MultiIndex::new(&i.into_iter().collect::<Vec<_>>()).unwrap(),
                    coeff: q(c),
                }),
            )
        })
    }

    fn pure(a: &XElement<Q>) -> Option<XElement<Q>> {
        let t = a.terms().first()?;
        let (j, k) = t.bidegree();
        Some(a.component(j, k))
    }

    proptest! {
        #[test]
        fn boundary_squares_to_zero(a in arb_xelement(4)) {
            prop_assert!(a.boundary().boundary().is_zero());
        }

        #[test]
        fn closed_form_boundary_matches_recursion(a in arb_xelement(4)) {
            prop_assert_eq!(a.boundary(), boundary_by_recursion(&a));
        }

        #[test]
        fn koszul_product_derivation(a in arb_xelement(4), b in arb_xelement(4)) {
            if let (Some(a), Some(b)) = (pure(&a), pure(&b)) {
                let k = a.pure_bidegree().unwrap().1;
                let sign = if k % 2 == 0 { q(1) } else { q(-1) };
                let lhs = a.koszul_product(&b).unwrap().boundary();
                let rhs = a.boundary().koszul_product(&b).unwrap()
                    .add(&a.koszul_product(&b.boundary()).unwrap().scale(&sign)).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn products_are_graded_commutative(a in arb_xelement(3), b in arb_xelement(3)) {
            if let (Some(a), Some(b)) = (pure(&a), pure(&b)) {
                let (ka, kb) = (a.pure_bidegree().unwrap().1, b.pure_bidegree().unwrap().1);
                let sign = if (ka * kb) % 2 == 0 { q(1) } else { q(-1) };
                prop_assert_eq!(a.x_product(&b).unwrap(), b.x_product(&a).unwrap().scale(&sign));
                prop_assert_eq!(a.koszul_product(&b).unwrap(), b.koszul_product(&a).unwrap().scale(&sign));
            }
        }

        #[test]
        fn koszul_product_is_associative(a in arb_xelement(3), b in arb_xelement(3), c in arb_xelement(3)) {
            let left = a.koszul_product(&b).unwrap().koszul_product(&c).unwrap();
            let right = a.koszul_product(&b.koszul_product(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn norm_axioms(a in arb_xelement(3), b in arb_xelement(3)) {
            prop_assert!(a.add(&b).unwrap().norm() <= a.norm() + b.norm());
            prop_assert!(a.x_product(&b).unwrap().norm() <= a.norm() * b.norm());
            prop_assert!(a.koszul_product(&b).unwrap().norm() <= a.norm() * b.norm());
            prop_assert_eq!(a.scale(&q(-3)).norm(), a.norm() * q(3));
            prop_assert_eq!(a.norm() == q(0), a.is_zero());
        }

        #[test]
        fn perp_commutes_with_prederivative(a in arb_xelement(3)) {
            let u = [q(1), q(-2), q(3)];
            prop_assert_eq!(a.prederivative(&u).unwrap().perp(), a.perp().prederivative(&u).unwrap());
        }
    }
}
