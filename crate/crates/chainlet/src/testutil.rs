//! Shared proptest strategies over exact rationals.

use num_bigint::BigInt;
use proptest::prelude::*;

use crate::algebra::{KVector, MultiIndex, SymMonomial, XElement, XTerm};
use crate::chains::{Chain, Point};
use crate::forms::{CoeffFn, Const, Form};
use crate::scalar::Rational;

pub type Q = Rational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn qr(a: i64, b: i64) -> Q {
    Q::new(BigInt::from(a), BigInt::from(b))
}

pub fn pt(c: &[i64]) -> Point<Q> {
    Point::new(c.iter().map(|&v| q(v)).collect())
}

pub fn e(n: usize, idx: &[usize]) -> KVector<Q> {
    KVector::basis(n, MultiIndex::new(idx).unwrap())
}

/// Polynomial with up to four monomials of degree <= 3 in `x_1..x_n`.
pub fn arb_poly(n: usize) -> impl Strategy<Value = CoeffFn> {
    let mono = (-3i64..=3, proptest::collection::vec(1..=n, 0..=3));
    proptest::collection::vec(mono, 1..=4).prop_map(|ms| {
        ms.into_iter().fold(CoeffFn::zero(), |acc, (c, vars)| {
            let m = vars
                .into_iter()
                .fold(CoeffFn::int(c), |f, i| f.mul(&CoeffFn::coord(i)));
            acc.add(&m)
        })
    })
}

/// Trig-affine plus polynomial coefficient (float evaluation only).
pub fn arb_trig(n: usize) -> impl Strategy<Value = CoeffFn> {
    (arb_poly(n), -3i64..=3, 1..=n, -2i64..=2, any::<bool>()).prop_map(|(p, a, i, b, s)| {
        let arg = CoeffFn::coord(i)
            .scale(&Const::int(a))
            .add(&CoeffFn::int(b));
        let t = if s {
            CoeffFn::sin(&arg)
        } else {
            CoeffFn::cos(&arg)
        };
        p.add(&t.mul(&CoeffFn::coord(1)))
    })
}

pub fn arb_form_with(
    n: usize,
    k: usize,
    coeff: impl Strategy<Value = CoeffFn>,
) -> impl Strategy<Value = Form> {
    let basis = MultiIndex::all_of_grade(n, k);
    proptest::collection::vec(proptest::option::weighted(0.7, coeff), basis.len()).prop_map(
        move |cs| {
            Form::from_terms(
                n,
                k,
                basis
                    .iter()
                    .copied()
                    .zip(cs)
                    .filter_map(|(i, c)| c.map(|c| (i, c))),
            )
            .unwrap()
        },
    )
}

pub fn arb_form(n: usize, k: usize) -> impl Strategy<Value = Form> {
    arb_form_with(n, k, arb_poly(n))
}

pub fn arb_point(n: usize) -> impl Strategy<Value = Point<Q>> {
    proptest::collection::vec(-8i64..=8, n)
        .prop_map(|c| Point::new(c.into_iter().map(|v| qr(v, 2)).collect()))
}

pub fn arb_kvector(n: usize, k: usize) -> impl Strategy<Value = KVector<Q>> {
    let basis = MultiIndex::all_of_grade(n, k);
    proptest::collection::vec(-4i64..=4, basis.len()).prop_map(move |cs| {
        KVector::from_terms(n, k, basis.iter().copied().zip(cs.into_iter().map(q))).unwrap()
    })
}

/// Payload of pure bidegree `(j, k)`.
pub fn arb_payload(n: usize, j: usize, k: usize) -> impl Strategy<Value = XElement<Q>> {
    let basis = MultiIndex::all_of_grade(n, k);
    let term = (
        proptest::collection::vec(1..=n, j),
        0..basis.len(),
        -4i64..=4,
    );
    proptest::collection::vec(term, 1..=3).prop_map(move |ts| {
        XElement::from_terms(
            n,
            ts.into_iter().map(|(m, b, c)| XTerm {
                mono: SymMonomial::new(&m).unwrap(),
                idx: basis[b],
                coeff: q(c),
            }),
        )
    })
}

/// Chain of up to `poles` poles, all of bidegree `(j, k)`.
pub fn arb_chain(n: usize, j: usize, k: usize, poles: usize) -> impl Strategy<Value = Chain<Q>> {
    proptest::collection::vec((arb_point(n), arb_payload(n, j, k)), 1..=poles)
        .prop_map(move |ps| Chain::from_parts(n, ps).unwrap())
}
