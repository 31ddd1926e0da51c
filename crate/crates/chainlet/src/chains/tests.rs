use proptest::prelude::*;

use super::*;
use crate::algebra::SymMonomial;
use crate::forms::{Form, SampleSpec, SmoothMap};
use crate::testutil::*;

fn grad(n: usize, mono: &[usize], idx: &[usize], c: i64) -> XElement<Q> {
    XElement::term(
        n,
        SymMonomial::new(mono).unwrap(),
        MultiIndex::new(idx).unwrap(),
        q(c),
    )
}

fn mono(at: &[i64], a: &KVector<Q>) -> Chain<Q> {
    Chain::monopole(pt(at), a).unwrap()
}

fn phi(s: &str, n: usize) -> Form {
    Form::parse(s, Some(n)).unwrap()
}

#[test]
fn canonical_merges_and_drops_zeros() {
    let a = mono(&[1, 0], &e(2, &[1]));
    let s = a.add(&a).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s, a.scale(&q(2)));
    assert!(a.sub(&a).unwrap().is_zero());
    // float chains merge points within tolerance
    let f = Chain::from_parts(
        1,
        [
            (
                Point::new(vec![0.5]),
                XElement::from_kvector(&KVector::e(1, 1)),
            ),
            (
                Point::new(vec![0.5 + 1e-14]),
                XElement::from_kvector(&KVector::e(1, 1)),
            ),
        ],
    )
    .unwrap();
    assert_eq!(f.len(), 1);
    assert_eq!(f.mass(), 2.0);
}

#[test]
fn translation_and_difference_chains() {
    let p = mono(&[0, 0], &e(2, &[1]));
    assert_eq!(
        p.translate(&[q(1), q(2)]).unwrap(),
        mono(&[1, 2], &e(2, &[1]))
    );
    let d = difference_chain(&[vec![q(1), q(0)]], &pt(&[0, 0]), &e(2, &[1])).unwrap();
    assert_eq!(d, mono(&[1, 0], &e(2, &[1])).sub(&p).unwrap());
    let d2 = difference_chain(
        &[vec![q(1), q(0)], vec![q(0), q(1)]],
        &pt(&[0, 0]),
        &e(2, &[2]),
    )
    .unwrap();
    assert_eq!(d2.len(), 4);
    assert!(d2.vec0(1).is_zero());
    assert!(difference_chain(&[vec![q(1)]], &pt(&[0, 0]), &e(2, &[1])).is_err());
}

#[test]
fn boundary_examples() {
    // order-0 1-vector pole: boundary is the order-1 scalar dipole
    let p = mono(&[0, 0], &e(2, &[1]));
    assert_eq!(
        p.boundary(),
        Chain::single(pt(&[0, 0]), grad(2, &[1], &[], 1)).unwrap()
    );
    let s = mono(&[0, 0], &e(2, &[1, 2]));
    let expect = Chain::single(
        pt(&[0, 0]),
        grad(2, &[1], &[2], 1)
            .add(&grad(2, &[2], &[1], -1))
            .unwrap(),
    )
    .unwrap();
    assert_eq!(s.boundary(), expect);
    assert!(s.boundary().boundary().is_zero());
    assert!(mono(&[3, 1], &KVector::scalar(2, q(5)))
        .boundary()
        .is_zero());
}

#[test]
fn prederivative_examples() {
    let p = mono(&[0, 0], &e(2, &[2]));
    let g = p.prederivative(&[q(1), q(0)]).unwrap();
    assert_eq!(
        g,
        Chain::single(pt(&[0, 0]), grad(2, &[1], &[2], 1)).unwrap()
    );
    assert!(g.vec0(1).is_zero());
    assert_eq!(p.prederivative(&[q(2), q(0)]).unwrap(), g.scale(&q(2)));
}

#[test]
fn pushforward_examples() {
    let a = SmoothMap::affine(&[vec![q(2), q(1)], vec![q(0), q(3)]], &[q(0), q(0)]).unwrap();
    let p = mono(&[1, 1], &e(2, &[2]));
    let v = KVector::from_terms(
        2,
        1,
        [(MultiIndex::single(1), q(1)), (MultiIndex::single(2), q(3))],
    )
    .unwrap();
    assert_eq!(p.pushforward(&a).unwrap(), mono(&[3, 3], &v));
    let sq = SmoothMap::parse("x1^2, x2", 2).unwrap();
    let p = mono(&[1, 0], &e(2, &[1]));
    assert_eq!(
        p.pushforward(&sq).unwrap(),
        mono(&[1, 0], &e(2, &[1]).scale(&q(2)))
    );
    // order-1 payloads push both the direction and the k-vector
    let g = Chain::single(pt(&[1, 0]), grad(2, &[1], &[2], 1)).unwrap();
    assert_eq!(
        g.pushforward(&sq).unwrap(),
        Chain::single(pt(&[1, 0]), grad(2, &[1], &[2], 2)).unwrap()
    );
}

#[test]
fn mapping_norm_examples() {
    let spec = SampleSpec::grid(2, 1.0, 3);
    let id = mapping_norm(&SmoothMap::identity(2), 0, 1, &spec).unwrap();
    assert!((id.value - 1.0).abs() < 1e-12);
    let two = SmoothMap::parse("2*x1, 2*x2", 2).unwrap();
    assert!((mapping_norm(&two, 0, 1, &spec).unwrap().value - 2.0).abs() < 1e-12);
    let shift = SmoothMap::parse("x1 + 3, x2 - 1", 2).unwrap();
    let s = mapping_norm(&shift, 1, 1, &spec).unwrap();
    assert!((s.value - 1.0).abs() < 1e-12, "{s:?}");
    let empty = SampleSpec {
        points: vec![],
        directions: vec![],
        steps: vec![],
    };
    assert!(mapping_norm(&shift, 1, 1, &empty).is_err());
}

#[test]
fn perp_examples() {
    let p = mono(&[0, 0, 0], &e(3, &[1]));
    assert_eq!(p.perp(), mono(&[0, 0, 0], &e(3, &[2, 3])));
    assert_eq!(p.perp().perp(), p);
    // n = 2, k = 1: perp perp = -1
    let p2 = mono(&[0, 0], &e(2, &[1]));
    assert_eq!(p2.perp().perp(), p2.neg());
    let g = Chain::single(pt(&[0, 0, 0]), grad(3, &[2], &[1], 1)).unwrap();
    assert_eq!(
        g.perp(),
        Chain::single(pt(&[0, 0, 0]), grad(3, &[2], &[2, 3], 1)).unwrap()
    );
}

#[test]
fn scale_by_function_examples() {
    let p = mono(&[1, 0], &e(2, &[2]))
        .add(&mono(&[0, 3], &e(2, &[1])))
        .unwrap();
    assert_eq!(p.scale_by_function(&phi("2", 2)).unwrap(), p.scale(&q(2)));
    assert_eq!(
        p.scale_by_function(&phi("x1", 2)).unwrap(),
        mono(&[1, 0], &e(2, &[2]))
    );
    assert!(p.scale_by_function(&phi("0", 2)).unwrap().is_zero());
    assert!(p.boundary().scale_by_function(&phi("x1", 2)).is_err());
    assert!(p.scale_by_function(&phi("dx1", 2)).is_err());
}

#[test]
fn exterior_product_examples() {
    // left wedge: e2 ^ e1 = -e12
    let p = mono(&[0, 0], &e(2, &[1]));
    assert_eq!(
        p.exterior_e(&e(2, &[2])).unwrap(),
        mono(&[0, 0], &e(2, &[1, 2]).neg())
    );
    assert!(p.exterior_e(&e(2, &[1])).unwrap().is_zero());
    // field version agrees with the constant one
    let f = phi("dx2", 2);
    assert_eq!(
        p.exterior_e_field(&f).unwrap(),
        p.exterior_e(&e(2, &[2])).unwrap()
    );
    // f_* E_b P = E_{f_* b} f_* P for linear f
    let a = vec![
        vec![q(1), q(2), q(0)],
        vec![q(0), q(1), q(-1)],
        vec![q(3), q(0), q(1)],
    ];
    let f = SmoothMap::affine(&a, &[q(0), q(0), q(0)]).unwrap();
    let b = e(3, &[1]).add(&e(3, &[3])).unwrap();
    let p = mono(&[1, 2, 0], &e(3, &[2]));
    let fb = SmoothMap::push_kvector(&a, &b);
    assert_eq!(
        p.exterior_e(&b).unwrap().pushforward(&f).unwrap(),
        p.pushforward(&f).unwrap().exterior_e(&fb).unwrap()
    );
}

#[test]
fn magic_formula_examples() {
    let p = mono(&[0, 0], &e(2, &[2]));
    let x = e(2, &[1]);
    assert_eq!(
        p.magic_nabla(&x).unwrap(),
        p.prederivative(&[q(1), q(0)]).unwrap()
    );
    let p = mono(&[0, 0], &e(2, &[1]));
    assert_eq!(
        p.magic_nabla(&x).unwrap(),
        p.prederivative(&[q(1), q(0)]).unwrap()
    );
    assert!(p.magic_nabla(&KVector::zero(2, 1)).unwrap().is_zero());
    assert!(p.boundary().magic_nabla(&x).is_err());
}

#[test]
fn vec_examples() {
    let p = mono(&[0, 0], &e(2, &[1]))
        .add(&mono(&[1, 1], &e(2, &[2])))
        .unwrap();
    assert_eq!(p.vec0(1), e(2, &[1]).add(&e(2, &[2])).unwrap());
    assert!(p.boundary().vec(0).is_zero());
    assert!(p.prederivative(&[q(1), q(0)]).unwrap().vec(0).is_zero());
    assert_eq!(
        p.prederivative(&[q(1), q(0)]).unwrap().vec(1),
        grad(2, &[1], &[1], 1).add(&grad(2, &[1], &[2], 1)).unwrap()
    );
}

#[test]
fn contraction_examples() {
    let p = mono(&[1, 0], &e(2, &[2]));
    assert_eq!(p.contract(&q(1)).unwrap(), p);
    let half = Chain::monopole(Point::new(vec![qr(1, 2), q(0)]), &e(2, &[2])).unwrap();
    assert_eq!(p.contract(&qr(1, 2)).unwrap(), half);
    assert!(p.contract(&q(0)).is_err());
    assert!(p.contract(&q(-1)).is_err());
}

#[test]
fn restriction_examples() {
    let p = mono(&[0, 0], &e(2, &[1]))
        .add(&mono(&[2, 0], &e(2, &[1])))
        .unwrap();
    let unit = AxisBox::new(vec![q(-1), q(-1)], vec![q(1), q(1)], true);
    assert_eq!(p.restrict(&unit).unwrap(), mono(&[0, 0], &e(2, &[1])));
    assert_eq!(p.restrict(&AxisBox::whole(2)).unwrap(), p);
    // closure flag decides boundary points
    let edge = AxisBox::new(vec![q(0), q(-1)], vec![q(2), q(1)], false);
    assert!(p.restrict(&edge).unwrap().is_zero());
    let left = AxisBox::new(vec![q(-5), q(-5)], vec![q(1), q(5)], false);
    let right = AxisBox {
        lo: vec![Some(q(1)), Some(q(-5))],
        hi: vec![Some(q(5)), Some(q(5))],
        closed: true,
    };
    let total = p
        .measure(&left)
        .unwrap()
        .add(&p.measure(&right).unwrap())
        .unwrap();
    assert_eq!(total, p.vec(0));
}

#[test]
fn product_examples() {
    let z = pt(&[0, 0, 0]);
    let at = |a: &KVector<Q>| Chain::monopole(z.clone(), a).unwrap();
    let e12 = e(3, &[1, 2]);
    assert_eq!(
        at(&e12).product(ProductMode::Slant, &e12).unwrap(),
        at(&KVector::scalar(3, q(1)))
    );
    assert_eq!(
        at(&e(3, &[1]))
            .product(ProductMode::Cross, &e(3, &[2]))
            .unwrap(),
        at(&e(3, &[3]))
    );
    assert_eq!(
        at(&e12)
            .product(ProductMode::Intersect, &e(3, &[2, 3]))
            .unwrap(),
        at(&e(3, &[2]))
    );
    let s = e12.slant(&e(3, &[2])).unwrap();
    assert_eq!(e(3, &[2]).wedge(&s).unwrap(), e12);
    assert_eq!(
        at(&e(3, &[1]))
            .product(ProductMode::Wedge, &e(3, &[2]))
            .unwrap(),
        at(&e12)
    );
    assert!(at(&e(3, &[1]))
        .product(ProductMode::Slant, &KVector::zero(3, 1))
        .is_err());
    assert!(at(&e(3, &[1]))
        .product(ProductMode::Intersect, &e(3, &[2]))
        .is_err());
    assert_eq!("cross".parse::<ProductMode>().unwrap(), ProductMode::Cross);
    assert!("dot".parse::<ProductMode>().is_err());
}

#[test]
fn cross_and_intersect_follow_perp_on_basis_pairs() {
    for i in 1..=3 {
        for j in 1..=3 {
            let (a, b) = (e(3, &[i]), e(3, &[j]));
            assert_eq!(a.cross(&b).unwrap(), a.wedge(&b).unwrap().perp());
            let (pa, pb) = (a.perp(), b.perp());
            assert_eq!(
                pa.intersect(&pb).unwrap(),
                pa.perp().wedge(&pb.perp()).unwrap().perp()
            );
        }
    }
}

#[test]
fn monopolar_inner_examples() {
    let p = mono(&[0, 0], &e(2, &[1]));
    assert_eq!(p.monopolar_inner(&p).unwrap(), q(1));
    assert_eq!(
        p.monopolar_inner(&mono(&[1, 0], &e(2, &[1]))).unwrap(),
        q(0)
    );
    let l2 = mono(&[0, 0], &e(2, &[1]).scale(&q(3)))
        .add(&mono(&[1, 0], &e(2, &[2]).scale(&q(4))))
        .unwrap();
    assert!((l2.lp_norm(2.0).unwrap() - 5.0).abs() < 1e-12);
    assert!(p.monopolar_inner(&mono(&[0, 0], &e(2, &[1, 2]))).is_err());
    let (s, w) = p.geometric_product(&mono(&[0, 0], &e(2, &[2]))).unwrap();
    assert_eq!(s, q(0));
    assert_eq!(w, mono(&[0, 0], &e(2, &[1, 2])));
}

#[test]
fn box_laplacian_is_dual_to_codifferential_pair() {
    let p = mono(&[0, 0], &e(2, &[1]));
    assert_eq!(p.diamond(), p.perp().boundary().perp());
    assert!(p.box_laplacian().vec(0).is_zero());
}

fn dim_grade() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4).prop_flat_map(|n| (Just(n), 0..=n))
}

fn small_chain() -> impl Strategy<Value = Chain<Q>> {
    dim_grade().prop_flat_map(|(n, k)| (0usize..=2).prop_flat_map(move |j| arb_chain(n, j, k, 4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero(p in small_chain()) {
        prop_assert!(p.boundary().boundary().is_zero());
    }

    #[test]
    fn vec0_kills_boundaries_and_differences(
        (p, u) in dim_grade().prop_flat_map(|(n, k)| (arb_chain(n, 0, k, 4), arb_point(n)))
    ) {
        prop_assert!(p.boundary().vec(0).is_zero());
        let d = p.translate(u.coords()).unwrap().sub(&p).unwrap();
        prop_assert!(d.vec(0).is_zero());
        prop_assert_eq!(p.contract(&qr(1, 3)).unwrap().vec(0), p.vec(0));
    }

    #[test]
    fn affine_pushforward_commutes_with_boundary(
        (p, a, b) in (1usize..=3).prop_flat_map(|n| (
            (0..=n).prop_flat_map(move |k| arb_chain(n, 1, k, 3)),
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), n),
            proptest::collection::vec(-3i64..=3, n),
        ))
    ) {
        let a: Vec<Vec<Q>> = a.into_iter().map(|r| r.into_iter().map(q).collect()).collect();
        let b: Vec<Q> = b.into_iter().map(q).collect();
        let f = SmoothMap::affine(&a, &b).unwrap();
        prop_assert_eq!(p.boundary().pushforward(&f).unwrap(), p.pushforward(&f).unwrap().boundary());
    }

    #[test]
    fn polynomial_pushforward_commutes_with_boundary_at_poles(
        (x, j, k) in (arb_point(2), 0usize..=2, 0usize..=2)
    ) {
        let f = SmoothMap::parse("x1^2 - x2, x1*x2 + 3*x2^3", 2).unwrap();
        let pole = Chain::single(x, grad(2, &vec![1; j], &(1..=k).collect::<Vec<_>>(), 1)).unwrap();
        prop_assert_eq!(pole.boundary().pushforward(&f).unwrap(), pole.pushforward(&f).unwrap().boundary());
    }

    #[test]
    fn chain_rule_for_pushforward(p in (0usize..=2).prop_flat_map(|k| arb_chain(2, 1, k, 3))) {
        let f = SmoothMap::parse("x1 + x2^2, 2*x2", 2).unwrap();
        let g = SmoothMap::parse("x1*x2, x1 - x2", 2).unwrap();
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(p.pushforward(&fg).unwrap(), p.pushforward(&g).unwrap().pushforward(&f).unwrap());
    }

    #[test]
    fn exterior_product_laws(
        (p, b, c) in (2usize..=4).prop_flat_map(|n| (0..n).prop_flat_map(move |k| (arb_chain(n, 0, k, 3), arb_kvector(n, 1), -3i64..=3)))
    ) {
        let eb = p.exterior_e(&b).unwrap();
        prop_assert!(eb.exterior_e(&b).unwrap().is_zero());
        if let Some(g) = eb.grade() {
            prop_assert_eq!(g, p.grade().unwrap() + 1);
        }
        let n = p.n();
        let scale = Form::parse(&format!("{c}"), Some(n)).unwrap();
        let lhs = eb.scale_by_function(&scale).unwrap();
        prop_assert_eq!(&lhs, &p.scale_by_function(&scale).unwrap().exterior_e(&b).unwrap());
        prop_assert_eq!(&lhs, &p.exterior_e(&b.scale(&q(c))).unwrap());
    }

    #[test]
    fn magic_formula_for_vectors(
        (p, x) in (1usize..=4).prop_flat_map(|n| (0..n).prop_flat_map(move |k| (arb_chain(n, 0, k, 3), arb_kvector(n, 1))))
    ) {
        let u = x.components();
        prop_assert_eq!(p.magic_nabla(&x).unwrap(), p.prederivative(&u).unwrap());
        prop_assert_eq!(p.nabla_field(&x).unwrap(), p.prederivative(&u).unwrap());
    }

    #[test]
    fn graded_magic_formula_for_bivectors(
        (p, x) in (2usize..=4).prop_flat_map(|n| (0..=n - 2).prop_flat_map(move |k| (arb_chain(n, 0, k, 3), arb_kvector(n, 2))))
    ) {
        let lhs = p.exterior_e(&x).unwrap().boundary().sub(&p.boundary().exterior_e(&x).unwrap()).unwrap();
        prop_assert_eq!(lhs, p.nabla_field(&x).unwrap());
    }

    #[test]
    fn perp_is_an_involution_up_to_sign(p in small_chain()) {
        let n = p.n();
        let mut expect = Chain::zero(n);
        for pole in p.poles() {
            let k = pole.bidegree().1;
            let s = if (k * (n - k)) % 2 == 1 { q(-1) } else { q(1) };
            expect = expect.add(&Chain::single(pole.at.clone(), pole.payload.scale(&s)).unwrap()).unwrap();
        }
        prop_assert_eq!(p.perp().perp(), expect);
    }

    #[test]
    fn slant_identities(
        (a, b) in (1usize..=4).prop_flat_map(|n| (1..=n).prop_flat_map(move |k| (0..=k).prop_map(move |m| (n, k, m))))
            .prop_flat_map(|(n, k, m)| (
                proptest::sample::select(MultiIndex::all_of_grade(n, k)).prop_map(move |i| KVector::basis(n, i)),
                proptest::sample::select(MultiIndex::all_of_grade(n, m)).prop_map(move |i| KVector::basis(n, i)),
            ))
    ) {
        let n = a.n();
        prop_assert_eq!(a.slant(&a).unwrap(), KVector::scalar(n, q(1)));
        if let (Ok(w), true) = (b.wedge(&a), a.grade() + b.grade() <= n) {
            if !w.is_zero() {
                prop_assert_eq!(w.slant(&b).unwrap(), a.clone());
            }
        }
    }
}
