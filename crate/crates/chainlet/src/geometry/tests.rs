use proptest::prelude::*;

use super::*;
use crate::algebra::{KVector, MultiIndex};
use crate::chains::{Chain, Point};
use crate::forms::Form;
use crate::testutil::*;

fn form(s: &str, n: usize) -> Form {
    Form::parse(s, Some(n)).unwrap()
}

fn vq(c: &[i64]) -> Vec<Q> {
    c.iter().map(|&v| q(v)).collect()
}

#[test]
fn unit_square_levels() {
    let sq = CubeCell::<Q>::unit(2, 2);
    let c0 = sq.to_chain(0).unwrap();
    assert_eq!(
        c0,
        Chain::monopole(Point::new(vec![qr(1, 2), qr(1, 2)]), &e(2, &[1, 2])).unwrap()
    );
    let c1 = sq.to_chain(1).unwrap();
    assert_eq!(c1.len(), 4);
    for p in c1.poles() {
        assert_eq!(p.payload.norm(), qr(1, 4));
        assert!(p
            .at
            .coords()
            .iter()
            .all(|x| *x == qr(1, 4) || *x == qr(3, 4)));
    }
    for level in 0..4 {
        assert_eq!(sq.to_chain(level).unwrap().mass(), q(1));
    }
}

#[test]
fn interval_integrates_constant_form_exactly() {
    let seg = CubeCell::new(vq(&[2]), vec![vq(&[5])], 1).unwrap();
    for level in 0..6 {
        assert_eq!(
            form("dx1", 1).eval(&seg.to_chain(level).unwrap()).unwrap(),
            q(5)
        );
    }
    assert!(matches!(
        CubeCell::new(vq(&[0, 0]), vec![vq(&[1, 1]), vq(&[2, 2])], 1),
        Err(GeometryError::Degenerate(_))
    ));
}

#[test]
fn cube_boundary_faces_carry_green() {
    let sq = CubeCell::<Q>::unit(2, 2);
    let faces = sq.boundary_faces();
    assert_eq!(faces.len(), 4);
    let w = form("x1*dx2", 2);
    for level in 0..4 {
        let total: Q = faces
            .iter()
            .map(|f| w.eval(&f.to_chain(level).unwrap()).unwrap())
            .sum();
        assert_eq!(total, q(1));
    }
    // the streamed poles match the built chain
    let mut acc = q(0);
    sq.for_each_pole(3, |x, a| {
        acc += w.exterior_d().unwrap().eval_at(x, a).unwrap()
    })
    .unwrap();
    assert_eq!(acc, q(1));
}

#[test]
fn simplex_examples() {
    let tri = SimplexCell::new(vec![vq(&[0, 0]), vq(&[1, 0]), vq(&[0, 1])], 1).unwrap();
    let c0 = tri.to_chain(0).unwrap();
    assert_eq!(c0.len(), 1);
    assert_eq!(c0.mass(), qr(1, 2));
    assert_eq!(c0.poles()[0].at, Point::new(vec![qr(1, 3), qr(1, 3)]));
    let square = SimplicialComplex::new(
        vec![vq(&[0, 0]), vq(&[1, 0]), vq(&[1, 1]), vq(&[0, 1])],
        vec![(vec![0, 1, 2], 1), (vec![0, 2, 3], 1)],
    )
    .unwrap();
    let dv = form("dx1*dx2", 2);
    for level in 0..3 {
        let c = square.to_chain(level).unwrap();
        assert_eq!(c.mass(), q(1));
        assert_eq!(dv.eval(&c).unwrap(), q(1));
    }
    let bd = square.boundary_complex().unwrap();
    assert_eq!(bd.simplices.len(), 4);
    assert_eq!(
        form("x1*dx2", 2).eval(&bd.to_chain(2).unwrap()).unwrap(),
        q(1)
    );
    assert!(matches!(
        SimplicialComplex::new(
            vec![vq(&[0, 0]), vq(&[1, 0]), vq(&[1, 1]), vq(&[0, 1])],
            vec![(vec![0, 1, 2], 1), (vec![0, 3, 2], 1)],
        ),
        Err(GeometryError::Orientation(_))
    ));
}

#[test]
fn subdivision_keeps_orientation_and_mass() {
    let tet = SimplexCell::new(
        vec![
            vq(&[0, 0, 0]),
            vq(&[1, 0, 0]),
            vq(&[0, 1, 0]),
            vq(&[0, 0, 1]),
        ],
        -1,
    )
    .unwrap();
    let a = tet.kvector().unwrap();
    let c = tet.to_chain(1).unwrap();
    assert_eq!(c.vec0(3), a);
    assert_eq!(c.mass(), a.mass());
}

#[test]
fn field_and_form_chains() {
    let x = vector_field_chain(&form("dx1", 2), &Grid::<Q>::unit(2, 1)).unwrap();
    assert_eq!(x.len(), 4);
    assert!(x
        .poles()
        .iter()
        .all(|p| p.payload.lambda_of_order(0, 1) == e(2, &[1]).scale(&qr(1, 4))));
    assert!(
        vector_field_chain(&Form::zero(2, 1), &Grid::<Q>::unit(2, 3))
            .unwrap()
            .is_zero()
    );
    assert!(vector_field_chain(&form("dx1*dx2", 2), &Grid::<Q>::unit(2, 1)).is_err());
    let g8 = Grid::<f64>::unit(2, 8);
    let v = form("dx1", 2)
        .eval(&vector_field_chain(&form("x2*dx1", 2), &g8).unwrap())
        .unwrap();
    assert!((v - 0.5).abs() < 1e-3);
    assert_eq!(
        form("dx1", 2)
            .eval(&form_chain(&form("dx1", 2), &Grid::<Q>::unit(2, 2)).unwrap())
            .unwrap(),
        q(1)
    );
    let p = form_chain(&form("x2*dx1", 2), &g8).unwrap();
    assert!((form("dx1", 2).eval(&p).unwrap() - 0.5).abs() < 1e-3);
    // 2-forms use the volume coefficient
    let vol = form_chain(&form("dx1*dx2", 2), &Grid::<Q>::unit(2, 2)).unwrap();
    assert_eq!(vol.vec0(2), KVector::basis(2, MultiIndex::full(2)));
}

#[test]
fn binning_examples() {
    let grid = Grid::<Q>::unit(2, 1);
    let p = Chain::monopole(pt(&[0, 0]), &e(2, &[1]))
        .unwrap()
        .add(&Chain::monopole(Point::new(vec![qr(3, 4), qr(3, 4)]), &e(2, &[2])).unwrap())
        .unwrap();
    let b = bin_chain(&p, &grid).unwrap();
    let expect = Chain::monopole(Point::new(vec![qr(1, 4), qr(1, 4)]), &e(2, &[1]))
        .unwrap()
        .add(&Chain::monopole(Point::new(vec![qr(3, 4), qr(3, 4)]), &e(2, &[2])).unwrap())
        .unwrap();
    assert_eq!(b, expect);
    let two = Chain::monopole(Point::new(vec![qr(1, 8), qr(1, 8)]), &e(2, &[1]))
        .unwrap()
        .add(&Chain::monopole(Point::new(vec![qr(3, 8), qr(1, 8)]), &e(2, &[1])).unwrap())
        .unwrap();
    let merged = bin_chain(&two, &grid).unwrap();
    assert_eq!(
        merged,
        Chain::monopole(
            Point::new(vec![qr(1, 4), qr(1, 4)]),
            &e(2, &[1]).scale(&q(2))
        )
        .unwrap()
    );
    assert!(bin_chain(&Chain::monopole(pt(&[2, 0]), &e(2, &[1])).unwrap(), &grid).is_err());
}

#[test]
fn hodge_families() {
    let cfg = HodgeConfig {
        final_ratio: 0.2,
        ..HodgeConfig::default()
    };
    let circ = square_grid_family(&[1, 2, 3], DualKind::Circumcentric).unwrap();
    let r = hodge_sequence_report(&circ, &cfg).unwrap();
    let ratios: Vec<f64> = r.levels.iter().map(|l| l.direction_ratio).collect();
    for (got, want) in ratios.iter().zip([0.5, 0.25, 0.125]) {
        assert!((got - want).abs() < 1e-12, "{ratios:?}");
    }
    assert!(r
        .levels
        .iter()
        .all(|l| l.degenerate == 4usize.pow(l.level as u32)));
    assert!(r.levels.iter().all(|l| l.bracket_lower <= l.bracket_upper));
    assert_eq!(r.verdict, HodgeVerdict::Hodge, "{:?}", r.reasons);

    let skew = square_grid_family(&[1, 2, 3], DualKind::Barycentric).unwrap();
    let r = hodge_sequence_report(&skew, &cfg).unwrap();
    assert_eq!(r.verdict, HodgeVerdict::NotHodge);

    let perp = square_grid_family(&[1, 2], DualKind::PerpTranslate).unwrap();
    let r = hodge_sequence_report(&perp, &cfg).unwrap();
    assert!(
        r.levels
            .iter()
            .all(|l| l.direction_ratio == 0.0 && l.max_barycenter_distance < 1e-12),
        "{:?}",
        r.levels
    );
}

#[test]
fn mesh_pair_validation() {
    let m = square_grid_pair(1, DualKind::Circumcentric).unwrap();
    let mut pairs = m.pairs.clone();
    pairs.pop();
    assert!(matches!(
        MeshPair::new(
            m.vertices.clone(),
            m.triangles.clone(),
            m.dual_vertices.clone(),
            pairs
        ),
        Err(GeometryError::Bijection(_))
    ));
    let mut pairs = m.pairs.clone();
    pairs.push(pairs[0].clone());
    assert!(matches!(
        MeshPair::new(
            m.vertices.clone(),
            m.triangles.clone(),
            m.dual_vertices.clone(),
            pairs
        ),
        Err(GeometryError::Bijection(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn binning_preserves_constant_forms(p in arb_chain(2, 0, 1, 6), level in 0u32..3) {
        let grid = Grid::new(vec![q(-4), q(-4)], vec![q(4), q(4)], level).unwrap();
        let b = bin_chain(&p, &grid).unwrap();
        prop_assert_eq!(b.vec(0), p.vec(0));
        let w = form("3*dx1 - 2*dx2", 2);
        prop_assert_eq!(w.eval(&b).unwrap(), w.eval(&p).unwrap());
    }

    #[test]
    fn cube_chains_conserve_mass_and_direction(
        edges in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..=3),
        level in 0u32..3,
    ) {
        let edges: Vec<Vec<Q>> = edges.into_iter().map(|v| v.into_iter().map(q).collect()).collect();
        if let Ok(c) = CubeCell::new(vq(&[1, -1, 0]), edges, 1) {
            let ch = c.to_chain(level).unwrap();
            prop_assert_eq!(ch.vec0(c.k()), c.kvector().unwrap());
        }
    }
}
