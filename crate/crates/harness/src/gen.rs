//! Seeded random instances for the fuzz suites.

use chainlet::algebra::{KVector, MultiIndex, SymMonomial, XElement, XTerm};
use chainlet::chains::{Chain, Point};
use chainlet::forms::{CoeffFn, Const, Form, SmoothMap};
use chainlet::scalar::{Rational, Scalar};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

/// Independent stream per experiment name, so adding one experiment never shifts another.
pub fn rng_for(seed: u64, name: &str) -> Rng8 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub fn q(num: i64, den: i64) -> Rational {
    Rational::from_i64(num) / Rational::from_i64(den)
}

/// Small rational with denominator 1, 2 or 4.
pub fn small_rational(rng: &mut Rng8, max_num: i64) -> Rational {
    let den = *[1, 2, 4].choose(rng).expect("nonempty");
    q(rng.gen_range(-max_num..=max_num), den)
}

pub fn nonzero_rational(rng: &mut Rng8, max_num: i64) -> Rational {
    loop {
        let v = small_rational(rng, max_num);
        if v != Rational::from_i64(0) {
            return v;
        }
    }
}

pub fn rand_index(rng: &mut Rng8, n: usize, k: usize) -> MultiIndex {
    let mut all: Vec<usize> = (1..=n).collect();
    all.shuffle(rng);
    MultiIndex::new(&all[..k]).expect("distinct indices in range")
}

pub fn rand_monomial(rng: &mut Rng8, n: usize, j: usize) -> SymMonomial {
    let f: Vec<usize> = (0..j).map(|_| rng.gen_range(1..=n)).collect();
    SymMonomial::new(&f).expect("indices in range")
}

pub fn rand_vector(rng: &mut Rng8, n: usize) -> Vec<Rational> {
    (0..n).map(|_| small_rational(rng, 6)).collect()
}

pub fn rand_kvector(rng: &mut Rng8, n: usize, k: usize) -> KVector<Rational> {
    let terms =
        (0..rng.gen_range(1..=3)).map(|_| (rand_index(rng, n, k), nonzero_rational(rng, 4)));
    KVector::from_terms(n, k, terms).expect("valid grade")
}

/// Element of one bidegree `(j, k)`, possibly zero after cancellation.
pub fn rand_pure_xelement(rng: &mut Rng8, n: usize, j: usize, k: usize) -> XElement<Rational> {
    let terms: Vec<XTerm<Rational>> = (0..rng.gen_range(1..=4))
        .map(|_| XTerm {
            mono: rand_monomial(rng, n, j),
            idx: rand_index(rng, n, k),
            coeff: nonzero_rational(rng, 4),
        })
        .collect();
    XElement::from_terms(n, terms)
}

/// Mixed-bidegree element with orders `<= max_order`.
pub fn rand_xelement(rng: &mut Rng8, n: usize, max_order: usize) -> XElement<Rational> {
    let mut acc = XElement::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let (j, k) = (rng.gen_range(0..=max_order), rng.gen_range(0..=n));
        acc = acc
            .add(&rand_pure_xelement(rng, n, j, k))
            .expect("same dimension");
    }
    acc
}

pub fn rand_point(rng: &mut Rng8, n: usize) -> Point<Rational> {
    Point::new((0..n).map(|_| small_rational(rng, 8)).collect())
}

/// Chain of bidegree `(j, k)` with up to `max_poles` poles.
pub fn rand_chain(
    rng: &mut Rng8,
    n: usize,
    j: usize,
    k: usize,
    max_poles: usize,
) -> Chain<Rational> {
    let parts: Vec<_> = (0..rng.gen_range(1..=max_poles))
        .map(|_| (rand_point(rng, n), rand_pure_xelement(rng, n, j, k)))
        .collect();
    Chain::from_parts(n, parts).expect("consistent dimension")
}

/// Polynomial of degree `<= 2`, or with `trig` also `sin`/`cos` of affine arguments.
pub fn rand_coeff(rng: &mut Rng8, n: usize, trig: bool) -> CoeffFn {
    let mut f = CoeffFn::rational(small_rational(rng, 4));
    for _ in 0..rng.gen_range(0..=3) {
        let c = Const::new(nonzero_rational(rng, 3));
        let deg = rng.gen_range(1..=2);
        let mono = (0..deg).fold(CoeffFn::one(), |acc, _| {
            acc.mul(&CoeffFn::coord(rng.gen_range(1..=n)))
        });
        f = f.add(&mono.scale(&c));
    }
    if trig && rng.gen_bool(0.6) {
        let arg = (1..=n).fold(CoeffFn::rational(small_rational(rng, 2)), |acc, i| {
            acc.add(&CoeffFn::coord(i).scale(&Const::new(small_rational(rng, 2))))
        });
        let t = if rng.gen_bool(0.5) {
            CoeffFn::sin(&arg)
        } else {
            CoeffFn::cos(&arg)
        };
        f = f.add(&t.scale(&Const::new(nonzero_rational(rng, 3))));
    }
    f
}

pub fn rand_form(rng: &mut Rng8, n: usize, k: usize, trig: bool) -> Form {
    let idx = MultiIndex::all_of_grade(n, k);
    let mut terms = Vec::new();
    for i in idx {
        if rng.gen_bool(0.7) {
            terms.push((i, rand_coeff(rng, n, trig)));
        }
    }
    Form::from_terms(n, k, terms).expect("valid grade")
}

/// Polynomial self-map `x_i + (small quadratic)`.
pub fn rand_poly_map(rng: &mut Rng8, n: usize) -> SmoothMap {
    let comps = (1..=n)
        .map(|i| {
            let mut f = CoeffFn::coord(i).scale(&Const::new(nonzero_rational(rng, 2)));
            for _ in 0..rng.gen_range(0..=2) {
                let a = CoeffFn::coord(rng.gen_range(1..=n));
                let b = if rng.gen_bool(0.5) {
                    CoeffFn::coord(rng.gen_range(1..=n))
                } else {
                    CoeffFn::one()
                };
                f = f.add(&a.mul(&b).scale(&Const::new(small_rational(rng, 2))));
            }
            f
        })
        .collect();
    SmoothMap::new(n, comps).expect("components use only x_1..x_n")
}

/// Affine map with a random integer matrix.
pub fn rand_affine_map(rng: &mut Rng8, n: usize) -> SmoothMap {
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|_| (0..n).map(|_| small_rational(rng, 3)).collect())
        .collect();
    let b = rand_vector(rng, n);
    SmoothMap::affine(&a, &b).expect("square matrix")
}

pub fn to_f64_chain(p: &Chain<Rational>) -> Chain<f64> {
    p.map_scalars(|c| c.to_f64())
}
