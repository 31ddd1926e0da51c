//! Coefficient functions: a canonical sparse polynomial over the atoms
//! `x_i`, `sin(g)`, `cos(g)`, where `g` is again a coefficient function.
//!
//! The representation is closed under sums, products, partial derivatives and
//! composition, and mixed partials commute exactly in it.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::FormError;
use crate::scalar::{rational_to_f64, Rational, Scalar};

/// Exact rational constant with a cached `f64` image.
#[derive(Clone, Debug)]
pub struct Const {
    q: Rational,
    f: f64,
}

impl Const {
    pub fn new(q: Rational) -> Self {
        let f = rational_to_f64(&q);
        Const { q, f }
    }

    pub fn int(v: i64) -> Self {
        Const::new(<Rational as Scalar>::from_i64(v))
    }

    /// Exact binary value of a finite float.
    pub fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v).map(Const::new)
    }

    pub fn rational(&self) -> &Rational {
        &self.q
    }

    pub fn value_f64(&self) -> f64 {
        self.f
    }

    pub fn to_scalar<S: Scalar>(&self) -> S {
        match S::MODE {
            crate::scalar::ArithmeticMode::Float => S::from_f64(self.f).expect("finite constant"),
            crate::scalar::ArithmeticMode::Rational => S::from_rational(&self.q),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    fn add(&self, o: &Const) -> Const {
        Const::new(&self.q + &o.q)
    }

    fn mul(&self, o: &Const) -> Const {
        Const::new(&self.q * &o.q)
    }
}

impl PartialEq for Const {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for Const {}
impl PartialOrd for Const {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Const {
    fn cmp(&self, other: &Self) -> Ordering {
        self.q.cmp(&other.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    /// 0-based coordinate index.
    Var(u16),
    Sin(CoeffFn),
    Cos(CoeffFn),
}

/// Product of atom powers, sorted by atom, exponents positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
struct Monomial(Vec<(Atom, u32)>);

impl Monomial {
    fn times(&self, other: &Monomial) -> Monomial {
        let mut out: Vec<(Atom, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let ord = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial(out)
    }
}

/// Smooth coefficient function of the coordinates `x1, x2, ...`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoeffFn(Arc<BTreeMap<Monomial, Const>>);

impl Default for CoeffFn {
    fn default() -> Self {
        CoeffFn::zero()
    }
}

impl CoeffFn {
    pub fn zero() -> Self {
        CoeffFn(Arc::new(BTreeMap::new()))
    }

    pub fn one() -> Self {
        Self::constant(Const::int(1))
    }

    pub fn constant(c: Const) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Monomial::default(), c);
        }
        CoeffFn(Arc::new(m))
    }

    pub fn int(v: i64) -> Self {
        Self::constant(Const::int(v))
    }

    pub fn rational(q: Rational) -> Self {
        Self::constant(Const::new(q))
    }

    /// The coordinate `x_i` (1-based).
    pub fn coord(i: usize) -> Self {
        assert!(i >= 1, "coordinates are 1-based");
        Self::from_atom(Atom::Var((i - 1) as u16))
    }

    fn from_atom(a: Atom) -> Self {
        let mut m = BTreeMap::new();
        m.insert(Monomial(vec![(a, 1)]), Const::int(1));
        CoeffFn(Arc::new(m))
    }

    fn from_map(mut m: BTreeMap<Monomial, Const>) -> Self {
        m.retain(|_, c| !c.is_zero());
        CoeffFn(Arc::new(m))
    }

    pub fn sin(g: &CoeffFn) -> Self {
        match g.as_constant() {
            Some(c) if c.is_zero() => CoeffFn::zero(),
            _ => Self::from_atom(Atom::Sin(g.clone())),
        }
    }

    pub fn cos(g: &CoeffFn) -> Self {
        match g.as_constant() {
            Some(c) if c.is_zero() => CoeffFn::one(),
            _ => Self::from_atom(Atom::Cos(g.clone())),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_constant(&self) -> Option<Const> {
        match self.0.len() {
            0 => Some(Const::int(0)),
            1 => {
                let (m, c) = self.0.iter().next().unwrap();
                m.0.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add(&self, other: &CoeffFn) -> CoeffFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut m = (*self.0).clone();
        for (k, c) in other.0.iter() {
            match m.get_mut(k) {
                Some(x) => *x = x.add(c),
                None => {
                    m.insert(k.clone(), c.clone());
                }
            }
        }
        Self::from_map(m)
    }

    pub fn neg(&self) -> CoeffFn {
        self.scale(&Const::int(-1))
    }

    pub fn sub(&self, other: &CoeffFn) -> CoeffFn {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Const) -> CoeffFn {
        if c.is_zero() {
            return CoeffFn::zero();
        }
        Self::from_map(self.0.iter().map(|(k, v)| (k.clone(), v.mul(c))).collect())
    }

    pub fn mul(&self, other: &CoeffFn) -> CoeffFn {
        if self.is_zero() || other.is_zero() {
            return CoeffFn::zero();
        }
        let mut m: BTreeMap<Monomial, Const> = BTreeMap::new();
        for (ka, ca) in self.0.iter() {
            for (kb, cb) in other.0.iter() {
                let k = ka.times(kb);
                let c = ca.mul(cb);
                match m.get_mut(&k) {
                    Some(x) => *x = x.add(&c),
                    None => {
                        m.insert(k, c);
                    }
                }
            }
        }
        Self::from_map(m)
    }

    pub fn pow(&self, e: u32) -> CoeffFn {
        let mut out = CoeffFn::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Exact partial derivative in `x_i` (1-based).
    pub fn derivative(&self, i: usize) -> CoeffFn {
        let var = (i - 1) as u16;
        let mut acc = CoeffFn::zero();
        for (mono, c) in self.0.iter() {
            for (pos, (atom, e)) in mono.0.iter().enumerate() {
                let inner = match atom {
                    Atom::Var(v) if *v == var => CoeffFn::one(),
                    Atom::Var(_) => continue,
                    Atom::Sin(g) => {
                        let dg = g.derivative(i);
                        if dg.is_zero() {
                            continue;
                        }
                        CoeffFn::cos(g).mul(&dg)
                    }
                    Atom::Cos(g) => {
                        let dg = g.derivative(i);
                        if dg.is_zero() {
                            continue;
                        }
                        CoeffFn::sin(g).mul(&dg).neg()
                    }
                };
                // c * e * atom^(e-1) * d(atom) * rest
                let mut rest = mono.0.clone();
                if *e == 1 {
                    rest.remove(pos);
                } else {
                    rest[pos].1 -= 1;
                }
                let term = CoeffFn::from_map(BTreeMap::from([(
                    Monomial(rest),
                    c.mul(&Const::int(*e as i64)),
                )]));
                acc = acc.add(&term.mul(&inner));
            }
        }
        acc
    }

    /// Iterated partial derivative along the 1-based indices in `dirs`.
    pub fn derivative_multi(&self, dirs: impl IntoIterator<Item = usize>) -> CoeffFn {
        dirs.into_iter().fold(self.clone(), |f, i| f.derivative(i))
    }

    /// Replaces `x_i` by `subs[i-1]`.
    pub fn substitute(&self, subs: &[CoeffFn]) -> Result<CoeffFn, FormError> {
        let mut acc = CoeffFn::zero();
        for (mono, c) in self.0.iter() {
            let mut term = CoeffFn::constant(c.clone());
            for (atom, e) in &mono.0 {
                let a = match atom {
                    Atom::Var(v) => {
                        subs.get(*v as usize)
                            .cloned()
                            .ok_or(FormError::DimensionMismatch {
                                expected: subs.len(),
                                found: *v as usize + 1,
                            })?
                    }
                    Atom::Sin(g) => CoeffFn::sin(&g.substitute(subs)?),
                    Atom::Cos(g) => CoeffFn::cos(&g.substitute(subs)?),
                };
                term = term.mul(&a.pow(*e));
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Evaluates at `x`; fails in rational mode when a trig atom has a nonzero argument.
    pub fn eval<S: Scalar>(&self, x: &[S]) -> Result<S, FormError> {
        let mut acc = S::zero();
        for (mono, c) in self.0.iter() {
            let mut t: S = c.to_scalar();
            for (atom, e) in &mono.0 {
                let v = match atom {
                    Atom::Var(i) => {
                        x.get(*i as usize)
                            .cloned()
                            .ok_or(FormError::DimensionMismatch {
                                expected: x.len(),
                                found: *i as usize + 1,
                            })?
                    }
                    Atom::Sin(g) => g.eval(x)?.sin().ok_or(FormError::NotRepresentable("sin"))?,
                    Atom::Cos(g) => g.eval(x)?.cos().ok_or(FormError::NotRepresentable("cos"))?,
                };
                t = t * v.pow_u32(*e);
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Fast `f64` evaluation.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (mono, c) in self.0.iter() {
            let mut t = c.f;
            for (atom, e) in &mono.0 {
                let v = match atom {
                    Atom::Var(i) => x[*i as usize],
                    Atom::Sin(g) => g.eval_f64(x).sin(),
                    Atom::Cos(g) => g.eval_f64(x).cos(),
                };
                t *= if *e == 1 { v } else { v.powi(*e as i32) };
            }
            acc += t;
        }
        acc
    }

    /// Highest coordinate index used (1-based), 0 for constants.
    pub fn max_var(&self) -> usize {
        let mut m = 0;
        for mono in self.0.keys() {
            for (atom, _) in &mono.0 {
                m = m.max(match atom {
                    Atom::Var(i) => *i as usize + 1,
                    Atom::Sin(g) | Atom::Cos(g) => g.max_var(),
                });
            }
        }
        m
    }

    /// No coordinate appears outside a trig argument (the function is bounded).
    pub fn is_trig_only(&self) -> bool {
        self.0
            .keys()
            .all(|m| m.0.iter().all(|(a, _)| !matches!(a, Atom::Var(_))))
    }

    pub fn is_polynomial(&self) -> bool {
        self.0
            .keys()
            .all(|m| m.0.iter().all(|(a, _)| matches!(a, Atom::Var(_))))
    }

    /// Polynomial of total degree at most one: returns `(constant, linear coefficients)`.
    pub fn as_affine(&self, n: usize) -> Option<(Const, Vec<Const>)> {
        let mut c0 = Const::int(0);
        let mut lin = vec![Const::int(0); n];
        for (mono, c) in self.0.iter() {
            match mono.0.as_slice() {
                [] => c0 = c.clone(),
                [(Atom::Var(i), 1)] if (*i as usize) < n => lin[*i as usize] = c.clone(),
                _ => return None,
            }
        }
        Some((c0, lin))
    }

    /// Upper bound data for `sup |finite differences|`: a list of `(amplitude, frequency)`
    /// such that the function is a sum of `amplitude * trig(frequency . x + phase)`.
    /// `None` when a coordinate appears outside a trig argument or an argument is not affine.
    pub fn trig_spectrum(&self, n: usize) -> Option<Vec<(f64, Vec<f64>)>> {
        let mut out = Vec::new();
        for (mono, c) in self.0.iter() {
            let mut spec: Vec<(f64, Vec<f64>)> = vec![(c.f.abs(), vec![0.0; n])];
            for (atom, e) in &mono.0 {
                let g = match atom {
                    Atom::Var(_) => return None,
                    Atom::Sin(g) | Atom::Cos(g) => g,
                };
                let (_, lin) = g.as_affine(n)?;
                let xi: Vec<f64> = lin.iter().map(|c| c.f).collect();
                for _ in 0..*e {
                    spec = spectrum_times_trig(&spec, &xi);
                }
            }
            out.extend(spec);
        }
        Some(out)
    }

    /// Number of monomials (a size measure for diagnostics).
    pub fn num_terms(&self) -> usize {
        self.0.len()
    }
}

fn spectrum_times_trig(spec: &[(f64, Vec<f64>)], xi: &[f64]) -> Vec<(f64, Vec<f64>)> {
    let mut out = Vec::with_capacity(spec.len() * 2);
    for (a, eta) in spec {
        if eta.iter().all(|v| *v == 0.0) {
            out.push((*a, xi.to_vec()));
        } else {
            out.push((a / 2.0, eta.iter().zip(xi).map(|(p, q)| p + q).collect()));
            out.push((a / 2.0, eta.iter().zip(xi).map(|(p, q)| p - q).collect()));
        }
    }
    out
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_integer() {
            write!(f, "{}", self.q.numer())
        } else {
            write!(f, "{}/{}", self.q.numer(), self.q.denom())
        }
    }
}

impl fmt::Display for CoeffFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in self.0.iter() {
            let neg = c.q.is_negative();
            let abs = Const::new(c.q.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if mono.0.is_empty() || !abs.q.is_one() {
                let s = abs.to_string();
                factors.push(if s.contains('/') && !mono.0.is_empty() {
                    format!("({s})")
                } else {
                    s
                });
            }
            for (atom, e) in &mono.0 {
                let a = match atom {
                    Atom::Var(i) => format!("x{}", i + 1),
                    Atom::Sin(g) => format!("sin({g})"),
                    Atom::Cos(g) => format!("cos({g})"),
                };
                factors.push(if *e == 1 { a } else { format!("{a}^{e}") });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;

    fn x(i: usize) -> CoeffFn {
        CoeffFn::coord(i)
    }

    fn c(v: i64) -> CoeffFn {
        CoeffFn::int(v)
    }

    #[test]
    fn polynomial_arithmetic_is_canonical() {
        let a = x(1).add(&x(2)).pow(2);
        let b = x(1)
            .pow(2)
            .add(&x(1).mul(&x(2)).scale(&Const::int(2)))
            .add(&x(2).pow(2));
        assert_eq!(a, b);
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn derivatives_of_trig_atoms() {
        let f = CoeffFn::sin(&x(1).scale(&Const::int(2)));
        let df = f.derivative(1);
        let expected = CoeffFn::cos(&x(1).scale(&Const::int(2))).scale(&Const::int(2));
        assert_eq!(df, expected);
        assert!(f.derivative(2).is_zero());
    }

    #[test]
    fn mixed_partials_commute_exactly() {
        let f = CoeffFn::sin(&x(1).mul(&x(2)).add(&x(3)))
            .mul(&CoeffFn::cos(&x(2).pow(2)))
            .add(&x(1).pow(3).mul(&x(3)));
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(f.derivative(i).derivative(j), f.derivative(j).derivative(i));
            }
        }
    }

    #[test]
    fn evaluation_modes() {
        let f = x(1).mul(&x(2)).add(&c(3));
        let q = |s: &str| parse_rational(s).unwrap();
        assert_eq!(f.eval(&[q("1/2"), q("4")]).unwrap(), q("5"));
        assert_eq!(f.eval_f64(&[0.5, 4.0]), 5.0);
        let g = CoeffFn::sin(&x(1));
        assert!(g.eval(&[q("1")]).is_err());
        assert_eq!(g.eval(&[q("0")]).unwrap(), q("0"));
        assert!((g.eval_f64(&[1.0]) - 1f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn substitution_composes() {
        let f = x(1).pow(2).add(&CoeffFn::sin(&x(2)));
        let g = f
            .substitute(&[x(2).add(&c(1)), x(1).scale(&Const::int(3))])
            .unwrap();
        let expected = x(2)
            .add(&c(1))
            .pow(2)
            .add(&CoeffFn::sin(&x(1).scale(&Const::int(3))));
        assert_eq!(g, expected);
    }

    #[test]
    fn trig_spectrum_bounds() {
        let f = CoeffFn::sin(&x(1).scale(&Const::int(2)));
        let s = f.trig_spectrum(1).unwrap();
        assert_eq!(s, vec![(1.0, vec![2.0])]);
        assert!(x(1).trig_spectrum(1).is_none());
        let g = CoeffFn::sin(&x(1))
            .mul(&CoeffFn::cos(&x(2)))
            .scale(&Const::int(4));
        let s = g.trig_spectrum(2).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|(a, _)| *a == 2.0));
    }

    #[test]
    fn display_round_trips_visually() {
        let f = x(1)
            .pow(2)
            .scale(&Const::new(parse_rational("1/2").unwrap()))
            .sub(&x(2));
        assert_eq!(f.to_string(), "(1/2)*x1^2 - x2");
        assert_eq!(CoeffFn::zero().to_string(), "0");
    }
}
