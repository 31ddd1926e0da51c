use std::collections::BTreeMap;
use std::fmt;

use super::{AlgebraError, MultiIndex};
use crate::scalar::Scalar;

/// Grade-`k` multivector in `R^n`, as coefficients on basis multi-indices.
#[derive(Clone, PartialEq, Debug)]
pub struct KVector<S> {
    n: usize,
    k: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S: Scalar> KVector<S> {
    pub fn zero(n: usize, k: usize) -> Self {
        KVector {
            n,
            k,
            coeffs: BTreeMap::new(),
        }
    }

    /// The scalar `c` as a 0-vector.
    pub fn scalar(n: usize, c: S) -> Self {
        Self::basis_scaled(n, MultiIndex::EMPTY, c)
    }

    pub fn basis(n: usize, idx: MultiIndex) -> Self {
        Self::basis_scaled(n, idx, S::one())
    }

    pub fn basis_scaled(n: usize, idx: MultiIndex, c: S) -> Self {
        assert!(
            idx.max_index() <= n,
            "multi-index {idx} exceeds dimension {n}"
        );
        let mut v = Self::zero(n, idx.len());
        v.add_term(idx, c);
        v
    }

    /// `e_i` for 1-based `i`.
    pub fn e(n: usize, i: usize) -> Self {
        Self::basis(n, MultiIndex::single(i))
    }

    /// A 1-vector from its components (`u[0]` is the `e_1` coefficient).
    pub fn vector(u: &[S]) -> Self {
        let mut v = Self::zero(u.len(), 1);
        for (i, c) in u.iter().enumerate() {
            v.add_term(MultiIndex::single(i + 1), c.clone());
        }
        v
    }

    pub fn from_terms(
        n: usize,
        k: usize,
        terms: impl IntoIterator<Item = (MultiIndex, S)>,
    ) -> Result<Self, AlgebraError> {
        let mut v = Self::zero(n, k);
        for (idx, c) in terms {
            if idx.len() != k {
                return Err(AlgebraError::GradeMismatch {
                    expected: k,
                    found: idx.len(),
                });
            }
            if idx.max_index() > n {
                return Err(AlgebraError::IndexOutOfRange {
                    index: idx.max_index(),
                    n,
                });
            }
            v.add_term(idx, c);
        }
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: MultiIndex) -> S {
        self.coeffs.get(&idx).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &S)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Components of a 1-vector (`e_1` first).
    pub fn components(&self) -> Vec<S> {
        (1..=self.n)
            .map(|i| self.coeff(MultiIndex::single(i)))
            .collect()
    }

    pub(crate) fn add_term(&mut self, idx: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(idx.len(), self.k);
        match self.coeffs.get_mut(&idx) {
            Some(x) => {
                *x = x.clone() + c;
                if x.is_zero() {
                    self.coeffs.remove(&idx);
                }
            }
            None => {
                self.coeffs.insert(idx, c);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.n != other.n {
            return Err(AlgebraError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.k != other.k {
            return Err(AlgebraError::GradeMismatch {
                expected: self.k,
                found: other.k,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n, self.k);
        for (i, x) in self.terms() {
            out.add_term(i, x.clone() * c.clone());
        }
        out
    }

    /// Exterior product; the sign comes from merging the sorted index lists.
    pub fn wedge(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.n != other.n {
            return Err(AlgebraError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.k + other.k > self.n {
            return Ok(Self::zero(self.n, self.k + other.k));
        }
        let mut out = Self::zero(self.n, self.k + other.k);
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                if let Some(s) = i.wedge_sign(j) {
                    let c = a.clone() * b.clone();
                    out.add_term(i.union(j), if s > 0 { c } else { -c });
                }
            }
        }
        Ok(out)
    }

    /// Mass: sum of absolute basis coefficients.
    pub fn mass(&self) -> S {
        self.coeffs.values().fold(S::zero(), |acc, c| acc + c.abs())
    }

    /// Euclidean inner product with orthonormal basis multi-indices.
    pub fn inner(&self, other: &Self) -> Result<S, AlgebraError> {
        self.check_same(other)?;
        let mut acc = S::zero();
        for (i, a) in self.terms() {
            if let Some(b) = other.coeffs.get(&i) {
                acc = acc + a.clone() * b.clone();
            }
        }
        Ok(acc)
    }

    /// `perp e_I = sgn(I, I^c) e_{I^c}`, so that `e_I ^ perp e_I = vol`.
    pub fn perp(&self) -> Self {
        let mut out = Self::zero(self.n, self.n - self.k);
        for (i, c) in self.terms() {
            let (j, s) = perp_basis(i, self.n);
            out.add_term(j, if s > 0 { c.clone() } else { -c.clone() });
        }
        out
    }

    /// Cross product `perp(a ^ b)`.
    pub fn cross(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.wedge(other)?.perp())
    }

    /// Intersection product `perp(perp a ^ perp b)`; needs `k_a + k_b >= n`.
    pub fn intersect(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.n != other.n {
            return Err(AlgebraError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.k + other.k < self.n {
            return Err(AlgebraError::GradeViolation(format!(
                "intersection needs k1 + k2 >= n, got {} + {} < {}",
                self.k, other.k, self.n
            )));
        }
        Ok(self.perp().wedge(&other.perp())?.perp())
    }

    /// Slant product `a / b`, the grade `k - m` vector with `b ^ (a / b) = a`
    /// whenever the direction of `b` lies in the direction of `a`.
    ///
    /// Computed as `s perp(b ^ perp a) / <b, b>` with `s = (-1)^((k-m)(n-k))`.
    pub fn slant(&self, beta: &Self) -> Result<Self, AlgebraError> {
        if self.n != beta.n {
            return Err(AlgebraError::DimensionMismatch {
                left: self.n,
                right: beta.n,
            });
        }
        if beta.is_zero() {
            return Err(AlgebraError::SlantByZero);
        }
        if beta.k > self.k {
            return Err(AlgebraError::GradeViolation(format!(
                "slant needs grade(beta) <= grade(alpha), got {} > {}",
                beta.k, self.k
            )));
        }
        let (n, k, m) = (self.n, self.k, beta.k);
        let norm2 = beta.inner(beta)?;
        let raw = beta.wedge(&self.perp())?.perp();
        let sign_odd = ((k - m) * (n - k)) % 2 == 1;
        let factor = if sign_odd { -S::one() } else { S::one() } / norm2;
        Ok(raw.scale(&factor))
    }

    /// Literal projection `perp(perp a cap b) cap b`; needs `grade(b) >= grade(a)`.
    pub fn project_onto(&self, beta: &Self) -> Result<Self, AlgebraError> {
        if beta.k < self.k {
            return Err(AlgebraError::GradeViolation(format!(
                "projection needs grade(beta) >= grade(alpha), got {} < {}",
                beta.k, self.k
            )));
        }
        self.perp().intersect(beta)?.perp().intersect(beta)
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> KVector<T> {
        let mut out = KVector::zero(self.n, self.k);
        for (i, c) in self.terms() {
            out.add_term(i, f(c));
        }
        out
    }

    pub fn to_f64(&self) -> KVector<f64> {
        self.map_scalars(|c| c.to_f64())
    }
}

/// Complement index and sign for the perp rule.
pub fn perp_basis(idx: MultiIndex, n: usize) -> (MultiIndex, i32) {
    let comp = idx.complement(n);
    (comp, idx.wedge_sign(comp).expect("complement is disjoint"))
}

/// Gram determinant `det(<w_i, w_j>)` of a list of vectors and its square root.
///
/// For a simple k-vector `w_1 ^ ... ^ w_k` the square root is the Euclidean mass.
pub fn gram_mass(vectors: &[Vec<f64>]) -> (f64, f64) {
    let k = vectors.len();
    let mut g = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
        }
    }
    let det = determinant(g);
    (det, det.max(0.0).sqrt())
}

pub(crate) fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for cc in c..n {
                a[r][cc] -= f * a[c][cc];
            }
        }
    }
    det
}

impl<S: Scalar> fmt::Display for KVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(i, c)| format!("{c}*{i}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn idx(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let e1 = KVector::<Q>::e(2, 1);
        let e2 = KVector::<Q>::e(2, 2);
        assert_eq!(e1.wedge(&e2).unwrap(), KVector::basis(2, idx(&[1, 2])));
        assert!(e1.wedge(&e1).unwrap().is_zero());
        let a = KVector::vector(&[q(2), q(3)]);
        let b = KVector::vector(&[q(4), q(5)]);
        assert_eq!(
            a.wedge(&b).unwrap(),
            KVector::basis_scaled(2, idx(&[1, 2]), q(-2))
        );
    }

    #[test]
    fn mass_examples() {
        let a =
            KVector::<Q>::from_terms(3, 2, [(idx(&[1, 2]), q(3)), (idx(&[1, 3]), q(-4))]).unwrap();
        assert_eq!(a.mass(), q(7));
        assert_eq!(KVector::<Q>::basis(3, idx(&[1, 2])).mass(), q(1));
        assert_eq!(KVector::<Q>::zero(3, 2).mass(), q(0));
    }

    #[test]
    fn perp_examples() {
        assert_eq!(
            KVector::<Q>::e(3, 1).perp(),
            KVector::basis(3, idx(&[2, 3]))
        );
        assert_eq!(KVector::<Q>::e(2, 1).perp().perp(), KVector::e(2, 1).neg());
        let e1 = KVector::<Q>::e(3, 1);
        assert_eq!(
            e1.wedge(&e1.perp()).unwrap(),
            KVector::basis(3, MultiIndex::full(3))
        );
    }

    #[test]
    fn perp_involution_sign_on_all_basis_indices() {
        for n in 0..=6 {
            for k in 0..=n {
                for i in MultiIndex::all_of_grade(n, k) {
                    let a = KVector::<Q>::basis(n, i);
                    let expected = if (k * (n - k)) % 2 == 0 {
                        a.clone()
                    } else {
                        a.neg()
                    };
                    assert_eq!(a.perp().perp(), expected, "n={n} I={i}");
                    assert_eq!(
                        a.wedge(&a.perp()).unwrap(),
                        KVector::basis(n, MultiIndex::full(n))
                    );
                }
            }
        }
    }

    #[test]
    fn inner_examples() {
        let e12 = KVector::<Q>::basis(3, idx(&[1, 2]));
        let e13 = KVector::<Q>::basis(3, idx(&[1, 3]));
        assert_eq!(e12.inner(&e12).unwrap(), q(1));
        assert_eq!(e12.inner(&e13).unwrap(), q(0));
        let a = e12.scale(&q(2)).add(&e13).unwrap();
        assert_eq!(a.inner(&e13).unwrap(), q(1));
        assert!(e12.inner(&KVector::e(3, 1)).is_err());
    }

    #[test]
    fn cross_and_intersection_in_r3() {
        let e1 = KVector::<Q>::e(3, 1);
        let e2 = KVector::<Q>::e(3, 2);
        assert_eq!(e1.cross(&e2).unwrap(), KVector::e(3, 3));
        let e12 = KVector::<Q>::basis(3, idx(&[1, 2]));
        let e23 = KVector::<Q>::basis(3, idx(&[2, 3]));
        assert_eq!(e12.intersect(&e23).unwrap(), KVector::e(3, 2));
        assert!(e1.intersect(&e2).is_err());
    }

    #[test]
    fn cross_matches_right_hand_rule_on_all_pairs() {
        // e_i x e_j = +e_k for cyclic (i, j, k)
        for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
            let a = KVector::<Q>::e(3, i);
            let b = KVector::<Q>::e(3, j);
            assert_eq!(a.cross(&b).unwrap(), KVector::e(3, k));
            assert_eq!(b.cross(&a).unwrap(), KVector::e(3, k).neg());
        }
    }

    #[test]
    fn slant_examples() {
        for n in 1..=4 {
            for k in 0..=n {
                for i in MultiIndex::all_of_grade(n, k) {
                    let a = KVector::<Q>::basis(n, i);
                    assert_eq!(
                        a.slant(&a).unwrap(),
                        KVector::scalar(n, Q::one()),
                        "n={n} I={i}"
                    );
                }
            }
        }
        for n in 2..=3 {
            let a = KVector::<Q>::basis(n, idx(&[1, 2]));
            let b = KVector::<Q>::e(n, 2);
            assert_eq!(b.wedge(&a.slant(&b).unwrap()).unwrap(), a);
        }
        assert!(matches!(
            KVector::<Q>::e(2, 1).slant(&KVector::zero(2, 1)),
            Err(AlgebraError::SlantByZero)
        ));
    }

    #[test]
    fn slant_recovers_left_factor_for_orthogonal_directions() {
        for n in 1..=4 {
            for km in 0..=n {
                for total in MultiIndex::all_of_grade(n, km) {
                    let parts: Vec<usize> = total.to_vec();
                    for split in 0..=parts.len() {
                        let b_idx = MultiIndex::new(&parts[..split]).unwrap();
                        let a_idx = MultiIndex::new(&parts[split..]).unwrap();
                        let a = KVector::<Q>::basis(n, a_idx);
                        let b = KVector::<Q>::basis_scaled(n, b_idx, q(3));
                        assert_eq!(b.wedge(&a).unwrap().slant(&b).unwrap(), a);
                    }
                }
            }
        }
    }

    #[test]
    fn projection_on_basis() {
        let e1 = KVector::<Q>::e(3, 1);
        let v = KVector::vector(&[q(2), q(5), q(-1)]);
        assert_eq!(v.project_onto(&e1).unwrap(), e1.scale(&q(2)));
        let e12 = KVector::<Q>::basis(3, idx(&[1, 2]));
        let w =
            KVector::<Q>::from_terms(3, 2, [(idx(&[1, 2]), q(4)), (idx(&[2, 3]), q(7))]).unwrap();
        assert_eq!(w.project_onto(&e12).unwrap(), e12.scale(&q(4)));
        // grade(beta) > grade(alpha): literal composition, sign pinned
        assert_eq!(e1.project_onto(&e12).unwrap(), e1.neg());
        assert!(KVector::<Q>::e(3, 3).project_onto(&e12).unwrap().is_zero());
    }

    #[test]
    fn gram_mass_of_simple_vectors() {
        let (det, m) = gram_mass(&[vec![1.0, 0.0, 0.0], vec![1.0, 2.0, 0.0]]);
        assert!((det - 4.0).abs() < 1e-12);
        assert!((m - 2.0).abs() < 1e-12);
        let (det, _) = gram_mass(&[vec![1.0, 1.0], vec![2.0, 2.0]]);
        assert!(det.abs() < 1e-12);
    }

    fn arb_kvector(n: usize, k: usize) -> impl Strategy<Value = KVector<Q>> {
        let basis = MultiIndex::all_of_grade(n, k);
        proptest::collection::vec(-5i64..=5, basis.len()).prop_map(move |cs| {
            KVector::from_terms(n, k, basis.iter().copied().zip(cs.into_iter().map(q))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn wedge_is_graded_commutative(a in arb_kvector(4, 1), b in arb_kvector(4, 2)) {
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            prop_assert_eq!(ab, ba);
        }

        #[test]
        fn wedge_is_associative(a in arb_kvector(4, 1), b in arb_kvector(4, 1), c in arb_kvector(4, 2)) {
            let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
            let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn mass_is_submultiplicative_under_wedge(a in arb_kvector(4, 2), b in arb_kvector(4, 1)) {
            prop_assert!(a.wedge(&b).unwrap().mass() <= a.mass() * b.mass());
        }

        #[test]
        fn perp_preserves_mass(a in arb_kvector(4, 2)) {
            prop_assert_eq!(a.perp().mass(), a.mass());
        }

        #[test]
        fn wedge_with_own_perp_is_squared_norm_times_volume(a in arb_kvector(3, 1)) {
            let expected = KVector::basis_scaled(3, MultiIndex::full(3), a.inner(&a).unwrap());
            prop_assert_eq!(a.wedge(&a.perp()).unwrap(), expected);
        }

        #[test]
        fn mass_zero_iff_zero(a in arb_kvector(3, 2)) {
            prop_assert_eq!(a.mass().is_zero(), a.is_zero());
        }
    }
}
