use std::fmt;

use smallvec::SmallVec;

/// Largest supported ambient dimension (multi-indices are bitmasks).
pub const MAX_DIM: usize = 31;

/// Strictly increasing list of basis indices `1..=n`, stored as a bitmask.
///
/// Bit `i - 1` is set when `e_i` is a factor. The derived order is colexicographic.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds from 1-based indices; `None` if any index is 0, too large, or repeated.
    pub fn new(indices: &[usize]) -> Option<Self> {
        let mut bits = 0u32;
        for &i in indices {
            if i == 0 || i > MAX_DIM || bits & (1 << (i - 1)) != 0 {
                return None;
            }
            bits |= 1 << (i - 1);
        }
        Some(MultiIndex(bits))
    }

    pub fn single(i: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&i), "basis index out of range");
        MultiIndex(1 << (i - 1))
    }

    /// `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_DIM);
        MultiIndex(((1u64 << n) - 1) as u32)
    }

    pub fn from_bits(bits: u32) -> Self {
        MultiIndex(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_DIM).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn is_subset_of(self, other: MultiIndex) -> bool {
        self.0 & !other.0 == 0
    }

    /// Largest index present (0 when empty).
    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// 1-based indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i + 1)
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn without(self, i: usize) -> Self {
        MultiIndex(self.0 & !(1 << (i - 1)))
    }

    pub fn union(self, other: MultiIndex) -> Self {
        MultiIndex(self.0 | other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        MultiIndex(MultiIndex::full(n).0 & !self.0)
    }

    /// Sign of `e_self ^ e_other`, or `None` when the indices collide.
    pub fn wedge_sign(self, other: MultiIndex) -> Option<i32> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        for j in other.iter() {
            // factors of `self` that are larger than j must move past e_j
            inversions += (self.0 >> j).count_ones();
        }
        Some(if inversions.is_multiple_of(2) { 1 } else { -1 })
    }

    /// Every multi-index of length `k` with entries in `1..=n`, in increasing order.
    pub fn all_of_grade(n: usize, k: usize) -> Vec<MultiIndex> {
        (0u32..(1u32 << n))
            .filter(|b| b.count_ones() as usize == k)
            .map(MultiIndex)
            .collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        write!(f, "e")?;
        let v = self.to_vec();
        if v.len() == 1 {
            write!(f, "{}", v[0])
        } else {
            let parts: Vec<String> = v.iter().map(|i| i.to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

/// Basis monomial of the symmetric algebra: a sorted multiset of 1-based basis indices.
///
/// The empty monomial is the unit of order 0; `[1, 2]` stands for `grad_e1 grad_e2`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SymMonomial(SmallVec<[u8; 6]>);

impl SymMonomial {
    pub fn unit() -> Self {
        SymMonomial(SmallVec::new())
    }

    pub fn new(indices: &[usize]) -> Option<Self> {
        if indices.iter().any(|&i| i == 0 || i > MAX_DIM) {
            return None;
        }
        let mut v: SmallVec<[u8; 6]> = indices.iter().map(|&i| i as u8).collect();
        v.sort_unstable();
        Some(SymMonomial(v))
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn max_index(&self) -> usize {
        self.0.last().map_or(0, |&i| i as usize)
    }

    pub fn times_basis(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&x| (x as usize) <= i);
        v.insert(pos, i as u8);
        SymMonomial(v)
    }

    pub fn times(&self, other: &SymMonomial) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        SymMonomial(v)
    }

    /// Distinct factors with multiplicities.
    pub fn powers(&self) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        for i in self.factors() {
            match out.last_mut() {
                Some((j, m)) if *j == i => *m += 1,
                _ => out.push((i, 1)),
            }
        }
        out
    }
}

impl fmt::Debug for SymMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SymMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors().map(|i| format!("d{i}")).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_sign_counts_inversions() {
        let e1 = MultiIndex::single(1);
        let e2 = MultiIndex::single(2);
        let e3 = MultiIndex::single(3);
        assert_eq!(e1.wedge_sign(e2), Some(1));
        assert_eq!(e2.wedge_sign(e1), Some(-1));
        assert_eq!(e1.wedge_sign(e1), None);
        let e23 = MultiIndex::new(&[2, 3]).unwrap();
        assert_eq!(e23.wedge_sign(e1), Some(1));
        assert_eq!(e3.wedge_sign(MultiIndex::new(&[1, 2]).unwrap()), Some(1));
        assert_eq!(e2.wedge_sign(MultiIndex::new(&[1, 3]).unwrap()), Some(-1));
    }

    #[test]
    fn multi_index_rejects_repeats_and_zero() {
        assert!(MultiIndex::new(&[1, 1]).is_none());
        assert!(MultiIndex::new(&[0]).is_none());
        assert_eq!(MultiIndex::new(&[3, 1]).unwrap().to_vec(), vec![1, 3]);
    }

    #[test]
    fn monomial_is_sorted_multiset() {
        let m = SymMonomial::new(&[2, 1, 2]).unwrap();
        assert_eq!(m.factors().collect::<Vec<_>>(), vec![1, 2, 2]);
        assert_eq!(
            m.times_basis(1).factors().collect::<Vec<_>>(),
            vec![1, 1, 2, 2]
        );
        assert_eq!(m.powers(), vec![(1, 1), (2, 2)]);
    }

    #[test]
    fn grade_enumeration_counts_binomials() {
        assert_eq!(MultiIndex::all_of_grade(4, 2).len(), 6);
        assert_eq!(MultiIndex::all_of_grade(3, 0), vec![MultiIndex::EMPTY]);
    }
}
