//! Dense bit-matrix binary relations over an indexed domain `0..size`.

use smallvec::SmallVec;
use std::fmt;

/// A binary relation over the domain `0..size`, stored row-major as bitsets.
///
/// Structures up to 16 elements keep their bits inline, which is what the
/// exhaustive checkers hammer on.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    size: usize,
    words: usize,
    bits: SmallVec<[u64; 16]>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        let words = size.div_ceil(64).max(1);
        Relation {
            size,
            words,
            bits: SmallVec::from_elem(0, words * size),
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut r = Self::empty(size);
        for i in 0..size {
            r.insert(i, i);
        }
        r
    }

    pub fn full(size: usize) -> Self {
        let mut r = Self::empty(size);
        for i in 0..size {
            let row = r.row_mut(i);
            row.iter_mut().for_each(|w| *w = !0);
        }
        r.mask_tail();
        r
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(size: usize, pairs: I) -> Self {
        let mut r = Self::empty(size);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    /// Number of elements of the underlying domain.
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        let w = self.words;
        &mut self.bits[i * w..(i + 1) * w]
    }

    fn mask_tail(&mut self) {
        let rem = self.size % 64;
        if rem == 0 {
            return;
        }
        let mask = (1u64 << rem) - 1;
        for i in 0..self.size {
            let w = self.words;
            self.bits[i * w + w - 1] &= mask;
        }
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        debug_assert!(a < self.size && b < self.size);
        self.bits[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, a: usize, b: usize) {
        assert!(a < self.size && b < self.size, "pair ({a}, {b}) outside domain of size {}", self.size);
        self.bits[a * self.words + b / 64] |= 1 << (b % 64);
    }

    #[inline]
    pub fn remove(&mut self, a: usize, b: usize) {
        self.bits[a * self.words + b / 64] &= !(1 << (b % 64));
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Whether element `a` has at least one outgoing pair.
    #[inline]
    pub fn has_successor(&self, a: usize) -> bool {
        self.row(a).iter().any(|&w| w != 0)
    }

    /// Number of outgoing pairs of `a`.
    pub fn out_degree(&self, a: usize) -> usize {
        self.row(a).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, b: usize) -> usize {
        (0..self.size).filter(|&a| self.contains(a, b)).count()
    }

    /// Successors of `a` in increasing index order.
    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(a).iter().enumerate().flat_map(|(wi, &w)| BitIter(w).map(move |b| wi * 64 + b))
    }

    /// The unique successor of `a`, if `a` has exactly one.
    pub fn image(&self, a: usize) -> Option<usize> {
        let mut it = self.successors(a);
        let first = it.next()?;
        match it.next() {
            None => Some(first),
            Some(_) => None,
        }
    }

    pub fn predecessors(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&a| self.contains(a, b))
    }

    /// All pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |a| self.successors(a).map(move |b| (a, b)))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.same_size(other);
        self.bits.iter().zip(other.bits.iter()).all(|(a, b)| a & !b == 0)
    }

    /// Every element has at most one successor.
    pub fn is_partial_function(&self) -> bool {
        (0..self.size).all(|a| self.out_degree(a) <= 1)
    }

    /// Every element has exactly one successor.
    pub fn is_total_function(&self) -> bool {
        (0..self.size).all(|a| self.out_degree(a) == 1)
    }

    /// Partial function whose converse is also a partial function.
    pub fn is_injective_partial_function(&self) -> bool {
        if !self.is_partial_function() {
            return false;
        }
        let mut hit = vec![false; self.size];
        for (_, b) in self.pairs() {
            if hit[b] {
                return false;
            }
            hit[b] = true;
        }
        true
    }

    fn same_size(&self, other: &Relation) {
        assert_eq!(self.size, other.size, "relations over different domains");
    }

    fn zip_with(&self, other: &Relation, f: impl Fn(u64, u64) -> u64) -> Relation {
        self.same_size(other);
        let mut out = self.clone();
        for (o, &b) in out.bits.iter_mut().zip(other.bits.iter()) {
            *o = f(*o, b);
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Relation {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Relation) -> Relation {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Complement relative to `dom²`.
    pub fn complement(&self) -> Relation {
        let mut out = self.clone();
        out.bits.iter_mut().for_each(|w| *w = !*w);
        out.mask_tail();
        out
    }

    pub fn converse(&self) -> Relation {
        let mut out = Relation::empty(self.size);
        for (a, b) in self.pairs() {
            out.insert(b, a);
        }
        out
    }

    /// Relational composition `self ∘ other` (first `self`, then `other`).
    pub fn compose(&self, other: &Relation) -> Relation {
        self.same_size(other);
        let mut out = Relation::empty(self.size);
        let w = self.words;
        for a in 0..self.size {
            for k in self.successors(a) {
                for j in 0..w {
                    out.bits[a * w + j] |= other.bits[k * w + j];
                }
            }
        }
        out
    }

    /// `D(R) = {(x,x) | ∃y R(x,y)}`.
    pub fn domain(&self) -> Relation {
        let mut out = Relation::empty(self.size);
        for a in 0..self.size {
            if self.has_successor(a) {
                out.insert(a, a);
            }
        }
        out
    }

    /// `R(R) = {(y,y) | ∃x R(x,y)}`.
    pub fn range(&self) -> Relation {
        let mut acc: SmallVec<[u64; 4]> = SmallVec::from_elem(0, self.words);
        for a in 0..self.size {
            for (j, &w) in self.row(a).iter().enumerate() {
                acc[j] |= w;
            }
        }
        let mut out = Relation::empty(self.size);
        for (j, &w) in acc.iter().enumerate() {
            for b in BitIter(w) {
                out.insert(j * 64 + b, j * 64 + b);
            }
        }
        out
    }

    /// `~R = {(x,x) | ¬∃y R(x,y)}`.
    pub fn antidomain(&self) -> Relation {
        let mut out = Relation::empty(self.size);
        for a in 0..self.size {
            if !self.has_successor(a) {
                out.insert(a, a);
            }
        }
        out
    }

    /// Right semijoin `{(x,y) ∈ R | ∃z S(y,z)}`.
    pub fn semijoin(&self, other: &Relation) -> Relation {
        self.same_size(other);
        let mut mask: SmallVec<[u64; 4]> = SmallVec::from_elem(0, self.words);
        for b in 0..self.size {
            if other.has_successor(b) {
                mask[b / 64] |= 1 << (b % 64);
            }
        }
        let mut out = self.clone();
        for a in 0..self.size {
            for (j, w) in out.row_mut(a).iter_mut().enumerate() {
                *w &= mask[j];
            }
        }
        out
    }

    /// Preferential union `R ∪ {(x,y) ∈ S | ¬∃z R(x,z)}`.
    pub fn preferential_union(&self, other: &Relation) -> Relation {
        self.same_size(other);
        let mut out = self.clone();
        for a in 0..self.size {
            if !self.has_successor(a) {
                let w = self.words;
                out.bits[a * w..(a + 1) * w].copy_from_slice(other.row(a));
            }
        }
        out
    }

    /// Injective union, by its defining term `(R ⊔ S) ∩ (R˘ ⊔ S˘)˘`.
    pub fn injective_union(&self, other: &Relation) -> Relation {
        let forward = self.preferential_union(other);
        let backward = self.converse().preferential_union(&other.converse()).converse();
        forward.intersection(&backward)
    }

    /// Relabels through `map`: pair `(a,b)` becomes `(map[a], map[b])` over a domain of `size`.
    /// Pairs whose endpoints map to `None` are dropped.
    pub fn remap(&self, map: &[Option<usize>], size: usize) -> Relation {
        let mut out = Relation::empty(size);
        for (a, b) in self.pairs() {
            if let (Some(x), Some(y)) = (map[a], map[b]) {
                out.insert(x, y);
            }
        }
        out
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// Iterates the set bit positions of a word, low to high.
struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(tz)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(n: usize, pairs: &[(usize, usize)]) -> Relation {
        Relation::from_pairs(n, pairs.iter().copied())
    }

    #[test]
    fn antidomain_of_single_edge() {
        let r = rel(2, &[(0, 1)]);
        assert_eq!(r.antidomain(), rel(2, &[(1, 1)]));
    }

    #[test]
    fn preferential_union_keeps_left_rows() {
        let r = rel(3, &[(0, 1)]);
        let s = rel(3, &[(0, 2), (1, 2)]);
        assert_eq!(r.preferential_union(&s), rel(3, &[(0, 1), (1, 2)]));
    }

    #[test]
    fn injective_union_rejects_colliding_target() {
        // f = {(1,1)}, g = {(2,1),(3,4)} shifted to zero-based indices.
        let f = rel(4, &[(0, 0)]);
        let g = rel(4, &[(1, 0), (2, 3)]);
        assert_eq!(f.injective_union(&g), rel(4, &[(0, 0), (2, 3)]));
    }

    #[test]
    fn complement_masks_past_domain() {
        let r = Relation::empty(3).complement();
        assert_eq!(r.len(), 9);
        let big = Relation::empty(70).complement();
        assert_eq!(big.len(), 4900);
    }

    #[test]
    fn compose_wide_domain() {
        let r = rel(130, &[(0, 65), (65, 129)]);
        assert_eq!(r.compose(&r), rel(130, &[(0, 129)]));
    }

    #[test]
    fn function_predicates() {
        assert!(rel(3, &[(0, 1), (1, 1)]).is_partial_function());
        assert!(!rel(3, &[(0, 1), (1, 1)]).is_injective_partial_function());
        assert!(!rel(2, &[(0, 1)]).is_total_function());
        assert!(rel(2, &[(0, 1), (1, 0)]).is_total_function());
        assert!(!rel(2, &[(0, 1), (0, 0)]).is_partial_function());
    }

    #[test]
    fn range_and_domain() {
        let r = rel(3, &[(0, 2), (1, 2)]);
        assert_eq!(r.range(), rel(3, &[(2, 2)]));
        assert_eq!(r.domain(), rel(3, &[(0, 0), (1, 1)]));
        assert_eq!(r.semijoin(&rel(3, &[(2, 0)])), r);
        assert!(r.semijoin(&rel(3, &[(1, 0)])).is_empty());
    }
}
