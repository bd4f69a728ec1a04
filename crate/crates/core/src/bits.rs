//! Word-packed bitsets and square bit matrices.
//!
//! Everything downstream (ideal enumeration, matching, coloring, homomorphism
//! search) works on these rows directly, so the word layout is public.

use std::fmt;

const WORD: usize = 64;

#[inline]
pub fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A fixed-capacity set of `usize` values in `[0, len)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = BitSet::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        BitSet { len, words }
    }

    pub fn from_iter_with_len<I: IntoIterator<Item = usize>>(len: usize, it: I) -> Self {
        let mut s = BitSet::new(len);
        for i in it {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn intersect_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a |= b;
        }
    }

    pub fn intersects(&self, other: &[u64]) -> bool {
        intersects(&self.words, other)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        is_subset(&self.words, &other.words)
    }

    pub fn first(&self) -> Option<usize> {
        first_set(&self.words)
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones::new(&self.words)
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[inline]
pub fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

#[inline]
pub fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

#[inline]
pub fn popcount(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub fn first_set(a: &[u64]) -> Option<usize> {
    a.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
}

#[inline]
pub fn test_bit(a: &[u64], i: usize) -> bool {
    a[i / WORD] >> (i % WORD) & 1 == 1
}

#[inline]
pub fn set_bit(a: &mut [u64], i: usize) {
    a[i / WORD] |= 1 << (i % WORD);
}

/// Iterator over the set bits of a word slice, ascending.
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        Ones {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + t);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// `rows` rows of `cols` bits each, stored contiguously.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn square(n: usize) -> Self {
        BitMatrix::new(n, n)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// The whole backing store, rows laid out back to back.
    pub fn data_mut(&mut self) -> &mut [u64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        test_bit(self.row(r), c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        let s = self.stride;
        set_bit(&mut self.data[r * s..(r + 1) * s], c);
    }

    pub fn row_set(&self, r: usize) -> BitSet {
        BitSet::from_words(self.cols, self.row(r).to_vec())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.cols, self.rows);
        for r in 0..self.rows {
            for c in Ones::new(self.row(r)) {
                t.set(c, r);
            }
        }
        t
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for r in 0..self.rows {
            l.entry(&Ones::new(self.row(r)).collect::<Vec<_>>());
        }
        l.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_spans_words() {
        let s = BitSet::from_iter_with_len(200, [0, 63, 64, 130, 199]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(s.count(), 5);
        assert_eq!(s.first(), Some(0));
    }

    #[test]
    fn transpose_round_trips() {
        let mut m = BitMatrix::new(3, 70);
        m.set(0, 69);
        m.set(2, 1);
        let t = m.transpose();
        assert!(t.get(69, 0) && t.get(1, 2));
        assert_eq!(t.transpose(), m);
    }
}
