//! Minimal fixed-capacity bit set and symmetric bit matrix.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    capacity: usize,
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        Self {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
        }
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.capacity);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.capacity);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.capacity);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Intersection with a raw word slice of the same capacity.
    pub fn and_words(&self, other: &[u64]) -> BitSet {
        debug_assert_eq!(self.words.len(), other.len());
        BitSet {
            words: self
                .words
                .iter()
                .zip(other)
                .map(|(a, b)| a & b)
                .collect(),
            capacity: self.capacity,
        }
    }

    pub fn intersection_count(&self, other: &[u64]) -> usize {
        self.words
            .iter()
            .zip(other)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Clears every bit at index `i` or below.
    pub fn clear_upto(&mut self, i: usize) {
        debug_assert!(i < self.capacity);
        let word = i / 64;
        for w in &mut self.words[..word] {
            *w = 0;
        }
        let keep_from = i % 64 + 1;
        if keep_from < 64 {
            self.words[word] &= !0u64 << keep_from;
        } else {
            self.words[word] = 0;
        }
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + bit)
                }
            })
        })
    }

}

/// Symmetric irreflexive adjacency matrix over `n` vertices, bit-packed by
/// row so neighbor sets can be intersected word-wise.
#[derive(Debug, Clone)]
pub(crate) struct BitMatrix {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64).max(1);
        Self {
            n,
            words_per_row,
            bits: vec![0; words_per_row * n],
        }
    }

    pub fn set_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i != j && i < self.n && j < self.n);
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
        self.bits[j * self.words_per_row + i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.n && j < self.n);
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    /// Neighbor row of `i` as raw words.
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + bit)
                }
            })
        })
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbor_set(&self, i: usize) -> BitSet {
        BitSet {
            words: self.row(i).to_vec(),
            capacity: self.n,
        }
    }
}
