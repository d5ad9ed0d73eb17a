//! Dense bit-matrix with 64-bit row words, the backing store for adjacency.
//!
//! Row operations (AND/OR across whole rows) are the hot path of candidate
//! selection, so rows are kept word-aligned and operated on in bulk.

/// Square bit matrix, row-major, each row padded to whole `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        BitMatrix {
            n,
            words_per_row,
            data: vec![0; n * words_per_row],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.n && col < self.n);
        let w = self.data[row * self.words_per_row + col / 64];
        (w >> (col % 64)) & 1 == 1
    }

    /// Sets a bit and reports whether it was previously clear.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.n && col < self.n);
        let w = &mut self.data[row * self.words_per_row + col / 64];
        let mask = 1u64 << (col % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[u64] {
        let start = row * self.words_per_row;
        &self.data[start..start + self.words_per_row]
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }
}

/// Indices of the set bits in a word slice, up to `n` columns.
pub(crate) fn iter_ones(words: &[u64], n: usize) -> impl Iterator<Item = usize> + '_ {
    words
        .iter()
        .enumerate()
        .flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + bit)
                }
            })
        })
        .filter(move |&i| i < n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip() {
        let mut m = BitMatrix::new(70);
        assert!(m.set(3, 65));
        assert!(!m.set(3, 65));
        assert!(m.get(3, 65));
        assert!(!m.get(65, 3));
    }

    #[test]
    fn iter_ones_crosses_word_boundary() {
        let mut m = BitMatrix::new(130);
        for c in [0, 63, 64, 129] {
            m.set(5, c);
        }
        let ones: Vec<usize> = iter_ones(m.row(5), 130).collect();
        assert_eq!(ones, vec![0, 63, 64, 129]);
    }
}
