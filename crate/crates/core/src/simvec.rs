// SPDX-License-Identifier: Apache-2.0

/// Bits per simulation word.
pub const WORD_BITS: usize = 64;

/// A bit-parallel value block; bit `t` carries the value under pattern `t`.
///
/// Bits past `len_bits` in the last word are always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimVector {
    words: Vec<u64>,
    len_bits: usize,
}

impl SimVector {
    pub fn zeros(len_bits: usize) -> SimVector {
        SimVector {
            words: vec![0; len_bits.div_ceil(WORD_BITS)],
            len_bits,
        }
    }

    pub fn ones(len_bits: usize) -> SimVector {
        let mut v = SimVector {
            words: vec![!0; len_bits.div_ceil(WORD_BITS)],
            len_bits,
        };
        v.clear_padding();
        v
    }

    pub fn from_words(mut words: Vec<u64>, len_bits: usize) -> SimVector {
        assert!(len_bits <= words.len() * WORD_BITS);
        words.truncate(len_bits.div_ceil(WORD_BITS));
        let mut v = SimVector { words, len_bits };
        v.clear_padding();
        v
    }

    /// Mask of the valid bits in the last word.
    pub fn tail_mask(len_bits: usize) -> u64 {
        match len_bits % WORD_BITS {
            0 => !0,
            r => (1u64 << r) - 1,
        }
    }

    fn clear_padding(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= Self::tail_mask(self.len_bits);
        }
    }

    pub fn len_bits(&self) -> usize {
        self.len_bits
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, bit: usize) -> bool {
        assert!(bit < self.len_bits);
        self.words[bit / WORD_BITS] >> (bit % WORD_BITS) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_set_bit(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * WORD_BITS + self.words[i].trailing_zeros() as usize)
    }

    pub fn and(&self, other: &SimVector) -> SimVector {
        assert_eq!(self.len_bits, other.len_bits);
        SimVector {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            len_bits: self.len_bits,
        }
    }

    pub fn not(&self) -> SimVector {
        let mut v = SimVector {
            words: self.words.iter().map(|w| !w).collect(),
            len_bits: self.len_bits,
        };
        v.clear_padding();
        v
    }

    /// Renders bits as a string, bit 0 rightmost.
    pub fn to_bit_string(&self) -> String {
        (0..self.len_bits)
            .rev()
            .map(|b| if self.get(b) { '1' } else { '0' })
            .collect()
    }
}
