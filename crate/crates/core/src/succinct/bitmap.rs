use crate::error::{Error, Result};

const WORDS_PER_BLOCK: usize = 8;
const SELECT_SAMPLE: usize = 512;

/// Appends bits into 64-bit little-endian words.
#[derive(Clone, Debug, Default)]
pub struct BitBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_len(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(64) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / 64] |= 1 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn build(self) -> RankBitmap {
        RankBitmap::from_words(self.words, self.len)
    }
}

/// Plain bitmap with block-sampled rank and sampled select.
///
/// `rank1(i)` counts ones in `bits[0..i)`. `select1(j)` returns the 0-based
/// position of the `j`-th one (`j >= 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBitmap {
    words: Vec<u64>,
    len: usize,
    /// Ones before each block of `WORDS_PER_BLOCK` words.
    blocks: Vec<u64>,
    /// Block holding every `SELECT_SAMPLE`-th one / zero.
    ones_samples: Vec<u32>,
    zeros_samples: Vec<u32>,
    ones: usize,
}

impl RankBitmap {
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(64), 0);
        if !len.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        let mut blocks = Vec::with_capacity(words.len() / WORDS_PER_BLOCK + 2);
        let mut ones_samples = Vec::new();
        let mut zeros_samples = Vec::new();
        let mut acc = 0usize;
        for (b, chunk) in words.chunks(WORDS_PER_BLOCK).enumerate() {
            blocks.push(acc as u64);
            let in_block: usize = chunk.iter().map(|w| w.count_ones() as usize).sum();
            let zeros_before = b * WORDS_PER_BLOCK * 64 - acc;
            let block_bits = (len - b * WORDS_PER_BLOCK * 64).min(WORDS_PER_BLOCK * 64);
            let zeros_in = block_bits - in_block;
            while ones_samples.len() * SELECT_SAMPLE < acc + in_block {
                ones_samples.push(b as u32);
            }
            while zeros_samples.len() * SELECT_SAMPLE < zeros_before + zeros_in {
                zeros_samples.push(b as u32);
            }
            acc += in_block;
        }
        blocks.push(acc as u64);
        Self { words, len, blocks, ones_samples, zeros_samples, ones: acc }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut b = BitBuilder::new();
        bits.into_iter().for_each(|x| b.push(x));
        b.build()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn try_get(&self, i: usize) -> Result<bool> {
        if i >= self.len {
            return Err(Error::OutOfRange { what: "bit", index: i, limit: self.len });
        }
        Ok(self.get(i))
    }

    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let w = i / 64;
        let block = w / WORDS_PER_BLOCK;
        let mut r = self.blocks[block] as usize;
        for word in &self.words[block * WORDS_PER_BLOCK..w] {
            r += word.count_ones() as usize;
        }
        if !i.is_multiple_of(64) {
            r += (self.words[w] & ((1u64 << (i % 64)) - 1)).count_ones() as usize;
        }
        r
    }

    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    pub fn try_rank1(&self, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::OutOfRange { what: "rank position", index: i, limit: self.len });
        }
        Ok(self.rank1(i))
    }

    pub fn select1(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.ones {
            return None;
        }
        let ones_before = |b: usize| self.blocks[b] as usize;
        Some(self.select_impl(j, &self.ones_samples, ones_before, |w| w))
    }

    pub fn select0(&self, j: usize) -> Option<usize> {
        if j == 0 || j > self.count_zeros() {
            return None;
        }
        let zeros_before = |b: usize| b * WORDS_PER_BLOCK * 64 - self.blocks[b] as usize;
        Some(self.select_impl(j, &self.zeros_samples, zeros_before, |w| !w))
    }

    fn select_impl(
        &self,
        j: usize,
        samples: &[u32],
        before: impl Fn(usize) -> usize,
        view: impl Fn(u64) -> u64,
    ) -> usize {
        let s = (j - 1) / SELECT_SAMPLE;
        let mut lo = samples[s] as usize;
        let mut hi = samples.get(s + 1).map_or(self.blocks.len() - 2, |&b| b as usize);
        // last block whose count-before is < j
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if before(mid) < j {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let mut remaining = j - before(lo);
        let mut w = lo * WORDS_PER_BLOCK;
        loop {
            let word = view(self.words[w]);
            let c = word.count_ones() as usize;
            if remaining <= c {
                return w * 64 + select_in_word(word, remaining);
            }
            remaining -= c;
            w += 1;
        }
    }
}

fn select_in_word(mut word: u64, mut k: usize) -> usize {
    while k > 1 {
        word &= word - 1;
        k -= 1;
    }
    word.trailing_zeros() as usize
}
