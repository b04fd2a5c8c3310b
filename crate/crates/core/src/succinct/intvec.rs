/// Fixed-width packed unsigned integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntVec {
    words: Vec<u64>,
    width: u32,
    len: usize,
}

impl IntVec {
    /// Smallest width able to hold `max` (at least 1 bit).
    pub fn width_for(max: u64) -> u32 {
        (64 - max.leading_zeros()).max(1)
    }

    /// `len` zeros of `width` bits.
    pub fn zeros(len: usize, width: u32) -> Self {
        assert!((1..=64).contains(&width));
        Self { words: vec![0; (len * width as usize).div_ceil(64)], width, len }
    }

    pub fn from_slice(values: &[u64], width: u32) -> Self {
        let mut v = Self::zeros(values.len(), width);
        for (i, &x) in values.iter().enumerate() {
            v.set(i, x);
        }
        v
    }

    pub fn from_raw(words: Vec<u64>, width: u32, len: usize) -> Option<Self> {
        if !(1..=64).contains(&width) || words.len() != (len * width as usize).div_ceil(64) {
            return None;
        }
        Some(Self { words, width, len })
    }

    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1 << self.width) - 1
        }
    }

    /// Stores the low `width` bits of `x` at `i`.
    pub fn set(&mut self, i: usize, x: u64) {
        debug_assert!(i < self.len);
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        let mask = self.mask();
        let x = x & mask;
        self.words[w] = (self.words[w] & !(mask << off)) | (x << off);
        if off + self.width as usize > 64 {
            let hi = 64 - off;
            self.words[w + 1] = (self.words[w + 1] & !(mask >> hi)) | (x >> hi);
        }
    }

    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        let bit = i * self.width as usize;
        let (w, off) = (bit / 64, bit % 64);
        let mut x = self.words[w] >> off;
        if off + self.width as usize > 64 {
            x |= self.words[w + 1] << (64 - off);
        }
        x & self.mask()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}
