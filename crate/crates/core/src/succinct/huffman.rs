use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::{Error, Result};

/// Appends variable-length codes, most significant bit first.
#[derive(Clone, Debug, Default)]
pub struct BitWriter {
    words: Vec<u64>,
    len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn write(&mut self, code: u64, len: u8) {
        for k in (0..len).rev() {
            if self.len.is_multiple_of(64) {
                self.words.push(0);
            }
            if code >> k & 1 == 1 {
                self.words[self.len / 64] |= 1 << (self.len % 64);
            }
            self.len += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn finish(self) -> (Vec<u64>, usize) {
        (self.words, self.len)
    }
}

#[derive(Clone, Debug)]
pub struct BitReader<'a> {
    words: &'a [u64],
    len: usize,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(words: &'a [u64], len: usize, pos: usize) -> Self {
        Self { words, len, pos }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn read_bit(&mut self) -> Option<bool> {
        if self.pos >= self.len {
            return None;
        }
        let bit = self.words[self.pos / 64] >> (self.pos % 64) & 1 == 1;
        self.pos += 1;
        Some(bit)
    }
}

/// Canonical Huffman code over `u32` symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuffmanTable {
    /// `(symbol, code length)` sorted by symbol.
    lengths: Vec<(u32, u8)>,
    /// Symbols ordered by `(length, symbol)`, i.e. by canonical code.
    sorted: Vec<u32>,
    /// Per length `l` (index `l`): number of codes, first code, offset in `sorted`.
    count: Vec<u32>,
    first: Vec<u64>,
    offset: Vec<u32>,
    codes: HashMap<u32, (u64, u8)>,
}

impl HuffmanTable {
    /// Optimal code lengths for the nonzero entries of `freqs`.
    pub fn build(freqs: &[(u32, u64)]) -> Result<Self> {
        let mut leaves: Vec<(u32, u64)> = freqs.iter().copied().filter(|&(_, f)| f > 0).collect();
        if leaves.is_empty() {
            return Err(Error::EmptyFrequency);
        }
        leaves.sort_unstable();
        leaves.dedup_by_key(|l| l.0);
        if leaves.len() == 1 {
            return Self::from_lengths(vec![(leaves[0].0, 1)]);
        }
        // parent links over leaves followed by merged nodes
        let mut parent = vec![usize::MAX; 2 * leaves.len() - 1];
        let mut heap: BinaryHeap<Reverse<(u64, usize)>> =
            leaves.iter().enumerate().map(|(i, &(_, f))| Reverse((f, i))).collect();
        let mut next = leaves.len();
        while heap.len() > 1 {
            let Reverse((fa, a)) = heap.pop().unwrap();
            let Reverse((fb, b)) = heap.pop().unwrap();
            parent[a] = next;
            parent[b] = next;
            heap.push(Reverse((fa + fb, next)));
            next += 1;
        }
        let mut depth = vec![0u8; parent.len()];
        for v in (0..parent.len() - 1).rev() {
            depth[v] = depth[parent[v]] + 1;
        }
        Self::from_lengths(leaves.iter().enumerate().map(|(i, &(s, _))| (s, depth[i])).collect())
    }

    /// Canonical code from per-symbol lengths.
    pub fn from_lengths(mut lengths: Vec<(u32, u8)>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::EmptyFrequency);
        }
        lengths.sort_unstable();
        if lengths.windows(2).any(|w| w[0].0 == w[1].0) || lengths.iter().any(|&(_, l)| l == 0 || l > 64) {
            return Err(Error::Format("invalid huffman code lengths".into()));
        }
        let kraft: u128 = lengths.iter().map(|&(_, l)| 1u128 << (64 - l)).sum();
        if kraft > 1u128 << 64 {
            return Err(Error::Format("huffman code lengths violate the Kraft inequality".into()));
        }
        let max_len = lengths.iter().map(|&(_, l)| l).max().unwrap() as usize;
        let mut sorted: Vec<(u8, u32)> = lengths.iter().map(|&(s, l)| (l, s)).collect();
        sorted.sort_unstable();
        let mut count = vec![0u32; max_len + 1];
        for &(l, _) in &sorted {
            count[l as usize] += 1;
        }
        let mut first = vec![0u64; max_len + 1];
        let mut offset = vec![0u32; max_len + 1];
        let mut code = 0u64;
        let mut off = 0u32;
        for l in 1..=max_len {
            first[l] = code;
            offset[l] = off;
            code = (code + count[l] as u64) << 1;
            off += count[l];
        }
        let mut codes = HashMap::with_capacity(sorted.len());
        for l in 1..=max_len {
            let start = offset[l] as usize;
            for k in 0..count[l] as usize {
                codes.insert(sorted[start + k].1, (first[l] + k as u64, l as u8));
            }
        }
        Ok(Self {
            lengths,
            sorted: sorted.into_iter().map(|(_, s)| s).collect(),
            count,
            first,
            offset,
            codes,
        })
    }

    pub fn lengths(&self) -> &[(u32, u8)] {
        &self.lengths
    }

    pub fn code(&self, symbol: u32) -> Option<(u64, u8)> {
        self.codes.get(&symbol).copied()
    }

    pub fn encode_into(&self, symbol: u32, out: &mut BitWriter) -> Result<()> {
        let (code, len) = self
            .code(symbol)
            .ok_or(Error::OutOfRange { what: "huffman symbol", index: symbol as usize, limit: self.sorted.len() })?;
        out.write(code, len);
        Ok(())
    }

    pub fn decode_one(&self, reader: &mut BitReader<'_>) -> Option<u32> {
        let mut code = 0u64;
        for l in 1..self.count.len() {
            code = code << 1 | reader.read_bit()? as u64;
            let c = code.wrapping_sub(self.first[l]);
            if code >= self.first[l] && c < self.count[l] as u64 {
                return Some(self.sorted[(self.offset[l] as u64 + c) as usize]);
            }
        }
        None
    }

    pub fn encode(&self, symbols: &[u32]) -> Result<(Vec<u64>, usize)> {
        let mut w = BitWriter::new();
        for &s in symbols {
            self.encode_into(s, &mut w)?;
        }
        Ok(w.finish())
    }

    pub fn decode(&self, words: &[u64], len: usize, count: usize) -> Option<Vec<u32>> {
        let mut r = BitReader::new(words, len, 0);
        (0..count).map(|_| self.decode_one(&mut r)).collect()
    }
}
