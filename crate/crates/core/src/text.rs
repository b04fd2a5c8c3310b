//! Domain types shared by every stage: alphabets, read collections and the
//! integer symbol strings the parser works on.

use crate::error::{Error, Result};

/// Integer symbol. Terminals occupy `1..=sigma`, nonterminals follow.
pub type Symbol = u32;

pub const SENTINEL_BYTE: u8 = b'$';
pub const SENTINEL: Symbol = 1;

/// Ordered terminal alphabet. Code 1 is always the sentinel, the remaining
/// bytes get codes `2..=sigma` in ascending byte order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<u8>,
    codes: [Symbol; 256],
}

impl Alphabet {
    pub fn build<R: AsRef<[u8]>>(reads: &[R]) -> Result<Self> {
        if reads.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut seen = [false; 256];
        for (i, read) in reads.iter().enumerate() {
            for &b in read.as_ref() {
                if b == SENTINEL_BYTE || b == 0 {
                    return Err(Error::ReservedByte { read: i, byte: b });
                }
                seen[b as usize] = true;
            }
        }
        let bytes = (1..=255u8).filter(|&b| seen[b as usize]);
        Ok(Self::from_symbols(std::iter::once(SENTINEL_BYTE).chain(bytes).collect()))
    }

    /// Rebuilds an alphabet from its symbol list (sentinel first).
    pub fn from_symbols(symbols: Vec<u8>) -> Self {
        let mut codes = [0; 256];
        for (i, &b) in symbols.iter().enumerate() {
            codes[b as usize] = i as Symbol + 1;
        }
        Self { symbols, codes }
    }

    pub fn sigma(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn code(&self, byte: u8) -> Option<Symbol> {
        match self.codes[byte as usize] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn byte(&self, code: Symbol) -> Option<u8> {
        self.symbols.get((code as usize).checked_sub(1)?).copied()
    }
}

/// Multiset of reads, kept in input order. Duplicates stay distinct members.
#[derive(Clone, Debug)]
pub struct ReadCollection {
    alphabet: Alphabet,
    reads: Vec<Vec<u8>>,
}

impl ReadCollection {
    pub fn new(reads: Vec<Vec<u8>>) -> Result<Self> {
        let alphabet = Alphabet::build(&reads)?;
        if let Some(i) = reads.iter().position(|r| r.is_empty()) {
            return Err(Error::EmptyRead(i));
        }
        Ok(Self { alphabet, reads })
    }

    pub fn from_strs(reads: &[&str]) -> Result<Self> {
        Self::new(reads.iter().map(|r| r.as_bytes().to_vec()).collect())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn reads(&self) -> &[Vec<u8>] {
        &self.reads
    }

    pub fn m(&self) -> usize {
        self.reads.len()
    }

    /// Total length counting one sentinel per read.
    pub fn n(&self) -> usize {
        self.reads.iter().map(|r| r.len() + 1).sum()
    }

    /// Read `j` (0-based) in code space, sentinel appended.
    pub fn encoded(&self, j: usize) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self.reads[j]
            .iter()
            .map(|&b| self.alphabet.code(b).expect("alphabet covers reads"))
            .collect();
        out.push(SENTINEL);
        out
    }

    /// `T1$T2$...Tm$` in code space.
    pub fn concatenate(&self) -> SymbolString {
        let mut symbols = Vec::with_capacity(self.n());
        let mut ends = Vec::with_capacity(self.m());
        for j in 0..self.m() {
            symbols.extend(self.encoded(j));
            ends.push(symbols.len());
        }
        SymbolString { symbols, ends, level: 1 }
    }
}

/// A parse level: symbols plus the exclusive end offset of each string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolString {
    pub symbols: Vec<Symbol>,
    pub ends: Vec<usize>,
    pub level: usize,
}

impl SymbolString {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Iterates the per-string slices.
    pub fn strings(&self) -> impl Iterator<Item = &[Symbol]> + '_ {
        let mut start = 0;
        self.ends.iter().map(move |&end| {
            let s = &self.symbols[start..end];
            start = end;
            s
        })
    }
}

/// Output transform over terminal codes; every sentinel is code 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EbwtString {
    pub chars: Vec<Symbol>,
}

impl EbwtString {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn sentinel_count(&self) -> usize {
        self.chars.iter().filter(|&&c| c == SENTINEL).count()
    }

    pub fn to_bytes(&self, alphabet: &Alphabet) -> Vec<u8> {
        self.chars
            .iter()
            .map(|&c| alphabet.byte(c).expect("code inside alphabet"))
            .collect()
    }

    /// Maximal runs as `(code, length)`.
    pub fn runs(&self) -> Vec<(Symbol, u32)> {
        let mut runs: Vec<(Symbol, u32)> = Vec::new();
        for &c in &self.chars {
            match runs.last_mut() {
                Some((s, len)) if *s == c && *len < u32::MAX => *len += 1,
                _ => runs.push((c, 1)),
            }
        }
        runs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_orders_bytes_after_sentinel() {
        let a = Alphabet::build(&["ACGT"]).unwrap();
        assert_eq!(a.sigma(), 5);
        for (b, c) in [(b'$', 1), (b'A', 2), (b'C', 3), (b'G', 4), (b'T', 5)] {
            assert_eq!(a.code(b), Some(c));
            assert_eq!(a.byte(c), Some(b));
        }
        assert_eq!(Alphabet::build(&["AA"]).unwrap().sigma(), 2);
        let dna = Alphabet::build(&["ACGTN", "NNA"]).unwrap();
        assert_eq!(dna.sigma(), 6);
    }

    #[test]
    fn alphabet_rejects_reserved_and_empty() {
        assert!(matches!(Alphabet::build::<&str>(&[]), Err(Error::EmptyInput)));
        assert!(matches!(
            Alphabet::build(&["AC$"]),
            Err(Error::ReservedByte { read: 0, byte: b'$' })
        ));
        assert!(matches!(
            Alphabet::build(&[&b"A\0"[..]]),
            Err(Error::ReservedByte { byte: 0, .. })
        ));
    }

    #[test]
    fn sentinel_is_smallest_even_for_low_bytes() {
        let a = Alphabet::build(&["!#A"]).unwrap();
        assert_eq!(a.code(b'$'), Some(1));
        assert!(a.code(b'!').unwrap() < a.code(b'#').unwrap());
    }

    #[test]
    fn concatenate_appends_sentinels() {
        let rc = ReadCollection::from_strs(&["AC", "AA"]).unwrap();
        let t = rc.concatenate();
        assert_eq!(t.symbols, vec![2, 3, 1, 2, 2, 1]);
        assert_eq!(t.ends, vec![3, 6]);
        assert_eq!(rc.n(), 6);
        let one = ReadCollection::from_strs(&["A"]).unwrap().concatenate();
        assert_eq!(one.symbols, vec![2, 1]);
        let dup = ReadCollection::from_strs(&["GT", "GT"]).unwrap().concatenate();
        assert_eq!(dup.symbols, vec![2, 3, 1, 2, 3, 1]);
    }

    #[test]
    fn concatenate_splits_back_into_reads() {
        let rc = ReadCollection::from_strs(&["GATTACA", "A", "GATTACA"]).unwrap();
        let t = rc.concatenate();
        let back: Vec<Vec<u8>> = t
            .strings()
            .map(|s| s[..s.len() - 1].iter().map(|&c| rc.alphabet().byte(c).unwrap()).collect())
            .collect();
        assert_eq!(back, rc.reads());
    }

    #[test]
    fn empty_read_rejected() {
        assert!(matches!(ReadCollection::from_strs(&["A", ""]), Err(Error::EmptyRead(1))));
    }
}
