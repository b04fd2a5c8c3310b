//! `LPG1` archive: a little-endian header followed by u64 length-prefixed
//! sections (alphabet, LOUDS bits, leaf labels, read-end marks). Sections
//! after the known ones are skipped on read.

use std::path::Path;

use crate::error::{Error, Result};
use crate::succinct::{HuffmanTable, IntVec, LoudsTree, RankBitmap};
use crate::text::{Alphabet, SENTINEL_BYTE};
use crate::tree::{GrammarStats, GrammarTree, LabelMode, Labels};

pub const MAGIC: &[u8; 4] = b"LPG1";
pub const VERSION: u16 = 1;

#[derive(Default)]
struct Writer(Vec<u8>);

impl Writer {
    fn u8(&mut self, x: u8) {
        self.0.push(x);
    }
    fn u16(&mut self, x: u16) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn u32(&mut self, x: u32) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn u64(&mut self, x: u64) {
        self.0.extend_from_slice(&x.to_le_bytes());
    }
    fn words(&mut self, w: &[u64]) {
        w.iter().for_each(|&x| self.u64(x));
    }
    fn bits(&mut self, b: &RankBitmap) {
        self.u64(b.len() as u64);
        self.words(b.words());
    }
    fn section(&mut self, body: Writer) {
        self.u64(body.0.len() as u64);
        self.0.extend_from_slice(&body.0);
    }
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.data.len());
        let end = end.ok_or_else(|| Error::Format("truncated archive".into()))?;
        let s = &self.data[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn len(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Format("length overflow".into()))
    }
    fn words(&mut self, bit_len: usize) -> Result<Vec<u64>> {
        let n = bit_len.div_ceil(64);
        if n > (self.data.len() - self.pos) / 8 {
            return Err(Error::Format("truncated archive".into()));
        }
        (0..n).map(|_| self.u64()).collect()
    }
    fn bits(&mut self) -> Result<RankBitmap> {
        let len = self.len()?;
        Ok(RankBitmap::from_words(self.words(len)?, len))
    }
    fn section(&mut self) -> Result<Reader<'a>> {
        let n = self.len()?;
        Ok(Reader { data: self.take(n)?, pos: 0 })
    }
    fn done(&self, what: &str) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(Error::Format(format!("trailing bytes in {what} section")));
        }
        Ok(())
    }
}

pub fn encode_archive(gt: &GrammarTree) -> Vec<u8> {
    let mut w = Writer::default();
    w.0.extend_from_slice(MAGIC);
    w.u16(VERSION);
    let s = gt.stats();
    for x in [gt.sigma() as u64, s.r, s.g, s.c, s.h, s.m, s.n] {
        w.u64(x);
    }
    w.u8(match gt.labels().mode() {
        LabelMode::Fixed => 0,
        LabelMode::Huffman => 1,
    });

    let mut sec = Writer::default();
    sec.0.extend_from_slice(gt.alphabet().symbols());
    w.section(sec);

    let mut sec = Writer::default();
    sec.bits(gt.louds().bits());
    w.section(sec);

    let mut sec = Writer::default();
    match gt.labels() {
        Labels::Fixed(v) => {
            sec.u8(v.width() as u8);
            sec.u64(v.len() as u64);
            sec.words(v.words());
        }
        Labels::Huffman { table, words, bits, count, .. } => {
            sec.u64(*count as u64);
            sec.u64(table.lengths().len() as u64);
            for &(sym, len) in table.lengths() {
                sec.u32(sym);
                sec.u8(len);
            }
            sec.u64(*bits as u64);
            sec.words(&words[..bits.div_ceil(64)]);
        }
    }
    w.section(sec);

    let mut sec = Writer::default();
    sec.bits(gt.suffix_marks());
    w.section(sec);
    w.0
}

pub fn decode_archive(data: &[u8]) -> Result<GrammarTree> {
    let mut r = Reader { data, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(Error::Format("not an LPG1 archive".into()));
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported archive version {version}")));
    }
    let mut head = [0u64; 7];
    for x in &mut head {
        *x = r.u64()?;
    }
    let [sigma, rr, g, c, h, m, n] = head;
    let stats = GrammarStats { r: rr, g, c, h, m, n };
    let mode = match r.u8()? {
        0 => LabelMode::Fixed,
        1 => LabelMode::Huffman,
        x => return Err(Error::Format(format!("unknown label mode {x}"))),
    };

    let sec = r.section()?;
    let symbols = sec.data.to_vec();
    if symbols.len() as u64 != sigma
        || symbols.first() != Some(&SENTINEL_BYTE)
        || symbols[1..].windows(2).any(|w| w[0] >= w[1])
        || symbols[1..].iter().any(|&b| b == SENTINEL_BYTE || b == 0)
    {
        return Err(Error::Format("bad alphabet section".into()));
    }
    let alphabet = Alphabet::from_symbols(symbols);

    let mut sec = r.section()?;
    let louds = LoudsTree::try_from_bitmap(sec.bits()?)?;
    sec.done("topology")?;

    let mut sec = r.section()?;
    let labels = match mode {
        LabelMode::Fixed => {
            let width = sec.u8()? as u32;
            let len = sec.len()?;
            let bit_len = len.checked_mul(width as usize).ok_or_else(|| Error::Format("label overflow".into()))?;
            let words = sec.words(bit_len)?;
            Labels::Fixed(IntVec::from_raw(words, width, len).ok_or_else(|| Error::Format("bad label array".into()))?)
        }
        LabelMode::Huffman => {
            let count = sec.len()?;
            let k = sec.len()?;
            if k > sec.data.len() / 5 {
                return Err(Error::Format("truncated archive".into()));
            }
            let lengths = (0..k).map(|_| Ok((sec.u32()?, sec.u8()?))).collect::<Result<Vec<_>>>()?;
            let table = HuffmanTable::from_lengths(lengths)?;
            let bits = sec.len()?;
            let words = sec.words(bits)?;
            Labels::from_huffman_stream(table, words, bits, count)?
        }
    };
    sec.done("label")?;

    let mut sec = r.section()?;
    let marks = sec.bits()?;
    sec.done("read-end")?;

    // forward compatibility: ignore any later sections
    while r.pos < r.data.len() {
        r.section()?;
    }
    GrammarTree::from_parts(alphabet, louds, labels, marks, stats)
}

pub fn write_archive(path: &Path, gt: &GrammarTree) -> Result<()> {
    std::fs::write(path, encode_archive(gt))?;
    Ok(())
}

pub fn read_archive(path: &Path) -> Result<GrammarTree> {
    decode_archive(&std::fs::read(path)?)
}
