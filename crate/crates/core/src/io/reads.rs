use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{ReadCollection, SENTINEL_BYTE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReadFormat {
    Fasta,
    Fastq,
    /// One read per non-empty line, any byte except `$` and NUL.
    Lines,
}

impl ReadFormat {
    /// Guesses from the first non-blank byte: `>` FASTA, `@` FASTQ.
    pub fn detect(data: &[u8]) -> Self {
        match data.iter().find(|b| !b.is_ascii_whitespace()) {
            Some(b'>') => ReadFormat::Fasta,
            Some(b'@') => ReadFormat::Fastq,
            _ => ReadFormat::Lines,
        }
    }
}

impl std::str::FromStr for ReadFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fasta" | "fa" => Ok(ReadFormat::Fasta),
            "fastq" | "fq" => Ok(ReadFormat::Fastq),
            "lines" | "txt" => Ok(ReadFormat::Lines),
            _ => Err(Error::Format(format!("unknown read format {s:?}"))),
        }
    }
}

fn lines(data: &[u8]) -> impl Iterator<Item = (usize, &[u8])> {
    data.split(|&b| b == b'\n')
        .map(|l| l.strip_suffix(b"\r").unwrap_or(l))
        .enumerate()
        .map(|(i, l)| (i + 1, l))
}

/// Appends a sequence line, upper-casing and checking for ACGTN.
fn push_bases(out: &mut Vec<u8>, line: &[u8], lineno: usize, read: usize) -> Result<()> {
    for &b in line {
        let u = b.to_ascii_uppercase();
        match u {
            b'A' | b'C' | b'G' | b'T' | b'N' => out.push(u),
            SENTINEL_BYTE | 0 => return Err(Error::ReservedByte { read, byte: b }),
            _ => {
                return Err(Error::Parse { line: lineno, msg: format!("unexpected base {:?}", b as char) });
            }
        }
    }
    Ok(())
}

fn parse_fasta(data: &[u8]) -> Result<Vec<Vec<u8>>> {
    let mut reads: Vec<Vec<u8>> = Vec::new();
    for (no, line) in lines(data) {
        if line.first() == Some(&b'>') {
            reads.push(Vec::new());
        } else if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        } else {
            let k = reads.len();
            let cur = reads.last_mut().ok_or(Error::Parse { line: no, msg: "sequence before header".into() })?;
            push_bases(cur, line, no, k - 1)?;
        }
    }
    Ok(reads)
}

fn parse_fastq(data: &[u8]) -> Result<Vec<Vec<u8>>> {
    let mut reads = Vec::new();
    let mut it = lines(data).filter(|(_, l)| !l.is_empty());
    while let Some((no, header)) = it.next() {
        if header.first() != Some(&b'@') {
            return Err(Error::Parse { line: no, msg: "expected '@' header".into() });
        }
        let missing = |what: &str| Error::Parse { line: no, msg: format!("record lacks {what}") };
        let (sno, seq) = it.next().ok_or_else(|| missing("a sequence"))?;
        let (pno, plus) = it.next().ok_or_else(|| missing("a '+' line"))?;
        if plus.first() != Some(&b'+') {
            return Err(Error::Parse { line: pno, msg: "expected '+' separator".into() });
        }
        let (qno, qual) = it.next().ok_or_else(|| missing("a quality line"))?;
        if qual.len() != seq.len() {
            return Err(Error::Parse { line: qno, msg: "quality length differs from sequence".into() });
        }
        let mut r = Vec::with_capacity(seq.len());
        push_bases(&mut r, seq, sno, reads.len())?;
        reads.push(r);
    }
    Ok(reads)
}

fn parse_lines(data: &[u8]) -> Result<Vec<Vec<u8>>> {
    let mut reads = Vec::new();
    for (_, line) in lines(data) {
        if line.is_empty() {
            continue;
        }
        if let Some(&b) = line.iter().find(|&&b| b == SENTINEL_BYTE || b == 0) {
            return Err(Error::ReservedByte { read: reads.len(), byte: b });
        }
        reads.push(line.to_vec());
    }
    Ok(reads)
}

/// Parses reads from memory; `None` detects the format.
pub fn parse_reads(data: &[u8], format: Option<ReadFormat>) -> Result<ReadCollection> {
    let reads = match format.unwrap_or_else(|| ReadFormat::detect(data)) {
        ReadFormat::Fasta => parse_fasta(data)?,
        ReadFormat::Fastq => parse_fastq(data)?,
        ReadFormat::Lines => parse_lines(data)?,
    };
    ReadCollection::new(reads)
}

pub fn read_reads(path: &Path, format: Option<ReadFormat>) -> Result<ReadCollection> {
    parse_reads(&std::fs::read(path)?, format)
}
