//! Run-length eBWT: magic `EBRL`, then `(byte, u32 LE length)` records.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::text::{Alphabet, EbwtString};

pub const MAGIC: &[u8; 4] = b"EBRL";

pub fn write_ebrl(w: &mut impl Write, ebwt: &EbwtString, alphabet: &Alphabet) -> Result<()> {
    w.write_all(MAGIC)?;
    for (code, len) in ebwt.runs() {
        let b = alphabet.byte(code).ok_or(Error::InvalidNode(code as usize))?;
        w.write_all(&[b])?;
        w.write_all(&len.to_le_bytes())?;
    }
    Ok(())
}

/// Expands an `EBRL` stream back to plain bytes.
pub fn read_ebrl(r: &mut impl Read) -> Result<Vec<u8>> {
    let mut data = Vec::new();
    r.read_to_end(&mut data)?;
    let body = data.strip_prefix(MAGIC).ok_or_else(|| Error::Format("missing EBRL magic".into()))?;
    if body.len() % 5 != 0 {
        return Err(Error::Format("truncated EBRL record".into()));
    }
    let mut out = Vec::new();
    for rec in body.chunks_exact(5) {
        let len = u32::from_le_bytes(rec[1..5].try_into().unwrap());
        out.extend(std::iter::repeat_n(rec[0], len as usize));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_roundtrip() {
        let a = Alphabet::from_symbols(b"$AC".to_vec());
        let e = EbwtString { chars: vec![3, 2, 2, 1, 1, 2] };
        let mut buf = Vec::new();
        write_ebrl(&mut buf, &e, &a).unwrap();
        assert_eq!(&buf[..4], b"EBRL");
        assert_eq!(buf.len(), 4 + 5 * 4);
        assert_eq!(&buf[4..9], &[b'C', 1, 0, 0, 0]);
        assert_eq!(read_ebrl(&mut buf.as_slice()).unwrap(), b"CAA$$A");
    }
}
