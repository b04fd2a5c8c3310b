//! Brute-force reference implementations, used to check the real pipeline.
//! Nothing here shares code with the parser, the tree or the eBWT builder.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::builder::Grammar;
use crate::error::{Error, Result};
use crate::text::{EbwtString, ReadCollection, Symbol};

/// Inputs larger than this many symbols are refused.
pub const ORACLE_CAP: usize = 100_000;

fn check_cap(got: usize) -> Result<()> {
    if got > ORACLE_CAP {
        return Err(Error::OracleTooLarge { got, cap: ORACLE_CAP });
    }
    Ok(())
}

/// eBWT of independent circular strings. Every suffix of every string is
/// sorted (a proper prefix first, then by string index on a tie) and the
/// symbol circularly before it is emitted.
pub fn oracle_ebwt(strings: &[Vec<Symbol>]) -> Result<EbwtString> {
    let total: usize = strings.iter().map(Vec::len).sum();
    check_cap(total)?;
    let mut suffixes: Vec<(usize, usize)> = Vec::with_capacity(total);
    for (j, s) in strings.iter().enumerate() {
        suffixes.extend((0..s.len()).map(|p| (j, p)));
    }
    suffixes.sort_by(|&(ja, pa), &(jb, pb)| strings[ja][pa..].cmp(&strings[jb][pb..]).then(ja.cmp(&jb)));
    let chars = suffixes
        .into_iter()
        .map(|(j, p)| {
            let s = &strings[j];
            s[(p + s.len() - 1) % s.len()]
        })
        .collect();
    Ok(EbwtString { chars })
}

/// eBWT of a read collection, each read with its sentinel.
pub fn oracle_ebwt_reads(rc: &ReadCollection) -> Result<EbwtString> {
    check_cap(rc.n())?;
    let strings: Vec<Vec<Symbol>> = (0..rc.m()).map(|j| rc.encoded(j)).collect();
    oracle_ebwt(&strings)
}

/// Every parse level of a replayed compression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleTrace {
    /// `levels[0]` is the input; the last entry is the start rule.
    pub levels: Vec<Vec<Vec<Symbol>>>,
    /// For each parse round, every item (phrase or carried symbol) over the
    /// previous level's symbols, with its rank.
    pub ranks_per_level: Vec<Vec<(Vec<Symbol>, u32)>>,
    /// eBWT of every entry of `levels`.
    pub ebwt_per_level: Vec<Vec<Symbol>>,
}

impl OracleTrace {
    pub fn h(&self) -> usize {
        self.levels.len()
    }
}

/// S iff the suffix at `i` is smaller than the one at `i + 1`, where running
/// off the end of the string compares greater than any symbol.
fn brute_is_s(seg: &[Symbol], i: usize) -> bool {
    let (a, b) = (&seg[i..], &seg[i + 1..]);
    for k in 0.. {
        match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) if x == y => continue,
            (Some(x), Some(y)) => return x < y,
            (Some(_), None) => return true,
            _ => unreachable!("a is longer than b"),
        }
    }
    unreachable!()
}

/// Cuts a string after every LMS position and at its end.
fn brute_pieces(seg: &[Symbol]) -> Vec<(Vec<Symbol>, Vec<bool>)> {
    let n = seg.len();
    let s: Vec<bool> = (0..n).map(|i| brute_is_s(seg, i)).collect();
    let lms = |i: usize| n == 1 || (i > 0 && s[i] && !s[i - 1]);
    let mut out = Vec::new();
    let mut from = 0;
    for i in 0..n {
        if i + 1 == n || lms(i) {
            out.push((seg[from..=i].to_vec(), s[from..=i].to_vec()));
            from = i + 1;
        }
    }
    out
}

/// Compares symbol/type pairs with L below S; a proper prefix goes first.
fn typed_cmp(a: &(Vec<Symbol>, Vec<bool>), b: &(Vec<Symbol>, Vec<bool>)) -> Ordering {
    let ka: Vec<(Symbol, bool)> = a.0.iter().copied().zip(a.1.iter().copied()).collect();
    let kb: Vec<(Symbol, bool)> = b.0.iter().copied().zip(b.1.iter().copied()).collect();
    ka.cmp(&kb)
}

/// Replays the level-by-level parse with naive structures.
pub fn oracle_lmsg_trace(rc: &ReadCollection) -> Result<OracleTrace> {
    check_cap(rc.n())?;
    let mut text: Vec<Vec<Symbol>> = (0..rc.m()).map(|j| rc.encoded(j)).collect();
    let mut trace = OracleTrace { levels: vec![], ranks_per_level: vec![], ebwt_per_level: vec![] };
    loop {
        let mut count: BTreeMap<Symbol, usize> = BTreeMap::new();
        for s in text.iter().flatten() {
            *count.entry(*s).or_default() += 1;
        }
        let pieces: Vec<Vec<(Vec<Symbol>, Vec<bool>)>> = text.iter().map(|r| brute_pieces(r)).collect();
        let keep = |p: &(Vec<Symbol>, Vec<bool>)| p.0.len() >= 2 && p.0.iter().any(|s| count[s] > 1);
        // distinct items; a carried symbol is typed S so it sorts like a
        // string end
        let mut items: Vec<(Vec<Symbol>, Vec<bool>)> = Vec::new();
        for p in pieces.iter().flatten() {
            if keep(p) {
                if !items.iter().any(|q| q.0 == p.0) {
                    items.push(p.clone());
                }
            } else {
                for &s in &p.0 {
                    if !items.iter().any(|q| q.0 == [s]) {
                        items.push((vec![s], vec![true]));
                    }
                }
            }
        }
        let any_phrase = pieces.iter().flatten().any(keep);
        trace.ebwt_per_level.push(oracle_ebwt(&text)?.chars);
        if !any_phrase {
            trace.levels.push(text);
            return Ok(trace);
        }
        items.sort_by(typed_cmp);
        let rank = |seq: &[Symbol]| items.iter().position(|q| q.0 == seq).unwrap() as u32 + 1;
        let next: Vec<Vec<Symbol>> = pieces
            .iter()
            .map(|read| {
                let mut out = Vec::new();
                for p in read {
                    if keep(p) {
                        out.push(rank(&p.0));
                    } else {
                        out.extend(p.0.iter().map(|&s| rank(&[s])));
                    }
                }
                out
            })
            .collect();
        trace.ranks_per_level.push(items.iter().enumerate().map(|(r, q)| (q.0.clone(), r as u32 + 1)).collect());
        trace.levels.push(std::mem::replace(&mut text, next));
    }
}

/// Expands the start rule by plain recursion, sentinels included. Fails
/// when more than `n` terminals come out or a rule is nested in itself.
pub fn oracle_expand(gr: &Grammar) -> Result<Vec<u8>> {
    fn go(gr: &Grammar, s: Symbol, depth: usize, out: &mut Vec<u8>) -> Result<()> {
        let sigma = gr.alphabet.sigma() as Symbol;
        if s <= sigma {
            if out.len() >= gr.n {
                return Err(Error::CycleDetected(gr.n));
            }
            out.push(gr.alphabet.byte(s).ok_or(Error::InvalidNode(s as usize))?);
            return Ok(());
        }
        if depth > gr.rules.len() {
            return Err(Error::CycleDetected(depth));
        }
        let rule = gr
            .rules
            .iter()
            .find(|r| r.lhs == s)
            .ok_or(Error::OutOfRange { what: "rule", index: s as usize, limit: sigma as usize + gr.rules.len() })?;
        for &x in &rule.rhs {
            go(gr, x, depth + 1, out)?;
        }
        Ok(())
    }
    let mut out = Vec::with_capacity(gr.n);
    for &s in &gr.start {
        go(gr, s, 0, &mut out)?;
    }
    Ok(out)
}
