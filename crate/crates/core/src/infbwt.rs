//! eBWT of the collection computed level by level from the grammar tree.
//!
//! The start rule's strings are sorted directly to get the top level BWT.
//! Each refinement step expands every symbol of the current BWT into its
//! phrase one level down and sorts the resulting suffixes. A suffix is keyed
//! by a finite prefix (a phrase suffix, a whole phrase, or the last symbol of
//! a phrase followed by the next phrase); equal keys are ordered by where the
//! rest of the suffix sits in the current BWT, or by read index when nothing
//! follows.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};

use crate::error::{Error, Result};
use crate::glex::{LevelTriplet, PhraseTable};
use crate::text::{EbwtString, Symbol, SENTINEL};
use crate::tree::GrammarTree;

const NONE: u32 = u32::MAX;
const DEFAULT_BUDGET: usize = 256 << 20;

/// BWT of one parse level over that level's ranks, plus the read index of
/// every entry that starts a read (`start_read`) or is its last suffix
/// (`final_read`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelBwt {
    pub level: usize,
    pub symbols: Vec<u32>,
    start_read: Vec<u32>,
    final_read: Vec<u32>,
}

impl LevelBwt {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// One suffix produced while refining a level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueueEntry {
    pub left: u32,
    pub key: u32,
    pub tie: u64,
    pub start_read: u32,
    pub final_read: u32,
}

const ENTRY_BYTES: usize = 24;

impl QueueEntry {
    fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        w.write_all(&self.left.to_le_bytes())?;
        w.write_all(&self.key.to_le_bytes())?;
        w.write_all(&self.tie.to_le_bytes())?;
        w.write_all(&self.start_read.to_le_bytes())?;
        w.write_all(&self.final_read.to_le_bytes())
    }

    fn read_from(b: &[u8; ENTRY_BYTES]) -> Self {
        let u = |i: usize| u32::from_le_bytes(b[i..i + 4].try_into().unwrap());
        QueueEntry {
            left: u(0),
            key: u(4),
            tie: u64::from_le_bytes(b[8..16].try_into().unwrap()),
            start_read: u(16),
            final_read: u(20),
        }
    }
}

/// Push-ordered entry sequence that moves to a temporary file once it
/// outgrows its memory budget.
pub struct PairQueue {
    budget: usize,
    mem: Vec<QueueEntry>,
    spill: Option<BufWriter<File>>,
    len: usize,
}

impl PairQueue {
    pub fn new(budget_bytes: usize) -> Self {
        Self { budget: budget_bytes, mem: Vec::new(), spill: None, len: 0 }
    }

    /// Budget from `LPG_MEM_BUDGET` (bytes), 256 MiB when unset.
    pub fn from_env() -> Self {
        let budget = std::env::var("LPG_MEM_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        Self::new(budget)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_spilled(&self) -> bool {
        self.spill.is_some()
    }

    pub fn push(&mut self, e: QueueEntry) -> Result<()> {
        self.len += 1;
        if let Some(w) = &mut self.spill {
            e.write_to(w)?;
            return Ok(());
        }
        self.mem.push(e);
        if self.mem.len() * ENTRY_BYTES > self.budget {
            let mut w = BufWriter::new(tempfile::tempfile()?);
            for e in self.mem.drain(..) {
                e.write_to(&mut w)?;
            }
            self.mem = Vec::new();
            self.spill = Some(w);
        }
        Ok(())
    }

    /// Visits every entry in push order.
    pub fn drain(self, mut f: impl FnMut(QueueEntry)) -> Result<()> {
        match self.spill {
            None => self.mem.into_iter().for_each(f),
            Some(w) => {
                let mut file = w.into_inner().map_err(|e| e.into_error())?;
                use std::io::Seek;
                file.rewind()?;
                let mut r = BufReader::new(file);
                let mut buf = [0u8; ENTRY_BYTES];
                for _ in 0..self.len {
                    r.read_exact(&mut buf)?;
                    f(QueueEntry::read_from(&buf));
                }
            }
        }
        Ok(())
    }
}

/// Phrases of one level over the ranks of the level below, by rank.
pub struct LevelDictionary {
    phrases: PhraseTable,
    is_final: Vec<bool>,
}

impl LevelDictionary {
    /// `trip` is level `i`, `prev` level `i - 1`; `prev_final[r - 1]` says
    /// whether the level `i - 1` symbol of rank `r` ends a read.
    pub fn build(gt: &GrammarTree, trip: &LevelTriplet, prev: &LevelTriplet, prev_final: &[bool]) -> Result<Self> {
        let ids: Vec<Symbol> = (1..=trip.len() as u32).map(|r| trip.identifier(r).unwrap()).collect();
        let phrases = PhraseTable::collect(gt, &ids, prev)?;
        let mut is_final = Vec::with_capacity(ids.len());
        for k in 0..phrases.len() {
            let p = phrases.get(k);
            let last = *p.last().ok_or_else(|| Error::Format("empty phrase".into()))?;
            is_final.push(prev_final[last as usize - 1]);
        }
        Ok(Self { phrases, is_final })
    }

    pub fn phrase(&self, rank: u32) -> &[u32] {
        self.phrases.get(rank as usize - 1)
    }

    pub fn is_final(&self, rank: u32) -> bool {
        self.is_final[rank as usize - 1]
    }

    pub fn finals(&self) -> &[bool] {
        &self.is_final
    }
}

/// Circular BWT of the start rule's strings over the top level ranks.
pub fn bwt_of_compressed_string(gt: &GrammarTree, top: &LevelTriplet) -> Result<LevelBwt> {
    let c = gt.c();
    let mut text = Vec::with_capacity(c);
    for k in 0..c {
        let l = gt.label(gt.depth_one(k))?;
        text.push(top.rank_of(l).ok_or_else(|| Error::Format(format!("start symbol {l} has no rank")))?);
    }
    let mut bounds = Vec::with_capacity(gt.m());
    for j in 0..gt.m() {
        bounds.push(gt.read_span(j)?);
    }
    // (read, position)
    let mut sa: Vec<(u32, u32)> = Vec::with_capacity(c);
    for (j, &(s, e)) in bounds.iter().enumerate() {
        sa.extend((s..e).map(|p| (j as u32, p as u32)));
    }
    sa.sort_unstable_by(|&(ja, pa), &(jb, pb)| {
        let a = &text[pa as usize..bounds[ja as usize].1];
        let b = &text[pb as usize..bounds[jb as usize].1];
        a.cmp(b).then(ja.cmp(&jb))
    });
    let mut out = LevelBwt {
        level: top.level() + 1,
        symbols: Vec::with_capacity(c),
        start_read: vec![NONE; c],
        final_read: vec![NONE; c],
    };
    for (idx, &(j, p)) in sa.iter().enumerate() {
        let (s, e) = bounds[j as usize];
        let p = p as usize;
        out.symbols.push(text[if p == s { e - 1 } else { p - 1 }]);
        if p == s {
            out.start_read[idx] = j;
        }
        if p == e - 1 {
            out.final_read[idx] = j;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    /// Phrase of rank `.0` from offset `.1` to its end.
    Suffix(u32, u32),
    /// Symbol `.0` followed by the whole phrase of rank `.1`.
    Pair(u32, u32),
}

fn key_view(dict: &LevelDictionary, k: Key) -> (Option<u32>, &[u32]) {
    match k {
        Key::Suffix(p, off) => (None, &dict.phrase(p)[off as usize..]),
        Key::Pair(g, s) => (Some(g), dict.phrase(s)),
    }
}

/// Same order as `lms::phrase_cmp` on the materialized keys.
fn key_cmp(a: (Option<u32>, &[u32]), b: (Option<u32>, &[u32])) -> Ordering {
    let la = a.1.len() + a.0.is_some() as usize;
    let lb = b.1.len() + b.0.is_some() as usize;
    let at = |v: &(Option<u32>, &[u32]), i: usize| match v.0 {
        Some(g) if i == 0 => g,
        Some(_) => v.1[i - 1],
        None => v.1[i],
    };
    for i in 0..la.min(lb) {
        match at(&a, i).cmp(&at(&b, i)) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    match la.cmp(&lb) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Less if la >= 2 => Ordering::Greater,
        Ordering::Less => Ordering::Less,
        Ordering::Greater if lb >= 2 => Ordering::Less,
        Ordering::Greater => Ordering::Greater,
    }
}

/// BWT of level `i` from the BWT of level `i + 1`; `dict` maps level `i`
/// ranks to level `i - 1` phrases.
pub fn refine_level(next: &LevelBwt, dict: &LevelDictionary) -> Result<LevelBwt> {
    let b = &next.symbols;
    let d = dict.finals().len();
    let mut start = vec![0usize; d + 2];
    for &s in b {
        start[s as usize + 1] += 1;
    }
    for s in 1..start.len() {
        start[s] += start[s - 1];
    }
    // psi[j]: BWT position of the suffix following the first symbol of suffix j
    let mut psi = vec![0u32; b.len()];
    let mut fill = start.clone();
    for (pos, &s) in b.iter().enumerate() {
        psi[fill[s as usize]] = pos as u32;
        fill[s as usize] += 1;
    }
    drop(fill);

    let mut keys: HashMap<Key, u32> = HashMap::new();
    let mut key_list: Vec<Key> = Vec::new();
    let mut key_id = |k: Key| -> u32 {
        *keys.entry(k).or_insert_with(|| {
            key_list.push(k);
            key_list.len() as u32 - 1
        })
    };
    let mut queue = PairQueue::from_env();
    let mut s = 0u32;
    for (j, &p) in b.iter().enumerate() {
        while start[s as usize + 1] <= j {
            s += 1;
        }
        let g = dict.phrase(p);
        let h = dict.phrase(s);
        let p_final = dict.is_final(p);
        let s_final = dict.is_final(s);
        let after_s = if s_final { next.final_read[j] as u64 } else { psi[j] as u64 };
        let after_p = if p_final { next.start_read[j] as u64 } else { j as u64 };
        let glast = *g.last().unwrap();
        queue.push(QueueEntry {
            left: glast,
            key: key_id(Key::Suffix(s, 0)),
            tie: after_s,
            start_read: if p_final { next.start_read[j] } else { NONE },
            final_read: if h.len() == 1 && s_final { next.final_read[j] } else { NONE },
        })?;
        for k in 1..g.len() {
            let last = k + 1 == g.len();
            let (key, tie, fin) = if !last {
                (Key::Suffix(p, k as u32), after_p, NONE)
            } else if p_final {
                (Key::Suffix(p, k as u32), after_p, next.start_read[j])
            } else {
                (Key::Pair(glast, s), after_s, NONE)
            };
            queue.push(QueueEntry { left: g[k - 1], key: key_id(key), tie, start_read: NONE, final_read: fin })?;
        }
    }
    let total = queue.len();

    // dense ranks of the distinct keys
    let mut order: Vec<u32> = (0..key_list.len() as u32).collect();
    order.sort_unstable_by(|&x, &y| {
        key_cmp(key_view(dict, key_list[x as usize]), key_view(dict, key_list[y as usize]))
    });
    let mut key_rank = vec![0u32; key_list.len()];
    let mut r = 0u32;
    for (i, &k) in order.iter().enumerate() {
        if i == 0
            || key_cmp(key_view(dict, key_list[order[i - 1] as usize]), key_view(dict, key_list[k as usize]))
                != Ordering::Equal
        {
            r += 1;
        }
        key_rank[k as usize] = r - 1;
    }
    drop(order);
    drop(key_list);

    // bucket by key rank, then order each bucket by tie
    let mut bucket = vec![0usize; r as usize + 1];
    let mut entries: Vec<QueueEntry> = Vec::with_capacity(total);
    queue.drain(|e| {
        bucket[key_rank[e.key as usize] as usize + 1] += 1;
        entries.push(e);
    })?;
    for i in 1..bucket.len() {
        bucket[i] += bucket[i - 1];
    }
    let mut sorted: Vec<QueueEntry> = vec![QueueEntry { left: 0, key: 0, tie: 0, start_read: 0, final_read: 0 }; total];
    {
        let mut fill = bucket.clone();
        for e in entries.drain(..) {
            let kr = key_rank[e.key as usize] as usize;
            sorted[fill[kr]] = e;
            fill[kr] += 1;
        }
    }
    drop(entries);
    for w in bucket.windows(2) {
        sorted[w[0]..w[1]].sort_by_key(|e| e.tie);
    }

    let mut out = LevelBwt {
        level: next.level - 1,
        symbols: Vec::with_capacity(total),
        start_read: Vec::with_capacity(total),
        final_read: Vec::with_capacity(total),
    };
    for e in sorted {
        out.symbols.push(e.left);
        out.start_read.push(e.start_read);
        out.final_read.push(e.final_read);
    }
    Ok(out)
}

/// Level dictionaries for levels `1..triplets.len()`, built bottom up.
fn dictionaries(gt: &GrammarTree, triplets: &[LevelTriplet]) -> Result<Vec<LevelDictionary>> {
    let mut prev_final: Vec<bool> = (1..=gt.sigma()).map(|s| s == SENTINEL).collect();
    let mut dicts = Vec::with_capacity(triplets.len());
    for i in 1..triplets.len() {
        let d = LevelDictionary::build(gt, &triplets[i], &triplets[i - 1], &prev_final)?;
        prev_final = d.finals().to_vec();
        dicts.push(d);
    }
    Ok(dicts)
}

/// Runs every refinement, handing each level's BWT to `visit` (top level
/// first), and returns the terminal level.
fn run(gt: &GrammarTree, triplets: &[LevelTriplet], mut visit: impl FnMut(&LevelBwt)) -> Result<LevelBwt> {
    let top = triplets.last().ok_or_else(|| Error::Format("no level triplets".into()))?;
    let mut dicts = dictionaries(gt, triplets)?;
    let mut cur = bwt_of_compressed_string(gt, top)?;
    while let Some(dict) = dicts.pop() {
        visit(&cur);
        let expected: usize = cur.symbols.iter().map(|&p| dict.phrase(p).len()).sum();
        cur = refine_level(&cur, &dict)?;
        if cur.len() != expected {
            return Err(Error::InconsistentLength { got: cur.len(), expected });
        }
    }
    let n = gt.stats().n as usize;
    if cur.len() != n {
        return Err(Error::InconsistentLength { got: cur.len(), expected: n });
    }
    Ok(cur)
}

/// BWT of every level, top level first and the terminal level last.
pub fn infbwt_levels(gt: &GrammarTree, triplets: &[LevelTriplet]) -> Result<Vec<LevelBwt>> {
    let mut out = Vec::new();
    let last = run(gt, triplets, |b| out.push(b.clone()))?;
    out.push(last);
    Ok(out)
}

/// eBWT of the collection encoded by `gt`.
pub fn infbwt(gt: &GrammarTree, triplets: &[LevelTriplet]) -> Result<EbwtString> {
    Ok(EbwtString { chars: run(gt, triplets, |_| {})?.symbols })
}
