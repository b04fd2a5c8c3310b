//! Per-level lexicographic ranks of the grammar's phrases, recovered from the
//! grammar tree alone.
//!
//! Level 0 is the terminal alphabet. A level-`i` phrase is an internal node
//! whose first child carries a level-`i-1` label and which is either the
//! first child of its parent or sits right of a sibling that is not level
//! `i-1`. The second condition tells phrase nodes apart from suffix-pair
//! nodes, which always hang to the right of a level `i-1` symbol.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::lms::phrase_cmp;
use crate::succinct::{BitBuilder, IntVec, RankBitmap};
use crate::text::Symbol;
use crate::tree::GrammarTree;

/// Members of one level, their ranks, and the rank-to-identifier inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelTriplet {
    level: usize,
    members: RankBitmap,
    ranks: IntVec,
    by_rank: IntVec,
}

impl LevelTriplet {
    /// Builds a triplet from `(identifier, rank)` pairs; ranks must be a
    /// permutation of `1..=pairs.len()`.
    pub fn new(level: usize, universe: usize, mut pairs: Vec<(u32, u32)>) -> Result<Self> {
        pairs.sort_unstable();
        let k = pairs.len();
        let mut bits = BitBuilder::with_len(universe + 1);
        let mut ranks = IntVec::zeros(k, IntVec::width_for(k as u64));
        let mut by_rank = IntVec::zeros(k, IntVec::width_for(universe as u64));
        for (i, &(l, r)) in pairs.iter().enumerate() {
            let dup = i > 0 && pairs[i - 1].0 == l;
            if dup || l as usize > universe || r == 0 || r as usize > k || by_rank.get(r as usize - 1) != 0 {
                return Err(Error::Format(format!("bad triplet entry ({l}, {r})")));
            }
            bits.set(l as usize);
            ranks.set(i, r as u64);
            by_rank.set(r as usize - 1, l as u64);
        }
        Ok(Self { level, members: bits.build(), ranks, by_rank })
    }

    /// Level 0: every terminal is its own rank.
    pub fn terminals(sigma: u32, universe: usize) -> Self {
        let pairs = (1..=sigma).map(|s| (s, s)).collect();
        Self::new(0, universe.max(sigma as usize), pairs).expect("identity triplet")
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn members(&self) -> &RankBitmap {
        &self.members
    }

    pub fn contains(&self, l: Symbol) -> bool {
        (l as usize) < self.members.len() && self.members.get(l as usize)
    }

    /// `f(l)`, defined for members only.
    pub fn rank_of(&self, l: Symbol) -> Option<u32> {
        if !self.contains(l) {
            return None;
        }
        Some(self.ranks.get(self.members.rank1(l as usize)) as u32)
    }

    /// Identifier holding rank `r` (1-based).
    pub fn identifier(&self, r: u32) -> Option<Symbol> {
        if r == 0 || r as usize > self.len() {
            return None;
        }
        Some(self.by_rank.get(r as usize - 1) as Symbol)
    }

    /// Members in identifier order with their ranks.
    pub fn pairs(&self) -> Vec<(Symbol, u32)> {
        (1..=self.len())
            .map(|k| {
                let l = self.members.select1(k).unwrap() as Symbol;
                (l, self.ranks.get(k - 1) as u32)
            })
            .collect()
    }
}

/// Identifiers (ascending) of the level-`prev.level() + 1` phrase nodes.
pub fn detect_level_members(gt: &GrammarTree, prev: &LevelTriplet) -> Result<Vec<Symbol>> {
    let louds = gt.louds();
    let mut out = Vec::new();
    // the root (sigma + 1) is never a phrase
    for l in gt.sigma() + 2..=gt.max_identifier() {
        let v = gt.node_of(l)?;
        let first = louds.child(v, 1)?;
        if !prev.contains(gt.label(first)?) {
            continue;
        }
        let stair = match louds.psibling(v) {
            Ok(left) => !prev.contains(gt.label(left)?),
            Err(Error::NoSibling) => true,
            Err(e) => return Err(e),
        };
        if stair {
            out.push(l);
        }
    }
    Ok(out)
}

/// Appends the phrase of identifier `l` over level `prev` ranks to `out`,
/// descending through nodes whose labels are not in `prev`.
pub fn decompress_member(gt: &GrammarTree, l: Symbol, prev: &LevelTriplet, out: &mut Vec<u32>) -> Result<()> {
    let cap = 2 * gt.louds().node_count() + 2;
    let mut steps = 0usize;
    let mut stack: Vec<usize> = gt.children(gt.node_of(l)?).rev().collect();
    while let Some(u) = stack.pop() {
        steps += 1;
        if steps > cap {
            return Err(Error::CycleDetected(cap));
        }
        let x = gt.label(u)?;
        if let Some(r) = prev.rank_of(x) {
            out.push(r);
        } else if x <= gt.sigma() {
            return Err(Error::Format(format!("terminal {x} below level {}", prev.level() + 1)));
        } else {
            stack.extend(gt.children(gt.node_of(x)?).rev());
        }
    }
    Ok(())
}

/// Phrases of a level, concatenated, indexed like the member list.
#[derive(Clone, Debug, Default)]
pub struct PhraseTable {
    offsets: Vec<u32>,
    data: Vec<u32>,
}

impl PhraseTable {
    /// Decompresses every member twice: once to size the buffer exactly,
    /// once to fill it.
    pub fn collect(gt: &GrammarTree, members: &[Symbol], prev: &LevelTriplet) -> Result<Self> {
        let mut scratch = Vec::new();
        let mut offsets = Vec::with_capacity(members.len() + 1);
        offsets.push(0u32);
        let mut total = 0usize;
        for &l in members {
            scratch.clear();
            decompress_member(gt, l, prev, &mut scratch)?;
            total += scratch.len();
            offsets.push(u32::try_from(total).map_err(|_| Error::Format("level too large".into()))?);
        }
        let mut data = Vec::with_capacity(total);
        for &l in members {
            decompress_member(gt, l, prev, &mut data)?;
        }
        Ok(PhraseTable { offsets, data })
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, k: usize) -> &[u32] {
        &self.data[self.offsets[k] as usize..self.offsets[k + 1] as usize]
    }

    pub fn total_len(&self) -> usize {
        self.data.len()
    }
}

/// Ranks `members` by their decompressed phrases.
pub fn rank_level(gt: &GrammarTree, members: &[Symbol], prev: &LevelTriplet) -> Result<LevelTriplet> {
    let phrases = PhraseTable::collect(gt, members, prev)?;
    let mut order: Vec<u32> = (0..members.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| phrase_cmp(phrases.get(a as usize), phrases.get(b as usize)));
    if order
        .windows(2)
        .any(|w| phrase_cmp(phrases.get(w[0] as usize), phrases.get(w[1] as usize)) == Ordering::Equal)
    {
        return Err(Error::DuplicatePhrase);
    }
    drop(phrases);
    let pairs = order.iter().enumerate().map(|(r, &k)| (members[k as usize], r as u32 + 1)).collect();
    LevelTriplet::new(prev.level() + 1, gt.max_identifier() as usize, pairs)
}

/// All level triplets, level 0 (terminals) first. The last one holds the
/// symbols of the start rule.
pub fn glex(gt: &GrammarTree) -> Result<Vec<LevelTriplet>> {
    let mut out = vec![LevelTriplet::terminals(gt.sigma(), gt.max_identifier() as usize)];
    loop {
        let prev = out.last().unwrap();
        let members = detect_level_members(gt, prev)?;
        if members.is_empty() {
            return Ok(out);
        }
        let next = rank_level(gt, &members, prev)?;
        out.push(next);
    }
}
