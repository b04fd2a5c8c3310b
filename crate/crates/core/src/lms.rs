//! One round of LMS parsing: L/S classification, string-independent
//! partitioning, phrase filtering and phrase ranking.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::text::{Symbol, SymbolString, SENTINEL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeTag {
    L,
    S,
    Lms,
}

impl TypeTag {
    pub fn is_s(self) -> bool {
        self != TypeTag::L
    }
}

/// Classifies one string segment. The last position is S; a single-symbol
/// segment is its own LMS position.
pub fn classify_segment(seg: &[Symbol]) -> Vec<TypeTag> {
    let n = seg.len();
    let mut tags = vec![TypeTag::S; n];
    if n == 0 {
        return tags;
    }
    for i in (0..n - 1).rev() {
        tags[i] = match seg[i].cmp(&seg[i + 1]) {
            Ordering::Greater => TypeTag::L,
            Ordering::Less => TypeTag::S,
            Ordering::Equal => tags[i + 1],
        };
    }
    for i in 1..n {
        if tags[i] == TypeTag::S && tags[i - 1] == TypeTag::L {
            tags[i] = TypeTag::Lms;
        }
    }
    if n == 1 {
        tags[0] = TypeTag::Lms;
    }
    tags
}

/// Classifies every string of `t` independently. Level-1 strings must end
/// with the sentinel code.
pub fn classify(t: &SymbolString) -> Result<Vec<TypeTag>> {
    let mut tags = Vec::with_capacity(t.len());
    let mut start = 0;
    for &end in &t.ends {
        if end <= start || end > t.len() {
            return Err(Error::MissingSentinel(end));
        }
        let seg = &t.symbols[start..end];
        if t.level == 1 && (seg[seg.len() - 1] != SENTINEL || seg[..seg.len() - 1].contains(&SENTINEL)) {
            return Err(Error::MissingSentinel(end));
        }
        tags.extend(classify_segment(seg));
        start = end;
    }
    if start != t.len() {
        return Err(Error::MissingSentinel(t.len()));
    }
    Ok(tags)
}

/// A partition piece: an LMS substring with its first symbol dropped, or a
/// read prefix/suffix cut at a string boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub span: Range<usize>,
    /// The piece ends at a string boundary.
    pub suffix: bool,
}

/// Cuts `t` after every LMS position and at every string end.
pub fn partition(t: &SymbolString, tags: &[TypeTag]) -> Vec<Piece> {
    let mut pieces = Vec::new();
    let mut start = 0;
    for &end in &t.ends {
        let mut from = start;
        for (i, tag) in tags.iter().enumerate().take(end - 1).skip(start) {
            if *tag == TypeTag::Lms {
                pieces.push(Piece { span: from..i + 1, suffix: false });
                from = i + 1;
            }
        }
        pieces.push(Piece { span: from..end, suffix: true });
        start = end;
    }
    pieces
}

/// Element of the next-level text: a dictionary phrase or a symbol carried
/// over unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Item {
    Phrase(u32),
    Transferred(u32),
}

/// Outcome of filtering the partition of one level.
#[derive(Clone, Debug)]
pub struct PartitionResult {
    /// Distinct phrases, as spans of their first occurrence in the input.
    pub dictionary: Vec<Range<usize>>,
    /// Distinct transferred symbols, in first-occurrence order.
    pub transferred: Vec<Symbol>,
    /// The next-level text as items, with per-string end offsets.
    pub items: Vec<Item>,
    pub ends: Vec<usize>,
}

/// Drops pieces shorter than two symbols and pieces made only of symbols
/// that occur once in `t`; their symbols are transferred.
pub fn filter_phrases(pieces: &[Piece], t: &SymbolString) -> PartitionResult {
    let max = t.symbols.iter().copied().max().unwrap_or(0) as usize;
    let mut freq = vec![0u32; max + 1];
    for &s in &t.symbols {
        freq[s as usize] = freq[s as usize].saturating_add(1);
    }

    let mut dict_index: HashMap<&[Symbol], u32> = HashMap::new();
    let mut dictionary = Vec::new();
    let mut trans_index: HashMap<Symbol, u32> = HashMap::new();
    let mut transferred = Vec::new();
    let mut items = Vec::with_capacity(pieces.len());
    let mut ends = Vec::with_capacity(t.ends.len());
    let mut string_ends = t.ends.iter().peekable();

    for piece in pieces {
        let seg = &t.symbols[piece.span.clone()];
        let keep = seg.len() >= 2 && seg.iter().any(|&s| freq[s as usize] > 1);
        if keep {
            let next = dictionary.len() as u32;
            let id = *dict_index.entry(seg).or_insert_with(|| {
                dictionary.push(piece.span.clone());
                next
            });
            items.push(Item::Phrase(id));
        } else {
            for &s in seg {
                let next = transferred.len() as u32;
                let id = *trans_index.entry(s).or_insert_with(|| {
                    transferred.push(s);
                    next
                });
                items.push(Item::Transferred(id));
            }
        }
        if string_ends.peek() == Some(&&piece.span.end) {
            string_ends.next();
            ends.push(items.len());
        }
    }
    PartitionResult { dictionary, transferred, items, ends }
}

/// Order used to rank level items. Plain lexicographic, except that a phrase
/// of length at least two that is a proper prefix of another sorts after it.
pub fn phrase_cmp(a: &[Symbol], b: &[Symbol]) -> Ordering {
    let common = a.len().min(b.len());
    match a[..common].cmp(&b[..common]) {
        Ordering::Equal => match a.len().cmp(&b.len()) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Less if a.len() >= 2 => Ordering::Greater,
            Ordering::Less => Ordering::Less,
            Ordering::Greater if b.len() >= 2 => Ordering::Less,
            Ordering::Greater => Ordering::Greater,
        },
        ord => ord,
    }
}

/// Ranks (1-based) of `items` under [`phrase_cmp`]. Fails on equal items.
pub fn sort_phrases<S: AsRef<[Symbol]>>(items: &[S]) -> Result<Vec<u32>> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&x, &y| phrase_cmp(items[x].as_ref(), items[y].as_ref()));
    let mut ranks = vec![0u32; items.len()];
    for (r, w) in order.windows(2).enumerate() {
        if phrase_cmp(items[w[0]].as_ref(), items[w[1]].as_ref()) == Ordering::Equal {
            return Err(Error::DuplicatePhrase);
        }
        ranks[w[0]] = r as u32 + 1;
    }
    if let Some(&last) = order.last() {
        ranks[last] = order.len() as u32;
    }
    Ok(ranks)
}

/// A fully parsed level: the filtered partition plus item ranks and the
/// next-level text written with those ranks.
#[derive(Clone, Debug)]
pub struct LevelParse {
    pub partition: PartitionResult,
    pub phrase_ranks: Vec<u32>,
    pub transferred_ranks: Vec<u32>,
    pub next: SymbolString,
}

impl LevelParse {
    pub fn item_count(&self) -> usize {
        self.phrase_ranks.len() + self.transferred_ranks.len()
    }
}

/// Runs classify, partition, filter and sort on one level.
pub fn parse_level(t: &SymbolString) -> Result<LevelParse> {
    let tags = classify(t)?;
    let pieces = partition(t, &tags);
    let partition = filter_phrases(&pieces, t);

    let mut all: Vec<&[Symbol]> = partition
        .dictionary
        .iter()
        .map(|r| &t.symbols[r.clone()])
        .collect();
    all.extend(partition.transferred.iter().map(std::slice::from_ref));
    let ranks = sort_phrases(&all)?;
    let (phrase_ranks, transferred_ranks) = ranks.split_at(partition.dictionary.len());

    let symbols = partition
        .items
        .iter()
        .map(|item| match *item {
            Item::Phrase(i) => phrase_ranks[i as usize],
            Item::Transferred(i) => transferred_ranks[i as usize],
        })
        .collect();
    let next = SymbolString { symbols, ends: partition.ends.clone(), level: t.level + 1 };
    Ok(LevelParse {
        phrase_ranks: phrase_ranks.to_vec(),
        transferred_ranks: transferred_ranks.to_vec(),
        partition,
        next,
    })
}
