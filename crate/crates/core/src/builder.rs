//! Grammar construction: iterated LMS parsing to a fixpoint, nonterminal
//! compaction and suffix pairing.
//!
//! Every symbol of a level-`i+1` text is a level-`i` rule. Symbols carried
//! over unchanged from level `i` get a unit rule at level `i`, which keeps the
//! per-level symbol sets disjoint and lets the grammar tree recover the level
//! of every rule from its shape alone.

use std::collections::{BTreeMap, HashMap};

use crate::lms::parse_level;
use crate::text::{Alphabet, ReadCollection, Symbol, SymbolString};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Created by the parser at `level`; `rank` is its lexicographic rank
    /// among the items of that level.
    Lmsg { level: u32, rank: u32 },
    /// Created by suffix pairing over right-hand sides of `level`.
    Sp { level: u32 },
}

impl Origin {
    pub fn level(self) -> u32 {
        match self {
            Origin::Lmsg { level, .. } | Origin::Sp { level } => level,
        }
    }

    pub fn is_lmsg(self) -> bool {
        matches!(self, Origin::Lmsg { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Symbol,
    pub rhs: Vec<Symbol>,
    pub origin: Origin,
    /// Parser rule whose right-hand side was reused by suffix pairing.
    pub dual: bool,
}

#[derive(Clone, Debug)]
pub struct Grammar {
    pub alphabet: Alphabet,
    /// Rules sorted by `lhs`; after [`collapse`] rule `k` has lhs `sigma+1+k`.
    pub rules: Vec<Rule>,
    /// Compressed string `C`.
    pub start: Vec<Symbol>,
    /// Exclusive end offset of each read inside `start`.
    pub start_ends: Vec<usize>,
    /// Number of parsing rounds, including the final one that found no phrase.
    pub h: usize,
    pub m: usize,
    pub n: usize,
}

impl Grammar {
    pub fn sigma(&self) -> usize {
        self.alphabet.sigma()
    }

    pub fn r(&self) -> usize {
        self.rules.len()
    }

    pub fn g(&self) -> usize {
        self.rules.iter().map(|r| r.rhs.len()).sum()
    }

    pub fn c(&self) -> usize {
        self.start.len()
    }

    pub fn is_terminal(&self, s: Symbol) -> bool {
        s as usize <= self.sigma()
    }

    /// Rule for `lhs`. Requires a collapsed grammar.
    pub fn rule(&self, lhs: Symbol) -> &Rule {
        &self.rules[lhs as usize - self.sigma() - 1]
    }

    /// Level of a symbol: 0 for terminals, the creation level for rules.
    pub fn level_of(&self, s: Symbol) -> u32 {
        if self.is_terminal(s) {
            0
        } else {
            self.rule(s).origin.level()
        }
    }

    pub fn expand_symbol(&self, s: Symbol, out: &mut Vec<Symbol>) {
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            if self.is_terminal(x) {
                out.push(x);
            } else {
                stack.extend(self.rule(x).rhs.iter().rev());
            }
        }
    }

    /// Full expansion of `C`.
    pub fn expand(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.n);
        for &s in &self.start {
            self.expand_symbol(s, &mut out);
        }
        out
    }
}

/// Parser output together with every intermediate level text, written with
/// level ranks (level 1 uses terminal codes).
#[derive(Clone, Debug)]
pub struct LmsgRun {
    pub grammar: Grammar,
    pub levels: Vec<SymbolString>,
}

/// Runs the parser until a round yields no phrase.
pub fn lmsg(rc: &ReadCollection) -> LmsgRun {
    let sigma = rc.alphabet().sigma() as Symbol;
    let mut text = rc.concatenate();
    let mut levels = Vec::new();
    let mut rules: Vec<Rule> = Vec::new();
    // Rule id of rank 1 at the previous level; terminals map to themselves.
    let mut prev_base: Option<Symbol> = None;
    let to_id = |base: Option<Symbol>, rank: Symbol| match base {
        None => rank,
        Some(b) => b + rank - 1,
    };

    loop {
        let parse = parse_level(&text).expect("level texts are well formed");
        if parse.partition.dictionary.is_empty() {
            break;
        }
        let level = text.level as u32;
        let base = sigma + rules.len() as Symbol + 1;
        let mut fresh: Vec<Option<Rule>> = vec![None; parse.item_count()];
        let mut put = |rank: u32, rhs: Vec<Symbol>| {
            fresh[rank as usize - 1] = Some(Rule {
                lhs: base + rank - 1,
                rhs,
                origin: Origin::Lmsg { level, rank },
                dual: false,
            });
        };
        for (span, &rank) in parse.partition.dictionary.iter().zip(&parse.phrase_ranks) {
            let rhs = text.symbols[span.clone()].iter().map(|&s| to_id(prev_base, s)).collect();
            put(rank, rhs);
        }
        for (&s, &rank) in parse.partition.transferred.iter().zip(&parse.transferred_ranks) {
            put(rank, vec![to_id(prev_base, s)]);
        }
        rules.extend(fresh.into_iter().map(|r| r.expect("ranks are dense")));
        levels.push(text);
        text = parse.next;
        prev_base = Some(base);
    }

    let start = text.symbols.iter().map(|&s| to_id(prev_base, s)).collect();
    let start_ends = text.ends.clone();
    levels.push(text);
    let grammar = Grammar {
        alphabet: rc.alphabet().clone(),
        rules,
        start,
        start_ends,
        h: levels.len(),
        m: rc.m(),
        n: rc.n(),
    };
    LmsgRun { grammar, levels }
}

/// Renames nonterminals to the contiguous range `sigma+1..=sigma+r`,
/// preserving their numeric order.
pub fn collapse(mut gr: Grammar) -> Grammar {
    gr.rules.sort_by_key(|r| r.lhs);
    let sigma = gr.sigma() as Symbol;
    let map: HashMap<Symbol, Symbol> = gr
        .rules
        .iter()
        .enumerate()
        .map(|(k, r)| (r.lhs, sigma + 1 + k as Symbol))
        .collect();
    let rename = |s: &mut Symbol| {
        if *s > sigma {
            *s = map[s];
        }
    };
    for rule in &mut gr.rules {
        rule.lhs = map[&rule.lhs];
        rule.rhs.iter_mut().for_each(rename);
    }
    gr.start.iter_mut().for_each(rename);
    gr
}

/// Replaces length-2 suffixes shared by two or more right-hand sides with a
/// single nonterminal, until every such suffix is unique. A pair equal to the
/// whole right-hand side of an existing rule reuses that rule. `C` is left
/// untouched.
pub fn suffix_pair(mut gr: Grammar) -> Grammar {
    let sigma = gr.sigma() as Symbol;
    loop {
        let mut full: HashMap<(Symbol, Symbol), usize> = HashMap::new();
        let mut groups: BTreeMap<(Symbol, Symbol), Vec<usize>> = BTreeMap::new();
        for (k, rule) in gr.rules.iter().enumerate() {
            let len = rule.rhs.len();
            if len < 2 {
                continue;
            }
            let pair = (rule.rhs[len - 2], rule.rhs[len - 1]);
            if len == 2 {
                full.insert(pair, k);
            } else {
                groups.entry(pair).or_default().push(k);
            }
        }

        let mut changed = false;
        for (pair, owners) in groups {
            let existing = full.get(&pair).copied();
            if owners.len() + usize::from(existing.is_some()) < 2 {
                continue;
            }
            let target = match existing {
                Some(k) => {
                    if gr.rules[k].origin.is_lmsg() {
                        gr.rules[k].dual = true;
                    }
                    gr.rules[k].lhs
                }
                None => {
                    let lhs = sigma + gr.rules.len() as Symbol + 1;
                    let level = gr.rules[owners[0]].origin.level();
                    gr.rules.push(Rule {
                        lhs,
                        rhs: vec![pair.0, pair.1],
                        origin: Origin::Sp { level },
                        dual: false,
                    });
                    lhs
                }
            };
            for k in owners {
                let rhs = &mut gr.rules[k].rhs;
                rhs.truncate(rhs.len() - 2);
                rhs.push(target);
            }
            changed = true;
        }
        if !changed {
            return gr;
        }
    }
}

/// Full construction: parse, compact, pair suffixes.
pub fn build(rc: &ReadCollection) -> Grammar {
    suffix_pair(collapse(lmsg(rc).grammar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::SENTINEL;

    fn toy(rules: Vec<(Symbol, Vec<Symbol>)>, start: Vec<Symbol>) -> Grammar {
        // sigma = 5 over "$ABCD"
        let alphabet = Alphabet::from_symbols(b"$ABCD".to_vec());
        let rules = rules
            .into_iter()
            .map(|(lhs, rhs)| Rule { lhs, rhs, origin: Origin::Lmsg { level: 1, rank: 1 }, dual: false })
            .collect();
        let n = start.len();
        Grammar { alphabet, rules, start_ends: vec![n], start, h: 2, m: 1, n }
    }

    #[test]
    fn single_short_read_has_no_rules() {
        let rc = ReadCollection::from_strs(&["A"]).unwrap();
        let gr = build(&rc);
        assert_eq!(gr.r(), 0);
        assert_eq!(gr.h, 1);
        assert_eq!(gr.start, vec![2, 1]);
    }

    #[test]
    fn identical_reads_compress_identically() {
        let rc = ReadCollection::from_strs(&["GTAGTA", "GTAGTA"]).unwrap();
        let run = lmsg(&rc);
        let t2 = &run.levels[1];
        let reads: Vec<&[Symbol]> = t2.strings().collect();
        assert_eq!(reads[0], reads[1]);
        // each distinct phrase of level 1 yields exactly one rule
        let level1 = run.grammar.rules.iter().filter(|r| r.origin.level() == 1).count();
        let distinct: std::collections::HashSet<&[Symbol]> = reads[0].chunks(1).collect();
        assert_eq!(level1, distinct.len());
        assert_eq!(run.grammar.expand(), rc.concatenate().symbols);
    }

    #[test]
    fn collapse_compacts_ids() {
        let gr = toy(vec![(9, vec![7, 2]), (7, vec![2, 3]), (12, vec![9, 1])], vec![12, 7, 1]);
        let before = gr.clone();
        let gr = collapse(gr);
        let lhs: Vec<Symbol> = gr.rules.iter().map(|r| r.lhs).collect();
        assert_eq!(lhs, vec![6, 7, 8]);
        assert_eq!(gr.rule(7).rhs, vec![6, 2]);
        assert_eq!(gr.start, vec![8, 6, 1]);
        let expand_any = |g: &Grammar| {
            let lookup: HashMap<Symbol, &Rule> = g.rules.iter().map(|r| (r.lhs, r)).collect();
            fn go(s: Symbol, l: &HashMap<Symbol, &Rule>, out: &mut Vec<Symbol>) {
                match l.get(&s) {
                    Some(r) => r.rhs.iter().for_each(|&x| go(x, l, out)),
                    None => out.push(s),
                }
            }
            let mut out = vec![];
            g.start.iter().for_each(|&s| go(s, &lookup, &mut out));
            out
        };
        assert_eq!(expand_any(&before), expand_any(&gr));
        let again = collapse(gr.clone());
        assert_eq!(again.rules, gr.rules);
    }

    #[test]
    fn suffix_pair_creates_rule() {
        // X->ABC, Y->DBC  =>  Z->BC, X->AZ, Y->DZ
        let gr = toy(vec![(6, vec![2, 3, 4]), (7, vec![5, 3, 4])], vec![6, 7, 1]);
        let out = suffix_pair(gr);
        assert_eq!(out.r(), 3);
        assert_eq!(out.rule(8).rhs, vec![3, 4]);
        assert_eq!(out.rule(8).origin, Origin::Sp { level: 1 });
        assert_eq!(out.rule(6).rhs, vec![2, 8]);
        assert_eq!(out.rule(7).rhs, vec![5, 8]);
    }

    #[test]
    fn suffix_pair_reuses_whole_rule() {
        // X->BC, Y->ABC, W->DBC  =>  Y->AX, W->DX, X dual
        let gr = toy(vec![(6, vec![3, 4]), (7, vec![2, 3, 4]), (8, vec![5, 3, 4])], vec![7, 8, 6, 1]);
        let out = suffix_pair(gr);
        assert_eq!(out.r(), 3);
        assert_eq!(out.rule(7).rhs, vec![2, 6]);
        assert_eq!(out.rule(8).rhs, vec![5, 6]);
        assert!(out.rule(6).dual);
    }

    #[test]
    fn suffix_pair_fixpoint_on_unique_suffixes() {
        let gr = toy(vec![(6, vec![2, 3, 4]), (7, vec![5, 3, 2])], vec![6, 7, 1]);
        let out = suffix_pair(gr.clone());
        assert_eq!(out.rules, gr.rules);
    }

    #[test]
    fn sentinels_only_end_expansions() {
        let rc = ReadCollection::from_strs(&["GATTACA", "CATTAG", "GATTACA", "TAGCAT"]).unwrap();
        let gr = build(&rc);
        for rule in &gr.rules {
            let mut out = vec![];
            gr.expand_symbol(rule.lhs, &mut out);
            if let Some(p) = out.iter().position(|&s| s == SENTINEL) {
                assert_eq!(p, out.len() - 1);
            }
        }
        assert_eq!(gr.expand(), rc.concatenate().symbols);
    }
}
