//! Grammar tree: the parse tree of the grammar with every repeated rule
//! occurrence pruned to a labeled leaf. Topology is LOUDS, leaf labels are a
//! fixed-width or canonical Huffman array, and a bitmap over the depth-one
//! nodes marks where each read ends.
//!
//! Internal nodes are numbered in level order; the internal node with rank
//! `x` has identifier `x + sigma` (the root is `sigma + 1`). Leaves carry a
//! terminal code or the identifier of the internal node defining the rule.

use std::collections::{HashMap, VecDeque};

use crate::builder::Grammar;
use crate::error::{Error, Result};
use crate::succinct::{BitReader, HuffmanTable, IntVec, LoudsTree, RankBitmap};
use crate::text::{Alphabet, Symbol, SENTINEL};

const HUFFMAN_SAMPLE: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelMode {
    Fixed,
    Huffman,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Labels {
    Fixed(IntVec),
    Huffman {
        table: HuffmanTable,
        words: Vec<u64>,
        bits: usize,
        count: usize,
        /// Bit offset of every `HUFFMAN_SAMPLE`-th label.
        samples: Vec<u64>,
    },
}

impl Labels {
    pub fn build(values: &[u32], mode: LabelMode, max: u32) -> Result<Self> {
        match mode {
            LabelMode::Fixed => {
                let v: Vec<u64> = values.iter().map(|&x| x as u64).collect();
                Ok(Labels::Fixed(IntVec::from_slice(&v, IntVec::width_for(max as u64))))
            }
            LabelMode::Huffman => {
                let mut freq: HashMap<u32, u64> = HashMap::new();
                for &x in values {
                    *freq.entry(x).or_default() += 1;
                }
                if freq.is_empty() {
                    freq.insert(SENTINEL, 1);
                }
                let mut freqs: Vec<(u32, u64)> = freq.into_iter().collect();
                freqs.sort_unstable();
                let table = HuffmanTable::build(&freqs)?;
                let mut w = crate::succinct::BitWriter::new();
                let mut samples = Vec::with_capacity(values.len() / HUFFMAN_SAMPLE + 1);
                for (i, &x) in values.iter().enumerate() {
                    if i % HUFFMAN_SAMPLE == 0 {
                        samples.push(w.len() as u64);
                    }
                    table.encode_into(x, &mut w)?;
                }
                let (words, bits) = w.finish();
                Ok(Labels::Huffman { table, words, bits, count: values.len(), samples })
            }
        }
    }

    pub fn from_huffman_stream(table: HuffmanTable, words: Vec<u64>, bits: usize, count: usize) -> Result<Self> {
        let mut samples = Vec::with_capacity(count / HUFFMAN_SAMPLE + 1);
        let mut r = BitReader::new(&words, bits, 0);
        for i in 0..count {
            if i % HUFFMAN_SAMPLE == 0 {
                samples.push(r.pos() as u64);
            }
            table
                .decode_one(&mut r)
                .ok_or_else(|| Error::Format("truncated label stream".into()))?;
        }
        Ok(Labels::Huffman { table, words, bits, count, samples })
    }

    pub fn len(&self) -> usize {
        match self {
            Labels::Fixed(v) => v.len(),
            Labels::Huffman { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> LabelMode {
        match self {
            Labels::Fixed(_) => LabelMode::Fixed,
            Labels::Huffman { .. } => LabelMode::Huffman,
        }
    }

    /// Label `i`, 0-based.
    pub fn get(&self, i: usize) -> u32 {
        match self {
            Labels::Fixed(v) => v.get(i) as u32,
            Labels::Huffman { table, words, bits, samples, .. } => {
                let mut r = BitReader::new(words, *bits, samples[i / HUFFMAN_SAMPLE] as usize);
                let mut x = 0;
                for _ in 0..=i % HUFFMAN_SAMPLE {
                    x = table.decode_one(&mut r).expect("label stream validated");
                }
                x
            }
        }
    }

    /// Size of the label payload in bits.
    pub fn size_bits(&self) -> usize {
        match self {
            Labels::Fixed(v) => v.len() * v.width() as usize,
            Labels::Huffman { bits, table, .. } => bits + table.lengths().len() * 40,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GrammarStats {
    pub r: u64,
    pub g: u64,
    pub c: u64,
    pub h: u64,
    pub m: u64,
    pub n: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrammarTree {
    alphabet: Alphabet,
    louds: LoudsTree,
    labels: Labels,
    suffix_marks: RankBitmap,
    stats: GrammarStats,
}

impl GrammarTree {
    pub fn encode(gr: &Grammar, mode: LabelMode) -> Result<Self> {
        Ok(Self::encode_with_ids(gr, mode)?.0)
    }

    /// Encodes `gr` and also returns the tree identifier of every rule,
    /// indexed by `lhs - sigma - 1`.
    pub fn encode_with_ids(gr: &Grammar, mode: LabelMode) -> Result<(Self, Vec<u32>)> {
        let sigma = gr.sigma() as u32;
        let mut ident = vec![0u32; gr.r()];
        let mut pending: HashMap<u32, Vec<usize>> = HashMap::new();
        let mut degrees = vec![gr.c()];
        let mut labels: Vec<u32> = Vec::new();
        let mut internal = 1u32;
        let mut queue: VecDeque<(u32, &[Symbol])> = VecDeque::new();
        queue.push_back((u32::MAX, &gr.start));

        while let Some((ctx, children)) = queue.pop_front() {
            for &x in children {
                if gr.is_terminal(x) {
                    degrees.push(0);
                    labels.push(x);
                    continue;
                }
                let k = (x - sigma - 1) as usize;
                let rule = &gr.rules[k];
                let sp_context = rule.origin.level() == ctx;
                if ident[k] == 0 && !(rule.dual && sp_context) {
                    internal += 1;
                    ident[k] = sigma + internal;
                    degrees.push(rule.rhs.len());
                    queue.push_back((rule.origin.level(), &rule.rhs));
                    for leaf in pending.remove(&x).unwrap_or_default() {
                        labels[leaf] = ident[k];
                    }
                } else {
                    degrees.push(0);
                    if ident[k] == 0 {
                        pending.entry(x).or_default().push(labels.len());
                    }
                    labels.push(ident[k]);
                }
            }
        }
        if let Some(&x) = pending.keys().min() {
            return Err(Error::UnresolvedDualContext(x));
        }

        let louds = LoudsTree::from_degrees(degrees);
        let labels = Labels::build(&labels, mode, sigma + internal)?;
        let mut marks = crate::succinct::BitBuilder::with_len(gr.c());
        for &e in &gr.start_ends {
            marks.set(e - 1);
        }
        let stats = GrammarStats {
            r: gr.r() as u64,
            g: gr.g() as u64,
            c: gr.c() as u64,
            h: gr.h as u64,
            m: gr.m as u64,
            n: gr.n as u64,
        };
        let tree = Self { alphabet: gr.alphabet.clone(), louds, labels, suffix_marks: marks.build(), stats };
        Ok((tree, ident))
    }

    pub fn from_parts(
        alphabet: Alphabet,
        louds: LoudsTree,
        labels: Labels,
        suffix_marks: RankBitmap,
        stats: GrammarStats,
    ) -> Result<Self> {
        if labels.len() != louds.leaf_count() {
            return Err(Error::Format("label count differs from leaf count".into()));
        }
        if louds.node_count() == 0 || louds.degree(louds.root()) as u64 != stats.c || suffix_marks.len() as u64 != stats.c {
            return Err(Error::Format("root degree differs from c".into()));
        }
        if suffix_marks.count_ones() as u64 != stats.m || (stats.c > 0 && !suffix_marks.get(stats.c as usize - 1)) {
            return Err(Error::Format("read boundary marks are inconsistent".into()));
        }
        let tree = Self { alphabet, louds, labels, suffix_marks, stats };
        tree.validate_references()?;
        Ok(tree)
    }

    /// Every leaf label must be a terminal or a non-root identifier, and no
    /// internal node may reach itself through its leaves' references.
    fn validate_references(&self) -> Result<()> {
        let sigma = self.sigma();
        let max = self.max_identifier();
        for i in 0..self.labels.len() {
            let l = self.labels.get(i);
            if l == 0 || l == sigma + 1 || l > max {
                return Err(Error::Format(format!("leaf label {l} out of range")));
            }
        }
        let count = self.louds.internal_count();
        let deps = |x: usize| -> Vec<usize> {
            let v = self.louds.internalselect(x).expect("rank in range");
            self.children(v)
                .filter_map(|u| {
                    if !self.louds.is_leaf(u) {
                        Some(self.louds.internalrank(u))
                    } else {
                        let l = self.label_unchecked(u);
                        (l > sigma).then(|| (l - sigma) as usize)
                    }
                })
                .collect()
        };
        // 0 = unseen, 1 = on stack, 2 = done
        let mut state = vec![0u8; count + 1];
        for root in 1..=count {
            if state[root] != 0 {
                continue;
            }
            state[root] = 1;
            let mut stack = vec![(root, deps(root), 0usize)];
            while let Some((x, ds, i)) = stack.last_mut() {
                if *i == ds.len() {
                    state[*x] = 2;
                    stack.pop();
                    continue;
                }
                let y = ds[*i];
                *i += 1;
                match state[y] {
                    0 => {
                        state[y] = 1;
                        let d = deps(y);
                        stack.push((y, d, 0));
                    }
                    1 => return Err(Error::CycleDetected(y)),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sigma(&self) -> u32 {
        self.alphabet.sigma() as u32
    }

    pub fn louds(&self) -> &LoudsTree {
        &self.louds
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn suffix_marks(&self) -> &RankBitmap {
        &self.suffix_marks
    }

    pub fn stats(&self) -> GrammarStats {
        self.stats
    }

    pub fn m(&self) -> usize {
        self.stats.m as usize
    }

    pub fn c(&self) -> usize {
        self.stats.c as usize
    }

    /// Largest identifier in use (`sigma + internal node count`).
    pub fn max_identifier(&self) -> u32 {
        self.sigma() + self.louds.internal_count() as u32
    }

    pub fn label(&self, v: usize) -> Result<Symbol> {
        self.louds.check(v)?;
        Ok(self.label_unchecked(v))
    }

    fn label_unchecked(&self, v: usize) -> Symbol {
        if self.louds.is_leaf(v) {
            self.labels.get(self.louds.leafrank(v) - 1)
        } else {
            self.louds.internalrank(v) as u32 + self.sigma()
        }
    }

    /// Internal node defining identifier `l`.
    pub fn node_of(&self, l: Symbol) -> Result<usize> {
        if l <= self.sigma() {
            return Err(Error::InvalidNode(l as usize));
        }
        self.louds.internalselect((l - self.sigma()) as usize)
    }

    /// Children of `v`, left to right.
    pub fn children(&self, v: usize) -> impl DoubleEndedIterator<Item = usize> + '_ {
        let deg = self.louds.degree(v);
        let first = if deg == 0 { 0 } else { self.louds.first_child_number(v) };
        (first..first + deg).map(move |k| self.louds.node(k))
    }

    /// Node of the `k`-th (0-based) child of the root.
    pub fn depth_one(&self, k: usize) -> usize {
        self.louds.node(k + 2)
    }

    /// Emits the terminal expansion of `v`, left to right.
    pub fn expand(&self, v: usize, sink: &mut impl FnMut(Symbol)) {
        let sigma = self.sigma();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if self.louds.is_leaf(u) {
                let l = self.label_unchecked(u);
                if l <= sigma {
                    sink(l);
                } else {
                    stack.push(self.node_of(l).expect("leaf labels reference internal nodes"));
                }
            } else {
                stack.extend(self.children(u).rev());
            }
        }
    }

    /// Depth-one child range `[start, end)` covering read `j` (0-based).
    pub fn read_span(&self, j: usize) -> Result<(usize, usize)> {
        if j >= self.m() {
            return Err(Error::OutOfRange { what: "read", index: j, limit: self.m() });
        }
        let start = if j == 0 { 0 } else { self.suffix_marks.select1(j).unwrap() + 1 };
        let end = self.suffix_marks.select1(j + 1).unwrap() + 1;
        Ok((start, end))
    }

    /// Read `j` (0-based) as bytes, sentinel removed.
    pub fn extract_read(&self, j: usize) -> Result<Vec<u8>> {
        let (start, end) = self.read_span(j)?;
        let mut out = Vec::new();
        for k in start..end {
            self.expand(self.depth_one(k), &mut |s| {
                if s != SENTINEL {
                    out.push(self.alphabet.byte(s).expect("terminal code"));
                }
            });
        }
        Ok(out)
    }

    /// Every read, in order.
    pub fn decode_reads(&self) -> Result<Vec<Vec<u8>>> {
        (0..self.m()).map(|j| self.extract_read(j)).collect()
    }

    /// Approximate payload size in bytes (topology + labels + marks).
    pub fn payload_bytes(&self) -> usize {
        (self.louds.bits().len() + self.labels.size_bits() + self.suffix_marks.len()).div_ceil(8)
    }
}
