//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::alloc::{GlobalAlloc, Layout, System};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering::Relaxed};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lpg::builder::{build, Grammar, Origin};
use lpg::glex::glex;
use lpg::infbwt::{infbwt, infbwt_levels};
use lpg::io::bench::random_access_us;
use lpg::io::{decode_archive, encode_archive};
use lpg::oracle::{oracle_ebwt_reads, oracle_lmsg_trace};
use lpg::succinct::{HuffmanTable, LoudsTree, OrdinalTree, RankBitmap};
use lpg::tree::{GrammarTree, LabelMode};
use lpg::ReadCollection;

struct Counting;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Relaxed) + layout.size();
            PEAK.fetch_max(now, Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Relaxed);
    }
}

#[global_allocator]
static GLOBAL: Counting = Counting;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Runs `f`, turning a panic into a failure with its message.
fn guarded(f: impl FnOnce() -> Outcome + std::panic::UnwindSafe) -> Outcome {
    match std::panic::catch_unwind(f) {
        Ok(o) => o,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        }
    }
}

const TRIALS: usize = 1000;

fn corpus() -> Vec<Vec<Vec<u8>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a5e);
    (0..TRIALS).map(|t| common::random_collection(&mut rng, 64, 64, t % 5 == 0)).collect()
}

fn has_duplicate(reads: &[Vec<u8>]) -> bool {
    let mut seen = std::collections::HashSet::new();
    reads.iter().any(|r| !seen.insert(r))
}

fn mode_for(t: usize) -> LabelMode {
    if t.is_multiple_of(2) {
        LabelMode::Fixed
    } else {
        LabelMode::Huffman
    }
}

/// Criteria 1 and 2 in one pass over the corpus.
fn oracle_equivalence(corpus: &[Vec<Vec<u8>>]) -> (Outcome, Outcome) {
    let t0 = Instant::now();
    let (mut final_bad, mut level_bad, mut levels_checked) = (Vec::new(), Vec::new(), 0usize);
    for (t, reads) in corpus.iter().enumerate() {
        let rc = ReadCollection::new(reads.clone()).unwrap();
        let gt = GrammarTree::encode(&build(&rc), mode_for(t)).unwrap();
        let trips = glex(&gt).unwrap();
        if infbwt(&gt, &trips).unwrap() != oracle_ebwt_reads(&rc).unwrap() {
            final_bad.push(t);
        }
        let trace = oracle_lmsg_trace(&rc).unwrap();
        let mine = infbwt_levels(&gt, &trips).unwrap();
        if mine.len() != trace.h() {
            level_bad.push(t);
            continue;
        }
        for (k, b) in mine.iter().enumerate() {
            levels_checked += 1;
            if b.symbols != trace.ebwt_per_level[trace.h() - 1 - k] {
                level_bad.push(t);
                break;
            }
        }
    }
    let dups = corpus.iter().filter(|r| has_duplicate(r)).count();
    let secs = t0.elapsed().as_secs_f64();
    let c1 = outcome(
        final_bad.is_empty() && dups * 10 >= corpus.len() && secs < 300.0,
        format!(
            "{} collections, {} with duplicate reads, {} mismatches {:?}, {:.1}s",
            corpus.len(),
            dups,
            final_bad.len(),
            &final_bad[..final_bad.len().min(5)],
            secs
        ),
    );
    let c2 = outcome(
        level_bad.is_empty(),
        format!("{levels_checked} level BWTs compared, {} collections mismatched", level_bad.len()),
    );
    (c1, c2)
}

fn losslessness(corpus: &[Vec<Vec<u8>>]) -> Outcome {
    let mut edge: Vec<Vec<Vec<u8>>> = vec![
        vec![b"GATTACA".to_vec()],
        vec![b"A".to_vec()],
        vec![b"A".to_vec(), b"C".to_vec(), b"A".to_vec(), b"N".to_vec()],
        vec![b"ACGTTGCA".to_vec(); 40],
        vec![vec![b'A'; 5000]],
        vec![vec![b'A'; 64], vec![b'A'; 63], vec![b'A'; 1]],
        vec![b"ACACACACACACACACACACACAC".to_vec(); 3],
    ];
    edge.extend(corpus.iter().cloned());
    let mut bad = Vec::new();
    for (t, reads) in edge.iter().enumerate() {
        let rc = ReadCollection::new(reads.clone()).unwrap();
        let gt = GrammarTree::encode(&build(&rc), mode_for(t)).unwrap();
        let back = decode_archive(&encode_archive(&gt)).unwrap();
        let ok = back == gt && back.decode_reads().unwrap() == *reads;
        if !ok {
            bad.push(t);
        }
    }
    outcome(bad.is_empty(), format!("{} collections (7 edge cases), {} failed {:?}", edge.len(), bad.len(), bad))
}

/// Builder ranks per level, keyed by tree identifier.
fn builder_levels(gr: &Grammar, ids: &[u32]) -> Vec<Vec<(u32, u32)>> {
    let mut levels: Vec<Vec<(u32, u32)>> = vec![vec![]; gr.h];
    for (k, rule) in gr.rules.iter().enumerate() {
        if let Origin::Lmsg { level, rank } = rule.origin {
            levels[level as usize].push((ids[k], rank));
        }
    }
    levels.iter_mut().for_each(|l| l.sort_unstable());
    levels
}

fn glex_inverse(corpus: &[Vec<Vec<u8>>]) -> Outcome {
    let (mut bad, mut ranked) = (Vec::new(), 0usize);
    for (t, reads) in corpus.iter().enumerate() {
        let rc = ReadCollection::new(reads.clone()).unwrap();
        let gr = build(&rc);
        let (gt, ids) = GrammarTree::encode_with_ids(&gr, mode_for(t)).unwrap();
        let trips = glex(&gt).unwrap();
        let want = builder_levels(&gr, &ids);
        let ok = trips.len() == gr.h && trips.iter().skip(1).all(|tr| tr.pairs() == want[tr.level()]);
        ranked += trips.iter().skip(1).map(|t| t.len()).sum::<usize>();
        if !ok {
            bad.push(t);
        }
    }
    outcome(bad.is_empty(), format!("{ranked} ranks compared over {} collections, {} mismatched", corpus.len(), bad.len()))
}

/// Level-`k` ranks must order the text suffixes that start at their
/// occurrences.
fn rank_order_matches_suffix_order() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut checked, mut bad) = (0usize, Vec::new());
    let mut t = 0;
    while t < 400 {
        let reads = common::random_collection(&mut rng, 8, 24, t % 4 == 0);
        let rc = ReadCollection::new(reads).unwrap();
        if rc.n() > 200 {
            continue;
        }
        t += 1;
        let trace = oracle_lmsg_trace(&rc).unwrap();
        let gr = build(&rc);
        let texts: Vec<Vec<u32>> = (0..rc.m()).map(|j| rc.encoded(j)).collect();
        // terminal length of every (level, rank)
        let mut span: BTreeMap<(u32, u32), usize> = BTreeMap::new();
        for rule in &gr.rules {
            if let Origin::Lmsg { level, rank } = rule.origin {
                let mut out = Vec::new();
                gr.expand_symbol(rule.lhs, &mut out);
                span.insert((level, rank), out.len());
            }
        }
        for (lvl, text) in trace.levels.iter().enumerate().skip(1) {
            let mut occ: Vec<(u32, &[u32])> = Vec::new();
            for (j, read) in text.iter().enumerate() {
                let mut pos = 0;
                for &sym in read {
                    occ.push((sym, &texts[j][pos..]));
                    pos += span[&(lvl as u32, sym)];
                }
            }
            let mut groups: BTreeMap<u32, (&[u32], &[u32])> = BTreeMap::new();
            for &(sym, suf) in &occ {
                let e = groups.entry(sym).or_insert((suf, suf));
                e.0 = e.0.min(suf);
                e.1 = e.1.max(suf);
            }
            let gs: Vec<_> = groups.values().collect();
            checked += gs.len().saturating_sub(1);
            if gs.windows(2).any(|w| w[0].1 >= w[1].0) {
                bad.push(t);
            }
        }
    }
    outcome(bad.is_empty(), format!("400 collections of <= 200 symbols, {checked} rank boundaries, {} violations", bad.len()))
}

fn succinct_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6);
    let mut failures = Vec::new();

    // rank/select adjoints
    for len in [1usize, 63, 64, 65, 511, 4097, 70_000] {
        let density = rng.gen_range(0.01..0.99);
        let bits: Vec<bool> = (0..len).map(|_| rng.gen_bool(density)).collect();
        let b = RankBitmap::from_bits(bits.iter().copied());
        let mut ones = 0;
        for (i, &x) in bits.iter().enumerate() {
            if b.rank1(i) != ones || b.rank0(i) != i - ones {
                failures.push(format!("rank at {i} of {len}"));
                break;
            }
            if x {
                ones += 1;
                if b.select1(ones) != Some(i) {
                    failures.push(format!("select1({ones}) of {len}"));
                    break;
                }
            } else if b.select0(i + 1 - ones) != Some(i) {
                failures.push(format!("select0 at {i} of {len}"));
                break;
            }
        }
        if b.select1(ones + 1).is_some() {
            failures.push("select1 past end".into());
        }
    }

    // LOUDS against a pointer tree, every node exercised
    for (nodes, seed) in [(1usize, 1u64), (2, 2), (50, 3), (1000, 4), (10_000, 5)] {
        let mut trng = ChaCha8Rng::seed_from_u64(seed);
        let mut children = vec![Vec::new(); nodes];
        for v in 1..nodes {
            let lo = v.saturating_sub(1 + trng.gen_range(0..20));
            children[trng.gen_range(lo..v)].push(v);
        }
        let tree = OrdinalTree { children };
        let louds = LoudsTree::encode(&tree);
        if louds.bits().len() != 2 * nodes + 1 {
            failures.push(format!("bitmap length for {nodes} nodes"));
        }
        let order = tree.level_order();
        let mut number = vec![0; nodes];
        for (k, &v) in order.iter().enumerate() {
            number[v] = k + 1;
        }
        let id = |v: usize| louds.node(number[v]);
        let (mut leaves, mut internals) = (0, 0);
        for &v in &order {
            let u = id(v);
            let kids = &tree.children[v];
            let mut ok = louds.nodemap(u) == number[v] && louds.degree(u) == kids.len();
            for (i, &c) in kids.iter().enumerate() {
                let cu = louds.child(u, i + 1).unwrap();
                ok &= cu == id(c) && louds.parent(cu).unwrap() == u;
                if i > 0 {
                    ok &= louds.psibling(cu).unwrap() == id(kids[i - 1]);
                } else {
                    ok &= louds.psibling(cu).is_err();
                }
            }
            if kids.is_empty() {
                leaves += 1;
                ok &= louds.is_leaf(u) && louds.leafrank(u) == leaves;
            } else {
                internals += 1;
                ok &= louds.internalrank(u) == internals && louds.internalselect(internals).unwrap() == u;
            }
            if !ok {
                failures.push(format!("LOUDS node {v} of {nodes}"));
                break;
            }
        }
    }

    // Huffman roundtrip on a skewed 1e5-symbol stream
    let stream: Vec<u32> = (0..100_000).map(|_| (rng.gen::<f64>().powi(3) * 300.0) as u32 + 1).collect();
    let mut freq: BTreeMap<u32, u64> = BTreeMap::new();
    stream.iter().for_each(|&s| *freq.entry(s).or_default() += 1);
    let table = HuffmanTable::build(&freq.into_iter().collect::<Vec<_>>()).unwrap();
    let (words, len) = table.encode(&stream).unwrap();
    if table.decode(&words, len, stream.len()).as_deref() != Some(&stream[..]) {
        failures.push("huffman roundtrip".into());
    }

    outcome(failures.is_empty(), if failures.is_empty() { "rank/select, LOUDS (up to 10^4 nodes), Huffman 10^5".to_string() } else { failures.join("; ") })
}

struct Synthetic {
    rc: ReadCollection,
    gt: GrammarTree,
    archive_bytes: usize,
    secs: f64,
}

fn synthetic() -> Synthetic {
    let t0 = Instant::now();
    let reads = common::synthetic_reads(100_000, 152, 20, 0.01, 7);
    let rc = ReadCollection::new(reads).unwrap();
    let gt = GrammarTree::encode(&build(&rc), LabelMode::Huffman).unwrap();
    let archive_bytes = encode_archive(&gt).len();
    Synthetic { rc, gt, archive_bytes, secs: t0.elapsed().as_secs_f64() }
}

fn compression(s: &Synthetic) -> Outcome {
    let plain = s.rc.n();
    let ratio = s.archive_bytes as f64 / plain as f64;
    outcome(
        ratio <= 0.5 && s.secs < 120.0,
        format!("{} reads, plain {plain} B, archive {} B, archive/plain {ratio:.3}, {:.1}s", s.rc.m(), s.archive_bytes, s.secs),
    )
}

fn random_access(s: &Synthetic) -> Outcome {
    let us = random_access_us(&s.gt, 10_000, 42).unwrap();
    let sample_ok = (0..s.rc.m()).step_by(97).all(|j| s.gt.extract_read(j).unwrap() == s.rc.reads()[j]);
    outcome(us < 1000.0 && sample_ok, format!("{us:.1} us per read over 10^4 extractions"))
}

fn glex_memory(s: &Synthetic) -> Outcome {
    let base = CURRENT.load(Relaxed);
    PEAK.store(base, Relaxed);
    let t0 = Instant::now();
    let trips = glex(&s.gt).unwrap();
    let secs = t0.elapsed().as_secs_f64();
    let extra = PEAK.load(Relaxed) - base;
    let plain = s.rc.n();
    drop(trips);
    outcome(
        extra as f64 <= plain as f64,
        format!("peak extra {extra} B vs input {plain} B ({:.3}x), {:.3} us/byte", extra as f64 / plain as f64, secs * 1e6 / plain as f64),
    )
}

fn main() {
    let corpus = corpus();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let (c1, c2) = std::panic::catch_unwind(|| oracle_equivalence(&corpus))
        .unwrap_or_else(|_| (outcome(false, "panicked"), outcome(false, "panicked")));
    results.push((1, "oracle equivalence of the final eBWT", c1));
    results.push((2, "per-level BWT equivalence", c2));
    results.push((3, "losslessness through the archive", guarded(|| losslessness(&corpus))));
    results.push((4, "GLex ranks equal builder ranks", guarded(|| glex_inverse(&corpus))));
    results.push((5, "rank order implies suffix order", guarded(rank_order_matches_suffix_order)));
    results.push((6, "succinct structure laws", guarded(succinct_laws)));
    let syn = std::panic::catch_unwind(synthetic);
    match &syn {
        Ok(s) => {
            let s = std::panic::AssertUnwindSafe(s);
            results.push((7, "synthetic archive <= 0.5x input", guarded(|| compression(&s))));
            results.push((8, "random access < 1 ms per read", guarded(|| random_access(&s))));
            results.push((9, "GLex peak extra memory <= 1.0x input", guarded(|| glex_memory(&s))));
        }
        Err(_) => {
            for (k, name) in [(7, "synthetic archive"), (8, "random access"), (9, "GLex memory")] {
                results.push((k, name, outcome(false, "synthetic build panicked")));
            }
        }
    }
    let mut failed = 0;
    for (k, name, o) in &results {
        println!("{} criterion {k}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
