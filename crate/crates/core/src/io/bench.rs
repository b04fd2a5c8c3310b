//! Desk-scale benchmark: compression ratio, random read access time and
//! GLex time per input byte.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builder::build;
use crate::error::Result;
use crate::glex::glex;
use crate::io::archive::encode_archive;
use crate::text::ReadCollection;
use crate::tree::{GrammarTree, LabelMode};

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub reads: usize,
    /// Input size: read bytes plus one separator per read.
    pub plain_bytes: usize,
    pub archive_bytes: usize,
    pub compression_ratio: f64,
    pub access_trials: usize,
    pub access_us_per_read: f64,
    pub glex_us_per_byte: f64,
    pub build_seconds: f64,
}

/// Mean wall-clock microseconds per extraction of a uniformly random read.
pub fn random_access_us(gt: &GrammarTree, trials: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<usize> = (0..trials).map(|_| rng.gen_range(0..gt.m())).collect();
    // warm up
    for &j in picks.iter().take(100) {
        gt.extract_read(j)?;
    }
    let t = Instant::now();
    let mut total = 0usize;
    for &j in &picks {
        total += gt.extract_read(j)?.len();
    }
    std::hint::black_box(total);
    Ok(t.elapsed().as_secs_f64() * 1e6 / trials.max(1) as f64)
}

pub fn bench(rc: &ReadCollection, mode: LabelMode, trials: usize, seed: u64) -> Result<BenchReport> {
    let t = Instant::now();
    let gt = GrammarTree::encode(&build(rc), mode)?;
    let build_seconds = t.elapsed().as_secs_f64();
    let archive_bytes = encode_archive(&gt).len();

    let t = Instant::now();
    let trips = glex(&gt)?;
    let glex_us = t.elapsed().as_secs_f64() * 1e6;
    std::hint::black_box(trips.len());

    Ok(BenchReport {
        reads: rc.m(),
        plain_bytes: rc.n(),
        archive_bytes,
        compression_ratio: rc.n() as f64 / archive_bytes as f64,
        access_trials: trials,
        access_us_per_read: random_access_us(&gt, trials, seed)?,
        glex_us_per_byte: glex_us / rc.n() as f64,
        build_seconds,
    })
}
