#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BASES: &[u8] = b"ACGT";

/// Reads of `read_len` bases sampled uniformly from a random reference of
/// `ref_len` bases at `coverage`x, each base substituted with probability
/// `mutation`.
pub fn synthetic_reads(ref_len: usize, read_len: usize, coverage: usize, mutation: f64, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reference: Vec<u8> = (0..ref_len).map(|_| BASES[rng.gen_range(0..4)]).collect();
    let count = coverage * ref_len / read_len;
    (0..count)
        .map(|_| {
            let at = rng.gen_range(0..=ref_len - read_len);
            reference[at..at + read_len]
                .iter()
                .map(|&b| {
                    if rng.gen_bool(mutation) {
                        let mut x = BASES[rng.gen_range(0..4)];
                        while x == b {
                            x = BASES[rng.gen_range(0..4)];
                        }
                        x
                    } else {
                        b
                    }
                })
                .collect()
        })
        .collect()
}

/// A random collection over ACGTN with `m` in `1..=max_m` and read lengths in
/// `1..=max_len`; with `dups`, some reads are copies of earlier ones.
pub fn random_collection(rng: &mut ChaCha8Rng, max_m: usize, max_len: usize, dups: bool) -> Vec<Vec<u8>> {
    let m = rng.gen_range(1..=max_m);
    let mut reads: Vec<Vec<u8>> = Vec::with_capacity(m);
    for i in 0..m {
        if dups && i > 0 && rng.gen_bool(0.4) {
            let k = rng.gen_range(0..i);
            reads.push(reads[k].clone());
            continue;
        }
        let len = rng.gen_range(1..=max_len);
        reads.push((0..len).map(|_| b"ACGTN"[rng.gen_range(0..5)]).collect());
    }
    if dups && m == 1 {
        reads.push(reads[0].clone());
    }
    reads
}
