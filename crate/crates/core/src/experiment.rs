//! Empirical distribution of Birkhoff ratios of random positive matrices.
//!
//! Entries are i.i.d. uniform on `[k, 10]`. Every sample draws from its own
//! ChaCha8 stream keyed by `(seed, k, index)`, so the output does not depend
//! on scheduling.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::birkhoff_ratio;
use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;

pub const UPPER_ENTRY: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaSample {
    pub k: u32,
    pub sample_index: usize,
    pub kappa: f64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the stream for sample `index` at lower bound `k`.
pub fn stream_seed(seed: u64, k: u32, index: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ u64::from(k)) ^ index as u64)
}

/// `n x n` matrix with i.i.d. entries uniform on `[k, 10]`.
pub fn random_matrix(n: usize, k: f64, rng: &mut impl Rng) -> NonnegMatrix {
    let data = (0..n * n).map(|_| rng.gen_range(k..=UPPER_ENTRY)).collect();
    NonnegMatrix::new(n, n, data).expect("entries are nonnegative")
}

pub fn kappa_distribution(
    n: usize,
    k_min: u32,
    k_max: u32,
    samples: usize,
    seed: u64,
) -> Result<Vec<KappaSample>> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    if k_min > k_max || f64::from(k_max) > UPPER_ENTRY {
        return Err(Error::OutOfRange(format!(
            "need k_min <= k_max <= {UPPER_ENTRY}, got {k_min}..{k_max}"
        )));
    }
    let jobs: Vec<(u32, usize)> = (k_min..=k_max)
        .flat_map(|k| (0..samples).map(move |i| (k, i)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|&(k, i)| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, k, i));
            let a = random_matrix(n, f64::from(k), &mut rng);
            KappaSample {
                k,
                sample_index: i,
                kappa: birkhoff_ratio(&a),
            }
        })
        .collect())
}

pub fn write_csv(samples: &[KappaSample], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "k,sample_index,kappa")?;
    for s in samples {
        writeln!(out, "{},{},{}", s.k, s.sample_index, s.kappa)?;
    }
    Ok(())
}

/// Median of the `kappa` values per `k`, in increasing `k`.
pub fn medians(samples: &[KappaSample]) -> Vec<(u32, f64)> {
    let mut ks: Vec<u32> = samples.iter().map(|s| s.k).collect();
    ks.sort_unstable();
    ks.dedup();
    ks.into_iter()
        .map(|k| {
            let mut v: Vec<f64> = samples
                .iter()
                .filter(|s| s.k == k)
                .map(|s| s.kappa)
                .collect();
            v.sort_by(f64::total_cmp);
            let m = v.len();
            let med = if m % 2 == 1 {
                v[m / 2]
            } else {
                0.5 * (v[m / 2 - 1] + v[m / 2])
            };
            (k, med)
        })
        .collect()
}
