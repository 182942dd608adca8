#![allow(dead_code)]

use certnorm::NonnegMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn positive_matrix(rng: &mut impl Rng, m: usize, n: usize) -> NonnegMatrix {
    let data = (0..m * n).map(|_| rng.gen_range(0.05..5.0)).collect();
    NonnegMatrix::new(m, n, data).unwrap()
}

pub fn positive_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.01..10.0)).collect()
}

pub fn b_eps(eps: f64) -> NonnegMatrix {
    NonnegMatrix::from_rows(&[vec![eps, 1.0], vec![1.0, eps]]).unwrap()
}

/// Random stochastic matrix with strictly positive entries.
pub fn positive_kernel(rng: &mut impl Rng, n: usize) -> NonnegMatrix {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let r: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
            let s: f64 = r.iter().sum();
            r.into_iter().map(|v| v / s).collect()
        })
        .collect();
    NonnegMatrix::from_rows(&rows).unwrap()
}

pub fn sup_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Weight vectors for `terms` seminorms whose supports jointly cover `0..n`.
pub fn covering_weights(
    rng: &mut impl Rng,
    n: usize,
    terms: usize,
    disjoint: bool,
) -> Vec<Vec<f64>> {
    let mut w = vec![vec![0.0; n]; terms];
    for i in 0..n {
        let owner = if i < terms {
            i
        } else {
            rng.gen_range(0..terms)
        };
        w[owner][i] = rng.gen_range(0.1..4.0);
        if !disjoint {
            for (j, row) in w.iter_mut().enumerate() {
                if j != owner && rng.gen_bool(0.5) {
                    row[i] = rng.gen_range(0.1..4.0);
                }
            }
        }
    }
    w
}

/// A random spec of the requested shape on `R^n`:
/// 0 weighted leaf, 1 disjoint composition, 2 overlapping composition,
/// 3 disjoint dual composition, 4 overlapping dual composition.
pub fn random_spec(rng: &mut impl Rng, n: usize, shape: u8) -> certnorm::NormSpec {
    use certnorm::{NormSpec, WeightedPTerm};
    let exp = |rng: &mut dyn rand::RngCore| rng.gen_range(1.2..6.0);
    if shape == 0 || n < 2 {
        return NormSpec::weighted(positive_vector(rng, n), exp(rng)).unwrap();
    }
    let d = rng.gen_range(2..=n.min(3));
    let disjoint = shape == 1 || shape == 3;
    let terms: Vec<WeightedPTerm> = covering_weights(rng, n, d, disjoint)
        .into_iter()
        .map(|w| WeightedPTerm::new(w, exp(rng)).unwrap())
        .collect();
    if shape <= 2 {
        NormSpec::composed(terms, exp(rng)).unwrap()
    } else {
        NormSpec::dual_composed(terms, exp(rng)).unwrap()
    }
}
