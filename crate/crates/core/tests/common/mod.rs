#![allow(dead_code)]

use harmonic_chain::{ChainSpec, GroupSelection};
use rand::seq::SliceRandom;
use rand::Rng;

/// Which of α₁, α₂, α₃ are nonzero.
pub const PATTERNS: [[bool; 3]; 7] = [
    [true, false, false],
    [true, true, false],
    [true, false, true],
    [true, true, true],
    [false, true, false],
    [false, true, true],
    [false, false, true],
];

/// Positive couplings up to α₃ with trailing zeros trimmed.
pub fn random_couplings<R: Rng>(rng: &mut R) -> Vec<f64> {
    let pattern = PATTERNS[rng.gen_range(0..PATTERNS.len())];
    let mut alphas: Vec<f64> = pattern
        .iter()
        .map(|&on| if on { rng.gen_range(0.05..5.0) } else { 0.0 })
        .collect();
    while alphas.last() == Some(&0.0) {
        alphas.pop();
    }
    alphas
}

pub fn random_even_length<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> usize {
    2 * rng.gen_range(lo / 2..=hi / 2)
}

/// Two disjoint, nonempty random groups with at most `max_total`
/// oscillators together.
pub fn random_selection<R: Rng>(rng: &mut R, n: usize, max_total: usize) -> GroupSelection {
    let total = rng.gen_range(2..=max_total.min(n));
    let split = rng.gen_range(1..total);
    let mut sites: Vec<usize> = (0..n).collect();
    sites.shuffle(rng);
    GroupSelection::new(sites[..split].to_vec(), sites[split..total].to_vec(), n).unwrap()
}

pub fn ring(n: usize, alphas: &[f64]) -> ChainSpec {
    ChainSpec::ring(n, alphas.to_vec()).unwrap()
}
