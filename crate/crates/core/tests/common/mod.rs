//! Exact word laws of stationary binary Markov chains.
//!
//! A chain of order `k` is given by `p[s] = P(next = 1 | last k bits = s)`,
//! with `s` packed oldest bit first.

#![allow(dead_code)]

use market_info::entropy::entropy_bits;
use nalgebra::{DMatrix, DVector};

fn step(p: &[f64], order: usize, s: usize, bit: usize) -> (usize, f64) {
    let mask = (1 << order) - 1;
    let prob = if bit == 1 { p[s] } else { 1.0 - p[s] };
    (((s << 1) | bit) & mask, prob)
}

/// Stationary law of the `2^k` lag states.
pub fn stationary(p: &[f64], order: usize) -> Vec<f64> {
    let states = 1 << order;
    assert_eq!(p.len(), states);
    // rows of (Pᵀ - I) with the last replaced by the normalization
    let mut a = DMatrix::<f64>::zeros(states, states);
    for s in 0..states {
        for bit in 0..2 {
            let (t, prob) = step(p, order, s, bit);
            a[(t, s)] += prob;
        }
        a[(s, s)] -= 1.0;
    }
    for s in 0..states {
        a[(states - 1, s)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(states);
    b[states - 1] = 1.0;
    let pi = a.lu().solve(&b).expect("ergodic chain");
    pi.iter().copied().collect()
}

/// Probabilities of all `2^L` words of length `L`, first bit most significant.
pub fn word_probabilities(p: &[f64], order: usize, word_length: usize) -> Vec<f64> {
    let pi = stationary(p, order);
    let mut out = vec![0.0; 1 << word_length];
    if word_length <= order {
        for (s, w) in pi.iter().enumerate() {
            out[s >> (order - word_length)] += w;
        }
        return out;
    }
    for (word, slot) in out.iter_mut().enumerate() {
        let head = word >> (word_length - order);
        let mut prob = pi[head];
        let mut state = head;
        for t in order..word_length {
            let bit = (word >> (word_length - 1 - t)) & 1;
            let (next, q) = step(p, order, state, bit);
            prob *= q;
            state = next;
        }
        *slot = prob;
    }
    out
}

/// `H^1, ..., H^{max_length}` in bits.
pub fn block_entropies(p: &[f64], order: usize, max_length: usize) -> Vec<f64> {
    (1..=max_length)
        .map(|l| entropy_bits(word_probabilities(p, order, l)))
        .collect()
}

/// Every transition table of the given order with entries on `grid`.
pub fn all_chains(order: usize, grid: &[f64]) -> Vec<Vec<f64>> {
    let states = 1 << order;
    let total = grid.len().pow(states as u32);
    (0..total)
        .map(|mut idx| {
            (0..states)
                .map(|_| {
                    let g = grid[idx % grid.len()];
                    idx /= grid.len();
                    g
                })
                .collect()
        })
        .collect()
}

/// `0.1, 0.2, ..., 0.9`.
pub fn decile_grid() -> Vec<f64> {
    (1..=9).map(|i| f64::from(i) / 10.0).collect()
}
