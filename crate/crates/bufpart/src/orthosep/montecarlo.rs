//! Parallel Monte Carlo over separator draws.
//!
//! Draws are grouped in fixed-size chunks; chunk `c` uses stream
//! `(seed, tag, 0, c)` and chunk results are merged in chunk order, so the
//! outcome is independent of the thread count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::rng::{RngFactory, StreamRng};

pub const CHUNK: u64 = 1024;

/// Runs `n_draws` calls of `draw`, accumulating into per-chunk states that
/// are merged left to right.
pub fn fan_out<A, I, D, M>(seed: u64, tag: &str, n_draws: u64, init: I, draw: D, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    D: Fn(&mut StreamRng, &mut A) + Sync,
    M: Fn(A, A) -> A,
{
    let f = RngFactory::new(seed);
    let chunks = n_draws.div_ceil(CHUNK);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = init();
            let mut rng = f.stream(tag, 0, c);
            let len = CHUNK.min(n_draws - c * CHUNK);
            for _ in 0..len {
                draw(&mut rng, &mut acc);
            }
            acc
        })
        .collect();
    parts.into_iter().reduce(merge).unwrap_or_else(init)
}

/// Standard error of a Bernoulli rate estimate with true rate `p`.
pub fn std_error(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Report written by statistical checks.
#[derive(Clone, Debug, Default, Serialize)]
pub struct McSummary {
    pub param_set: BTreeMap<String, f64>,
    pub n_draws: u64,
    pub empirical_rates: BTreeMap<String, f64>,
    pub bounds: BTreeMap<String, f64>,
    pub pass: bool,
}

impl McSummary {
    /// Records `rate ≤ bound + 4·se(bound)` and folds it into `pass`.
    pub fn check_upper(&mut self, name: &str, rate: f64, bound: f64) -> bool {
        let ok = rate <= bound + 4.0 * std_error(bound, self.n_draws);
        self.empirical_rates.insert(name.into(), rate);
        self.bounds.insert(name.into(), bound);
        self.pass &= ok;
        ok
    }

    /// Records `|rate − target| ≤ 4·se(target)`.
    pub fn check_close(&mut self, name: &str, rate: f64, target: f64) -> bool {
        let ok = (rate - target).abs() <= 4.0 * std_error(target, self.n_draws);
        self.empirical_rates.insert(name.into(), rate);
        self.bounds.insert(name.into(), target);
        self.pass &= ok;
        ok
    }
}
