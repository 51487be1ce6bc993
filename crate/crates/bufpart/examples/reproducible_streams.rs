//! Counter-based random streams: every (seed, tag, restart, round) names an
//! independent stream, so parallel work consumes randomness in a fixed order.

use bufpart::orthosep::montecarlo::fan_out;
use bufpart::rng::RngFactory;

fn main() {
    let f = RngFactory::new(42);
    let a: Vec<u64> = (0..3).map(|_| f.stream("crude", 0, 7).next_u64()).collect();
    println!("same stream thrice: {a:x?}");
    println!("next round: {:x}", f.stream("crude", 0, 8).next_u64());
    println!("other restart: {:x}", f.stream("crude", 1, 7).next_u64());

    // A parallel Monte Carlo estimate of Pr{N(0,1) ≥ 1}; identical for any
    // thread count because chunks are merged in order.
    let n = 200_000;
    let hits = fan_out(42, "demo", n, || 0u64, |rng, acc| *acc += (rng.normal() >= 1.0) as u64, |x, y| x + y);
    println!("Pr{{N ≥ 1}} ≈ {:.4}", hits as f64 / n as f64);
}
