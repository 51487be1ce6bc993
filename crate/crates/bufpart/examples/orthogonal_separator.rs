//! Calibrating and sampling the Gaussian orthogonal separator on a small
//! cloud of unit vectors.

use bufpart::orthosep::{gaussian_tail, sample_one_buffer, sample_two_buffers, SeparatorParams, UnitVectors};
use bufpart::rng::RngFactory;

fn main() -> bufpart::Result<()> {
    // Four tight clusters of five vectors each along the coordinate axes.
    let dim = 4;
    let mut data = Vec::new();
    for c in 0..dim {
        for j in 0..5 {
            let mut v = vec![0.02 * j as f64; dim];
            v[c] = 1.0;
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            data.extend(v.into_iter().map(|x| x / n));
        }
    }
    let vecs = UnitVectors::new(&data, dim)?;

    // Clusters sit ≈ √2 apart, so a large radius still separates them.
    let p = SeparatorParams::calibrate(0.2, 4.0, 1.2)?;
    println!("t = {:.4}  α = Φ̄(t) = {:.3e}  ε′ = {:.4}", p.threshold, p.alpha, p.buffer_width);
    assert_eq!(p.alpha, gaussian_tail(p.threshold));

    let f = RngFactory::new(11);
    let mut hits = 0;
    for i in 0..20_000 {
        let s = sample_one_buffer(&vecs, &p, &mut f.stream("demo", 0, i));
        hits += s.x.len();
    }
    println!("mean |X| per draw {:.4}  (expected {:.4})", hits as f64 / 20_000.0, 20.0 * p.alpha);

    // Measured variant with two buffer layers and the ball test.
    let measured = SeparatorParams::calibrate_measured(0.2, 0.5, 1.2)?;
    let mu = vec![0.2; 20];
    let mut rng = f.stream("measured", 0, 0);
    let mut shown = 0;
    while shown < 4 {
        let s = sample_two_buffers(&vecs, &mu, &measured, &mut rng)?;
        if s.x.is_empty() && s.y.is_empty() && s.z.is_empty() {
            continue;
        }
        shown += 1;
        println!("X {:?}  Y {:?}  Z {:?}  rejected {}", s.x.to_vec(), s.y.to_vec(), s.z.to_vec(), s.rejected);
    }
    Ok(())
}
