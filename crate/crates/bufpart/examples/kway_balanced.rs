//! Balanced k-way partition by recursive buffered bisection.

use bufpart::balanced::kway_balanced;
use bufpart::generators::clique_ring;

fn main() -> bufpart::Result<()> {
    let (g, _) = clique_ring(&[10; 8], 0.05);
    let w = g.total_weight();
    for k in [2, 4, 8] {
        let kw = kway_balanced(&g, k, 0.1)?;
        let heaviest = kw.parts.iter().map(|p| g.weight_of(p)).fold(0.0, f64::max);
        println!(
            "k = {k}: cost {:.3}, buffer {:.3} of W, heaviest part {:.3}·W/k (cap 6)",
            kw.cost,
            kw.buffer_fraction,
            heaviest * k as f64 / w
        );
    }
    Ok(())
}
