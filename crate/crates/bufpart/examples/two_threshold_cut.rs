//! The two-threshold buffered sweep on the second eigenvector.

use bufpart::balanced::cheeger2_buffered;
use bufpart::generators::clique_ring;

fn main() -> bufpart::Result<()> {
    let (g, _) = clique_ring(&[15, 15], 0.2);
    for eps in [0.05, 0.1, 0.2] {
        let cut = cheeger2_buffered(&g, eps)?;
        let bound = 4.0 * (1.0 + 2.0 / eps) * cut.lambda2;
        println!(
            "ε = {eps}: |S| = {} |T| = {} |B| = {}  φ = {:.4e} ≤ {:.4e}  w(B)/w(S) = {:.3}",
            cut.s.len(),
            cut.t.len(),
            cut.b.len(),
            cut.phi,
            bound,
            cut.buffer_ratio
        );
    }
    Ok(())
}
