//! Robust vertex expansion: the fewest outside vertices that capture a
//! (1 − η) share of a set's cut cost.

use bufpart::certify::robust_expansion;
use bufpart::{Graph, VertexSet};

fn main() -> bufpart::Result<()> {
    // A star-like boundary: vertex 0 sees 4 outside vertices with costs 4, 2, 1, 1.
    let g = Graph::new(6, &[(0, 1, 1.0), (0, 2, 4.0), (0, 3, 2.0), (0, 4, 1.0), (0, 5, 1.0), (1, 2, 1.0)], None)?;
    let s = VertexSet::from_iter(6, [0, 1]);
    for eta in [0.25, 0.5, 0.75] {
        let r = robust_expansion(&g, &s, eta)?;
        println!("η = {eta}: N = {} (target {:.2}), φ^V = {:.2}, witness {:?}", r.n_eta, r.target, r.phi_v, r.witness.to_vec());
    }
    Ok(())
}
