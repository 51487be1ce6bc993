//! Lower bounds and the exhaustive optimum for a small graph.

use bufpart::certify::{brute_force_h_k_eps, check_buffered_lower_bound, lower_bound_unbuffered};
use bufpart::{BufferedPartition, Graph, VertexSet};

fn main() -> bufpart::Result<()> {
    // Two triangles joined by one edge.
    let g = Graph::new(6, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0), (2, 3, 1.0)], None)?;
    println!("λ_2/2 = {:.4}", lower_bound_unbuffered(&g, 2)?);

    for eps in [0.0, 0.25, 0.8] {
        let (opt, witness) = brute_force_h_k_eps(&g, 2, eps)?;
        let parts: Vec<_> = witness.parts.iter().map(VertexSet::to_vec).collect();
        let bufs: Vec<_> = witness.buffers.iter().map(VertexSet::to_vec).collect();
        println!("h^(2,{eps}) = {opt:.4}  parts {parts:?} buffers {bufs:?}");
    }

    // Moving a bridge endpoint into a buffer makes that side's cut free.
    let part = BufferedPartition {
        parts: vec![VertexSet::from_iter(6, [0, 1, 2]), VertexSet::from_iter(6, [4, 5])],
        buffers: vec![VertexSet::new(6), VertexSet::from_iter(6, [3])],
        epsilon: 0.8,
    };
    let check = check_buffered_lower_bound(&g, &part)?;
    println!("λ_k = {:.4} ≤ 2φ + ε = {:.4}: {}", check.lambda_k, check.stated_rhs, check.pass);
    Ok(())
}
