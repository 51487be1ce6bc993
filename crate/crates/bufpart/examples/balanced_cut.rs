//! Buffered 1/4-balanced cut on a planted two-community graph.

use bufpart::balanced::buffered_balanced_cut;
use bufpart::generators::planted_partition;
use bufpart::rng::RngFactory;
use bufpart::VertexSet;

fn main() -> bufpart::Result<()> {
    let (g, labels) = planted_partition(&[100, 100], 0.2, 0.01, &mut RngFactory::new(3).stream("graph", 0, 0));
    let bc = buffered_balanced_cut(&g, 0.1)?;
    let w = g.total_weight();
    println!("w(L)/W = {:.3}  w(R)/W = {:.3}  buffer ratio {:.3}", bc.balance.0, bc.balance.1, bc.buffer_ratio);
    println!("cut cost δ(L, R) = {}", bc.cut_cost);

    let planted = VertexSet::from_iter(g.n(), (0..g.n()).filter(|&u| labels[u] == 0));
    println!("planted cut cost   = {}", g.cut_cost(&planted, &planted.complement()));
    for (i, lvl) in bc.levels.iter().enumerate() {
        println!("level {i}: {} vertices, λ₂ = {:.4}, φ = {:.4}, w(L) = {:.1}/{w:.1}", lvl.vertices, lvl.lambda2, lvl.phi, lvl.w_l);
    }
    assert!(bc.violations.is_empty(), "{:?}", bc.violations);
    Ok(())
}
