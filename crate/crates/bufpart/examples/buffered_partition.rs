//! End-to-end ε-buffered k-partitioning with its certificate.

use bufpart::generators::clique_ring;
use bufpart::partitioner::{buffered_k_partition, AlgoConstants};

fn main() -> bufpart::Result<()> {
    // Four cliques joined in a ring by cheap bridges.
    let (g, labels) = clique_ring(&[20, 20, 20, 20], 0.01);
    let kp = buffered_k_partition(&g, 4, 0.1, 0.2, &AlgoConstants::default(), 0)?;

    for (i, (p, b)) in kp.partition.parts.iter().zip(&kp.partition.buffers).enumerate() {
        let mut cliques: Vec<usize> = p.iter().map(|u| labels[u]).collect();
        cliques.dedup();
        println!("part {i}: {} core, {} buffer, cliques {:?}, φ = {:.3e}", p.len(), b.len(), cliques, g.expansion(p, b));
    }
    println!("measured ε {:.4} (requested 0.1, within: {})", kp.partition.epsilon, kp.within_requested_epsilon);
    println!("valid: {}", kp.report.is_valid());

    let c = &kp.certificate;
    println!("λ_k = {:.4e}, cost {:.4e}, λ_k/2 = {:.4e}", c.lambda_k, c.achieved_cost, c.lower_bound_unbuffered);
    println!("λ_k ≤ 2φ + ε holds: {}", c.lower_bound_buffered_check);
    println!("driver: k̂ = {}, k′ = {}, ε̂ = {:.3e}", kp.params.k_hat, kp.params.k_prime, kp.params.epsilon_hat);
    println!("accepted on restart {} of {}", kp.partial.restart, kp.partial.runs.len());
    Ok(())
}
