//! Turning a partial partitioning into a full buffered partition.

use crate::error::{Error, Result};
use crate::graph::{BufferedPartition, Graph, VertexSet};
use crate::partitioner::PartialPartition;

fn finish(g: &Graph, parts: Vec<VertexSet>, buffers: Vec<VertexSet>) -> BufferedPartition {
    let mut bp = BufferedPartition { parts, buffers, epsilon: 0.0 };
    bp.epsilon = bp.measured_epsilon(g);
    bp
}

/// Keeps the `k_target − 1` lightest tuples and folds everything else
/// (leftovers, all A′/A″ sets and the heavier tuples) into one last part:
/// P′ = R′_P ∪ ⋃A′ ∪ ⋃_{tail} P and B′ = R′_B ∪ ⋃A″ ∪ ⋃_{tail} B.
/// Tuples are ordered by w(P_i), ties by position. The result's ε is the
/// measured maximum buffer ratio.
pub fn complete_partition(pp: &PartialPartition, g: &Graph, k_target: usize) -> Result<BufferedPartition> {
    let k_prime = pp.tuples.len();
    if k_target == 0 {
        return Err(Error::InvalidParameter("k_target must be at least 1".into()));
    }
    if k_target > k_prime.max(1) {
        return Err(Error::Partition(format!(
            "only {k_prime} tuples survived for {k_target} parts; rerun with a larger δ slack or more restarts"
        )));
    }
    let mut order: Vec<usize> = (0..k_prime).collect();
    let w: Vec<f64> = pp.tuples.iter().map(|t| g.weight_of(&t.p)).collect();
    order.sort_by(|&a, &b| w[a].total_cmp(&w[b]).then(a.cmp(&b)));

    let mut parts = Vec::with_capacity(k_target);
    let mut buffers = Vec::with_capacity(k_target);
    for &i in &order[..k_target - 1] {
        parts.push(pp.tuples[i].p.clone());
        buffers.push(pp.tuples[i].b.clone());
    }
    let mut last_p = pp.r_p_prime.clone();
    let mut last_b = pp.r_b_prime.clone();
    for t in &pp.tuples {
        last_p.union_with(&t.a_prime);
        last_b.union_with(&t.a_double_prime);
    }
    for &i in &order[k_target - 1..] {
        last_p.union_with(&pp.tuples[i].p);
        last_b.union_with(&pp.tuples[i].b);
    }
    if last_p.is_empty() {
        // Only possible with no tuples at all and k_target = 1.
        last_p = last_b;
        last_b = VertexSet::new(g.n());
    }
    parts.push(last_p);
    buffers.push(last_b);
    Ok(finish(g, parts, buffers))
}

/// Merges the `k′ − k_target + 1` heaviest parts (by w(P)) together with
/// their buffers. Surviving parts keep their relative order.
pub fn merge_tail(bp: &BufferedPartition, g: &Graph, k_target: usize) -> Result<BufferedPartition> {
    let k = bp.k();
    if k_target == 0 {
        return Err(Error::InvalidParameter("k_target must be at least 1".into()));
    }
    if k_target >= k {
        return Ok(bp.clone());
    }
    let w: Vec<f64> = bp.parts.iter().map(|p| g.weight_of(p)).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| w[a].total_cmp(&w[b]).then(a.cmp(&b)));
    let mut keep: Vec<usize> = order[..k_target - 1].to_vec();
    keep.sort_unstable();
    let mut parts: Vec<VertexSet> = keep.iter().map(|&i| bp.parts[i].clone()).collect();
    let mut buffers: Vec<VertexSet> = keep.iter().map(|&i| bp.buffers[i].clone()).collect();
    let mut p = VertexSet::new(g.n());
    let mut b = VertexSet::new(g.n());
    for &i in &order[k_target - 1..] {
        p.union_with(&bp.parts[i]);
        b.union_with(&bp.buffers[i]);
    }
    parts.push(p);
    buffers.push(b);
    Ok(finish(g, parts, buffers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_partition;

    fn four_cliques() -> (Graph, BufferedPartition) {
        let (g, labels) = crate::generators::clique_ring(&[3, 4, 5, 6], 0.5);
        let n = g.n();
        let parts: Vec<VertexSet> =
            (0..4).map(|c| VertexSet::from_iter(n, (0..n).filter(|&u| labels[u] == c))).collect();
        let buffers = vec![VertexSet::new(n); 4];
        (g, BufferedPartition { parts, buffers, epsilon: 0.0 })
    }

    #[test]
    fn merge_tail_identity_and_merge() {
        let (g, bp) = four_cliques();
        assert_eq!(merge_tail(&bp, &g, 4).unwrap(), bp);
        let m = merge_tail(&bp, &g, 2).unwrap();
        assert_eq!(m.k(), 2);
        assert_eq!(m.parts[0].len(), 3);
        assert_eq!(m.parts[1].len(), 15);
        let before = validate_partition(&g, &bp).max_expansion;
        let after = validate_partition(&g, &m);
        assert!(after.is_valid());
        assert!(after.max_expansion <= before);
        assert!(merge_tail(&bp, &g, 0).is_err());
    }
}
