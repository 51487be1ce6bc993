//! The η and η̃ edge charges of the crude-partition analysis, evaluated exactly on a
//! realized crude partition. Diagnostic only.

use serde::Serialize;

use crate::graph::Graph;
use crate::partitioner::crude::CrudePartition;
use crate::spectral::Embedding;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaCosts {
    /// η(u, v) per directed edge slot, aligned with `Graph::neighbors(u)`.
    pub eta: Vec<Vec<f64>>,
    pub eta_tilde: Vec<Vec<f64>>,
    /// η(P̃_t) per nontrivial round.
    pub eta_pieces: Vec<f64>,
    /// η̃(P̃_t ∪ B̃_t) per nontrivial round.
    pub eta_tilde_pieces: Vec<f64>,
}

impl EtaCosts {
    pub fn total_eta(&self) -> f64 {
        self.eta_pieces.iter().sum()
    }
}

/// η(u,v) = ‖ū‖² if u ∈ P̃_t and v ∉ P̃_t ∪ B̃_t; (1/ε)‖ẑ_u − ẑ_v‖² if
/// u ∈ P̃_t and v ∈ P̃_t ∪ B̃_t; 0 otherwise.
/// η̃(u,v) = ‖ū‖² if u ∈ P̃_t ∪ B̃_t and v ∉ (X_t ∪ Y_t ∪ Z_t) ∖ Σ_{t−1}; 0 otherwise.
pub fn eta_costs(c: &CrudePartition, e: &Embedding, g: &Graph, epsilon: f64) -> EtaCosts {
    let n = g.n();
    let mut round_of_p = vec![usize::MAX; n];
    let mut round_of_pb = vec![usize::MAX; n];
    for (i, r) in c.rounds.iter().enumerate() {
        for u in r.p.iter() {
            round_of_p[u] = i;
            round_of_pb[u] = i;
        }
        for u in r.b.iter() {
            round_of_pb[u] = i;
        }
    }
    let mut eta = Vec::with_capacity(n);
    let mut eta_tilde = Vec::with_capacity(n);
    let mut eta_pieces = vec![0.0; c.rounds.len()];
    let mut eta_tilde_pieces = vec![0.0; c.rounds.len()];
    for u in 0..n {
        let mut row = Vec::with_capacity(g.degree(u));
        let mut row_t = Vec::with_capacity(g.degree(u));
        for (v, _) in g.neighbors(u) {
            let x = match round_of_p[u] {
                usize::MAX => 0.0,
                t if round_of_pb[v] == t => sq_dist(e.zhat(u), e.zhat(v)) / epsilon,
                _ => e.measure(u),
            };
            let y = match round_of_pb[u] {
                usize::MAX => 0.0,
                t if c.rounds[t].fresh.contains(v) => 0.0,
                _ => e.measure(u),
            };
            if round_of_p[u] != usize::MAX {
                eta_pieces[round_of_p[u]] += x;
            }
            if round_of_pb[u] != usize::MAX {
                eta_tilde_pieces[round_of_pb[u]] += y;
            }
            row.push(x);
            row_t.push(y);
        }
        eta.push(row);
        eta_tilde.push(row_t);
    }
    EtaCosts { eta, eta_tilde, eta_pieces, eta_tilde_pieces }
}
