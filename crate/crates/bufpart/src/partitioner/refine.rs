//! Threshold refinement of each crude piece and filtering.

use serde::Serialize;

use crate::graph::{Graph, VertexSet};
use crate::partitioner::crude::CrudePartition;
use crate::partitioner::{AlgoConstants, FilterMode};
use crate::spectral::Embedding;

#[derive(Clone, Debug, Serialize)]
pub struct Tuple {
    pub round: u64,
    pub p: VertexSet,
    pub b: VertexSet,
    pub a_prime: VertexSet,
    pub a_double_prime: VertexSet,
    /// Threshold r_t on μ.
    pub threshold: f64,
    pub phi: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RefineStats {
    pub rounds_with_piece: usize,
    pub infeasible: usize,
    pub filtered: usize,
    /// (C″/ε)·λ_k·ln k.
    pub phi_bound: f64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    P,
    B,
    A1,
    A2,
    Dropped,
}

/// Role of a vertex of P̃_t (or B̃_t) under threshold r.
fn role(mu: f64, in_piece: bool, r: f64, eps: f64) -> Role {
    let r1 = r / (1.0 + eps);
    let r2 = r1 / (1.0 + eps);
    if in_piece {
        if mu >= r {
            Role::P
        } else if mu >= r1 {
            Role::B
        } else if mu <= r2 {
            Role::A1
        } else {
            Role::A2
        }
    } else if mu >= r1 {
        Role::B
    } else {
        Role::Dropped
    }
}

pub(crate) struct Evaluation {
    pub phi: f64,
    pub w_p: f64,
    pub w_b: f64,
    pub w_a2: f64,
    pub cut_a1: f64,
    pub cut_outer: f64,
    pub count_p: usize,
}

/// Direct evaluation of the objective and all constraint quantities.
/// `outer` is (Σ_T ∪ R_P) ∖ P̃_t.
pub(crate) fn evaluate(
    g: &Graph,
    mu: &[f64],
    piece: &VertexSet,
    buf: &VertexSet,
    outer: &VertexSet,
    r: f64,
    eps: f64,
) -> Evaluation {
    let members: Vec<usize> = piece.iter().chain(buf.iter()).collect();
    let role_of = |v: usize| -> Option<Role> {
        if piece.contains(v) {
            Some(role(mu[v], true, r, eps))
        } else if buf.contains(v) {
            Some(role(mu[v], false, r, eps))
        } else {
            None
        }
    };
    let mut ev = Evaluation { phi: 0.0, w_p: 0.0, w_b: 0.0, w_a2: 0.0, cut_a1: 0.0, cut_outer: 0.0, count_p: 0 };
    let mut cut_p = 0.0;
    for &u in &members {
        let ru = role_of(u).unwrap();
        match ru {
            Role::P => {
                ev.w_p += g.weight(u);
                ev.count_p += 1;
            }
            Role::B => ev.w_b += g.weight(u),
            Role::A2 => ev.w_a2 += g.weight(u),
            _ => {}
        }
        for (v, c) in g.neighbors(u) {
            let rv = role_of(v);
            let v_in_pb = matches!(rv, Some(Role::P | Role::B));
            match ru {
                Role::P => {
                    if !v_in_pb {
                        cut_p += c;
                    }
                }
                Role::A1 => {
                    if v_in_pb {
                        ev.cut_a1 += c;
                    }
                }
                _ => {}
            }
            if matches!(ru, Role::P | Role::B) && outer.contains(v) {
                ev.cut_outer += c;
            }
        }
    }
    ev.phi = if ev.w_p > 0.0 { cut_p / ev.w_p } else { f64::INFINITY };
    ev
}

/// Refinement and filtering over all rounds. Returns surviving tuples, R′_P, R′_B and stats.
pub fn refine_and_discard(
    c: &CrudePartition,
    e: &Embedding,
    g: &Graph,
    lambda_k: f64,
    consts: &AlgoConstants,
) -> (Vec<Tuple>, VertexSet, VertexSet, RefineStats) {
    let n = g.n();
    let eps = c.adjusted.epsilon;
    let del = c.adjusted.delta;
    let k = c.k as f64;
    let cp = consts.c_prime(del);
    let bound = consts.c_double_prime(del) / eps * lambda_k.max(0.0) * k.ln();
    let mu = e.measures();
    let mut r_p = c.r_p.clone();
    let mut r_b = c.r_b.clone();
    let sigma_rp = c.sigma.union(&c.r_p);
    let mut stats = RefineStats { phi_bound: bound, ..Default::default() };
    let mut tuples = Vec::new();
    for round in &c.rounds {
        if round.p.is_empty() {
            r_b.union_with(&round.b);
            continue;
        }
        stats.rounds_with_piece += 1;
        let outer = sigma_rp.difference(&round.p);
        let mut cands: Vec<f64> = round.p.iter().chain(round.b.iter()).map(|u| mu[u]).collect();
        cands.sort_by(f64::total_cmp);
        cands.dedup();
        let mut best: Option<(f64, usize, f64)> = None;
        for &r in &cands {
            let ev = evaluate(g, mu, &round.p, &round.b, &outer, r, eps);
            if ev.count_p == 0 {
                continue;
            }
            let feasible = ev.w_b <= cp * eps * ev.w_p
                && ev.w_a2 <= 10.0 * eps * ev.w_p
                && ev.cut_a1 <= bound * ev.w_p
                && ev.cut_outer <= bound * ev.w_p;
            if !feasible {
                continue;
            }
            // Smaller φ, then larger |P|, then smaller r (candidates ascend).
            let better = match best {
                None => true,
                Some((phi, cnt, _)) => ev.phi < phi || (ev.phi == phi && ev.count_p > cnt),
            };
            if better {
                best = Some((ev.phi, ev.count_p, r));
            }
        }
        let Some((phi, _, r)) = best else {
            stats.infeasible += 1;
            r_p.union_with(&round.p);
            r_b.union_with(&round.b);
            continue;
        };
        if consts.filter == FilterMode::Theory && phi > bound {
            stats.filtered += 1;
            r_p.union_with(&round.p);
            r_b.union_with(&round.b);
            continue;
        }
        if phi > bound {
            stats.filtered += 1;
        }
        let mut t = Tuple {
            round: round.t,
            p: VertexSet::new(n),
            b: VertexSet::new(n),
            a_prime: VertexSet::new(n),
            a_double_prime: VertexSet::new(n),
            threshold: r,
            phi,
        };
        for u in round.p.iter() {
            match role(mu[u], true, r, eps) {
                Role::P => t.p.insert(u),
                Role::B => t.b.insert(u),
                Role::A1 => t.a_prime.insert(u),
                Role::A2 => t.a_double_prime.insert(u),
                Role::Dropped => unreachable!(),
            }
        }
        for u in round.b.iter() {
            match role(mu[u], false, r, eps) {
                Role::B => t.b.insert(u),
                _ => r_b.insert(u),
            }
        }
        tuples.push(t);
    }
    (tuples, r_p, r_b, stats)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn role_boundaries() {
        let eps = 0.25;
        let r = 1.0;
        assert!(role(1.0, true, r, eps) == Role::P);
        assert!(role(0.8, true, r, eps) == Role::B);
        assert!(role(0.63, true, r, eps) == Role::A1);
        assert!(role(0.7, true, r, eps) == Role::A2);
        assert!(role(0.8, false, r, eps) == Role::B);
        assert!(role(0.79, false, r, eps) == Role::Dropped);
    }

    #[test]
    fn smallest_threshold_keeps_whole_piece() {
        // Path 0-1-2-3; piece {0,1}, no buffer.
        let g = Graph::new(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], None).unwrap();
        let mu = [0.2, 0.5, 0.3, 0.1];
        let piece = VertexSet::from_iter(4, [0, 1]);
        let buf = VertexSet::new(4);
        let outer = VertexSet::from_iter(4, [2, 3]);
        let ev = evaluate(&g, &mu, &piece, &buf, &outer, 0.2, 0.1);
        assert_eq!(ev.count_p, 2);
        assert_eq!(ev.phi, 1.0 / 3.0);
        assert_eq!(ev.cut_outer, 1.0);
        assert_eq!(ev.w_b, 0.0);
    }
}
