//! Crude partial partitioning by repeated separator draws.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::VertexSet;
use crate::orthosep::{classify, Region, SeparatorParams, UnitVectors};
use crate::partitioner::AlgoConstants;
use crate::rng::RngFactory;
use crate::spectral::Embedding;

/// ε and δ after the standing adjustments: ε ≤ δ and δ ≥ 1/(3k).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Adjusted {
    pub epsilon: f64,
    pub delta: f64,
    /// δ < 1/80 after adjustment, the range the analysis is written for.
    pub in_theory_range: bool,
}

pub fn adjust(k: usize, epsilon: f64, delta: f64) -> Adjusted {
    let epsilon = epsilon.min(delta);
    let delta = delta.max(1.0 / (3.0 * k as f64));
    Adjusted { epsilon, delta, in_theory_range: delta < 1.0 / 80.0 }
}

/// One round t with a nonempty P̃_t or B̃_t.
#[derive(Clone, Debug)]
pub struct CrudeRound {
    pub t: u64,
    pub p: VertexSet,
    pub b: VertexSet,
    /// (X_t ∪ Y_t ∪ Z_t) ∖ Σ_{t−1}.
    pub fresh: VertexSet,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CrudeDiagnostics {
    pub rounds_planned: f64,
    pub rounds_run: u64,
    pub truncated: bool,
    pub rejected_draws: u64,
    pub nonempty_draws: u64,
    pub calibration_capped: bool,
}

#[derive(Clone, Debug)]
pub struct CrudePartition {
    pub rounds: Vec<CrudeRound>,
    pub sigma: VertexSet,
    pub gamma: VertexSet,
    pub r_p: VertexSet,
    pub r_b: VertexSet,
    pub k: usize,
    pub adjusted: Adjusted,
    pub params: SeparatorParams,
    pub diagnostics: CrudeDiagnostics,
}

impl CrudePartition {
    /// μ(P̃_t) for each nontrivial round.
    pub fn piece_measures(&self, e: &Embedding) -> Vec<f64> {
        self.rounds.iter().map(|r| r.p.iter().map(|u| e.measure(u)).sum()).collect()
    }
}

/// Smallest ψ-distance that is at least `r` (O(n²k)).
fn separation_gap(e: &Embedding, r: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for u in 0..e.n() {
        for v in u + 1..e.n() {
            let d = e.psi_distance(u, v);
            if d >= r && best.map_or(true, |b| d < b) {
                best = Some(d);
            }
        }
    }
    best
}

/// Runs the crude partitioning on the embedding. Randomness: round t of restart `restart`
/// uses stream `(seed, "crude", restart, t)`.
pub fn crude_partition(
    e: &Embedding,
    k: usize,
    epsilon: f64,
    delta: f64,
    consts: &AlgoConstants,
    seed: u64,
    restart: u64,
) -> Result<CrudePartition> {
    if k != e.k() {
        return Err(Error::InvalidParameter(format!("k = {k} but the embedding has dimension {}", e.k())));
    }
    if k < 2 || !(epsilon > 0.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("need k > 1, ε > 0, δ ∈ (0,1); got {k}, {epsilon}, {delta}")));
    }
    let adjusted = adjust(k, epsilon, delta);
    let (eps, del) = (adjusted.epsilon, adjusted.delta);
    let radius = consts.radius(del);
    let delta_sep = del / (2.0 * k as f64);
    let gap = separation_gap(e, radius).unwrap_or(1.99);
    let params = SeparatorParams::calibrate_for_points(eps, delta_sep, radius, gap, consts.max_threshold)?;

    let n = e.n();
    let mut psi = Vec::with_capacity(n * k);
    for u in 0..n {
        psi.extend_from_slice(e.psi(u));
    }
    let vectors = UnitVectors::new(&psi, k)?;
    let mu = e.measures();
    let threshold = delta_sep * e.total_measure();

    let planned = (2.0 / params.alpha) * (1.0 / del).ln();
    let rounds_total = if planned.is_finite() && planned <= consts.max_rounds as f64 {
        planned.ceil().max(1.0) as u64
    } else {
        consts.max_rounds
    };
    let mut diag = CrudeDiagnostics {
        rounds_planned: planned,
        truncated: !(planned <= consts.max_rounds as f64),
        calibration_capped: params.capped,
        ..Default::default()
    };

    let f = RngFactory::new(seed);
    let mut touched = VertexSet::new(n);
    let mut sigma = VertexSet::new(n);
    let mut gamma = VertexSet::new(n);
    let mut rounds = Vec::new();
    let mut proj = vec![0.0; n];
    let mut region = vec![Region::Outside; n];
    for t in 1..=rounds_total {
        diag.rounds_run = t;
        let mut rng = f.stream("crude", restart, t);
        let g = rng.normal_vec(k);
        // |⟨ψ_u, g⟩| ≤ ‖g‖, so a short g cannot reach even Z.
        if g.iter().map(|x| x * x).sum::<f64>().sqrt() <= params.threshold - 2.0 * params.buffer_width {
            continue;
        }
        let mut any = false;
        let mut x_members = Vec::new();
        for u in 0..n {
            let row = &psi[u * k..(u + 1) * k];
            proj[u] = row.iter().zip(&g).map(|(a, b)| a * b).sum();
            region[u] = classify(proj[u], &params, true);
            if region[u] != Region::Outside {
                any = true;
            }
            if region[u] == Region::X {
                x_members.push(u);
            }
        }
        if !any {
            continue;
        }
        if !x_members.is_empty() {
            diag.nonempty_draws += 1;
            let x = VertexSet::from_iter(n, x_members.iter().copied());
            if crate::orthosep::min_outside_ball(&vectors, mu, &x, radius) > threshold {
                diag.rejected_draws += 1;
                continue;
            }
        }
        // P̃_t = X_t ∖ Ξ_{t−1};  B̃_t = (X_t ∪ Y_t) ∖ (Σ_t ∪ Γ_{t−1}).
        let mut p = VertexSet::new(n);
        let mut fresh = VertexSet::new(n);
        for u in 0..n {
            if region[u] == Region::X && !touched.contains(u) {
                p.insert(u);
            }
            if region[u] != Region::Outside && !sigma.contains(u) {
                fresh.insert(u);
            }
        }
        sigma.union_with(&p);
        let mut b = VertexSet::new(n);
        for u in 0..n {
            if matches!(region[u], Region::X | Region::Y) && !sigma.contains(u) && !gamma.contains(u) {
                b.insert(u);
            }
        }
        gamma.union_with(&b);
        for u in 0..n {
            if region[u] != Region::Outside {
                touched.insert(u);
            }
        }
        if !p.is_empty() || !b.is_empty() {
            rounds.push(CrudeRound { t, p, b, fresh });
        }
        // Nothing can change once Σ ∪ Γ covers V.
        if sigma.len() + gamma.len() == n {
            break;
        }
    }
    let r_p = touched.complement();
    let mut r_b = VertexSet::full(n);
    r_b.difference_with(&sigma);
    r_b.difference_with(&gamma);
    r_b.difference_with(&r_p);
    Ok(CrudePartition { rounds, sigma, gamma, r_p, r_b, k, adjusted, params, diagnostics: diag })
}
