//! Restarted partial partitioning and the end-to-end k-way driver.

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{certify_run, Certificate};
use crate::error::{Error, Result};
use crate::graph::{validate_partition, BufferedPartition, CutReport, Graph, VertexSet};
use crate::orthosep::SeparatorParams;
use crate::partitioner::crude::{crude_partition, Adjusted, CrudeDiagnostics};
use crate::partitioner::refine::{refine_and_discard, RefineStats, Tuple};
use crate::partitioner::AlgoConstants;
use crate::spectral::{eigenbasis, eigenbasis_rerandomized, embed, EigenOptions, Embedding, SpectralBasis};

/// Batches of `max_restarts` runs tried before giving up when every run
/// fails the buffer-mass check.
const MAX_BATCHES: u64 = 4;

#[derive(Clone, Debug, Serialize)]
pub struct RunDiagnostics {
    pub restart: u64,
    pub accepted: bool,
    pub tuples: usize,
    pub max_phi: f64,
    /// |R_B| + Σ|B̃_t| and its weighted analogue, against 16εn and 16εw(V).
    pub buffer_count: usize,
    pub buffer_weight: f64,
    pub crude: CrudeDiagnostics,
    pub refine: RefineStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartialPartition {
    pub tuples: Vec<Tuple>,
    pub r_p_prime: VertexSet,
    pub r_b_prime: VertexSet,
    pub k: usize,
    pub adjusted: Adjusted,
    pub lambda_k: f64,
    pub separator: SeparatorParams,
    /// ⌈(1 − 2δ)k⌉, the tuple count the analysis promises with probability ≥ 1/4.
    pub expected_tuples: usize,
    /// max_u w_u ≤ ε·w(V)/(3k), assumed by the weighted analysis.
    pub weight_condition: bool,
    pub restart: u64,
    pub runs: Vec<RunDiagnostics>,
}

impl PartialPartition {
    pub fn max_phi(&self) -> f64 {
        self.tuples.iter().map(|t| t.phi).fold(0.0, f64::max)
    }

    /// Exact set-algebra check of disjointness and cover, nonempty P_i,
    /// and the per-tuple size bounds.
    pub fn check(&self, g: &Graph, consts: &AlgoConstants) -> Result<()> {
        let n = g.n();
        let mut seen = VertexSet::new(n);
        let mut total = 0;
        let sets = self
            .tuples
            .iter()
            .flat_map(|t| [&t.p, &t.b, &t.a_prime, &t.a_double_prime])
            .chain([&self.r_p_prime, &self.r_b_prime]);
        for s in sets {
            total += s.len();
            seen.union_with(s);
        }
        if total != n || seen.len() != n {
            return Err(Error::Partition(format!("sets cover {} of {n} vertices with {total} memberships", seen.len())));
        }
        let (eps, del) = (self.adjusted.epsilon, self.adjusted.delta);
        for t in &self.tuples {
            let wp = g.weight_of(&t.p);
            if t.p.is_empty()
                || g.weight_of(&t.b) > consts.c_prime(del) * eps * wp
                || g.weight_of(&t.a_double_prime) > 10.0 * eps * wp
            {
                return Err(Error::Partition(format!("tuple of round {} violates its size bounds", t.round)));
            }
        }
        Ok(())
    }
}

/// Embedding for `k` eigenvectors, re-randomizing a degenerate top
/// eigenspace if some vertex lands on the origin.
pub fn spectral_embedding(g: &Graph, k: usize, seed: u64) -> Result<(SpectralBasis, Embedding)> {
    let opts = EigenOptions { seed, ..Default::default() };
    let basis = eigenbasis(g, k, &opts)?;
    match embed(g, &basis) {
        Ok(e) => return Ok((basis, e)),
        Err(Error::ZeroEmbedding(_)) => {}
        Err(e) => return Err(e),
    }
    let mut last = None;
    for attempt in 1..=4 {
        let b = eigenbasis_rerandomized(g, k, &opts, attempt)?;
        match embed(g, &b) {
            Ok(e) => return Ok((b, e)),
            Err(e @ Error::ZeroEmbedding(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

struct Run {
    pp: PartialPartition,
    diag: RunDiagnostics,
}

fn single_run(
    g: &Graph,
    e: &Embedding,
    lambda_k: f64,
    k: usize,
    epsilon: f64,
    delta: f64,
    consts: &AlgoConstants,
    seed: u64,
    restart: u64,
) -> Result<Run> {
    let c = crude_partition(e, k, epsilon, delta, consts, seed, restart)?;
    let n = g.n();
    let mut buf = c.r_b.clone();
    let mut gamma_count = 0;
    for r in &c.rounds {
        gamma_count += r.b.len();
        buf.union_with(&r.b);
    }
    let buffer_count = c.r_b.len() + gamma_count;
    let buffer_weight = g.weight_of(&buf);
    let eps = c.adjusted.epsilon;
    let (tuples, r_p_prime, r_b_prime, refine) = refine_and_discard(&c, e, g, lambda_k, consts);
    let accepted = buffer_count as f64 <= 16.0 * eps * n as f64
        && buffer_weight <= 16.0 * eps * g.total_weight()
        && r_b_prime.len() as f64 <= 16.0 * eps * n as f64;
    let max_w = g.weights().iter().copied().fold(0.0, f64::max);
    let pp = PartialPartition {
        expected_tuples: ((1.0 - 2.0 * c.adjusted.delta) * k as f64).ceil() as usize,
        weight_condition: max_w <= eps * g.total_weight() / (3.0 * k as f64),
        tuples,
        r_p_prime,
        r_b_prime,
        k,
        adjusted: c.adjusted,
        lambda_k,
        separator: c.params.clone(),
        restart,
        runs: Vec::new(),
    };
    pp.check(g, consts)?;
    let diag = RunDiagnostics {
        restart,
        accepted,
        tuples: pp.tuples.len(),
        max_phi: pp.max_phi(),
        buffer_count,
        buffer_weight,
        crude: c.diagnostics,
        refine,
    };
    Ok(Run { pp, diag })
}

/// Embedding, crude partitioning, refinement and filtering, with restarts. Runs are independent (restart r uses PRNG
/// streams indexed by r) and execute in parallel; the result does not
/// depend on the thread count. A run is accepted when the crude-partition buffer
/// mass is at most 16εn (and 16εw(V)); among accepted runs the one with
/// most tuples, then smallest max φ, then lowest index wins.
pub fn partial_partition(
    g: &Graph,
    k: usize,
    epsilon: f64,
    delta: f64,
    consts: &AlgoConstants,
    seed: u64,
) -> Result<PartialPartition> {
    consts.validate()?;
    if k < 2 || k > g.n() {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= n, got k = {k}")));
    }
    let (basis, e) = spectral_embedding(g, k, seed)?;
    partial_partition_on(g, &e, basis.lambda(k), k, epsilon, delta, consts, seed)
}

pub fn partial_partition_on(
    g: &Graph,
    e: &Embedding,
    lambda_k: f64,
    k: usize,
    epsilon: f64,
    delta: f64,
    consts: &AlgoConstants,
    seed: u64,
) -> Result<PartialPartition> {
    let per = consts.max_restarts as u64;
    let mut runs: Vec<RunDiagnostics> = Vec::new();
    for batch in 0..MAX_BATCHES {
        let results: Vec<Result<Run>> = (batch * per..(batch + 1) * per)
            .into_par_iter()
            .map(|r| single_run(g, e, lambda_k, k, epsilon, delta, consts, seed, r))
            .collect();
        let mut best: Option<PartialPartition> = None;
        for res in results {
            let run = res?;
            runs.push(run.diag.clone());
            if !run.diag.accepted {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => {
                    run.pp.tuples.len() > b.tuples.len()
                        || (run.pp.tuples.len() == b.tuples.len() && run.pp.max_phi() < b.max_phi())
                }
            };
            if better {
                best = Some(run.pp);
            }
        }
        if let Some(mut b) = best {
            b.runs = runs;
            return Ok(b);
        }
    }
    let worst = runs.iter().map(|r| r.buffer_count).min().unwrap_or(0);
    Err(Error::Partition(format!(
        "all {} runs exceeded the buffer-mass limit 16εn (smallest |R_B| + Σ|B̃_t| = {worst})",
        runs.len()
    )))
}

/// Parameters of the end-to-end reduction from (k, ε, δ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DriverParams {
    /// k̂ = ⌊(1+δ)k⌋.
    pub k_hat: usize,
    /// δ̂ = min((1 − 1/√(1+δ))/2, 1/80).
    pub delta_hat: f64,
    /// k′ = ⌈(1 − 2δ̂)k̂⌉.
    pub k_prime: usize,
    /// δ′ = (k′ − k + 1)/k′.
    pub delta_prime: f64,
    /// ε̂ = εδ′/54.
    pub epsilon_hat: f64,
}

pub fn driver_params(k: usize, epsilon: f64, delta: f64) -> DriverParams {
    let k_hat = ((1.0 + delta) * k as f64).floor() as usize;
    let delta_hat = ((1.0 - 1.0 / (1.0 + delta).sqrt()) / 2.0).min(1.0 / 80.0);
    let k_prime = ((1.0 - 2.0 * delta_hat) * k_hat as f64).ceil() as usize;
    let delta_prime = (k_prime as f64 - k as f64 + 1.0) / k_prime as f64;
    DriverParams { k_hat, delta_hat, k_prime, delta_prime, epsilon_hat: epsilon * delta_prime / 54.0 }
}

#[derive(Clone, Debug, Serialize)]
pub struct KPartition {
    pub partition: BufferedPartition,
    pub report: CutReport,
    pub certificate: Certificate,
    pub params: DriverParams,
    /// Requested ε; the partition's own ε is the measured buffer ratio.
    pub requested_epsilon: f64,
    pub within_requested_epsilon: bool,
    pub partial: PartialPartition,
}

/// ε-buffered k-partition: partial partitioning at (k̂, ε̂, δ̂), then
/// completion to k parts.
pub fn buffered_k_partition(
    g: &Graph,
    k: usize,
    epsilon: f64,
    delta: f64,
    consts: &AlgoConstants,
    seed: u64,
) -> Result<KPartition> {
    if k < 2 || !(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("need k >= 2, ε, δ ∈ (0,1); got {k}, {epsilon}, {delta}")));
    }
    consts.validate()?;
    let params = driver_params(k, epsilon, delta);
    if params.k_hat > g.n() {
        return Err(Error::InvalidParameter(format!("⌊(1+δ)k⌋ = {} exceeds n = {}", params.k_hat, g.n())));
    }
    let (basis, e) = spectral_embedding(g, params.k_hat, seed)?;
    let partial = partial_partition_on(
        g,
        &e,
        basis.lambda(params.k_hat),
        params.k_hat,
        params.epsilon_hat,
        params.delta_hat,
        consts,
        seed,
    )?;
    let partition = super::complete_partition(&partial, g, k)?;
    let report = validate_partition(g, &partition);
    if !report.is_valid() {
        return Err(Error::Guarantee(format!("completed partition is invalid: {}", report.violations.join("; "))));
    }
    let certificate = certify_run(g, k, epsilon, delta, &partition, &basis)?;
    Ok(KPartition {
        within_requested_epsilon: partition.epsilon <= epsilon,
        partition,
        report,
        certificate,
        params,
        requested_epsilon: epsilon,
        partial,
    })
}
