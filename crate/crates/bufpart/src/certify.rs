//! Eigenvalue lower bounds, exhaustive oracles for tiny graphs and robust
//! vertex expansion.
//!
//! All logarithms are natural.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{validate_partition, BufferedPartition, Graph, VertexSet};
use crate::spectral::{eigenbasis, EigenOptions, SpectralBasis};

/// Largest graph the exhaustive oracle accepts by default.
pub const BRUTE_FORCE_CAP: usize = 10;

/// Slack allowed when comparing eigenvalue bounds with combinatorial costs.
pub const BOUND_TOL: f64 = 1e-9;

/// λ_k/2, a lower bound on the maximum expansion of any unbuffered
/// k-partition.
pub fn lower_bound_unbuffered(g: &Graph, k: usize) -> Result<f64> {
    if k < 2 || k > g.n() {
        return Err(Error::InvalidParameter(format!("need 2 <= k <= n, got k = {k}")));
    }
    Ok(eigenbasis(g, k, &EigenOptions::default())?.lambda(k) / 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BufferedBoundCheck {
    pub lambda_k: f64,
    /// max_i φ(P_i ‖ B_i).
    pub phi_max: f64,
    pub epsilon: f64,
    /// max_i δ(P_i, B_i)/w(P_i).
    pub buffer_cut_ratio: f64,
    /// 2·φ_max + ε.
    pub stated_rhs: f64,
    /// The stated form assumes w_u ≥ (cost incident to u) for every u, so
    /// that edges into a buffer are paid for by its weight.
    pub stated_applicable: bool,
    pub stated_pass: bool,
    /// max_i (2φ_i + δ(P_i, B_i)/w(P_i)), valid for arbitrary weights.
    pub general_rhs: f64,
    pub general_pass: bool,
    /// general_rhs − λ_k.
    pub slack: f64,
    pub pass: bool,
}

/// Checks λ_k ≤ 2φ + ε for a valid buffered partition, with λ_k supplied.
pub fn check_buffered_lower_bound_with(g: &Graph, part: &BufferedPartition, lambda_k: f64) -> Result<BufferedBoundCheck> {
    let report = validate_partition(g, part);
    if !report.is_valid() {
        return Err(Error::Partition(format!("invalid partition: {}", report.violations.join("; "))));
    }
    let mut general: f64 = 0.0;
    let mut ratio: f64 = 0.0;
    for (i, (p, b)) in part.parts.iter().zip(&part.buffers).enumerate() {
        let beta = g.cut_cost(p, b) / g.weight_of(p);
        ratio = ratio.max(beta);
        general = general.max(2.0 * report.per_part_expansion[i] + beta);
    }
    let phi = report.max_expansion;
    let stated_rhs = 2.0 * phi + part.epsilon;
    let stated_applicable = (0..g.n()).all(|u| g.weight(u) >= g.incident_cost(u));
    let stated_pass = lambda_k <= stated_rhs + BOUND_TOL;
    let general_pass = lambda_k <= general + BOUND_TOL;
    Ok(BufferedBoundCheck {
        lambda_k,
        phi_max: phi,
        epsilon: part.epsilon,
        buffer_cut_ratio: ratio,
        stated_rhs,
        stated_applicable,
        stated_pass,
        general_rhs: general,
        general_pass,
        slack: general - lambda_k,
        pass: general_pass && (stated_pass || !stated_applicable),
    })
}

/// As [`check_buffered_lower_bound_with`], computing λ_k for k = number of parts.
/// A failing check on a valid partition means a bug, since the bound is a theorem.
pub fn check_buffered_lower_bound(g: &Graph, part: &BufferedPartition) -> Result<BufferedBoundCheck> {
    let lk = eigenbasis(g, part.k(), &EigenOptions::default())?.lambda(part.k());
    let c = check_buffered_lower_bound_with(g, part, lk)?;
    if !c.pass {
        return Err(Error::Guarantee(format!(
            "λ_k = {} exceeds 2φ + ε; this is an implementation bug",
            c.lambda_k
        )));
    }
    Ok(c)
}

/// Exhaustive h^{k,ε}: the minimum over all ε-buffered k-partitions (all
/// parts nonempty) of the maximum buffered expansion, with a witness.
pub fn brute_force_h_k_eps(g: &Graph, k: usize, epsilon: f64) -> Result<(f64, BufferedPartition)> {
    brute_force_with_cap(g, k, epsilon, BRUTE_FORCE_CAP)
}

pub fn brute_force_with_cap(g: &Graph, k: usize, epsilon: f64, cap: usize) -> Result<(f64, BufferedPartition)> {
    let n = g.n();
    if n > cap {
        return Err(Error::InvalidParameter(format!("brute force limited to n <= {cap}, got {n}")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k = {k}")));
    }
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside [0, 1)")));
    }
    // Labels 2i (core of part i) and 2i+1 (buffer of part i). Part indices
    // appear in order of first use, which removes the k! label symmetry.
    let prefixes = prefixes(n, k, 2.min(n));
    let best = prefixes
        .par_iter()
        .map(|pre| {
            let mut s = Search { g, k, epsilon, labels: pre.clone(), best: None };
            let used = pre.iter().map(|l| l / 2 + 1).max().unwrap_or(0);
            s.labels.resize(n, 0);
            s.rec(pre.len(), used);
            s.best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .fold(None::<(f64, Vec<usize>)>, |acc, c| match acc {
            Some(a) if a.0 <= c.0 => Some(a),
            _ => Some(c),
        });
    let (cost, labels) = best.ok_or_else(|| Error::Partition(format!("no {epsilon}-buffered {k}-partition exists")))?;
    let mut parts = vec![VertexSet::new(n); k];
    let mut buffers = vec![VertexSet::new(n); k];
    for (u, &l) in labels.iter().enumerate() {
        if l % 2 == 0 {
            parts[l / 2].insert(u);
        } else {
            buffers[l / 2].insert(u);
        }
    }
    Ok((cost, BufferedPartition { parts, buffers, epsilon }))
}

fn prefixes(n: usize, k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![(Vec::new(), 0usize)];
    for _ in 0..len.min(n) {
        let mut next = Vec::new();
        for (p, used) in out {
            for part in 0..(used + 1).min(k) {
                for role in 0..2 {
                    let mut q = p.clone();
                    q.push(2 * part + role);
                    next.push((q, used.max(part + 1)));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(p, _)| p).collect()
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    epsilon: f64,
    labels: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
}

impl Search<'_> {
    fn rec(&mut self, u: usize, used: usize) {
        let n = self.labels.len();
        if n - u < self.k - used {
            return;
        }
        if u == n {
            if let Some(c) = self.cost() {
                if self.best.as_ref().map_or(true, |b| c < b.0) {
                    self.best = Some((c, self.labels.clone()));
                }
            }
            return;
        }
        for part in 0..(used + 1).min(self.k) {
            for role in 0..2 {
                self.labels[u] = 2 * part + role;
                self.rec(u + 1, used.max(part + 1));
            }
        }
    }

    fn cost(&self) -> Option<f64> {
        let k = self.k;
        let mut wp = vec![0.0; k];
        let mut wb = vec![0.0; k];
        for (u, &l) in self.labels.iter().enumerate() {
            if l % 2 == 0 {
                wp[l / 2] += self.g.weight(u);
            } else {
                wb[l / 2] += self.g.weight(u);
            }
        }
        if (0..k).any(|i| wp[i] == 0.0 || wb[i] > self.epsilon * wp[i]) {
            return None;
        }
        let mut cut = vec![0.0; k];
        for &(u, v, c) in self.g.edges() {
            let (lu, lv) = (self.labels[u], self.labels[v]);
            if lu % 2 == 0 && lv / 2 != lu / 2 {
                cut[lu / 2] += c;
            }
            if lv % 2 == 0 && lu / 2 != lv / 2 {
                cut[lv / 2] += c;
            }
        }
        Some((0..k).map(|i| cut[i] / wp[i]).fold(0.0, f64::max))
    }
}

/// Whether an accumulated cut cost reaches a target, allowing for rounding
/// in the target (1 − η)·δ(S, V∖S).
pub(crate) fn reaches(sum: f64, target: f64) -> bool {
    sum >= target - 1e-12 * target.abs().max(1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustExpansion {
    /// N_η(S): fewest vertices outside S carrying a (1 − η) share of its cut.
    pub n_eta: usize,
    /// N_η(S)/|S|.
    pub phi_v: f64,
    pub target: f64,
    /// A minimizing T.
    pub witness: Vec<usize>,
}

/// Exact N_η(S): vertices outside S are taken greedily by their cut cost
/// to S, which is optimal since each contributes independently.
pub fn robust_expansion(g: &Graph, s: &VertexSet, eta: f64) -> Result<RobustExpansion> {
    if s.is_empty() || s.len() == g.n() {
        return Err(Error::InvalidParameter("S must be a nonempty proper subset".into()));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidParameter(format!("eta {eta} outside (0, 1]")));
    }
    let mut into = vec![0.0; g.n()];
    for u in s.iter() {
        for (v, c) in g.neighbors(u) {
            if !s.contains(v) {
                into[v] += c;
            }
        }
    }
    let total = into.iter().fold(0.0, |a, b| a + b);
    let target = (1.0 - eta) * total;
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| !s.contains(v)).collect();
    order.sort_by(|&a, &b| into[b].total_cmp(&into[a]).then(a.cmp(&b)));
    let mut sum = 0.0;
    let mut witness = Vec::new();
    for v in order {
        if reaches(sum, target) {
            break;
        }
        sum += into[v];
        witness.push(v);
    }
    let n_eta = witness.len();
    Ok(RobustExpansion { n_eta, phi_v: n_eta as f64 / s.len() as f64, target, witness })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub k: usize,
    /// ⌊(1+δ)k⌋, capped at n.
    pub k_hat: usize,
    pub lambda_k: f64,
    pub lambda_k_hat: f64,
    /// max_i φ(P_i ‖ B_i) of the certified partition.
    pub achieved_cost: f64,
    /// λ_k/2.
    pub lower_bound_unbuffered: f64,
    pub lower_bound_buffered_check: bool,
    pub buffered_check: BufferedBoundCheck,
    /// achieved_cost·ε/(λ_{k̂}·ln k̂); absent when the denominator vanishes
    /// and the cost does not.
    pub approx_ratio: Option<f64>,
    /// h^{k,ε} at the partition's own ε, when n is within the oracle cap.
    pub brute_force_optimum: Option<f64>,
    pub log_base: &'static str,
}

/// Bundles bounds and ratios for a finished partition. `basis` must hold
/// at least min(⌊(1+δ)k⌋, n) eigenpairs.
pub fn certify_run(
    g: &Graph,
    k: usize,
    epsilon: f64,
    delta: f64,
    part: &BufferedPartition,
    basis: &SpectralBasis,
) -> Result<Certificate> {
    let k_hat = (((1.0 + delta) * k as f64).floor() as usize).clamp(k, g.n());
    if basis.k() < k_hat {
        return Err(Error::InvalidParameter(format!("basis has {} pairs, need {k_hat}", basis.k())));
    }
    let lambda_k = basis.lambda(k);
    let lambda_k_hat = basis.lambda(k_hat);
    let check = check_buffered_lower_bound_with(g, part, basis.lambda(part.k()))?;
    let cost = check.phi_max;
    let denom = lambda_k_hat * (k_hat as f64).ln();
    let approx_ratio = if cost == 0.0 {
        Some(0.0)
    } else if denom > 1e-12 {
        Some(cost * epsilon / denom)
    } else {
        None
    };
    let brute_force_optimum = if g.n() <= BRUTE_FORCE_CAP && part.k() <= g.n() {
        brute_force_h_k_eps(g, part.k(), part.epsilon).ok().map(|(c, _)| c)
    } else {
        None
    };
    Ok(Certificate {
        k,
        k_hat,
        lambda_k,
        lambda_k_hat,
        achieved_cost: cost,
        lower_bound_unbuffered: lambda_k / 2.0,
        lower_bound_buffered_check: check.pass,
        buffered_check: check,
        approx_ratio,
        brute_force_optimum,
        log_base: "e",
    })
}
