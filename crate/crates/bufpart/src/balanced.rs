//! Two-threshold buffered Cheeger cut, recursive buffered balanced cut and
//! recursive-bisection k-way balanced partitioning.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::spectral::{eigenbasis, EigenOptions};

/// A cut (S, T ‖ B) with a common buffer.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BufferedCut {
    pub s: VertexSet,
    pub t: VertexSet,
    pub b: VertexSet,
    /// δ(S, T) / min(w(S), w(T)).
    pub phi: f64,
    /// w(B) / min(w(S), w(T)).
    pub buffer_ratio: f64,
    pub lambda2: f64,
    /// Threshold on u(i)²; `None` when the graph is disconnected and S is a component.
    pub threshold: Option<f64>,
    /// The normalized half-vector u (‖u‖∞ = 1) that was thresholded.
    #[serde(skip)]
    pub u: Vec<f64>,
}

fn check_eps(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside (0, 1/4)")));
    }
    Ok(())
}

fn finish_cut(g: &Graph, s: VertexSet, t: VertexSet, b: VertexSet, lambda2: f64, threshold: Option<f64>, u: Vec<f64>) -> BufferedCut {
    let min = g.weight_of(&s).min(g.weight_of(&t));
    let phi = g.cut_cost(&s, &t) / min;
    let buffer_ratio = g.weight_of(&b) / min;
    BufferedCut { s, t, b, phi, buffer_ratio, lambda2, threshold, u }
}

/// Smallest value z among the entries of `v` with w({i : v(i) > z}) ≤ W/2.
pub fn weighted_median(v: &[f64], w: &[f64]) -> f64 {
    let total: f64 = w.iter().sum();
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    // Weight strictly above order[i] = total − (weight up to the last tie of v[order[i]]).
    let mut below_or_equal = 0.0;
    let mut i = 0;
    while i < order.len() {
        let z = v[order[i]];
        let mut j = i;
        while j < order.len() && v[order[j]] == z {
            below_or_equal += w[order[j]];
            j += 1;
        }
        if total - below_or_equal <= total / 2.0 {
            return z;
        }
        i = j;
    }
    v[order[order.len() - 1]]
}

/// Sets of the threshold rule: S = {u² > t}, T = {u² ≤ t/(1+ε)}, B = rest.
pub fn threshold_sets(u: &[f64], t: f64, epsilon: f64) -> (VertexSet, VertexSet, VertexSet) {
    let n = u.len();
    let (mut s, mut tt, mut b) = (VertexSet::new(n), VertexSet::new(n), VertexSet::new(n));
    for (i, x) in u.iter().enumerate() {
        let q = x * x;
        if q > t {
            s.insert(i);
        } else if q <= t / (1.0 + epsilon) {
            tt.insert(i);
        } else {
            b.insert(i);
        }
    }
    (s, tt, b)
}

/// Buffered spectral cut from the second eigenvector, with the random
/// threshold replaced by exhaustive search over all breakpoints.
/// Guarantees w(S) ≤ W/2 ≤ w(T), w(B) ≤ 2ε·w(S) and φ ≤ 2(1 + 1/ε)·λ₂.
pub fn cheeger2_buffered(g: &Graph, epsilon: f64) -> Result<BufferedCut> {
    check_eps(epsilon)?;
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two vertices".into()));
    }
    let comps = g.components();
    if comps.len() > 1 {
        let s = comps
            .iter()
            .min_by(|a, b| g.weight_of(a).total_cmp(&g.weight_of(b)))
            .unwrap()
            .clone();
        let t = s.complement();
        return Ok(finish_cut(g, s, t, VertexSet::new(n), 0.0, None, Vec::new()));
    }
    let basis = eigenbasis(g, 2, &EigenOptions::default())?;
    let lambda2 = basis.lambda(2);
    let w = g.weights();
    let v: Vec<f64> = basis.vectors[1].iter().zip(w).map(|(y, wi)| y / wi.sqrt()).collect();
    let z = weighted_median(&v, w);
    let plus: Vec<f64> = v.iter().map(|&x| if x >= z { x - z } else { 0.0 }).collect();
    let minus: Vec<f64> = v.iter().map(|&x| if x >= z { 0.0 } else { x - z }).collect();
    // Rayleigh quotient ⟨u, L̃u⟩ / ‖D^{1/2}u‖² of each half.
    let rq = |u: &[f64]| -> Option<f64> {
        let den: f64 = u.iter().zip(w).map(|(x, wi)| wi * x * x).sum();
        if den == 0.0 {
            return None;
        }
        let num: f64 = g.edges().iter().map(|&(a, b, c)| c * (u[a] - u[b]).powi(2)).sum();
        Some(num / den)
    };
    let tol = 1e-9 * lambda2.abs().max(1e-12);
    let cands: Vec<(f64, Vec<f64>)> = [plus, minus].into_iter().filter_map(|u| rq(&u).map(|q| (q, u))).collect();
    // One of the two halves is guaranteed with quotient ≤ λ₂; prefer those, then the smaller quotient.
    let (_, mut u) = cands
        .into_iter()
        .min_by(|a, b| (a.0 > lambda2 + tol).cmp(&(b.0 > lambda2 + tol)).then(a.0.total_cmp(&b.0)))
        .ok_or_else(|| Error::Partition("second eigenvector is constant".into()))?;
    let inf = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    u.iter_mut().for_each(|x| *x /= inf);

    let mut ts: Vec<f64> = vec![0.0];
    for x in &u {
        let q = x * x;
        ts.push(q);
        ts.push(q * (1.0 + epsilon));
    }
    ts.retain(|&t| t < 1.0);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut best: Option<(f64, f64)> = None;
    for &t in &ts {
        let (s, tt, b) = threshold_sets(&u, t, epsilon);
        if s.is_empty() || tt.is_empty() {
            continue;
        }
        let ws = g.weight_of(&s);
        if g.weight_of(&b) > 2.0 * epsilon * ws {
            continue;
        }
        let phi = g.cut_cost(&s, &tt) / ws;
        if best.map_or(true, |(p, _)| phi < p) {
            best = Some((phi, t));
        }
    }
    let (_, t) = best.ok_or_else(|| Error::Guarantee("no feasible threshold; eigenvector inaccurate".into()))?;
    let (s, tt, b) = threshold_sets(&u, t, epsilon);
    Ok(finish_cut(g, s, tt, b, lambda2, Some(t), u))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Level {
    pub lambda2: f64,
    pub phi: f64,
    pub w_l: f64,
    pub w_b: f64,
    pub vertices: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BalancedCut {
    pub l: VertexSet,
    pub r: VertexSet,
    pub b: VertexSet,
    pub cut_cost: f64,
    /// (w(L)/W, w(R)/W).
    pub balance: (f64, f64),
    /// w(B) / min(w(L), w(R)).
    pub buffer_ratio: f64,
    pub levels: Vec<Level>,
    pub violations: Vec<String>,
}

impl BalancedCut {
    pub fn per_level_lambda2(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.lambda2).collect()
    }
}

/// Peels off the light side of ε/2-buffered spectral cuts (so each level
/// has w(B_t) ≤ ε·w(L_t)) until w(L) ≥ W/4. Checks W/4 ≤ w(L), w(R) ≤ 3W/4
/// and w(B) ≤ 3ε·min(w(L), w(R)); failures are listed in `violations`.
pub fn buffered_balanced_cut(g: &Graph, epsilon: f64) -> Result<BalancedCut> {
    check_eps(epsilon)?;
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two vertices".into()));
    }
    let total = g.total_weight();
    let mut l = VertexSet::new(n);
    let mut b = VertexSet::new(n);
    let mut rest = VertexSet::full(n);
    let mut levels = Vec::new();
    let mut violations = Vec::new();
    while g.weight_of(&l) < total / 4.0 {
        if rest.len() < 2 {
            violations.push("ran out of vertices before reaching balance".into());
            break;
        }
        let (sub, map) = g.induced(&rest)?;
        let cut = cheeger2_buffered(&sub, epsilon / 2.0)?;
        // S is the lighter side by construction.
        let lift = |s: &VertexSet| VertexSet::from_iter(n, s.iter().map(|i| map[i]));
        let (lt, bt) = (lift(&cut.s), lift(&cut.b));
        levels.push(Level {
            lambda2: cut.lambda2,
            phi: cut.phi,
            w_l: g.weight_of(&lt),
            w_b: g.weight_of(&bt),
            vertices: sub.n(),
        });
        l.union_with(&lt);
        b.union_with(&bt);
        rest.difference_with(&lt);
        rest.difference_with(&bt);
    }
    let (wl, wr, wb) = (g.weight_of(&l), g.weight_of(&rest), g.weight_of(&b));
    for (name, x) in [("L", wl), ("R", wr)] {
        if !(x >= total / 4.0 && x <= 0.75 * total) {
            violations.push(format!("w({name}) = {x} outside [W/4, 3W/4] with W = {total}"));
        }
    }
    if wb > 3.0 * epsilon * wl.min(wr) {
        violations.push(format!("w(B) = {wb} exceeds 3ε·min side"));
    }
    Ok(BalancedCut {
        cut_cost: g.cut_cost(&l, &rest),
        balance: (wl / total, wr / total),
        buffer_ratio: wb / wl.min(wr),
        l,
        r: rest,
        b,
        levels,
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KwayPartition {
    pub parts: Vec<VertexSet>,
    /// Shared buffer pool.
    pub buffer: VertexSet,
    /// Σ_{i<j} δ(P_i, P_j).
    pub cost: f64,
    /// w(B)/W, the measured constant of the O(ε)·W buffer bound.
    pub buffer_fraction: f64,
    /// max_i w(P_i)·k/W; at most 6 for a (6, k)-balanced partition.
    pub balance: f64,
    pub violations: Vec<String>,
}

/// Recursive bisection with [`buffered_balanced_cut`]. The target count is
/// split in proportion to the side weights: k_L minimizes
/// max(w(L)/k_L, w(R)/k_R).
pub fn kway_balanced(g: &Graph, k: usize, epsilon: f64) -> Result<KwayPartition> {
    check_eps(epsilon)?;
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let n = g.n();
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    let mut parts = Vec::with_capacity(k);
    let mut buffer = VertexSet::new(n);
    let mut violations = Vec::new();
    split(g, &VertexSet::full(n), k, epsilon, &mut parts, &mut buffer, &mut violations)?;
    let total = g.total_weight();
    let mut owner = vec![usize::MAX; n];
    for (i, p) in parts.iter().enumerate() {
        for u in p.iter() {
            owner[u] = i;
        }
    }
    let cost = g
        .edges()
        .iter()
        .filter(|&&(u, v, _)| owner[u] != usize::MAX && owner[v] != usize::MAX && owner[u] != owner[v])
        .map(|e| e.2)
        .fold(0.0, |a, b| a + b);
    let balance = parts.iter().map(|p| g.weight_of(p)).fold(0.0, f64::max) * k as f64 / total;
    for (i, p) in parts.iter().enumerate() {
        if g.weight_of(p) > 6.0 * total / k as f64 {
            violations.push(format!("part {i} heavier than 6W/k"));
        }
    }
    Ok(KwayPartition { parts, buffer_fraction: g.weight_of(&buffer) / total, buffer, cost, balance, violations })
}

fn split(
    g: &Graph,
    set: &VertexSet,
    k: usize,
    epsilon: f64,
    parts: &mut Vec<VertexSet>,
    buffer: &mut VertexSet,
    violations: &mut Vec<String>,
) -> Result<()> {
    if k == 1 {
        parts.push(set.clone());
        return Ok(());
    }
    let n = g.n();
    if set.len() < k {
        return Err(Error::Partition(format!("{} vertices left for {k} parts", set.len())));
    }
    let (sub, map) = g.induced(set)?;
    let cut = buffered_balanced_cut(&sub, epsilon)?;
    violations.extend(cut.violations.iter().cloned());
    let lift = |s: &VertexSet| VertexSet::from_iter(n, s.iter().map(|i| map[i]));
    let (l, r) = (lift(&cut.l), lift(&cut.r));
    buffer.union_with(&lift(&cut.b));
    let (wl, wr) = (g.weight_of(&l), g.weight_of(&r));
    let load = |kl: usize| (wl / kl as f64).max(wr / (k - kl) as f64);
    let k_l = (1..k).min_by(|&a, &b| load(a).total_cmp(&load(b))).unwrap();
    split(g, &l, k_l, epsilon, parts, buffer, violations)?;
    split(g, &r, k - k_l, epsilon, parts, buffer, violations)
}
