//! Weighted undirected graphs, vertex sets and buffered partitions.
//!
//! Vertices are dense `0..n` indices; external string ids are kept in a
//! side dictionary so reports can be written back in the caller's naming.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected graph with positive vertex weights and positive edge costs.
#[derive(Clone, Debug)]
pub struct Graph {
    weights: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    costs: Vec<f64>,
    edges: Vec<(usize, usize, f64)>,
    ids: Vec<String>,
}

impl Graph {
    /// Builds a graph from an edge list. When `weights` is `None` every vertex
    /// gets the sum of its incident edge costs.
    pub fn new(n: usize, edges: &[(usize, usize, f64)], weights: Option<Vec<f64>>) -> Result<Self> {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::with_ids(ids, edges, weights)
    }

    pub fn with_ids(ids: Vec<String>, edges: &[(usize, usize, f64)], weights: Option<Vec<f64>>) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut seen = HashMap::with_capacity(edges.len());
        let mut degree = vec![0usize; n];
        let mut incident = vec![0.0f64; n];
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v, c) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {}", ids[u])));
            }
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has nonpositive cost {c}",
                    ids[u], ids[v]
                )));
            }
            let key = (u.min(v), u.max(v));
            if seen.insert(key, ()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", ids[u], ids[v])));
            }
            degree[u] += 1;
            degree[v] += 1;
            incident[u] += c;
            incident[v] += c;
            canon.push((key.0, key.1, c));
        }
        let weights = match weights {
            Some(w) => {
                if w.len() != n {
                    return Err(Error::InvalidGraph(format!("{} weights for {n} vertices", w.len())));
                }
                w
            }
            None => incident,
        };
        for (u, &w) in weights.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidGraph(format!("vertex {} has nonpositive weight {w}", ids[u])));
            }
        }
        let mut offsets = vec![0usize; n + 1];
        for u in 0..n {
            offsets[u + 1] = offsets[u] + degree[u];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[n]];
        let mut costs = vec![0.0; offsets[n]];
        for &(u, v, c) in &canon {
            targets[fill[u]] = v;
            costs[fill[u]] = c;
            fill[u] += 1;
            targets[fill[v]] = u;
            costs[fill[v]] = c;
            fill[v] += 1;
        }
        Ok(Graph { weights, offsets, targets, costs, edges: canon, ids })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn weight(&self, u: usize) -> f64 {
        self.weights[u]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Each edge once, as `(u, v, cost)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[u]..self.offsets[u + 1];
        self.targets[r.clone()].iter().copied().zip(self.costs[r].iter().copied())
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Sum of incident edge costs.
    pub fn incident_cost(&self, u: usize) -> f64 {
        self.costs[self.offsets[u]..self.offsets[u + 1]].iter().sum()
    }

    pub fn id(&self, u: usize) -> &str {
        &self.ids[u]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn weight_of(&self, s: &VertexSet) -> f64 {
        s.iter().map(|u| self.weights[u]).fold(0.0, |a, b| a + b)
    }

    /// δ(A, B): total cost of edges with one endpoint in `a` and the other in `b`.
    pub fn cut_cost(&self, a: &VertexSet, b: &VertexSet) -> f64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| (a.contains(u) && b.contains(v)) || (a.contains(v) && b.contains(u)))
            .map(|e| e.2)
            .fold(0.0, |a, b| a + b)
    }

    /// φ(P ‖ B) = δ(P, V ∖ (P ∪ B)) / w(P).
    pub fn expansion(&self, p: &VertexSet, b: &VertexSet) -> f64 {
        let mut cut = 0.0;
        for u in p.iter() {
            for (v, c) in self.neighbors(u) {
                if !p.contains(v) && !b.contains(v) {
                    cut += c;
                }
            }
        }
        cut / self.weight_of(p)
    }

    /// Subgraph induced by `s`, keeping the original vertex weights.
    /// Returns the subgraph and the map from its vertices to ours.
    pub fn induced(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        let map: Vec<usize> = s.iter().collect();
        let mut back = vec![usize::MAX; self.n()];
        for (i, &u) in map.iter().enumerate() {
            back[u] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v, _)| s.contains(u) && s.contains(v))
            .map(|&(u, v, c)| (back[u], back[v], c))
            .collect();
        let ids = map.iter().map(|&u| self.ids[u].clone()).collect();
        let weights = map.iter().map(|&u| self.weights[u]).collect();
        Ok((Graph::with_ids(ids, &edges, Some(weights))?, map))
    }

    /// Connected components, each as a vertex set, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut set = VertexSet::new(n);
            let mut stack = vec![s];
            label[s] = id;
            while let Some(u) = stack.pop() {
                set.insert(u);
                for (v, _) in self.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = id;
                        stack.push(v);
                    }
                }
            }
            out.push(set);
        }
        out
    }
}

/// A subset of `0..n` backed by a bit set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet { bits: FixedBitSet::with_capacity(n) }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::new(n);
        for u in it {
            s.insert(u);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, u: usize) {
        self.bits.insert(u);
    }

    pub fn remove(&mut self, u: usize) {
        self.bits.set(u, false);
    }

    pub fn contains(&self, u: usize) -> bool {
        self.bits.contains(u)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        VertexSet { bits }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Parts `P_i` with buffers `B_i`; every vertex belongs to exactly one set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BufferedPartition {
    pub parts: Vec<VertexSet>,
    pub buffers: Vec<VertexSet>,
    pub epsilon: f64,
}

impl BufferedPartition {
    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// Smallest ε for which the buffer budgets hold: max_i w(B_i)/w(P_i).
    pub fn measured_epsilon(&self, g: &Graph) -> f64 {
        self.parts
            .iter()
            .zip(&self.buffers)
            .map(|(p, b)| {
                let (wb, wp) = (g.weight_of(b), g.weight_of(p));
                // Smallest ratio that passes the exact test w(B) ≤ ε·w(P).
                let mut r = wb / wp;
                while r * wp < wb {
                    r = r.next_up();
                }
                r
            })
            .fold(0.0, f64::max)
    }

    /// φ of the partition: the largest per-part expansion.
    pub fn cost(&self, g: &Graph) -> f64 {
        self.parts
            .iter()
            .zip(&self.buffers)
            .map(|(p, b)| g.expansion(p, b))
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutReport {
    pub per_part_expansion: Vec<f64>,
    pub max_expansion: f64,
    pub buffer_ratios: Vec<f64>,
    pub violations: Vec<String>,
}

impl CutReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks disjointness, coverage, nonempty parts and the buffer budgets
/// `w(B_i) ≤ ε·w(P_i)`, and measures per-part expansions.
pub fn validate_partition(g: &Graph, part: &BufferedPartition) -> CutReport {
    let n = g.n();
    let mut violations = Vec::new();
    if part.parts.len() != part.buffers.len() {
        violations.push(format!("{} parts but {} buffers", part.parts.len(), part.buffers.len()));
    }
    if part.parts.is_empty() {
        violations.push("partition has no parts".into());
    }
    if !(0.0..1.0).contains(&part.epsilon) {
        violations.push(format!("epsilon {} outside [0, 1)", part.epsilon));
    }
    let mut owner: Vec<Option<(usize, bool)>> = vec![None; n];
    let sets = part
        .parts
        .iter()
        .enumerate()
        .map(|(i, s)| (i, false, s))
        .chain(part.buffers.iter().enumerate().map(|(i, s)| (i, true, s)));
    for (i, is_buf, s) in sets {
        if s.universe() != n {
            violations.push(format!("set of part {i} has universe {} != {n}", s.universe()));
            continue;
        }
        for u in s.iter() {
            match owner[u] {
                None => owner[u] = Some((i, is_buf)),
                Some(_) => violations.push(format!("vertex {} assigned more than once", g.id(u))),
            }
        }
    }
    for (u, o) in owner.iter().enumerate() {
        if o.is_none() {
            violations.push(format!("vertex {} not covered", g.id(u)));
        }
    }
    let mut per_part = Vec::with_capacity(part.parts.len());
    let mut ratios = Vec::with_capacity(part.parts.len());
    for (i, (p, b)) in part.parts.iter().zip(&part.buffers).enumerate() {
        if p.is_empty() {
            violations.push(format!("part {i} is empty"));
            per_part.push(0.0);
            ratios.push(0.0);
            continue;
        }
        let wp = g.weight_of(p);
        let wb = g.weight_of(b);
        if wb > part.epsilon * wp {
            violations.push(format!(
                "buffer {i} weight {wb} exceeds {} * {wp}",
                part.epsilon
            ));
        }
        per_part.push(g.expansion(p, b));
        ratios.push(wb / wp);
    }
    let max_expansion = per_part.iter().copied().fold(0.0, f64::max);
    CutReport { per_part_expansion: per_part, max_expansion, buffer_ratios: ratios, violations }
}
