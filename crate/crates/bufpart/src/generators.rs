//! Random and structured test graphs.

use std::collections::HashSet;

use crate::graph::Graph;
use crate::rng::StreamRng;

fn bernoulli(rng: &mut StreamRng, p: f64) -> bool {
    rng.uniform() <= p && p > 0.0
}

/// Random simple d-regular graph (Steger–Wormald stub pairing with restarts).
pub fn random_regular(n: usize, d: usize, rng: &mut StreamRng) -> Graph {
    assert!(n * d % 2 == 0 && d < n, "no {d}-regular graph on {n} vertices");
    'restart: loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|u| std::iter::repeat(u).take(d)).collect();
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        while !stubs.is_empty() {
            let mut placed = false;
            for _ in 0..100 {
                let i = rng.below(stubs.len() as u64) as usize;
                let j = rng.below(stubs.len() as u64) as usize;
                let (u, v) = (stubs[i], stubs[j]);
                if i == j || u == v || edges.contains(&(u.min(v), u.max(v))) {
                    continue;
                }
                edges.insert((u.min(v), u.max(v)));
                let (hi, lo) = (i.max(j), i.min(j));
                stubs.swap_remove(hi);
                stubs.swap_remove(lo);
                placed = true;
                break;
            }
            if !placed {
                continue 'restart;
            }
        }
        let mut list: Vec<_> = edges.into_iter().map(|(u, v)| (u, v, 1.0)).collect();
        list.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        return Graph::new(n, &list, None).expect("valid regular graph");
    }
}

/// Connected G(n, p) with edge costs uniform in [lo, hi] and default weights.
pub fn weighted_erdos_renyi(n: usize, p: f64, lo: f64, hi: f64, rng: &mut StreamRng) -> Graph {
    loop {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if bernoulli(rng, p) {
                    e.push((u, v, lo + (hi - lo) * rng.uniform()));
                }
            }
        }
        if let Ok(g) = Graph::new(n, &e, None) {
            if g.components().len() == 1 {
                return g;
            }
        }
    }
}

/// Planted partition with unit costs; returns the graph and community labels.
/// Resampled until connected.
pub fn planted_partition(sizes: &[usize], p_in: f64, p_out: f64, rng: &mut StreamRng) -> (Graph, Vec<usize>) {
    let labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &s)| std::iter::repeat(c).take(s)).collect();
    let n = labels.len();
    loop {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let p = if labels[u] == labels[v] { p_in } else { p_out };
                if bernoulli(rng, p) {
                    e.push((u, v, 1.0));
                }
            }
        }
        if let Ok(g) = Graph::new(n, &e, None) {
            if g.components().len() == 1 {
                return (g, labels);
            }
        }
    }
}

/// Disjoint unit-cost cliques; when `bridge > 0` consecutive cliques are
/// joined in a ring by one edge of that cost.
pub fn clique_ring(sizes: &[usize], bridge: f64) -> (Graph, Vec<usize>) {
    let mut e = Vec::new();
    let mut labels = Vec::new();
    let mut first = Vec::new();
    for (c, &s) in sizes.iter().enumerate() {
        let base = labels.len();
        first.push(base);
        for u in 0..s {
            for v in u + 1..s {
                e.push((base + u, base + v, 1.0));
            }
        }
        labels.extend(std::iter::repeat(c).take(s));
    }
    let k = sizes.len();
    if bridge > 0.0 && k > 1 {
        for c in 0..k {
            let next = (c + 1) % k;
            if k == 2 && c == 1 {
                break;
            }
            // Last vertex of clique c to first vertex of the next one.
            e.push((first[c] + sizes[c] - 1, first[next], bridge));
        }
    }
    (Graph::new(labels.len(), &e, None).expect("valid clique ring"), labels)
}

/// Random connected graph: random spanning tree plus each other pair with
/// probability `p`; integer costs in 1..=max_cost.
pub fn random_connected(n: usize, p: f64, max_cost: u64, rng: &mut StreamRng) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for i in 1..n {
        let j = rng.below(i as u64) as usize;
        let (u, v) = (order[i], order[j]);
        edges.insert((u.min(v), u.max(v)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && bernoulli(rng, p) {
                edges.insert((u, v));
            }
        }
    }
    let mut list: Vec<(usize, usize)> = edges.into_iter().collect();
    list.sort();
    let e: Vec<_> = list.into_iter().map(|(u, v)| (u, v, (1 + rng.below(max_cost)) as f64)).collect();
    Graph::new(n, &e, None).expect("connected graph")
}
