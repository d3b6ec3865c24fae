//! Seeded synthetic graph families for tests, benches and sweeps.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::VertexId;

fn build(n: usize, edges: Vec<(VertexId, VertexId)>) -> Graph {
    Graph::from_edges(n, edges).expect("generated ids are in range")
}

pub fn path(n: usize) -> Graph {
    build(n, (1..n as VertexId).map(|v| (v - 1, v)).collect())
}

pub fn cycle(n: usize) -> Graph {
    let mut edges: Vec<_> = (1..n as VertexId).map(|v| (v - 1, v)).collect();
    if n > 2 {
        edges.push((n as VertexId - 1, 0));
    }
    build(n, edges)
}

pub fn star(leaves: usize) -> Graph {
    build(leaves + 1, (1..=leaves as VertexId).map(|v| (0, v)).collect())
}

pub fn complete(n: usize) -> Graph {
    let n32 = n as VertexId;
    build(n, (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v))).collect())
}

/// `rows × cols` lattice, vertex `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| (r * cols + c) as VertexId;
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    build(rows * cols, edges)
}

/// `G(n, m)` with `m = round(n * avg_degree / 2)` distinct uniform edges.
pub fn erdos_renyi(n: usize, avg_degree: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_edges = n * n.saturating_sub(1) / 2;
    let m = ((n as f64 * avg_degree / 2.0).round() as usize).min(max_edges);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.random_range(0..n as VertexId);
        let v = rng.random_range(0..n as VertexId);
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u, v));
        }
    }
    build(n, edges)
}

/// Barabási–Albert growth: a seed clique on `per_vertex + 1` vertices, then
/// each new vertex links to `per_vertex` distinct targets chosen with
/// probability proportional to degree. Average degree ≈ `2 * per_vertex`.
pub fn preferential_attachment(n: usize, per_vertex: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = (per_vertex + 1).min(n);
    let mut edges = Vec::with_capacity(n * per_vertex);
    let mut endpoints: Vec<VertexId> = Vec::with_capacity(2 * n * per_vertex);
    for u in 0..core as VertexId {
        for v in u + 1..core as VertexId {
            edges.push((u, v));
            endpoints.extend([u, v]);
        }
    }
    let mut targets = Vec::with_capacity(per_vertex);
    for v in core as VertexId..n as VertexId {
        targets.clear();
        while targets.len() < per_vertex {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((v, t));
            endpoints.extend([v, t]);
        }
    }
    build(n, edges)
}
