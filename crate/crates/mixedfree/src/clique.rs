//! Exact maximum-clique oracle: bitset branch-and-bound with greedy-coloring
//! upper bounds, deterministic tie-breaks by vertex order.

use crate::error::{Error, Result};
use crate::graph::{CliqueWitness, OrderedGraph};

pub const DEFAULT_CLIQUE_CAP: usize = 64;

/// Exact clique number with a witness. Refuses above the cap.
pub fn clique_number(g: &OrderedGraph) -> Result<(usize, CliqueWitness)> {
    clique_number_capped(g, DEFAULT_CLIQUE_CAP)
}

pub fn clique_number_capped(g: &OrderedGraph, cap: usize) -> Result<(usize, CliqueWitness)> {
    let cap = cap.min(64);
    if g.n() > cap {
        return Err(Error::OracleCap {
            oracle: "clique",
            required: g.n(),
            cap,
        });
    }
    if g.n() == 0 {
        return Ok((0, CliqueWitness { vertices: vec![] }));
    }
    let adj = rows64(g);
    let full = full_mask(g.n());
    let mut best = Vec::new();
    let mut cur = Vec::new();
    expand(&adj, full, &mut cur, &mut best, usize::MAX);
    best.sort_unstable();
    Ok((best.len(), CliqueWitness { vertices: best }))
}

/// Size of a maximum clique inside `mask`, stopping early once `stop_at` is
/// reached. Internal helper; requires n <= 64.
pub fn max_clique_in_mask(g: &OrderedGraph, mask: u64, stop_at: usize) -> usize {
    let adj = rows64(g);
    let mut best = Vec::new();
    let mut cur = Vec::new();
    expand(&adj, mask, &mut cur, &mut best, stop_at);
    best.len()
}

/// Does `mask` contain a clique of size `size` that includes vertex `v`?
pub fn has_clique_with(g: &OrderedGraph, mask: u64, v: usize, size: usize) -> bool {
    if size == 0 {
        return true;
    }
    if mask >> v & 1 == 0 {
        return false;
    }
    if size == 1 {
        return true;
    }
    let adj = rows64(g);
    let cand = mask & adj[v];
    let mut best = Vec::new();
    let mut cur = vec![v];
    expand(&adj, cand, &mut cur, &mut best, size);
    best.len() >= size
}

fn rows64(g: &OrderedGraph) -> Vec<u64> {
    (0..g.n()).map(|v| g.row(v)[0]).collect()
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Tomita-style expansion. `stop_at`: stop as soon as a clique of that size is
/// found (usize::MAX for a full maximum search).
fn expand(adj: &[u64], cand: u64, cur: &mut Vec<usize>, best: &mut Vec<usize>, stop_at: usize) {
    if best.len() >= stop_at {
        return;
    }
    if cand == 0 {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        return;
    }
    // Greedy-color the candidates; color numbers bound the clique extension.
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(cand.count_ones() as usize);
    let mut uncolored = cand;
    let mut color = 0usize;
    while uncolored != 0 {
        color += 1;
        let mut class_cand = uncolored;
        while class_cand != 0 {
            let v = class_cand.trailing_zeros() as usize;
            order.push((v, color));
            uncolored &= !(1u64 << v);
            class_cand &= !(1u64 << v);
            class_cand &= !adj[v];
        }
    }
    // Process highest colors first.
    let mut p = cand;
    for &(v, c) in order.iter().rev() {
        if cur.len() + c <= best.len() {
            return;
        }
        cur.push(v);
        expand(adj, p & adj[v], cur, best, stop_at);
        cur.pop();
        if best.len() >= stop_at {
            return;
        }
        p &= !(1u64 << v);
    }
}
