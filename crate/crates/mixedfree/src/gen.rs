//! Seeded, deterministic test-corpus generators: structured families plus a
//! reverse-split construction for graphs of bounded twin-width with a
//! witnessing contraction sequence attached.

use crate::error::{Error, Result};
use crate::graph::OrderedGraph;
use crate::twinwidth::{width_of_sequence, ContractionSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GenSpec {
    Path { n: usize },
    Cycle { n: usize },
    Grid { rows: usize, cols: usize },
    DisjointCliques { count: usize, size: usize },
    Cograph { n: usize, seed: u64 },
    BoundedTww { n: usize, t: usize, seed: u64 },
    ErdosRenyi { n: usize, p: f64, seed: u64 },
}

pub struct Generated {
    pub graph: OrderedGraph,
    /// For the bounded twin-width family: a contraction sequence witnessing
    /// width at most t.
    pub sequence: Option<ContractionSequence>,
}

pub fn generate(spec: &GenSpec) -> Result<Generated> {
    let graph_only = |g: OrderedGraph| Generated {
        graph: g,
        sequence: None,
    };
    match *spec {
        GenSpec::Path { n } => {
            if n == 0 {
                return Err(Error::input("path requires n >= 1"));
            }
            let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
            Ok(graph_only(OrderedGraph::new(n, &edges)?))
        }
        GenSpec::Cycle { n } => {
            if n < 3 {
                return Err(Error::input("cycle requires n >= 3"));
            }
            let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
            edges.push((n - 1, 0));
            Ok(graph_only(OrderedGraph::new(n, &edges)?))
        }
        GenSpec::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return Err(Error::input("grid requires positive dimensions"));
            }
            // row-major vertex order
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
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
            Ok(graph_only(OrderedGraph::new(rows * cols, &edges)?))
        }
        GenSpec::DisjointCliques { count, size } => {
            if count == 0 || size == 0 {
                return Err(Error::input("disjoint_cliques requires positive parameters"));
            }
            let mut edges = Vec::new();
            for b in 0..count {
                let base = b * size;
                for i in 0..size {
                    for j in i + 1..size {
                        edges.push((base + i, base + j));
                    }
                }
            }
            Ok(graph_only(OrderedGraph::new(count * size, &edges)?))
        }
        GenSpec::Cograph { n, seed } => {
            if n == 0 {
                return Err(Error::input("cograph requires n >= 1"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc06a);
            let mut edges = Vec::new();
            let join = rng.gen_bool(0.5);
            cotree(&mut rng, 0, n, join, &mut edges);
            Ok(graph_only(OrderedGraph::new(n, &edges)?))
        }
        GenSpec::BoundedTww { n, t, seed } => bounded_tww(n, t, seed),
        GenSpec::ErdosRenyi { n, p, seed } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::input("erdos_renyi requires p in [0,1]"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xe2d05);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((i, j));
                    }
                }
            }
            Ok(graph_only(OrderedGraph::new(n, &edges)?))
        }
    }
}

/// Random cotree over the contiguous leaf interval [start, start+len), leaves
/// in left-to-right order. `join` = current operation; children alternate.
fn cotree(rng: &mut ChaCha8Rng, start: usize, len: usize, join: bool, edges: &mut Vec<(usize, usize)>) {
    if len == 1 {
        return;
    }
    let cut = rng.gen_range(1..len);
    if join {
        for a in start..start + cut {
            for b in start + cut..start + len {
                edges.push((a, b));
            }
        }
    }
    cotree(rng, start, cut, !join, edges);
    cotree(rng, start + cut, len - cut, !join, edges);
}

/// Pair label during the reverse split process.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Label {
    Edge,
    NonEdge,
    Red,
}

/// Build a graph of twin-width <= t by running the contraction process in
/// reverse: start from one part and split until all parts are singletons,
/// keeping every part's red (impure) degree at most t throughout. Merging the
/// splits back in reverse order is then a width-<= t contraction sequence.
/// Residual red pairs between singletons are realized as random adjacencies,
/// which can only make pairs pure.
fn bounded_tww(n: usize, t: usize, seed: u64) -> Result<Generated> {
    if n == 0 || n > 64 {
        return Err(Error::input("bounded_tww requires 1 <= n <= 64"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7bb);
    // parts are contiguous vertex ranges (start, len); labels indexed by part pair
    let mut parts: Vec<(usize, usize)> = vec![(0, n)];
    let mut labels: Vec<Vec<Label>> = vec![vec![]]; // labels[i][j] for j < i
    let mut splits: Vec<(usize, usize)> = Vec::new(); // (part names at merge time)
    let label = |labels: &Vec<Vec<Label>>, i: usize, j: usize| -> Label {
        if i > j {
            labels[i][j]
        } else {
            labels[j][i]
        }
    };
    let red_count = |labels: &Vec<Vec<Label>>, p: usize, count: usize| -> usize {
        (0..count)
            .filter(|&q| q != p && label(labels, p, q) == Label::Red)
            .count()
    };
    while parts.len() < n {
        // pick a splittable part
        let candidates: Vec<usize> = (0..parts.len()).filter(|&i| parts[i].1 >= 2).collect();
        let pi = candidates[rng.gen_range(0..candidates.len())];
        let (start, len) = parts[pi];
        let cut = rng.gen_range(1..len);
        // the split replaces part pi by (start, cut) and appends (start+cut, len-cut)
        let new_index = parts.len();
        parts[pi] = (start, cut);
        parts.push((start + cut, len - cut));
        splits.push((start, start + cut));
        // child labels towards every other part
        let mut new_row: Vec<Label> = Vec::with_capacity(new_index);
        for q in 0..new_index {
            if q == pi {
                new_row.push(Label::Edge); // placeholder, fixed below
                continue;
            }
            let old = label(&labels, pi, q);
            match old {
                Label::Edge | Label::NonEdge => new_row.push(old),
                Label::Red => {
                    // split a red pair: keep red on a random side if capacity
                    // allows, otherwise resolve it into pure labels
                    let q_extra_ok = red_count(&labels, q, new_index) < t; // q gains one if both stay red
                    let choice = rng.gen_range(0..4);
                    let (a, b) = match choice {
                        0 if q_extra_ok => (Label::Red, Label::Red),
                        1 => (Label::Red, if rng.gen_bool(0.5) { Label::Edge } else { Label::NonEdge }),
                        2 => (if rng.gen_bool(0.5) { Label::Edge } else { Label::NonEdge }, Label::Red),
                        _ => {
                            if rng.gen_bool(0.5) {
                                (Label::Edge, Label::NonEdge)
                            } else {
                                (Label::NonEdge, Label::Edge)
                            }
                        }
                    };
                    set_label(&mut labels, pi, q, a);
                    new_row.push(b);
                }
            }
        }
        // label between the two children
        let p1_red = red_count(&labels, pi, new_index);
        let p2_red = new_row
            .iter()
            .enumerate()
            .filter(|&(q, &l)| q != pi && l == Label::Red)
            .count();
        // the placeholder at index pi is not a real label yet
        let between = if p1_red < t && p2_red < t && rng.gen_bool(0.4) {
            Label::Red
        } else if rng.gen_bool(0.5) {
            Label::Edge
        } else {
            Label::NonEdge
        };
        new_row[pi] = between;
        labels.push(new_row);
        // sanity: red degrees within budget
        debug_assert!(red_count(&labels, pi, parts.len()) <= t);
        debug_assert!(red_count(&labels, new_index, parts.len()) <= t);
    }
    // realize: parts are singletons; order parts by their vertex
    let vertex_of: Vec<usize> = parts.iter().map(|&(s, _)| s).collect();
    let mut edges = Vec::new();
    for i in 0..parts.len() {
        for j in 0..i {
            let e = match labels[i][j] {
                Label::Edge => true,
                Label::NonEdge => false,
                Label::Red => rng.gen_bool(0.5),
            };
            if e {
                edges.push((vertex_of[i].min(vertex_of[j]), vertex_of[i].max(vertex_of[j])));
            }
        }
    }
    let graph = OrderedGraph::new(n, &edges)?;
    let merges: Vec<(usize, usize)> = splits.into_iter().rev().collect();
    let sequence = ContractionSequence { merges };
    let w = width_of_sequence(&graph, &sequence)?;
    if w > t {
        return Err(Error::EngineBug(format!(
            "bounded_tww produced width {w} > requested {t}"
        )));
    }
    Ok(Generated {
        graph,
        sequence: Some(sequence),
    })
}

fn set_label(labels: &mut [Vec<Label>], i: usize, j: usize, l: Label) {
    if i > j {
        labels[i][j] = l;
    } else {
        labels[j][i] = l;
    }
}
