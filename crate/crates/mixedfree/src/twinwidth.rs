//! Contraction sequences, their impure-pair width, and exact twin-width at
//! tiny scale via memoized search over vertex partitions.

use crate::error::{Error, Result};
use crate::graph::OrderedGraph;
use std::collections::HashMap;

pub const DEFAULT_TWW_CAP: usize = 9;

/// A contraction sequence: n-1 merges of part identifiers, where a part is
/// named by its minimum original vertex. Merging parts a and b produces a
/// part named min(a, b).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionSequence {
    pub merges: Vec<(usize, usize)>,
}

/// Maximum over all steps and parts A of the number of parts B with the pair
/// (A, B) impure. The initial discrete partition has width 0.
pub fn width_of_sequence(g: &OrderedGraph, seq: &ContractionSequence) -> Result<usize> {
    let n = g.n();
    if n == 0 {
        return if seq.merges.is_empty() {
            Ok(0)
        } else {
            Err(Error::input("sequence nonempty for empty graph"))
        };
    }
    if seq.merges.len() != n - 1 {
        return Err(Error::input(format!(
            "sequence has {} merges; expected {}",
            seq.merges.len(),
            n - 1
        )));
    }
    if n > 64 {
        return Err(Error::input("width_of_sequence supports n <= 64"));
    }
    let mut parts: HashMap<usize, u64> = (0..n).map(|v| (v, 1u64 << v)).collect();
    let mut width = 0;
    for &(a, b) in &seq.merges {
        if a == b {
            return Err(Error::input("merge of a part with itself"));
        }
        let ma = *parts
            .get(&a)
            .ok_or_else(|| Error::input(format!("unknown part {a}")))?;
        let mb = *parts
            .get(&b)
            .ok_or_else(|| Error::input(format!("unknown part {b}")))?;
        parts.remove(&a);
        parts.remove(&b);
        parts.insert(a.min(b), ma | mb);
        let masks: Vec<u64> = parts.values().copied().collect();
        width = width.max(partition_width(g, &masks));
    }
    if parts.len() != 1 {
        return Err(Error::EngineBug("sequence did not end in one part".into()));
    }
    Ok(width)
}

fn pair_impure(g: &OrderedGraph, a: u64, b: u64) -> bool {
    let mut any_edge = false;
    let mut all_edge = true;
    let mut rest = a;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let hits = g.row(v)[0] & b;
        if hits != 0 {
            any_edge = true;
        }
        if hits != b {
            all_edge = false;
        }
        if any_edge && !all_edge {
            return true;
        }
    }
    false
}

fn partition_width(g: &OrderedGraph, masks: &[u64]) -> usize {
    let p = masks.len();
    let mut counts = vec![0usize; p];
    for i in 0..p {
        for j in i + 1..p {
            if pair_impure(g, masks[i], masks[j]) {
                counts[i] += 1;
                counts[j] += 1;
            }
        }
    }
    counts.into_iter().max().unwrap_or(0)
}

/// Exact twin-width with a witnessing sequence, by memoized search over all
/// reachable partitions. Capped (default n <= 9).
pub fn twinwidth_exact(g: &OrderedGraph) -> Result<(usize, ContractionSequence)> {
    twinwidth_exact_capped(g, DEFAULT_TWW_CAP)
}

pub fn twinwidth_exact_capped(g: &OrderedGraph, cap: usize) -> Result<(usize, ContractionSequence)> {
    let n = g.n();
    if n > cap {
        return Err(Error::OracleCap {
            oracle: "twinwidth",
            required: n,
            cap,
        });
    }
    if n <= 1 {
        return Ok((0, ContractionSequence { merges: vec![] }));
    }
    let mut memo = HashMap::new();
    let start: Vec<u64> = (0..n).map(|v| 1u64 << v).collect();
    let t = solve(g, &start, &mut memo);
    // Greedy replay: at each state take the first merge (by part names, i.e.
    // minimum vertices of the two parts, smaller name first) achieving the
    // optimum. Deterministic witness.
    let mut merges = Vec::new();
    let mut masks = start;
    while masks.len() > 1 {
        let value = solve(g, &masks, &mut memo);
        let mut choice = None;
        'outer: for i in 0..masks.len() {
            for j in i + 1..masks.len() {
                let next = merged(&masks, i, j);
                let w = partition_width(g, &next).max(solve(g, &next, &mut memo));
                if w <= value {
                    choice = Some((i, j, next));
                    break 'outer;
                }
            }
        }
        let (i, j, next) = choice.expect("optimal merge must exist");
        let name = |m: u64| m.trailing_zeros() as usize;
        let (a, b) = (name(masks[i]).min(name(masks[j])), name(masks[i]).max(name(masks[j])));
        merges.push((a, b));
        masks = next;
    }
    Ok((t, ContractionSequence { merges }))
}

fn merged(masks: &[u64], i: usize, j: usize) -> Vec<u64> {
    let mut next: Vec<u64> = masks
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, &m)| m)
        .collect();
    next.push(masks[i] | masks[j]);
    next.sort_unstable();
    next
}

/// Minimum over completions of the maximum width of any later partition
/// (excluding the current one, whose width the caller accounts for).
fn solve(g: &OrderedGraph, masks: &[u64], memo: &mut HashMap<Vec<u64>, usize>) -> usize {
    if masks.len() <= 1 {
        return 0;
    }
    if let Some(&v) = memo.get(masks) {
        return v;
    }
    let mut best = usize::MAX;
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            let next = merged(masks, i, j);
            let w = partition_width(g, &next).max(solve(g, &next, memo));
            best = best.min(w);
        }
    }
    memo.insert(masks.to_vec(), best);
    best
}

/// The almost-mixed-freeness parameter guaranteed for orderings derived from a
/// width-t contraction sequence: d = 4t + 4.
pub fn d_from_twinwidth(t: usize) -> usize {
    4 * t + 4
}
