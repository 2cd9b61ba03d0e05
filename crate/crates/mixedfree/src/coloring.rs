//! Exact chromatic number (iterative deepening over k with DSATUR ordering)
//! and the DSATUR greedy fallback.

use crate::clique::clique_number_capped;
use crate::error::{Error, Result};
use crate::graph::{Coloring, OrderedGraph};

pub const DEFAULT_CHROMATIC_CAP: usize = 24;

pub fn chromatic_exact(g: &OrderedGraph) -> Result<(usize, Coloring)> {
    chromatic_exact_capped(g, DEFAULT_CHROMATIC_CAP)
}

pub fn chromatic_exact_capped(g: &OrderedGraph, cap: usize) -> Result<(usize, Coloring)> {
    if g.n() > cap {
        return Err(Error::OracleCap {
            oracle: "chromatic",
            required: g.n(),
            cap,
        });
    }
    if g.n() == 0 {
        return Ok((0, Coloring::new(vec![])));
    }
    let lb = clique_number_capped(g, 64)?.0;
    let greedy = greedy_fallback(g, None);
    let ub = greedy.num_colors();
    for k in lb..ub {
        let mut colors = vec![u32::MAX; g.n()];
        if try_k_coloring(g, k as u32, &mut colors, 0) {
            return Ok((k, Coloring::new(colors).flattened()));
        }
    }
    Ok((ub, greedy.flattened()))
}

/// Backtracking k-coloring, DSATUR vertex selection, new-color symmetry break.
fn try_k_coloring(g: &OrderedGraph, k: u32, colors: &mut Vec<u32>, colored: usize) -> bool {
    if colored == g.n() {
        return true;
    }
    // Pick uncolored vertex with maximum saturation, then maximum degree, then min id.
    let mut pick = usize::MAX;
    let mut pick_key = (0usize, 0usize);
    for v in 0..g.n() {
        if colors[v] != u32::MAX {
            continue;
        }
        let mut seen = 0u64;
        for u in 0..g.n() {
            if g.adjacent(u, v) && colors[u] != u32::MAX {
                seen |= 1 << colors[u].min(63);
            }
        }
        let key = (seen.count_ones() as usize, g.degree(v));
        if pick == usize::MAX || key > pick_key {
            pick = v;
            pick_key = key;
        }
    }
    let v = pick;
    let mut forbidden = 0u64;
    for u in 0..g.n() {
        if g.adjacent(u, v) && colors[u] != u32::MAX {
            forbidden |= 1 << colors[u];
        }
    }
    let max_used = colors
        .iter()
        .filter(|&&c| c != u32::MAX)
        .map(|&c| c + 1)
        .max()
        .unwrap_or(0);
    let limit = k.min(max_used + 1);
    for c in 0..limit {
        if forbidden >> c & 1 == 1 {
            continue;
        }
        colors[v] = c;
        if try_k_coloring(g, k, colors, colored + 1) {
            return true;
        }
        colors[v] = u32::MAX;
    }
    false
}

/// Saturation-degree greedy coloring. Always proper; deterministic given the
/// graph and the optional tie-break hint (a preference order over vertices).
pub fn greedy_fallback(g: &OrderedGraph, order_hint: Option<&[usize]>) -> Coloring {
    let n = g.n();
    let mut pref = vec![0usize; n];
    if let Some(hint) = order_hint {
        for (pos, &v) in hint.iter().enumerate() {
            if v < n {
                pref[v] = pos;
            }
        }
    } else {
        for (v, p) in pref.iter_mut().enumerate() {
            *p = v;
        }
    }
    let mut colors = vec![u32::MAX; n];
    for _ in 0..n {
        let mut pick = usize::MAX;
        let mut pick_key = (0usize, 0usize, usize::MAX);
        for v in 0..n {
            if colors[v] != u32::MAX {
                continue;
            }
            let mut seen = std::collections::HashSet::new();
            for u in 0..n {
                if g.adjacent(u, v) && colors[u] != u32::MAX {
                    seen.insert(colors[u]);
                }
            }
            // min preference position wins ties; usize::MAX - pref so bigger is better
            let key = (seen.len(), g.degree(v), usize::MAX - pref[v]);
            if pick == usize::MAX || key > pick_key {
                pick = v;
                pick_key = key;
            }
        }
        let v = pick;
        let mut forbidden = std::collections::HashSet::new();
        for u in 0..n {
            if g.adjacent(u, v) && colors[u] != u32::MAX {
                forbidden.insert(colors[u]);
            }
        }
        let mut c = 0u32;
        while forbidden.contains(&c) {
            c += 1;
        }
        colors[v] = c;
    }
    Coloring::new(colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_proper;

    fn cycle(n: usize) -> OrderedGraph {
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((n - 1, 0));
        OrderedGraph::new(n, &edges).unwrap()
    }

    fn complete(n: usize) -> OrderedGraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        OrderedGraph::new(n, &edges).unwrap()
    }

    #[test]
    fn chromatic_small() {
        let (chi, c) = chromatic_exact(&cycle(5)).unwrap();
        assert_eq!(chi, 3);
        assert!(is_proper(&cycle(5), &c).unwrap());
        assert_eq!(chromatic_exact(&complete(4)).unwrap().0, 4);
        let p4 = OrderedGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(chromatic_exact(&p4).unwrap().0, 2);
    }

    #[test]
    fn chromatic_cap() {
        let g = OrderedGraph::new(30, &[]).unwrap();
        assert!(matches!(
            chromatic_exact(&g),
            Err(Error::OracleCap { .. })
        ));
    }

    #[test]
    fn greedy_cases() {
        let e = OrderedGraph::new(4, &[]).unwrap();
        assert_eq!(greedy_fallback(&e, None).num_colors(), 1);
        assert_eq!(greedy_fallback(&complete(6), None).num_colors(), 6);
        let c5 = cycle(5);
        let g = greedy_fallback(&c5, None);
        assert!(is_proper(&c5, &g).unwrap());
        assert!(g.num_colors() <= 3);
    }
}
