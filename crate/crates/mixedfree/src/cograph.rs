//! Cograph recognition (complement-reducibility recursion) and perfect
//! coloring of cographs via the cotree: disjoint unions reuse palettes,
//! joins sum them.

use crate::error::{Error, Result};
use crate::graph::{Coloring, OrderedGraph};

pub fn is_cograph(g: &OrderedGraph) -> bool {
    if g.n() <= 1 {
        return true;
    }
    let comps = components(g);
    if comps.len() > 1 {
        return comps.iter().all(|c| is_cograph(&g.induced(c).unwrap()));
    }
    let co = g.complement();
    let cocomps = components(&co);
    if cocomps.len() > 1 {
        return cocomps.iter().all(|c| is_cograph(&g.induced(c).unwrap()));
    }
    false
}

/// Proper coloring of a cograph with exactly omega colors.
pub fn cograph_color(g: &OrderedGraph) -> Result<Coloring> {
    let mut colors = vec![0u32; g.n()];
    let verts: Vec<usize> = (0..g.n()).collect();
    color_rec(g, &verts, &mut colors)?;
    Ok(Coloring::new(colors).flattened())
}

/// Colors g[verts] into colors[], returning the palette size used.
fn color_rec(g: &OrderedGraph, verts: &[usize], colors: &mut [u32]) -> Result<u32> {
    if verts.is_empty() {
        return Ok(0);
    }
    if verts.len() == 1 {
        colors[verts[0]] = 0;
        return Ok(1);
    }
    let sub = g.induced(verts)?;
    let comps = components(&sub);
    if comps.len() > 1 {
        // disjoint union: components share one palette
        let mut used = 0;
        for comp in &comps {
            let orig: Vec<usize> = comp.iter().map(|&i| verts[i]).collect();
            used = used.max(color_rec(g, &orig, colors)?);
        }
        return Ok(used);
    }
    let cocomps = components(&sub.complement());
    if cocomps.len() > 1 {
        // join: co-components on disjoint palettes
        let mut offset = 0u32;
        for comp in &cocomps {
            let orig: Vec<usize> = comp.iter().map(|&i| verts[i]).collect();
            let used = color_rec(g, &orig, colors)?;
            for &v in &orig {
                colors[v] += offset;
            }
            offset += used;
        }
        return Ok(offset);
    }
    Err(Error::PromiseViolated(
        "cograph_color called on a graph with an induced P4".into(),
    ))
}

/// Connected components as sorted vertex lists, ordered by minimum vertex.
fn components(g: &OrderedGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for u in 0..n {
                if !seen[u] && g.adjacent(u, v) {
                    seen[u] = true;
                    comp.push(u);
                    stack.push(u);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Brute-force induced-P4 search; test oracle for `is_cograph`.
pub fn has_induced_p4(g: &OrderedGraph) -> bool {
    let n = g.n();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if a == b || a == c || a == d || b == c || b == d || c == d {
                        continue;
                    }
                    // path a-b-c-d induced
                    if g.adjacent(a, b)
                        && g.adjacent(b, c)
                        && g.adjacent(c, d)
                        && !g.adjacent(a, c)
                        && !g.adjacent(a, d)
                        && !g.adjacent(b, d)
                    {
                        return true;
                    }
                }
            }
        }
    }
    false
}
