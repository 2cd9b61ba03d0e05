//! Compressions of a symmetric division: the block-index graphs whose edges
//! record non-zero-horizontal, non-zero-vertical, or mixed zones; degeneracy
//! coloring of the mixed compression; lifting of almost-mixed minors from a
//! compression back to the original matrix; and the clique bound mu.

use crate::error::{Error, Result};
use crate::graph::{Coloring, OrderedGraph};
use crate::matrix::{
    classify_zone, find_corner, Division, MinorKind, MinorWitness, ZoneClass,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompressionKind {
    H,
    V,
    M,
}

pub struct CompressionResult {
    pub graph: OrderedGraph,
    pub kind: CompressionKind,
    pub source_division: Division,
}

/// Graph on block indices of a symmetric division. Edge ij (i < j) present iff
/// the zone at row block i, column block j is:
/// H: horizontal and not constant 0; V: vertical and not constant 0; M: mixed.
pub fn compress(g: &OrderedGraph, division: &Division, kind: CompressionKind) -> Result<CompressionResult> {
    if !division.is_symmetric() {
        return Err(Error::input("compress requires a symmetric division"));
    }
    let s = division.s_rows();
    let mut edges = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            let zone = classify_zone(g, division.row_block(i), division.col_block(j))?;
            let edge = match kind {
                CompressionKind::H => zone.is_horizontal() && zone != ZoneClass::Constant0,
                CompressionKind::V => zone.is_vertical() && zone != ZoneClass::Constant0,
                CompressionKind::M => zone.is_mixed(),
            };
            if edge {
                edges.push((i, j));
            }
        }
    }
    Ok(CompressionResult {
        graph: OrderedGraph::new(s, &edges)?,
        kind,
        source_division: division.clone(),
    })
}

/// Proper coloring via the smallest-last (degeneracy) ordering, together with
/// the measured degeneracy. Uses at most degeneracy + 1 colors. Ties broken by
/// smallest vertex id.
pub fn degeneracy_coloring(g: &OrderedGraph) -> (Coloring, usize) {
    let n = g.n();
    let mut removed = vec![false; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut order = Vec::with_capacity(n); // smallest-last, built back to front
    let mut degeneracy = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        degeneracy = degeneracy.max(deg[v]);
        removed[v] = true;
        order.push(v);
        for u in 0..n {
            if !removed[u] && g.adjacent(u, v) {
                deg[u] -= 1;
            }
        }
    }
    order.reverse();
    // Greedy along the reversed elimination order: each vertex sees at most
    // `degeneracy` already-colored neighbors.
    let mut colors = vec![u32::MAX; n];
    for &v in &order {
        let mut forbidden: Vec<u32> = (0..n)
            .filter(|&u| g.adjacent(u, v) && colors[u] != u32::MAX)
            .map(|u| colors[u])
            .collect();
        forbidden.sort_unstable();
        forbidden.dedup();
        let mut c = 0u32;
        for f in forbidden {
            if f == c {
                c += 1;
            } else if f > c {
                break;
            }
        }
        colors[v] = c;
    }
    (Coloring::new(colors), degeneracy)
}

/// Lift a d-almost-mixed minor of a compression matrix (H or V) to one of the
/// original matrix that coarsens the division, with every block of the result
/// spanning at least two blocks of the division. For each off-diagonal zone,
/// the corner of the input witness pins down a 2x2 group of division blocks
/// that is guaranteed mixed in the original matrix; the output corner is
/// located inside that region and the whole witness re-verifies independently.
pub fn lift_minor(
    g: &OrderedGraph,
    division: &Division,
    kind: CompressionKind,
    minor: &MinorWitness,
) -> Result<MinorWitness> {
    if kind == CompressionKind::M {
        return Err(Error::input("lift_minor applies to H and V compressions only"));
    }
    if minor.d < 2 {
        return Err(Error::input("lift_minor requires d >= 2"));
    }
    if minor.kind != MinorKind::AlmostMixed {
        return Err(Error::input("lift_minor expects an almost-mixed witness"));
    }
    let comp = compress(g, division, kind)?;
    minor.verify(&comp.graph)?;
    let d = minor.d;
    // Map block-index bounds through the division to row/column positions.
    let row_bounds: Vec<usize> = minor
        .row_bounds
        .iter()
        .map(|&b| division.row_bounds()[b - 1])
        .collect();
    let col_bounds: Vec<usize> = minor
        .col_bounds
        .iter()
        .map(|&b| division.col_bounds()[b - 1])
        .collect();
    let lifted_div = Division::new(g.n(), row_bounds.clone(), col_bounds.clone())?;
    let mut corners = Vec::new();
    for &(i, j, r, c) in &minor.corners {
        // The input corner spans compression blocks r, r+1 and c, c+1; the
        // union of the corresponding division blocks is mixed in g's matrix.
        let rows = division.row_block(r).start..division.row_block(r + 1).end;
        let cols = division.col_block(c).start..division.col_block(c + 1).end;
        let (cr, cc) = find_corner(g, rows, cols).ok_or_else(|| {
            Error::EngineBug(format!(
                "lifted zone ({i},{j}) contains no corner; input witness or division invalid"
            ))
        })?;
        corners.push((i, j, cr, cc));
    }
    let lifted = MinorWitness {
        kind: MinorKind::AlmostMixed,
        d,
        row_bounds,
        col_bounds,
        corners,
    };
    lifted.verify(g)?;
    if !lifted.is_coarsening_of(division) {
        return Err(Error::EngineBug("lifted witness does not coarsen the division".into()));
    }
    // Each block of the lifted witness must span >= 2 blocks of the division.
    for i in 0..d {
        let rspan = block_span(&lifted_div.row_bounds()[..], i, division.row_bounds());
        let cspan = block_span(&lifted_div.col_bounds()[..], i, division.col_bounds());
        if rspan < 2 || cspan < 2 {
            return Err(Error::EngineBug(format!(
                "lifted block {i} spans fewer than two division blocks"
            )));
        }
    }
    Ok(lifted)
}

/// Number of division blocks covered by block `i` of a coarsening given by
/// cumulative bounds.
fn block_span(coarse_bounds: &[usize], i: usize, fine_bounds: &[usize]) -> usize {
    let start = if i == 0 { 0 } else { coarse_bounds[i - 1] };
    let end = coarse_bounds[i];
    fine_bounds.iter().filter(|&&b| b > start && b <= end).count()
}

/// Clique bound for the horizontal compression: 2 * C(omega + d - 2, d - 1) - 1.
pub fn mu(omega: u64, d: u64) -> Result<u64> {
    if omega < 1 || d < 1 {
        return Err(Error::input("mu requires omega, d >= 1"));
    }
    Ok(2 * binomial(omega + d - 2, d - 1) - 1)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Recurrence cross-check for mu: mu(1,.) = mu(.,1) = 1 and
/// mu(w,d) = mu(w-1,d) + mu(w,d-1) + 1.
pub fn mu_recurrence(omega: u64, d: u64) -> Result<u64> {
    if omega < 1 || d < 1 {
        return Err(Error::input("mu requires omega, d >= 1"));
    }
    if omega == 1 || d == 1 {
        return Ok(1);
    }
    Ok(mu_recurrence(omega - 1, d)? + mu_recurrence(omega, d - 1)? + 1)
}
