//! Ordered-graph data model.
//!
//! Vertices are canonically renamed to `0..n` at construction time, in order:
//! the row index of the adjacency matrix *is* the vertex. Original (1-based)
//! labels are kept in an id map so inputs can be reported back verbatim.

use crate::error::{Error, Result};

/// A simple graph together with a total vertex order, stored as a symmetric
/// zero-diagonal bit matrix. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedGraph {
    n: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
    labels: Vec<usize>,
}

impl OrderedGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels = (1..=n).collect();
        Self::with_labels(n, edges, labels)
    }

    pub fn with_labels(n: usize, edges: &[(usize, usize)], labels: Vec<usize>) -> Result<Self> {
        if labels.len() != n {
            return Err(Error::input(format!(
                "label map has {} entries for {} vertices",
                labels.len(),
                n
            )));
        }
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![vec![0u64; words]; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            rows[u][v / 64] |= 1 << (v % 64);
            rows[v][u / 64] |= 1 << (u % 64);
        }
        Ok(OrderedGraph { n, words, rows, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u][v / 64] >> (v % 64) & 1 == 1
    }

    /// Adjacency matrix entry as 0/1, `entry(v, v) = 0`.
    pub fn entry(&self, u: usize, v: usize) -> u8 {
        self.adjacent(u, v) as u8
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v]
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Neighborhood of `v` restricted to vertices outside `exclude`,
    /// as a word vector. Used for twin tests.
    pub fn row_masked_out(&self, v: usize, exclude: &[u64]) -> Vec<u64> {
        self.rows[v]
            .iter()
            .zip(exclude)
            .map(|(r, e)| r & !e)
            .collect()
    }

    /// Induced subgraph on `sub` (must be strictly increasing vertex ids),
    /// with the inherited order. New vertex `i` is `sub[i]` in `self`.
    pub fn induced(&self, sub: &[usize]) -> Result<OrderedGraph> {
        for w in sub.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::input("induced: vertex list must be strictly increasing"));
            }
        }
        if let Some(&last) = sub.last() {
            if last >= self.n {
                return Err(Error::input(format!("induced: vertex {last} out of range")));
            }
        }
        let m = sub.len();
        let mut edges = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                if self.adjacent(sub[i], sub[j]) {
                    edges.push((i, j));
                }
            }
        }
        let labels = sub.iter().map(|&v| self.labels[v]).collect();
        OrderedGraph::with_labels(m, &edges, labels)
    }

    /// Induced subgraph on the set described by a bit mask.
    pub fn induced_mask(&self, mask: &[u64]) -> Result<(OrderedGraph, Vec<usize>)> {
        let sub = mask_to_vec(mask, self.n);
        Ok((self.induced(&sub)?, sub))
    }

    pub fn complement(&self) -> OrderedGraph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.adjacent(u, v) {
                    edges.push((u, v));
                }
            }
        }
        OrderedGraph::with_labels(self.n, &edges, self.labels.clone()).unwrap()
    }

    /// The graph with rows and columns permuted so that position `i` of the new
    /// order holds `perm[i]` of the old one.
    pub fn reordered(&self, perm: &[usize]) -> Result<OrderedGraph> {
        if perm.len() != self.n {
            return Err(Error::input("reordered: permutation length mismatch"));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(Error::input("reordered: not a permutation"));
            }
            seen[p] = true;
        }
        let mut edges = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adjacent(perm[i], perm[j]) {
                    edges.push((i, j));
                }
            }
        }
        let labels = perm.iter().map(|&p| self.labels[p]).collect();
        OrderedGraph::with_labels(self.n, &edges, labels)
    }
}

pub fn mask_to_vec(mask: &[u64], n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for v in 0..n {
        if mask[v / 64] >> (v % 64) & 1 == 1 {
            out.push(v);
        }
    }
    out
}

pub fn vec_to_mask(vs: &[usize], words: usize) -> Vec<u64> {
    let mut mask = vec![0u64; words];
    for &v in vs {
        mask[v / 64] |= 1 << (v % 64);
    }
    mask
}

/// A proper-coloring certificate: one color per vertex, colors `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<u32>,
}

impl Coloring {
    pub fn new(colors: Vec<u32>) -> Self {
        Coloring { colors }
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of distinct colors used.
    pub fn num_colors(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        self.colors.iter().for_each(|&c| {
            seen.insert(c);
        });
        seen.len()
    }

    /// Renumber colors to `0..k` by first appearance in vertex order.
    pub fn flattened(&self) -> Coloring {
        let mut map = std::collections::HashMap::new();
        let mut next = 0u32;
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                *map.entry(c).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        Coloring { colors }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueWitness {
    pub vertices: Vec<usize>,
}

impl CliqueWitness {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn verify(&self, g: &OrderedGraph) -> bool {
        for (i, &u) in self.vertices.iter().enumerate() {
            for &v in &self.vertices[i + 1..] {
                if u == v || !g.adjacent(u, v) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn is_proper(g: &OrderedGraph, c: &Coloring) -> Result<bool> {
    if c.len() != g.n() {
        return Err(Error::input(format!(
            "coloring assigns {} vertices but graph has {}",
            c.len(),
            g.n()
        )));
    }
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.adjacent(u, v) && c.color(u) == c.color(v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairClass {
    Complete,
    Anticomplete,
    Impure,
}

pub fn pair_class(g: &OrderedGraph, a: &[usize], b: &[usize]) -> Result<PairClass> {
    check_disjoint_nonempty(g, a, b)?;
    let mut any_edge = false;
    let mut any_nonedge = false;
    for &u in a {
        for &v in b {
            if g.adjacent(u, v) {
                any_edge = true;
            } else {
                any_nonedge = true;
            }
            if any_edge && any_nonedge {
                return Ok(PairClass::Impure);
            }
        }
    }
    Ok(if any_edge {
        PairClass::Complete
    } else {
        PairClass::Anticomplete
    })
}

/// True iff every vertex of `a` is individually complete or anticomplete towards `b`.
pub fn is_semipure(g: &OrderedGraph, a: &[usize], b: &[usize]) -> Result<bool> {
    check_disjoint_nonempty(g, a, b)?;
    for &u in a {
        let first = g.adjacent(u, b[0]);
        if b[1..].iter().any(|&v| g.adjacent(u, v) != first) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_disjoint_nonempty(g: &OrderedGraph, a: &[usize], b: &[usize]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::input("pair sets must be nonempty"));
    }
    let mut seen = vec![false; g.n()];
    for &u in a {
        if u >= g.n() {
            return Err(Error::input(format!("unknown vertex {u}")));
        }
        seen[u] = true;
    }
    for &v in b {
        if v >= g.n() {
            return Err(Error::input(format!("unknown vertex {v}")));
        }
        if seen[v] {
            return Err(Error::input(format!("sets overlap at vertex {v}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn path(n: usize) -> OrderedGraph {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        OrderedGraph::new(n, &edges).unwrap()
    }

    #[test]
    fn induced_path_restriction() {
        let p4 = path(4);
        let g = p4.induced(&[0, 1, 2]).unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.adjacent(0, 1) && g.adjacent(1, 2) && !g.adjacent(0, 2));
        assert_eq!(g.labels(), &[1, 2, 3]);
    }

    #[test]
    fn induced_empty_and_identity() {
        let p4 = path(4);
        assert_eq!(p4.induced(&[]).unwrap().n(), 0);
        let full = p4.induced(&[0, 1, 2, 3]).unwrap();
        assert_eq!(full, p4);
    }

    #[test]
    fn proper_coloring_checks() {
        let k2 = OrderedGraph::new(2, &[(0, 1)]).unwrap();
        assert!(!is_proper(&k2, &Coloring::new(vec![0, 0])).unwrap());
        assert!(is_proper(&k2, &Coloring::new(vec![0, 1])).unwrap());
        let e3 = OrderedGraph::new(3, &[]).unwrap();
        assert!(is_proper(&e3, &Coloring::new(vec![0, 0, 0])).unwrap());
        assert!(is_proper(&e3, &Coloring::new(vec![0])).is_err());
    }

    #[test]
    fn pair_classes() {
        let k22 = OrderedGraph::new(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(pair_class(&k22, &[0, 1], &[2, 3]).unwrap(), PairClass::Complete);
        let two_edges = OrderedGraph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            pair_class(&two_edges, &[0, 1], &[2, 3]).unwrap(),
            PairClass::Anticomplete
        );
        // P4 edges 12,23,34 (1-based): vertex 1 adjacent to neither 3 nor 4.
        let p4 = path(4);
        assert_eq!(pair_class(&p4, &[0], &[2, 3]).unwrap(), PairClass::Anticomplete);
        assert_eq!(pair_class(&p4, &[1], &[2, 3]).unwrap(), PairClass::Impure);
        assert!(pair_class(&p4, &[0, 1], &[1, 2]).is_err());
        assert!(pair_class(&p4, &[], &[1]).is_err());
    }

    #[test]
    fn semipure() {
        let p4 = path(4);
        // {1,2} towards {3,4}: vertex 2 (0-based 1) sees 3 but not 4.
        assert!(!is_semipure(&p4, &[0, 1], &[2, 3]).unwrap());
        // singleton target is always semi-pure
        assert!(is_semipure(&p4, &[1, 2], &[0]).unwrap());
        let k22 = OrderedGraph::new(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert!(is_semipure(&k22, &[0, 1], &[2, 3]).unwrap());
    }

    #[test]
    fn pair_class_symmetric() {
        let p4 = path(4);
        for (a, b) in [(vec![0], vec![2, 3]), (vec![1, 2], vec![3]), (vec![0, 1], vec![2, 3])] {
            assert_eq!(
                pair_class(&p4, &a, &b).unwrap(),
                pair_class(&p4, &b, &a).unwrap()
            );
        }
    }
}
