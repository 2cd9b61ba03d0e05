//! Shared file formats: graph files, coloring files, minor-witness JSON,
//! contraction-sequence files, and the oracle-cap environment override.
//!
//! Graph file: `c` comment lines anywhere; `p <n> <m>`; `m` lines
//! `e <u> <v>` with 1-based vertex ids; optionally one line
//! `o <p1> ... <pn>` giving the vertex order (default: numeric order).
//! Coloring file: one line `v <vertex> <color>` per vertex, 1-based ids.
//! Sequence file: n-1 lines `<part> <part>`, parts named by their minimum
//! original (1-based) vertex.

use crate::error::{Error, Result};
use crate::graph::{Coloring, OrderedGraph};
use crate::matrix::{MinorKind, MinorWitness};
use crate::twinwidth::ContractionSequence;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

fn bad(line_no: usize, msg: impl std::fmt::Display) -> Error {
    Error::input(format!("line {line_no}: {msg}"))
}

pub fn parse_graph(text: &str) -> Result<OrderedGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut order: Option<Vec<usize>> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let tag = parts.next().unwrap();
        let fields: Vec<&str> = parts.collect();
        match tag {
            "p" => {
                if header.is_some() {
                    return Err(bad(line_no, "duplicate p line"));
                }
                if fields.len() != 2 {
                    return Err(bad(line_no, "expected `p <n> <m>`"));
                }
                let n: usize = fields[0].parse().map_err(|e| bad(line_no, e))?;
                let m: usize = fields[1].parse().map_err(|e| bad(line_no, e))?;
                header = Some((n, m));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| bad(line_no, "e line before p line"))?;
                if fields.len() != 2 {
                    return Err(bad(line_no, "expected `e <u> <v>`"));
                }
                let u: usize = fields[0].parse().map_err(|e| bad(line_no, e))?;
                let v: usize = fields[1].parse().map_err(|e| bad(line_no, e))?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(bad(line_no, format!("vertex out of range 1..={n}")));
                }
                if u == v {
                    return Err(bad(line_no, "self-loop"));
                }
                edges.push((u - 1, v - 1));
            }
            "o" => {
                let (n, _) = header.ok_or_else(|| bad(line_no, "o line before p line"))?;
                if order.is_some() {
                    return Err(bad(line_no, "duplicate o line"));
                }
                if fields.len() != n {
                    return Err(bad(line_no, format!("expected {n} entries in order line")));
                }
                let perm: Vec<usize> = fields
                    .iter()
                    .map(|f| f.parse::<usize>().map_err(|e| bad(line_no, e)))
                    .collect::<Result<_>>()?;
                let mut seen = vec![false; n + 1];
                for &p in &perm {
                    if p == 0 || p > n || seen[p] {
                        return Err(bad(line_no, "order line is not a permutation of 1..=n"));
                    }
                    seen[p] = true;
                }
                order = Some(perm);
            }
            _ => return Err(bad(line_no, format!("unknown line tag `{tag}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| Error::input("missing p line"))?;
    if edges.len() != m {
        return Err(Error::input(format!(
            "p line declares {m} edges; found {}",
            edges.len()
        )));
    }
    match order {
        None => OrderedGraph::new(n, &edges),
        Some(perm) => {
            // position i holds original vertex perm[i]; labels keep 1-based ids
            let mut pos = vec![0usize; n];
            for (i, &p) in perm.iter().enumerate() {
                pos[p - 1] = i;
            }
            let mapped: Vec<(usize, usize)> =
                edges.iter().map(|&(u, v)| (pos[u], pos[v])).collect();
            OrderedGraph::with_labels(n, &mapped, perm)
        }
    }
}

pub fn write_graph(g: &OrderedGraph) -> String {
    let edges = g.edges();
    let mut out = String::new();
    writeln!(out, "p {} {}", g.n(), edges.len()).unwrap();
    let natural = (0..g.n()).all(|v| g.label(v) == v + 1);
    if !natural {
        let order: Vec<String> = (0..g.n()).map(|v| g.label(v).to_string()).collect();
        writeln!(out, "o {}", order.join(" ")).unwrap();
    }
    for (u, v) in edges {
        writeln!(out, "e {} {}", g.label(u), g.label(v)).unwrap();
    }
    out
}

pub fn parse_coloring(text: &str, n: usize) -> Result<Coloring> {
    let mut colors: Vec<Option<u32>> = vec![None; n];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "v" {
            return Err(bad(line_no, "expected `v <vertex> <color>`"));
        }
        let v: usize = fields[1].parse().map_err(|e| bad(line_no, e))?;
        let c: u32 = fields[2].parse().map_err(|e| bad(line_no, e))?;
        if v == 0 || v > n {
            return Err(bad(line_no, format!("vertex out of range 1..={n}")));
        }
        if colors[v - 1].is_some() {
            return Err(bad(line_no, format!("duplicate color for vertex {v}")));
        }
        colors[v - 1] = Some(c);
    }
    let colors: Vec<u32> = colors
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::input(format!("vertex {} uncolored", v + 1))))
        .collect::<Result<_>>()?;
    Ok(Coloring::new(colors))
}

/// Writes one `v` line per vertex, addressed by the graph's original labels.
pub fn write_coloring(g: &OrderedGraph, c: &Coloring) -> String {
    let mut out = String::new();
    for v in 0..g.n() {
        writeln!(out, "v {} {}", g.label(v), c.color(v)).unwrap();
    }
    out
}

/// External witness form: 1-based block counts as boundaries and 1-based
/// corner coordinates (block row, block col, matrix row, matrix col).
#[derive(Serialize, Deserialize)]
struct WitnessJson {
    kind: MinorKind,
    d: usize,
    row_boundaries: Vec<usize>,
    col_boundaries: Vec<usize>,
    corners: Vec<(usize, usize, usize, usize)>,
}

pub fn witness_to_json(w: &MinorWitness) -> String {
    let j = WitnessJson {
        kind: w.kind,
        d: w.d,
        row_boundaries: w.row_bounds.clone(),
        col_boundaries: w.col_bounds.clone(),
        corners: w
            .corners
            .iter()
            .map(|&(i, j, r, c)| (i + 1, j + 1, r + 1, c + 1))
            .collect(),
    };
    serde_json::to_string_pretty(&j).expect("witness serializes")
}

pub fn witness_from_json(text: &str) -> Result<MinorWitness> {
    let j: WitnessJson =
        serde_json::from_str(text).map_err(|e| Error::input(format!("witness JSON: {e}")))?;
    let mut corners = Vec::with_capacity(j.corners.len());
    for &(bi, bj, r, c) in &j.corners {
        if bi == 0 || bj == 0 || r == 0 || c == 0 {
            return Err(Error::input("witness corners are 1-based"));
        }
        corners.push((bi - 1, bj - 1, r - 1, c - 1));
    }
    Ok(MinorWitness {
        kind: j.kind,
        d: j.d,
        row_bounds: j.row_boundaries,
        col_bounds: j.col_boundaries,
        corners,
    })
}

/// Sequence file: parts named by minimum original vertex, 1-based in the file.
pub fn parse_sequence(text: &str) -> Result<ContractionSequence> {
    let mut merges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(bad(line_no, "expected `<part> <part>`"));
        }
        let a: usize = fields[0].parse().map_err(|e| bad(line_no, e))?;
        let b: usize = fields[1].parse().map_err(|e| bad(line_no, e))?;
        if a == 0 || b == 0 {
            return Err(bad(line_no, "parts are 1-based"));
        }
        merges.push((a - 1, b - 1));
    }
    Ok(ContractionSequence { merges })
}

pub fn write_sequence(seq: &ContractionSequence) -> String {
    let mut out = String::new();
    for &(a, b) in &seq.merges {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

/// Oracle caps, overridable via `MIXEDFREE_CAPS`, e.g.
/// `clique=64,chromatic=24,tww=9,minor_n=30,minor_d=4,minor_blocks=20`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    pub clique: usize,
    pub chromatic: usize,
    pub tww: usize,
    pub minor_n: usize,
    pub minor_d: usize,
    pub minor_blocks: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            clique: crate::clique::DEFAULT_CLIQUE_CAP,
            chromatic: crate::coloring::DEFAULT_CHROMATIC_CAP,
            tww: crate::twinwidth::DEFAULT_TWW_CAP,
            minor_n: crate::matrix::DEFAULT_MINOR_N_CAP,
            minor_d: crate::matrix::DEFAULT_MINOR_D_CAP,
            minor_blocks: crate::matrix::DEFAULT_MINOR_BLOCKS_CAP,
        }
    }
}

pub fn parse_caps(s: &str) -> Result<Caps> {
    let mut caps = Caps::default();
    for item in s.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::input(format!("caps entry `{item}` is not key=value")))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|e| Error::input(format!("caps entry `{item}`: {e}")))?;
        match key.trim() {
            "clique" => caps.clique = value,
            "chromatic" => caps.chromatic = value,
            "tww" => caps.tww = value,
            "minor_n" => caps.minor_n = value,
            "minor_d" => caps.minor_d = value,
            "minor_blocks" => caps.minor_blocks = value,
            other => return Err(Error::input(format!("unknown cap `{other}`"))),
        }
    }
    Ok(caps)
}

pub const CAPS_ENV: &str = "MIXEDFREE_CAPS";

pub fn caps_from_env() -> Result<Caps> {
    match std::env::var(CAPS_ENV) {
        Ok(s) => parse_caps(&s),
        Err(_) => Ok(Caps::default()),
    }
}
