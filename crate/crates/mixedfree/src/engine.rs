//! The recursive coloring engine: partitions the instance into blobs, strips
//! mixed inter-blob connections via a degeneracy coloring of the mixed
//! compression, splits off poor vertices, organizes rich vertices into twin
//! subblobs bucketed by dyadic clique scale, resolves intra-bucket structure
//! through compressions at level d-1, and recurses on the residual classes.
//!
//! The output is always a proper coloring regardless of whether the input's
//! ordered matrix actually is d-almost-mixed-free; when the promise fails in
//! a detectable way the run is flagged, never aborted.

use crate::clique::{has_clique_with, max_clique_in_mask};
use crate::cograph::{cograph_color, is_cograph};
use crate::coloring::{chromatic_exact_capped, greedy_fallback, DEFAULT_CHROMATIC_CAP};
use crate::compress::{compress, degeneracy_coloring, CompressionKind};
use crate::error::{Error, Result};
use crate::graph::{is_proper, Coloring, OrderedGraph};
use crate::matrix::{classify_zone, Division, ZoneClass};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct EngineOpts {
    /// Override for the clique-defect parameter k (default: omega / 8).
    pub k_override: Option<usize>,
    /// Instances with at most this many vertices are colored exactly.
    pub exact_cap: usize,
    /// Cap for the exact chromatic oracle used by the base case.
    pub chromatic_cap: usize,
    /// Greedily merge compatible color classes after the run.
    pub squash: bool,
}

impl Default for EngineOpts {
    fn default() -> Self {
        EngineOpts {
            k_override: None,
            exact_cap: 16,
            chromatic_cap: DEFAULT_CHROMATIC_CAP,
            squash: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Exact,
    Cograph,
    Greedy,
    Main,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphRecord {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphRecord {
    pub fn of(g: &OrderedGraph) -> Self {
        GraphRecord {
            n: g.n(),
            edges: g.edges(),
        }
    }

    pub fn to_graph(&self) -> OrderedGraph {
        OrderedGraph::new(self.n, &self.edges).expect("trace graph record is valid")
    }
}

/// One subblob of a (blob, x, y) family: members and representative are
/// original top-level vertex labels.
#[derive(Debug, Clone, Serialize)]
pub struct SubblobTrace {
    pub members: Vec<usize>,
    pub rep: usize,
    pub z: char,
    pub u: u32,
    pub clique: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyTrace {
    pub blob_index: usize,
    pub x: u8,
    pub y: u8,
    pub subblobs: Vec<SubblobTrace>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlobBucketTrace {
    pub blob_index: usize,
    /// Representative labels of the member subblobs, in order.
    pub reps: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    pub compress_h: GraphRecord,
    pub compress_v: GraphRecord,
    pub compress_m: GraphRecord,
    pub degeneracy_m: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BucketTrace {
    pub x: u8,
    pub y: u8,
    pub z: char,
    pub u: u32,
    pub per_blob: Vec<BlobBucketTrace>,
    pub ft_classes: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassTrace {
    /// Indices into the parent node's full blobs.
    pub blob_indices: Vec<usize>,
    pub poor: Vec<usize>,
    pub families: Vec<FamilyTrace>,
    pub buckets: Vec<BucketTrace>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChildTrace {
    pub role: String,
    pub trace: EngineTrace,
}

#[derive(Debug, Clone, Serialize)]
pub struct EngineTrace {
    pub kind: NodeKind,
    pub n: usize,
    pub d: usize,
    pub omega: usize,
    pub k: usize,
    pub promise_violated: bool,
    /// Original top-level labels of this node's vertices, in instance order.
    pub vertices: Vec<usize>,
    /// Full blobs followed by the (possibly empty) rest blob; labels.
    pub blobs: Vec<Vec<usize>>,
    pub classes: Vec<ClassTrace>,
    pub children: Vec<ChildTrace>,
}

pub struct EngineRun {
    pub coloring: Coloring,
    pub trace: EngineTrace,
    pub promise_violated: bool,
}

#[derive(Debug, Clone)]
pub struct BlobDecomposition {
    /// Intervals [start, end) in instance order; the last is the rest blob
    /// and may be empty. m = intervals.len() - 1 full blobs precede it.
    pub intervals: Vec<(usize, usize)>,
}

impl BlobDecomposition {
    pub fn m(&self) -> usize {
        self.intervals.len() - 1
    }
}

/// Structured color: a path of small integers through the construction steps,
/// flattened to 0..K by first use in vertex order at the end of each node.
type Key = Vec<u32>;

pub fn color_bounded(g: &OrderedGraph, d: usize, opts: &EngineOpts) -> Result<EngineRun> {
    if d < 2 {
        return Err(Error::input("color_bounded requires d >= 2"));
    }
    if g.n() > 64 {
        return Err(Error::OracleCap {
            oracle: "engine clique oracle",
            required: g.n(),
            cap: 64,
        });
    }
    if let Some(k) = opts.k_override {
        let omega = clique_of_mask(g, full_mask(g.n()));
        if k < 1 || 4 * k >= omega {
            return Err(Error::input(format!(
                "k = {k} outside the valid range 1 <= k < omega/4 for omega = {omega}"
            )));
        }
    }
    let mut run = run_node(g, d, opts)?;
    if opts.squash {
        run.coloring = squash(g, &run.coloring);
    }
    if !is_proper(g, &run.coloring)? {
        return Err(Error::EngineBug("final coloring is not proper".into()));
    }
    Ok(run)
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn clique_of_mask(g: &OrderedGraph, mask: u64) -> usize {
    if mask == 0 {
        0
    } else {
        max_clique_in_mask(g, mask, usize::MAX)
    }
}

fn labels_of(g: &OrderedGraph, vs: impl IntoIterator<Item = usize>) -> Vec<usize> {
    vs.into_iter().map(|v| g.label(v)).collect()
}

fn run_node(g: &OrderedGraph, d: usize, opts: &EngineOpts) -> Result<EngineRun> {
    let n = g.n();
    let omega = clique_of_mask(g, full_mask(n));
    let base_trace = |kind: NodeKind, promise: bool| EngineTrace {
        kind,
        n,
        d,
        omega,
        k: 0,
        promise_violated: promise,
        vertices: labels_of(g, 0..n),
        blobs: vec![],
        classes: vec![],
        children: vec![],
    };
    if n == 0 {
        return Ok(EngineRun {
            coloring: Coloring::new(vec![]),
            trace: base_trace(NodeKind::Exact, false),
            promise_violated: false,
        });
    }
    if d == 2 {
        // a 2-almost-mixed-free ordering exists only for cographs
        return if is_cograph(g) {
            Ok(EngineRun {
                coloring: cograph_color(g)?,
                trace: base_trace(NodeKind::Cograph, false),
                promise_violated: false,
            })
        } else {
            Ok(EngineRun {
                coloring: greedy_fallback(g, None),
                trace: base_trace(NodeKind::Greedy, true),
                promise_violated: true,
            })
        };
    }
    if n <= opts.exact_cap {
        let (_, c) = chromatic_exact_capped(g, opts.exact_cap.max(opts.chromatic_cap))?;
        return Ok(EngineRun {
            coloring: c,
            trace: base_trace(NodeKind::Exact, false),
            promise_violated: false,
        });
    }
    // The main recursion runs with any admissible k (1 <= k < omega/4); the
    // default k = floor(omega/8) requires omega >= 8. An explicit override
    // that is inadmissible at this node's omega is dropped rather than
    // propagated as an error, since recursion shrinks omega below any cutoff.
    let k = match opts.k_override {
        Some(k) if k >= 1 && 4 * k < omega => Some(k),
        Some(_) => None,
        None if omega >= 8 => Some(omega / 8),
        None => None,
    };
    if let Some(k) = k {
        return main_node(g, d, omega, k, opts);
    }
    {
        return if n <= opts.chromatic_cap {
            let (_, c) = chromatic_exact_capped(g, opts.chromatic_cap)?;
            Ok(EngineRun {
                coloring: c,
                trace: base_trace(NodeKind::Exact, false),
                promise_violated: false,
            })
        } else if is_cograph(g) {
            Ok(EngineRun {
                coloring: cograph_color(g)?,
                trace: base_trace(NodeKind::Cograph, false),
                promise_violated: false,
            })
        } else {
            Ok(EngineRun {
                coloring: greedy_fallback(g, None),
                trace: base_trace(NodeKind::Greedy, false),
                promise_violated: false,
            })
        };
    }
}

fn main_node(
    g: &OrderedGraph,
    d: usize,
    omega: usize,
    k: usize,
    opts: &EngineOpts,
) -> Result<EngineRun> {
    let n = g.n();
    let blobs = form_blobs(g, omega, k)?;
    let m = blobs.m();
    let mut keys: Vec<Option<Key>> = vec![None; n];
    let mut children: Vec<ChildTrace> = Vec::new();
    let mut promise = false;

    // Step 1: color the rest blob recursively on its own palette.
    let (rest_start, rest_end) = *blobs.intervals.last().unwrap();
    if rest_end > rest_start {
        let rest_mask = interval_mask(rest_start, rest_end);
        if clique_of_mask(g, rest_mask) > omega - k {
            return Err(Error::EngineBug("rest blob exceeds omega - k".into()));
        }
        let verts: Vec<usize> = (rest_start..rest_end).collect();
        let sub = g.induced(&verts)?;
        let child = run_node(&sub, d, opts)?;
        promise |= child.promise_violated;
        for (i, &v) in verts.iter().enumerate() {
            keys[v] = Some(vec![0, child.coloring.color(i)]);
        }
        children.push(ChildTrace {
            role: "rest".into(),
            trace: child.trace,
        });
    }

    // Step 2: partition full blobs into classes with no mixed inter-blob
    // connections, via a degeneracy coloring of the mixed compression.
    let full_blobs = &blobs.intervals[..m];
    let classes = partition_blobs_by_mixed(g, full_blobs)?;
    let mut class_traces = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        let (class_keys, class_trace, class_children, p) =
            process_class(g, d, omega, k, full_blobs, class, opts)?;
        promise |= p;
        for (v, key) in class_keys {
            let mut full = vec![1, ci as u32];
            full.extend(key);
            keys[v] = Some(full);
        }
        class_traces.push(class_trace);
        for mut ct in class_children {
            ct.role = format!("class{ci}:{}", ct.role);
            children.push(ct);
        }
    }

    let coloring = flatten_keys(&keys)?;
    if !is_proper(g, &coloring)? {
        return Err(Error::EngineBug("node coloring is not proper".into()));
    }
    let trace = EngineTrace {
        kind: NodeKind::Main,
        n,
        d,
        omega,
        k,
        promise_violated: promise,
        vertices: labels_of(g, 0..n),
        blobs: blobs
            .intervals
            .iter()
            .map(|&(s, e)| labels_of(g, s..e))
            .collect(),
        classes: class_traces,
        children,
    };
    Ok(EngineRun {
        coloring,
        trace,
        promise_violated: promise,
    })
}

fn interval_mask(start: usize, end: usize) -> u64 {
    let hi = if end == 64 { u64::MAX } else { (1u64 << end) - 1 };
    let lo = (1u64 << start) - 1;
    hi & !lo
}

/// Greedy prefix decomposition into blobs: each full blob is the smallest
/// prefix of the remaining vertices whose induced clique number reaches
/// omega - k; the final rest blob is whatever remains.
pub fn form_blobs(g: &OrderedGraph, omega: usize, k: usize) -> Result<BlobDecomposition> {
    if k < 1 || 4 * k >= omega {
        return Err(Error::input("form_blobs requires 1 <= k < omega/4"));
    }
    let n = g.n();
    let target = omega - k;
    let mut intervals = Vec::new();
    let mut start = 0;
    let mut cur = 0usize;
    let mut mask = 0u64;
    for v in 0..n {
        mask |= 1u64 << v;
        // adding one vertex increases the clique number by at most one
        if cur < target && has_clique_with(g, mask, v, cur + 1) {
            cur += 1;
        }
        if cur == target {
            intervals.push((start, v + 1));
            start = v + 1;
            cur = 0;
            mask = 0;
        }
    }
    intervals.push((start, n)); // rest blob, possibly empty
    Ok(BlobDecomposition { intervals })
}

/// Classes of blob indices such that within a class no inter-blob connection
/// is mixed; the color classes of a degeneracy coloring of the mixed
/// compression along the blob division.
pub fn partition_blobs_by_mixed(
    g: &OrderedGraph,
    full_blobs: &[(usize, usize)],
) -> Result<Vec<Vec<usize>>> {
    let m = full_blobs.len();
    if m == 0 {
        return Ok(vec![]);
    }
    let verts: Vec<usize> = (full_blobs[0].0..full_blobs[m - 1].1).collect();
    let sub = g.induced(&verts)?;
    let offset = full_blobs[0].0;
    let bounds: Vec<usize> = full_blobs.iter().map(|&(_, e)| e - offset).collect();
    let div = Division::symmetric(sub.n(), bounds)?;
    let comp = compress(&sub, &div, CompressionKind::M)?;
    let (coloring, _) = degeneracy_coloring(&comp.graph);
    let num = coloring.num_colors();
    let flat = coloring.flattened();
    let mut classes = vec![Vec::new(); num];
    for b in 0..m {
        classes[flat.color(b) as usize].push(b);
    }
    // re-verify: within a class no inter-blob connection is mixed
    for class in &classes {
        for (ai, &a) in class.iter().enumerate() {
            for &b in &class[ai + 1..] {
                let za = classify_zone(g, full_blobs[a].0..full_blobs[a].1, full_blobs[b].0..full_blobs[b].1)?;
                if za.is_mixed() {
                    return Err(Error::EngineBug(format!(
                        "mixed connection between blobs {a} and {b} within a class"
                    )));
                }
            }
        }
    }
    Ok(classes)
}

/// Rich vertices of a blob: complete towards at least one other blob.
pub fn classify_rich_poor(
    g: &OrderedGraph,
    blobs: &[(usize, usize)],
) -> (Vec<usize>, Vec<usize>) {
    let mut rich = Vec::new();
    let mut poor = Vec::new();
    let masks: Vec<u64> = blobs.iter().map(|&(s, e)| interval_mask(s, e)).collect();
    for (i, &(s, e)) in blobs.iter().enumerate() {
        for v in s..e {
            let row = g.row(v)[0];
            let is_rich = masks
                .iter()
                .enumerate()
                .any(|(j, &bm)| j != i && bm != 0 && row & bm == bm);
            if is_rich {
                rich.push(v);
            } else {
                poor.push(v);
            }
        }
    }
    (rich, poor)
}

/// Maximal-prefix partition of `members` (ordered vertices of one blob
/// family) into classes of twins with respect to everything outside the blob.
pub fn form_subblobs(g: &OrderedGraph, blob: (usize, usize), members: &[usize]) -> Vec<Vec<usize>> {
    let outside = !interval_mask(blob.0, blob.1);
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut cur_mask = 0u64;
    for &v in members {
        let nb = g.row(v)[0] & outside;
        match out.last_mut() {
            Some(sb) if nb == cur_mask => sb.push(v),
            _ => {
                out.push(vec![v]);
                cur_mask = nb;
            }
        }
    }
    out
}

type ClassOutput = (
    Vec<(usize, Key)>,
    ClassTrace,
    Vec<ChildTrace>,
    bool,
);

#[allow(clippy::too_many_arguments)]
fn process_class(
    g: &OrderedGraph,
    d: usize,
    _omega: usize,
    k: usize,
    full_blobs: &[(usize, usize)],
    class: &[usize],
    opts: &EngineOpts,
) -> Result<ClassOutput> {
    // restrict to the class: the instance graph for Steps 3-6
    let verts: Vec<usize> = class
        .iter()
        .flat_map(|&b| full_blobs[b].0..full_blobs[b].1)
        .collect();
    let gc = g.induced(&verts)?;
    // blob intervals within gc (blobs stay convex under the restriction)
    let mut blobs_c: Vec<(usize, usize)> = Vec::new();
    let mut acc = 0;
    for &b in class {
        let len = full_blobs[b].1 - full_blobs[b].0;
        blobs_c.push((acc, acc + len));
        acc += len;
    }
    // no inter-blob connection may be constant 1 (would force omega >= 2(omega-k))
    for (ai, &(s1, e1)) in blobs_c.iter().enumerate() {
        for &(s2, e2) in &blobs_c[ai + 1..] {
            if classify_zone(&gc, s1..e1, s2..e2)? == ZoneClass::Constant1 {
                return Err(Error::EngineBug("constant-1 connection between full blobs".into()));
            }
        }
    }

    let mut keys: Vec<Option<Key>> = vec![None; gc.n()];
    let mut children = Vec::new();
    let mut promise = false;

    // Step 3: poor vertices, per blob, on one shared palette.
    let (_, poor) = classify_rich_poor(&gc, &blobs_c);
    let poor_set: std::collections::HashSet<usize> = poor.iter().copied().collect();
    // poor vertices of distinct blobs are never adjacent
    for (bi, &(s1, e1)) in blobs_c.iter().enumerate() {
        for &(s2, e2) in &blobs_c[bi + 1..] {
            for u in s1..e1 {
                if !poor_set.contains(&u) {
                    continue;
                }
                for w in s2..e2 {
                    if poor_set.contains(&w) && gc.adjacent(u, w) {
                        return Err(Error::EngineBug("adjacent poor vertices across blobs".into()));
                    }
                }
            }
        }
    }
    for (bi, &(s, e)) in blobs_c.iter().enumerate() {
        let zb: Vec<usize> = (s..e).filter(|v| poor_set.contains(v)).collect();
        if zb.is_empty() {
            continue;
        }
        let sub = gc.induced(&zb)?;
        let child = run_node(&sub, d, opts)?;
        promise |= child.promise_violated;
        for (i, &v) in zb.iter().enumerate() {
            keys[v] = Some(vec![0, child.coloring.color(i)]);
        }
        children.push(ChildTrace {
            role: format!("poor:blob{bi}"),
            trace: child.trace,
        });
    }

    // Step 4 prep: families (blob, x, y) of rich vertices, partitioned into
    // subblobs; bucket assignment by witness side and clique scale.
    let first = 0usize;
    let last = gc.n() - 1;
    let ell = k.ilog2();
    let mut family_traces = Vec::new();
    // bucket key -> per blob (in class order): list of (family subblob idx j, members)
    #[allow(clippy::type_complexity)]
    let mut buckets: HashMap<(u8, u8, char, u32), Vec<(usize, Vec<(usize, Vec<usize>)>)>> =
        HashMap::new();
    for (bi, &(s, e)) in blobs_c.iter().enumerate() {
        for x in 0..2u8 {
            for y in 0..2u8 {
                let members: Vec<usize> = (s..e)
                    .filter(|&v| {
                        !poor_set.contains(&v)
                            && gc.entry(v, first) == x
                            && gc.entry(v, last) == y
                    })
                    .collect();
                if members.is_empty() {
                    continue;
                }
                let subblobs = form_subblobs(&gc, (s, e), &members);
                let mut strace = Vec::new();
                for (j, sb) in subblobs.iter().enumerate() {
                    let rep = sb[0];
                    let z = if j == 0 {
                        'L'
                    } else {
                        let prev = subblobs[j - 1][0];
                        let outside = !interval_mask(s, e);
                        let diff = (gc.row(rep)[0] ^ gc.row(prev)[0]) & outside;
                        if diff == 0 {
                            return Err(Error::EngineBug(
                                "consecutive subblobs with identical outside neighborhoods".into(),
                            ));
                        }
                        let a = diff.trailing_zeros() as usize;
                        if a < s {
                            'L'
                        } else {
                            'R'
                        }
                    };
                    let sb_mask = sb.iter().fold(0u64, |m, &v| m | 1 << v);
                    let cl = clique_of_mask(&gc, sb_mask);
                    if cl > k {
                        return Err(Error::EngineBug(format!(
                            "subblob clique {cl} exceeds k = {k}"
                        )));
                    }
                    let u = (cl as u32).ilog2();
                    if u > ell {
                        return Err(Error::EngineBug("bucket scale u exceeds floor(log2 k)".into()));
                    }
                    strace.push(SubblobTrace {
                        members: labels_of(&gc, sb.iter().copied()),
                        rep: gc.label(rep),
                        z,
                        u,
                        clique: cl,
                    });
                    let entry = buckets.entry((x, y, z, u)).or_default();
                    match entry.last_mut() {
                        Some((b, list)) if *b == bi => list.push((j, sb.clone())),
                        _ => entry.push((bi, vec![(j, sb.clone())])),
                    }
                }
                family_traces.push(FamilyTrace {
                    blob_index: bi,
                    x,
                    y,
                    subblobs: strace,
                });
            }
        }
    }

    // Steps 4-6 per bucket, deterministic order.
    let mut bucket_keys: Vec<(u8, u8, char, u32)> = buckets.keys().copied().collect();
    bucket_keys.sort_unstable();
    let mut bucket_traces = Vec::new();
    for bk in bucket_keys {
        let per_blob = buckets.remove(&bk).unwrap();
        let (x, y, z, u) = bk;
        let tag = vec![
            1u32,
            x as u32,
            y as u32,
            (z == 'R') as u32,
            u,
        ];
        let (bt, p) = color_bucket(
            &gc, d, k, &blobs_c, bk, &per_blob, opts, &tag, &mut keys, &mut children,
        )?;
        promise |= p;
        bucket_traces.push(BucketTrace {
            x,
            y,
            z,
            u,
            per_blob: bt.0,
            ft_classes: bt.1,
        });
    }

    let ctrace = ClassTrace {
        blob_indices: class.to_vec(),
        poor: labels_of(&gc, poor.iter().copied()),
        families: family_traces,
        buckets: bucket_traces,
    };
    let out: Vec<(usize, Key)> = keys
        .into_iter()
        .enumerate()
        .map(|(v, key)| {
            key.map(|key| (verts[v], key)).ok_or_else(|| {
                Error::EngineBug(format!("vertex {} left uncolored in class", verts[v]))
            })
        })
        .collect::<Result<_>>()?;
    Ok((out, ctrace, children, promise))
}

type BucketOutput = ((Vec<BlobBucketTrace>, Vec<Vec<usize>>), bool);

/// Steps 4-6 for one bucket: lambda_1 via per-subblob recursion on a shared
/// palette; per-blob compressions of the subblob division (mixed handled by
/// degeneracy, horizontal/vertical by recursion at level d-1); lambda_2
/// tuples; and a fresh recursion per lambda_2 class.
#[allow(clippy::too_many_arguments)]
fn color_bucket(
    gc: &OrderedGraph,
    d: usize,
    k: usize,
    _blobs: &[(usize, usize)],
    bucket: (u8, u8, char, u32),
    per_blob: &[(usize, Vec<(usize, Vec<usize>)>)],
    opts: &EngineOpts,
    tag: &[u32],
    keys: &mut [Option<Key>],
    children: &mut Vec<ChildTrace>,
) -> Result<BucketOutput> {
    let (_, _, _, u) = bucket;
    let mut promise = false;
    // lambda_1: per-subblob recursion, shared palette
    let mut lambda1: HashMap<usize, u32> = HashMap::new();
    // per-vertex subblob tuple colors
    let mut phi_m: HashMap<usize, u32> = HashMap::new();
    let mut phi_h: HashMap<usize, u32> = HashMap::new();
    let mut phi_v: HashMap<usize, u32> = HashMap::new();
    let mut blob_traces = Vec::new();
    for (bi, sbs) in per_blob {
        // vertices of this blob's bucket members, in order; each subblob is a
        // contiguous run within them
        let mut verts: Vec<usize> = Vec::new();
        let mut bounds = Vec::new();
        for (_, sb) in sbs {
            verts.extend(sb.iter().copied());
            bounds.push(verts.len());
        }
        debug_assert!(verts.windows(2).all(|w| w[0] < w[1]));
        for (si, (_, sb)) in sbs.iter().enumerate() {
            let sub = gc.induced(sb)?;
            let child = run_node(&sub, d, opts)?;
            promise |= child.promise_violated;
            for (i, &v) in sb.iter().enumerate() {
                lambda1.insert(v, child.coloring.color(i));
            }
            children.push(ChildTrace {
                role: format!("subblob:blob{bi}:member{si}"),
                trace: child.trace,
            });
        }
        // per-blob compressions along the subblob division
        let gi = gc.induced(&verts)?;
        let div = Division::symmetric(gi.n(), bounds.clone())?;
        let ch = compress(&gi, &div, CompressionKind::H)?;
        let cv = compress(&gi, &div, CompressionKind::V)?;
        let cm = compress(&gi, &div, CompressionKind::M)?;
        let (mcol, mdeg) = degeneracy_coloring(&cm.graph);
        let hrun = run_node(&ch.graph, d - 1, opts)?;
        promise |= hrun.promise_violated;
        let vrun = run_node(&cv.graph, d - 1, opts)?;
        promise |= vrun.promise_violated;
        for (si, (_, sb)) in sbs.iter().enumerate() {
            for &v in sb {
                phi_m.insert(v, mcol.color(si));
                phi_h.insert(v, hrun.coloring.color(si));
                phi_v.insert(v, vrun.coloring.color(si));
            }
        }
        blob_traces.push(BlobBucketTrace {
            blob_index: *bi,
            reps: sbs.iter().map(|(_, sb)| gc.label(sb[0])).collect(),
            members: sbs
                .iter()
                .map(|(_, sb)| labels_of(gc, sb.iter().copied()))
                .collect(),
            compress_h: GraphRecord::of(&ch.graph),
            compress_v: GraphRecord::of(&cv.graph),
            compress_m: GraphRecord::of(&cm.graph),
            degeneracy_m: mdeg,
        });
        children.push(ChildTrace {
            role: format!("compress_h:blob{bi}"),
            trace: hrun.trace,
        });
        children.push(ChildTrace {
            role: format!("compress_v:blob{bi}"),
            trace: vrun.trace,
        });
    }
    // lambda_2 classes across blobs
    let mut classes: HashMap<(u32, u32, u32, u32), Vec<usize>> = HashMap::new();
    for (_, sbs) in per_blob {
        for (_, sb) in sbs {
            for &v in sb {
                let t = (lambda1[&v], phi_m[&v], phi_h[&v], phi_v[&v]);
                classes.entry(t).or_default().push(v);
            }
        }
    }
    let mut class_keys: Vec<(u32, u32, u32, u32)> = classes.keys().copied().collect();
    class_keys.sort_unstable();
    let mut ft_traces = Vec::new();
    for (ti, t) in class_keys.iter().enumerate() {
        let mut ft = classes.remove(t).unwrap();
        ft.sort_unstable();
        let ft_mask = ft.iter().fold(0u64, |m, &v| m | 1 << v);
        let cl = clique_of_mask(gc, ft_mask);
        if cl > 2 * (k >> u) + 1 {
            return Err(Error::EngineBug(format!(
                "lambda2 class clique {cl} exceeds 2*floor(k/2^u)+1 = {}",
                2 * (k >> u) + 1
            )));
        }
        let sub = gc.induced(&ft)?;
        let child = run_node(&sub, d, opts)?;
        promise |= child.promise_violated;
        let (l1, pm, ph, pv) = *t;
        for (i, &v) in ft.iter().enumerate() {
            let mut key = tag.to_vec();
            key.extend([l1, pm, ph, pv, child.coloring.color(i)]);
            keys[v] = Some(key);
        }
        children.push(ChildTrace {
            role: format!("ft:{ti}"),
            trace: child.trace,
        });
        ft_traces.push(labels_of(gc, ft.iter().copied()));
    }
    Ok(((blob_traces, ft_traces), promise))
}

fn flatten_keys(keys: &[Option<Key>]) -> Result<Coloring> {
    let mut map: HashMap<&Key, u32> = HashMap::new();
    let mut next = 0u32;
    let mut colors = Vec::with_capacity(keys.len());
    for key in keys {
        let key = key
            .as_ref()
            .ok_or_else(|| Error::EngineBug("uncolored vertex after all steps".into()))?;
        let c = *map.entry(key).or_insert_with(|| {
            let id = next;
            next += 1;
            id
        });
        colors.push(c);
    }
    Ok(Coloring::new(colors))
}

/// Optional post-pass: greedily merge color classes with no edges between
/// them. Excluded from bound-accounting runs.
fn squash(g: &OrderedGraph, c: &Coloring) -> Coloring {
    let k = c.num_colors();
    let flat = c.flattened();
    let mut class_masks: Vec<u64> = vec![0; k];
    for v in 0..g.n() {
        class_masks[flat.color(v) as usize] |= 1 << v;
    }
    let compatible = |a: u64, b: u64, g: &OrderedGraph| -> bool {
        let mut rest = a;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if g.row(v)[0] & b != 0 {
                return false;
            }
        }
        true
    };
    let mut merged: Vec<u64> = Vec::new();
    let mut target = vec![0u32; k];
    for (ci, &mask) in class_masks.iter().enumerate() {
        let mut placed = false;
        for (mi, mm) in merged.iter_mut().enumerate() {
            if compatible(mask, *mm, g) {
                *mm |= mask;
                target[ci] = mi as u32;
                placed = true;
                break;
            }
        }
        if !placed {
            target[ci] = merged.len() as u32;
            merged.push(mask);
        }
    }
    Coloring::new((0..g.n()).map(|v| target[flat.color(v) as usize]).collect())
}
