//! Divisions of the graphic matrix, zone classification, corner search, and
//! exhaustive (almost-)mixed-minor detection with witnesses.
//!
//! The minor search enumerates block boundaries (rows outer, columns inner)
//! and prunes a branch as soon as some required zone within already-fixed
//! boundaries is provably non-mixed. Zone mixedness is answered in O(1) from
//! a 2D prefix sum over corner positions: a contiguous submatrix is mixed iff
//! it contains a 2x2 mixed contiguous submatrix (a corner).

use crate::error::{Error, Result};
use crate::graph::OrderedGraph;
use serde::{Deserialize, Serialize};

pub const DEFAULT_MINOR_N_CAP: usize = 30;
pub const DEFAULT_MINOR_D_CAP: usize = 4;
pub const DEFAULT_MINOR_BLOCKS_CAP: usize = 20;

/// Convex row/column block partition of an n x n graphic matrix, stored as
/// cumulative block end indices (last entry = n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Division {
    row_bounds: Vec<usize>,
    col_bounds: Vec<usize>,
    symmetric: bool,
}

impl Division {
    pub fn new(n: usize, row_bounds: Vec<usize>, col_bounds: Vec<usize>) -> Result<Self> {
        validate_bounds(n, &row_bounds)?;
        validate_bounds(n, &col_bounds)?;
        let symmetric = row_bounds == col_bounds;
        Ok(Division {
            row_bounds,
            col_bounds,
            symmetric,
        })
    }

    pub fn symmetric(n: usize, bounds: Vec<usize>) -> Result<Self> {
        validate_bounds(n, &bounds)?;
        Ok(Division {
            row_bounds: bounds.clone(),
            col_bounds: bounds,
            symmetric: true,
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn s_rows(&self) -> usize {
        self.row_bounds.len()
    }

    pub fn s_cols(&self) -> usize {
        self.col_bounds.len()
    }

    pub fn row_block(&self, i: usize) -> std::ops::Range<usize> {
        let start = if i == 0 { 0 } else { self.row_bounds[i - 1] };
        start..self.row_bounds[i]
    }

    pub fn col_block(&self, j: usize) -> std::ops::Range<usize> {
        let start = if j == 0 { 0 } else { self.col_bounds[j - 1] };
        start..self.col_bounds[j]
    }

    pub fn row_bounds(&self) -> &[usize] {
        &self.row_bounds
    }

    pub fn col_bounds(&self) -> &[usize] {
        &self.col_bounds
    }

    /// Internal cut positions (block boundaries excluding the final n).
    pub fn row_cuts(&self) -> &[usize] {
        &self.row_bounds[..self.row_bounds.len() - 1]
    }

    pub fn col_cuts(&self) -> &[usize] {
        &self.col_bounds[..self.col_bounds.len() - 1]
    }
}

fn validate_bounds(n: usize, bounds: &[usize]) -> Result<()> {
    if bounds.is_empty() || *bounds.last().unwrap() != n {
        return Err(Error::input("division bounds must end at n and be nonempty"));
    }
    let mut prev = 0;
    for &b in bounds {
        if b <= prev {
            return Err(Error::input("division blocks must be nonempty and increasing"));
        }
        prev = b;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZoneClass {
    Constant0,
    Constant1,
    HorizontalNonconstant,
    VerticalNonconstant,
    Mixed,
}

impl ZoneClass {
    pub fn is_mixed(self) -> bool {
        self == ZoneClass::Mixed
    }

    pub fn is_horizontal(self) -> bool {
        matches!(
            self,
            ZoneClass::Constant0 | ZoneClass::Constant1 | ZoneClass::HorizontalNonconstant
        )
    }

    pub fn is_vertical(self) -> bool {
        matches!(
            self,
            ZoneClass::Constant0 | ZoneClass::Constant1 | ZoneClass::VerticalNonconstant
        )
    }

    pub fn is_constant(self) -> bool {
        matches!(self, ZoneClass::Constant0 | ZoneClass::Constant1)
    }
}

pub fn classify_zone(
    g: &OrderedGraph,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Result<ZoneClass> {
    if rows.is_empty() || cols.is_empty() || rows.end > g.n() || cols.end > g.n() {
        return Err(Error::input("classify_zone: empty or out-of-range interval"));
    }
    let horizontal = rows.clone().all(|r| {
        let first = g.entry(r, cols.start);
        cols.clone().all(|c| g.entry(r, c) == first)
    });
    let vertical = cols.clone().all(|c| {
        let first = g.entry(rows.start, c);
        rows.clone().all(|r| g.entry(r, c) == first)
    });
    Ok(match (horizontal, vertical) {
        (true, true) => {
            if g.entry(rows.start, cols.start) == 0 {
                ZoneClass::Constant0
            } else {
                ZoneClass::Constant1
            }
        }
        (true, false) => ZoneClass::HorizontalNonconstant,
        (false, true) => ZoneClass::VerticalNonconstant,
        (false, false) => ZoneClass::Mixed,
    })
}

/// Lexicographically smallest corner in the zone: position (r, c) such that
/// the contiguous 2x2 submatrix at rows r, r+1 and columns c, c+1 is mixed.
pub fn find_corner(
    g: &OrderedGraph,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    for r in rows.start..rows.end.saturating_sub(1) {
        for c in cols.start..cols.end.saturating_sub(1) {
            if is_corner(g, r, c) {
                return Some((r, c));
            }
        }
    }
    None
}

fn is_corner(g: &OrderedGraph, r: usize, c: usize) -> bool {
    let a = g.entry(r, c);
    let b = g.entry(r, c + 1);
    let x = g.entry(r + 1, c);
    let y = g.entry(r + 1, c + 1);
    let horizontal = a == b && x == y;
    let vertical = a == x && b == y;
    !horizontal && !vertical
}

/// O(1) zone-mixedness queries via 2D prefix sums over corner positions.
pub struct CornerGrid {
    n: usize,
    prefix: Vec<u32>, // (n+1) x (n+1)
}

impl CornerGrid {
    pub fn new(g: &OrderedGraph) -> Self {
        let n = g.n();
        let w = n + 1;
        let mut prefix = vec![0u32; w * w];
        for r in 0..n.saturating_sub(1) {
            for c in 0..n.saturating_sub(1) {
                let v = is_corner(g, r, c) as u32;
                prefix[(r + 1) * w + (c + 1)] = v;
            }
        }
        for r in 1..w {
            for c in 1..w {
                prefix[r * w + c] +=
                    prefix[(r - 1) * w + c] + prefix[r * w + c - 1] - prefix[(r - 1) * w + c - 1];
            }
        }
        CornerGrid { n, prefix }
    }

    fn count(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> u32 {
        let w = self.n + 1;
        self.prefix[r1 * w + c1] + self.prefix[r0 * w + c0]
            - self.prefix[r0 * w + c1]
            - self.prefix[r1 * w + c0]
    }

    /// Is the zone rows [r0, r1) x cols [c0, c1) mixed?
    pub fn zone_mixed(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> bool {
        if r1 - r0 < 2 || c1 - c0 < 2 {
            return false;
        }
        self.count(r0, r1 - 1, c0, c1 - 1) > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinorKind {
    Mixed,
    AlmostMixed,
}

/// A concrete d x d division certifying a (almost-)mixed minor, with one
/// corner per required-mixed zone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorWitness {
    pub kind: MinorKind,
    pub d: usize,
    pub row_bounds: Vec<usize>,
    pub col_bounds: Vec<usize>,
    /// (row block, col block, corner row, corner col), all 0-based.
    pub corners: Vec<(usize, usize, usize, usize)>,
}

impl MinorWitness {
    pub fn division(&self, n: usize) -> Result<Division> {
        Division::new(n, self.row_bounds.clone(), self.col_bounds.clone())
    }

    /// Independent re-verification: each required zone's recorded corner is
    /// genuinely a corner lying inside that zone.
    pub fn verify(&self, g: &OrderedGraph) -> Result<()> {
        let div = self.division(g.n())?;
        if div.s_rows() != self.d || div.s_cols() != self.d {
            return Err(Error::input("witness division is not a d-division"));
        }
        let mut covered = std::collections::HashSet::new();
        for &(i, j, r, c) in &self.corners {
            if i >= self.d || j >= self.d {
                return Err(Error::input("witness corner references invalid zone"));
            }
            let rb = div.row_block(i);
            let cb = div.col_block(j);
            if r < rb.start || r + 1 >= rb.end || c < cb.start || c + 1 >= cb.end {
                return Err(Error::input("witness corner outside its zone"));
            }
            if !is_corner(g, r, c) {
                return Err(Error::input("witness corner is not mixed"));
            }
            covered.insert((i, j));
        }
        for i in 0..self.d {
            for j in 0..self.d {
                let required = match self.kind {
                    MinorKind::Mixed => true,
                    MinorKind::AlmostMixed => i != j,
                };
                if required && !covered.contains(&(i, j)) {
                    return Err(Error::input(format!("required zone ({i},{j}) has no corner")));
                }
            }
        }
        Ok(())
    }

    /// Is this witness's division a coarsening of `div`?
    pub fn is_coarsening_of(&self, div: &Division) -> bool {
        let rows_ok = self.row_bounds[..self.d - 1]
            .iter()
            .all(|b| div.row_bounds().contains(b));
        let cols_ok = self.col_bounds[..self.d - 1]
            .iter()
            .all(|b| div.col_bounds().contains(b));
        rows_ok && cols_ok
    }
}

/// Exhaustive d-almost-mixed-minor search. Deterministic: reports the witness
/// with lexicographically least (row bounds, col bounds).
pub fn find_almost_mixed_minor(
    g: &OrderedGraph,
    d: usize,
    coarsening_of: Option<&Division>,
) -> Result<Option<MinorWitness>> {
    find_minor_capped(
        g,
        d,
        coarsening_of,
        MinorKind::AlmostMixed,
        DEFAULT_MINOR_N_CAP,
        DEFAULT_MINOR_D_CAP,
        DEFAULT_MINOR_BLOCKS_CAP,
    )
}

pub fn find_mixed_minor(g: &OrderedGraph, d: usize) -> Result<Option<MinorWitness>> {
    find_minor_capped(
        g,
        d,
        None,
        MinorKind::Mixed,
        DEFAULT_MINOR_N_CAP,
        DEFAULT_MINOR_D_CAP,
        DEFAULT_MINOR_BLOCKS_CAP,
    )
}

pub fn find_minor_capped(
    g: &OrderedGraph,
    d: usize,
    coarsening_of: Option<&Division>,
    kind: MinorKind,
    n_cap: usize,
    d_cap: usize,
    blocks_cap: usize,
) -> Result<Option<MinorWitness>> {
    if d < 1 {
        return Err(Error::input("minor order d must be >= 1"));
    }
    match coarsening_of {
        Some(div) => {
            if !div.is_symmetric() {
                return Err(Error::input("coarsening_of must be a symmetric division"));
            }
            if div.s_rows() > blocks_cap {
                return Err(Error::OracleCap {
                    oracle: "constrained minor search",
                    required: div.s_rows(),
                    cap: blocks_cap,
                });
            }
        }
        None => {
            if g.n() > n_cap {
                return Err(Error::OracleCap {
                    oracle: "minor search",
                    required: g.n(),
                    cap: n_cap,
                });
            }
            if d > d_cap {
                return Err(Error::OracleCap {
                    oracle: "minor search",
                    required: d,
                    cap: d_cap,
                });
            }
        }
    }
    Ok(find_minor_uncapped(g, d, coarsening_of, kind))
}

/// Internal search without cap checks; used by derived oracles that sweep d.
pub fn find_minor_uncapped(
    g: &OrderedGraph,
    d: usize,
    coarsening_of: Option<&Division>,
    kind: MinorKind,
) -> Option<MinorWitness> {
    let n = g.n();
    if d == 1 {
        // A 1-division has no off-diagonal zones: an almost mixed minor exists
        // vacuously; a mixed minor exists iff the whole matrix is mixed.
        if n == 0 {
            return None;
        }
        let whole_mixed = find_corner(g, 0..n, 0..n);
        return match kind {
            MinorKind::AlmostMixed => Some(MinorWitness {
                kind,
                d: 1,
                row_bounds: vec![n],
                col_bounds: vec![n],
                corners: vec![],
            }),
            MinorKind::Mixed => whole_mixed.map(|(r, c)| MinorWitness {
                kind,
                d: 1,
                row_bounds: vec![n],
                col_bounds: vec![n],
                corners: vec![(0, 0, r, c)],
            }),
        };
    }
    if n < 2 * d {
        return None; // every required-mixed block needs at least 2 rows and 2 cols
    }
    let grid = CornerGrid::new(g);
    let row_positions: Vec<usize> = match coarsening_of {
        Some(div) => div.row_cuts().to_vec(),
        None => (1..n).collect(),
    };
    let col_positions: Vec<usize> = match coarsening_of {
        Some(div) => div.col_cuts().to_vec(),
        None => (1..n).collect(),
    };
    let mut row_bounds = Vec::with_capacity(d);
    let mut col_bounds = Vec::with_capacity(d);
    let diagonal = kind == MinorKind::Mixed;
    if row_dfs(
        &grid,
        n,
        d,
        diagonal,
        &row_positions,
        &col_positions,
        &mut row_bounds,
        &mut col_bounds,
    ) {
        let mut corners = Vec::new();
        let div = Division::new(n, row_bounds.clone(), col_bounds.clone()).unwrap();
        for i in 0..d {
            for j in 0..d {
                if i == j && !diagonal {
                    continue;
                }
                let (r, c) = find_corner(g, div.row_block(i), div.col_block(j))
                    .expect("search certified zone must contain a corner");
                corners.push((i, j, r, c));
            }
        }
        Some(MinorWitness {
            kind,
            d,
            row_bounds,
            col_bounds,
            corners,
        })
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn row_dfs(
    grid: &CornerGrid,
    n: usize,
    d: usize,
    diagonal: bool,
    row_positions: &[usize],
    col_positions: &[usize],
    row_bounds: &mut Vec<usize>,
    col_bounds: &mut Vec<usize>,
) -> bool {
    let chosen = row_bounds.len();
    let start = if chosen == 0 { 0 } else { row_bounds[chosen - 1] };
    if chosen == d - 1 {
        // final block is start..n
        if n - start < 2 || !grid.zone_mixed(start, n, 0, n) {
            return false;
        }
        row_bounds.push(n);
        if col_dfs(grid, n, d, diagonal, row_bounds, col_positions, col_bounds) {
            return true;
        }
        row_bounds.pop();
        return false;
    }
    let remaining = d - 1 - chosen; // cuts still to place after this one
    for &cut in row_positions {
        if cut < start + 2 {
            continue;
        }
        // leave room for `remaining` further blocks of size >= 2 plus the last block
        if cut + 2 * remaining > n {
            break;
        }
        // a required zone of this block would be a subrectangle of its full strip
        if !grid.zone_mixed(start, cut, 0, n) {
            continue;
        }
        row_bounds.push(cut);
        if row_dfs(
            grid,
            n,
            d,
            diagonal,
            row_positions,
            col_positions,
            row_bounds,
            col_bounds,
        ) {
            return true;
        }
        row_bounds.pop();
    }
    false
}

fn col_dfs(
    grid: &CornerGrid,
    n: usize,
    d: usize,
    diagonal: bool,
    row_bounds: &[usize],
    col_positions: &[usize],
    col_bounds: &mut Vec<usize>,
) -> bool {
    let j = col_bounds.len();
    let start = if j == 0 { 0 } else { col_bounds[j - 1] };
    let block_row = |i: usize| -> (usize, usize) {
        let s = if i == 0 { 0 } else { row_bounds[i - 1] };
        (s, row_bounds[i])
    };
    let zone_ok = |end: usize| -> bool {
        (0..d).all(|i| {
            if i == j && !diagonal {
                return true;
            }
            let (r0, r1) = block_row(i);
            grid.zone_mixed(r0, r1, start, end)
        })
    };
    if j == d - 1 {
        if n - start < 2 || !zone_ok(n) {
            return false;
        }
        col_bounds.push(n);
        return true;
    }
    let remaining = d - 1 - j;
    for &cut in col_positions {
        if cut < start + 2 {
            continue;
        }
        if cut + 2 * remaining > n {
            break;
        }
        if !zone_ok(cut) {
            continue;
        }
        col_bounds.push(cut);
        if col_dfs(grid, n, d, diagonal, row_bounds, col_positions, col_bounds) {
            return true;
        }
        col_bounds.pop();
    }
    false
}

/// Least d such that g's matrix admits no d-almost mixed minor. Each d is
/// searched independently; if freeness were ever non-monotone in d across the
/// scan range, that is flagged as an error rather than assumed away.
pub fn min_almost_mixed_free(g: &OrderedGraph) -> Result<usize> {
    min_almost_mixed_free_capped(g, DEFAULT_MINOR_N_CAP)
}

pub fn min_almost_mixed_free_capped(g: &OrderedGraph, n_cap: usize) -> Result<usize> {
    let n = g.n();
    if n > n_cap {
        return Err(Error::OracleCap {
            oracle: "min_almost_mixed_free",
            required: n,
            cap: n_cap,
        });
    }
    let d_max = n / 2; // beyond this no block can have 2 rows and 2 cols
    let mut first_free = None;
    for d in 1..=d_max + 1 {
        let found = find_minor_uncapped(g, d, None, MinorKind::AlmostMixed).is_some();
        match (first_free, found) {
            (None, false) => first_free = Some(d),
            (Some(d0), true) => {
                return Err(Error::EngineBug(format!(
                    "non-monotone almost-mixed-freeness: free at {d0} but minor found at {d}"
                )))
            }
            _ => {}
        }
    }
    Ok(first_free.expect("d_max+1 always admits no minor"))
}

pub fn count_mixed_zones(g: &OrderedGraph, div: &Division) -> usize {
    let grid = CornerGrid::new(g);
    let mut count = 0;
    for i in 0..div.s_rows() {
        for j in 0..div.s_cols() {
            let rb = div.row_block(i);
            let cb = div.col_block(j);
            if grid.zone_mixed(rb.start, rb.end, cb.start, cb.end) {
                count += 1;
            }
        }
    }
    count
}
