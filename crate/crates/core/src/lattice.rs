//! Triangular-lattice regions: the zig-zag-bounded family P_n, its punctured
//! variants, and cell-level queries.
//!
//! # Coordinates
//!
//! Lattice vertices carry axial coordinates `(i, j)` with Cartesian position
//! `(i + j/2, j*sqrt(3)/2)`; horizontal lattice lines are `j = const`. The two
//! unit triangles of "row" `j` (between lines `j` and `j+1`) at diagonal
//! column `i` are
//!
//! * up:   vertices `(i,j) (i+1,j) (i,j+1)`
//! * down: vertices `(i,j+1) (i+1,j+1) (i+1,j)`
//!
//! Every up cell has exactly the three down neighbours `(i,j)`, `(i-1,j)`,
//! `(i,j-1)` and vice versa.
//!
//! # The region P_n
//!
//! With the anchor vertex `O` pinned at `(0,0)`, the eastern boundary is the
//! zig-zag `L_u` rising from `O` (steps NE,NW repeated `n` times), the unit
//! segment down to `O' = (0,-1)`, and the zig-zag `L_d` falling from `O'`
//! (steps SE,SW repeated `n` times). The rest of the boundary runs `n` west,
//! `2n` north-west, `2n+1` north-east and `n` east, closing at the top of
//! `L_u`. The `n` dimer positions hugging the bumps of `L_u` carry weight
//! 1/2; all other positions carry weight 1.
//!
//! Bumps on each zig-zag are labeled `0..n-1` starting nearest `O`. The
//! translation from the parameters of a removed quadromer `D(R,v)` / `U(R,v)`
//! (base centered `R` units left of the vertical line through `O`, on the
//! horizontal line crossing `L_d` `2v+1` units below `O'` resp. `L_u` `2v`
//! units above `O`) to concrete cells is a pure function of `(R, v)`; see
//! [`Quadromer::down_type`] and [`Quadromer::up_type`].

use crate::exact::{rat, Rational};
use num::traits::One;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Orient {
    Up,
    Down,
}

impl fmt::Display for Orient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orient::Up => "up",
            Orient::Down => "down",
        })
    }
}

/// One unit triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TriCell {
    pub row: i32,
    pub col: i32,
    pub orient: Orient,
}

pub fn up(col: i32, row: i32) -> TriCell {
    TriCell {
        row,
        col,
        orient: Orient::Up,
    }
}

pub fn down(col: i32, row: i32) -> TriCell {
    TriCell {
        row,
        col,
        orient: Orient::Down,
    }
}

impl TriCell {
    pub fn is_up(&self) -> bool {
        self.orient == Orient::Up
    }

    /// The three adjacent cells (always of opposite orientation).
    pub fn neighbors(&self) -> [TriCell; 3] {
        let (i, j) = (self.col, self.row);
        match self.orient {
            Orient::Up => [down(i, j), down(i - 1, j), down(i, j - 1)],
            Orient::Down => [up(i, j), up(i + 1, j), up(i, j + 1)],
        }
    }

    pub fn is_adjacent(&self, other: &TriCell) -> bool {
        self.neighbors().contains(other)
    }

    /// Vertices in axial coordinates.
    pub fn vertices(&self) -> [(i32, i32); 3] {
        let (i, j) = (self.col, self.row);
        match self.orient {
            Orient::Up => [(i, j), (i + 1, j), (i, j + 1)],
            Orient::Down => [(i, j + 1), (i + 1, j + 1), (i + 1, j)],
        }
    }

    /// Tripled centroid in the doubled-x integer frame (never on a lattice
    /// line, so point-in-polygon tests are exact).
    fn centroid3(&self) -> (i64, i64) {
        let (i, j) = (self.col as i64, self.row as i64);
        match self.orient {
            Orient::Up => (6 * i + 3 * j + 3, 3 * j + 1),
            Orient::Down => (6 * i + 3 * j + 6, 3 * j + 2),
        }
    }

    /// Geometric left-to-right position inside a row.
    fn row_key(&self) -> (i32, i64) {
        let x2 = 2 * self.col as i64 + if self.is_up() { 0 } else { 1 };
        (self.row, x2)
    }
}

impl Ord for TriCell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.row_key().cmp(&other.row_key())
    }
}

impl PartialOrd for TriCell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// An unordered adjacent pair of cells; a place a dimer may sit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DimerPos {
    pub cell_a: TriCell,
    pub cell_b: TriCell,
}

impl DimerPos {
    pub fn new(a: TriCell, b: TriCell) -> Self {
        assert!(a.is_adjacent(&b), "dimer cells must be adjacent");
        if a <= b {
            DimerPos {
                cell_a: a,
                cell_b: b,
            }
        } else {
            DimerPos {
                cell_a: b,
                cell_b: a,
            }
        }
    }
}

/// A side-two lattice triangle: a central cell plus its three neighbours.
#[derive(Clone, Debug)]
pub struct Quadromer {
    pub apex_cell: TriCell,
    pub orient: Orient,
    pub cells: [TriCell; 4],
}

impl Quadromer {
    fn from_apex(apex: TriCell) -> Self {
        let n = apex.neighbors();
        Quadromer {
            apex_cell: apex,
            // the big triangle points opposite to its central cell
            orient: if apex.is_up() {
                Orient::Down
            } else {
                Orient::Up
            },
            cells: [apex, n[0], n[1], n[2]],
        }
    }

    /// `D(R, v)`: down-pointing, base centered `R` left of the line through
    /// `O`, on the lattice line `2v+1` units below `O'`.
    pub fn down_type(r: i32, v: i32) -> Self {
        Self::from_apex(up(v + 1 - r, -2 * v - 3))
    }

    /// `U(R, v)`: up-pointing, base centered `R` left of the line through
    /// `O`, on the lattice line `2v` units above `O`.
    pub fn up_type(r: i32, v: i32) -> Self {
        Self::from_apex(down(-r - v - 1, 2 * v))
    }
}

/// One removal applied to P_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Removal {
    /// The down-pointing quadromer D(R, v).
    DownQuadromer { r: i32, v: i32 },
    /// The up-pointing quadromer U(R, v).
    UpQuadromer { r: i32, v: i32 },
    /// Bump `k` of L_d: the three in-region cells of its quadromer.
    LdBump { k: i32 },
    /// Bump `l` of L_u: the three in-region cells of its quadromer.
    LuBump { l: i32 },
    /// The single boundary monomer holding L_d segment `k` (bump index).
    LdMonomer { k: i32 },
    /// The single boundary monomer holding L_u segment `l` (bump index).
    LuMonomer { l: i32 },
}

/// Construction descriptor: `P_n` plus an ordered list of removals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionSpec {
    pub n: i32,
    pub removals: Vec<Removal>,
}

impl RegionSpec {
    pub fn plain(n: i32) -> Self {
        RegionSpec {
            n,
            removals: vec![],
        }
    }

    /// `P_n(R1, v1; R2, v2)`.
    pub fn with_quadromers(n: i32, r1: i32, v1: i32, r2: i32, v2: i32) -> Self {
        RegionSpec {
            n,
            removals: vec![
                Removal::DownQuadromer { r: r1, v: v1 },
                Removal::UpQuadromer { r: r2, v: v2 },
            ],
        }
    }

    /// `P_n[k1, k2; l1, l2]`.
    pub fn with_bumps(n: i32, k1: i32, k2: i32, l1: i32, l2: i32) -> Self {
        RegionSpec {
            n,
            removals: vec![
                Removal::LdBump { k: k1 },
                Removal::LdBump { k: k2 },
                Removal::LuBump { l: l1 },
                Removal::LuBump { l: l2 },
            ],
        }
    }

    /// `P_n^{[a,b]}(R2, v2)` under L_d labels anchored at `v1`.
    pub fn with_ld_monomers(n: i32, v1: i32, a: i32, b: i32, r2: i32, v2: i32) -> Self {
        RegionSpec {
            n,
            removals: vec![
                Removal::LdMonomer { k: v1 + a },
                Removal::LdMonomer { k: v1 + b },
                Removal::UpQuadromer { r: r2, v: v2 },
            ],
        }
    }

    /// `P_n^{[a,b][c,d]}` under labels anchored at `v1` resp. `v2`.
    pub fn with_monomer_quad(n: i32, v1: i32, a: i32, b: i32, v2: i32, c: i32, d: i32) -> Self {
        RegionSpec {
            n,
            removals: vec![
                Removal::LdMonomer { k: v1 + a },
                Removal::LdMonomer { k: v1 + b },
                Removal::LuMonomer { l: v2 + c },
                Removal::LuMonomer { l: v2 + d },
            ],
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("removal cell {0:?} lies outside the current region")]
    OutsideRegion(TriCell),
    #[error("removal cell {0:?} overlaps an earlier removal")]
    Overlap(TriCell),
}

/// An immutable lattice region with weighted dimer positions.
#[derive(Clone, Debug)]
pub struct Region {
    pub meta: RegionSpec,
    pub cells: BTreeSet<TriCell>,
    pub half_weight: BTreeSet<DimerPos>,
}

impl Region {
    pub fn contains(&self, c: &TriCell) -> bool {
        self.cells.contains(c)
    }

    /// Weight of the dimer position on cells `(a, b)`: 1/2 for the marked
    /// positions near L_u, 1 otherwise.
    pub fn position_weight(&self, a: TriCell, b: TriCell) -> Rational {
        if self.half_weight.contains(&DimerPos::new(a, b)) {
            rat(1, 2)
        } else {
            Rational::one()
        }
    }

    pub fn up_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_up()).count()
    }

    pub fn down_count(&self) -> usize {
        self.cells.len() - self.up_count()
    }
}

/// Cells removed by one removal spec, with range validation against `n`.
fn removal_cells(n: i32, removal: Removal) -> Result<Vec<TriCell>, LatticeError> {
    match removal {
        Removal::DownQuadromer { r, v } => {
            if r < 1 || v < 0 {
                return Err(LatticeError::OutOfRange(format!(
                    "D(R,v) needs R >= 1 and v >= 0, got R={r}, v={v}"
                )));
            }
            Ok(Quadromer::down_type(r, v).cells.to_vec())
        }
        Removal::UpQuadromer { r, v } => {
            if r < 1 || v < 0 {
                return Err(LatticeError::OutOfRange(format!(
                    "U(R,v) needs R >= 1 and v >= 0, got R={r}, v={v}"
                )));
            }
            Ok(Quadromer::up_type(r, v).cells.to_vec())
        }
        Removal::LdBump { k } => {
            check_bump(n, k)?;
            Ok(vec![
                up(k, -2 - 2 * k),
                down(k - 1, -2 - 2 * k),
                down(k, -3 - 2 * k),
            ])
        }
        Removal::LuBump { l } => {
            check_bump(n, l)?;
            Ok(vec![
                down(-l - 1, 2 * l),
                up(-l - 1, 2 * l),
                up(-l - 1, 2 * l + 1),
            ])
        }
        Removal::LdMonomer { k } => {
            check_bump(n, k)?;
            Ok(vec![down(k, -3 - 2 * k)])
        }
        Removal::LuMonomer { l } => {
            check_bump(n, l)?;
            Ok(vec![up(-l - 1, 2 * l + 1)])
        }
    }
}

fn check_bump(n: i32, k: i32) -> Result<(), LatticeError> {
    if k < 0 || k > n - 1 {
        Err(LatticeError::OutOfRange(format!(
            "bump index {k} outside 0..={}",
            n - 1
        )))
    } else {
        Ok(())
    }
}

/// Boundary vertex cycle of plain P_n, counterclockwise, in axial coords.
fn boundary_cycle(n: i32) -> Vec<(i32, i32)> {
    let mut path = Vec::new();
    // O' down L_d to the bottom of the zig-zag
    path.push((0, -1));
    for k in 0..n {
        path.push((k + 1, -2 - 2 * k)); // SE
        path.push((k + 1, -3 - 2 * k)); // SW
    }
    // n west
    for s in 1..=n {
        path.push((n - s, -1 - 2 * n));
    }
    // 2n northwest
    for s in 1..=(2 * n) {
        path.push((-s, -1 - 2 * n + s));
    }
    // 2n+1 northeast
    for s in 1..=(2 * n + 1) {
        path.push((-2 * n, -1 + s));
    }
    // n east
    for s in 1..=n {
        path.push((-2 * n + s, 2 * n));
    }
    // L_u back down to O
    for k in (0..n).rev() {
        path.push((-k - 1, 2 * k + 2));
        path.push((-k, 2 * k + 1));
    }
    path.push((0, 0));
    path
}

/// Exact point-in-polygon (crossing number). Polygon vertices and the query
/// point are in the tripled doubled-x frame; the query never hits an edge.
fn point_in_polygon(poly: &[(i64, i64)], p: (i64, i64)) -> bool {
    let (px, py) = p;
    let mut inside = false;
    for w in 0..poly.len() {
        let (x1, y1) = poly[w];
        let (x2, y2) = poly[(w + 1) % poly.len()];
        if (y1 > py) != (y2 > py) {
            // compare px against x1 + (py - y1)(x2 - x1)/(y2 - y1) exactly
            let lhs = (py - y1) * (x2 - x1);
            let rhs = (px - x1) * (y2 - y1);
            let crosses = if y2 > y1 { lhs > rhs } else { lhs < rhs };
            if crosses {
                inside = !inside;
            }
        }
    }
    inside
}

/// Signed polygon area in the doubled-x axial frame. For lattice polygons it
/// equals the number of unit triangles enclosed.
fn polygon_triangle_area(cycle: &[(i32, i32)]) -> i64 {
    let mut twice = 0i64;
    for w in 0..cycle.len() {
        let (i1, j1) = cycle[w];
        let (i2, j2) = cycle[(w + 1) % cycle.len()];
        let (x1, y1) = ((2 * i1 + j1) as i64, j1 as i64);
        let (x2, y2) = ((2 * i2 + j2) as i64, j2 as i64);
        twice += x1 * y2 - x2 * y1;
    }
    twice.abs() / 2
}

/// Builds the region described by `spec`.
///
/// Deterministic and idempotent in the descriptor; removals must stay inside
/// the current region and must not overlap one another.
pub fn build_region(spec: &RegionSpec) -> Result<Region, LatticeError> {
    if spec.n < 1 {
        return Err(LatticeError::OutOfRange(format!(
            "n must be >= 1, got {}",
            spec.n
        )));
    }
    let n = spec.n;
    let cycle = boundary_cycle(n);
    let poly: Vec<(i64, i64)> = cycle
        .iter()
        .map(|&(i, j)| (3 * (2 * i + j) as i64, 3 * j as i64))
        .collect();

    let mut cells = BTreeSet::new();
    for j in (-1 - 2 * n)..(2 * n) {
        for i in (-2 * n - 1)..=(n + 1) {
            for cell in [up(i, j), down(i, j)] {
                if point_in_polygon(&poly, cell.centroid3()) {
                    cells.insert(cell);
                }
            }
        }
    }
    debug_assert_eq!(
        cells.len() as i64,
        polygon_triangle_area(&cycle),
        "cell fill disagrees with the boundary-trace area"
    );

    let mut half_weight = BTreeSet::new();
    for k in 0..n {
        let pos = DimerPos::new(down(-k - 1, 2 * k), up(-k - 1, 2 * k + 1));
        debug_assert!(cells.contains(&pos.cell_a) && cells.contains(&pos.cell_b));
        half_weight.insert(pos);
    }

    let mut removed: BTreeSet<TriCell> = BTreeSet::new();
    for &removal in &spec.removals {
        for cell in removal_cells(n, removal)? {
            if removed.contains(&cell) {
                return Err(LatticeError::Overlap(cell));
            }
            if !cells.remove(&cell) {
                return Err(LatticeError::OutsideRegion(cell));
            }
            removed.insert(cell);
        }
    }
    half_weight.retain(|p| cells.contains(&p.cell_a) && cells.contains(&p.cell_b));

    Ok(Region {
        meta: spec.clone(),
        cells,
        half_weight,
    })
}

/// Uniform summary counts plus the boundary trace.
#[derive(Debug)]
pub struct RegionStats {
    pub up_count: usize,
    pub down_count: usize,
    pub half_weight_count: usize,
    /// Closed cycles of boundary edges (outer boundary first, then holes),
    /// each a list of directed vertex pairs with the region on the left.
    pub boundary_trace: Vec<Vec<((i32, i32), (i32, i32))>>,
}

pub fn region_stats(region: &Region) -> RegionStats {
    RegionStats {
        up_count: region.up_count(),
        down_count: region.down_count(),
        half_weight_count: region.half_weight.len(),
        boundary_trace: trace_boundaries(region),
    }
}

/// Tripled doubled-x frame of a vertex.
fn vframe3(v: (i32, i32)) -> (i64, i64) {
    (3 * (2 * v.0 + v.1) as i64, 3 * v.1 as i64)
}

fn trace_boundaries(region: &Region) -> Vec<Vec<((i32, i32), (i32, i32))>> {
    // A cell edge not shared with another region cell is a boundary edge;
    // orient it so the owning cell lies on its left.
    let mut directed: BTreeSet<((i32, i32), (i32, i32))> = BTreeSet::new();
    for cell in &region.cells {
        let vs = cell.vertices();
        let others = cell.neighbors();
        for e in 0..3 {
            let a = vs[e];
            let b = vs[(e + 1) % 3];
            let shared = others.iter().any(|nb| {
                region.contains(nb) && {
                    let nvs = nb.vertices();
                    nvs.contains(&a) && nvs.contains(&b)
                }
            });
            if shared {
                continue;
            }
            let (ax, ay) = vframe3(a);
            let (bx, by) = vframe3(b);
            let (cx, cy) = cell.centroid3();
            let cross = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay);
            if cross > 0 {
                directed.insert((a, b));
            } else {
                directed.insert((b, a));
            }
        }
    }
    let mut out: BTreeMap<(i32, i32), Vec<(i32, i32)>> = BTreeMap::new();
    for &(a, b) in &directed {
        out.entry(a).or_default().push(b);
    }
    let mut cycles = Vec::new();
    let mut unused: BTreeSet<_> = directed.clone();
    while let Some(&start) = unused.iter().next() {
        let mut cycle = Vec::new();
        let mut edge = start;
        loop {
            unused.remove(&edge);
            cycle.push(edge);
            let head = edge.1;
            let candidates: Vec<(i32, i32)> = out[&head]
                .iter()
                .copied()
                .filter(|&b| unused.contains(&(head, b)))
                .collect();
            if candidates.is_empty() {
                break;
            }
            // at a pinch vertex take the sharpest left turn so the interior
            // stays on the left
            let din = delta(vframe3(edge.0), vframe3(head));
            let mut best = candidates[0];
            let mut best_key = turn_key(din, delta(vframe3(head), vframe3(candidates[0])));
            for &c in &candidates[1..] {
                let key = turn_key(din, delta(vframe3(head), vframe3(c)));
                if key < best_key {
                    best = c;
                    best_key = key;
                }
            }
            edge = (head, best);
        }
        cycles.push(cycle);
    }
    // outer cycle first: it is the longest
    cycles.sort_by_key(|c| std::cmp::Reverse(c.len()));
    cycles
}

fn delta(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (b.0 - a.0, b.1 - a.1)
}

/// Orders candidate out-directions counterclockwise from the reversed
/// incoming direction (sharpest left turn sorts first).
fn turn_key(din: (i64, i64), dout: (i64, i64)) -> (i32, i64) {
    let back = (-din.0, -din.1);
    let cross = back.0 * dout.1 - back.1 * dout.0;
    let dot = back.0 * dout.0 + back.1 * dout.1;
    let class = if cross > 0 {
        0 // left of the reversed direction: smallest ccw angle from back
    } else if cross == 0 && dot > 0 {
        3 // u-turn, avoid
    } else if cross == 0 {
        2 // straight ahead
    } else {
        1 // right side
    };
    // within a side class, larger dot = smaller angle from back
    (class, if class == 0 { dot } else { -dot })
}

/// Serializable dump document used by `dump-region` and golden-file tests.
#[derive(Serialize)]
pub struct RegionDump {
    pub n: i32,
    pub removals: Vec<Removal>,
    pub cells: Vec<(i32, i32, String)>,
    pub half_weight_positions: Vec<[(i32, i32, String); 2]>,
}

pub fn region_to_dump(region: &Region) -> RegionDump {
    let cell_tuple = |c: &TriCell| (c.row, c.col, c.orient.to_string());
    RegionDump {
        n: region.meta.n,
        removals: region.meta.removals.clone(),
        cells: region.cells.iter().map(cell_tuple).collect(),
        half_weight_positions: region
            .half_weight
            .iter()
            .map(|p| [cell_tuple(&p.cell_a), cell_tuple(&p.cell_b)])
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_is_symmetric_and_three_fold() {
        let c = up(3, -2);
        for nb in c.neighbors() {
            assert!(nb.is_adjacent(&c));
            assert_ne!(nb.orient, c.orient);
        }
        let c = down(-4, 5);
        for nb in c.neighbors() {
            assert!(nb.is_adjacent(&c));
        }
    }

    #[test]
    fn p1_shape() {
        let r = build_region(&RegionSpec::plain(1)).unwrap();
        assert_eq!(r.up_count(), r.down_count());
        assert_eq!(
            r.half_weight.len(),
            1,
            "P_1 has exactly one half-weight position"
        );
        let stats = region_stats(&r);
        assert_eq!(stats.boundary_trace.len(), 1);
        assert_eq!(
            stats.boundary_trace[0].len(),
            12,
            "perimeter of P_1 is 10n+2"
        );
        let first = stats.boundary_trace[0].first().unwrap().0;
        let last = stats.boundary_trace[0].last().unwrap().1;
        assert_eq!(first, last, "trace closes");
    }

    #[test]
    fn pn_balance_and_area() {
        for n in 1..=4 {
            let r = build_region(&RegionSpec::plain(n)).unwrap();
            assert_eq!(r.up_count(), r.down_count(), "P_{n} balanced");
            assert_eq!(r.half_weight.len(), n as usize);
            let trace = region_stats(&r).boundary_trace;
            assert_eq!(trace[0].len(), (10 * n + 2) as usize);
        }
    }

    #[test]
    fn empty_removals_is_plain_pn() {
        let a = build_region(&RegionSpec::plain(3)).unwrap();
        let b = build_region(&RegionSpec {
            n: 3,
            removals: vec![],
        })
        .unwrap();
        assert_eq!(a.cells, b.cells);
        assert_eq!(a.half_weight, b.half_weight);
    }

    #[test]
    fn figure_1_2_region() {
        // P_4(3,0;2,1): quadromers D(3,0) and U(2,1)
        let spec = RegionSpec::with_quadromers(4, 3, 0, 2, 1);
        let r = build_region(&spec).unwrap();
        let plain = build_region(&RegionSpec::plain(4)).unwrap();
        assert_eq!(r.cells.len() + 8, plain.cells.len());
        assert_eq!(r.up_count(), r.down_count(), "4 up + 4 down removed");
        // D(3,0) concrete cells
        let d = Quadromer::down_type(3, 0);
        assert_eq!(d.apex_cell, up(-2, -3));
        for c in [down(-3, -3), down(-2, -3), down(-2, -4)] {
            assert!(d.cells.contains(&c));
            assert!(!r.contains(&c));
        }
        // U(2,1) concrete cells
        let u = Quadromer::up_type(2, 1);
        assert_eq!(u.apex_cell, down(-4, 2));
        for c in [up(-4, 2), up(-3, 2), up(-4, 3)] {
            assert!(u.cells.contains(&c));
            assert!(!r.contains(&c));
        }
    }

    #[test]
    fn quadromer_census() {
        for (q, ups, downs) in [
            (Quadromer::down_type(2, 1), 1, 3),
            (Quadromer::up_type(3, 0), 3, 1),
        ] {
            let set: BTreeSet<_> = q.cells.iter().cloned().collect();
            assert_eq!(set.len(), 4, "cells distinct");
            let u = q.cells.iter().filter(|c| c.is_up()).count();
            assert_eq!((u, 4 - u), (ups, downs));
            for nb in q.apex_cell.neighbors() {
                assert!(set.contains(&nb));
            }
        }
    }

    #[test]
    fn bump_removal_removes_three_interior_cells() {
        let plain = build_region(&RegionSpec::plain(4)).unwrap();
        for k in 0..4 {
            for removal in [Removal::LdBump { k }, Removal::LuBump { l: k }] {
                let cells = removal_cells(4, removal).unwrap();
                assert_eq!(cells.len(), 3);
                for c in &cells {
                    assert!(plain.contains(c), "bump cell {c:?} inside P_4");
                }
            }
        }
        // figure-level check: P_4[0,2;1,2]
        let r = build_region(&RegionSpec::with_bumps(4, 0, 2, 1, 2)).unwrap();
        assert_eq!(r.cells.len() + 12, plain.cells.len());
        assert_eq!(r.up_count(), r.down_count());
        // removing a bump of L_u destroys that half-weight position
        assert_eq!(r.half_weight.len(), 2);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_region(&RegionSpec::plain(0)).is_err());
        // bump index out of range
        assert!(build_region(&RegionSpec {
            n: 2,
            removals: vec![Removal::LdBump { k: 2 }],
        })
        .is_err());
        // quadromer spills over the western boundary of a small region
        let too_big = RegionSpec::with_quadromers(2, 4, 0, 1, 0);
        assert!(matches!(
            build_region(&too_big),
            Err(LatticeError::OutsideRegion(_))
        ));
        // overlapping removals
        let overlap = RegionSpec {
            n: 3,
            removals: vec![Removal::LdBump { k: 0 }, Removal::LdMonomer { k: 0 }],
        };
        assert!(matches!(
            build_region(&overlap),
            Err(LatticeError::Overlap(_))
        ));
        // R = 0 rejected before geometry
        assert!(matches!(
            build_region(&RegionSpec::with_quadromers(3, 0, 0, 1, 0)),
            Err(LatticeError::OutOfRange(_))
        ));
    }

    #[test]
    fn build_is_deterministic() {
        let spec = RegionSpec::with_quadromers(4, 3, 0, 2, 1);
        let a = build_region(&spec).unwrap();
        let b = build_region(&spec).unwrap();
        assert_eq!(a.cells, b.cells);
        assert_eq!(a.half_weight, b.half_weight);
        assert_eq!(a.meta, b.meta);
    }

    #[test]
    fn monomer_vs_bump_difference_is_forced_dimers() {
        // P_n^{[a,b][c,d]} and P_n[v1+a, v1+b; v2+c, v2+d] differ by four
        // weight-1 dimers (two per zig-zag side)
        let n = 4;
        let (v1, a, b, v2, c, d) = (1, 0, 1, 0, 0, 2);
        let mono =
            build_region(&RegionSpec::with_monomer_quad(n, v1, a, b, v2, c, d)).unwrap();
        let bump =
            build_region(&RegionSpec::with_bumps(n, v1 + a, v1 + b, v2 + c, v2 + d)).unwrap();
        let diff: Vec<_> = mono.cells.difference(&bump.cells).cloned().collect();
        assert_eq!(diff.len(), 8);
        let mut paired = 0;
        for x in &diff {
            for y in &diff {
                if x < y && x.is_adjacent(y) {
                    paired += 1;
                    // none of these forced dimers is a half-weight position
                    assert!(!mono.half_weight.contains(&DimerPos::new(*x, *y)));
                }
            }
        }
        assert_eq!(paired, 4);
    }
}
