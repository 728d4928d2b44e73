//! Lindstrom-Gessel-Viennot machinery: dimer covers as non-intersecting
//! lattice-path families, exact path-count matrices, determinants and
//! two-row Laplace expansions.
//!
//! For a chosen lattice-line direction `d`, the "points" of the path lattice
//! are the triangular-lattice edges parallel to `d` and the "edges" are the
//! two rhombus shapes with a pair of sides parallel to `d`. In the axial
//! frame of [`crate::lattice`]:
//!
//! * `d` = southwest-northeast: points are NE edges `s(i,j) = {(i,j),(i,j+1)}`
//!   separating `down(i-1,j)` (west) from `up(i,j)` (east); steps run east
//!   `s(i,j) -> s(i+1,j)` through the rhombus `{up(i,j), down(i,j)}` and
//!   southeast `s(i,j) -> s(i+1,j-1)` through `{up(i,j), down(i,j-1)}`.
//! * `d` = southeast-northwest: points are NW edges `t(i,j) = {(i+1,j),(i,j+1)}`
//!   separating `up(i,j)` (southwest) from `down(i,j)` (northeast); steps run
//!   east `t(i,j) -> t(i+1,j)` through `{down(i,j), up(i+1,j)}` and northeast
//!   `t(i,j) -> t(i,j+1)` through `{down(i,j), up(i,j+1)}`.
//!
//! Paths start where the forward cell of a segment is in the region but the
//! backward cell is not, and end at the opposite situation; a step exists
//! exactly when both cells of its rhombus are present, and carries that dimer
//! position's weight. Every dimer cover induces one non-intersecting family,
//! and the permutation signs are constant over the region family treated
//! here, so the weighted cover count is |det| of the path-count matrix.

use crate::exact::{binomial, factorial, rat, Rational};
use crate::lattice::{down, up, Region};
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use std::collections::HashMap;

/// Path-encoding direction `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `d` along southwest-northeast; paths move east / southeast.
    SwNe,
    /// `d` along southeast-northwest; paths move east / northeast.
    SeNw,
}

/// A point of the path lattice: `s(i,j)` or `t(i,j)` depending on direction.
pub type SegId = (i32, i32);

/// Directed weighted grid with ordered terminals, ready for matrix assembly.
#[derive(Clone, Debug)]
pub struct PathProblem {
    pub direction: Direction,
    pub starts: Vec<SegId>,
    pub ends: Vec<SegId>,
    /// allowed steps with their dimer-position weights
    pub steps: HashMap<(SegId, SegId), Rational>,
}

impl PathProblem {
    /// Unobstructed all-weight-1 grid over the given segment ranges, for
    /// oracle tests and the closed-form cross-checks.
    pub fn free(direction: Direction, i_range: (i32, i32), j_range: (i32, i32)) -> Self {
        let mut steps = HashMap::new();
        for i in i_range.0..=i_range.1 {
            for j in j_range.0..=j_range.1 {
                match direction {
                    Direction::SwNe => {
                        steps.insert(((i, j), (i + 1, j)), Rational::one());
                        steps.insert(((i, j), (i + 1, j - 1)), Rational::one());
                    }
                    Direction::SeNw => {
                        steps.insert(((i, j), (i + 1, j)), Rational::one());
                        steps.insert(((i, j), (i, j + 1)), Rational::one());
                    }
                }
            }
        }
        PathProblem {
            direction,
            starts: vec![],
            ends: vec![],
            steps,
        }
    }

    fn out_steps(&self, p: SegId) -> [(SegId, Option<&Rational>); 2] {
        let (i, j) = p;
        let (q1, q2) = match self.direction {
            Direction::SwNe => ((i + 1, j), (i + 1, j - 1)),
            Direction::SeNw => ((i + 1, j), (i, j + 1)),
        };
        [
            (q1, self.steps.get(&(p, q1))),
            (q2, self.steps.get(&(p, q2))),
        ]
    }
}

/// Encodes a region's dimer covers as a path problem under `direction`.
pub fn encode_path_problem(region: &Region, direction: Direction) -> PathProblem {
    let mut starts = Vec::new();
    let mut ends = Vec::new();
    let mut steps = HashMap::new();
    match direction {
        Direction::SwNe => {
            for cell in &region.cells {
                let (i, j) = (cell.col, cell.row);
                if cell.is_up() {
                    // segment s(i,j): west cell down(i-1,j)
                    if !region.contains(&down(i - 1, j)) {
                        starts.push((i, j));
                    }
                    if region.contains(&down(i, j)) {
                        let w = region.position_weight(*cell, down(i, j));
                        steps.insert(((i, j), (i + 1, j)), w);
                    }
                    if region.contains(&down(i, j - 1)) {
                        let w = region.position_weight(*cell, down(i, j - 1));
                        steps.insert(((i, j), (i + 1, j - 1)), w);
                    }
                } else {
                    // segment s(i+1,j): east cell up(i+1,j)
                    if !region.contains(&up(i + 1, j)) {
                        ends.push((i + 1, j));
                    }
                }
            }
        }
        Direction::SeNw => {
            for cell in &region.cells {
                let (i, j) = (cell.col, cell.row);
                if cell.is_up() {
                    // segment t(i,j): opposite cell down(i,j)
                    if !region.contains(&down(i, j)) {
                        ends.push((i, j));
                    }
                } else {
                    if !region.contains(&up(i, j)) {
                        starts.push((i, j));
                    }
                    if region.contains(&up(i + 1, j)) {
                        let w = region.position_weight(*cell, up(i + 1, j));
                        steps.insert(((i, j), (i + 1, j)), w);
                    }
                    if region.contains(&up(i, j + 1)) {
                        let w = region.position_weight(*cell, up(i, j + 1));
                        steps.insert(((i, j), (i, j + 1)), w);
                    }
                }
            }
        }
    }
    starts.sort_unstable();
    ends.sort_unstable();
    PathProblem {
        direction,
        starts,
        ends,
        steps,
    }
}

/// Weighted count of lattice paths from `p` to `q` (0 when unreachable).
pub fn count_paths_between(problem: &PathProblem, p: SegId, q: SegId) -> Rational {
    let mut memo = HashMap::new();
    count_rec(problem, p, q, &mut memo)
}

fn count_rec(
    problem: &PathProblem,
    p: SegId,
    q: SegId,
    memo: &mut HashMap<SegId, Rational>,
) -> Rational {
    if p == q {
        return Rational::one();
    }
    // both step kinds are monotone: prune once past the target
    let past = match problem.direction {
        Direction::SwNe => p.0 > q.0 || p.1 < q.1,
        Direction::SeNw => p.0 > q.0 || p.1 > q.1,
    };
    if past {
        return Rational::zero();
    }
    if let Some(v) = memo.get(&p) {
        return v.clone();
    }
    let mut acc = Rational::zero();
    for (next, w) in problem.out_steps(p) {
        if let Some(w) = w {
            let sub = count_rec(problem, next, q, memo);
            if !sub.is_zero() {
                acc += w * sub;
            }
        }
    }
    memo.insert(p, acc.clone());
    acc
}

/// Dense square matrix of exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    pub dim: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        RationalMatrix { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| {
            if r == c {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.dim + c]
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.dim {
            self.entries.swap(a * self.dim + c, b * self.dim + c);
        }
    }

    /// Submatrix by explicit row/column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RationalMatrix {
        RationalMatrix::from_fn(rows.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }
}

/// Exact determinant by fraction-free Bareiss elimination over big integers
/// (denominators cleared row by row first).
pub fn det_exact(m: &RationalMatrix) -> Rational {
    let n = m.dim;
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for r in 0..n {
        let mut row_lcm = BigInt::one();
        for c in 0..n {
            row_lcm = num::integer::lcm(row_lcm, m.get(r, c).denom().clone());
        }
        a.push(
            (0..n)
                .map(|c| {
                    let e = m.get(r, c);
                    e.numer() * (&row_lcm / e.denom())
                })
                .collect(),
        );
        scale *= row_lcm;
    }
    let det_int = bareiss(&mut a);
    Rational::new(det_int, scale)
}

fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact by the Bareiss identity
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LgvError {
    #[error("laplace expansion needs two distinct in-range rows, got {0} and {1}")]
    BadRows(usize, usize),
}

/// One term of a two-row Laplace expansion.
#[derive(Clone, Debug)]
pub struct LaplaceTerm {
    pub cols: (usize, usize),
    pub sign: i32,
    pub minor2: Rational,
    pub complement: Rational,
}

/// Two-row Laplace expansion of `det m` along `rows`; the signed terms sum
/// to the determinant exactly.
pub fn laplace_expand(
    m: &RationalMatrix,
    rows: (usize, usize),
) -> Result<Vec<LaplaceTerm>, LgvError> {
    let (r1, r2) = if rows.0 < rows.1 {
        (rows.0, rows.1)
    } else {
        (rows.1, rows.0)
    };
    if r1 == r2 || r2 >= m.dim || m.dim < 2 {
        return Err(LgvError::BadRows(rows.0, rows.1));
    }
    let other_rows: Vec<usize> = (0..m.dim).filter(|&r| r != r1 && r != r2).collect();
    let mut terms = Vec::new();
    for c1 in 0..m.dim {
        for c2 in c1 + 1..m.dim {
            let minor2 = m.get(r1, c1) * m.get(r2, c2) - m.get(r1, c2) * m.get(r2, c1);
            let other_cols: Vec<usize> =
                (0..m.dim).filter(|&c| c != c1 && c != c2).collect();
            let complement = det_exact(&m.submatrix(&other_rows, &other_cols));
            let sign = if (r1 + r2 + c1 + c2) % 2 == 0 { 1 } else { -1 };
            terms.push(LaplaceTerm {
                cols: (c1, c2),
                sign,
                minor2,
                complement,
            });
        }
    }
    Ok(terms)
}

/// Assembles the LGV matrix of `region` under `direction`.
pub fn lgv_matrix(region: &Region, direction: Direction) -> (PathProblem, RationalMatrix) {
    let problem = encode_path_problem(region, direction);
    assert_eq!(
        problem.starts.len(),
        problem.ends.len(),
        "unbalanced terminals: {} starts vs {} ends",
        problem.starts.len(),
        problem.ends.len()
    );
    let dim = problem.starts.len();
    let mut matrix = RationalMatrix::from_fn(dim, |_, _| Rational::zero());
    for (r, &s) in problem.starts.iter().enumerate() {
        // one forward sweep per start
        for (c, &e) in problem.ends.iter().enumerate() {
            matrix.entries[r * dim + c] = count_paths_between(&problem, s, e);
        }
        let _ = r;
    }
    (problem, matrix)
}

/// Weighted dimer-cover count of `region` as |det| of its LGV matrix;
/// equals the brute-force count exactly.
pub fn lgv_tiling_count(region: &Region, direction: Direction) -> Rational {
    let problem = encode_path_problem(region, direction);
    if problem.starts.len() != problem.ends.len() {
        // a cover would biject starts with ends, so none exists
        return Rational::zero();
    }
    let (_, matrix) = lgv_matrix(region, direction);
    det_exact(&matrix).abs()
}

/// Side selector for the closed-form two-by-two boundary determinants.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BumpSide {
    /// rows started on the removed down-quadromer, columns on `L_d`
    DSide,
    /// rows started on the removed up-quadromer, columns on `L_u`
    USide,
}

/// Closed form of the 2x2 minor pairing the removed quadromer's segments
/// with boundary segments `i < j`.
///
/// `DSide` is the all-weight-1 binomial determinant
/// `2R (j-i) (R+i-1)! (R+j-1)! / ((2i)! (R-i)! (2j)! (R-j)!)`; `USide`
/// carries the half-weighted steps and an extra `(R-1/2)(R+1/2)` factor with
/// `(2i+1)! (2j+1)!` in the denominator.
pub fn bump_pair_det(kind: BumpSide, i: i64, j: i64, r: i64) -> Result<Rational, String> {
    if i < 0 || j < 0 || i > r || j > r || r < 1 {
        return Err(format!("indices (i,j)=({i},{j}) outside 0..={r}"));
    }
    let base = Rational::from_integer(
        BigInt::from(2 * r)
            * (BigInt::from(j) - BigInt::from(i))
            * factorial((r + i - 1) as u64)
            * factorial((r + j - 1) as u64),
    );
    Ok(match kind {
        BumpSide::DSide => {
            let den = factorial(2 * i as u64)
                * factorial((r - i) as u64)
                * factorial(2 * j as u64)
                * factorial((r - j) as u64);
            base / Rational::from_integer(den)
        }
        BumpSide::USide => {
            let den = factorial((2 * i + 1) as u64)
                * factorial((r - i) as u64)
                * factorial((2 * j + 1) as u64)
                * factorial((r - j) as u64);
            let halves = (rat(2 * r - 1, 2)) * (rat(2 * r + 1, 2));
            base * halves / Rational::from_integer(den)
        }
    })
}
