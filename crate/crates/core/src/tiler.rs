//! Brute-force weighted perfect-matching counter: the ground-truth oracle
//! for every exact identity in the crate.
//!
//! The enumerator always matches the lowest-indexed uncovered cell (in
//! row-major geometric order), so each dimer cover is produced exactly once.
//! An optional transposition table keyed by the covered-cell frontier turns
//! the exponential walk into a transfer-matrix-style count; both paths are
//! exercised against each other in tests.

use crate::exact::Rational;
use crate::lattice::Region;
use num::bigint::BigUint;
use num::traits::{One, Zero};
use std::collections::HashMap;

/// Weighted count plus the number of distinct dimer covers behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingCount {
    pub value: Rational,
    pub tilings_enumerated: BigUint,
}

#[derive(Clone, Debug)]
pub struct TilerOptions {
    /// Frontier-bitmask transposition table on/off.
    pub memoize: bool,
    /// Enumeration budget in cells.
    pub max_cells: usize,
    /// Extra factor applied to every position weight (homogeneity checks).
    pub weight_scale: Rational,
}

impl Default for TilerOptions {
    fn default() -> Self {
        TilerOptions {
            memoize: true,
            max_cells: 60,
            weight_scale: Rational::one(),
        }
    }
}

impl TilerOptions {
    pub fn with_budget(max_cells: usize) -> Self {
        TilerOptions {
            max_cells,
            ..Default::default()
        }
    }

    pub fn plain_dfs(max_cells: usize) -> Self {
        TilerOptions {
            memoize: false,
            max_cells,
            ..Default::default()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TilerError {
    #[error("region has {cells} cells, over the enumeration budget of {budget}")]
    Budget { cells: usize, budget: usize },
    #[error("frontier span {span} exceeds the 128-bit window")]
    FrontierTooWide { span: usize },
}

struct Graph {
    /// neighbor index and position weight per cell, in scan order
    adj: Vec<Vec<(usize, Rational)>>,
}

fn build_graph(region: &Region, scale: &Rational) -> Graph {
    let order: Vec<_> = region.cells.iter().cloned().collect();
    let index: HashMap<_, _> = order.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let adj = order
        .iter()
        .map(|cell| {
            cell.neighbors()
                .iter()
                .filter_map(|nb| {
                    index.get(nb).map(|&k| {
                        (k, region.position_weight(*cell, *nb) * scale)
                    })
                })
                .collect()
        })
        .collect();
    Graph { adj }
}

/// Exact weighted count of dimer covers of `region`.
///
/// Unbalanced regions report zero without search. The weighted value is the
/// sum over covers of the product of position weights; `tilings_enumerated`
/// is the plain cover count.
pub fn count_weighted_tilings(
    region: &Region,
    opts: &TilerOptions,
) -> Result<TilingCount, TilerError> {
    let cells = region.cells.len();
    if cells > opts.max_cells {
        return Err(TilerError::Budget {
            cells,
            budget: opts.max_cells,
        });
    }
    if region.up_count() != region.down_count() || cells % 2 != 0 {
        return Ok(TilingCount {
            value: Rational::zero(),
            tilings_enumerated: BigUint::zero(),
        });
    }
    if cells == 0 {
        return Ok(TilingCount {
            value: Rational::one(),
            tilings_enumerated: BigUint::one(),
        });
    }
    let graph = build_graph(region, &opts.weight_scale);
    if opts.memoize {
        // widest forward reach of any edge bounds the frontier window
        let span = graph
            .adj
            .iter()
            .enumerate()
            .flat_map(|(i, ns)| ns.iter().map(move |&(j, _)| j.saturating_sub(i)))
            .max()
            .unwrap_or(0);
        if span >= 128 {
            return Err(TilerError::FrontierTooWide { span });
        }
        let mut memo = HashMap::new();
        let (value, tilings) = count_memo(&graph, 0, 0u128, &mut memo);
        Ok(TilingCount {
            value,
            tilings_enumerated: tilings,
        })
    } else {
        let mut covered = vec![false; cells];
        let (value, tilings) = count_dfs(&graph, 0, &mut covered);
        Ok(TilingCount {
            value,
            tilings_enumerated: tilings,
        })
    }
}

fn count_dfs(g: &Graph, first: usize, covered: &mut [bool]) -> (Rational, BigUint) {
    let mut f = first;
    while f < covered.len() && covered[f] {
        f += 1;
    }
    if f == covered.len() {
        return (Rational::one(), BigUint::one());
    }
    let mut value = Rational::zero();
    let mut tilings = BigUint::zero();
    covered[f] = true;
    for (nb, w) in &g.adj[f] {
        if covered[*nb] {
            continue;
        }
        covered[*nb] = true;
        let (v, t) = count_dfs(g, f + 1, covered);
        covered[*nb] = false;
        if !t.is_zero() {
            value += w * v;
            tilings += t;
        }
    }
    covered[f] = false;
    (value, tilings)
}

/// `mask` holds covered flags for cells `f..f+128`; everything below `f` is
/// covered by construction.
fn count_memo(
    g: &Graph,
    f: usize,
    mask: u128,
    memo: &mut HashMap<(usize, u128), (Rational, BigUint)>,
) -> (Rational, BigUint) {
    let n = g.adj.len();
    let mut f = f;
    let mut mask = mask;
    while f < n && (mask & 1) == 1 {
        f += 1;
        mask >>= 1;
    }
    if f == n {
        return (Rational::one(), BigUint::one());
    }
    if let Some(hit) = memo.get(&(f, mask)) {
        return hit.clone();
    }
    let mut value = Rational::zero();
    let mut tilings = BigUint::zero();
    for (nb, w) in &g.adj[f] {
        if *nb <= f {
            continue; // already covered
        }
        let bit = 1u128 << (*nb - f);
        if mask & bit != 0 {
            continue;
        }
        let (v, t) = count_memo(g, f + 1, (mask | bit) >> 1, memo);
        if !t.is_zero() {
            value += w * v;
            tilings += t;
        }
    }
    memo.insert((f, mask), (value.clone(), tilings.clone()));
    (value, tilings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_i64};
    use crate::lattice::{build_region, down, up, DimerPos, Region, RegionSpec};

    /// Hand-made region for small oracle cases.
    fn ad_hoc(cells: Vec<crate::lattice::TriCell>, half: Vec<DimerPos>) -> Region {
        Region {
            meta: RegionSpec {
                n: 1,
                removals: vec![],
            },
            cells: cells.into_iter().collect(),
            half_weight: half.into_iter().collect(),
        }
    }

    #[test]
    fn single_rhombus() {
        let r = ad_hoc(vec![up(0, 0), down(0, 0)], vec![]);
        let c = count_weighted_tilings(&r, &TilerOptions::default()).unwrap();
        assert_eq!(c.value, rat_i64(1));
        assert_eq!(c.tilings_enumerated, 1u32.into());
    }

    #[test]
    fn single_rhombus_half_weight() {
        let pos = DimerPos::new(up(0, 0), down(0, 0));
        let r = ad_hoc(vec![up(0, 0), down(0, 0)], vec![pos]);
        let c = count_weighted_tilings(&r, &TilerOptions::default()).unwrap();
        assert_eq!(c.value, rat(1, 2));
    }

    #[test]
    fn unbalanced_region_counts_zero() {
        let r = ad_hoc(vec![up(0, 0), down(0, 0), up(1, 0)], vec![]);
        let c = count_weighted_tilings(&r, &TilerOptions::default()).unwrap();
        assert_eq!(c.value, Rational::zero());
    }

    #[test]
    fn empty_region_counts_one() {
        let r = ad_hoc(vec![], vec![]);
        let c = count_weighted_tilings(&r, &TilerOptions::default()).unwrap();
        assert_eq!(c.value, rat_i64(1));
    }

    #[test]
    fn budget_enforced() {
        let r = build_region(&RegionSpec::plain(2)).unwrap();
        let err = count_weighted_tilings(&r, &TilerOptions::with_budget(10)).unwrap_err();
        assert!(matches!(err, TilerError::Budget { cells: 60, budget: 10 }));
    }

    #[test]
    fn p1_both_paths_agree_and_are_positive() {
        let r = build_region(&RegionSpec::plain(1)).unwrap();
        let memo = count_weighted_tilings(&r, &TilerOptions::default()).unwrap();
        let dfs = count_weighted_tilings(&r, &TilerOptions::plain_dfs(60)).unwrap();
        assert_eq!(memo, dfs);
        assert!(memo.value > Rational::zero(), "P_1 is tileable: {}", memo.value);
    }

    #[test]
    fn p2_memo_matches_dfs() {
        let r = build_region(&RegionSpec::plain(2)).unwrap();
        let memo = count_weighted_tilings(&r, &TilerOptions::default()).unwrap();
        let dfs = count_weighted_tilings(&r, &TilerOptions::plain_dfs(60)).unwrap();
        assert_eq!(memo, dfs);
        assert!(memo.value > Rational::zero());
    }

    #[test]
    fn weight_doubling_homogeneity() {
        // scaling every position weight by 2 multiplies the count by
        // 2^(cells/2)
        let r = build_region(&RegionSpec::plain(1)).unwrap();
        let base = count_weighted_tilings(&r, &TilerOptions::default()).unwrap();
        let doubled = count_weighted_tilings(
            &r,
            &TilerOptions {
                weight_scale: rat_i64(2),
                ..Default::default()
            },
        )
        .unwrap();
        let factor = crate::exact::pow2(r.cells.len() as i64 / 2);
        assert_eq!(doubled.value, base.value * factor);
        assert_eq!(doubled.tilings_enumerated, base.tilings_enumerated);
    }

    #[test]
    fn punctured_p2_positive() {
        let r = build_region(&RegionSpec::with_quadromers(2, 1, 0, 1, 0)).unwrap();
        let c = count_weighted_tilings(&r, &TilerOptions::default()).unwrap();
        assert!(c.value > Rational::zero());
        let dfs = count_weighted_tilings(&r, &TilerOptions::plain_dfs(60)).unwrap();
        assert_eq!(c, dfs);
    }
}
