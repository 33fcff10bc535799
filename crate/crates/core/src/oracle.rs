//! Exhaustive searches used as ground truth for the structural algorithms.
//! Everything here works straight from the distance table and never
//! consults a representing tree.

use std::collections::BTreeSet;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::Space;

pub const ISOMETRY_CAP: usize = 8;
pub const WEAKSIM_CAP: usize = 7;
pub const HAM_PATH_CAP: usize = 8;

fn check_cap(space: &Space, cap: usize) -> Result<()> {
    if space.len() > cap {
        return Err(Error::OverCap {
            got: space.len(),
            cap,
        });
    }
    Ok(())
}

/// Calls `visit` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn preserves(x: &Space, y: &Space, map: &[usize], f: impl Fn(Dist) -> Dist) -> bool {
    (0..x.len()).all(|i| ((i + 1)..x.len()).all(|j| f(x.d(i, j)) == y.d(map[i], map[j])))
}

/// Every self-isometry as a point map, in lexicographic order.
pub fn oracle_isometries(space: &Space, cap: usize) -> Result<Vec<Vec<usize>>> {
    check_cap(space, cap)?;
    let mut out = Vec::new();
    for_each_permutation(space.len(), |p| {
        if preserves(space, space, p, |d| d) {
            out.push(p.to_vec());
        }
    });
    out.sort();
    Ok(out)
}

/// Minimum number of fixed points over all self-isometries.
pub fn oracle_min_fix(space: &Space, cap: usize) -> Result<usize> {
    Ok(oracle_isometries(space, cap)?
        .iter()
        .map(|g| (0..g.len()).filter(|&i| g[i] == i).count())
        .min()
        .expect("the identity is always an isometry"))
}

/// Weak similarity of two arbitrary finite metric spaces by trying every
/// bijection. The spectrum map is forced to be the sorted alignment.
pub fn oracle_weaksim(x: &Space, y: &Space, cap: usize) -> Result<bool> {
    check_cap(x, cap)?;
    check_cap(y, cap)?;
    let (sx, sy) = (x.spectrum(), y.spectrum());
    if x.len() != y.len() || sx.len() != sy.len() {
        return Ok(false);
    }
    let f = |v: Dist| sy[sx.binary_search(&v).expect("spectrum value")];
    let mut found = false;
    for_each_permutation(x.len(), |p| {
        if !found && preserves(x, y, p, f) {
            found = true;
        }
    });
    Ok(found)
}

/// All orderings of the points, kept when `strictly_decreasing` is false or
/// their consecutive weights strictly decrease.
pub fn oracle_ham_paths(space: &Space, cap: usize, strictly_decreasing: bool) -> Result<Vec<Vec<usize>>> {
    check_cap(space, cap)?;
    let mut out = Vec::new();
    for_each_permutation(space.len(), |p| {
        let ok = !strictly_decreasing
            || p.windows(3).all(|w| space.d(w[0], w[1]) > space.d(w[1], w[2]));
        if ok {
            out.push(p.to_vec());
        }
    });
    out.sort();
    Ok(out)
}

/// Centers of spanning stars whose rays have pairwise distinct weights.
pub fn oracle_distinct_star_centers(space: &Space) -> Vec<usize> {
    (0..space.len())
        .filter(|&c| {
            let weights: BTreeSet<Dist> = (0..space.len())
                .filter(|&y| y != c)
                .map(|y| space.d(c, y))
                .collect();
            weights.len() == space.len() - 1
        })
        .collect()
}

/// Every ultrametric on `{center} ∪ rays` agreeing with the star, where each
/// ray-to-ray distance is drawn from `candidates`. Points are ordered as the
/// center followed by the rays.
pub fn oracle_star_completions(weights: &[Dist], candidates: &[Dist]) -> Vec<Vec<Vec<Dist>>> {
    let fixed: Vec<(usize, usize, Dist)> = weights
        .iter()
        .enumerate()
        .map(|(k, &w)| (0, k + 1, w))
        .collect();
    oracle_ultrametric_completions(weights.len() + 1, &fixed, candidates)
}

/// Every ultrametric table on `n` points that takes the `fixed` values and
/// draws all other off-diagonal entries from `candidates`. Backtracking over
/// the free pairs, pruned by the strong triangle inequality on fully
/// assigned triples.
pub fn oracle_ultrametric_completions(
    n: usize,
    fixed: &[(usize, usize, Dist)],
    candidates: &[Dist],
) -> Vec<Vec<Vec<Dist>>> {
    let mut table = vec![vec![None; n]; n];
    for i in 0..n {
        table[i][i] = Some(Dist::ZERO);
    }
    for &(i, j, w) in fixed {
        table[i][j] = Some(w);
        table[j][i] = Some(w);
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .filter(|&(i, j)| table[i][j].is_none())
        .collect();
    let mut out = Vec::new();
    let consistent = (0..n).all(|i| ((i + 1)..n).all(|j| strong_ok(&table, i, j)));
    if consistent {
        search(&mut table, &pairs, 0, candidates, &mut out);
    }
    out
}

fn strong_ok(t: &[Vec<Option<Dist>>], a: usize, b: usize) -> bool {
    (0..t.len()).all(|c| {
        if c == a || c == b {
            return true;
        }
        let (Some(ab), Some(ac), Some(bc)) = (t[a][b], t[a][c], t[b][c]) else {
            return true;
        };
        ab <= ac.max(bc) && ac <= ab.max(bc) && bc <= ab.max(ac)
    })
}

fn search(
    t: &mut Vec<Vec<Option<Dist>>>,
    pairs: &[(usize, usize)],
    k: usize,
    candidates: &[Dist],
    out: &mut Vec<Vec<Vec<Dist>>>,
) {
    let Some(&(i, j)) = pairs.get(k) else {
        out.push(t.iter().map(|row| row.iter().map(|v| v.unwrap()).collect()).collect());
        return;
    };
    for &v in candidates {
        if v.is_zero() {
            continue;
        }
        t[i][j] = Some(v);
        t[j][i] = Some(v);
        if strong_ok(t, i, j) {
            search(t, pairs, k + 1, candidates, out);
        }
    }
    t[i][j] = None;
    t[j][i] = None;
}

/// Candidate ray-to-ray distances for completion searches: the weights,
/// their halves, midpoints between consecutive weights, and one value above
/// the largest.
pub fn completion_candidates(weights: &[Dist]) -> Vec<Dist> {
    let mut sorted: Vec<Dist> = weights.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut c: BTreeSet<Dist> = sorted.iter().copied().collect();
    c.extend(sorted.iter().map(Dist::half));
    for w in sorted.windows(2) {
        c.insert(w[0].checked_add(&w[1]).expect("small weights").half());
    }
    if let Some(top) = sorted.last() {
        c.insert(top.checked_add(&Dist::from_int(1)).expect("small weights"));
    }
    c.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn permutation_count() {
        let mut seen = BTreeSet::new();
        for_each_permutation(5, |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 120);
        let mut count = 0;
        for_each_permutation(0, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn isometry_examples() {
        assert_eq!(oracle_isometries(&r4(), 8).unwrap(), vec![vec![0, 1, 2, 3], vec![0, 1, 3, 2]]);
        assert_eq!(oracle_isometries(&e3(), 8).unwrap().len(), 6);
        assert_eq!(oracle_isometries(&f3(), 8).unwrap().len(), 4);
        assert_eq!(oracle_min_fix(&f3(), 8).unwrap(), 0);
        assert!(matches!(
            oracle_isometries(&equilateral(9, Dist::from_int(1)), 8),
            Err(Error::OverCap { got: 9, cap: 8 })
        ));
    }

    #[test]
    fn ham_path_examples() {
        assert!(oracle_ham_paths(&f3(), 8, true).unwrap().is_empty());
        assert_eq!(oracle_ham_paths(&r4(), 8, true).unwrap(), vec![vec![0, 1, 2, 3], vec![0, 1, 3, 2]]);
        assert_eq!(oracle_ham_paths(&e3(), 8, false).unwrap().len(), 6);
    }

    #[test]
    fn weaksim_on_metrics() {
        assert!(oracle_weaksim(&nu3(), &nu3().scaled(Dist::from_int(3)).unwrap(), 7).unwrap());
        assert!(!oracle_weaksim(&nu3(), &e3(), 7).unwrap());
        assert!(oracle_weaksim(&e3(), &equilateral(3, Dist::from_int(7)), 7).unwrap());
    }

    #[test]
    fn star_centers() {
        assert_eq!(oracle_distinct_star_centers(&r4()), vec![2, 3]);
        assert!(oracle_distinct_star_centers(&f3()).is_empty());
    }

    #[test]
    fn completions_of_small_stars() {
        let d = Dist::from_int;
        let w = [d(1), d(2), d(3)];
        assert_eq!(oracle_star_completions(&w, &completion_candidates(&w)).len(), 1);
        let tied = [d(1), d(1)];
        // any value in (0, 1] works for the tied pair
        let found = oracle_star_completions(&tied, &completion_candidates(&tied));
        assert_eq!(found.len(), 2);
    }
}
