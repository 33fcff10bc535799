use ultrametric::characterize::{
    complete_star, distinct_weight_spanning_star, hamiltonian_decreasing_path,
};
use ultrametric::fixtures::{e3, f3, nu3, r4};
use ultrametric::generate::{generate, GenKind};
use ultrametric::oracle::*;
use ultrametric::rigidity::{in_r, isometry_group, min_fixed_points};
use ultrametric::tree::isometric;
use ultrametric::weaksim::weakly_similar;
use ultrametric::{Dist, Space};

fn corpus(max_n: usize, per_size: u64) -> Vec<Space> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for seed in 0..per_size {
            out.push(generate(GenKind::RandomTree, n, seed * 31 + n as u64).unwrap());
            if seed % 3 == 0 {
                out.push(generate(GenKind::ChainR, n, seed).unwrap());
            }
        }
    }
    out
}

#[test]
fn isometry_group_matches_brute_force() {
    for space in corpus(ISOMETRY_CAP, 12) {
        let group = isometry_group(&space).unwrap();
        let mut listed: Vec<Vec<usize>> = group
            .full_list
            .expect("small groups are listed")
            .iter()
            .map(|g| g.as_slice().to_vec())
            .collect();
        listed.sort();
        assert_eq!(listed, oracle_isometries(&space, ISOMETRY_CAP).unwrap(), "{space:?}");
        assert_eq!(
            min_fixed_points(&space).unwrap().0,
            oracle_min_fix(&space, ISOMETRY_CAP).unwrap()
        );
    }
}

#[test]
fn isometric_matches_brute_force() {
    let spaces = corpus(6, 6);
    for (i, x) in spaces.iter().enumerate() {
        for y in spaces.iter().skip(i).take(8) {
            let mut found = false;
            if x.len() == y.len() {
                for_each_permutation(x.len(), |p| {
                    found |= (0..x.len())
                        .all(|a| (0..x.len()).all(|b| x.d(a, b) == y.d(p[a], p[b])));
                });
            }
            let map = isometric(x, y).unwrap();
            assert_eq!(map.is_some(), found);
            if let Some(map) = map {
                assert!((0..x.len()).all(|a| (0..x.len()).all(|b| x.d(a, b) == y.d(map[a], map[b]))));
            }
        }
    }
}

#[test]
fn weak_similarity_matches_brute_force() {
    let spaces = corpus(WEAKSIM_CAP, 6);
    for (i, x) in spaces.iter().enumerate() {
        for y in spaces.iter().skip(i).take(6) {
            let expected = oracle_weaksim(x, y, WEAKSIM_CAP).unwrap();
            assert_eq!(weakly_similar(x, y).unwrap().is_some(), expected, "{x:?} {y:?}");
        }
    }
}

#[test]
fn weak_similarity_is_an_equivalence() {
    let spaces: Vec<Space> = (0..24).map(|s| generate(GenKind::RandomTree, 4, s).unwrap()).collect();
    let ws = |a: &Space, b: &Space| weakly_similar(a, b).unwrap().is_some();
    for x in &spaces {
        assert!(ws(x, x));
        for y in &spaces {
            assert_eq!(ws(x, y), ws(y, x));
            for z in &spaces {
                if ws(x, y) && ws(y, z) {
                    assert!(ws(x, z));
                }
            }
        }
    }
}

#[test]
fn decreasing_paths_match_brute_force() {
    for space in corpus(HAM_PATH_CAP, 8) {
        let paths = oracle_ham_paths(&space, HAM_PATH_CAP, true).unwrap();
        let found = hamiltonian_decreasing_path(&space).unwrap();
        assert_eq!(found.is_some(), !paths.is_empty());
        if let Some(p) = found {
            assert!(paths.contains(&p.points));
        }
        let centers = oracle_distinct_star_centers(&space);
        let star = distinct_weight_spanning_star(&space).unwrap();
        assert_eq!(star.is_some(), !centers.is_empty());
        if let Some(s) = star {
            assert!(centers.contains(&s.center));
        }
    }
}

#[test]
fn fixtures_against_oracles() {
    assert_eq!(oracle_isometries(&r4(), 8).unwrap().len(), 2);
    assert_eq!(oracle_isometries(&e3(), 8).unwrap().len(), 6);
    assert!(oracle_ham_paths(&f3(), 8, true).unwrap().is_empty());
    assert!(!oracle_weaksim(&nu3(), &e3(), 7).unwrap());
}

/// Whether the values of `d` along `path` force every other distance among
/// ultrametrics with values drawn from the completion candidates.
fn path_determines(space: &Space, path: &[usize]) -> bool {
    let fixed: Vec<(usize, usize, Dist)> = path
        .windows(2)
        .map(|w| (w[0], w[1], space.d(w[0], w[1])))
        .collect();
    let weights: Vec<Dist> = space.spectrum().into_iter().filter(|d| !d.is_zero()).collect();
    let completions =
        oracle_ultrametric_completions(space.len(), &fixed, &completion_candidates(&weights));
    completions.len() == 1 && completions[0] == space.rows()
}

#[test]
fn f3_is_spectrum_maximal_and_path_determined_but_not_rigid() {
    let f3 = f3();
    assert_eq!(f3.spectrum().len(), f3.len());
    assert!(!in_r(&f3).unwrap());
    let all = oracle_ham_paths(&f3, 8, false).unwrap();
    let determining: Vec<&Vec<usize>> = all.iter().filter(|p| path_determines(&f3, p)).collect();
    assert!(!determining.is_empty());
    // a, b, d, c: weights 1, 4, 2
    assert!(determining.contains(&&vec![0, 1, 3, 2]));
    assert!(oracle_ham_paths(&f3, 8, true).unwrap().is_empty());
}

#[test]
fn star_completion_matches_brute_force() {
    let d = Dist::from_int;
    let cases: [&[u64]; 4] = [&[1, 2, 3], &[4, 1, 3, 2], &[2, 2, 5], &[1, 1, 1]];
    for weights in cases {
        let w: Vec<Dist> = weights.iter().map(|&v| d(v)).collect();
        let rays: Vec<(String, Dist)> =
            w.iter().enumerate().map(|(i, &x)| (format!("y{i}"), x)).collect();
        let c = complete_star("c", &rays).unwrap();
        let all = oracle_star_completions(&w, &completion_candidates(&w));
        assert!(all.contains(&c.space.rows()));
        assert_eq!(c.unique, all.len() == 1);
        if let Some(alt) = c.second_completion {
            assert!(all.contains(&alt.rows()));
        }
    }
}
