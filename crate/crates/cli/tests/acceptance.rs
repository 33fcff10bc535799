//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use ultrametric::balls::gamma_is_tree;
use ultrametric::characterize::{
    balls_are_stars, complete_star, cycle_max_twice, distinct_weight_spanning_star,
    hamiltonian_decreasing_path, star_determination_check,
};
use ultrametric::fixtures::{f3, nu3, r4};
use ultrametric::generate::{generate, GenKind};
use ultrametric::oracle::{
    completion_candidates, oracle_isometries, oracle_min_fix, oracle_star_completions,
    ISOMETRY_CAP,
};
use ultrametric::rigidity::{
    in_r, is_max_rigid, isometry_group, min_fixed_points, spectrum_maximality,
};
use ultrametric::tree::random_tree;
use ultrametric::weaksim::{r_class_size_criterion, weakly_similar};
use ultrametric::{Dist, Kind, ReprTree, Space, TreeShape};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ultra(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ultra"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.code() == Some(0), || {
        format!("ultra {args:?} exited with {:?}", out.status.code())
    })?;
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Inner node counts per depth, leaf counts per depth, and whether every
/// inner node has exactly two children.
fn tree_levels(node: &Value) -> (Vec<usize>, Vec<usize>, bool) {
    fn go(v: &Value, depth: usize, inner: &mut Vec<usize>, leaves: &mut Vec<usize>, binary: &mut bool) {
        for counts in [&mut *inner, &mut *leaves] {
            if counts.len() <= depth {
                counts.resize(depth + 1, 0);
            }
        }
        match v.get("children").and_then(Value::as_array) {
            Some(children) => {
                inner[depth] += 1;
                *binary &= children.len() == 2;
                for c in children {
                    go(c, depth + 1, inner, leaves, binary);
                }
            }
            None => leaves[depth] += 1,
        }
    }
    let (mut inner, mut leaves, mut binary) = (Vec::new(), Vec::new(), true);
    go(node, 0, &mut inner, &mut leaves, &mut binary);
    (inner, leaves, binary)
}

fn criterion_1() -> Outcome {
    let path = fixture("R4.json");
    let report = ultra(&["--json", "tree", path.to_str().unwrap()])?;
    let (inner, leaves, binary) = tree_levels(&report["tree"]);
    check(binary, || "tree is not strictly binary".into())?;
    check(inner == [1, 1, 1, 0], || format!("inner nodes per level {inner:?}"))?;
    check(leaves.iter().sum::<usize>() == 4, || format!("leaves per level {leaves:?}"))?;
    check(leaves.last() == Some(&2), || format!("leaves per level {leaves:?}"))?;
    Ok(format!("inner per level {inner:?}, leaves per level {leaves:?}"))
}

fn criterion_2() -> Outcome {
    let s = r4();
    let report = is_max_rigid(&s).map_err(e)?;
    check(report.iso_order == 2, || format!("|Iso| = {}", report.iso_order))?;
    check(report.min_fix == 2, || format!("min fix = {}", report.min_fix))?;
    check(
        report.in_r
            && report.min_fix_criterion.holds
            && report.order_criterion.holds
            && report.shape_criterion.holds,
        || format!("{report:?}"),
    )?;
    let brute = oracle_isometries(&s, ISOMETRY_CAP).map_err(e)?;
    let mut listed: Vec<Vec<usize>> = isometry_group(&s)
        .map_err(e)?
        .full_list
        .unwrap()
        .iter()
        .map(|g| g.as_slice().to_vec())
        .collect();
    listed.sort();
    check(listed == brute, || format!("group {listed:?}, oracle {brute:?}"))?;
    check(brute == [vec![0, 1, 2, 3], vec![0, 1, 3, 2]], || format!("oracle {brute:?}"))?;
    let cli = ultra(&["--json", "check-r", fixture("R4.json").to_str().unwrap()])?;
    check(cli["in_r"] == true, || format!("check-r says {}", cli["in_r"]))?;
    Ok("|Iso|=2, min fix=2, three criteria agree, oracle checked 24 permutations".into())
}

fn criterion_3() -> Outcome {
    let s = f3();
    let gh = s.gomory_hu_check().map_err(e)?;
    check(gh.holds && gh.spectrum_size == 4 && gh.points == 4, || format!("{gh:?}"))?;
    check(!in_r(&s).map_err(e)?, || "F3 reported in R".into())?;
    let report = is_max_rigid(&s).map_err(e)?;
    check(report.iso_order == 4, || format!("|Iso| = {}", report.iso_order))?;
    check(report.min_fix == 0, || format!("min fix = {}", report.min_fix))?;
    let brute = oracle_isometries(&s, ISOMETRY_CAP).map_err(e)?;
    check(brute.len() == 4, || format!("oracle found {}", brute.len()))?;
    check(oracle_min_fix(&s, ISOMETRY_CAP).map_err(e)? == 0, || "oracle min fix".into())?;
    Ok("|Sp|=|X|=4, not in R, |Iso|=4, min fix=0".into())
}

fn criterion_4() -> Outcome {
    let s = nu3();
    let stats = gamma_is_tree(&s).map_err(e)?;
    check(stats.vertices == 6 && stats.edges == 6 && !stats.is_tree, || format!("{stats:?}"))?;
    check(s.kind() == Kind::Metric, || format!("kind {:?}", s.kind()))?;
    let path = fixture("NU3.json");
    let cli = ultra(&["--json", "gamma", path.to_str().unwrap()])?;
    check(
        cli["vertices"] == 6 && cli["edges"] == 6 && cli["is_tree"] == false,
        || format!("gamma CLI {cli}"),
    )?;
    let v = ultra(&["--json", "validate", path.to_str().unwrap()])?;
    check(v["kind"] == "Metric", || format!("validate CLI {v}"))?;
    // the converse direction on ultrametric fixtures
    for u in [r4(), f3()] {
        let st = gamma_is_tree(&u).map_err(e)?;
        check(st.is_tree && st.vertices == st.edges + 1, || format!("{st:?}"))?;
    }
    Ok("|V|=6, |E|=6, not a tree, kind Metric".into())
}

fn ultra_corpus(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<Space> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(min_n..=max_n);
            let kind = if i % 4 == 0 { GenKind::ChainR } else { GenKind::RandomTree };
            generate(kind, n, rng.gen()).unwrap()
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let spaces = ultra_corpus(240, 2, 8, 5);
    for s in &spaces {
        let brute = oracle_isometries(s, ISOMETRY_CAP).map_err(e)?;
        let mut listed: Vec<Vec<usize>> = isometry_group(s)
            .map_err(e)?
            .full_list
            .ok_or("group not listed")?
            .iter()
            .map(|g| g.as_slice().to_vec())
            .collect();
        listed.sort();
        check(listed == brute, || format!("isometry sets differ on {s:?}"))?;
        let ours = min_fixed_points(s).map_err(e)?.0;
        let theirs = oracle_min_fix(s, ISOMETRY_CAP).map_err(e)?;
        check(ours == theirs, || format!("min fix {ours} vs {theirs} on {s:?}"))?;
    }
    Ok(format!("{} spaces, 100% agreement", spaces.len()))
}

fn criterion_6() -> Outcome {
    let spaces = ultra_corpus(600, 2, 12, 6);
    let mut in_family = 0;
    for s in &spaces {
        let report = is_max_rigid(s).map_err(e)?;
        let answers = [
            report.min_fix_criterion.holds,
            report.order_criterion.holds,
            report.shape_criterion.holds,
            balls_are_stars(s).map_err(e)?.holds,
            hamiltonian_decreasing_path(s).map_err(e)?.is_some(),
            distinct_weight_spanning_star(s).map_err(e)?.is_some(),
            star_determination_check(s).map_err(e)?,
        ];
        check(answers.iter().all(|&a| a == answers[0]), || {
            format!("answers {answers:?} on {s:?}")
        })?;
        in_family += usize::from(answers[0]);
    }
    Ok(format!(
        "{} spaces ({in_family} in R, {} not), 100% agreement",
        spaces.len(),
        spaces.len() - in_family
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs = 0;
    for i in 0..1000 {
        let n = rng.gen_range(1..=14);
        let pool_size = rng.gen_range(n.max(2) - 1..=2 * n + 2);
        let pool: Vec<Dist> = (0..pool_size)
            .map(|_| Dist::ratio(rng.gen_range(1..200), rng.gen_range(1..6)).unwrap())
            .collect();
        let shape = if i % 5 == 0 {
            TreeShape::Chain
        } else {
            TreeShape::Random { max_children: rng.gen_range(2..=5) }
        };
        let original = match random_tree(n, &pool, shape, rng.gen()) {
            Ok(t) => t,
            Err(ultrametric::Error::ShallowPool { .. }) => {
                let deep: Vec<Dist> = (1..=n as u64).map(Dist::from_int).collect();
                random_tree(n, &deep, shape, rng.gen()).map_err(e)?
            }
            Err(err) => return Err(err.to_string()),
        };
        let space = original.to_space().map_err(e)?;
        let rebuilt = ReprTree::build(&space).map_err(e)?;
        for a in 0..n {
            for b in 0..n {
                let want = original.recover_distance(a, b).map_err(e)?;
                let got = rebuilt.recover_distance(a, b).map_err(e)?;
                check(want == got && got == space.d(a, b), || {
                    format!("d({a},{b}): tree {want}, rebuilt {got}")
                })?;
                pairs += 1;
            }
        }
        check(original.canonical_code() == rebuilt.canonical_code(), || {
            "canonical codes differ".into()
        })?;
    }
    Ok(format!("1000 trees, {pairs} ordered pairs recovered exactly"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let n = rng.gen_range(3..=12);
        let s = generate(GenKind::RandomTree, n, rng.gen()).map_err(e)?;
        let len = rng.gen_range(3..=n);
        let mut points: Vec<usize> = (0..n).collect();
        points.shuffle(&mut rng);
        points.truncate(len);
        let weights: Vec<Dist> = (0..len).map(|i| s.d(points[i], points[(i + 1) % len])).collect();
        let max = *weights.iter().max().unwrap();
        let count = weights.iter().filter(|&&w| w == max).count();
        check(count >= 2, || format!("cycle {points:?} in {s:?} has a unique maximum"))?;
        check(cycle_max_twice(&s, &points).map_err(e)?, || "library disagrees".into())?;
    }
    Ok("1000 cycles, maximum attained at least twice in each".into())
}

fn star_rays(weights: &[u64]) -> Vec<(String, Dist)> {
    weights
        .iter()
        .enumerate()
        .map(|(i, &w)| (format!("y{}", i + 1), Dist::from_int(w)))
        .collect()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let k = rng.gen_range(1..=6);
        let mut values: Vec<u64> = (1..=20).collect();
        values.shuffle(&mut rng);
        values.truncate(k);
        let rays = star_rays(&values);
        let c = complete_star("c", &rays).map_err(e)?;
        check(c.space.is_ultrametric() && c.unique, || format!("star {values:?}"))?;
        check(c.second_completion.is_none(), || format!("star {values:?}"))?;
        let w: Vec<Dist> = rays.iter().map(|r| r.1).collect();
        let all = oracle_star_completions(&w, &completion_candidates(&w));
        check(all == [c.space.rows()], || {
            format!("star {values:?}: brute force found {} completions", all.len())
        })?;
    }
    for _ in 0..100 {
        let k = rng.gen_range(2..=6);
        let mut values: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=8)).collect();
        let (a, b) = (rng.gen_range(0..k), rng.gen_range(0..k));
        if a != b {
            values[a] = values[b];
        } else {
            values[(a + 1) % k] = values[a];
        }
        let rays = star_rays(&values);
        let c = complete_star("c", &rays).map_err(e)?;
        let alt = c.second_completion.ok_or_else(|| format!("star {values:?}: no second completion"))?;
        check(!c.unique && alt.is_ultrametric() && alt != c.space, || {
            format!("star {values:?}: bad second completion")
        })?;
        for (i, (_, w)) in rays.iter().enumerate() {
            check(alt.d(0, i + 1) == *w, || format!("star {values:?}: rays changed"))?;
        }
    }
    Ok("100 injective stars unique, 100 tied stars with a verified second completion".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checked = 0;
    for n in 1..=10 {
        let chains: Vec<Space> = if n >= 2 {
            (0..10).map(|_| generate(GenKind::ChainR, n, rng.gen()).unwrap()).collect()
        } else {
            Vec::new()
        };
        for c in &chains {
            check(c.spectrum().len() == n, || format!("chain space {c:?} has |Sp| < |X|"))?;
        }
        for _ in 0..40 {
            let s = generate(GenKind::RandomTree, n, rng.gen()).map_err(e)?;
            let gh = s.gomory_hu_check().map_err(e)?;
            check(gh.holds && gh.spectrum_size <= n, || format!("{gh:?}"))?;
            if !in_r(&s).map_err(e)? {
                for c in &chains {
                    check(spectrum_maximality(c, &s).map_err(e)?, || {
                        format!("{s:?} exceeds the spectrum of {c:?}")
                    })?;
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} generated spaces, n = 1..10"))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut equal = 0;
    for i in 0..100 {
        let n = rng.gen_range(2..=10);
        let m = if i % 2 == 0 { n } else { rng.gen_range(2..=10) };
        let x = generate(GenKind::ChainR, n, rng.gen()).map_err(e)?;
        let y = generate(GenKind::ChainR, m, rng.gen()).map_err(e)?;
        let ws = weakly_similar(&x, &y).map_err(e)?.is_some();
        check(ws == (n == m), || format!("sizes {n}, {m}: weakly similar {ws}"))?;
        let sizes = r_class_size_criterion(&x, &y).map_err(e)?;
        check(sizes.weakly_similar == ws, || format!("{sizes:?}"))?;
        equal += usize::from(n == m);

        let factor = Dist::ratio(rng.gen_range(1..1000), rng.gen_range(1..1000)).unwrap();
        let scaled = x.scaled(factor).map_err(e)?;
        check(weakly_similar(&x, &scaled).map_err(e)?.is_some(), || {
            format!("scaling by {factor} broke weak similarity")
        })?;
        check(in_r(&scaled).map_err(e)?, || format!("scaling by {factor} left R"))?;
    }
    Ok(format!("100 pairs ({equal} of equal size), 100 scalings"))
}

fn main() -> ExitCode {
    type Criterion = (usize, &'static str, fn() -> Outcome, Duration);
    let secs = Duration::from_secs;
    let criteria: [Criterion; 11] = [
        (1, "R4 tree is a strictly binary chain", criterion_1, secs(1)),
        (2, "R4 rigidity numbers", criterion_2, secs(1)),
        (3, "F3 spectrum-maximal but not in R", criterion_3, secs(1)),
        (4, "NU3 ball graph is not a tree", criterion_4, secs(1)),
        (5, "isometry oracle sweep", criterion_5, secs(300)),
        (6, "rigidity characterizations sweep", criterion_6, secs(300)),
        (7, "distance recovery", criterion_7, secs(60)),
        (8, "cycle maximum attained twice", criterion_8, secs(60)),
        (9, "star completion", criterion_9, secs(120)),
        (10, "spectrum bounds", criterion_10, secs(60)),
        (11, "weak similarity in R", criterion_11, secs(60)),
    ];
    let mut failures = 0;
    for (id, name, run, limit) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= limit {
                Ok(detail)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match result {
            Ok(detail) => println!("PASS criterion {id:>2} {name} [{elapsed:.2?}]: {detail}"),
            Err(msg) => {
                failures += 1;
                println!("FAIL criterion {id:>2} {name} [{elapsed:.2?}]: {msg}");
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
