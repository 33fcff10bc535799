//! Graph certificates of maximal rigidity: star-shaped diametrical graphs,
//! level stars, edge counts, decreasing Hamiltonian paths and cycles, and
//! spanning stars with distinct weights that determine the whole space.

use serde::Serialize;

use crate::balls::{enumerate_balls, Ball};
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::rigidity::in_r;
use crate::space::Space;
use crate::tree::ReprTree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarBalls {
    pub holds: bool,
    /// Smallest ball of positive diameter whose diametrical graph is not a star.
    pub violation: Option<Ball>,
}

/// Whether the diametrical graph of every ball with positive diameter is a
/// star `K_{1,m}`.
pub fn balls_are_stars(space: &Space) -> Result<StarBalls> {
    space.require_ultrametric()?;
    space.require_size(2)?;
    for ball in enumerate_balls(space).into_iter().filter(|b| b.len() >= 2) {
        let g = space.diametrical_partition(ball.members())?;
        let blocks = g.partition.expect("diametrical partition carries blocks");
        let star = blocks.len() == 2 && blocks.iter().any(|b| b.len() == 1);
        if !star {
            return Ok(StarBalls {
                holds: false,
                violation: Some(ball),
            });
        }
    }
    Ok(StarBalls {
        holds: true,
        violation: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LevelStar {
    pub is_star: bool,
    /// Level of the unique tree node labeled with the distance.
    pub node_level: usize,
    /// `|X| - 1`.
    pub n: usize,
    /// Number of rays of the reduced level graph; `n - node_level` when it is
    /// the expected star.
    pub rays: usize,
}

/// Checks that the pairs at distance `r` of a maximally rigid space form a
/// star `K_{1, n-p}` once isolated points are dropped, where `p` is the
/// level of the tree node labeled `r` and `n = |X| - 1`.
pub fn level_star_check(space: &Space, r: Dist) -> Result<LevelStar> {
    if !in_r(space)? {
        return Err(Error::NotMaxRigid);
    }
    let graph = space.level_graph(r)?;
    let tree = ReprTree::build(space)?;
    let labeled: Vec<usize> = tree
        .nodes()
        .iter()
        .filter(|node| node.label == r)
        .map(|node| node.level)
        .collect();
    let node_level = match labeled.as_slice() {
        [p] => *p,
        _ => {
            return Err(Error::Inconsistent(format!(
                "{} tree nodes carry label {r}",
                labeled.len()
            )))
        }
    };
    let n = space.len() - 1;
    let reduced = graph.reduced();
    let rays = reduced.vertices.len().saturating_sub(1);
    let is_star = reduced.as_star().is_some() && rays == n - node_level;
    Ok(LevelStar {
        is_star,
        node_level,
        n,
        rays,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeBound {
    pub edges: usize,
    /// `|X| - 1`.
    pub bound: usize,
    pub equality: bool,
    pub is_star: bool,
}

/// `|E(G_X)| >= |X| - 1`, with equality exactly when `G_X` is a star.
pub fn diametrical_edge_bound(space: &Space) -> Result<EdgeBound> {
    space.require_ultrametric()?;
    space.require_size(2)?;
    let g = space.diametrical_partition(&space.all_points())?;
    let bound = space.len() - 1;
    let out = EdgeBound {
        edges: g.edges.len(),
        bound,
        equality: g.edges.len() == bound,
        is_star: g.as_star().is_some_and(|(_, rays)| rays.len() == bound),
    };
    if out.edges < bound || out.equality != out.is_star {
        return Err(Error::Inconsistent(format!("edge bound violated: {out:?}")));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeMinimality {
    pub holds: bool,
    pub subsets_checked: usize,
    pub exhaustive: bool,
}

/// Whether every subspace `Y` has a diametrical graph with as few edges as
/// any ultrametric space of size `|Y|` can have, namely `|Y| - 1`.
///
/// Decided through maximal rigidity; spaces with at most `exhaustive_cap`
/// points are also checked subset by subset and both answers must agree.
pub fn edge_minimality_check(space: &Space, exhaustive_cap: usize) -> Result<EdgeMinimality> {
    space.require_ultrametric()?;
    space.require_size(2)?;
    let holds = in_r(space)?;
    let n = space.len();
    if n > exhaustive_cap || n >= 64 {
        return Ok(EdgeMinimality {
            holds,
            subsets_checked: 0,
            exhaustive: false,
        });
    }
    let mut checked = 0;
    let mut brute = true;
    for mask in 1u64..(1u64 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        checked += 1;
        if space.diametrical_partition(&subset)?.edges.len() != subset.len() - 1 {
            brute = false;
            break;
        }
    }
    if brute != holds {
        return Err(Error::Inconsistent(format!(
            "subset scan says {brute}, rigidity says {holds}"
        )));
    }
    Ok(EdgeMinimality {
        holds,
        subsets_checked: checked,
        exhaustive: true,
    })
}

/// A Hamiltonian path with the weights of its consecutive edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HamPath {
    pub points: Vec<usize>,
    pub weights: Vec<Dist>,
}

impl HamPath {
    pub fn along(space: &Space, points: Vec<usize>) -> HamPath {
        let weights = points.windows(2).map(|w| space.d(w[0], w[1])).collect();
        HamPath { points, weights }
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] > w[1])
    }

    pub fn visits_all(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        self.points.len() == n
            && self
                .points
                .iter()
                .all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
    }
}

/// The points of a maximally rigid space in tree order: the leaf hanging
/// off each level of the chain, then the two deepest leaves by index.
fn chain_order(space: &Space) -> Result<Option<Vec<usize>>> {
    if !in_r(space)? {
        return Ok(None);
    }
    let tree = ReprTree::build(space)?;
    let mut order = Vec::with_capacity(space.len());
    let mut v = tree.root();
    loop {
        let children = &tree.node(v).children;
        let (leaves, inner): (Vec<usize>, Vec<usize>) =
            children.iter().partition(|&&c| tree.node(c).is_leaf());
        match inner.as_slice() {
            [next] => {
                order.push(tree.node(leaves[0]).point.expect("leaf"));
                v = *next;
            }
            [] => {
                let mut last: Vec<usize> =
                    leaves.iter().map(|&c| tree.node(c).point.expect("leaf")).collect();
                last.sort_unstable();
                order.extend(last);
                break;
            }
            _ => unreachable!("chain-shaped trees have at most one inner child"),
        }
    }
    Ok(Some(order))
}

/// A Hamiltonian path with strictly decreasing edge weights, which exists
/// exactly for maximally rigid spaces.
pub fn hamiltonian_decreasing_path(space: &Space) -> Result<Option<HamPath>> {
    space.require_ultrametric()?;
    space.require_size(2)?;
    let Some(order) = chain_order(space)? else {
        return Ok(None);
    };
    let path = HamPath::along(space, order);
    if !path.strictly_decreasing() || !path.visits_all(space.len()) {
        return Err(Error::Inconsistent(format!("tree path {path:?} is not decreasing")));
    }
    Ok(Some(path))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanningStar {
    pub center: usize,
    /// `(point, weight)` in order of increasing weight.
    pub rays: Vec<(usize, Dist)>,
}

impl SpanningStar {
    pub fn distinct_weights(&self) -> bool {
        let mut w: Vec<Dist> = self.rays.iter().map(|r| r.1).collect();
        w.sort_unstable();
        w.windows(2).all(|p| p[0] != p[1])
    }
}

/// A spanning star whose rays carry pairwise distinct weights, which exists
/// exactly for maximally rigid spaces. Its center is the last point of the
/// decreasing Hamiltonian path and its rays run back along that path.
pub fn distinct_weight_spanning_star(space: &Space) -> Result<Option<SpanningStar>> {
    let Some(path) = hamiltonian_decreasing_path(space)? else {
        return Ok(None);
    };
    let (&center, rest) = path.points.split_last().expect("nonempty path");
    let rays = rest.iter().rev().map(|&y| (y, space.d(center, y))).collect();
    let star = SpanningStar { center, rays };
    if !star.distinct_weights() {
        return Err(Error::Inconsistent(format!("star {star:?} repeats a weight")));
    }
    Ok(Some(star))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HamCycle {
    pub points: Vec<usize>,
    /// Weights of `x1x2, ..., x(n-1)xn, xnx1`.
    pub weights: Vec<Dist>,
}

/// A Hamiltonian cycle whose first and closing edges both carry the maximum
/// weight and whose interior weights strictly decrease.
pub fn hamiltonian_cycle_check(space: &Space) -> Result<Option<HamCycle>> {
    space.require_ultrametric()?;
    space.require_size(3)?;
    let Some(path) = hamiltonian_decreasing_path(space)? else {
        return Ok(None);
    };
    let first = path.points[0];
    let last = *path.points.last().expect("nonempty");
    let mut weights = path.weights.clone();
    let closing = space.d(last, first);
    weights.push(closing);
    let max = *weights.iter().max().expect("nonempty");
    if closing != weights[0] || closing != max {
        return Err(Error::Inconsistent(format!(
            "closing edge {closing} differs from first edge {} or maximum {max}",
            weights[0]
        )));
    }
    Ok(Some(HamCycle {
        points: path.points,
        weights,
    }))
}

/// Whether the maximum edge weight of `cycle` is attained at least twice.
/// True for every cycle of an ultrametric space.
pub fn cycle_max_twice(space: &Space, cycle: &[usize]) -> Result<bool> {
    space.require_ultrametric()?;
    if cycle.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a cycle needs at least 3 points, got {}",
            cycle.len()
        )));
    }
    let mut seen = vec![false; space.len()];
    for &p in cycle {
        if p >= space.len() {
            return Err(Error::UnknownPoint(format!("#{p}")));
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidArgument(format!(
                "point {} repeats in the cycle",
                space.name(p)
            )));
        }
    }
    let weights: Vec<Dist> = (0..cycle.len())
        .map(|i| space.d(cycle[i], cycle[(i + 1) % cycle.len()]))
        .collect();
    let max = *weights.iter().max().expect("nonempty");
    Ok(weights.iter().filter(|&&w| w == max).count() >= 2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCompletion {
    /// Points are the center followed by the rays in the given order.
    pub space: Space,
    pub unique: bool,
    /// Another ultrametric agreeing with the star, when the completion is
    /// not unique.
    pub second_completion: Option<Space>,
}

/// Completes a weighted star to the ultrametric `d(y_i, y_j) = max(w_i, w_j)`.
///
/// The completion is the only ultrametric extending the star iff all ray
/// weights differ. Otherwise a second one is built by halving the distance
/// of the first tied pair of rays.
pub fn complete_star(center: &str, rays: &[(String, Dist)]) -> Result<StarCompletion> {
    if let Some((name, _)) = rays.iter().find(|(_, w)| w.is_zero()) {
        return Err(Error::InvalidArgument(format!("ray to {name} has non-positive weight")));
    }
    let mut names = vec![center.to_string()];
    names.extend(rays.iter().map(|(n, _)| n.clone()));
    let weight = |i: usize| rays[i - 1].1;
    let max_completion = |i: usize, j: usize| if i == 0 { weight(j) } else { weight(i).max(weight(j)) };

    let space = Space::from_fn_named(names.clone(), max_completion)?;
    space.require_ultrametric()?;

    let tie = (1..names.len())
        .flat_map(|i| ((i + 1)..names.len()).map(move |j| (i, j)))
        .find(|&(i, j)| weight(i) == weight(j));
    let second_completion = match tie {
        None => None,
        Some((ti, tj)) => {
            let alt = Space::from_fn_named(names, |i, j| {
                if (i, j) == (ti, tj) {
                    weight(ti).half()
                } else {
                    max_completion(i, j)
                }
            })?;
            if !alt.is_ultrametric() || alt == space {
                return Err(Error::Inconsistent("alternative completion is invalid".into()));
            }
            Some(alt)
        }
    };
    Ok(StarCompletion {
        space,
        unique: tie.is_none(),
        second_completion,
    })
}

/// Whether some spanning star determines the whole space among ultrametrics.
pub fn star_determination_check(space: &Space) -> Result<bool> {
    let Some(star) = distinct_weight_spanning_star(space)? else {
        return Ok(false);
    };
    let rays: Vec<(String, Dist)> = star
        .rays
        .iter()
        .map(|&(p, w)| (space.name(p).to_string(), w))
        .collect();
    let completion = complete_star(space.name(star.center), &rays)?;
    let mut order = vec![star.center];
    order.extend(star.rays.iter().map(|r| r.0));
    let reproduced = completion.space == space.subspace(&order)?;
    Ok(reproduced && completion.unique)
}
