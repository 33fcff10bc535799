//! Balls of a finite metric space and the covering graph on them.
//!
//! The graph joins two balls when one strictly contains the other and no
//! third ball lies between them. It is a tree exactly when the space is
//! ultrametric, and then it coincides with the representing tree.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::Space;
use crate::tree::ReprTree;

/// A ball, identified by its member points in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Ball(Vec<usize>);

impl Ball {
    /// Wraps a point set, sorting and deduplicating it. Whether the set is a
    /// ball of some space is not checked here.
    pub fn new(mut members: Vec<usize>) -> Ball {
        members.sort_unstable();
        members.dedup();
        Ball(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn is_subset(&self, other: &Ball) -> bool {
        self.len() <= other.len() && self.0.iter().all(|&p| other.contains(p))
    }

    pub fn is_proper_subset(&self, other: &Ball) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    pub fn is_disjoint(&self, other: &Ball) -> bool {
        !self.0.iter().any(|&p| other.contains(p))
    }
}

/// Every closed ball `B_r(t)` with center `t` and radius `r` in the
/// spectrum, deduplicated. Sorted by size, then lexicographically.
///
/// Radii outside the spectrum add nothing: a ball of radius `r` equals the
/// ball whose radius is the largest spectrum value not above `r`.
pub fn enumerate_balls(space: &Space) -> Vec<Ball> {
    let spectrum = space.spectrum();
    let mut set = BTreeSet::new();
    for t in 0..space.len() {
        for &r in &spectrum {
            let members = (0..space.len()).filter(|&x| space.d(x, t) <= r).collect();
            set.insert(Ball(members));
        }
    }
    let mut balls: Vec<Ball> = set.into_iter().collect();
    balls.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    balls
}

/// The ball graph: vertices are balls, edges are covering pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaGraph {
    pub balls: Vec<Ball>,
    /// `(inner, outer)` index pairs with `balls[inner]` covered by `balls[outer]`.
    pub edges: Vec<(usize, usize)>,
    /// Index of the ball equal to the whole space.
    pub root: usize,
}

impl GammaGraph {
    pub fn new(space: &Space) -> GammaGraph {
        let balls = enumerate_balls(space);
        let mut edges = Vec::new();
        for (i, small) in balls.iter().enumerate() {
            for (j, big) in balls.iter().enumerate() {
                if !small.is_proper_subset(big) {
                    continue;
                }
                let between = balls
                    .iter()
                    .any(|b| small.is_proper_subset(b) && b.is_proper_subset(big));
                if !between {
                    edges.push((i, j));
                }
            }
        }
        let root = balls.len() - 1;
        debug_assert_eq!(balls[root].len(), space.len());
        GammaGraph { balls, edges, root }
    }

    pub fn vertex_count(&self) -> usize {
        self.balls.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.balls.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![self.root];
        seen[self.root] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn index_of(&self, ball: &Ball) -> Option<usize> {
        self.balls.iter().position(|b| b == ball)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaStats {
    pub is_tree: bool,
    pub vertices: usize,
    pub edges: usize,
}

/// Tree test for the ball graph. The graph is always connected, so it is a
/// tree iff it has one more vertex than edges.
pub fn gamma_is_tree(space: &Space) -> Result<GammaStats> {
    let g = GammaGraph::new(space);
    if !g.is_connected() {
        return Err(Error::Inconsistent("ball graph is disconnected".into()));
    }
    Ok(GammaStats {
        is_tree: g.vertex_count() == g.edge_count() + 1,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
    })
}

/// Checks that `v ↦ leaf set of v` is a rooted isomorphism from the
/// representing tree onto the ball graph rooted at the whole space.
pub fn gamma_tree_matches_repr(space: &Space) -> Result<bool> {
    let tree = ReprTree::build(space)?;
    let gamma = GammaGraph::new(space);
    if tree.nodes().len() != gamma.vertex_count() {
        return Ok(false);
    }
    let mut image = Vec::with_capacity(tree.nodes().len());
    for node in tree.nodes() {
        match gamma.index_of(&Ball(node.leaves.clone())) {
            Some(i) => image.push(i),
            None => return Ok(false),
        }
    }
    let distinct: BTreeSet<usize> = image.iter().copied().collect();
    if distinct.len() != image.len() || image[tree.root()] != gamma.root {
        return Ok(false);
    }
    let mapped: BTreeSet<(usize, usize)> = tree
        .edges()
        .into_iter()
        .map(|(parent, child)| (image[child], image[parent]))
        .collect();
    let actual: BTreeSet<(usize, usize)> = gamma.edges.iter().copied().collect();
    Ok(mapped == actual)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeComparison {
    pub metric_edges: usize,
    pub ultrametric_edges: usize,
    /// `|E(Γ_X)| >= |E(Γ_Y)|`.
    pub inequality_holds: bool,
    /// Whether "edge counts equal" and "X is ultrametric" agree.
    pub equality_iff_ultrametric: bool,
}

/// Compares ball-graph edge counts of a metric space `x` and an ultrametric
/// space `y` with the same number of balls.
pub fn compare_gamma_edges(x: &Space, y: &Space) -> Result<EdgeComparison> {
    x.require_metric()?;
    y.require_ultrametric()?;
    let gx = GammaGraph::new(x);
    let gy = GammaGraph::new(y);
    if gx.vertex_count() != gy.vertex_count() {
        return Err(Error::BallCountMismatch(gx.vertex_count(), gy.vertex_count()));
    }
    let (ex, ey) = (gx.edge_count(), gy.edge_count());
    Ok(EdgeComparison {
        metric_edges: ex,
        ultrametric_edges: ey,
        inequality_holds: ex >= ey,
        equality_iff_ultrametric: (ex == ey) == x.is_ultrametric(),
    })
}

/// Whether `members` is one of the balls of `space`.
pub fn is_ball(space: &Space, members: &[usize]) -> bool {
    let target = Ball::new(members.to_vec());
    if target.is_empty() {
        return false;
    }
    // a ball containing its center t with radius r = max d(t, member)
    target.members().iter().any(|&t| {
        let r = target
            .members()
            .iter()
            .map(|&m| space.d(t, m))
            .max()
            .expect("nonempty");
        (0..space.len()).all(|x| (space.d(x, t) <= r) == target.contains(x))
    })
}
