//! Labeled representing trees of finite ultrametric spaces.
//!
//! The root stands for the whole space. Every inner node is split into the
//! blocks of its diametrical graph, and each node carries the diameter of
//! its leaf set as label. Leaves are the singletons, labeled 0.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::Space;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    pub label: Dist,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    /// Set exactly on leaves.
    pub point: Option<usize>,
    pub level: usize,
    /// Points below this node, ascending.
    pub leaves: Vec<usize>,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// A labeled rooted tree whose leaves are the points `0..names.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReprTree {
    nodes: Vec<Node>,
    root: NodeId,
    names: Vec<String>,
}

/// Canonical form of a labeled rooted tree: two trees share a code iff they
/// are isomorphic as labeled rooted trees.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonCode(pub String);

impl std::fmt::Display for CanonCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Unchecked description of a tree, as read from a file or produced by a
/// generator, before invariants are enforced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeSpec {
    Leaf(String),
    Inner(Dist, Vec<TreeSpec>),
}

impl ReprTree {
    pub fn build(space: &Space) -> Result<ReprTree> {
        space.require_ultrametric()?;
        let mut tree = ReprTree {
            nodes: Vec::with_capacity(2 * space.len()),
            root: 0,
            names: space.names().to_vec(),
        };
        tree.grow(space, space.all_points(), None, 0)?;
        Ok(tree)
    }

    fn grow(
        &mut self,
        space: &Space,
        leaves: Vec<usize>,
        parent: Option<NodeId>,
        level: usize,
    ) -> Result<NodeId> {
        let id = self.nodes.len();
        if leaves.len() == 1 {
            self.nodes.push(Node {
                label: Dist::ZERO,
                children: Vec::new(),
                parent,
                point: Some(leaves[0]),
                level,
                leaves,
            });
            return Ok(id);
        }
        let graph = space.diametrical_partition(&leaves)?;
        self.nodes.push(Node {
            label: graph.level,
            children: Vec::new(),
            parent,
            point: None,
            level,
            leaves,
        });
        for block in graph.partition.expect("diametrical partition carries blocks") {
            let child = self.grow(space, block, Some(id), level + 1)?;
            self.nodes[id].children.push(child);
        }
        Ok(id)
    }

    /// Builds a tree from an unchecked description, enforcing every
    /// invariant. Points are numbered in left-to-right leaf order.
    pub fn from_spec(spec: &TreeSpec) -> Result<ReprTree> {
        let mut tree = ReprTree {
            nodes: Vec::new(),
            root: 0,
            names: Vec::new(),
        };
        tree.push_spec(spec, None, 0)?;
        tree.fill_leaf_sets(tree.root);
        let mut seen = HashMap::new();
        for (i, name) in tree.names.iter().enumerate() {
            if seen.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(name.clone()));
            }
        }
        tree.check()?;
        Ok(tree)
    }

    fn push_spec(&mut self, spec: &TreeSpec, parent: Option<NodeId>, level: usize) -> Result<NodeId> {
        let id = self.nodes.len();
        match spec {
            TreeSpec::Leaf(name) => {
                let point = self.names.len();
                self.names.push(name.clone());
                self.nodes.push(Node {
                    label: Dist::ZERO,
                    children: Vec::new(),
                    parent,
                    point: Some(point),
                    level,
                    leaves: Vec::new(),
                });
            }
            TreeSpec::Inner(label, children) => {
                self.nodes.push(Node {
                    label: *label,
                    children: Vec::new(),
                    parent,
                    point: None,
                    level,
                    leaves: Vec::new(),
                });
                if children.is_empty() {
                    return Err(Error::InvalidTree {
                        node: id,
                        reason: "inner node without children".into(),
                    });
                }
                for c in children {
                    let child = self.push_spec(c, Some(id), level + 1)?;
                    self.nodes[id].children.push(child);
                }
            }
        }
        Ok(id)
    }

    fn fill_leaf_sets(&mut self, v: NodeId) {
        if let Some(p) = self.nodes[v].point {
            self.nodes[v].leaves = vec![p];
            return;
        }
        let mut all = Vec::new();
        for c in self.nodes[v].children.clone() {
            self.fill_leaf_sets(c);
            all.extend_from_slice(&self.nodes[c].leaves);
        }
        all.sort_unstable();
        self.nodes[v].leaves = all;
    }

    /// Checks the representing-tree invariants: leaves are exactly the
    /// nodes labeled 0, labels strictly decrease towards the leaves, inner
    /// nodes branch at least twice, and leaves biject onto the points.
    pub fn check(&self) -> Result<()> {
        let bad = |node, reason: &str| Error::InvalidTree {
            node,
            reason: reason.to_string(),
        };
        if self.nodes[self.root].level != 0 || self.nodes[self.root].parent.is_some() {
            return Err(bad(self.root, "root must have level 0 and no parent"));
        }
        let mut hits = vec![0usize; self.names.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            let leaf = node.is_leaf();
            if leaf != node.point.is_some() || leaf != node.label.is_zero() {
                return Err(bad(id, "a node is a leaf iff its label is 0 iff it holds a point"));
            }
            if let Some(p) = node.point {
                match hits.get_mut(p) {
                    Some(h) => *h += 1,
                    None => return Err(bad(id, "leaf point out of range")),
                }
            } else if node.children.len() < 2 {
                return Err(bad(id, "inner node with fewer than two children"));
            }
            for &c in &node.children {
                let child = &self.nodes[c];
                if child.label >= node.label {
                    return Err(bad(c, "label does not decrease below its parent"));
                }
                if child.level != node.level + 1 || child.parent != Some(id) {
                    return Err(bad(c, "inconsistent level or parent"));
                }
            }
        }
        if hits.iter().any(|&h| h != 1) {
            return Err(bad(self.root, "leaves are not in bijection with the points"));
        }
        Ok(())
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn point_count(&self) -> usize {
        self.names.len()
    }

    pub fn inner_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(|&v| !self.nodes[v].is_leaf())
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.level).max().unwrap_or(0)
    }

    /// Node holding point `p`.
    pub fn leaf_of(&self, p: usize) -> Option<NodeId> {
        self.nodes.iter().position(|n| n.point == Some(p))
    }

    pub fn edges(&self) -> Vec<(NodeId, NodeId)> {
        self.nodes
            .iter()
            .enumerate()
            .flat_map(|(v, n)| n.children.iter().map(move |&c| (v, c)))
            .collect()
    }

    /// Max label on the tree path joining the leaves of `a` and `b`.
    pub fn recover_distance(&self, a: usize, b: usize) -> Result<Dist> {
        let unknown = |p: usize| Error::UnknownPoint(format!("#{p}"));
        let mut u = self.leaf_of(a).ok_or_else(|| unknown(a))?;
        let mut v = self.leaf_of(b).ok_or_else(|| unknown(b))?;
        let mut best = Dist::ZERO;
        while u != v {
            if self.nodes[u].level >= self.nodes[v].level {
                u = self.nodes[u].parent.expect("non-root node has a parent");
                best = best.max(self.nodes[u].label);
            } else {
                v = self.nodes[v].parent.expect("non-root node has a parent");
                best = best.max(self.nodes[v].label);
            }
        }
        Ok(best)
    }

    pub fn recover_distance_by_name(&self, a: &str, b: &str) -> Result<Dist> {
        let find = |n: &str| {
            self.names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| Error::UnknownPoint(n.to_string()))
        };
        self.recover_distance(find(a)?, find(b)?)
    }

    /// The ultrametric space this tree represents: distances are the labels
    /// of lowest common ancestors.
    pub fn to_space(&self) -> Result<Space> {
        self.check()?;
        let n = self.names.len();
        let mut rows = vec![vec![Dist::ZERO; n]; n];
        // every pair of points in different child blocks meets at this node
        for node in self.nodes.iter().filter(|n| !n.is_leaf()) {
            for (ci, &c) in node.children.iter().enumerate() {
                for &c2 in &node.children[ci + 1..] {
                    for &a in &self.nodes[c].leaves {
                        for &b in &self.nodes[c2].leaves {
                            rows[a][b] = node.label;
                            rows[b][a] = node.label;
                        }
                    }
                }
            }
        }
        Space::new(self.names.clone(), rows)
    }

    /// Codes of every node, indexed by node id.
    pub fn node_codes(&self) -> Vec<CanonCode> {
        let mut codes = vec![CanonCode(String::new()); self.nodes.len()];
        self.code_into(self.root, &mut codes);
        codes
    }

    fn code_into(&self, v: NodeId, codes: &mut [CanonCode]) {
        let node = &self.nodes[v];
        let mut parts: Vec<String> = Vec::with_capacity(node.children.len());
        for &c in &node.children {
            self.code_into(c, codes);
            parts.push(codes[c].0.clone());
        }
        parts.sort_unstable();
        let mut s = format!("({}", node.label);
        for p in parts {
            s.push_str(&p);
        }
        s.push(')');
        codes[v] = CanonCode(s);
    }

    pub fn canonical_code(&self) -> CanonCode {
        self.node_codes().swap_remove(self.root)
    }

    /// Canonical code of the tree with all inner labels erased.
    pub fn shape_code(&self) -> CanonCode {
        fn go(t: &ReprTree, v: NodeId) -> String {
            let mut parts: Vec<String> = t.nodes[v].children.iter().map(|&c| go(t, c)).collect();
            parts.sort_unstable();
            format!("({})", parts.concat())
        }
        CanonCode(go(self, self.root))
    }

    /// Children of `v` in canonical order, i.e. sorted by code then id.
    pub fn canonical_children(&self, v: NodeId, codes: &[CanonCode]) -> Vec<NodeId> {
        let mut ch = self.nodes[v].children.clone();
        ch.sort_by(|&a, &b| codes[a].cmp(&codes[b]).then(a.cmp(&b)));
        ch
    }

    /// A nested description of this tree, for serialization.
    pub fn to_spec(&self) -> TreeSpec {
        fn go(t: &ReprTree, v: NodeId) -> TreeSpec {
            let n = &t.nodes[v];
            match n.point {
                Some(p) => TreeSpec::Leaf(t.names[p].clone()),
                None => TreeSpec::Inner(n.label, n.children.iter().map(|&c| go(t, c)).collect()),
            }
        }
        go(self, self.root)
    }

    /// Whether the tree is strictly binary with exactly one inner node on
    /// every level but the last. On failure, the offending node.
    pub fn chain_shape(&self) -> std::result::Result<(), NodeId> {
        let depth = self.depth();
        let mut inner_per_level = vec![Vec::new(); depth + 1];
        for (id, n) in self.nodes.iter().enumerate() {
            if !n.is_leaf() {
                if n.children.len() != 2 {
                    return Err(id);
                }
                inner_per_level[n.level].push(id);
            }
        }
        for (level, ids) in inner_per_level.iter().enumerate() {
            let expected = usize::from(level < depth);
            if ids.len() != expected {
                return Err(ids.get(1).or(ids.first()).copied().unwrap_or(self.root));
            }
        }
        Ok(())
    }
}

/// Decides isometry of two ultrametric spaces by comparing canonical codes
/// of their representing trees. On success returns a witness map sending
/// point `i` of `x` to point `map[i]` of `y`.
pub fn isometric(x: &Space, y: &Space) -> Result<Option<Vec<usize>>> {
    let tx = ReprTree::build(x)?;
    let ty = ReprTree::build(y)?;
    Ok(tree_isomorphism(&tx, &ty))
}

/// A leaf map realizing an isomorphism of labeled rooted trees, if any.
pub fn tree_isomorphism(tx: &ReprTree, ty: &ReprTree) -> Option<Vec<usize>> {
    let cx = tx.node_codes();
    let cy = ty.node_codes();
    if cx[tx.root] != cy[ty.root] {
        return None;
    }
    let mut map = vec![usize::MAX; tx.point_count()];
    let mut stack = vec![(tx.root, ty.root)];
    while let Some((u, v)) = stack.pop() {
        if let Some(p) = tx.nodes[u].point {
            map[p] = ty.nodes[v].point.expect("equal codes pair leaves with leaves");
            continue;
        }
        let cu = tx.canonical_children(u, &cx);
        let cv = ty.canonical_children(v, &cy);
        stack.extend(cu.into_iter().zip(cv));
    }
    Some(map)
}

/// Branching behavior of [`random_tree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeShape {
    /// Each inner node splits its leaves into between 2 and `max_children`
    /// nonempty blocks of random sizes.
    Random { max_children: usize },
    /// Strictly binary chain: every inner node has a leaf child and one
    /// further child, the deepest inner node has two leaves.
    Chain,
}

/// A seeded random representing tree on `leaf_count` points named
/// `p1..pn`, with inner labels drawn from `label_pool` so that labels
/// strictly decrease from root to leaves.
pub fn random_tree(
    leaf_count: usize,
    label_pool: &[Dist],
    shape: TreeShape,
    seed: u64,
) -> Result<ReprTree> {
    if leaf_count == 0 {
        return Err(Error::InvalidArgument("leaf_count must be at least 1".into()));
    }
    let mut pool: Vec<Dist> = label_pool.to_vec();
    pool.sort_unstable();
    pool.dedup();
    if pool.is_empty() || pool[0].is_zero() {
        return Err(Error::InvalidArgument(
            "label pool must be nonempty and positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..leaf_count).collect();
    points.shuffle(&mut rng);

    let skeleton = match shape {
        TreeShape::Chain => chain_skeleton(&points),
        TreeShape::Random { max_children } => {
            if max_children < 2 {
                return Err(Error::InvalidArgument("max_children must be at least 2".into()));
            }
            random_skeleton(&points, max_children, &mut rng)
        }
    };
    let height = skeleton.height();
    if height > pool.len() {
        return Err(Error::ShallowPool {
            available: pool.len(),
            needed: height,
        });
    }
    let spec = skeleton.label(&pool, pool.len(), &mut rng);
    ReprTree::from_spec(&spec).map(|t| t.renumbered(leaf_count))
}

enum Skeleton {
    Leaf(usize),
    Inner(Vec<Skeleton>),
}

impl Skeleton {
    /// Number of inner nodes on the longest root-to-leaf path.
    fn height(&self) -> usize {
        match self {
            Skeleton::Leaf(_) => 0,
            Skeleton::Inner(ch) => 1 + ch.iter().map(Skeleton::height).max().unwrap_or(0),
        }
    }

    /// Picks this node's label index in `[height-1, below)`.
    fn label(&self, pool: &[Dist], below: usize, rng: &mut ChaCha8Rng) -> TreeSpec {
        match self {
            Skeleton::Leaf(p) => TreeSpec::Leaf(format!("p{}", p + 1)),
            Skeleton::Inner(ch) => {
                let idx = rng.gen_range(self.height() - 1..below);
                let children = ch.iter().map(|c| c.label(pool, idx, rng)).collect();
                TreeSpec::Inner(pool[idx], children)
            }
        }
    }
}

fn chain_skeleton(points: &[usize]) -> Skeleton {
    match points {
        [p] => Skeleton::Leaf(*p),
        [p, rest @ ..] => Skeleton::Inner(vec![Skeleton::Leaf(*p), chain_skeleton(rest)]),
        [] => unreachable!("chain skeleton of an empty point set"),
    }
}

fn random_skeleton(points: &[usize], max_children: usize, rng: &mut ChaCha8Rng) -> Skeleton {
    if points.len() == 1 {
        return Skeleton::Leaf(points[0]);
    }
    let k = rng.gen_range(2..=max_children.min(points.len()));
    // k - 1 distinct cut positions in 1..len
    let mut cuts: Vec<usize> = (1..points.len()).collect();
    cuts.shuffle(rng);
    let mut cuts = cuts[..k - 1].to_vec();
    cuts.sort_unstable();
    let mut children = Vec::with_capacity(k);
    let mut start = 0;
    for end in cuts.into_iter().chain(std::iter::once(points.len())) {
        children.push(random_skeleton(&points[start..end], max_children, rng));
        start = end;
    }
    Skeleton::Inner(children)
}

impl ReprTree {
    /// Renumbers points so that point `i` is named `p{i+1}`, matching the
    /// generator's naming.
    fn renumbered(mut self, n: usize) -> ReprTree {
        let perm: Vec<usize> = self
            .names
            .iter()
            .map(|name| name[1..].parse::<usize>().expect("generated name") - 1)
            .collect();
        for node in &mut self.nodes {
            if let Some(p) = node.point.as_mut() {
                *p = perm[*p];
            }
            for l in &mut node.leaves {
                *l = perm[*l];
            }
            node.leaves.sort_unstable();
        }
        self.names = (1..=n).map(|i| format!("p{i}")).collect();
        self
    }
}
