//! Isometry groups of finite ultrametric spaces and maximal rigidity.
//!
//! Self-isometries are exactly the label-preserving automorphisms of the
//! representing tree, so the group is read off the tree: at every inner
//! node, children with equal canonical code may be permuted freely.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::balls::{is_ball, Ball};
use crate::error::{Error, Result};
use crate::isometry::Isometry;
use crate::space::Space;
use crate::tree::{CanonCode, NodeId, ReprTree};

/// Groups at or below this order get their elements listed.
pub const DEFAULT_LIST_CAP: u128 = 10080;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoGroup {
    pub order: u128,
    pub generators: Vec<Isometry>,
    /// Orbits of points, each ascending, ordered by smallest point.
    pub orbits: Vec<Vec<usize>>,
    /// Every element in lexicographic order, present iff `order <= cap`.
    pub full_list: Option<Vec<Isometry>>,
}

/// Children of `v` grouped into classes of equal canonical code, each class
/// in canonical order.
fn sibling_classes(tree: &ReprTree, codes: &[CanonCode], v: NodeId) -> Vec<Vec<NodeId>> {
    let mut classes: Vec<Vec<NodeId>> = Vec::new();
    for c in tree.canonical_children(v, codes) {
        match classes.last_mut() {
            Some(last) if codes[last[0]] == codes[c] => last.push(c),
            _ => classes.push(vec![c]),
        }
    }
    classes
}

/// Writes into `map` the leaf correspondence of a canonical isomorphism
/// from subtree `u` onto the equal-code subtree `v`.
fn pair_subtrees(tree: &ReprTree, codes: &[CanonCode], u: NodeId, v: NodeId, map: &mut [usize]) {
    if let Some(p) = tree.node(u).point {
        map[p] = tree.node(v).point.expect("equal codes pair leaves with leaves");
        return;
    }
    let cu = tree.canonical_children(u, codes);
    let cv = tree.canonical_children(v, codes);
    for (a, b) in cu.into_iter().zip(cv) {
        pair_subtrees(tree, codes, a, b, map);
    }
}

fn factorial(m: usize) -> Option<u128> {
    (1..=m as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

struct TreeGroup<'a> {
    tree: &'a ReprTree,
    codes: Vec<CanonCode>,
    n: usize,
}

impl<'a> TreeGroup<'a> {
    fn new(tree: &'a ReprTree) -> Self {
        TreeGroup {
            tree,
            codes: tree.node_codes(),
            n: tree.point_count(),
        }
    }

    fn classes(&self, v: NodeId) -> Vec<Vec<NodeId>> {
        sibling_classes(self.tree, &self.codes, v)
    }

    fn order(&self) -> Result<u128> {
        let mut order = 1u128;
        for v in self.tree.inner_nodes() {
            for class in self.classes(v) {
                order = factorial(class.len())
                    .and_then(|f| order.checked_mul(f))
                    .ok_or_else(|| Error::InvalidArgument("group order overflows u128".into()))?;
            }
        }
        Ok(order)
    }

    /// The permutation exchanging subtrees `a` and `b`, identity elsewhere.
    fn swap(&self, a: NodeId, b: NodeId) -> Vec<usize> {
        let mut map: Vec<usize> = (0..self.n).collect();
        pair_subtrees(self.tree, &self.codes, a, b, &mut map);
        pair_subtrees(self.tree, &self.codes, b, a, &mut map);
        map
    }

    fn generators(&self) -> Vec<Vec<usize>> {
        let mut gens = Vec::new();
        for v in self.tree.inner_nodes() {
            for class in self.classes(v) {
                for w in class.windows(2) {
                    gens.push(self.swap(w[0], w[1]));
                }
            }
        }
        gens
    }

    /// All automorphisms of the subtree at `v`, as full-length maps that fix
    /// every point outside it.
    fn elements(&self, v: NodeId) -> Vec<Vec<usize>> {
        let identity: Vec<usize> = (0..self.n).collect();
        if self.tree.node(v).is_leaf() {
            return vec![identity];
        }
        let mut acc = vec![identity];
        for class in self.classes(v) {
            let child_elems: Vec<Vec<Vec<usize>>> = class.iter().map(|&c| self.elements(c)).collect();
            let mut next = Vec::new();
            for sigma in permutations(class.len()) {
                // child class[i] is sent onto class[sigma[i]]
                let transports: Vec<Vec<usize>> = (0..class.len())
                    .map(|i| {
                        let mut m: Vec<usize> = (0..self.n).collect();
                        pair_subtrees(self.tree, &self.codes, class[i], class[sigma[i]], &mut m);
                        m
                    })
                    .collect();
                let mut partial = acc.clone();
                for (i, &c) in class.iter().enumerate() {
                    let leaves = &self.tree.node(c).leaves;
                    let mut grown = Vec::with_capacity(partial.len() * child_elems[i].len());
                    for base in &partial {
                        for alpha in &child_elems[i] {
                            let mut g = base.clone();
                            for &x in leaves {
                                g[x] = transports[i][alpha[x]];
                            }
                            grown.push(g);
                        }
                    }
                    partial = grown;
                }
                next.extend(partial);
            }
            acc = next;
        }
        acc
    }

    /// A tree automorphism moving every point that some automorphism moves:
    /// each class of two or more equal siblings is cycled, classes of one
    /// are entered recursively.
    fn min_fix_witness(&self, v: NodeId, map: &mut [usize]) {
        for class in self.classes(v) {
            if class.len() == 1 {
                self.min_fix_witness(class[0], map);
                continue;
            }
            for i in 0..class.len() {
                let j = (i + 1) % class.len();
                pair_subtrees(self.tree, &self.codes, class[i], class[j], map);
            }
        }
    }
}

fn orbits_of(n: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in gens {
        for (x, &y) in g.iter().enumerate() {
            let (a, b) = (find(&mut parent, x), find(&mut parent, y));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        if slot[r] == usize::MAX {
            slot[r] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[slot[r]].push(x);
    }
    orbits
}

pub fn isometry_group(space: &Space) -> Result<IsoGroup> {
    isometry_group_capped(space, DEFAULT_LIST_CAP)
}

/// The isometry group with its elements listed when `order <= cap`.
pub fn isometry_group_capped(space: &Space, cap: u128) -> Result<IsoGroup> {
    let tree = ReprTree::build(space)?;
    let group = TreeGroup::new(&tree);
    let order = group.order()?;
    let raw_gens = group.generators();
    let orbits = orbits_of(space.len(), &raw_gens);
    let generators = raw_gens
        .into_iter()
        .map(|g| Isometry::new(space, g))
        .collect::<Result<Vec<_>>>()?;
    let full_list = if order <= cap {
        let mut elems: Vec<Isometry> = group
            .elements(tree.root())
            .into_iter()
            .map(Isometry::from_map_unchecked)
            .collect();
        elems.sort();
        elems.dedup();
        if elems.len() as u128 != order {
            return Err(Error::Inconsistent(format!(
                "listed {} elements for a group of order {order}",
                elems.len()
            )));
        }
        Some(elems)
    } else {
        None
    };
    Ok(IsoGroup {
        order,
        generators,
        orbits,
        full_list,
    })
}

/// `min |Fix(g)|` over all self-isometries, with an isometry attaining it.
///
/// The minimum equals the number of points fixed by the whole group.
pub fn min_fixed_points(space: &Space) -> Result<(usize, Isometry)> {
    let tree = ReprTree::build(space)?;
    let group = TreeGroup::new(&tree);
    let n = space.len();
    let fixed_by_all = orbits_of(n, &group.generators())
        .iter()
        .filter(|o| o.len() == 1)
        .count();
    let mut map: Vec<usize> = (0..n).collect();
    group.min_fix_witness(tree.root(), &mut map);
    let witness = Isometry::new(space, map)?;
    let count = witness.fixed_points().len();
    if count != fixed_by_all {
        return Err(Error::Inconsistent(format!(
            "witness fixes {count} points, {fixed_by_all} are fixed by every isometry"
        )));
    }
    Ok((count, witness))
}

/// Cyclic shift of the leaves below the first deepest inner node, identity
/// elsewhere. Moves at least two points.
pub fn nonrigid_witness(space: &Space) -> Result<Isometry> {
    space.require_size(2)?;
    let tree = ReprTree::build(space)?;
    let v = tree
        .inner_nodes()
        .filter(|&v| tree.node(v).children.iter().all(|&c| tree.node(c).is_leaf()))
        .min_by_key(|&v| (std::cmp::Reverse(tree.node(v).level), tree.node(v).leaves[0]))
        .expect("a tree with two leaves has an inner node");
    let leaves = &tree.node(v).leaves;
    let mut map: Vec<usize> = (0..space.len()).collect();
    for (i, &x) in leaves.iter().enumerate() {
        map[x] = leaves[(i + 1) % leaves.len()];
    }
    Isometry::new(space, map)
}

/// A self-isometry of one ball: `images[i]` is the image of the i-th
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialIsometry {
    pub ball: Ball,
    pub images: Vec<usize>,
}

/// Extends self-isometries of pairwise disjoint balls by the identity.
pub fn glue_partial_isometries(space: &Space, parts: &[PartialIsometry]) -> Result<Isometry> {
    let n = space.len();
    for (i, part) in parts.iter().enumerate() {
        if !is_ball(space, part.ball.members()) {
            return Err(Error::NotABall(part.ball.members().to_vec()));
        }
        for other in &parts[..i] {
            if !part.ball.is_disjoint(&other.ball) {
                return Err(Error::OverlappingBalls(
                    other.ball.members().to_vec(),
                    part.ball.members().to_vec(),
                ));
            }
        }
        let members = part.ball.members();
        let images: BTreeSet<usize> = part.images.iter().copied().collect();
        if part.images.len() != members.len() || images.iter().copied().ne(members.iter().copied()) {
            return Err(Error::NotIsometry(format!(
                "partial map on {members:?} is not a bijection of the ball"
            )));
        }
        for (a, &x) in members.iter().enumerate() {
            for (b, &y) in members.iter().enumerate().skip(a + 1) {
                if space.d(x, y) != space.d(part.images[a], part.images[b]) {
                    return Err(Error::NotIsometry(format!(
                        "partial map on {members:?} changes d({}, {})",
                        space.name(x),
                        space.name(y)
                    )));
                }
            }
        }
    }
    let mut map: Vec<usize> = (0..n).collect();
    for part in parts {
        for (&x, &y) in part.ball.members().iter().zip(&part.images) {
            map[x] = y;
        }
    }
    Isometry::new(space, map)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Criterion<C> {
    pub holds: bool,
    pub certificate: C,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub points: usize,
    pub iso_order: u128,
    pub min_fix: usize,
    pub in_r: bool,
    /// `min |Fix(g)| = |X| - 2`, certified by a minimizing isometry.
    pub min_fix_criterion: Criterion<Isometry>,
    /// `|Iso(X)| = 2`, certified by the order.
    pub order_criterion: Criterion<u128>,
    /// The tree is a strictly binary chain; certificate is the first node
    /// violating the shape, if any.
    pub shape_criterion: Criterion<Option<NodeId>>,
}

/// Evaluates the three equivalent descriptions of maximal rigidity and
/// fails if they disagree.
pub fn is_max_rigid(space: &Space) -> Result<RigidityReport> {
    space.require_ultrametric()?;
    space.require_size(2)?;
    let n = space.len();
    let tree = ReprTree::build(space)?;
    let (min_fix, witness) = min_fixed_points(space)?;
    let order = TreeGroup::new(&tree).order()?;
    let shape = tree.chain_shape();

    let by_fix = min_fix == n - 2;
    let by_order = order == 2;
    let by_shape = shape.is_ok();
    if by_fix != by_order || by_order != by_shape {
        return Err(Error::Inconsistent(format!(
            "rigidity criteria disagree: min-fix {by_fix}, order {by_order}, shape {by_shape}"
        )));
    }
    Ok(RigidityReport {
        points: n,
        iso_order: order,
        min_fix,
        in_r: by_fix,
        min_fix_criterion: Criterion {
            holds: by_fix,
            certificate: witness,
        },
        order_criterion: Criterion {
            holds: by_order,
            certificate: order,
        },
        shape_criterion: Criterion {
            holds: by_shape,
            certificate: shape.err(),
        },
    })
}

/// Membership in the family of maximally rigid spaces; false for
/// non-ultrametric spaces and single points.
pub fn in_r(space: &Space) -> Result<bool> {
    if !space.is_ultrametric() || space.len() < 2 {
        return Ok(false);
    }
    Ok(is_max_rigid(space)?.in_r)
}

fn require_in_r(space: &Space) -> Result<()> {
    if in_r(space)? {
        Ok(())
    } else {
        Err(Error::NotMaxRigid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeredityCheck {
    pub holds: bool,
    pub subsets_checked: usize,
    pub exhaustive: bool,
}

/// Checks that every subspace with at least two points of a maximally rigid
/// space is again maximally rigid. Exhaustive up to `exhaustive_cap`
/// points, otherwise along seeded random deletion chains.
pub fn hereditary_r_check(space: &Space, exhaustive_cap: usize) -> Result<HeredityCheck> {
    require_in_r(space)?;
    let n = space.len();
    let mut checked = 0;
    let mut check = |subset: &[usize]| -> Result<bool> {
        checked += 1;
        in_r(&space.subspace(subset)?)
    };
    if n <= exhaustive_cap && n < 64 {
        for mask in 1u64..(1u64 << n) {
            if mask.count_ones() < 2 {
                continue;
            }
            let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if !check(&subset)? {
                return Ok(HeredityCheck {
                    holds: false,
                    subsets_checked: checked,
                    exhaustive: true,
                });
            }
        }
        return Ok(HeredityCheck {
            holds: true,
            subsets_checked: checked,
            exhaustive: true,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    for _ in 0..32 {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for keep in (2..=n).rev() {
            let mut subset = order[..keep].to_vec();
            subset.sort_unstable();
            if !check(&subset)? {
                return Ok(HeredityCheck {
                    holds: false,
                    subsets_checked: checked,
                    exhaustive: false,
                });
            }
        }
    }
    Ok(HeredityCheck {
        holds: true,
        subsets_checked: checked,
        exhaustive: false,
    })
}

/// For a maximally rigid space and an ultrametric space of the same size,
/// the latter's spectrum is no larger and the former's has `|X|` elements.
pub fn spectrum_maximality(space_in_r: &Space, comparison: &Space) -> Result<bool> {
    if space_in_r.len() != comparison.len() {
        return Err(Error::InvalidArgument(format!(
            "sizes differ: {} vs {}",
            space_in_r.len(),
            comparison.len()
        )));
    }
    comparison.require_ultrametric()?;
    require_in_r(space_in_r)?;
    let top = space_in_r.spectrum().len();
    Ok(comparison.spectrum().len() <= top && top == space_in_r.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Dist;
    use crate::fixtures::*;

    fn brute_isometries(s: &Space) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = permutations(s.len())
            .into_iter()
            .filter(|p| (0..s.len()).all(|i| (0..s.len()).all(|j| s.d(i, j) == s.d(p[i], p[j]))))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(0).len(), 1);
        let mut p4 = permutations(4);
        assert_eq!(p4.len(), 24);
        p4.sort();
        p4.dedup();
        assert_eq!(p4.len(), 24);
    }

    #[test]
    fn group_examples() {
        let g = isometry_group(&r4()).unwrap();
        assert_eq!(g.order, 2);
        assert_eq!(g.generators, vec![Isometry::new(&r4(), vec![0, 1, 3, 2]).unwrap()]);
        assert_eq!(g.orbits, vec![vec![0], vec![1], vec![2, 3]]);

        let g = isometry_group(&e3()).unwrap();
        assert_eq!(g.order, 6);
        assert_eq!(g.full_list.unwrap().len(), 6);

        let g = isometry_group(&f3()).unwrap();
        assert_eq!(g.order, 4);
        assert_eq!(g.orbits, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn listed_groups_match_brute_force() {
        for s in [r4(), e3(), f3(), p2(), u6(), equilateral(5, Dist::from_int(2))] {
            let listed: Vec<Vec<usize>> = isometry_group(&s)
                .unwrap()
                .full_list
                .unwrap()
                .iter()
                .map(|g| g.as_slice().to_vec())
                .collect();
            assert_eq!(listed, brute_isometries(&s));
        }
    }

    #[test]
    fn cap_suppresses_listing() {
        let big = equilateral(8, Dist::from_int(1));
        let g = isometry_group(&big).unwrap();
        assert_eq!(g.order, 40320);
        assert!(g.full_list.is_none());
        assert_eq!(g.orbits.len(), 1);
    }

    #[test]
    fn min_fix_examples() {
        let (count, w) = min_fixed_points(&r4()).unwrap();
        assert_eq!(count, 2);
        assert_eq!(w.as_slice(), &[0, 1, 3, 2]);

        let (count, w) = min_fixed_points(&e3()).unwrap();
        assert_eq!(count, 0);
        assert_eq!(w.cycles().len(), 1);

        let (count, w) = min_fixed_points(&f3()).unwrap();
        assert_eq!(count, 0);
        assert_eq!(w.as_slice(), &[1, 0, 3, 2]);

        let (count, w) = min_fixed_points(&equilateral(1, Dist::from_int(1))).unwrap();
        assert_eq!(count, 1);
        assert!(w.is_identity());
    }

    #[test]
    fn nonrigid_witness_examples() {
        let g = nonrigid_witness(&p2()).unwrap();
        assert_eq!(g.as_slice(), &[1, 0]);
        let g = nonrigid_witness(&r4()).unwrap();
        assert_eq!(g.as_slice(), &[0, 1, 3, 2]);
        let g = nonrigid_witness(&e3()).unwrap();
        assert!(g.fixed_points().is_empty());
        assert!(nonrigid_witness(&equilateral(1, Dist::from_int(1))).is_err());
    }

    #[test]
    fn glue_examples() {
        let part = |ball: Vec<usize>, images: Vec<usize>| PartialIsometry {
            ball: Ball::new(ball),
            images,
        };
        let g = glue_partial_isometries(&r4(), &[part(vec![2, 3], vec![3, 2])]).unwrap();
        assert_eq!(g.as_slice(), &[0, 1, 3, 2]);

        let g = glue_partial_isometries(
            &f3(),
            &[part(vec![0, 1], vec![1, 0]), part(vec![2, 3], vec![3, 2])],
        )
        .unwrap();
        assert!(g.fixed_points().is_empty());

        assert!(glue_partial_isometries(&e3(), &[]).unwrap().is_identity());

        assert!(matches!(
            glue_partial_isometries(&r4(), &[part(vec![0, 1], vec![1, 0])]),
            Err(Error::NotABall(_))
        ));
        assert!(matches!(
            glue_partial_isometries(
                &r4(),
                &[part(vec![2, 3], vec![3, 2]), part(vec![1, 2, 3], vec![1, 3, 2])]
            ),
            Err(Error::OverlappingBalls(..))
        ));
        assert!(matches!(
            glue_partial_isometries(&r4(), &[part(vec![1, 2, 3], vec![2, 1, 3])]),
            Err(Error::NotIsometry(_))
        ));
    }

    #[test]
    fn max_rigid_examples() {
        let r = is_max_rigid(&r4()).unwrap();
        assert!(r.in_r && r.min_fix_criterion.holds && r.order_criterion.holds);
        assert_eq!(r.shape_criterion.certificate, None);

        let f = is_max_rigid(&f3()).unwrap();
        assert!(!f.in_r);
        assert_eq!((f.iso_order, f.min_fix), (4, 0));
        assert!(f.shape_criterion.certificate.is_some());

        let e = is_max_rigid(&e3()).unwrap();
        assert!(!e.in_r);
        assert_eq!(e.shape_criterion.certificate, Some(0));

        assert!(is_max_rigid(&nu3()).is_err());
        assert!(!in_r(&equilateral(1, Dist::from_int(1))).unwrap());
    }

    #[test]
    fn heredity_examples() {
        let h = hereditary_r_check(&r4(), 12).unwrap();
        assert!(h.holds && h.exhaustive);
        assert_eq!(h.subsets_checked, 11);
        let h = hereditary_r_check(&p2(), 12).unwrap();
        assert_eq!(h.subsets_checked, 1);
        assert!(h.holds);
        let h = hereditary_r_check(&r4(), 2).unwrap();
        assert!(h.holds && !h.exhaustive);
        assert_eq!(hereditary_r_check(&f3(), 12).unwrap_err(), Error::NotMaxRigid);
    }

    #[test]
    fn spectrum_maximality_examples() {
        assert!(spectrum_maximality(&r4(), &equilateral(4, Dist::from_int(1))).unwrap());
        assert!(spectrum_maximality(&r4(), &f3()).unwrap());
        assert!(spectrum_maximality(&r4(), &r4()).unwrap());
        assert!(spectrum_maximality(&r4(), &e3()).is_err());
        assert!(spectrum_maximality(&f3(), &r4()).is_err());
    }
}
