//! Weak similarity: bijections that intertwine the distances of two spaces
//! through a strictly increasing bijection of their spectra.
//!
//! The spectrum bijection is forced (sorted order), so weak similarity of
//! ultrametric spaces reduces to isometry after replacing every distance
//! by its rank in the spectrum.

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::rigidity::in_r;
use crate::space::Space;
use crate::tree::{isometric, ReprTree};

/// A space together with the rank of each positive spectrum value.
#[derive(Debug, Clone)]
pub struct RankSpace {
    pub base: Space,
    /// `(value, rank)` with ranks `1..=k` in ascending order of value.
    pub ranks: Vec<(Dist, u64)>,
}

impl RankSpace {
    pub fn new(space: &Space) -> Result<RankSpace> {
        space.require_ultrametric()?;
        let ranks = space
            .spectrum()
            .into_iter()
            .filter(|v| !v.is_zero())
            .zip(1..)
            .collect();
        Ok(RankSpace {
            base: space.clone(),
            ranks,
        })
    }

    pub fn rank(&self, v: Dist) -> u64 {
        if v.is_zero() {
            return 0;
        }
        let i = self
            .ranks
            .binary_search_by(|(x, _)| x.cmp(&v))
            .expect("value is in the spectrum");
        self.ranks[i].1
    }

    /// The base space with each distance replaced by its rank.
    pub fn transformed(&self) -> Result<Space> {
        Space::from_fn_named(self.base.names().to_vec(), |i, j| {
            Dist::from_int(self.rank(self.base.d(i, j)))
        })
    }
}

pub fn rank_transform(space: &Space) -> Result<Space> {
    RankSpace::new(space)?.transformed()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeakSimilarity {
    /// `phi[i]` is the image in `y` of point `i` of `x`.
    pub phi: Vec<usize>,
    /// The spectrum bijection as `(value in x, value in y)` pairs, 0 included.
    pub f: Vec<(Dist, Dist)>,
}

/// Decides weak similarity of two ultrametric spaces.
pub fn weakly_similar(x: &Space, y: &Space) -> Result<Option<WeakSimilarity>> {
    x.require_ultrametric()?;
    y.require_ultrametric()?;
    let (sx, sy) = (x.spectrum(), y.spectrum());
    if sx.len() != sy.len() || x.len() != y.len() {
        return Ok(None);
    }
    let Some(phi) = isometric(&rank_transform(x)?, &rank_transform(y)?)? else {
        return Ok(None);
    };
    let f: Vec<(Dist, Dist)> = sx.into_iter().zip(sy).collect();
    let image = |v: Dist| f.iter().find(|p| p.0 == v).expect("spectrum value").1;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            if image(x.d(i, j)) != y.d(phi[i], phi[j]) {
                return Err(Error::Inconsistent("weak similarity witness fails".into()));
            }
        }
    }
    Ok(Some(WeakSimilarity { phi, f }))
}

/// Maximal rigidity is invariant under weak similarity: given `x` maximally
/// rigid and `y` weakly similar to it, reports whether `y` is maximally rigid.
pub fn weaksim_preserves_r(x: &Space, y: &Space) -> Result<bool> {
    if !in_r(x)? {
        return Err(Error::NotMaxRigid);
    }
    y.require_ultrametric()?;
    if weakly_similar(x, y)?.is_none() {
        return Err(Error::NotWeaklySimilar);
    }
    in_r(y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassSize {
    pub weakly_similar: bool,
    pub trees_isomorphic_unlabeled: bool,
    pub sizes_equal: bool,
}

/// For two maximally rigid spaces, weak similarity, isomorphism of the
/// unlabeled representing trees and equal size all coincide.
pub fn r_class_size_criterion(x: &Space, y: &Space) -> Result<ClassSize> {
    if !in_r(x)? || !in_r(y)? {
        return Err(Error::NotMaxRigid);
    }
    let out = ClassSize {
        weakly_similar: weakly_similar(x, y)?.is_some(),
        trees_isomorphic_unlabeled: ReprTree::build(x)?.shape_code()
            == ReprTree::build(y)?.shape_code(),
        sizes_equal: x.len() == y.len(),
    };
    if out.weakly_similar != out.trees_isomorphic_unlabeled || out.weakly_similar != out.sizes_equal {
        return Err(Error::Inconsistent(format!("size criterion disagrees: {out:?}")));
    }
    Ok(out)
}
