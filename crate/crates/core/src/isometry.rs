use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::Space;

/// A distance-preserving bijection, stored as `map[i]` = image of point `i`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Isometry {
    map: Vec<usize>,
}

impl Isometry {
    pub fn identity(n: usize) -> Isometry {
        Isometry {
            map: (0..n).collect(),
        }
    }

    /// A self-isometry of `space`, checked against the full distance table.
    pub fn new(space: &Space, map: Vec<usize>) -> Result<Isometry> {
        Isometry::between(space, space, map)
    }

    /// An isometry from `x` onto `y`.
    pub fn between(x: &Space, y: &Space, map: Vec<usize>) -> Result<Isometry> {
        if x.len() != y.len() || map.len() != x.len() {
            return Err(Error::NotIsometry(format!(
                "sizes differ: {} points, {} targets, map of length {}",
                x.len(),
                y.len(),
                map.len()
            )));
        }
        let mut hit = vec![false; y.len()];
        for &m in &map {
            if m >= y.len() || std::mem::replace(&mut hit[m], true) {
                return Err(Error::NotIsometry("map is not a bijection".into()));
            }
        }
        for i in 0..x.len() {
            for j in (i + 1)..x.len() {
                if x.d(i, j) != y.d(map[i], map[j]) {
                    return Err(Error::NotIsometry(format!(
                        "d({}, {}) = {} but d({}, {}) = {}",
                        x.name(i),
                        x.name(j),
                        x.d(i, j),
                        y.name(map[i]),
                        y.name(map[j]),
                        y.d(map[i], map[j])
                    )));
                }
            }
        }
        Ok(Isometry { map })
    }

    /// Wraps a map without checking it. Callers guarantee validity.
    pub(crate) fn from_map_unchecked(map: Vec<usize>) -> Isometry {
        Isometry { map }
    }

    pub fn apply(&self, p: usize) -> usize {
        self.map[p]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&i| self.map[i] == i).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.fixed_points().len() == self.map.len()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            map: other.map.iter().map(|&p| self.map[p]).collect(),
        }
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.map.len()];
        let mut out = Vec::new();
        for start in 0..self.map.len() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.map[p];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle notation using the point names of `space`, `id` for the identity.
    pub fn display_with(&self, space: &Space) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "id".to_string();
        }
        cycles
            .iter()
            .map(|c| {
                let names: Vec<&str> = c.iter().map(|&p| space.name(p)).collect();
                format!("({})", names.join(" "))
            })
            .collect()
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Isometry{:?}", self.map)
    }
}
