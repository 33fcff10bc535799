//! Finite (ultra)metric spaces with exact distance tables.

use std::collections::HashSet;

use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};

/// Three point indices `(x, y, z)` for which `d(x, y)` exceeds the bound
/// given by the path through `z`.
pub type Triple = (usize, usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    /// Some triangle inequality fails.
    Invalid,
    /// A metric for which the strong triangle inequality fails somewhere.
    Metric,
    Ultrametric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub kind: Kind,
    /// Lexicographically first violating triple, if any.
    pub witness: Option<Triple>,
    /// All violations of the inequality that determined `kind`, in
    /// lexicographic order (`x < y`, then `z`).
    pub violations: Vec<Triple>,
}

/// A finite set of named points with a symmetric table of exact distances.
///
/// Construction rejects asymmetric tables, negative entries, nonzero
/// diagonals and zero off-diagonal entries. The triangle inequalities are
/// not enforced; [`Space::validate`] classifies the table instead.
#[derive(Clone, PartialEq, Eq)]
pub struct Space {
    names: Vec<String>,
    table: Vec<Dist>,
    validation: Validation,
}

impl std::fmt::Debug for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Space")
            .field("names", &self.names)
            .field("kind", &self.validation.kind)
            .finish()
    }
}

impl Space {
    pub fn new(names: Vec<String>, rows: Vec<Vec<Dist>>) -> Result<Space> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicatePoint(name.clone()));
            }
        }
        if rows.len() != n {
            return Err(Error::SizeMismatch {
                points: n,
                rows: rows.len(),
                row: 0,
                cols: rows.first().map_or(0, Vec::len),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    points: n,
                    rows: n,
                    row: i,
                    cols: row.len(),
                });
            }
        }
        for i in 0..n {
            if !rows[i][i].is_zero() {
                return Err(Error::NonzeroDiagonal(i));
            }
            for j in (i + 1)..n {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Asymmetric(i, j));
                }
                if rows[i][j].is_zero() {
                    return Err(Error::ZeroOffDiagonal(i, j));
                }
            }
        }
        let table: Vec<Dist> = rows.into_iter().flatten().collect();
        let validation = classify(n, &table);
        Ok(Space {
            names,
            table,
            validation,
        })
    }

    /// Builds a space from a distance function on indices `0..n`, naming
    /// points `p1..pn`. Only `f(i, j)` with `i < j` is consulted.
    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> Dist) -> Result<Space> {
        let names = (1..=n).map(|i| format!("p{i}")).collect();
        Space::from_fn_named(names, f)
    }

    pub fn from_fn_named(
        names: Vec<String>,
        mut f: impl FnMut(usize, usize) -> Dist,
    ) -> Result<Space> {
        let n = names.len();
        let mut rows = vec![vec![Dist::ZERO; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        Space::new(names, rows)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> Dist {
        self.table[i * self.len() + j]
    }

    pub fn rows(&self) -> Vec<Vec<Dist>> {
        self.table.chunks(self.len()).map(<[Dist]>::to_vec).collect()
    }

    pub fn kind(&self) -> Kind {
        self.validation.kind
    }

    pub fn is_ultrametric(&self) -> bool {
        self.kind() == Kind::Ultrametric
    }

    pub fn validate(&self) -> &Validation {
        &self.validation
    }

    /// Fails with the witness triple unless the space is ultrametric.
    pub fn require_ultrametric(&self) -> Result<()> {
        match self.validation.kind {
            Kind::Ultrametric => Ok(()),
            Kind::Metric => Err(Error::NotUltrametric(self.validation.witness.unwrap())),
            Kind::Invalid => Err(Error::NotMetric(self.validation.witness.unwrap())),
        }
    }

    pub fn require_metric(&self) -> Result<()> {
        match self.validation.kind {
            Kind::Invalid => Err(Error::NotMetric(self.validation.witness.unwrap())),
            _ => Ok(()),
        }
    }

    pub fn require_size(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            return Err(Error::TooFewPoints {
                needed,
                got: self.len(),
            });
        }
        Ok(())
    }

    pub fn all_points(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    /// Distinct distance values in ascending order, 0 included.
    pub fn spectrum(&self) -> Vec<Dist> {
        let mut values = self.table.clone();
        values.sort_unstable();
        values.dedup();
        values
    }

    pub fn diameter(&self, subset: &[usize]) -> Result<Dist> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        self.check_points(subset)?;
        let mut diam = Dist::ZERO;
        for (a, &x) in subset.iter().enumerate() {
            for &y in &subset[a + 1..] {
                diam = diam.max(self.d(x, y));
            }
        }
        Ok(diam)
    }

    fn check_points(&self, subset: &[usize]) -> Result<()> {
        match subset.iter().find(|&&p| p >= self.len()) {
            Some(p) => Err(Error::UnknownPoint(format!("#{p}"))),
            None => Ok(()),
        }
    }

    /// The graph `G_{r,X}` whose edges are the pairs at distance exactly `r`.
    pub fn level_graph(&self, r: Dist) -> Result<LevelGraph> {
        if r.is_zero() || self.spectrum().binary_search(&r).is_err() {
            return Err(Error::NotInSpectrum(r.to_string()));
        }
        let n = self.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.d(i, j) == r {
                    edges.push((i, j));
                }
            }
        }
        Ok(LevelGraph {
            vertices: self.all_points(),
            edges,
            level: r,
            partition: None,
        })
    }

    /// The diametrical graph of `subset` together with its complete
    /// multipartite block structure.
    ///
    /// Blocks are the connected components of the graph joining points at
    /// distance strictly below the diameter, ordered by their smallest point.
    pub fn diametrical_partition(&self, subset: &[usize]) -> Result<LevelGraph> {
        let mut vertices = subset.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        self.check_points(&vertices)?;
        if vertices.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: vertices.len(),
            });
        }
        if !self.is_ultrametric() {
            if let Some(t) = first_violation(self, &vertices, true) {
                return Err(Error::NotUltrametric(t));
            }
        }
        let diam = self.diameter(&vertices)?;
        let m = vertices.len();

        // component labels over positions in `vertices`
        let mut comp = vec![usize::MAX; m];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for start in 0..m {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = blocks.len();
            comp[start] = id;
            let mut stack = vec![start];
            let mut block = Vec::new();
            while let Some(a) = stack.pop() {
                block.push(vertices[a]);
                for b in 0..m {
                    if comp[b] == usize::MAX && self.d(vertices[a], vertices[b]) < diam {
                        comp[b] = id;
                        stack.push(b);
                    }
                }
            }
            block.sort_unstable();
            blocks.push(block);
        }

        let mut edges = Vec::new();
        for a in 0..m {
            for b in (a + 1)..m {
                let on_level = self.d(vertices[a], vertices[b]) == diam;
                if on_level != (comp[a] != comp[b]) {
                    return Err(Error::NotMultipartite);
                }
                if on_level {
                    edges.push((vertices[a], vertices[b]));
                }
            }
        }
        if blocks.len() < 2 {
            return Err(Error::NotMultipartite);
        }
        Ok(LevelGraph {
            vertices,
            edges,
            level: diam,
            partition: Some(blocks),
        })
    }

    pub fn gomory_hu_check(&self) -> Result<GomoryHu> {
        self.require_ultrametric()?;
        let spectrum_size = self.spectrum().len();
        Ok(GomoryHu {
            spectrum_size,
            points: self.len(),
            holds: spectrum_size <= self.len(),
        })
    }

    /// The induced subspace on `subset`, keeping names; indices are
    /// renumbered in the order given.
    pub fn subspace(&self, subset: &[usize]) -> Result<Space> {
        self.check_points(subset)?;
        let names = subset.iter().map(|&i| self.names[i].clone()).collect();
        Space::from_fn_named(names, |a, b| self.d(subset[a], subset[b]))
    }

    /// Same distances under new point names.
    pub fn renamed(&self, names: Vec<String>) -> Result<Space> {
        if names.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} names, got {}",
                self.len(),
                names.len()
            )));
        }
        Space::from_fn_named(names, |a, b| self.d(a, b))
    }

    /// Every distance multiplied by `factor`.
    pub fn scaled(&self, factor: Dist) -> Result<Space> {
        if factor.is_zero() {
            return Err(Error::InvalidArgument("scale factor must be positive".into()));
        }
        let n = self.len();
        let mut rows = vec![vec![Dist::ZERO; n]; n];
        for i in 0..n {
            for j in 0..n {
                rows[i][j] = self.d(i, j).checked_mul(&factor).ok_or_else(|| {
                    Error::InvalidArgument("distance overflow while scaling".into())
                })?;
            }
        }
        Space::new(self.names.clone(), rows)
    }

    /// Reorders points: point `i` of the result is point `order[i]` here.
    pub fn permuted(&self, order: &[usize]) -> Result<Space> {
        let mut check = order.to_vec();
        check.sort_unstable();
        if check != self.all_points() {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        self.subspace(order)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GomoryHu {
    /// `|Sp(X)|` counting 0.
    pub spectrum_size: usize,
    pub points: usize,
    pub holds: bool,
}

/// `G_{r,X}`: points joined when their distance is exactly `level`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelGraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub level: Dist,
    /// Blocks `X_1..X_k` of the complete multipartite structure, when known.
    pub partition: Option<Vec<Vec<usize>>>,
}

impl LevelGraph {
    /// `G'_{r,X}`: the same graph with isolated vertices dropped.
    pub fn reduced(&self) -> LevelGraph {
        let mut vertices: Vec<usize> = self.edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        LevelGraph {
            vertices,
            edges: self.edges.clone(),
            level: self.level,
            partition: None,
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// If the graph is a star `K_{1,m}` with `m >= 1`, its center and rays.
    /// For `K_{1,1}` the smaller endpoint is reported as center.
    pub fn as_star(&self) -> Option<(usize, Vec<usize>)> {
        let g = self.reduced();
        if g.edges.is_empty() || g.edges.len() + 1 != g.vertices.len() {
            return None;
        }
        let center = *g.vertices.iter().find(|&&v| g.degree(v) == g.edges.len())?;
        let rays = g.vertices.iter().copied().filter(|&v| v != center).collect();
        Some((center, rays))
    }
}

fn classify(n: usize, table: &[Dist]) -> Validation {
    let d = |i: usize, j: usize| table[i * n + j];
    let mut triangle = Vec::new();
    let mut strong = Vec::new();
    for x in 0..n {
        for y in (x + 1)..n {
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let (a, b, c) = (d(x, y), d(x, z), d(z, y));
                match b.checked_add(&c) {
                    Some(sum) if a > sum => triangle.push((x, y, z)),
                    _ => {}
                }
                if a > b.max(c) {
                    strong.push((x, y, z));
                }
            }
        }
    }
    if !triangle.is_empty() {
        Validation {
            kind: Kind::Invalid,
            witness: Some(triangle[0]),
            violations: triangle,
        }
    } else if !strong.is_empty() {
        Validation {
            kind: Kind::Metric,
            witness: Some(strong[0]),
            violations: strong,
        }
    } else {
        Validation {
            kind: Kind::Ultrametric,
            witness: None,
            violations: Vec::new(),
        }
    }
}

fn first_violation(space: &Space, subset: &[usize], strong: bool) -> Option<Triple> {
    for (a, &x) in subset.iter().enumerate() {
        for &y in &subset[a + 1..] {
            for &z in subset {
                if z == x || z == y {
                    continue;
                }
                let (dxy, dxz, dzy) = (space.d(x, y), space.d(x, z), space.d(z, y));
                let bad = if strong {
                    dxy > dxz.max(dzy)
                } else {
                    dxz.checked_add(&dzy).is_some_and(|s| dxy > s)
                };
                if bad {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}
