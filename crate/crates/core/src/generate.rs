//! Seeded generators for test corpora.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::space::{Kind, Space};
use crate::tree::{random_tree, TreeShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// Maximally rigid: a chain-shaped tree with random distinct labels.
    ChainR,
    /// Ultrametric with a random tree shape.
    RandomTree,
    /// A metric that is not ultrametric.
    RandomMetricNonUltra,
}

const NON_ULTRA_ATTEMPTS: usize = 1000;

/// `count` distinct positive integers below `4 * count + 4`, as distances.
fn label_pool(count: usize, rng: &mut ChaCha8Rng) -> Vec<Dist> {
    let mut values: Vec<u64> = (1..(4 * count as u64 + 4)).collect();
    values.shuffle(rng);
    values.truncate(count.max(1));
    values.into_iter().map(Dist::from_int).collect()
}

pub fn generate(kind: GenKind, n: usize, seed: u64) -> Result<Space> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        GenKind::ChainR => {
            let pool = label_pool(n.saturating_sub(1), &mut rng);
            random_tree(n, &pool, TreeShape::Chain, rng.gen())?.to_space()
        }
        GenKind::RandomTree => {
            let pool_size = rng.gen_range(1..=n.max(2) - 1);
            let pool = label_pool(n.max(2) - 1, &mut rng);
            let max_children = rng.gen_range(2..=4);
            // small pools give many equal labels; fall back to the full pool
            // when the drawn shape is too deep for them
            let seed = rng.gen();
            let shape = TreeShape::Random { max_children };
            match random_tree(n, &pool[..pool_size], shape, seed) {
                Err(Error::ShallowPool { .. }) => random_tree(n, &pool, shape, seed)?.to_space(),
                other => other?.to_space(),
            }
        }
        GenKind::RandomMetricNonUltra => {
            if n < 3 {
                return Err(Error::InvalidArgument(
                    "every metric on fewer than 3 points is ultrametric".into(),
                ));
            }
            for _ in 0..NON_ULTRA_ATTEMPTS {
                let space = random_metric(n, &mut rng)?;
                if space.kind() == Kind::Metric {
                    return Ok(space);
                }
            }
            Err(Error::InvalidArgument(format!(
                "no non-ultrametric metric found in {NON_ULTRA_ATTEMPTS} attempts"
            )))
        }
    }
}

/// A random symmetric integer table repaired into a metric by shortest-path
/// closure.
pub fn random_metric(n: usize, rng: &mut ChaCha8Rng) -> Result<Space> {
    let mut w = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.gen_range(1..=10);
            w[i][j] = v;
            w[j][i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = w[i][k] + w[k][j];
                if via < w[i][j] {
                    w[i][j] = via;
                }
            }
        }
    }
    Space::from_fn(n, |i, j| Dist::from_int(w[i][j]))
}
