//! Small named spaces used throughout the tests and the documentation.

use crate::dist::Dist;
use crate::space::Space;

fn named(names: &[&str], f: impl FnMut(usize, usize) -> Dist) -> Space {
    Space::from_fn_named(names.iter().map(|s| s.to_string()).collect(), f)
        .expect("fixture tables are well formed")
}

fn d(v: u64) -> Dist {
    Dist::from_int(v)
}

/// Two points at distance 1.
pub fn p2() -> Space {
    named(&["a", "b"], |_, _| d(1))
}

/// Three points, all at distance 1.
pub fn e3() -> Space {
    equilateral(3, d(1))
}

pub fn equilateral(n: usize, dist: Dist) -> Space {
    Space::from_fn(n, |_, _| dist).expect("equilateral table is well formed")
}

/// Four points whose representing tree is a strictly binary chain:
/// `p1` at distance 3 from everything, `p2` at distance 2 from `p3, p4`,
/// and `d(p3, p4) = 1`.
pub fn r4() -> Space {
    named(&["p1", "p2", "p3", "p4"], |i, j| match (i, j) {
        (0, _) => d(3),
        (1, _) => d(2),
        _ => d(1),
    })
}

/// Four points in two pairs: `d(a,b) = 1`, `d(c,d) = 2`, every cross
/// distance 4. Spectrum size equals the point count, yet the space has
/// four self-isometries.
pub fn f3() -> Space {
    named(&["a", "b", "c", "d"], |i, j| match (i, j) {
        (0, 1) => d(1),
        (2, 3) => d(2),
        _ => d(4),
    })
}

/// A metric triangle with sides 4, 2, 3 that is not ultrametric.
pub fn nu3() -> Space {
    named(&["x1", "x2", "x3"], |i, j| match (i, j) {
        (0, 1) => d(4),
        (0, 2) => d(2),
        _ => d(3),
    })
}

/// An ultrametric space with six balls: `a, b` at distance 2 from
/// everything and `d(c, d) = 1`.
pub fn u6() -> Space {
    named(&["a", "b", "c", "d"], |i, j| match (i, j) {
        (2, 3) => d(1),
        _ => d(2),
    })
}
