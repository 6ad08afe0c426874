//! Simplex grids: all points of the probability simplex whose coordinates are
//! multiples of `1/k`.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::prob::{Alphabet, Pmf};

/// `C(n, r)`, saturating at `u128::MAX`.
pub(crate) fn binomial(n: u128, r: u128) -> u128 {
    let r = r.min(n.saturating_sub(r));
    let mut c: u128 = 1;
    for i in 0..r {
        c = match c.checked_mul(n - i) {
            Some(x) => x / (i + 1),
            None => return u128::MAX,
        };
    }
    c
}

/// Number of points of the `dim`-simplex grid at resolution `k`.
pub fn grid_count(dim: usize, k: usize) -> u128 {
    if dim == 0 {
        return 0;
    }
    binomial((k + dim - 1) as u128, (dim - 1) as u128)
}

/// Number of points of a product of simplex grids.
pub(crate) fn product_count(dims: &[usize], k: usize) -> u128 {
    dims.iter().fold(1u128, |acc, &d| acc.saturating_mul(grid_count(d, k)))
}

/// Compositions of `k` into `dim` parts scaled by `1/k`, lexicographic.
pub(crate) fn compositions(dim: usize, k: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, left: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() + 1 == dim {
            cur.push(left);
            out.push(cur.iter().map(|&a| a as f64 / k as f64).collect());
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(dim, left - a, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if dim > 0 {
        rec(dim, k, k, &mut Vec::with_capacity(dim), &mut out);
    }
    out
}

/// All points of the `dim`-simplex at resolution `k`, lexicographic in the
/// coordinates. Fails when there are more than `cap` points.
///
/// ```
/// use relaycap::optimizer::simplex_grid;
/// let g = simplex_grid(2, 2, 100).unwrap();
/// let pts: Vec<_> = g.iter().map(|p| p.probs().to_vec()).collect();
/// assert_eq!(pts, vec![vec![0.0, 1.0], vec![0.5, 0.5], vec![1.0, 0.0]]);
/// ```
pub fn simplex_grid(dim: usize, k: usize, cap: usize) -> Result<Vec<Pmf>> {
    if dim == 0 || k == 0 {
        return Err(Error::Config(format!(
            "simplex grid needs dim >= 1 and k >= 1 (got {dim}, {k})"
        )));
    }
    let count = grid_count(dim, k);
    if count > cap as u128 {
        return Err(Error::GridCap {
            count,
            cap: cap as u128,
        });
    }
    let a = Alphabet::new("p", dim)?;
    compositions(dim, k)
        .into_iter()
        .map(|p| Pmf::new(a.clone(), p))
        .collect()
}

/// Largest divisor of `k` whose product grid fits in `cap` points.
pub(crate) fn choose_resolution(dims: &[usize], k: usize, cap: usize) -> Option<usize> {
    (1..=k)
        .rev()
        .filter(|d| k.is_multiple_of(*d))
        .find(|&d| product_count(dims, d) <= cap as u128)
}

/// A uniformly random grid point (stars and bars).
pub(crate) fn random_point<R: Rng>(dim: usize, k: usize, rng: &mut R) -> Vec<f64> {
    if dim == 1 {
        return vec![1.0];
    }
    let mut bars = sample(rng, k + dim - 1, dim - 1).into_vec();
    bars.sort_unstable();
    let mut out = Vec::with_capacity(dim);
    let mut prev = 0usize;
    for (i, &b) in bars.iter().enumerate() {
        let start = if i == 0 { 0 } else { prev + 1 };
        out.push((b - start) as f64 / k as f64);
        prev = b;
    }
    let start = prev + 1;
    out.push((k + dim - 1 - start) as f64 / k as f64);
    out
}
