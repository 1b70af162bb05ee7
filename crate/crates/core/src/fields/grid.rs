use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniform periodic grid on `[−L, L)^N` with `n` points per axis.
///
/// Node `j` on each axis sits at `−L + j·h`, `h = 2L/n`; values are stored
/// row-major with axis 0 slowest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub half_width: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(dim: usize, half_width: f64, points: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidParameter(format!("grid dimension {dim} not in 1..=3")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidParameter(format!("half width {half_width} must be positive")));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "points per axis {points} must be a power of two ≥ 8"
            )));
        }
        if points.checked_pow(dim as u32).is_none_or(|t| t > 1 << 28) {
            return Err(Error::InvalidParameter("grid too large".into()));
        }
        Ok(GridSpec {
            dim,
            half_width,
            points,
        })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `h^N`, the weight of one node in a Riemann sum.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Spacing of the dual (frequency) grid, `π/L`.
    pub fn dual_spacing(&self) -> f64 {
        PI / self.half_width
    }

    /// `(π/L)^N`.
    pub fn dual_weight(&self) -> f64 {
        self.dual_spacing().powi(self.dim as i32)
    }

    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Per-axis indices of a flat index.
    pub fn unflatten(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0; 3];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.points;
            idx /= self.points;
        }
        out
    }

    pub fn flatten(&self, ix: &[usize]) -> usize {
        ix.iter().take(self.dim).fold(0, |acc, &i| acc * self.points + i)
    }

    pub fn node(&self, idx: usize) -> Vec<f64> {
        let ix = self.unflatten(idx);
        (0..self.dim).map(|a| self.coord(ix[a])).collect()
    }

    /// Signed frequency index of DFT bin `k`: `k` for `k < n/2`, else `k − n`.
    pub fn signed_bin(&self, k: usize) -> i64 {
        if k < self.points / 2 {
            k as i64
        } else {
            k as i64 - self.points as i64
        }
    }

    /// Angular frequency of DFT bin `k` on one axis.
    pub fn freq(&self, k: usize) -> f64 {
        self.signed_bin(k) as f64 * self.dual_spacing()
    }

    /// Frequency vector of a flat DFT-ordered index.
    pub fn freq_vec(&self, idx: usize) -> [f64; 3] {
        let ix = self.unflatten(idx);
        let mut w = [0.0; 3];
        for a in 0..self.dim {
            w[a] = self.freq(ix[a]);
        }
        w
    }

    pub fn is_nyquist(&self, k: usize) -> bool {
        k == self.points / 2
    }

    /// Largest resolved angular frequency `π n/(2L)`.
    pub fn nyquist(&self) -> f64 {
        self.dual_spacing() * (self.points / 2) as f64
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} L={} n={}", self.dim, self.half_width, self.points)
    }
}

/// A multi-index `α = (α_1, …, α_N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// `e_axis` scaled by `order`.
    pub fn axis(dim: usize, axis: usize, order: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = order;
        MultiIndex(v)
    }

    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn plus(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// All multi-indices in `dim` variables with `|α| = order`, in lexicographic order.
    pub fn all_of_order(dim: usize, order: usize) -> Vec<MultiIndex> {
        fn rec(dim: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() + 1 == dim {
                cur.push(left);
                out.push(MultiIndex(cur.clone()));
                cur.pop();
                return;
            }
            for a in (0..=left).rev() {
                cur.push(a);
                rec(dim, left - a, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(dim, order, &mut Vec::new(), &mut out);
        out
    }

    /// All `β ≤ α` componentwise, with the multinomial weight `Π C(α_i, β_i)`.
    pub fn sub_indices(&self) -> Vec<(MultiIndex, f64)> {
        let mut out = vec![(Vec::new(), 1.0)];
        for &a in &self.0 {
            let mut next = Vec::new();
            for (prefix, w) in &out {
                for b in 0..=a {
                    let mut p: Vec<usize> = prefix.clone();
                    p.push(b);
                    next.push((p, w * binomial(a, b)));
                }
            }
            out = next;
        }
        out.into_iter().map(|(v, w)| (MultiIndex(v), w)).collect()
    }

    pub fn minus(&self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GridSpec::new(1, 16.0, 1024).is_ok());
        assert!(GridSpec::new(4, 1.0, 8).is_err());
        assert!(GridSpec::new(1, 1.0, 100).is_err());
        assert!(GridSpec::new(1, 1.0, 4).is_err());
        assert!(GridSpec::new(1, -1.0, 8).is_err());
    }

    #[test]
    fn flatten_roundtrip() {
        let g = GridSpec::new(3, 1.0, 8).unwrap();
        for idx in [0, 1, 9, 511, 300] {
            assert_eq!(g.flatten(&g.unflatten(idx)), idx);
        }
        assert_eq!(g.node(0), vec![-1.0; 3]);
    }

    #[test]
    fn multi_index_enumeration() {
        assert_eq!(MultiIndex::all_of_order(2, 2).len(), 3);
        assert_eq!(MultiIndex::all_of_order(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_of_order(1, 3), vec![MultiIndex(vec![3])]);
        let subs = MultiIndex(vec![2, 1]).sub_indices();
        assert_eq!(subs.len(), 6);
        let total: f64 = subs.iter().map(|(_, w)| w).sum();
        assert_eq!(total, 8.0);
    }
}
