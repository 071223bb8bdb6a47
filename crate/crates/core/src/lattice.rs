//! Multi-indices on `Z^d`, Japanese-bracket weights and weighted sequence norms.
//!
//! Coefficient boxes are the centered cubes `{-N..N}^d` stored in row-major
//! order (last coordinate fastest).

use serde::{Deserialize, Serialize};

use crate::distributions::CoefficientField;
use crate::error::{Error, Result};

pub const MAX_DIM: usize = 3;

/// A point of the integer lattice `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        MultiIndex(coords.into())
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// `|k|^2`, accumulated exactly in integers.
    pub fn norm_sq(&self) -> i64 {
        norm_sq(&self.0)
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    pub fn neg(&self) -> Self {
        MultiIndex(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &MultiIndex) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl From<&[i64]> for MultiIndex {
    fn from(c: &[i64]) -> Self {
        MultiIndex(c.to_vec())
    }
}

#[inline]
pub fn norm_sq(k: &[i64]) -> i64 {
    k.iter().map(|c| c * c).sum()
}

/// Sobolev weight exponent `s` for `<k>^s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight(pub f64);

impl Weight {
    pub fn at(self, k: &MultiIndex) -> f64 {
        bracket(k, self.0)
    }
}

/// `<k>^s = (1 + |k|^2)^(s/2)`.
pub fn bracket(k: &MultiIndex, s: f64) -> f64 {
    bracket_from_norm_sq(k.norm_sq(), s)
}

#[inline]
pub fn bracket_from_norm_sq(norm_sq: i64, s: f64) -> f64 {
    if s == 0.0 {
        return 1.0;
    }
    ((1 + norm_sq) as f64).powf(0.5 * s)
}

/// `<x>^s` for a real vector.
pub fn bracket_real(x: &[f64], s: f64) -> f64 {
    let n2: f64 = x.iter().map(|v| v * v).sum();
    (1.0 + n2).powf(0.5 * s)
}

/// `(Σ_box |a_k|^p <k>^{ps})^{1/p}` over the stored box, for `p ∈ {1, 2}`.
pub fn weighted_norm(a: &CoefficientField, s: f64, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("norm exponent p = {p} < 1")));
    }
    let shape = a.shape();
    if p == 2.0 {
        let total: f64 = a
            .data()
            .iter()
            .enumerate()
            .map(|(i, c)| c.norm_sqr() * bracket_from_norm_sq(shape.norm_sq_at(i), 2.0 * s))
            .sum();
        Ok(total.sqrt())
    } else if p == 1.0 {
        Ok(a.data().iter().enumerate().map(|(i, c)| c.norm() * bracket_from_norm_sq(shape.norm_sq_at(i), s)).sum())
    } else {
        Err(Error::UnsupportedExponent(p))
    }
}

/// Both sides of `<y>^r <= 2^{|r|/2} <x>^r <y-x>^{|r|}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeetreBound {
    pub lhs: f64,
    pub rhs: f64,
}

impl PeetreBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn peetre_bound(x: &[f64], y: &[f64], r: f64) -> PeetreBound {
    let diff: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    let lhs = bracket_real(y, r);
    let rhs = 2f64.powf(r.abs() / 2.0) * bracket_real(x, r) * bracket_real(&diff, r.abs());
    PeetreBound { lhs, rhs }
}

/// Centered lattice box `{-radius..radius}^dim`, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxShape {
    pub dim: usize,
    pub radius: usize,
}

impl BoxShape {
    pub fn new(dim: usize, radius: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(BoxShape { dim, radius })
    }

    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn len(&self) -> usize {
        self.side().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        let r = self.radius as i64;
        k.len() == self.dim && k.iter().all(|&c| -r <= c && c <= r)
    }

    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        if !self.contains(k) {
            return None;
        }
        let side = self.side();
        let r = self.radius as i64;
        Some(k.iter().fold(0usize, |acc, &c| acc * side + (c + r) as usize))
    }

    /// Writes the multi-index of flat position `idx` into `out`.
    pub fn coords_into(&self, mut idx: usize, out: &mut [i64]) {
        let side = self.side();
        let r = self.radius as i64;
        for slot in out.iter_mut().rev() {
            *slot = (idx % side) as i64 - r;
            idx /= side;
        }
    }

    pub fn coords_at(&self, idx: usize) -> MultiIndex {
        let mut out = vec![0; self.dim];
        self.coords_into(idx, &mut out);
        MultiIndex(out)
    }

    pub fn norm_sq_at(&self, idx: usize) -> i64 {
        let mut out = [0i64; MAX_DIM];
        self.coords_into(idx, &mut out[..self.dim]);
        norm_sq(&out[..self.dim])
    }

    pub fn iter(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        (0..self.len()).map(move |i| self.coords_at(i))
    }
}

/// Row-major iteration over an axis-aligned integer box `lo..=hi`.
pub(crate) fn for_each_in_box(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    let d = lo.len();
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        f(&cur);
        let mut axis = d;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if cur[axis] < hi[axis] {
                cur[axis] += 1;
                for c in cur.iter_mut().skip(axis + 1).zip(lo.iter().skip(axis + 1)) {
                    *c.0 = *c.1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn bracket_values() {
        assert_eq!(bracket(&MultiIndex::new([0, 0]), 7.0), 1.0);
        assert!((bracket(&MultiIndex::new([3, 4]), 2.0) - 26.0).abs() < 1e-12);
        assert!((bracket(&MultiIndex::new([1]), -1.0) - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn weighted_norm_small_cases() {
        let mut delta = CoefficientField::zeros(2, 3).unwrap();
        delta.set(&[0, 0], Complex64::new(1.0, 0.0)).unwrap();
        assert!((weighted_norm(&delta, 4.5, 2.0).unwrap() - 1.0).abs() < 1e-15);

        let mut ones = CoefficientField::zeros(1, 3).unwrap();
        for k in -1..=1 {
            ones.set(&[k], Complex64::new(1.0, 0.0)).unwrap();
        }
        let n = weighted_norm(&ones, 1.0, 2.0).unwrap();
        assert!((n - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn weighted_norm_rejects_small_p() {
        let f = CoefficientField::zeros(1, 2).unwrap();
        assert!(matches!(weighted_norm(&f, 0.0, 0.5), Err(Error::InvalidArgument(_))));
        assert!(matches!(weighted_norm(&f, 0.0, 3.0), Err(Error::UnsupportedExponent(_))));
    }

    #[test]
    fn peetre_examples() {
        let b = peetre_bound(&[3.0, 4.0], &[3.0, 4.0], 5.0);
        assert!((b.lhs - 26f64.powf(2.5)).abs() / b.lhs < 1e-12);
        assert!((b.rhs - 2f64.powf(2.5) * 26f64.powf(2.5)).abs() / b.rhs < 1e-12);
        assert!(b.holds());
        let z = peetre_bound(&[1.0, -2.0], &[7.0, 0.5], 0.0);
        assert_eq!((z.lhs, z.rhs), (1.0, 1.0));
    }

    #[test]
    fn box_indexing_round_trip() {
        let shape = BoxShape::new(3, 2).unwrap();
        for i in 0..shape.len() {
            let k = shape.coords_at(i);
            assert_eq!(shape.index_of(k.coords()), Some(i));
        }
        assert_eq!(shape.index_of(&[3, 0, 0]), None);
    }

    #[test]
    fn box_walk_visits_everything_in_order() {
        let mut seen = Vec::new();
        for_each_in_box(&[-1, 0], &[0, 2], |k| seen.push(k.to_vec()));
        assert_eq!(seen, vec![vec![-1, 0], vec![-1, 1], vec![-1, 2], vec![0, 0], vec![0, 1], vec![0, 2]]);
    }
}
