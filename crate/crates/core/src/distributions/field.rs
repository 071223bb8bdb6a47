use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BoxShape, MultiIndex};

/// Truncated Fourier coefficients `a_k`, `k ∈ {-N..N}^d`, of a periodic distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    shape: BoxShape,
    data: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct FieldFile {
    dim: usize,
    radius: usize,
    coeffs: Vec<f64>,
}

impl CoefficientField {
    pub fn zeros(dim: usize, radius: usize) -> Result<Self> {
        let shape = BoxShape::new(dim, radius)?;
        Ok(CoefficientField { shape, data: vec![Complex64::new(0.0, 0.0); shape.len()] })
    }

    pub fn from_fn(dim: usize, radius: usize, mut f: impl FnMut(&[i64]) -> Complex64) -> Result<Self> {
        let shape = BoxShape::new(dim, radius)?;
        let mut k = vec![0i64; dim];
        let data = (0..shape.len())
            .map(|i| {
                shape.coords_into(i, &mut k);
                f(&k)
            })
            .collect();
        CoefficientField::from_parts(dim, radius, data)
    }

    pub fn from_parts(dim: usize, radius: usize, data: Vec<Complex64>) -> Result<Self> {
        let shape = BoxShape::new(dim, radius)?;
        if data.len() != shape.len() {
            return Err(Error::Malformed(format!(
                "coefficient array has {} entries, box of radius {radius} in dimension {dim} needs {}",
                data.len(),
                shape.len()
            )));
        }
        if let Some(pos) = data.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Malformed(format!("non-finite coefficient at flat position {pos}")));
        }
        Ok(CoefficientField { shape, data })
    }

    pub fn dim(&self) -> usize {
        self.shape.dim
    }

    pub fn radius(&self) -> usize {
        self.shape.radius
    }

    pub fn shape(&self) -> BoxShape {
        self.shape
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Coefficient at `k`; zero outside the stored box.
    pub fn get(&self, k: &[i64]) -> Complex64 {
        self.shape.index_of(k).map_or(Complex64::new(0.0, 0.0), |i| self.data[i])
    }

    pub fn set(&mut self, k: &[i64], value: Complex64) -> Result<()> {
        let i = self
            .shape
            .index_of(k)
            .ok_or_else(|| Error::IndexOutsideBox { index: k.to_vec(), radius: self.radius() })?;
        self.data[i] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, Complex64)> + '_ {
        self.data.iter().enumerate().map(move |(i, v)| (self.shape.coords_at(i), *v))
    }

    /// Same coefficients in a box of another radius: zero-padded or cropped.
    pub fn resized(&self, radius: usize) -> CoefficientField {
        CoefficientField::from_fn(self.dim(), radius, |k| self.get(k)).expect("dimension already validated")
    }

    pub fn scaled(&self, c: Complex64) -> CoefficientField {
        CoefficientField { shape: self.shape, data: self.data.iter().map(|v| v * c).collect() }
    }

    /// Sum on the larger of the two boxes.
    pub fn add(&self, other: &CoefficientField) -> Result<CoefficientField> {
        check_same_dim(self, other)?;
        let r = self.radius().max(other.radius());
        CoefficientField::from_fn(self.dim(), r, |k| self.get(k) + other.get(k))
    }

    /// `max_k |a_k - b_k|` over the union of both boxes.
    pub fn max_abs_diff(&self, other: &CoefficientField) -> Result<f64> {
        check_same_dim(self, other)?;
        let r = self.radius().max(other.radius());
        let shape = BoxShape::new(self.dim(), r)?;
        let mut k = vec![0; self.dim()];
        Ok((0..shape.len())
            .map(|i| {
                shape.coords_into(i, &mut k);
                (self.get(&k) - other.get(&k)).norm()
            })
            .fold(0.0, f64::max))
    }

    pub fn to_json(&self) -> Result<String> {
        let coeffs = self.data.iter().flat_map(|c| [c.re, c.im]).collect();
        Ok(serde_json::to_string(&FieldFile { dim: self.dim(), radius: self.radius(), coeffs })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FieldFile = serde_json::from_str(text)?;
        if !file.coeffs.len().is_multiple_of(2) {
            return Err(Error::Malformed("coeffs must hold interleaved (re, im) pairs".into()));
        }
        let data = file.coeffs.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
        CoefficientField::from_parts(file.dim, file.radius, data)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path.as_ref(), self.to_json()?)
            .map_err(|e| Error::Malformed(format!("{}: {e}", path.as_ref().display())))
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let p = path.as_ref();
        let text = std::fs::read_to_string(p).map_err(|e| Error::Malformed(format!("{}: {e}", p.display())))?;
        CoefficientField::from_json(&text).map_err(|e| Error::Malformed(format!("{}: {e}", p.display())))
    }
}

pub(crate) fn check_same_dim(a: &CoefficientField, b: &CoefficientField) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

/// Complex samples of a function on the uniform grid `{j/M}^d` of the unit cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    pub dim: usize,
    pub points_per_axis: usize,
    pub data: Vec<Complex64>,
}

impl GridSamples {
    pub fn from_fn(dim: usize, points_per_axis: usize, mut f: impl FnMut(&[f64]) -> Complex64) -> Result<Self> {
        BoxShape::new(dim, 0)?;
        let total = points_per_axis.pow(dim as u32);
        let mut t = vec![0.0; dim];
        let data = (0..total)
            .map(|mut i| {
                for slot in t.iter_mut().rev() {
                    *slot = (i % points_per_axis) as f64 / points_per_axis as f64;
                    i /= points_per_axis;
                }
                f(&t)
            })
            .collect();
        Ok(GridSamples { dim, points_per_axis, data })
    }
}
