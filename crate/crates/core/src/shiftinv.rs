//! Shift-invariant spaces at finite truncation, in one dimension: sampled
//! generators, synthesis `f = Σ_i Σ_k c^i_k φ^i(· + k)`, the fiberization
//! `T_s φ(t) = (ψ̂(t+k) / <k>^s)_k` with `ψ̂ = <ξ>^s φ̂`, the amalgam norm and
//! the product `g1 * g2`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use crate::compat::{check_compatibility_components, CompatibilityReport};
use crate::cones::LatticeCone;
use crate::distributions::CoefficientField;
use crate::error::{Error, Result};
use crate::fft;
use crate::lattice::{bracket_from_norm_sq, bracket_real};
use crate::product::{cauchy_product_direct, sobolev_product_exponent};

/// Smallest accepted number of samples per unit cell.
pub const MIN_SAMPLES_PER_UNIT: usize = 16;
/// Largest number of generators per element.
pub const MAX_GENERATORS: usize = 4;
/// Points of the `t`-grid on the unit cell used by [`fiberize`].
pub const FIBER_T_POINTS: usize = 16;
/// Required ratio between the sampling rate and the highest frequency `K + 1`.
pub const FIBER_OVERSAMPLING: usize = 4;

/// `φ` sampled at `x_p = (start_index + p) / M`, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledGenerator {
    pub samples_per_unit: usize,
    pub start_index: i64,
    pub samples: Vec<f64>,
    pub smoothness: f64,
    pub label: String,
}

impl SampledGenerator {
    pub fn new(samples_per_unit: usize, start_index: i64, samples: Vec<f64>, smoothness: f64) -> Result<Self> {
        let g = SampledGenerator { samples_per_unit, start_index, samples, smoothness, label: String::new() };
        g.validate()?;
        Ok(g)
    }

    /// Samples `f` on the grid points of `[lo, hi]`.
    pub fn from_fn(samples_per_unit: usize, lo: f64, hi: f64, smoothness: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(format!("bad support interval [{lo}, {hi}]")));
        }
        let m = samples_per_unit as f64;
        let first = (lo * m).ceil() as i64;
        let last = (hi * m).floor() as i64;
        let samples = (first..=last).map(|p| f(p as f64 / m)).collect();
        Self::new(samples_per_unit, first, samples, smoothness)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples_per_unit < MIN_SAMPLES_PER_UNIT {
            return Err(Error::Undersampled { samples: self.samples_per_unit, required: MIN_SAMPLES_PER_UNIT });
        }
        if self.samples.is_empty() {
            return Err(Error::InvalidArgument("generator has no samples".into()));
        }
        if self.samples.iter().any(|v| !v.is_finite()) || !self.smoothness.is_finite() {
            return Err(Error::InvalidArgument("generator samples and smoothness must be finite".into()));
        }
        Ok(())
    }

    pub fn point(&self, p: usize) -> f64 {
        (self.start_index + p as i64) as f64 / self.samples_per_unit as f64
    }

    /// Value at grid index `q` (position `q / M`).
    pub fn at_index(&self, q: i64) -> f64 {
        let p = q - self.start_index;
        if p < 0 || p as usize >= self.samples.len() {
            0.0
        } else {
            self.samples[p as usize]
        }
    }

    /// `T_j φ = φ(· - j)`.
    pub fn translated(&self, j: i64) -> Self {
        let mut g = self.clone();
        g.start_index += j * self.samples_per_unit as i64;
        g
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut g = self.clone();
        g.samples.iter_mut().for_each(|v| *v *= c);
        g
    }

    /// `φ̂(ξ) = ∫ φ(x) e^{-2πixξ} dx` by the Riemann sum on the sample grid.
    pub fn transform_at(&self, xi: f64) -> Complex64 {
        let m = self.samples_per_unit as f64;
        self.samples
            .iter()
            .enumerate()
            .map(|(p, &v)| Complex64::from_polar(v, -2.0 * PI * xi * (self.start_index + p as i64) as f64 / m))
            .sum::<Complex64>()
            / m
    }

    /// Sample file with header `t,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,value\n");
        for (p, v) in self.samples.iter().enumerate() {
            let _ = writeln!(out, "{:.16e},{:.16e}", self.point(p), v);
        }
        out
    }

    /// Parses a `t,value` file; the grid step must be `1/M` for an integer `M`.
    pub fn from_csv(text: &str, smoothness: f64) -> Result<Self> {
        let mut rows = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty()
                || (line_no == 0 && line.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E'))
            {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.map(str::trim)
                    .ok_or_else(|| Error::Malformed(format!("line {}: expected two columns", line_no + 1)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Malformed(format!("line {}: {e}", line_no + 1)))
            };
            let t = parse(parts.next())?;
            let v = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(Error::Malformed(format!("line {}: expected two columns", line_no + 1)));
            }
            rows.push((t, v));
        }
        if rows.len() < 2 {
            return Err(Error::Malformed("generator file needs at least two samples".into()));
        }
        let step = rows[1].0 - rows[0].0;
        if !(step > 0.0) {
            return Err(Error::Malformed("sample points must increase".into()));
        }
        let m = (1.0 / step).round();
        let start = (rows[0].0 * m).round() as i64;
        for (p, (t, _)) in rows.iter().enumerate() {
            let expect = (start + p as i64) as f64 / m;
            if (t - expect).abs() > 1e-9 * (1.0 + expect.abs()) {
                return Err(Error::Malformed(format!("line {}: t = {t} is off the uniform grid of step 1/{m}", p + 2)));
            }
        }
        Self::new(m as usize, start, rows.into_iter().map(|r| r.1).collect(), smoothness)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
    }

    pub fn read_csv(path: impl AsRef<Path>, smoothness: f64) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        Self::from_csv(&text, smoothness).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
    }
}

/// Values on the grid `q / M`, `q = start_index ..`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub samples_per_unit: usize,
    pub start_index: i64,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn at_index(&self, q: i64) -> Complex64 {
        let p = q - self.start_index;
        if p < 0 || p as usize >= self.values.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[p as usize]
        }
    }

    /// `(Σ |f(x_q)|^2 / M)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.samples_per_unit as f64).sqrt()
    }

    /// `(f * g)(x) ≈ (1/M) Σ f(y) g(x - y)` on the common grid.
    pub fn convolve(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.samples_per_unit != other.samples_per_unit {
            return Err(Error::GridMismatch(self.samples_per_unit, other.samples_per_unit));
        }
        let (mut v, _) = fft::linear_convolve(&self.values, &[self.values.len()], &other.values, &[other.values.len()]);
        let scale = 1.0 / self.samples_per_unit as f64;
        v.iter_mut().for_each(|x| *x *= scale);
        Ok(GridFunction {
            samples_per_unit: self.samples_per_unit,
            start_index: self.start_index + other.start_index,
            values: v,
        })
    }

    /// `L^2` distance on the union of both supports.
    pub fn l2_distance(&self, other: &GridFunction) -> Result<f64> {
        if self.samples_per_unit != other.samples_per_unit {
            return Err(Error::GridMismatch(self.samples_per_unit, other.samples_per_unit));
        }
        let lo = self.start_index.min(other.start_index);
        let hi = (self.start_index + self.values.len() as i64).max(other.start_index + other.values.len() as i64);
        let sum: f64 = (lo..hi).map(|q| (self.at_index(q) - other.at_index(q)).norm_sqr()).sum();
        Ok((sum / self.samples_per_unit as f64).sqrt())
    }
}

fn check_sequence(c: &CoefficientField) -> Result<()> {
    if c.dim() != 1 {
        return Err(Error::UnsupportedDimension(c.dim()));
    }
    Ok(())
}

/// `Σ_i Σ_k c^i_k φ^i(· + k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftInvariantElement {
    pub generators: Vec<SampledGenerator>,
    pub coefficients: Vec<CoefficientField>,
    pub s: f64,
}

impl ShiftInvariantElement {
    pub fn new(generators: Vec<SampledGenerator>, coefficients: Vec<CoefficientField>, s: f64) -> Result<Self> {
        let e = ShiftInvariantElement { generators, coefficients, s };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() || self.generators.len() != self.coefficients.len() {
            return Err(Error::InvalidArgument(format!(
                "{} generators but {} coefficient sequences",
                self.generators.len(),
                self.coefficients.len()
            )));
        }
        let m = self.samples_per_unit();
        for g in &self.generators {
            g.validate()?;
            if g.samples_per_unit != m {
                return Err(Error::GridMismatch(m, g.samples_per_unit));
            }
        }
        for c in &self.coefficients {
            check_sequence(c)?;
        }
        if !self.s.is_finite() {
            return Err(Error::InvalidArgument("smoothness must be finite".into()));
        }
        Ok(())
    }

    pub fn samples_per_unit(&self) -> usize {
        self.generators[0].samples_per_unit
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// Evaluates the element on its grid: `f(q/M) = Σ_i Σ_k c^i_k φ^i[q + kM]`.
pub fn synthesize(elem: &ShiftInvariantElement) -> Result<GridFunction> {
    elem.validate()?;
    let m = elem.samples_per_unit() as i64;
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for (g, c) in elem.generators.iter().zip(&elem.coefficients) {
        let n = c.radius() as i64;
        lo = lo.min(g.start_index - n * m);
        hi = hi.max(g.start_index + g.samples.len() as i64 - 1 + n * m);
    }
    let mut values = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for (g, c) in elem.generators.iter().zip(&elem.coefficients) {
        for (k, ck) in c.iter() {
            if ck == Complex64::new(0.0, 0.0) {
                continue;
            }
            let shift = k.coords()[0] * m;
            for (p, &v) in g.samples.iter().enumerate() {
                let q = g.start_index + p as i64 - shift;
                values[(q - lo) as usize] += ck * v;
            }
        }
    }
    Ok(GridFunction { samples_per_unit: m as usize, start_index: lo, values })
}

/// `sup_t Σ_j |φ(t + j)|` over the sample grid.
pub fn amalgam_norm(gen: &SampledGenerator) -> f64 {
    let m = gen.samples_per_unit as i64;
    let mut acc = vec![0.0; gen.samples_per_unit];
    for (p, v) in gen.samples.iter().enumerate() {
        acc[(gen.start_index + p as i64).rem_euclid(m) as usize] += v.abs();
    }
    acc.into_iter().fold(0.0, f64::max)
}

/// Samples of `T_s φ` on `t = j / FIBER_T_POINTS`, `k ∈ {-K..K}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberMatrix {
    pub s: f64,
    pub k_radius: usize,
    pub t_points: usize,
    /// Row-major: row `t`, column `k + K`.
    pub entries: Vec<Complex64>,
}

impl FiberMatrix {
    pub fn t(&self, row: usize) -> f64 {
        row as f64 / self.t_points as f64
    }

    pub fn entry(&self, row: usize, k: i64) -> Complex64 {
        let width = 2 * self.k_radius + 1;
        self.entries[row * width + (k + self.k_radius as i64) as usize]
    }

    /// Discrete `H(T, ℓ^2_s)` norm: `((1/T) Σ_t Σ_k |F_k(t)|^2 <k>^{2s})^{1/2}`.
    pub fn h_norm(&self) -> f64 {
        let width = 2 * self.k_radius + 1;
        let k_radius = self.k_radius as i64;
        let sum: f64 = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let k = (i % width) as i64 - k_radius;
                v.norm_sqr() * bracket_from_norm_sq(k * k, 2.0 * self.s)
            })
            .sum();
        (sum / self.t_points as f64).sqrt()
    }

    pub fn max_abs_diff(&self, other: &FiberMatrix) -> Result<f64> {
        if self.entries.len() != other.entries.len() {
            return Err(Error::InvalidArgument("fiber matrices of different shapes".into()));
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// Transform of `φ` at `ξ = q / t_points` for `q` in `[-K t_points, (K+1) t_points)`
/// via one zero-padded FFT.
fn sampled_transform(gen: &SampledGenerator, k_radius: usize, t_points: usize) -> Vec<Complex64> {
    let m = gen.samples_per_unit;
    let mut periods = t_points;
    while m * periods < gen.samples.len() {
        periods += t_points;
    }
    let len = m * periods;
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (p, &v) in gen.samples.iter().enumerate() {
        buf[p] = Complex64::new(v, 0.0);
    }
    fft::fft_nd(&mut buf, &[len], FftDirection::Forward);
    let step = periods / t_points;
    let k = k_radius as i64;
    let tp = t_points as i64;
    (-k * tp..(k + 1) * tp)
        .map(|q| {
            let xi = q as f64 / t_points as f64;
            let bin = (q * step as i64).rem_euclid(len as i64) as usize;
            let phase = Complex64::from_polar(1.0, -2.0 * PI * xi * gen.start_index as f64 / m as f64);
            buf[bin] * phase / m as f64
        })
        .collect()
}

/// `T_s φ(t)_k = <t+k>^s φ̂(t+k) / <k>^s` on the `t`-grid.
pub fn fiberize(gen: &SampledGenerator, s: f64, k_radius: usize) -> Result<FiberMatrix> {
    gen.validate()?;
    let required = FIBER_OVERSAMPLING * (k_radius + 1);
    if gen.samples_per_unit < required {
        return Err(Error::Undersampled { samples: gen.samples_per_unit, required });
    }
    let tp = FIBER_T_POINTS;
    let hat = sampled_transform(gen, k_radius, tp);
    let width = 2 * k_radius + 1;
    let mut entries = vec![Complex64::new(0.0, 0.0); tp * width];
    for row in 0..tp {
        for col in 0..width {
            let k = col as i64 - k_radius as i64;
            let q = col * tp + row;
            let xi = row as f64 / tp as f64 + k as f64;
            entries[row * width + col] = hat[q] * bracket_real(&[xi], s) / bracket_from_norm_sq(k * k, s);
        }
    }
    Ok(FiberMatrix { s, k_radius, t_points: tp, entries })
}

/// Result of [`si_product`].
#[derive(Debug, Clone, PartialEq)]
pub struct SiProduct {
    pub element: ShiftInvariantElement,
    pub compatibility: Option<CompatibilityReport>,
}

/// `g1 * g2` with generators `φ^i_1 * φ^j_2` (ordered `i`-major) and
/// coefficients `Σ_k a^i_{1,n-k} a^j_{2,k}`. With cones (one per generator on
/// each side) the compatibility check must pass and `s = -τ`; otherwise
/// `s = min{s1, s2}`.
pub fn si_product(
    g1: &ShiftInvariantElement,
    g2: &ShiftInvariantElement,
    cones: Option<(&[LatticeCone], &[LatticeCone])>,
) -> Result<SiProduct> {
    g1.validate()?;
    g2.validate()?;
    if g1.samples_per_unit() != g2.samples_per_unit() {
        return Err(Error::GridMismatch(g1.samples_per_unit(), g2.samples_per_unit()));
    }
    for g in [g1, g2] {
        if g.rank() > MAX_GENERATORS {
            return Err(Error::InvalidArgument(format!("at most {MAX_GENERATORS} generators, got {}", g.rank())));
        }
    }
    let (s, compatibility) = match cones {
        Some((c1, c2)) => {
            if c1.len() != g1.rank() || c2.len() != g2.rank() {
                return Err(Error::InvalidArgument("need exactly one cone per generator".into()));
            }
            let parts1: Vec<_> = g1.coefficients.iter().cloned().zip(c1.iter().cloned()).collect();
            let parts2: Vec<_> = g2.coefficients.iter().cloned().zip(c2.iter().cloned()).collect();
            let report = check_compatibility_components(&parts1, &parts2)?;
            match report.tau {
                Some(tau) if report.verdict => (-tau, Some(report)),
                _ => {
                    return Err(Error::Hypothesis(format!(
                        "coefficient sequences are not compatible: {}",
                        report.failures.join("; ")
                    )))
                }
            }
        }
        None => (sobolev_product_exponent(g1.s, g2.s)?, None),
    };

    let m = g1.samples_per_unit();
    let mut generators = Vec::new();
    let mut coefficients = Vec::new();
    for (p1, a1) in g1.generators.iter().zip(&g1.coefficients) {
        for (p2, a2) in g2.generators.iter().zip(&g2.coefficients) {
            let f1 = GridFunction {
                samples_per_unit: m,
                start_index: p1.start_index,
                values: p1.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            };
            let f2 = GridFunction {
                samples_per_unit: m,
                start_index: p2.start_index,
                values: p2.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            };
            let conv = f1.convolve(&f2)?;
            let label = format!("{}*{}", p1.label, p2.label);
            generators.push(
                SampledGenerator::new(m, conv.start_index, conv.values.iter().map(|v| v.re).collect(), s)?
                    .with_label(label),
            );
            coefficients.push(cauchy_product_direct(a1, a2)?);
        }
    }
    Ok(SiProduct { element: ShiftInvariantElement { generators, coefficients, s }, compatibility })
}
