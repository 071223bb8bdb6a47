//! Compactly supported localization windows built from B-splines.
//!
//! A window of width `η`, plateau `ε` and order `m` is the indicator of
//! `[-(η+ε)/4, (η+ε)/4]` convolved with an `m`-fold box convolution of total
//! width `(η-ε)/2`. It equals 1 on `[-ε/2, ε/2]`, vanishes outside
//! `[-η/2, η/2]`, is `C^{m-1}` and its Fourier transform is known in closed form.
//! In several dimensions the window is the tensor product of 1-D profiles.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// CDF of the sum of `m` independent uniforms on `[0, 1]`.
pub fn irwin_hall_cdf(u: f64, m: usize) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= m as f64 {
        return 1.0;
    }
    let mut acc = 0.0;
    for k in 0..=(u.floor() as usize) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(m, k) * (u - k as f64).powi(m as i32);
    }
    (acc / factorial(m)).clamp(0.0, 1.0)
}

/// Centered cardinal B-spline of order `m` (support `[-m/2, m/2]`, unit integral).
/// Order 1 is the box on `[-1/2, 1/2)`, order 2 the hat on `[-1, 1]`.
pub fn cardinal_bspline(order: usize, x: f64) -> f64 {
    let u = x + order as f64 / 2.0;
    if order == 1 {
        return if (0.0..1.0).contains(&u) { 1.0 } else { 0.0 };
    }
    if u <= 0.0 || u >= order as f64 {
        return 0.0;
    }
    let mut acc = 0.0;
    for k in 0..=(u.floor() as usize) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(order, k) * (u - k as f64).powi(order as i32 - 1);
    }
    (acc / factorial(order - 1)).max(0.0)
}

/// `sin(x)/x` with the removable singularity filled.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Fourier transform of the centered cardinal B-spline: `sinc(πξ)^m`.
pub fn cardinal_bspline_hat(order: usize, xi: f64) -> f64 {
    sinc(PI * xi).powi(order as i32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationWindow {
    pub center: Vec<f64>,
    pub width: f64,
    pub plateau: f64,
    pub order: usize,
}

impl LocalizationWindow {
    pub fn new(center: Vec<f64>, width: f64, plateau: f64, order: usize) -> Result<Self> {
        let w = LocalizationWindow { center, width, plateau, order };
        w.validate()?;
        Ok(w)
    }

    /// `ψ ≡ 1`: the limit `η = ε = 1`, used to analyse an already periodic
    /// distribution without localizing it.
    pub fn full(dim: usize) -> Self {
        LocalizationWindow { center: vec![0.0; dim], width: 1.0, plateau: 1.0, order: 2 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.center.is_empty() || self.center.len() > crate::lattice::MAX_DIM {
            return Err(Error::UnsupportedDimension(self.center.len()));
        }
        if self.center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("window center must be finite".into()));
        }
        if self.is_full() {
            return Ok(());
        }
        if !(self.width > 0.0 && self.width <= 1.0) {
            return Err(Error::InvalidArgument(format!("window width {} outside (0, 1]", self.width)));
        }
        if !(self.plateau > 0.0 && self.plateau < self.width) {
            return Err(Error::InvalidArgument(format!(
                "plateau {} must lie in (0, width = {})",
                self.plateau, self.width
            )));
        }
        if self.order < 2 {
            return Err(Error::InvalidArgument("window order must be at least 2".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn is_full(&self) -> bool {
        self.width == 1.0 && self.plateau == 1.0
    }

    fn half_box(&self) -> f64 {
        (self.width + self.plateau) / 4.0
    }

    fn transition(&self) -> f64 {
        (self.width - self.plateau) / 2.0
    }

    /// 1-D profile at offset `x` from the center (not periodized).
    pub fn profile(&self, x: f64) -> f64 {
        if self.is_full() {
            return if x.abs() <= 0.5 { 1.0 } else { 0.0 };
        }
        let c = self.half_box();
        let scale = self.order as f64 / self.transition();
        let m = self.order;
        let half = m as f64 / 2.0;
        irwin_hall_cdf((x + c) * scale + half, m) - irwin_hall_cdf((x - c) * scale + half, m)
    }

    /// 1-D Fourier transform of the profile, `∫ψ(x) e^{-2πixξ} dx`.
    pub fn profile_hat(&self, xi: f64) -> f64 {
        if self.is_full() {
            return sinc(PI * xi);
        }
        let c = self.half_box();
        let box_hat = if xi.abs() < 1e-12 { 2.0 * c } else { (2.0 * PI * c * xi).sin() / (PI * xi) };
        box_hat * sinc(PI * self.transition() * xi / self.order as f64).powi(self.order as i32)
    }

    /// Value of the periodized window at torus point `t`.
    pub fn periodic_value(&self, t: &[f64]) -> f64 {
        if self.is_full() {
            return 1.0;
        }
        t.iter().zip(&self.center).map(|(ti, ci)| self.profile(wrap_centered(ti - ci))).product()
    }

    /// Fourier coefficient of the periodized window at lattice point `k`.
    pub fn coefficient(&self, k: &[i64]) -> Complex64 {
        if self.is_full() {
            return if k.iter().all(|&c| c == 0) { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        }
        let mut mag = 1.0;
        let mut phase = 0.0;
        for (&ki, ci) in k.iter().zip(&self.center) {
            mag *= self.profile_hat(ki as f64);
            phase -= 2.0 * PI * ki as f64 * ci;
        }
        Complex64::from_polar(mag, phase)
    }

    /// `∫_T ψ`.
    pub fn integral(&self) -> f64 {
        if self.is_full() {
            1.0
        } else {
            (2.0 * self.half_box()).powi(self.dim() as i32)
        }
    }
}

/// Maps `x` to `[-1/2, 1/2)`.
pub fn wrap_centered(x: f64) -> f64 {
    x - (x + 0.5).floor()
}
