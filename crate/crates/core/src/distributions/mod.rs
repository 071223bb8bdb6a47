//! Periodic distributions as truncated coefficient fields: the closed-form
//! corpus, localization `(fψ)_per`, and order estimation.

mod corpus;
mod field;

pub use corpus::{from_closed_form, ClosedFormSpec};
pub use field::{CoefficientField, GridSamples};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::lattice::BoxShape;
use crate::product::cauchy_product_fft;
use crate::trace::{validate_radii, PartialSumTrace, WeightedTerms};
use crate::window::LocalizationWindow;

/// Step of the exponent grids used by order and decay estimation.
pub const EXPONENT_STEP: f64 = 0.25;
/// Upper end of the exponent grids.
pub const EXPONENT_MAX: f64 = 12.0;

pub(crate) fn exponent_grid() -> impl Iterator<Item = f64> {
    let n = (EXPONENT_MAX / EXPONENT_STEP).round() as usize;
    (0..=n).map(|i| i as f64 * EXPONENT_STEP)
}

/// Coefficients of `(fψ)_per` by trapezoidal (FFT) quadrature of gridded samples.
pub fn periodize_localized(
    samples: &GridSamples,
    window: &LocalizationWindow,
    radius: usize,
) -> Result<CoefficientField> {
    window.validate()?;
    if window.dim() != samples.dim {
        return Err(Error::DimensionMismatch { left: samples.dim, right: window.dim() });
    }
    let m = samples.points_per_axis;
    if m < 4 * radius {
        return Err(Error::Undersampled { samples: m, required: 4 * radius });
    }
    let d = samples.dim;
    let shape = vec![m; d];
    let mut t = vec![0.0; d];
    let mut buf: Vec<Complex64> = samples
        .data
        .iter()
        .enumerate()
        .map(|(mut i, v)| {
            for slot in t.iter_mut().rev() {
                *slot = (i % m) as f64 / m as f64;
                i /= m;
            }
            v * window.periodic_value(&t)
        })
        .collect();
    fft::forward(&mut buf, &shape);
    let norm = 1.0 / (m.pow(d as u32) as f64);
    CoefficientField::from_fn(d, radius, |k| {
        let flat = k.iter().fold(0usize, |acc, &c| acc * m + c.rem_euclid(m as i64) as usize);
        buf[flat] * norm
    })
}

/// Coefficient field of the periodized window itself.
pub fn window_coefficients(window: &LocalizationWindow, radius: usize) -> Result<CoefficientField> {
    window.validate()?;
    CoefficientField::from_fn(window.dim(), radius, |k| window.coefficient(k))
}

/// Coefficients of `(fψ)_per` from the global coefficients of a periodic `f`:
/// the Cauchy product with the window's coefficients, cropped to `radius`.
/// Reliable only for `radius <= a.radius() / 2`, which is enforced.
pub fn localize_coefficients(
    a: &CoefficientField,
    window: &LocalizationWindow,
    radius: usize,
) -> Result<CoefficientField> {
    window.validate()?;
    if window.dim() != a.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: window.dim() });
    }
    if window.is_full() {
        if radius > a.radius() {
            return Err(Error::InvalidArgument(format!(
                "requested radius {radius} exceeds field radius {}",
                a.radius()
            )));
        }
        return Ok(a.resized(radius));
    }
    if 2 * radius > a.radius() {
        return Err(Error::InvalidArgument(format!(
            "localized radius {radius} needs global coefficients up to radius {}, have {}",
            2 * radius,
            a.radius()
        )));
    }
    let w = window_coefficients(window, a.radius())?;
    Ok(cauchy_product_fft(a, &w)?.resized(radius))
}

pub(crate) fn squared_terms(a: &CoefficientField, mut keep: impl FnMut(&[i64]) -> bool) -> WeightedTerms {
    let shape: BoxShape = a.shape();
    let mut k = vec![0i64; a.dim()];
    let entries = a
        .data()
        .iter()
        .enumerate()
        .filter_map(|(i, v)| {
            shape.coords_into(i, &mut k);
            if keep(&k) {
                Some((crate::lattice::norm_sq(&k), v.norm_sqr()))
            } else {
                None
            }
        })
        .collect();
    WeightedTerms::new(entries)
}

/// Trace of `Σ |a_k|^2 <k>^{2s}` over the whole box.
pub fn weighted_trace(a: &CoefficientField, s: f64, radii: &[usize]) -> Result<PartialSumTrace> {
    validate_radii(radii, 2)?;
    if *radii.last().unwrap() > a.radius() {
        return Err(Error::InvalidRadii(radii.to_vec(), format!("exceed field radius {}", a.radius())));
    }
    squared_terms(a, |_| true).trace(s, radii)
}

/// Smallest `k0` on the exponent grid for which `Σ |f_n|^2 <n>^{-2 k0}` is
/// classified convergent, with the trace at that exponent.
pub fn order_estimate(a: &CoefficientField, radii: &[usize]) -> Result<(f64, PartialSumTrace)> {
    validate_radii(radii, 4)?;
    if *radii.last().unwrap() > a.radius() {
        return Err(Error::InvalidRadii(radii.to_vec(), format!("exceed field radius {}", a.radius())));
    }
    let terms = squared_terms(a, |_| true);
    let mut last = None;
    for k0 in exponent_grid() {
        let trace = terms.trace(-k0, radii)?;
        if trace.verdict.is_convergent() {
            return Ok((k0, trace));
        }
        last = Some(trace);
    }
    let last = last.expect("grid is nonempty");
    Err(Error::Inconclusive(format!(
        "no order up to {EXPONENT_MAX} classified convergent (last verdict {}, slope {:?}, tail ratio {:.3})",
        last.verdict, last.slope, last.tail_ratio
    )))
}
