//! Coefficient-side products of periodic distributions and their order bookkeeping.
//!
//! `f = f1 f2` has coefficients `f_n = Σ_j f1_{n-j} f2_j`. Truncated inputs of
//! radii `N1`, `N2` give an output of radius `N1 + N2` with no cropping.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::distributions::CoefficientField;
use crate::error::{Error, Result};
use crate::fft;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMethod {
    Direct,
    Fft,
}

impl std::str::FromStr for ProductMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(ProductMethod::Direct),
            "fft" => Ok(ProductMethod::Fft),
            other => Err(Error::InvalidArgument(format!("unknown product method {other:?}"))),
        }
    }
}

pub fn cauchy_product(f1: &CoefficientField, f2: &CoefficientField, method: ProductMethod) -> Result<CoefficientField> {
    match method {
        ProductMethod::Direct => cauchy_product_direct(f1, f2),
        ProductMethod::Fft => cauchy_product_fft(f1, f2),
    }
}

fn check_dims(f1: &CoefficientField, f2: &CoefficientField) -> Result<()> {
    if f1.dim() != f2.dim() {
        return Err(Error::DimensionMismatch { left: f1.dim(), right: f2.dim() });
    }
    Ok(())
}

/// Direct summation. Terms of each output coefficient are added in
/// symmetric pairs (first with last), which makes the result independent of
/// the argument order bit for bit.
pub fn cauchy_product_direct(f1: &CoefficientField, f2: &CoefficientField) -> Result<CoefficientField> {
    check_dims(f1, f2)?;
    let d = f1.dim();
    let (r1, r2) = (f1.radius() as i64, f2.radius() as i64);
    let mut terms: Vec<Complex64> = Vec::new();
    let mut lo = vec![0i64; d];
    let mut hi = vec![0i64; d];
    let mut diff = vec![0i64; d];
    CoefficientField::from_fn(d, (r1 + r2) as usize, |n| {
        for i in 0..d {
            lo[i] = (-r2).max(n[i] - r1);
            hi[i] = r2.min(n[i] + r1);
        }
        terms.clear();
        crate::lattice::for_each_in_box(&lo, &hi, |j| {
            for i in 0..d {
                diff[i] = n[i] - j[i];
            }
            terms.push(f1.get(&diff) * f2.get(j));
        });
        symmetric_sum(&terms)
    })
}

fn symmetric_sum(terms: &[Complex64]) -> Complex64 {
    let len = terms.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..len / 2 {
        acc += terms[i] + terms[len - 1 - i];
    }
    if len % 2 == 1 {
        acc += terms[len / 2];
    }
    acc
}

/// Zero-padded spectral convolution; same contract as the direct path.
pub fn cauchy_product_fft(f1: &CoefficientField, f2: &CoefficientField) -> Result<CoefficientField> {
    check_dims(f1, f2)?;
    let d = f1.dim();
    let s1 = vec![f1.shape().side(); d];
    let s2 = vec![f2.shape().side(); d];
    let (out, _) = fft::linear_convolve(f1.data(), &s1, f2.data(), &s2);
    CoefficientField::from_parts(d, f1.radius() + f2.radius(), out)
}

/// Exponents entering the order bound of a product with compatible
/// coefficient estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderBoundInputs {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub gamma: f64,
    pub dim: usize,
}

/// Minimal `τ` with
/// `2τ >= max{4γ(α1+α2) + 2γ + d + 1, 2α1 + d + 1, 2α2 + d + 1}`.
pub fn product_order_bound(p: &OrderBoundInputs) -> Result<f64> {
    let vals = [p.alpha1, p.alpha2, p.beta1, p.beta2, p.gamma];
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Hypothesis("exponents must be finite".into()));
    }
    if p.alpha1 < 0.0 {
        return Err(Error::Hypothesis(format!("alpha1 >= 0 fails (alpha1 = {})", p.alpha1)));
    }
    if p.alpha2 < 0.0 {
        return Err(Error::Hypothesis(format!("alpha2 >= 0 fails (alpha2 = {})", p.alpha2)));
    }
    if p.beta1 < p.alpha2 {
        return Err(Error::Hypothesis(format!("beta1 >= alpha2 fails ({} < {})", p.beta1, p.alpha2)));
    }
    if p.beta2 < p.alpha1 {
        return Err(Error::Hypothesis(format!("beta2 >= alpha1 fails ({} < {})", p.beta2, p.alpha1)));
    }
    if p.gamma < 1.0 {
        return Err(Error::Hypothesis(format!("gamma >= 1 fails (gamma = {})", p.gamma)));
    }
    let d1 = p.dim as f64 + 1.0;
    let two_tau =
        (4.0 * p.gamma * (p.alpha1 + p.alpha2) + 2.0 * p.gamma + d1).max(2.0 * p.alpha1 + d1).max(2.0 * p.alpha2 + d1);
    Ok(two_tau / 2.0)
}

/// Largest admissible target exponent `s = min{s1, s2}` for the product map
/// `ℓ¹_{s1} × ℓ²_{s2} → ℓ²_s`; requires `s1 + s2 >= 0`.
pub fn sobolev_product_exponent(s1: f64, s2: f64) -> Result<f64> {
    if s1 + s2 < 0.0 {
        return Err(Error::Hypothesis(format!("s1 + s2 >= 0 fails ({s1} + {s2} < 0)")));
    }
    Ok(s1.min(s2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{from_closed_form, ClosedFormSpec};

    fn harmonic(idx: &[i64], r: usize) -> CoefficientField {
        from_closed_form(&ClosedFormSpec::Harmonic { index: idx.to_vec() }, r).unwrap()
    }

    #[test]
    fn harmonics_multiply_by_adding_indices() {
        for method in [ProductMethod::Direct, ProductMethod::Fft] {
            let p = cauchy_product(&harmonic(&[2, -1], 3), &harmonic(&[-3, 4], 4), method).unwrap();
            assert_eq!(p.radius(), 7);
            for (k, v) in p.iter() {
                let expect = if k.coords() == [-1, 3] { 1.0 } else { 0.0 };
                assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_is_identity() {
        let f = from_closed_form(&ClosedFormSpec::Sawtooth, 6).unwrap();
        let one = from_closed_form(&ClosedFormSpec::Constant { dim: 1 }, 2).unwrap();
        let p = cauchy_product_direct(&one, &f).unwrap();
        assert_eq!(p.radius(), 8);
        assert!(p.max_abs_diff(&f).unwrap() < 1e-15);
    }

    #[test]
    fn comb_squared_counts_overlaps() {
        let comb = from_closed_form(&ClosedFormSpec::DiracComb { dim: 2 }, 5).unwrap();
        let p = cauchy_product_fft(&comb, &comb).unwrap();
        assert!((p.get(&[0, 0]).re - 121.0).abs() < 1e-9);
    }

    #[test]
    fn direct_product_commutes_exactly() {
        let a = from_closed_form(&ClosedFormSpec::Sawtooth, 5).unwrap();
        let b = from_closed_form(&ClosedFormSpec::SquareWave, 3).unwrap();
        let ab = cauchy_product_direct(&a, &b).unwrap();
        let ba = cauchy_product_direct(&b, &a).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn square_wave_is_idempotent_up_to_truncation() {
        let err = |n: usize| {
            let sq = from_closed_form(&ClosedFormSpec::SquareWave, n).unwrap();
            let sq2 = cauchy_product_fft(&sq, &sq).unwrap().resized(n);
            sq2.data().iter().zip(sq.data()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
        };
        let (e32, e64, e128) = (err(32), err(64), err(128));
        assert!(e64 < 0.03 && e128 < e64 && e64 < e32, "{e32} {e64} {e128}");
        let rate = (e64 / e128).log2();
        assert!((rate - 0.5).abs() < 0.1, "rate {rate}");
    }

    #[test]
    fn order_bound_examples() {
        let b = |a1, a2, g, d| {
            product_order_bound(&OrderBoundInputs { alpha1: a1, alpha2: a2, beta1: 5.0, beta2: 5.0, gamma: g, dim: d })
        };
        assert_eq!(b(0.0, 0.0, 1.0, 2).unwrap(), 2.5);
        assert_eq!(b(1.0, 0.0, 2.0, 2).unwrap(), 7.5);
        assert_eq!(b(0.0, 0.0, 1.0, 1).unwrap(), 2.0);
        let err = product_order_bound(&OrderBoundInputs {
            alpha1: 2.0,
            alpha2: 0.0,
            beta1: 1.0,
            beta2: 1.0,
            gamma: 1.0,
            dim: 2,
        })
        .unwrap_err();
        assert!(err.to_string().contains("beta2 >= alpha1"));
        assert!(b(0.0, 0.0, 0.5, 2).unwrap_err().to_string().contains("gamma"));
    }

    #[test]
    fn sobolev_exponent_rule() {
        assert_eq!(sobolev_product_exponent(2.0, -1.0).unwrap(), -1.0);
        assert_eq!(sobolev_product_exponent(0.0, 0.0).unwrap(), 0.0);
        assert!(sobolev_product_exponent(3.0, -4.0).is_err());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = harmonic(&[1], 2);
        let b = harmonic(&[1, 1], 2);
        assert!(matches!(cauchy_product_direct(&a, &b), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(cauchy_product_fft(&a, &b), Err(Error::DimensionMismatch { .. })));
    }
}
