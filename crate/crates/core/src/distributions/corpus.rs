//! Closed-form periodic distributions with exactly known Fourier coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CoefficientField;
use crate::cones::LatticeCone;
use crate::error::{Error, Result};
use crate::lattice::bracket_from_norm_sq;
use crate::lattice::norm_sq;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedFormSpec {
    /// `Σ_n e_n`, all coefficients one.
    DiracComb {
        dim: usize,
    },
    Constant {
        dim: usize,
    },
    /// `e_m`.
    Harmonic {
        index: Vec<i64>,
    },
    /// `x - 1/2` on `(0, 1)`.
    Sawtooth,
    /// Indicator of `(0, 1/2)`.
    SquareWave,
    /// `f(x) g(y)` with `x`, `y` in consecutive coordinate blocks.
    Tensor {
        left: Box<ClosedFormSpec>,
        right: Box<ClosedFormSpec>,
    },
    /// `|a_n| = <n>^{inside_exp}` on the cone, `<n>^{outside_exp}` off it.
    ConeSupported {
        cone: LatticeCone,
        inside_exp: f64,
        outside_exp: f64,
    },
    Sum {
        terms: Vec<ClosedFormSpec>,
    },
}

impl ClosedFormSpec {
    pub fn tensor(left: ClosedFormSpec, right: ClosedFormSpec) -> Self {
        ClosedFormSpec::Tensor { left: Box::new(left), right: Box::new(right) }
    }

    /// Square wave in the first coordinate of `Z^2`, constant in the second.
    pub fn square_wave_in_x() -> Self {
        Self::tensor(ClosedFormSpec::SquareWave, ClosedFormSpec::Constant { dim: 1 })
    }

    pub fn square_wave_in_y() -> Self {
        Self::tensor(ClosedFormSpec::Constant { dim: 1 }, ClosedFormSpec::SquareWave)
    }

    pub fn dim(&self) -> usize {
        match self {
            ClosedFormSpec::DiracComb { dim } | ClosedFormSpec::Constant { dim } => *dim,
            ClosedFormSpec::Harmonic { index } => index.len(),
            ClosedFormSpec::Sawtooth | ClosedFormSpec::SquareWave => 1,
            ClosedFormSpec::Tensor { left, right } => left.dim() + right.dim(),
            ClosedFormSpec::ConeSupported { cone, .. } => cone.dim(),
            ClosedFormSpec::Sum { terms } => terms.first().map_or(0, |t| t.dim()),
        }
    }

    fn validate(&self, radius: usize) -> Result<()> {
        match self {
            ClosedFormSpec::Harmonic { index } => {
                if index.iter().any(|c| c.unsigned_abs() as usize > radius) {
                    return Err(Error::IndexOutsideBox { index: index.clone(), radius });
                }
            }
            ClosedFormSpec::ConeSupported { inside_exp, outside_exp, .. } => {
                if !inside_exp.is_finite() || !outside_exp.is_finite() {
                    return Err(Error::InvalidArgument("cone exponents must be finite".into()));
                }
            }
            ClosedFormSpec::Tensor { left, right } => {
                left.validate(radius)?;
                right.validate(radius)?;
            }
            ClosedFormSpec::Sum { terms } => {
                let d = self.dim();
                if terms.is_empty() {
                    return Err(Error::InvalidArgument("empty sum".into()));
                }
                for t in terms {
                    if t.dim() != d {
                        return Err(Error::DimensionMismatch { left: d, right: t.dim() });
                    }
                    t.validate(radius)?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Exact Fourier coefficient at `k`.
    pub fn coefficient(&self, k: &[i64]) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match self {
            ClosedFormSpec::DiracComb { .. } => one,
            ClosedFormSpec::Constant { .. } => {
                if k.iter().all(|&c| c == 0) {
                    one
                } else {
                    zero
                }
            }
            ClosedFormSpec::Harmonic { index } => {
                if index.as_slice() == k {
                    one
                } else {
                    zero
                }
            }
            ClosedFormSpec::Sawtooth => match k[0] {
                0 => zero,
                n => Complex64::new(0.0, 1.0 / (2.0 * PI * n as f64)),
            },
            ClosedFormSpec::SquareWave => match k[0] {
                0 => Complex64::new(0.5, 0.0),
                n if n % 2 != 0 => Complex64::new(0.0, -1.0 / (PI * n as f64)),
                _ => zero,
            },
            ClosedFormSpec::Tensor { left, right } => {
                let dl = left.dim();
                left.coefficient(&k[..dl]) * right.coefficient(&k[dl..])
            }
            ClosedFormSpec::ConeSupported { cone, inside_exp, outside_exp } => {
                let e = if cone.contains(k) { *inside_exp } else { *outside_exp };
                Complex64::new(bracket_from_norm_sq(norm_sq(k), e), 0.0)
            }
            ClosedFormSpec::Sum { terms } => terms.iter().map(|t| t.coefficient(k)).sum(),
        }
    }

    /// Pointwise value at torus point `t`, when the distribution is a function.
    /// Jump points take the midpoint value.
    pub fn sample(&self, t: &[f64]) -> Option<Complex64> {
        match self {
            ClosedFormSpec::DiracComb { .. } | ClosedFormSpec::ConeSupported { .. } => None,
            ClosedFormSpec::Constant { .. } => Some(Complex64::new(1.0, 0.0)),
            ClosedFormSpec::Harmonic { index } => {
                let phase: f64 = index.iter().zip(t).map(|(m, x)| *m as f64 * x).sum();
                Some(Complex64::from_polar(1.0, 2.0 * PI * phase))
            }
            ClosedFormSpec::Sawtooth => {
                let x = t[0] - t[0].floor();
                Some(Complex64::new(if x == 0.0 { 0.0 } else { x - 0.5 }, 0.0))
            }
            ClosedFormSpec::SquareWave => {
                let x = t[0] - t[0].floor();
                let v = if x == 0.0 || x == 0.5 {
                    0.5
                } else if x < 0.5 {
                    1.0
                } else {
                    0.0
                };
                Some(Complex64::new(v, 0.0))
            }
            ClosedFormSpec::Tensor { left, right } => {
                let dl = left.dim();
                Some(left.sample(&t[..dl])? * right.sample(&t[dl..])?)
            }
            ClosedFormSpec::Sum { terms } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for term in terms {
                    acc += term.sample(t)?;
                }
                Some(acc)
            }
        }
    }
}

/// Exact coefficient field of a closed-form distribution on the box of `radius`.
pub fn from_closed_form(spec: &ClosedFormSpec, radius: usize) -> Result<CoefficientField> {
    if radius < 1 {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    spec.validate(radius)?;
    CoefficientField::from_fn(spec.dim(), radius, |k| spec.coefficient(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Midpoint-rule coefficient of a 1-D function with 2^16 nodes.
    fn quadrature(f: impl Fn(f64) -> f64, n: i64) -> Complex64 {
        let m = 1 << 16;
        (0..m)
            .map(|j| {
                let x = (j as f64 + 0.5) / m as f64;
                Complex64::from_polar(f(x), -2.0 * PI * n as f64 * x)
            })
            .sum::<Complex64>()
            / m as f64
    }

    #[test]
    fn constant_field() {
        let f = from_closed_form(&ClosedFormSpec::Constant { dim: 1 }, 4).unwrap();
        for (k, v) in f.iter() {
            let expect = if k.coords()[0] == 0 { 1.0 } else { 0.0 };
            assert_eq!(v, Complex64::new(expect, 0.0));
        }
    }

    #[test]
    fn sawtooth_matches_quadrature() {
        let f = from_closed_form(&ClosedFormSpec::Sawtooth, 16).unwrap();
        assert!((f.get(&[1]) - Complex64::new(0.0, 1.0 / (2.0 * PI))).norm() < 1e-15);
        for n in -16..=16 {
            let q = quadrature(|x| x - 0.5, n);
            assert!((q - f.get(&[n])).norm() < 1e-8, "n={n}");
        }
    }

    #[test]
    fn square_wave_matches_quadrature() {
        let f = from_closed_form(&ClosedFormSpec::SquareWave, 3).unwrap();
        assert_eq!(f.get(&[2]), Complex64::new(0.0, 0.0));
        assert!((f.get(&[3]) - Complex64::new(0.0, -1.0 / (3.0 * PI))).norm() < 1e-15);
        for n in -3..=3 {
            let q = quadrature(|x| if x < 0.5 { 1.0 } else { 0.0 }, n);
            assert!((q - f.get(&[n])).norm() < 1e-8, "n={n}");
        }
    }

    #[test]
    fn parseval_for_square_wave_approaches_half_from_below() {
        let mut prev = 0.0;
        for n in [4usize, 8, 16, 32, 64] {
            let f = from_closed_form(&ClosedFormSpec::SquareWave, n).unwrap();
            let e: f64 = f.data().iter().map(|c| c.norm_sqr()).sum();
            assert!(e >= prev && e < 0.5);
            prev = e;
        }
        assert!(0.5 - prev < 0.02);
    }

    #[test]
    fn harmonic_outside_box_rejected() {
        let spec = ClosedFormSpec::Harmonic { index: vec![5, 0] };
        assert!(matches!(from_closed_form(&spec, 4), Err(Error::IndexOutsideBox { .. })));
        assert!(from_closed_form(&spec, 5).is_ok());
    }

    #[test]
    fn tensor_is_outer_product() {
        let f = from_closed_form(&ClosedFormSpec::square_wave_in_x(), 3).unwrap();
        assert_eq!(f.dim(), 2);
        assert_eq!(f.get(&[1, 0]), Complex64::new(0.0, -1.0 / PI));
        assert_eq!(f.get(&[1, 1]), Complex64::new(0.0, 0.0));
    }
}
