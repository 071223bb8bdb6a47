//! Compatible coefficient estimates: cone-restricted weighted sums, decay
//! exponent estimation and the combined compatibility verdict that yields an
//! order `τ` for the product.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cones::{
    count_growth_fit, disjoint_after_negation, uniform_directions, CountGrowthFit, Disjointness, LatticeCone,
};
use crate::distributions::{exponent_grid, squared_terms, CoefficientField, EXPONENT_MAX, EXPONENT_STEP};
use crate::error::{Error, Result};
use crate::product::{product_order_bound, OrderBoundInputs};
use crate::trace::{dyadic_radii, validate_radii, PartialSumTrace, WeightedTerms};

/// Smallest field radius accepted by [`estimate_decay_exponents`].
pub const MIN_PROFILE_RADIUS: usize = 16;

fn check_cone_dim(a: &CoefficientField, cone: &LatticeCone) -> Result<()> {
    if a.dim() != cone.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: cone.dim() });
    }
    Ok(())
}

fn cone_terms(a: &CoefficientField, cone: &LatticeCone, complement: bool) -> WeightedTerms {
    squared_terms(a, |k| cone.contains(k) != complement)
}

/// Trace of `Σ |a_k|^2 <k>^{2s}` over `k ∈ Γ ∩ Z^d` (or its complement).
pub fn cone_sum(
    a: &CoefficientField,
    cone: &LatticeCone,
    s: f64,
    radii: &[usize],
    complement: bool,
) -> Result<PartialSumTrace> {
    check_cone_dim(a, cone)?;
    validate_radii(radii, 2)?;
    if *radii.last().unwrap() > a.radius() {
        return Err(Error::InvalidRadii(radii.to_vec(), format!("exceed field radius {}", a.radius())));
    }
    cone_terms(a, cone, complement).trace(s, radii)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub cone: LatticeCone,
    /// Tolerated growth inside the cone.
    pub alpha: f64,
    /// Guaranteed decay outside the cone.
    pub beta: f64,
    pub inside_trace: PartialSumTrace,
    pub outside_trace: PartialSumTrace,
    /// Reasons the estimate cannot be trusted; empty when it can.
    pub flags: Vec<String>,
}

impl DecayProfile {
    pub fn is_flagged(&self) -> bool {
        !self.flags.is_empty()
    }
}

/// `alpha` is the smallest grid value with the inside sum at `-alpha`
/// convergent; `beta` the last grid value of the upward scan from 0 whose
/// complement sum at `+beta` is convergent.
pub fn estimate_decay_exponents(a: &CoefficientField, cone: &LatticeCone) -> Result<DecayProfile> {
    check_cone_dim(a, cone)?;
    if a.radius() < MIN_PROFILE_RADIUS {
        return Err(Error::Precondition(format!(
            "decay estimation needs field radius >= {MIN_PROFILE_RADIUS}, got {}",
            a.radius()
        )));
    }
    let radii = dyadic_radii(a.radius());
    let mut flags = Vec::new();

    let inside = cone_terms(a, cone, false);
    let mut found = None;
    let mut inside_last = None;
    for alpha in exponent_grid() {
        let t = inside.trace(-alpha, &radii)?;
        if t.verdict.is_convergent() {
            found = Some((alpha, t));
            break;
        }
        inside_last = Some(t);
    }
    let (alpha, inside_trace) = match found {
        Some(x) => x,
        None => {
            let t = inside_last.expect("grid is nonempty");
            flags.push(format!("inside sum not convergent for any alpha <= {EXPONENT_MAX} ({})", t.verdict));
            (EXPONENT_MAX, t)
        }
    };

    let outside = cone_terms(a, cone, true);
    let mut best: Option<(f64, PartialSumTrace)> = None;
    let mut first_fail = None;
    for beta in exponent_grid() {
        let t = outside.trace(beta, &radii)?;
        if t.verdict.is_convergent() {
            best = Some((beta, t));
        } else {
            first_fail = Some((beta, t));
            break;
        }
    }
    let (beta, outside_trace) = match (best, first_fail) {
        (Some(b), _) => b,
        (None, Some((_, t))) => {
            flags.push(format!("complement sum not convergent at beta = 0 ({})", t.verdict));
            (0.0, t)
        }
        (None, None) => unreachable!("grid is nonempty"),
    };
    Ok(DecayProfile { cone: cone.clone(), alpha, beta, inside_trace, outside_trace, flags })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub disjointness: Disjointness,
    pub counting: Option<CountGrowthFit>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub profiles1: Vec<DecayProfile>,
    pub profiles2: Vec<DecayProfile>,
    pub pairs: Vec<PairCheck>,
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub gamma_hat: f64,
    pub gamma: f64,
    pub verdict: bool,
    pub tau: Option<f64>,
    pub failures: Vec<String>,
}

fn count_radii(dim: usize) -> Vec<usize> {
    if dim <= 2 {
        vec![8, 16, 32, 64]
    } else {
        vec![4, 8, 16, 32]
    }
}

fn count_directions(dim: usize) -> Result<Vec<Vec<f64>>> {
    uniform_directions(dim, if dim == 3 { 32 } else { 16 })
}

/// Splits `a` into one component per cone: index `k` goes to the first cone
/// containing it, indices outside every cone go to the first component.
pub fn split_by_cones(a: &CoefficientField, cones: &[LatticeCone]) -> Result<Vec<CoefficientField>> {
    for c in cones {
        check_cone_dim(a, c)?;
    }
    let zero = Complex64::new(0.0, 0.0);
    Ok((0..cones.len())
        .map(|i| {
            let mut part = a.clone();
            let shape = a.shape();
            let mut k = vec![0i64; a.dim()];
            for (idx, v) in part.data_mut().iter_mut().enumerate() {
                shape.coords_into(idx, &mut k);
                let owner = cones.iter().position(|c| c.contains(&k)).unwrap_or(0);
                if owner != i {
                    *v = zero;
                }
            }
            part
        })
        .collect())
}

/// Compatibility of `f1` on `cones1` with `f2` on `cones2`. A single field
/// with several cones is first split with [`split_by_cones`].
pub fn check_compatibility(
    f1: &CoefficientField,
    cones1: &[LatticeCone],
    f2: &CoefficientField,
    cones2: &[LatticeCone],
) -> Result<CompatibilityReport> {
    let parts1: Vec<_> = split_by_cones(f1, cones1)?.into_iter().zip(cones1.iter().cloned()).collect();
    let parts2: Vec<_> = split_by_cones(f2, cones2)?.into_iter().zip(cones2.iter().cloned()).collect();
    check_compatibility_components(&parts1, &parts2)
}

/// Compatibility for explicit decompositions `f1 = Σ_i a^i` and `f2 = Σ_j a^j`
/// with one cone per component.
pub fn check_compatibility_components(
    parts1: &[(CoefficientField, LatticeCone)],
    parts2: &[(CoefficientField, LatticeCone)],
) -> Result<CompatibilityReport> {
    if parts1.is_empty() || parts2.is_empty() {
        return Err(Error::InvalidArgument("each side needs at least one cone".into()));
    }
    let dim = parts1[0].0.dim();
    for (f, _) in parts1.iter().chain(parts2) {
        if f.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: f.dim() });
        }
    }
    let profiles1 = parts1.iter().map(|(f, c)| estimate_decay_exponents(f, c)).collect::<Result<Vec<_>>>()?;
    let profiles2 = parts2.iter().map(|(f, c)| estimate_decay_exponents(f, c)).collect::<Result<Vec<_>>>()?;

    let mut failures = Vec::new();
    for (side, profiles) in [(1, &profiles1), (2, &profiles2)] {
        for (i, p) in profiles.iter().enumerate() {
            for flag in &p.flags {
                failures.push(format!("f{side} cone {i}: {flag}"));
            }
        }
    }

    let directions = count_directions(dim)?;
    let radii = count_radii(dim);
    let mut pairs = Vec::new();
    let mut gamma_hat: f64 = 0.0;
    for (i, (_, c1)) in parts1.iter().enumerate() {
        for (j, (_, c2)) in parts2.iter().enumerate() {
            let disjointness = disjoint_after_negation(c1, c2)?;
            let mut counting = None;
            if !disjointness.disjoint {
                failures.push(format!("pair ({i},{j}): cone {i} of f1 meets the negated cone {j} of f2"));
            } else if disjointness.touching {
                failures.push(format!("pair ({i},{j}): cone closures share a ray, counts unbounded"));
            } else {
                if !disjointness.certified {
                    failures.push(format!("pair ({i},{j}): disjointness certificate unavailable"));
                }
                let fit = count_growth_fit(c1, c2, &directions, &radii)?;
                gamma_hat = gamma_hat.max(fit.gamma_hat);
                counting = Some(fit);
            }
            pairs.push(PairCheck { i, j, disjointness, counting });
        }
    }

    let alpha1 = profiles1.iter().map(|p| p.alpha).fold(0.0, f64::max);
    let alpha2 = profiles2.iter().map(|p| p.alpha).fold(0.0, f64::max);
    let beta1 = profiles1.iter().map(|p| p.beta).fold(f64::INFINITY, f64::min);
    let beta2 = profiles2.iter().map(|p| p.beta).fold(f64::INFINITY, f64::min);
    let gamma = ((gamma_hat / EXPONENT_STEP).ceil() * EXPONENT_STEP).max(1.0);
    if beta1 < alpha2 {
        failures.push(format!("beta1 = {beta1} < alpha2 = {alpha2}"));
    }
    if beta2 < alpha1 {
        failures.push(format!("beta2 = {beta2} < alpha1 = {alpha1}"));
    }

    let mut tau = None;
    if failures.is_empty() {
        match product_order_bound(&OrderBoundInputs { alpha1, alpha2, beta1, beta2, gamma, dim }) {
            Ok(t) => tau = Some(t),
            Err(e) => failures.push(e.to_string()),
        }
    }
    Ok(CompatibilityReport {
        profiles1,
        profiles2,
        pairs,
        alpha1,
        beta1,
        alpha2,
        beta2,
        gamma_hat,
        gamma,
        verdict: failures.is_empty(),
        tau,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{from_closed_form, ClosedFormSpec};

    fn supported(cone: &LatticeCone, inside: f64, outside: f64, radius: usize) -> CoefficientField {
        let spec = ClosedFormSpec::ConeSupported { cone: cone.clone(), inside_exp: inside, outside_exp: outside };
        from_closed_form(&spec, radius).unwrap()
    }

    #[test]
    fn comb_sector_sums() {
        let comb = from_closed_form(&ClosedFormSpec::DiracComb { dim: 2 }, 128).unwrap();
        let sector = LatticeCone::at_origin(2, &[(&[1, 0], true), (&[1, -1], false), (&[1, 1], false)]).unwrap();
        let radii = dyadic_radii(128);
        assert!(cone_sum(&comb, &sector, -1.25, &radii, false).unwrap().verdict.is_convergent());
        assert_eq!(cone_sum(&comb, &sector, 0.0, &radii, false).unwrap().verdict, crate::trace::Verdict::Divergent);
        let zero = CoefficientField::zeros(2, 16).unwrap();
        let t = cone_sum(&zero, &sector, 3.0, &dyadic_radii(16), true).unwrap();
        assert!(t.sums.iter().all(|&s| s == 0.0) && t.verdict.is_convergent());
    }

    #[test]
    fn profiles() {
        let (g1, _) = LatticeCone::standard_pair();
        let f = supported(&g1, 0.0, -10.0, 128);
        let p = estimate_decay_exponents(&f, &g1).unwrap();
        assert_eq!(p.alpha, 1.25);
        assert!(p.beta >= 8.0 && p.beta < 9.0 && !p.is_flagged(), "{p:?}");

        let zero = CoefficientField::zeros(2, 32).unwrap();
        let p = estimate_decay_exponents(&zero, &g1).unwrap();
        assert_eq!((p.alpha, p.beta), (0.0, EXPONENT_MAX));

        let comb = from_closed_form(&ClosedFormSpec::DiracComb { dim: 2 }, 128).unwrap();
        let quadrant = LatticeCone::at_origin(2, &[(&[1, 0], false), (&[0, 1], false)]).unwrap();
        let p = estimate_decay_exponents(&comb, &quadrant).unwrap();
        assert_eq!(p.alpha, 1.25);
        assert_eq!(p.beta, 0.0);
        assert!(p.is_flagged());
    }

    #[test]
    fn compatible_pair() {
        let (g1, g2) = LatticeCone::standard_pair();
        let f1 = supported(&g1, 0.0, -10.0, 64);
        let f2 = supported(&g2, 0.0, -10.0, 64);
        let r = check_compatibility(&f1, std::slice::from_ref(&g1), &f2, std::slice::from_ref(&g2)).unwrap();
        assert!(r.verdict, "{:?}", r.failures);
        let expect = product_order_bound(&OrderBoundInputs {
            alpha1: r.alpha1,
            alpha2: r.alpha2,
            beta1: r.beta1,
            beta2: r.beta2,
            gamma: r.gamma,
            dim: 2,
        })
        .unwrap();
        assert_eq!(r.tau, Some(expect));
    }

    #[test]
    fn incompatible_pairs() {
        let (g1, g2) = LatticeCone::standard_pair();
        let comb = from_closed_form(&ClosedFormSpec::DiracComb { dim: 2 }, 64).unwrap();
        let r = check_compatibility(&comb, std::slice::from_ref(&g1), &comb, std::slice::from_ref(&g2)).unwrap();
        assert!(!r.verdict && r.tau.is_none());

        let f1 = supported(&g1, 0.0, -10.0, 64);
        let f2 = supported(&g1.negated(), 0.0, -10.0, 64);
        let r = check_compatibility(&f1, std::slice::from_ref(&g1), &f2, &[g1.negated()]).unwrap();
        assert!(!r.verdict);
        assert!(!r.pairs[0].disjointness.disjoint);
    }

    #[test]
    fn split_preserves_sum() {
        let (g1, g2) = LatticeCone::standard_pair();
        let comb = from_closed_form(&ClosedFormSpec::DiracComb { dim: 2 }, 8).unwrap();
        let parts = split_by_cones(&comb, &[g1, g2]).unwrap();
        let total = parts[0].add(&parts[1]).unwrap();
        assert_eq!(total, comb);
    }
}
