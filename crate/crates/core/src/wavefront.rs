//! Discrete Sobolev wave-front analysis: a direction `ξ0` is regular at `x0`
//! for exponent `s` when the localized coefficients `(fψ)_per` have
//! `Σ_{n ∈ Γ ∩ Z^d} |a_n|^2 <n>^{2s}` convergent on a cone `Γ` around `ξ0`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cones::LatticeCone;
use crate::distributions::{localize_coefficients, periodize_localized, squared_terms, CoefficientField, GridSamples};
use crate::error::{Error, Result};
use crate::trace::{dyadic_radii, PartialSumTrace, Verdict, WeightedTerms};
use crate::window::{wrap_centered, LocalizationWindow};

/// Localized coefficients below this fraction of the largest one are
/// treated as exact zeros (quadrature round-off level).
pub const NOISE_FLOOR: f64 = 1e-12;
/// Search interval for critical exponents.
pub const THRESHOLD_RANGE: (f64, f64) = (-6.0, 6.0);
/// Resolution of the critical-exponent bisection.
pub const THRESHOLD_RESOLUTION: f64 = 0.05;
/// Exponents at which every scanned direction reports a verdict.
pub const DEFAULT_S_GRID: [f64; 9] = [-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0];

/// Input to the wave-front routines.
#[derive(Debug, Clone)]
pub enum Signal {
    /// Samples on the uniform grid of the unit cell.
    Samples(GridSamples),
    /// Global Fourier coefficients of a periodic distribution.
    Coefficients(CoefficientField),
}

impl Signal {
    pub fn dim(&self) -> usize {
        match self {
            Signal::Samples(s) => s.dim,
            Signal::Coefficients(a) => a.dim(),
        }
    }
}

fn check_window(x0: &[f64], window: &LocalizationWindow, dim: usize) -> Result<()> {
    window.validate()?;
    if x0.len() != dim || window.dim() != dim {
        return Err(Error::DimensionMismatch { left: dim, right: x0.len().max(window.dim()) });
    }
    if !window.is_full() && x0.iter().zip(&window.center).any(|(a, b)| wrap_centered(a - b).abs() > 1e-12) {
        return Err(Error::InvalidArgument(format!("window centered at {:?}, expected x0 = {x0:?}", window.center)));
    }
    Ok(())
}

/// Coefficients of `(fψ)_per` up to `radius`, with the round-off floor removed.
pub fn localized_field(
    signal: &Signal,
    x0: &[f64],
    window: &LocalizationWindow,
    radius: usize,
) -> Result<CoefficientField> {
    check_window(x0, window, signal.dim())?;
    let mut a = match signal {
        Signal::Samples(s) => periodize_localized(s, window, radius)?,
        Signal::Coefficients(c) => localize_coefficients(c, window, radius)?,
    };
    let max = a.data().iter().map(|v| v.norm()).fold(0.0, f64::max);
    for v in a.data_mut() {
        if v.norm() <= NOISE_FLOOR * max {
            *v = 0.0.into();
        }
    }
    Ok(a)
}

fn cone_around(direction: &[f64], aperture: f64) -> Result<LatticeCone> {
    LatticeCone::circular(direction, aperture)
}

fn direction_terms(a: &CoefficientField, direction: &[f64], aperture: f64) -> Result<WeightedTerms> {
    let cone = cone_around(direction, aperture)?;
    Ok(squared_terms(a, |k| cone.contains(k)))
}

/// Cone trace at exponent `s` for already localized coefficients.
pub fn direction_trace(a: &CoefficientField, direction: &[f64], aperture: f64, s: f64) -> Result<PartialSumTrace> {
    direction_terms(a, direction, aperture)?.trace(s, &dyadic_radii(a.radius()))
}

/// Verdict for `(x0, ξ0) ∉ WF_s(f)`, with aperture `θ` in radians.
#[allow(clippy::too_many_arguments)]
pub fn is_regular_at(
    signal: &Signal,
    x0: &[f64],
    direction: &[f64],
    s: f64,
    aperture: f64,
    window: &LocalizationWindow,
    radius: usize,
) -> Result<Verdict> {
    let a = localized_field(signal, x0, window, radius)?;
    Ok(direction_trace(&a, direction, aperture, s)?.verdict)
}

/// Critical exponent of one direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    /// Zero of the fitted shell-growth exponent; `±inf` when it has no sign
    /// change on the search interval.
    pub estimate: f64,
    /// Largest exponent found convergent, if any.
    pub convergent_up_to: Option<f64>,
    /// Smallest exponent found divergent, if any.
    pub divergent_from: Option<f64>,
}

impl ThresholdEstimate {
    pub fn is_finite(&self) -> bool {
        self.estimate.is_finite()
    }
}

fn bisect(mut lo: f64, mut hi: f64, mut upper: impl FnMut(f64) -> bool) -> (f64, f64) {
    while hi - lo > THRESHOLD_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if upper(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

fn threshold_from_terms(terms: &WeightedTerms, radii: &[usize]) -> Result<ThresholdEstimate> {
    let (lo, hi) = THRESHOLD_RANGE;
    let slope = |s: f64| -> Result<f64> { Ok(terms.trace(s, radii)?.slope.unwrap_or(f64::NEG_INFINITY)) };
    let verdict = |s: f64| -> Result<Verdict> { Ok(terms.trace(s, radii)?.verdict) };

    let estimate = if slope(hi)? <= 0.0 || verdict(hi)?.is_convergent() {
        f64::INFINITY
    } else if slope(lo)? >= 0.0 {
        f64::NEG_INFINITY
    } else {
        let (a, b) = bisect(lo, hi, |s| slope(s).map(|v| v > 0.0).unwrap_or(true));
        0.5 * (a + b)
    };

    let convergent_up_to = if verdict(hi)?.is_convergent() {
        Some(hi)
    } else if !verdict(lo)?.is_convergent() {
        None
    } else {
        Some(bisect(lo, hi, |s| verdict(s).map(|v| !v.is_convergent()).unwrap_or(true)).0)
    };
    let divergent_from = if verdict(lo)? == Verdict::Divergent {
        Some(lo)
    } else if verdict(hi)? != Verdict::Divergent {
        None
    } else {
        Some(bisect(lo, hi, |s| verdict(s).map(|v| v == Verdict::Divergent).unwrap_or(false)).1)
    };
    Ok(ThresholdEstimate { estimate, convergent_up_to, divergent_from })
}

/// Bisection over `s ∈ [-6, 6]` for the regularity boundary in direction `ξ0`.
pub fn sobolev_threshold(
    signal: &Signal,
    x0: &[f64],
    direction: &[f64],
    aperture: f64,
    window: &LocalizationWindow,
    radius: usize,
) -> Result<ThresholdEstimate> {
    let a = localized_field(signal, x0, window, radius)?;
    threshold_from_terms(&direction_terms(&a, direction, aperture)?, &dyadic_radii(radius))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub direction: Vec<f64>,
    pub verdict: Verdict,
    pub trace: PartialSumTrace,
    /// Verdicts at the exponents of `WavefrontReport::s_grid`.
    pub grid_verdicts: Vec<Verdict>,
    pub threshold: ThresholdEstimate,
}

impl DirectionReport {
    pub fn is_regular(&self) -> bool {
        self.verdict.is_convergent()
    }

    /// Polar angle in degrees for planar directions.
    pub fn angle_deg(&self) -> f64 {
        match self.direction.len() {
            1 => {
                if self.direction[0] > 0.0 {
                    0.0
                } else {
                    180.0
                }
            }
            _ => self.direction[1].atan2(self.direction[0]).to_degrees(),
        }
    }
}

/// A round cone, given by its axis and half-angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeCover {
    pub axis: Vec<f64>,
    pub half_angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavefrontReport {
    pub x0: Vec<f64>,
    pub s: f64,
    pub aperture_deg: f64,
    pub radius: usize,
    pub s_grid: Vec<f64>,
    pub directions: Vec<DirectionReport>,
    /// Cones whose union contains every non-regular scanned direction.
    pub non_regular_cover: Vec<ConeCover>,
}

impl WavefrontReport {
    pub fn non_regular(&self) -> impl Iterator<Item = &DirectionReport> {
        self.directions.iter().filter(|d| !d.is_regular())
    }
}

fn scan_directions(dim: usize, count: usize) -> Result<Vec<Vec<f64>>> {
    match dim {
        1 => Ok(vec![vec![1.0], vec![-1.0]]),
        2 => {
            if count < 8 {
                return Err(Error::InvalidArgument(format!("need at least 8 directions in d=2, got {count}")));
            }
            crate::cones::uniform_directions(2, count)
        }
        3 => crate::cones::uniform_directions(3, count.max(1)),
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

fn cover(dim: usize, dirs: &[DirectionReport], aperture_deg: f64) -> Vec<ConeCover> {
    let bad: Vec<bool> = dirs.iter().map(|d| !d.is_regular()).collect();
    if dim != 2 {
        return dirs
            .iter()
            .filter(|d| !d.is_regular())
            .map(|d| ConeCover { axis: d.direction.clone(), half_angle_deg: aperture_deg })
            .collect();
    }
    let n = dirs.len();
    if bad.iter().all(|&b| b) {
        return vec![ConeCover { axis: vec![1.0, 0.0], half_angle_deg: 180.0 }];
    }
    let step = 360.0 / n as f64;
    let start = (0..n).find(|&i| !bad[i]).expect("some direction is regular");
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let idx = (start + i) % n;
        if !bad[idx] {
            i += 1;
            continue;
        }
        let mut len = 0;
        while i + len < n && bad[(start + i + len) % n] {
            len += 1;
        }
        let first = dirs[idx].angle_deg();
        let mid = (first + 0.5 * step * (len - 1) as f64).to_radians();
        out.push(ConeCover {
            axis: vec![mid.cos(), mid.sin()],
            half_angle_deg: 0.5 * step * (len - 1) as f64 + aperture_deg,
        });
        i += len;
    }
    out
}

/// Runs the cone test over a uniform direction grid at `x0`, aperture in
/// degrees. Directions in d=1 are always `±1`.
pub fn wavefront_scan(
    signal: &Signal,
    x0: &[f64],
    s: f64,
    n_directions: usize,
    aperture_deg: f64,
    window: &LocalizationWindow,
    radius: usize,
) -> Result<WavefrontReport> {
    let dim = signal.dim();
    let dirs = scan_directions(dim, n_directions)?;
    let aperture = aperture_deg.to_radians();
    if !(aperture > 0.0 && aperture < PI / 2.0) {
        return Err(Error::InvalidArgument(format!("aperture {aperture_deg} deg must lie in (0, 90)")));
    }
    let a = localized_field(signal, x0, window, radius)?;
    let radii = dyadic_radii(radius);
    let s_grid = DEFAULT_S_GRID.to_vec();
    let directions = dirs
        .into_par_iter()
        .map(|u| {
            let terms = direction_terms(&a, &u, aperture)?;
            let trace = terms.trace(s, &radii)?;
            let grid_verdicts = s_grid.iter().map(|&t| Ok(terms.trace(t, &radii)?.verdict)).collect::<Result<_>>()?;
            let threshold = threshold_from_terms(&terms, &radii)?;
            Ok(DirectionReport { direction: u, verdict: trace.verdict, trace, grid_verdicts, threshold })
        })
        .collect::<Result<Vec<_>>>()?;
    let non_regular_cover = cover(dim, &directions, aperture_deg);
    Ok(WavefrontReport { x0: x0.to_vec(), s, aperture_deg, radius, s_grid, directions, non_regular_cover })
}

/// Outcome of the converse check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConverseCheck {
    pub global_trace: PartialSumTrace,
    pub localized_trace: PartialSumTrace,
    pub holds: bool,
}

/// Given global coefficients with `Σ_{Γ ∩ Z^d} |a_n|^2 <n>^{2s}` convergent,
/// tests that the localized coefficients still have a convergent sum over the
/// compactly nested sub-cone `Γ1`.
pub fn converse_regularity_check(
    a: &CoefficientField,
    cone: &LatticeCone,
    s: f64,
    subcone: &LatticeCone,
    window: &LocalizationWindow,
    x0: &[f64],
) -> Result<ConverseCheck> {
    check_window(x0, window, a.dim())?;
    crate::cones::check_compact_containment(subcone, cone)?;
    let global_trace = crate::compat::cone_sum(a, cone, s, &dyadic_radii(a.radius()), false)?;
    match global_trace.verdict {
        Verdict::Convergent => {}
        Verdict::Divergent => {
            return Err(Error::Precondition(format!("cone sum at s = {s} diverges on the global coefficients")))
        }
        Verdict::Inconclusive => {
            return Err(Error::Inconclusive(format!("cone sum at s = {s} on the global coefficients")))
        }
    }
    let local = localized_field(&Signal::Coefficients(a.clone()), x0, window, a.radius() / 2)?;
    let localized_trace = crate::compat::cone_sum(&local, subcone, s, &dyadic_radii(local.radius()), false)?;
    let holds = localized_trace.verdict.is_convergent();
    Ok(ConverseCheck { global_trace, localized_trace, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{from_closed_form, ClosedFormSpec};
    use num_complex::Complex64;

    fn square_in_x_samples(m: usize) -> Signal {
        let spec = ClosedFormSpec::square_wave_in_x();
        Signal::Samples(GridSamples::from_fn(2, m, |t| spec.sample(t).unwrap()).unwrap())
    }

    fn jump_window() -> LocalizationWindow {
        LocalizationWindow::new(vec![0.5, 0.5], 0.9, 0.2, 8).unwrap()
    }

    #[test]
    fn square_wave_in_x_cone_verdicts() {
        let f = square_in_x_samples(256);
        let w = jump_window();
        let x0 = [0.5, 0.5];
        let th = 20f64.to_radians();
        assert_eq!(is_regular_at(&f, &x0, &[1.0, 0.0], 0.0, th, &w, 64).unwrap(), Verdict::Convergent);
        assert_eq!(is_regular_at(&f, &x0, &[1.0, 0.0], 1.0, th, &w, 64).unwrap(), Verdict::Divergent);
        assert_eq!(is_regular_at(&f, &x0, &[0.0, 1.0], 1.0, th, &w, 64).unwrap(), Verdict::Convergent);
    }

    #[test]
    fn window_must_sit_at_x0() {
        let f = square_in_x_samples(64);
        let err = is_regular_at(&f, &[0.2, 0.5], &[1.0, 0.0], 0.0, 0.3, &jump_window(), 16);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn thresholds_in_one_dimension() {
        let x0 = [0.5];
        let w = LocalizationWindow::new(vec![0.5], 0.9, 0.2, 8).unwrap();
        let sq = from_closed_form(&ClosedFormSpec::SquareWave, 256).unwrap();
        let t = sobolev_threshold(&Signal::Coefficients(sq), &x0, &[1.0], 0.3, &w, 128).unwrap();
        assert!((t.estimate - 0.5).abs() <= 0.1, "{t:?}");
        let saw = from_closed_form(&ClosedFormSpec::Sawtooth, 256).unwrap();
        let w0 = LocalizationWindow::new(vec![0.0], 0.9, 0.2, 8).unwrap();
        let t = sobolev_threshold(&Signal::Coefficients(saw), &[0.0], &[-1.0], 0.3, &w0, 128).unwrap();
        assert!((t.estimate - 0.5).abs() <= 0.1, "{t:?}");
        assert!(t.convergent_up_to.unwrap() <= t.divergent_from.unwrap());
    }

    #[test]
    fn smooth_signal_has_infinite_threshold() {
        let spec = ClosedFormSpec::Harmonic { index: vec![3] };
        let f = Signal::Samples(GridSamples::from_fn(1, 512, |t| spec.sample(t).unwrap()).unwrap());
        let w = LocalizationWindow::new(vec![0.5], 0.9, 0.2, 8).unwrap();
        let t = sobolev_threshold(&f, &[0.5], &[1.0], 0.3, &w, 64).unwrap();
        assert_eq!(t.estimate, f64::INFINITY);
    }

    #[test]
    fn scan_of_square_wave_in_x() {
        let f = square_in_x_samples(256);
        let r = wavefront_scan(&f, &[0.5, 0.5], 1.0, 16, 20.0, &jump_window(), 64).unwrap();
        let bad: Vec<f64> = r.non_regular().map(|d| d.angle_deg()).collect();
        assert!(!bad.is_empty());
        for a in &bad {
            let off_axis = a.abs().min(180.0 - a.abs());
            assert!(off_axis <= 25.0, "{bad:?}");
        }
        for c in &r.non_regular_cover {
            assert!(c.half_angle_deg < 90.0);
        }
    }

    #[test]
    fn smooth_field_scan_is_clean() {
        let f = Signal::Samples(GridSamples::from_fn(2, 128, |_| Complex64::new(1.0, 0.0)).unwrap());
        let r = wavefront_scan(&f, &[0.5, 0.5], 1.0, 8, 20.0, &jump_window(), 32).unwrap();
        assert_eq!(r.non_regular().count(), 0);
        assert!(r.non_regular_cover.is_empty());
    }

    #[test]
    fn converse_check_holds_for_field_small_on_cone() {
        let cone = LatticeCone::circular(&[1.0, 0.0], 30f64.to_radians()).unwrap();
        let sub = LatticeCone::circular(&[1.0, 0.0], 15f64.to_radians()).unwrap();
        let spec = ClosedFormSpec::ConeSupported { cone: cone.clone(), inside_exp: -10.0, outside_exp: -3.0 };
        let a = from_closed_form(&spec, 128).unwrap();
        for m in [3, 5, 8] {
            let w = LocalizationWindow::new(vec![0.3, 0.6], 0.9, 0.2, m).unwrap();
            let c = converse_regularity_check(&a, &cone, 2.0, &sub, &w, &[0.3, 0.6]).unwrap();
            assert!(c.holds, "m = {m}: {:?}", c.localized_trace);
        }
        let comb = from_closed_form(&ClosedFormSpec::DiracComb { dim: 2 }, 32).unwrap();
        let w = LocalizationWindow::new(vec![0.3, 0.6], 0.9, 0.2, 8).unwrap();
        assert!(converse_regularity_check(&comb, &cone, 0.0, &sub, &w, &[0.3, 0.6]).is_err());
    }
}
