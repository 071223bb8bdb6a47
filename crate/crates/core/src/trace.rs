//! Partial-sum traces of weighted coefficient sums and the finite-radius
//! convergence classifier.
//!
//! A trace records `S(R) = Σ_{|k| ≤ R} w_k <k>^{2s}` at increasing radii. The
//! shell increments `S(R_j) - S(R_{j-1})`, normalised per unit of `ln R`, are
//! fitted against `ln R_j` over the last few shells; the fitted exponent `σ`
//! together with the tail ratio `S(R_max)/S(R_max/2) - 1` decides the verdict.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::bracket_from_norm_sq;

/// Tail ratio below which a trace may be called convergent.
pub const TAIL_RATIO_MAX: f64 = 0.05;
/// Shell-growth exponent below which a trace may be called convergent.
pub const CONVERGENT_SLOPE_MAX: f64 = 0.05;
/// Shell-growth exponent above which a trace is called divergent.
pub const DIVERGENT_SLOPE_MIN: f64 = 0.2;
/// Number of outermost shells used for the slope fit.
pub const TAIL_SHELLS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

impl Verdict {
    pub fn is_convergent(self) -> bool {
        self == Verdict::Convergent
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Convergent => "convergent",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialSumTrace {
    pub radii: Vec<usize>,
    pub sums: Vec<f64>,
    /// `S(R_max / 2)`.
    pub half_sum: f64,
    pub tail_ratio: f64,
    /// Fitted shell-growth exponent; `None` when the outermost shell is empty
    /// (the sum has stopped growing).
    pub slope: Option<f64>,
    pub verdict: Verdict,
}

impl PartialSumTrace {
    pub fn max_radius(&self) -> usize {
        *self.radii.last().expect("trace has radii")
    }

    pub fn final_sum(&self) -> f64 {
        *self.sums.last().expect("trace has sums")
    }

    /// Local shell-growth exponent between consecutive shells, aligned with `radii`.
    pub fn local_slopes(&self) -> Vec<Option<f64>> {
        let dens = shell_densities(&self.radii, &self.sums);
        let mut out = vec![None, None];
        for j in 1..dens.len() {
            let (a, b) = (dens[j - 1], dens[j]);
            out.push(if a > 0.0 && b > 0.0 {
                Some((b / a).ln() / (self.radii[j + 1] as f64 / self.radii[j] as f64).ln())
            } else {
                None
            });
        }
        out.truncate(self.radii.len());
        out
    }
}

/// Radii `R_max, R_max/2, ...` down to 2, in increasing order.
pub fn dyadic_radii(max_radius: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut r = max_radius;
    while r >= 2 {
        out.push(r);
        r /= 2;
    }
    out.reverse();
    out
}

pub(crate) fn validate_radii(radii: &[usize], min_len: usize) -> Result<()> {
    if radii.len() < min_len {
        return Err(Error::InvalidRadii(radii.to_vec(), format!("need at least {min_len} radii")));
    }
    if radii[0] == 0 {
        return Err(Error::InvalidRadii(radii.to_vec(), "radii must be positive".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidRadii(radii.to_vec(), "radii must be strictly increasing".into()));
    }
    Ok(())
}

fn shell_densities(radii: &[usize], sums: &[f64]) -> Vec<f64> {
    (1..radii.len())
        .map(|j| {
            let inc = (sums[j] - sums[j - 1]).max(0.0);
            inc / (radii[j] as f64 / radii[j - 1] as f64).ln()
        })
        .collect()
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// Applies the decision rule to precomputed cumulative sums.
pub fn classify(radii: &[usize], sums: &[f64], half_sum: f64) -> (Option<f64>, f64, Verdict) {
    let dens = shell_densities(radii, sums);
    let last = *sums.last().unwrap_or(&0.0);
    let tail_ratio = if half_sum > 0.0 {
        last / half_sum - 1.0
    } else if last > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };

    let slope = if dens.last().copied().unwrap_or(0.0) <= 0.0 {
        None
    } else {
        let xs: Vec<f64> = radii[1..].iter().map(|&r| (r as f64).ln()).collect();
        let start = dens.len().saturating_sub(TAIL_SHELLS);
        let mut pts: Vec<(f64, f64)> =
            (start..dens.len()).filter(|&j| dens[j] > 0.0).map(|j| (xs[j], dens[j].ln())).collect();
        if pts.len() < 2 {
            pts = (0..dens.len()).filter(|&j| dens[j] > 0.0).map(|j| (xs[j], dens[j].ln())).collect();
        }
        if pts.len() < 2 {
            Some(0.0)
        } else {
            let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            Some(least_squares_slope(&x, &y))
        }
    };

    let sigma = slope.unwrap_or(f64::NEG_INFINITY);
    let verdict = if tail_ratio < TAIL_RATIO_MAX && sigma < CONVERGENT_SLOPE_MAX {
        Verdict::Convergent
    } else if sigma > DIVERGENT_SLOPE_MIN {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    };
    (slope, tail_ratio, verdict)
}

/// Nonnegative terms `w_k` keyed by `|k|^2`, ready to be traced at any weight exponent.
#[derive(Debug, Clone, Default)]
pub struct WeightedTerms {
    entries: Vec<(i64, f64)>,
}

impl WeightedTerms {
    pub fn new(mut entries: Vec<(i64, f64)>) -> Self {
        entries.retain(|e| e.1 != 0.0);
        entries.sort_by_key(|e| e.0);
        WeightedTerms { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cumulative sums of `w_k <k>^{2s}` at `radii`, plus the sum at `R_max/2`.
    pub fn cumulative(&self, s: f64, radii: &[usize]) -> (Vec<f64>, f64) {
        let r_max = *radii.last().unwrap() as f64;
        let half_sq = (r_max / 2.0) * (r_max / 2.0);
        let mut half_sum = 0.0;
        let mut acc = 0.0;
        let mut it = self.entries.iter().peekable();
        let mut thresholds: Vec<(f64, Option<usize>)> =
            radii.iter().enumerate().map(|(i, &r)| ((r * r) as f64, Some(i))).collect();
        thresholds.push((half_sq, None));
        thresholds.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut out = vec![0.0; radii.len()];
        for (limit, slot) in thresholds {
            while let Some(&&(n2, w)) = it.peek() {
                if (n2 as f64) <= limit {
                    acc += w * bracket_from_norm_sq(n2, 2.0 * s);
                    it.next();
                } else {
                    break;
                }
            }
            match slot {
                Some(i) => out[i] = acc,
                None => half_sum = acc,
            }
        }
        (out, half_sum)
    }

    pub fn trace(&self, s: f64, radii: &[usize]) -> Result<PartialSumTrace> {
        validate_radii(radii, 2)?;
        let (sums, half_sum) = self.cumulative(s, radii);
        let (slope, tail_ratio, verdict) = classify(radii, &sums, half_sum);
        Ok(PartialSumTrace { radii: radii.to_vec(), sums, half_sum, tail_ratio, slope, verdict })
    }
}
