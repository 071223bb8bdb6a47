//! Disjointness of `Γ1` and `-Γ2`, the counting function
//! `c(n) = #{k ∈ Z^d : k ∈ Γ2, n - k ∈ Γ1}`, its growth fit, and the
//! separation constant `inf ⟨ξ - n⟩ / ⟨n⟩` over `ξ ∈ Γ1`, `n ∉ Γ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::{self, Constraint};
use super::LatticeCone;
use crate::error::{Error, Result};
use crate::lattice::{for_each_in_box, norm_sq, MultiIndex};

fn check_pair(c1: &LatticeCone, c2: &LatticeCone) -> Result<()> {
    if c1.dim() != c2.dim() {
        return Err(Error::DimensionMismatch { left: c1.dim(), right: c2.dim() });
    }
    Ok(())
}

fn probe_radius(dim: usize) -> i64 {
    if dim <= 2 {
        16
    } else {
        8
    }
}

/// Outcome of the disjointness test for `Γ1 ∩ (-Γ2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disjointness {
    /// No point of the open cones is shared.
    pub disjoint: bool,
    /// The real-geometry certificate agreed with the lattice probe.
    pub certified: bool,
    /// The closures share a ray although the cones themselves do not meet.
    pub touching: bool,
    /// A nonzero lattice point of `Γ1 ∩ (-Γ2)`, if the probe found one.
    pub witness: Option<MultiIndex>,
}

/// Tests `Γ1 ∩ (-Γ2) = ∅` for cones with apex at the origin.
///
/// The certificate enumerates the vertices of `closure(Γ1 ∩ -Γ2) ∩ [-1,1]^d`:
/// the open intersection is nonempty iff every strict constraint is slack at
/// some nonzero vertex. A lattice probe over `|k|_∞ <= R_probe` is run in
/// addition; disagreement clears `certified`.
pub fn disjoint_after_negation(c1: &LatticeCone, c2: &LatticeCone) -> Result<Disjointness> {
    check_pair(c1, c2)?;
    if !c1.has_origin_apex() || !c2.has_origin_apex() {
        return Err(Error::Precondition("disjointness test needs cones with apex at the origin".into()));
    }
    let d = c1.dim();
    let neg2 = c2.negated();
    let mut normals = c1.real_normals();
    normals.extend(neg2.real_normals());
    let strict: Vec<bool> = c1.halfspaces().iter().chain(neg2.halfspaces()).map(|h| h.strict).collect();
    let verts = geometry::nonzero_box_vertices(&normals, d);

    let (geom_disjoint, touching) = if verts.is_empty() {
        (true, false)
    } else {
        let open_nonempty = normals.iter().zip(&strict).filter(|(_, &s)| s).all(|(a, _)| {
            let tol = 1e-9 * geometry::norm(a);
            verts.iter().any(|v| geometry::dot(a, v) > tol)
        });
        if open_nonempty {
            (false, false)
        } else {
            (true, true)
        }
    };

    let r = probe_radius(d);
    let mut witness = None;
    for_each_in_box(&vec![-r; d], &vec![r; d], |k| {
        if witness.is_none() && k.iter().any(|&x| x != 0) && c1.contains(k) && neg2.contains(k) {
            witness = Some(MultiIndex::from(k));
        }
    });
    let certified = !(geom_disjoint && witness.is_some());
    Ok(Disjointness { disjoint: geom_disjoint && witness.is_none(), certified, touching, witness })
}

/// Precomputed constraint data for `c(n)`; construction fails when the
/// region `(n - Γ1) ∩ Γ2` can be unbounded.
#[derive(Debug, Clone)]
pub struct CountingRegion {
    c1: LatticeCone,
    c2: LatticeCone,
}

impl CountingRegion {
    pub fn new(c1: &LatticeCone, c2: &LatticeCone) -> Result<Self> {
        check_pair(c1, c2)?;
        let d = c1.dim();
        let mut rec: Vec<Vec<f64>> = c2.real_normals();
        rec.extend(c1.real_normals().into_iter().map(|a| a.iter().map(|x| -x).collect::<Vec<_>>()));
        if !geometry::nonzero_box_vertices(&rec, d).is_empty() {
            return Err(Error::UnboundedRegion);
        }
        Ok(CountingRegion { c1: c1.clone(), c2: c2.clone() })
    }

    fn constraints(&self, n: &[i64]) -> Vec<Constraint> {
        let mut cons = Vec::new();
        for h in self.c2.halfspaces() {
            let a: Vec<f64> = h.normal.iter().map(|&x| x as f64).collect();
            let b = geometry::dot(&a, &self.c2.apex().iter().map(|&x| x as f64).collect::<Vec<_>>());
            cons.push(Constraint { a, b });
        }
        for h in self.c1.halfspaces() {
            let a: Vec<f64> = h.normal.iter().map(|&x| x as f64).collect();
            let shift: Vec<f64> = self.c1.apex().iter().zip(n).map(|(&p, &m)| (p - m) as f64).collect();
            let b = geometry::dot(&a, &shift);
            cons.push(Constraint { a: a.iter().map(|x| -x).collect(), b });
        }
        cons
    }

    /// Integer bounding box of the closed region, from its vertices.
    pub fn bounding_box(&self, n: &[i64]) -> Option<(Vec<i64>, Vec<i64>)> {
        let d = n.len();
        let verts = geometry::vertices(&self.constraints(n), d);
        if verts.is_empty() {
            return None;
        }
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for v in &verts {
            for i in 0..d {
                let slack = 1e-7 * (1.0 + v[i].abs());
                lo[i] = lo[i].min((v[i] - slack).floor() as i64);
                hi[i] = hi[i].max((v[i] + slack).ceil() as i64);
            }
        }
        Some((lo, hi))
    }

    pub fn count(&self, n: &[i64]) -> Result<u64> {
        if n.len() != self.c1.dim() {
            return Err(Error::DimensionMismatch { left: n.len(), right: self.c1.dim() });
        }
        let Some((lo, hi)) = self.bounding_box(n) else {
            return Ok(0);
        };
        let mut count = 0u64;
        let mut diff = vec![0i64; n.len()];
        for_each_in_box(&lo, &hi, |k| {
            if self.c2.contains(k) {
                for i in 0..k.len() {
                    diff[i] = n[i] - k[i];
                }
                if self.c1.contains(&diff) {
                    count += 1;
                }
            }
        });
        Ok(count)
    }
}

/// `#{k ∈ Z^d : k ∈ c2, n - k ∈ c1}`.
pub fn intersection_count(c1: &LatticeCone, c2: &LatticeCone, n: &[i64]) -> Result<u64> {
    CountingRegion::new(c1, c2)?.count(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSample {
    pub n: MultiIndex,
    pub norm: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountGrowthFit {
    pub samples: Vec<CountSample>,
    pub gamma_hat: f64,
    pub c_hat: f64,
}

impl CountGrowthFit {
    /// `max c(n) / |n|^p` over samples with `|n|` in `[lo, hi]`.
    pub fn max_ratio(&self, p: f64, lo: f64, hi: f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.norm >= lo && s.norm <= hi && s.norm > 0.0)
            .map(|s| s.count as f64 / s.norm.powf(p))
            .fold(0.0, f64::max)
    }
}

/// Evenly spread unit vectors: `±1` in d=1, equally spaced angles in d=2 and a
/// Fibonacci lattice on the sphere in d=3.
pub fn uniform_directions(dim: usize, count: usize) -> Result<Vec<Vec<f64>>> {
    match dim {
        1 => Ok(vec![vec![1.0], vec![-1.0]]),
        2 => Ok((0..count)
            .map(|j| {
                let a = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect()),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            Ok((0..count)
                .map(|j| {
                    let z = 1.0 - 2.0 * (j as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * j as f64;
                    vec![r * a.cos(), r * a.sin(), z]
                })
                .collect())
        }
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

/// Least-squares slope shared by several groups of `(x, y)` points, each
/// group with its own intercept. Zero when no group has spread in `x`.
fn pooled_slope(groups: &[Vec<(f64, f64)>]) -> f64 {
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for g in groups.iter().filter(|g| g.len() >= 2) {
        let mx = g.iter().map(|p| p.0).sum::<f64>() / g.len() as f64;
        let my = g.iter().map(|p| p.1).sum::<f64>() / g.len() as f64;
        sxy += g.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
        sxx += g.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    }
    if sxx > 1e-12 {
        sxy / sxx
    } else {
        0.0
    }
}

/// Samples `c(n)` at `n = round(r u)` and fits `c ≈ C |n|^γ` by least squares
/// on the log-log pairs with `c(n) > 0`. Each direction gets its own
/// intercept, so `γ̂` is the common growth rate along rays. With no
/// direction holding two positive samples `γ̂ = 0`.
pub fn count_growth_fit(
    c1: &LatticeCone,
    c2: &LatticeCone,
    directions: &[Vec<f64>],
    radii: &[usize],
) -> Result<CountGrowthFit> {
    let region = CountingRegion::new(c1, c2)?;
    let d = c1.dim();
    let mut points = Vec::new();
    for u in directions {
        if u.len() != d {
            return Err(Error::DimensionMismatch { left: u.len(), right: d });
        }
        let len = geometry::norm(u);
        if !(len > 0.0) {
            return Err(Error::InvalidArgument("direction must be nonzero".into()));
        }
        for &r in radii {
            points.push(u.iter().map(|x| (x / len * r as f64).round() as i64).collect::<Vec<i64>>());
        }
    }
    let samples = points
        .into_par_iter()
        .map(|n| {
            let count = region.count(&n)?;
            let norm = (norm_sq(&n) as f64).sqrt();
            Ok(CountSample { n: MultiIndex(n), norm, count })
        })
        .collect::<Result<Vec<_>>>()?;

    let per_direction = radii.len();
    let groups: Vec<Vec<(f64, f64)>> = samples
        .chunks(per_direction.max(1))
        .map(|chunk| {
            chunk.iter().filter(|s| s.count > 0 && s.norm > 0.0).map(|s| (s.norm.ln(), (s.count as f64).ln())).collect()
        })
        .collect();
    let gamma_hat = pooled_slope(&groups);
    let c_hat = samples
        .iter()
        .filter(|s| s.count > 0 && s.norm > 0.0)
        .map(|s| s.count as f64 / s.norm.powf(gamma_hat))
        .fold(0.0, f64::max);
    Ok(CountGrowthFit { samples, gamma_hat, c_hat })
}

/// Smallest cosine between a nonzero point of `closure(inner) ∩ [-1,1]^d` and
/// the defining half-spaces of `outer`. Positive iff `inner ⊂⊂ outer`.
fn containment_margin(inner: &LatticeCone, outer: &LatticeCone) -> f64 {
    let verts = geometry::nonzero_box_vertices(&inner.real_normals(), inner.dim());
    let outer_normals = outer.real_normals();
    let mut margin = f64::INFINITY;
    for v in &verts {
        for a in &outer_normals {
            margin = margin.min(geometry::dot(a, v) / (geometry::norm(a) * geometry::norm(v)));
        }
    }
    if verts.is_empty() {
        f64::NEG_INFINITY
    } else {
        margin
    }
}

/// Angular margin of `inner ⊂⊂ outer`; fails unless it is positive.
pub fn check_compact_containment(inner: &LatticeCone, outer: &LatticeCone) -> Result<f64> {
    check_pair(inner, outer)?;
    let margin = containment_margin(inner, outer);
    if margin > 1e-9 {
        Ok(margin)
    } else {
        Err(Error::NotCompactlyContained(margin))
    }
}

/// `min ⟨ξ - n⟩ / ⟨n⟩` over `ξ ∈ closure(inner)` and lattice `n ∉ outer` with
/// `0 < |n| <= radius`. The minimum over `ξ` is taken exactly by projecting
/// `n` onto the inner cone.
pub fn cone_separation_constant(inner: &LatticeCone, outer: &LatticeCone, radius: usize) -> Result<f64> {
    check_pair(inner, outer)?;
    if !inner.has_origin_apex() || !outer.has_origin_apex() {
        return Err(Error::Precondition("separation constant needs cones with apex at the origin".into()));
    }
    check_compact_containment(inner, outer)?;
    let d = inner.dim();
    let r = radius as i64;
    let normals = inner.real_normals();
    let rows: Vec<i64> = (-r..=r).collect();
    let best = rows
        .par_iter()
        .map(|&first| {
            let mut best = f64::INFINITY;
            let mut lo = vec![-r; d];
            let mut hi = vec![r; d];
            lo[0] = first;
            hi[0] = first;
            for_each_in_box(&lo, &hi, |n| {
                let nsq = norm_sq(n);
                if nsq == 0 || nsq > r * r || outer.contains(n) {
                    return;
                }
                let x: Vec<f64> = n.iter().map(|&c| c as f64).collect();
                let p = geometry::project_onto_cone(&normals, &x);
                let dist_sq: f64 = x.iter().zip(&p).map(|(a, b)| (a - b).powi(2)).sum();
                best = best.min(((1.0 + dist_sq) / (1.0 + nsq as f64)).sqrt());
            });
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}
