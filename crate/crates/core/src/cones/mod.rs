//! Polyhedral lattice cones `Γ ⊂ R^d` given by half-space inequalities, their
//! lattice index sets `Γ ∩ Z^d`, and the counting geometry used by the
//! product estimates.
//!
//! Normals are stored as integer vectors so that membership of lattice points
//! is decided exactly. Real normals are rationalized on construction.

mod counting;
pub(crate) mod geometry;

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::MAX_DIM;

pub use counting::{
    check_compact_containment, cone_separation_constant, count_growth_fit, disjoint_after_negation, intersection_count,
    uniform_directions, CountGrowthFit, CountingRegion, Disjointness,
};

/// `normal · (x - apex) >= 0`, or `> 0` when strict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vec<i64>,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConeFile", into = "ConeFile")]
pub struct LatticeCone {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
    apex: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HalfSpaceFile {
    normal: Vec<f64>,
    strict: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ConeFile {
    dim: usize,
    halfspaces: Vec<HalfSpaceFile>,
    #[serde(default)]
    apex: Option<Vec<i64>>,
}

impl TryFrom<ConeFile> for LatticeCone {
    type Error = Error;

    fn try_from(f: ConeFile) -> Result<Self> {
        let apex = f.apex.unwrap_or_else(|| vec![0; f.dim]);
        let hs = f.halfspaces.into_iter().map(|h| (h.normal, h.strict)).collect();
        LatticeCone::from_real(f.dim, hs, apex)
    }
}

impl From<LatticeCone> for ConeFile {
    fn from(c: LatticeCone) -> Self {
        ConeFile {
            dim: c.dim,
            halfspaces: c
                .halfspaces
                .iter()
                .map(|h| HalfSpaceFile { normal: h.normal.iter().map(|&x| x as f64).collect(), strict: h.strict })
                .collect(),
            apex: Some(c.apex),
        }
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Scales a real vector to a primitive integer vector with the same direction.
/// Decimal inputs with up to six fractional digits are represented exactly;
/// anything else is rounded at relative resolution `2^-20`.
pub fn rationalize(v: &[f64]) -> Result<Vec<i64>> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidCone("normal has non-finite entries".into()));
    }
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return Err(Error::InvalidCone("normal is zero".into()));
    }
    let near_int = |x: f64| (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0);
    let mut ints = None;
    for p in 0..=6 {
        let scale = 10f64.powi(p);
        if max * scale > 1e12 {
            break;
        }
        if v.iter().all(|&x| near_int(x * scale)) {
            ints = Some(v.iter().map(|&x| (x * scale).round() as i64).collect::<Vec<_>>());
            break;
        }
    }
    let ints = ints.unwrap_or_else(|| {
        let scale = (1u64 << 20) as f64 / max;
        v.iter().map(|&x| (x * scale).round() as i64).collect()
    });
    let g = ints.iter().fold(0, |g, &x| gcd(g, x));
    Ok(ints.iter().map(|x| x / g).collect())
}

impl LatticeCone {
    pub fn new(dim: usize, halfspaces: Vec<HalfSpace>, apex: Vec<i64>) -> Result<Self> {
        let cone = LatticeCone { dim, halfspaces, apex };
        cone.validate()?;
        Ok(cone)
    }

    /// Cone at `apex` from real normals, rationalized with [`rationalize`].
    pub fn from_real(dim: usize, halfspaces: Vec<(Vec<f64>, bool)>, apex: Vec<i64>) -> Result<Self> {
        let hs = halfspaces
            .into_iter()
            .map(|(n, strict)| Ok(HalfSpace { normal: rationalize(&n)?, strict }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, hs, apex)
    }

    /// Cone at the origin from integer normals.
    pub fn at_origin(dim: usize, halfspaces: &[(&[i64], bool)]) -> Result<Self> {
        let hs = halfspaces.iter().map(|(n, strict)| HalfSpace { normal: n.to_vec(), strict: *strict }).collect();
        Self::new(dim, hs, vec![0; dim])
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_DIM).contains(&self.dim) {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if self.apex.len() != self.dim {
            return Err(Error::InvalidCone(format!("apex has {} entries, expected {}", self.apex.len(), self.dim)));
        }
        if self.halfspaces.is_empty() {
            return Err(Error::InvalidCone("a cone needs at least one half-space".into()));
        }
        for h in &self.halfspaces {
            if h.normal.len() != self.dim {
                return Err(Error::InvalidCone(format!(
                    "normal {:?} has wrong length for dimension {}",
                    h.normal, self.dim
                )));
            }
            if h.normal.iter().all(|&x| x == 0) {
                return Err(Error::InvalidCone("normal is zero".into()));
            }
            if h.normal.iter().any(|x| x.unsigned_abs() > (1 << 40)) {
                return Err(Error::InvalidCone(format!("normal {:?} too large for exact arithmetic", h.normal)));
            }
        }
        let normals = self.real_normals();
        let verts = geometry::nonzero_box_vertices(&normals, self.dim);
        for h in self.halfspaces.iter().filter(|h| h.strict) {
            let a: Vec<f64> = h.normal.iter().map(|&x| x as f64).collect();
            if !verts.iter().any(|v| geometry::dot(&a, v) > 1e-9 * geometry::norm(&a)) {
                return Err(Error::InvalidCone("strict constraints leave the cone empty".into()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn apex(&self) -> &[i64] {
        &self.apex
    }

    pub fn has_origin_apex(&self) -> bool {
        self.apex.iter().all(|&x| x == 0)
    }

    pub(crate) fn real_normals(&self) -> Vec<Vec<f64>> {
        self.halfspaces.iter().map(|h| h.normal.iter().map(|&x| x as f64).collect()).collect()
    }

    /// Exact membership test for a lattice point.
    pub fn contains(&self, k: &[i64]) -> bool {
        debug_assert_eq!(k.len(), self.dim);
        self.halfspaces.iter().all(|h| {
            let v: i128 = h
                .normal
                .iter()
                .zip(k.iter().zip(&self.apex))
                .map(|(&a, (&x, &p))| a as i128 * (x as i128 - p as i128))
                .sum();
            if h.strict {
                v > 0
            } else {
                v >= 0
            }
        })
    }

    /// Point reflection `-Γ` (apex negated as well).
    pub fn negated(&self) -> Self {
        LatticeCone {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| HalfSpace { normal: h.normal.iter().map(|x| -x).collect(), strict: h.strict })
                .collect(),
            apex: self.apex.iter().map(|x| -x).collect(),
        }
    }

    /// Open polyhedral approximation of the round cone of half-angle
    /// `half_angle` (radians) about `axis`. In d=1 this is the half-line
    /// containing `axis`; in d=2 the sector between the two boundary rays; in
    /// d=3 a 16-faced pyramid circumscribing the round cone.
    pub fn circular(axis: &[f64], half_angle: f64) -> Result<Self> {
        let d = axis.len();
        let len = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !len.is_finite() || len == 0.0 {
            return Err(Error::InvalidArgument("cone axis must be a nonzero finite vector".into()));
        }
        if !(half_angle > 0.0 && half_angle < PI / 2.0) {
            return Err(Error::InvalidArgument(format!(
                "aperture half-angle {:.3} deg must lie in (0, 90)",
                half_angle.to_degrees()
            )));
        }
        let u: Vec<f64> = axis.iter().map(|x| x / len).collect();
        let hs = match d {
            1 => vec![(vec![u[0].signum()], true)],
            2 => {
                let phi = u[1].atan2(u[0]);
                let (a, b) = (phi + half_angle, phi - half_angle);
                vec![(vec![a.sin(), -a.cos()], true), (vec![-b.sin(), b.cos()], true)]
            }
            3 => {
                let (e1, e2) = orthonormal_complement(&u);
                (0..16)
                    .map(|j| {
                        let p = 2.0 * PI * j as f64 / 16.0;
                        let n: Vec<f64> = (0..3)
                            .map(|i| half_angle.sin() * u[i] - half_angle.cos() * (p.cos() * e1[i] + p.sin() * e2[i]))
                            .collect();
                        (n, true)
                    })
                    .collect()
            }
            _ => return Err(Error::UnsupportedDimension(d)),
        };
        Self::from_real(d, hs, vec![0; d])
    }

    /// The disjoint planar pair `Γ1 = {t > 0, |s| <= t/2}`, `Γ2 = {s > 0, |t| <= s/2}`
    /// with coordinates `(t, s)`.
    pub fn standard_pair() -> (Self, Self) {
        let g1 = Self::at_origin(2, &[(&[1, 0], true), (&[1, -2], false), (&[1, 2], false)]).expect("valid cone");
        let g2 = Self::at_origin(2, &[(&[0, 1], true), (&[-2, 1], false), (&[2, 1], false)]).expect("valid cone");
        (g1, g2)
    }

    /// The open ray `{(0, s) : s > 0}`.
    pub fn vertical_ray() -> Self {
        Self::at_origin(2, &[(&[0, 1], true), (&[1, 0], false), (&[-1, 0], false)]).expect("valid cone")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Malformed(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))
    }
}

fn orthonormal_complement(u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let pick = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let dp = geometry::dot(&pick, u);
    let mut e1: Vec<f64> = (0..3).map(|i| pick[i] - dp * u[i]).collect();
    let n = geometry::norm(&e1);
    e1.iter_mut().for_each(|x| *x /= n);
    let e2 = vec![u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2], u[0] * e1[1] - u[1] * e1[0]];
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let (g1, _) = LatticeCone::standard_pair();
        assert!(g1.contains(&[4, 2]));
        assert!(!g1.contains(&[0, 0]));
        assert!(!g1.contains(&[4, 3]));
    }

    #[test]
    fn rationalize_decimals_and_reduce() {
        assert_eq!(rationalize(&[0.5, -1.0]).unwrap(), vec![1, -2]);
        assert_eq!(rationalize(&[4.0, 6.0]).unwrap(), vec![2, 3]);
        assert_eq!(rationalize(&[0.125, 0.0]).unwrap(), vec![1, 0]);
        assert!(rationalize(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let (g1, _) = LatticeCone::standard_pair();
        let back = LatticeCone::from_json(&g1.to_json().unwrap()).unwrap();
        assert_eq!(g1, back);
        let parsed = LatticeCone::from_json(
            r#"{"dim":2,"halfspaces":[{"normal":[1,0],"strict":true},{"normal":[0.5,-1],"strict":false}],"apex":[0,0]}"#,
        )
        .unwrap();
        assert!(parsed.contains(&[2, 1]));
        assert!(!parsed.contains(&[2, 2]));
    }

    #[test]
    fn empty_cone_rejected() {
        assert!(LatticeCone::at_origin(1, &[(&[1], true), (&[-1], false)]).is_err());
        assert!(LatticeCone::at_origin(2, &[(&[1, 0], false), (&[-1, 0], false)]).is_ok());
    }

    #[test]
    fn circular_cones_contain_axis_not_complement() {
        for (axis, inside, outside) in [
            (vec![1.0], vec![3], vec![-3]),
            (vec![1.0, 0.0], vec![10, 3], vec![10, 4]),
            (vec![0.0, 0.0, 1.0], vec![1, 1, 5], vec![3, 0, 5]),
        ] {
            let c = LatticeCone::circular(&axis, 20f64.to_radians()).unwrap();
            assert!(c.contains(&inside), "{axis:?} {inside:?}");
            assert!(!c.contains(&outside), "{axis:?} {outside:?}");
        }
    }

    #[test]
    fn apex_shift() {
        let c = LatticeCone::at_origin(1, &[(&[1], true)]).unwrap();
        let shifted = LatticeCone::new(1, c.halfspaces().to_vec(), vec![3]).unwrap();
        assert!(!shifted.contains(&[3]));
        assert!(shifted.contains(&[4]));
        assert!(shifted.negated().contains(&[-4]));
    }
}
