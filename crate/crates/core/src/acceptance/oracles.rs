//! Reference computations that share no code path with the library routines
//! they check: direct sums, brute-force enumeration, analytic transforms and
//! composite quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cones::LatticeCone;
use crate::distributions::CoefficientField;
use crate::shiftinv::GridFunction;

/// Coefficients of `P1 P2`, `Pi(x) = Σ a_k e^{2πikx}`, by sampling the
/// pointwise product on `M > 2 (N1 + N2)` nodes and a direct DFT.
pub fn trig_product_quadrature(a1: &CoefficientField, a2: &CoefficientField) -> Vec<(i64, Complex64)> {
    let n1 = a1.radius() as i64;
    let n2 = a2.radius() as i64;
    let n = n1 + n2;
    let m = (2 * n + 8) as usize;
    let twiddle = |k: i64, j: usize| -> Complex64 {
        let r = (k * j as i64).rem_euclid(m as i64) as f64;
        Complex64::from_polar(1.0, 2.0 * PI * r / m as f64)
    };
    let values: Vec<Complex64> = (0..m)
        .map(|j| {
            let p1: Complex64 = (-n1..=n1).map(|k| a1.get(&[k]) * twiddle(k, j)).sum();
            let p2: Complex64 = (-n2..=n2).map(|k| a2.get(&[k]) * twiddle(k, j)).sum();
            p1 * p2
        })
        .collect();
    (-n..=n)
        .map(|k| {
            let c: Complex64 = values.iter().enumerate().map(|(j, v)| v * twiddle(-k, j)).sum();
            (k, c / m as f64)
        })
        .collect()
}

/// Membership evaluated in floating point from the stored integer normals.
pub fn member(cone: &LatticeCone, k: &[i64]) -> bool {
    cone.halfspaces().iter().all(|h| {
        let v: f64 =
            h.normal.iter().zip(k.iter().zip(cone.apex())).map(|(&a, (&x, &p))| a as f64 * (x - p) as f64).sum();
        if h.strict {
            v > 0.0
        } else {
            v >= 0.0
        }
    })
}

/// `#{k : k ∈ c2, n - k ∈ c1}` over the full box `|k|_∞ <= 4 |n|_∞ + 8` (d = 2).
pub fn naive_count(c1: &LatticeCone, c2: &LatticeCone, n: &[i64]) -> u64 {
    let b = 4 * n.iter().map(|x| x.abs()).max().unwrap_or(0) + 8;
    let mut count = 0;
    for x in -b..=b {
        for y in -b..=b {
            if member(c2, &[x, y]) && member(c1, &[n[0] - x, n[1] - y]) {
                count += 1;
            }
        }
    }
    count
}

/// `min <ξ - n> / <n>` over lattice `n` outside the sector of half-angle
/// `outer` and `ξ` on a polar grid of the sector of half-angle `inner`, both
/// about `(1, 0)`. Sampling `ξ` can only overestimate the minimum.
pub fn separation_by_sampling(inner: f64, outer: f64, radius: i64, angle_steps: usize, radial_steps: usize) -> f64 {
    let mut best = f64::INFINITY;
    for x in -radius..=radius {
        for y in -radius..=radius {
            let r2 = (x * x + y * y) as f64;
            if r2 == 0.0 || r2 > (radius * radius) as f64 {
                continue;
            }
            let angle = (y as f64).atan2(x as f64).abs();
            if angle < outer {
                continue;
            }
            let bracket_n = (1.0 + r2).sqrt();
            let reach = 2.0 * r2.sqrt();
            for ia in 0..=angle_steps {
                let th = -inner + 2.0 * inner * ia as f64 / angle_steps as f64;
                for ir in 0..=radial_steps {
                    let rho = reach * ir as f64 / radial_steps as f64;
                    let dx = rho * th.cos() - x as f64;
                    let dy = rho * th.sin() - y as f64;
                    best = best.min((1.0 + dx * dx + dy * dy).sqrt() / bracket_n);
                }
            }
        }
    }
    best
}

/// `<y>^r` and `2^{|r|/2} <x>^r <y - x>^{|r|}`, evaluated through logarithms.
pub fn peetre_sides(x: &[f64], y: &[f64], r: f64) -> (f64, f64) {
    let sq = |v: &mut dyn Iterator<Item = f64>| 1.0 + v.map(|c| c * c).sum::<f64>();
    let ly = sq(&mut y.iter().copied()).ln();
    let lx = sq(&mut x.iter().copied()).ln();
    let ld = sq(&mut y.iter().zip(x).map(|(a, b)| a - b)).ln();
    let lhs = (0.5 * r * ly).exp();
    let rhs = (0.5 * r.abs() * 2f64.ln() + 0.5 * r * lx + 0.5 * r.abs() * ld).exp();
    (lhs, rhs)
}

/// Transform of `exp(-π x^2 / w^2)`.
pub fn gaussian_hat(w: f64, xi: f64) -> f64 {
    w * (-PI * w * w * xi * xi).exp()
}

/// Transform of the centered cardinal B-spline of order `m`.
pub fn bspline_hat(m: usize, xi: f64) -> f64 {
    if xi == 0.0 {
        1.0
    } else {
        let x = PI * xi;
        (x.sin() / x).powi(m as i32)
    }
}

/// `(∫_lo^hi |φ̂(ξ)|^2 <ξ>^{2s} dξ)^{1/2}` by composite Simpson on `2 n` panels.
pub fn sobolev_norm(hat: impl Fn(f64) -> f64, s: f64, lo: f64, hi: f64, n: usize) -> f64 {
    let panels = 2 * n;
    let h = (hi - lo) / panels as f64;
    let f = |xi: f64| hat(xi).powi(2) * (1.0 + xi * xi).powf(s);
    let mut acc = f(lo) + f(hi);
    for i in 1..panels {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h);
    }
    (acc * h / 3.0).sqrt()
}

/// `(f * g)(x_q) = (1/M) Σ_p f(x_p) g(x_{q-p})` by the double loop.
pub fn direct_grid_convolution(f: &GridFunction, g: &GridFunction) -> GridFunction {
    let mut values = vec![Complex64::new(0.0, 0.0); f.values.len() + g.values.len() - 1];
    for (i, a) in f.values.iter().enumerate() {
        for (j, b) in g.values.iter().enumerate() {
            values[i + j] += a * b;
        }
    }
    let scale = 1.0 / f.samples_per_unit as f64;
    values.iter_mut().for_each(|v| *v *= scale);
    GridFunction { samples_per_unit: f.samples_per_unit, start_index: f.start_index + g.start_index, values }
}
