//! Small-dimensional polyhedral geometry: vertex enumeration and projection
//! onto polyhedral cones. Dimensions are at most 3, so exhaustive
//! enumeration of active sets is cheap and exact up to rounding.

/// `a · x >= b`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Constraint {
    pub a: Vec<f64>,
    pub b: f64,
}

const FEAS_TOL: f64 = 1e-9;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn is_feasible(cons: &[Constraint], x: &[f64]) -> bool {
    let scale = 1.0 + norm(x);
    cons.iter().all(|c| dot(&c.a, x) - c.b >= -FEAS_TOL * norm(&c.a) * scale)
}

/// Solves a square system with partial pivoting; `None` when (nearly) singular.
pub(crate) fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    let scale = m.iter().map(|r| norm(r)).fold(0.0, f64::max).max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-12 * scale {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f != 0.0 {
                for c in col..n {
                    m[row][c] -= f * m[col][c];
                }
                rhs[row] -= f * rhs[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| m[row][c] * x[c]).sum();
        x[row] = (rhs[row] - s) / m[row][row];
    }
    Some(x)
}

pub(crate) fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All vertices of `{x ∈ R^d : a_i · x >= b_i}`. Meaningful when the set is a
/// polytope (bounded); for unbounded sets only the finite vertices appear.
pub(crate) fn vertices(cons: &[Constraint], d: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    combinations(cons.len(), d, |sel| {
        let m: Vec<Vec<f64>> = sel.iter().map(|&i| cons[i].a.clone()).collect();
        let rhs: Vec<f64> = sel.iter().map(|&i| cons[i].b).collect();
        if let Some(x) = solve(m, rhs) {
            if is_feasible(cons, &x) {
                let tol = 1e-9 * (1.0 + norm(&x));
                if !out.iter().any(|v| v.iter().zip(&x).all(|(p, q)| (p - q).abs() <= tol)) {
                    out.push(x);
                }
            }
        }
    });
    out
}

/// Adds `-1 <= x_i <= 1`.
pub(crate) fn with_unit_box(mut cons: Vec<Constraint>, d: usize) -> Vec<Constraint> {
    for i in 0..d {
        for sign in [1.0, -1.0] {
            let mut a = vec![0.0; d];
            a[i] = sign;
            cons.push(Constraint { a, b: -1.0 });
        }
    }
    cons
}

/// Nonzero vertices of `{x : A x >= 0} ∩ [-1, 1]^d`; empty iff the closed cone is `{0}`.
pub(crate) fn nonzero_box_vertices(normals: &[Vec<f64>], d: usize) -> Vec<Vec<f64>> {
    let cons = normals.iter().map(|a| Constraint { a: a.clone(), b: 0.0 }).collect();
    vertices(&with_unit_box(cons, d), d).into_iter().filter(|v| norm(v) > 1e-9).collect()
}

/// Euclidean projection of `x` onto the closed cone `{y : A y >= 0}`.
pub(crate) fn project_onto_cone(normals: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let d = x.len();
    let feasible = |y: &[f64]| {
        let scale = 1.0 + norm(y);
        normals.iter().all(|a| dot(a, y) >= -FEAS_TOL * norm(a) * scale)
    };
    if feasible(x) {
        return x.to_vec();
    }
    let mut best = vec![0.0; d];
    let mut best_dist = norm(x);
    for size in 1..d {
        combinations(normals.len(), size, |sel| {
            let rows: Vec<&Vec<f64>> = sel.iter().map(|&i| &normals[i]).collect();
            let gram: Vec<Vec<f64>> = rows.iter().map(|r| rows.iter().map(|c| dot(r, c)).collect()).collect();
            let rhs: Vec<f64> = rows.iter().map(|r| dot(r, x)).collect();
            if let Some(lambda) = solve(gram, rhs) {
                let mut y = x.to_vec();
                for (l, r) in lambda.iter().zip(&rows) {
                    for (yi, ri) in y.iter_mut().zip(r.iter()) {
                        *yi -= l * ri;
                    }
                }
                if feasible(&y) {
                    let dist = norm(&y.iter().zip(x).map(|(p, q)| p - q).collect::<Vec<_>>());
                    if dist < best_dist {
                        best_dist = dist;
                        best = y;
                    }
                }
            }
        });
    }
    best
}
