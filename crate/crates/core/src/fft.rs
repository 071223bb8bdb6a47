//! In-place multidimensional complex FFT over row-major arrays.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

/// Transforms `data` (row-major, `shape` per axis) along every axis.
/// Unnormalized in both directions.
pub(crate) fn fft_nd(data: &mut [Complex64], shape: &[usize], direction: FftDirection) {
    debug_assert_eq!(data.len(), shape.iter().product::<usize>());
    let mut planner = FftPlanner::<f64>::new();
    let total = data.len();
    for (axis, &len) in shape.iter().enumerate() {
        if len <= 1 {
            continue;
        }
        let fft = planner.plan_fft(len, direction);
        let stride: usize = shape[axis + 1..].iter().product();
        if stride == 1 {
            fft.process(data);
            continue;
        }
        let mut line = vec![Complex64::new(0.0, 0.0); len];
        let block = len * stride;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + i * stride];
                }
                fft.process(&mut line);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
}

pub(crate) fn forward(data: &mut [Complex64], shape: &[usize]) {
    fft_nd(data, shape, FftDirection::Forward);
}

pub(crate) fn inverse(data: &mut [Complex64], shape: &[usize]) {
    fft_nd(data, shape, FftDirection::Inverse);
}

/// Full linear convolution of two row-major arrays via zero-padded FFT.
/// Output shape is `a_shape[i] + b_shape[i] - 1` per axis.
pub(crate) fn linear_convolve(
    a: &[Complex64],
    a_shape: &[usize],
    b: &[Complex64],
    b_shape: &[usize],
) -> (Vec<Complex64>, Vec<usize>) {
    let out_shape: Vec<usize> = a_shape.iter().zip(b_shape).map(|(x, y)| x + y - 1).collect();
    let total: usize = out_shape.iter().product();
    let mut pa = embed(a, a_shape, &out_shape, total);
    let mut pb = embed(b, b_shape, &out_shape, total);
    forward(&mut pa, &out_shape);
    forward(&mut pb, &out_shape);
    for (x, y) in pa.iter_mut().zip(&pb) {
        *x *= y;
    }
    inverse(&mut pa, &out_shape);
    let scale = 1.0 / total as f64;
    for x in pa.iter_mut() {
        *x *= scale;
    }
    (pa, out_shape)
}

fn embed(src: &[Complex64], shape: &[usize], out_shape: &[usize], total: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    let d = shape.len();
    let mut idx = vec![0usize; d];
    for v in src {
        let flat = idx.iter().zip(out_shape).fold(0usize, |acc, (i, s)| acc * s + i);
        out[flat] = *v;
        for axis in (0..d).rev() {
            idx[axis] += 1;
            if idx[axis] < shape[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_dimensional_round_trip() {
        let shape = [3usize, 5];
        let orig: Vec<Complex64> = (0..15).map(|i| Complex64::new(i as f64, (i * i) as f64 * 0.1)).collect();
        let mut data = orig.clone();
        forward(&mut data, &shape);
        inverse(&mut data, &shape);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a / 15.0 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn convolution_matches_naive_1d() {
        let a: Vec<Complex64> = [1.0, 2.0, -1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let b: Vec<Complex64> = [0.5, 3.0].iter().map(|&x| Complex64::new(x, 1.0)).collect();
        let (c, shape) = linear_convolve(&a, &[3], &b, &[2]);
        assert_eq!(shape, vec![4]);
        let mut naive = vec![Complex64::new(0.0, 0.0); 4];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                naive[i + j] += x * y;
            }
        }
        for (x, y) in c.iter().zip(&naive) {
            assert!((x - y).norm() < 1e-12);
        }
    }
}
