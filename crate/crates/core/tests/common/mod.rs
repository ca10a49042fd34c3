//! Reference computations shared by the integration tests. Nothing here calls
//! into the library's numerical routines.

#![allow(dead_code)]

use jcas::linalg::{ComplexMatrix, ComplexVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Unit-variance circular complex Gaussian via the polar Box-Muller form
/// (each part has variance 1/2).
pub fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    loop {
        let u: f64 = rng.random_range(-1.0..1.0);
        let v: f64 = rng.random_range(-1.0..1.0);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let k = (-s.ln() / s).sqrt();
            return Complex64::new(u * k, v * k);
        }
    }
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> ComplexVector {
    ComplexVector::new((0..n).map(|_| complex_normal(rng)).collect())
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_row_major(rows, cols, (0..rows * cols).map(|_| complex_normal(rng)).collect())
}

/// `(B + B^H) / 2` for a Gaussian `B`.
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let b = random_matrix(rng, n, n);
    ComplexMatrix::from_fn(n, n, |r, c| (b[(r, c)] + b[(c, r)].conj()) * 0.5)
}

/// Classical cyclic Jacobi for a real symmetric row-major matrix, run until
/// the off-diagonal mass is below `1e-15` of the Frobenius norm. Returns the
/// eigenvalues and the eigenvectors as columns of a row-major matrix.
pub fn real_symmetric_jacobi(mut a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..200 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * norm {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// Top eigenpair of a Hermitian matrix through its real embedding
/// `[[Re A, -Im A], [Im A, Re A]]`, whose spectrum is that of `A` doubled.
pub fn oracle_top_eigpair(a: &ComplexMatrix) -> (f64, ComplexVector) {
    let n = a.rows();
    let m = 2 * n;
    let mut real = vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = a[(r, c)];
            real[r * m + c] = z.re;
            real[r * m + n + c] = -z.im;
            real[(n + r) * m + c] = z.im;
            real[(n + r) * m + n + c] = z.re;
        }
    }
    let (values, vectors) = real_symmetric_jacobi(real, m);
    let k = (0..m).max_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    let z: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(vectors[i * m + k], vectors[(n + i) * m + k]))
        .collect();
    let norm = z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    (values[k], ComplexVector::new(z.into_iter().map(|x| x / norm).collect()))
}

/// `P(X < x)` for `X ~ Gamma(n, 1)`: `1 - e^{-x} sum_{k<n} x^k / k!`.
pub fn gamma_cdf(n: usize, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..n {
        term *= x / k as f64;
        sum += term;
    }
    1.0 - (-x).exp() * sum
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean.
pub fn std_error(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let n = xs.len() as f64;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() / n.sqrt()
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Least-squares slope of `y` against `x`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let mx = mean(x);
    let my = mean(y);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Central finite-difference gradient.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], step: f64) -> Vec<f64> {
    let mut x = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = x[i];
            x[i] = orig + step;
            let up = f(&x);
            x[i] = orig - step;
            let down = f(&x);
            x[i] = orig;
            (up - down) / (2.0 * step)
        })
        .collect()
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale = b.iter().map(|y| y * y).sum::<f64>().sqrt().max(1e-300);
    diff / scale
}
