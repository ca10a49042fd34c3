//! Small dense complex linear algebra.
//!
//! Everything here is sized for antenna arrays of a handful of elements, so
//! storage is a flat `Vec` and algorithms are the textbook O(n^3) ones. The
//! Hermitian eigensolver is cyclic Jacobi, which converges unconditionally and
//! handles repeated eigenvalues without the stalling that power iteration shows.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

/// Default absolute tolerance for eigen-decomposition postconditions.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Entries with magnitude at or below this are skipped by the phase convention.
const PHASE_EPS: f64 = 1e-12;

/// Sweep cap for the Jacobi eigensolver.
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: max |A - A^H| entry = {deviation:e} exceeds tol {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("eigensolver did not converge: residual {residual:e}")]
    NoConvergence { residual: f64 },
    #[error("degenerate channel: vector has zero norm")]
    ZeroVector,
    #[error("non-finite entry in input")]
    NonFinite,
}

/// A dense complex column vector.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    /// The `k`-th standard basis vector of length `n`.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Hermitian inner product `self^H other`.
    pub fn dot(&self, other: &ComplexVector) -> Complex64 {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: f64) -> ComplexVector {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn scale_complex(&self, s: Complex64) -> ComplexVector {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn add(&self, other: &ComplexVector) -> ComplexVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ComplexVector) -> ComplexVector {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Unit-norm copy, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<ComplexVector> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self.scale(1.0 / n))
        } else {
            None
        }
    }

    /// Rotate by a common unit phase so the first entry with magnitude above
    /// `PHASE_EPS` is real and nonnegative.
    pub fn with_canonical_phase(&self) -> ComplexVector {
        match self.0.iter().find(|z| z.norm() > PHASE_EPS) {
            Some(z) => {
                let rot = z.conj() / z.norm();
                let mut out = self.scale_complex(rot);
                // Kill the rounding residue in the pivot's imaginary part.
                if let Some(p) = out.0.iter_mut().find(|z| z.norm() > PHASE_EPS) {
                    *p = Complex64::new(p.norm(), 0.0);
                }
                out
            }
            None => self.clone(),
        }
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

/// A dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major entries. Panics if the length does not match.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        Self { rows, cols, data }
    }

    /// Outer product `u v^H`.
    pub fn outer(u: &ComplexVector, v: &ComplexVector) -> Self {
        Self::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect::<Vec<_>>()
            .into()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        Self::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols).map(|k| self[(r, k)] * other[(k, c)]).sum()
        })
    }

    /// `A^H A`.
    pub fn gram(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.cols, |r, c| {
            (0..self.rows).map(|k| self[(k, r)].conj() * self[(k, c)]).sum()
        })
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> ComplexMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation `max |A - A^H|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0_f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// `x^H A x`, real part only (exact for Hermitian `A`).
    pub fn quadratic_form(&self, x: &ComplexVector) -> f64 {
        x.dot(&self.mul_vec(x)).re
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: ComplexVector,
}

/// Full Hermitian eigendecomposition: `values[k]` pairs with column `k` of `vectors`.
/// Order is the diagonal order left by the Jacobi sweeps, not sorted.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
    pub sweeps: usize,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> ComplexVector {
        (0..self.vectors.rows())
            .map(|r| self.vectors[(r, k)])
            .collect::<Vec<_>>()
            .into()
    }
}

fn check_hermitian(a: &ComplexMatrix, tol: f64) -> Result<(), LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let deviation = a.hermitian_deviation();
    if deviation > tol {
        return Err(LinalgError::NotHermitian { deviation, tol });
    }
    Ok(())
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Each rotation first removes the phase of `a[p][q]` with a diagonal unitary
/// and then applies the classical real symmetric rotation, so the combined
/// transform is `J = D R` with `D = diag(1, e^{-i phi})` on the (p, q) plane.
pub fn hermitian_eigen(a: &ComplexMatrix, tol: f64) -> Result<HermitianEigen, LinalgError> {
    check_hermitian(a, tol)?;
    let n = a.rows();
    // Symmetrize so rounding asymmetry in the input cannot leak into the sweep.
    let mut m = ComplexMatrix::from_fn(n, n, |r, c| (a[(r, c)] + a[(c, r)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    let mut sweeps = 0;

    while sweeps < MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        if off <= f64::EPSILON * scale || off == 0.0 {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph_conj = phase.conj();
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = ph_conj * (-s);
                let jqq = ph_conj * c;

                // A <- A J (columns p, q)
                for r in 0..n {
                    let x = m[(r, p)];
                    let y = m[(r, q)];
                    m[(r, p)] = x * jpp + y * jqp;
                    m[(r, q)] = x * jpq + y * jqq;
                }
                // A <- J^H A (rows p, q)
                for k in 0..n {
                    let x = m[(p, k)];
                    let y = m[(q, k)];
                    m[(p, k)] = jpp.conj() * x + jqp.conj() * y;
                    m[(q, k)] = jpq.conj() * x + jqq.conj() * y;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

                for r in 0..n {
                    let x = v[(r, p)];
                    let y = v[(r, q)];
                    v[(r, p)] = x * jpp + y * jqp;
                    v[(r, q)] = x * jpq + y * jqq;
                }
            }
        }
    }

    let off = off_diagonal_norm(&m);
    if off > tol * (1.0 + scale) {
        return Err(LinalgError::NoConvergence { residual: off });
    }
    let values = (0..n).map(|i| m[(i, i)].re).collect();
    Ok(HermitianEigen {
        values,
        vectors: v,
        sweeps,
    })
}

/// Algebraically largest eigenvalue of a Hermitian matrix with a unit
/// eigenvector under the canonical phase convention.
///
/// Ties (within `tol`) resolve to the lowest diagonal index after the Jacobi
/// sweeps; this is deterministic but otherwise arbitrary.
pub fn hermitian_top_eigpair(a: &ComplexMatrix, tol: f64) -> Result<EigenPair, LinalgError> {
    let eig = hermitian_eigen(a, tol)?;
    let lambda_max = eig.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let idx = eig
        .values
        .iter()
        .position(|&l| l >= lambda_max - tol)
        .expect("nonempty spectrum");
    let value = eig.values[idx];
    let vector = eig
        .vector(idx)
        .normalized()
        .ok_or(LinalgError::NoConvergence { residual: f64::NAN })?
        .with_canonical_phase();

    let residual = a.mul_vec(&vector).sub(&vector.scale(value)).norm();
    if residual > tol * (1.0 + a.frobenius_norm()) {
        return Err(LinalgError::NoConvergence { residual });
    }
    Ok(EigenPair { value, vector })
}

/// Orthogonal projector onto the complement of `span{h}`: `I - h h^H / ||h||^2`.
pub fn complement_projector(h: &ComplexVector) -> Result<ComplexMatrix, LinalgError> {
    let n2 = h.norm_sqr();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(LinalgError::ZeroVector);
    }
    let n = h.len();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let id = if r == c { 1.0 } else { 0.0 };
        Complex64::new(id, 0.0) - h[r] * h[c].conj() / n2
    }))
}
