//! The dense Hermitian eigensolver used by the beamformers: decompose a small
//! matrix and check the reconstruction `A = V diag(lambda) V^H`.
//!
//! ```text
//! cargo run --release --example hermitian_eigen
//! ```

use jcas::linalg::{hermitian_eigen, hermitian_top_eigpair, ComplexMatrix, ComplexVector, DEFAULT_TOL};
use num_complex::Complex64;

fn main() {
    let b = ComplexMatrix::from_fn(4, 4, |r, c| Complex64::new((r + 2 * c) as f64 * 0.3, r as f64 - c as f64));
    let a = b.gram().add(&ComplexMatrix::identity(4));

    let eig = hermitian_eigen(&a, DEFAULT_TOL).expect("Hermitian input");
    println!("eigenvalues (Jacobi diagonal order): {:?}", eig.values);
    println!("Jacobi sweeps: {}", eig.sweeps);

    let mut rebuilt = ComplexMatrix::zeros(4, 4);
    for (k, &lambda) in eig.values.iter().enumerate() {
        let v: ComplexVector = eig.vector(k);
        rebuilt = rebuilt.add(&ComplexMatrix::outer(&v, &v).scale(lambda));
    }
    println!("reconstruction error: {:.2e}", rebuilt.sub(&a).max_abs());

    let top = hermitian_top_eigpair(&a, DEFAULT_TOL).unwrap();
    println!("top eigenvector (first entry real, nonnegative): {:?}", top.vector.as_slice());
}
