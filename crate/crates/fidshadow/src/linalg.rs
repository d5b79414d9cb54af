//! Small dense complex-matrix helpers shared across the crate.
//!
//! Everything here targets the low dimensions of this problem domain
//! (d up to a few tens), so dense `nalgebra` routines are used throughout.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Entrywise max-norm of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Entrywise max-norm of the difference of two equally sized matrices.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Deviation of `m` from its own adjoint in max-norm.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Max-norm of the commutator `ab - ba`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a * b - b * a))
}

/// Real expectation value `<psi|H|psi>` of a Hermitian operator.
///
/// The imaginary part is discarded; for Hermitian `h` it is rounding noise.
pub fn expectation(h: &CMatrix, psi: &CVector) -> f64 {
    psi.dotc(&(h * psi)).re
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// ascending. Returns `(eigenvalues, eigenvectors)` with eigenvectors in the
/// columns, matching the eigenvalue order.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = CMatrix::zeros(m.nrows(), m.ncols());
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(m.nrows(), m.ncols());
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Rank of a real matrix by singular values above `tol * max_singular_value`.
pub fn rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let svals = m.clone().singular_values();
    let smax = svals.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    svals.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Builds a complex matrix from a row-major nested slice of `(re, im)` pairs.
pub fn cmatrix_from_rows(rows: &[Vec<Complex64>]) -> CMatrix {
    let nrows = rows.len();
    let ncols = if nrows > 0 { rows[0].len() } else { 0 };
    CMatrix::from_fn(nrows, ncols, |i, j| rows[i][j])
}

/// Diagonal complex matrix from its diagonal entries.
pub fn cdiag(entries: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(entries.len(), entries.len(), |i, j| {
        if i == j {
            entries[i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Unit vector `|k>` of the computational basis in dimension `d`.
pub fn basis_vector(d: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[k] = Complex64::new(1.0, 0.0);
    v
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}
