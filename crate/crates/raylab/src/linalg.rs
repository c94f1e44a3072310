//! Dense Hermitian linear-algebra helpers shared by every module.
//!
//! Eigen-based checks symmetrize their input with `(A + A†)/2` before
//! decomposing, which suppresses the tiny anti-Hermitian noise that matrix
//! products accumulate in floating point.

use nalgebra::{DMatrix, DVector};

use crate::C64;

/// `(A + A†)/2`.
pub fn hermitize(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
///
/// The input is symmetrized first. Returns `(eigenvalues, eigenvectors)`
/// where column `k` of the eigenvector matrix belongs to `eigenvalues[k]`.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = hermitize(m).symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    hermitian_eigen(m).0[0]
}

/// Largest eigenvalue of the Hermitian part of `m`.
pub fn max_eigenvalue(m: &DMatrix<C64>) -> f64 {
    *hermitian_eigen(m).0.last().expect("nonempty matrix")
}

/// Positive semidefiniteness check; returns the smallest eigenvalue alongside.
pub fn is_psd(m: &DMatrix<C64>, tol: f64) -> (bool, f64) {
    let min = min_eigenvalue(m);
    (min >= -tol, min)
}

/// Maximum entrywise deviation of `m` from Hermiticity.
pub fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    let diff = m - m.adjoint();
    diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Applies a real function to the spectrum of a Hermitian matrix.
pub fn hermitian_map(m: &DMatrix<C64>, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
    let (values, vectors) = hermitian_eigen(m);
    let n = values.len();
    let diag = DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            C64::new(f(values[r]), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    &vectors * diag * vectors.adjoint()
}

/// Trace norm `tr|M|` of a Hermitian matrix.
pub fn trace_norm(m: &DMatrix<C64>) -> f64 {
    hermitian_eigen(m).0.iter().map(|v| v.abs()).sum()
}

/// Trace distance `tr|a - b| / 2` between Hermitian operators.
pub fn trace_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    trace_norm(&(a - b)) / 2.0
}

/// Operator (spectral) norm of an arbitrary matrix.
pub fn operator_norm(m: &DMatrix<C64>) -> f64 {
    max_eigenvalue(&(m.adjoint() * m)).max(0.0).sqrt()
}

/// Maximum entrywise modulus, used for entrywise comparisons.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Which tensor factor `partial_trace` removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOut {
    First,
    Second,
}

/// Partial trace of an operator on a bipartite space with factor dims
/// `(dim_a, dim_b)` and row index convention `a * dim_b + b`.
pub fn partial_trace(m: &DMatrix<C64>, dim_a: usize, dim_b: usize, out: TraceOut) -> DMatrix<C64> {
    assert_eq!(m.nrows(), dim_a * dim_b, "operator does not match factor dims");
    assert_eq!(m.ncols(), dim_a * dim_b, "operator does not match factor dims");
    match out {
        TraceOut::First => DMatrix::from_fn(dim_b, dim_b, |b1, b2| {
            (0..dim_a).map(|a| m[(a * dim_b + b1, a * dim_b + b2)]).sum()
        }),
        TraceOut::Second => DMatrix::from_fn(dim_a, dim_a, |a1, a2| {
            (0..dim_b).map(|b| m[(a1 * dim_b + b, a2 * dim_b + b)]).sum()
        }),
    }
}

/// Kronecker product of two vectors under the `a * dim_b + b` convention.
pub fn kron_vec(a: &DVector<C64>, b: &DVector<C64>) -> DVector<C64> {
    let mut out = DVector::from_element(a.len() * b.len(), C64::new(0.0, 0.0));
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}
