//! Kraus-form quantum operations with postselection semantics.
//!
//! A channel here is one branch of an instrument: completely positive and
//! trace-nonincreasing (CPTNI), with the output trace interpreted as the
//! success probability of the branch. The Kraus list is stored as given —
//! no canonicalization or rank minimization — because arguments about
//! individual Kraus operators are part of what the laboratory exercises.

use nalgebra::DMatrix;

use crate::hilbert::DensityOperator;
use crate::linalg;
use crate::{C64, Error, Result, DEFAULT_TOL};

/// A CP trace-nonincreasing map in operator-sum form Λ(ρ) = Σ_k M_k ρ M_k†.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus_ops: Vec<DMatrix<C64>>,
}

impl KrausChannel {
    /// Validates Σ M_k†M_k ⪯ I and at least one nonzero operator.
    pub fn new(kraus_ops: Vec<DMatrix<C64>>) -> Result<Self> {
        Self::with_tol(kraus_ops, DEFAULT_TOL)
    }

    pub fn with_tol(kraus_ops: Vec<DMatrix<C64>>, tol: f64) -> Result<Self> {
        if kraus_ops.is_empty() {
            return Err(Error::EmptyInput);
        }
        let dim_out = kraus_ops[0].nrows();
        let dim_in = kraus_ops[0].ncols();
        for op in &kraus_ops {
            if op.nrows() != dim_out || op.ncols() != dim_in {
                return Err(Error::DimensionMismatch { expected: dim_in, got: op.ncols() });
            }
        }
        if kraus_ops.iter().all(|op| linalg::max_abs(op) < tol) {
            return Err(Error::InvalidOperator {
                property: "at least one nonzero Kraus operator",
                deviation: 0.0,
                tol,
            });
        }
        let channel = Self { dim_in, dim_out, kraus_ops };
        let (ok, max_eig) = channel.is_cptni(tol);
        if !ok {
            return Err(Error::InvalidOperator {
                property: "trace-nonincreasing (Σ M†M ⪯ I)",
                deviation: max_eig - 1.0,
                tol,
            });
        }
        Ok(channel)
    }

    /// Identity channel on `dim`.
    pub fn identity(dim: usize) -> Self {
        Self { dim_in: dim, dim_out: dim, kraus_ops: vec![DMatrix::identity(dim, dim)] }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus_ops(&self) -> &[DMatrix<C64>] {
        &self.kraus_ops
    }

    /// Σ_k M_k ρ M_k†, returned subnormalized: the trace is the branch's
    /// success probability.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let raw = self.apply_matrix(rho.matrix())?;
        // Rounding can leave eigenvalue dust of order the square of the
        // Kraus norms; validate with a correspondingly relaxed tolerance.
        DensityOperator::subnormalized(raw, 1e-8)
    }

    /// The operator-sum action on a raw matrix, without output validation.
    /// Stays linear on unnormalized operators.
    pub fn apply_matrix(&self, rho: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        if rho.nrows() != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, got: rho.nrows() });
        }
        let mut out = DMatrix::from_element(self.dim_out, self.dim_out, C64::new(0.0, 0.0));
        for op in &self.kraus_ops {
            out += op * rho * op.adjoint();
        }
        Ok(out)
    }

    /// Success probability tr Λ(ρ) of the postselected branch.
    pub fn success_probability(&self, rho: &DensityOperator) -> Result<f64> {
        Ok(self.apply_matrix(rho.matrix())?.trace().re)
    }

    /// Largest eigenvalue of Σ M_k†M_k; the map is CPTNI iff it is ≤ 1 + tol.
    pub fn is_cptni(&self, tol: f64) -> (bool, f64) {
        // A single Kraus operator K has λ_max(K†K) = λ_max(KK†); the Gram
        // on the smaller side is much cheaper for wide operators.
        let max_eig = if self.kraus_ops.len() == 1 && self.dim_out < self.dim_in {
            let op = &self.kraus_ops[0];
            linalg::max_eigenvalue(&(op * op.adjoint())).max(0.0)
        } else {
            let mut sum = DMatrix::from_element(self.dim_in, self.dim_in, C64::new(0.0, 0.0));
            for op in &self.kraus_ops {
                sum += op.adjoint() * op;
            }
            linalg::max_eigenvalue(&sum)
        };
        (max_eig <= 1.0 + tol, max_eig)
    }

    /// Choi matrix (id ⊗ Λ applied to the unnormalized maximally entangled
    /// projector); positive semidefinite iff the map is completely positive.
    pub fn choi_matrix(&self) -> ChoiMatrix {
        let d_in = self.dim_in;
        let d_out = self.dim_out;
        let n = d_in * d_out;
        let mut matrix = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
        for op in &self.kraus_ops {
            // Block (i, j) receives M|i⟩⟨j|M†.
            for i in 0..d_in {
                for j in 0..d_in {
                    for k in 0..d_out {
                        for l in 0..d_out {
                            matrix[(i * d_out + k, j * d_out + l)] +=
                                op[(k, i)] * op[(l, j)].conj();
                        }
                    }
                }
            }
        }
        ChoiMatrix { dim_in: d_in, dim_out: d_out, matrix }
    }

    /// Tensor product channel, Kraus set {A_i ⊗ B_j}.
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let mut kraus_ops = Vec::with_capacity(self.kraus_ops.len() * other.kraus_ops.len());
        for a in &self.kraus_ops {
            for b in &other.kraus_ops {
                kraus_ops.push(a.kronecker(b));
            }
        }
        KrausChannel {
            dim_in: self.dim_in * other.dim_in,
            dim_out: self.dim_out * other.dim_out,
            kraus_ops,
        }
    }

    /// Composition `second ∘ first`, Kraus set {S_i · F_j}.
    pub fn compose(second: &KrausChannel, first: &KrausChannel) -> Result<KrausChannel> {
        if first.dim_out != second.dim_in {
            return Err(Error::DimensionMismatch { expected: second.dim_in, got: first.dim_out });
        }
        let mut kraus_ops = Vec::with_capacity(first.kraus_ops.len() * second.kraus_ops.len());
        for s in &second.kraus_ops {
            for f in &first.kraus_ops {
                kraus_ops.push(s * f);
            }
        }
        Ok(KrausChannel { dim_in: first.dim_in, dim_out: second.dim_out, kraus_ops })
    }
}

/// The Choi matrix of a channel, a complete-positivity certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim_in: usize,
    dim_out: usize,
    matrix: DMatrix<C64>,
}

impl ChoiMatrix {
    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Smallest eigenvalue; ≥ -tol certifies complete positivity.
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.matrix)
    }

    pub fn is_completely_positive(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// Reconstructs the channel action from the Choi form:
    /// Λ(ρ)[k,l] = Σ_{ij} ρ[i,j] · C[(i,k),(j,l)].
    pub fn apply(&self, rho: &DMatrix<C64>) -> Result<DMatrix<C64>> {
        if rho.nrows() != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, got: rho.nrows() });
        }
        let d_out = self.dim_out;
        let mut out = DMatrix::from_element(d_out, d_out, C64::new(0.0, 0.0));
        for i in 0..self.dim_in {
            for j in 0..self.dim_in {
                let weight = rho[(i, j)];
                if weight.norm() == 0.0 {
                    continue;
                }
                for k in 0..d_out {
                    for l in 0..d_out {
                        out[(k, l)] += weight * self.matrix[(i * d_out + k, j * d_out + l)];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Draws a random trace-preserving channel with `kraus_count` operators,
/// scaled by `scale` ≤ 1 to make it a strictly trace-decreasing branch.
pub fn random_channel(
    dim: usize,
    kraus_count: usize,
    scale: f64,
    rng: &mut crate::hilbert::Prng,
) -> KrausChannel {
    assert!(kraus_count >= 1 && dim >= 1);
    assert!((0.0..=1.0).contains(&scale));
    let raw: Vec<DMatrix<C64>> =
        (0..kraus_count).map(|_| DMatrix::from_fn(dim, dim, |_, _| rng.complex_normal())).collect();
    let mut sum = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    for g in &raw {
        sum += g.adjoint() * g;
    }
    // Right-normalize so Σ M†M = scale² · I up to rounding.
    let inv_sqrt = linalg::hermitian_map(&sum, |x| if x > 1e-14 { 1.0 / x.sqrt() } else { 0.0 });
    let kraus_ops: Vec<DMatrix<C64>> =
        raw.into_iter().map(|g| g * &inv_sqrt * C64::new(scale, 0.0)).collect();
    KrausChannel { dim_in: dim, dim_out: dim, kraus_ops }
}
