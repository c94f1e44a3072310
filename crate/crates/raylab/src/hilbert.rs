//! State vectors, rays, density operators, Gram matrices, and
//! linear-independence testing over finite-dimensional Hilbert spaces.
//!
//! A [`Ray`] is the physical object: a rank-one projector, insensitive to the
//! global phase of any vector representative. [`StateVector`] carries an
//! explicit `normalized` flag so unnormalized intermediates are visible in
//! the type rather than silently assumed.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{self, TraceOut};
use crate::{C64, Error, Result, DEFAULT_TOL};

/// A vector in C^dim with an explicit normalization flag.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
    normalized: bool,
}

impl StateVector {
    /// Builds a normalized state vector, rejecting zero or unnormalized input.
    pub fn new(amps: DVector<C64>) -> Result<Self> {
        Self::with_tol(amps, DEFAULT_TOL)
    }

    /// Same as [`StateVector::new`] with an explicit tolerance.
    pub fn with_tol(amps: DVector<C64>, tol: f64) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "dimension must be at least 1".into(),
            });
        }
        let norm = amps.norm();
        if norm < tol {
            return Err(Error::ZeroVector { norm });
        }
        let deviation = (norm - 1.0).abs();
        if deviation > tol {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { amps, normalized: true })
    }

    /// Wraps an intermediate value that is not (necessarily) normalized.
    pub fn unnormalized(amps: DVector<C64>) -> Self {
        Self { amps, normalized: false }
    }

    /// Computational basis state |k⟩ in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amps = DVector::from_element(dim, C64::new(0.0, 0.0));
        amps[k] = C64::new(1.0, 0.0);
        Self { amps, normalized: true }
    }

    /// Builds a state from real/imaginary pairs, normalizing is not applied.
    pub fn from_pairs(pairs: &[[f64; 2]]) -> Self {
        let amps = DVector::from_iterator(pairs.len(), pairs.iter().map(|p| C64::new(p[0], p[1])));
        let norm = amps.norm();
        Self { amps, normalized: (norm - 1.0).abs() <= DEFAULT_TOL }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amplitude(&self, i: usize) -> C64 {
        self.amps[i]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// Returns the normalized version of this vector.
    pub fn normalize(&self) -> Result<Self> {
        let norm = self.amps.norm();
        if norm < 1e-12 {
            return Err(Error::ZeroVector { norm });
        }
        Ok(Self { amps: &self.amps / C64::new(norm, 0.0), normalized: true })
    }

    /// Inner product ⟨self|other⟩ (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// Tensor product, index convention `i * other.dim + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amps: linalg::kron_vec(&self.amps, &other.amps),
            normalized: self.normalized && other.normalized,
        }
    }

    /// Multiplies every amplitude by `e^{iγ}`; the ray is unchanged.
    pub fn rephase(&self, gamma: f64) -> Self {
        let phase = C64::from_polar(1.0, gamma);
        Self { amps: &self.amps * phase, normalized: self.normalized }
    }
}

/// Multiplies every amplitude of `v` by `e^{iγ}`.
///
/// The projector of the result equals the projector of the input exactly up
/// to floating error: a global phase is not physical data.
pub fn rephase(v: &StateVector, gamma: f64) -> StateVector {
    v.rephase(gamma)
}

/// A pure state as a rank-one projector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ray {
    projector: DMatrix<C64>,
}

impl Ray {
    /// Validates Hermiticity, idempotence, and unit trace.
    pub fn new(projector: DMatrix<C64>, tol: f64) -> Result<Self> {
        if projector.nrows() != projector.ncols() {
            return Err(Error::DimensionMismatch {
                expected: projector.nrows(),
                got: projector.ncols(),
            });
        }
        let herm = linalg::hermiticity_deviation(&projector);
        if herm > tol {
            return Err(Error::InvalidOperator { property: "Hermitian", deviation: herm, tol });
        }
        let idem = linalg::max_abs(&(&projector * &projector - &projector));
        if idem > tol {
            return Err(Error::InvalidOperator { property: "idempotent", deviation: idem, tol });
        }
        let tr = (projector.trace().re - 1.0).abs();
        if tr > tol {
            return Err(Error::InvalidOperator { property: "unit trace", deviation: tr, tol });
        }
        Ok(Self { projector })
    }

    /// Outer product v·v† of a normalized vector.
    pub fn from_vector(v: &StateVector) -> Result<Self> {
        let norm = v.norm();
        if norm < DEFAULT_TOL {
            return Err(Error::ZeroVector { norm });
        }
        let deviation = (norm - 1.0).abs();
        if deviation > DEFAULT_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        let amps = v.amplitudes();
        let projector = amps * amps.adjoint();
        Ok(Self { projector })
    }

    pub fn dim(&self) -> usize {
        self.projector.nrows()
    }

    pub fn projector(&self) -> &DMatrix<C64> {
        &self.projector
    }

    /// Deterministic vector representative: the top eigenvector with its
    /// first nonzero amplitude rotated to be real and positive.
    pub fn representative(&self) -> StateVector {
        let (_, vectors) = linalg::hermitian_eigen(&self.projector);
        let top = vectors.column(vectors.ncols() - 1).clone_owned();
        canonical_phase(top)
    }

    /// Transition probability tr(P·Q) with another ray.
    pub fn overlap_probability(&self, other: &Ray) -> Result<f64> {
        overlap_probability(self, other)
    }

    /// Fidelity with a vector: ⟨v|P|v⟩.
    pub fn fidelity_with_vector(&self, v: &StateVector) -> f64 {
        let amps = v.amplitudes();
        (amps.adjoint() * &self.projector * amps)[(0, 0)].re
    }

    /// Tensor product of two rays.
    pub fn tensor(&self, other: &Ray) -> Ray {
        Ray { projector: self.projector.kronecker(other.projector()) }
    }
}

/// Rotates a vector so its first amplitude above the phase-fixing threshold
/// is real positive, then normalizes.
fn canonical_phase(mut v: DVector<C64>) -> StateVector {
    let norm = v.norm();
    v /= C64::new(norm, 0.0);
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-9) {
        let phase = lead / lead.norm();
        v /= phase;
    }
    StateVector { amps: v, normalized: true }
}

/// Returns the outer product v·v† as a [`Ray`].
pub fn ray_from_vector(v: &StateVector) -> Result<Ray> {
    Ray::from_vector(v)
}

/// Transition probability tr(P·Q) ∈ [0, 1]; symmetric in its arguments.
///
/// This is the only phase-invariant overlap datum carried by a pair of rays;
/// the complex inner product of representatives is not a function of the
/// rays alone.
pub fn overlap_probability(p: &Ray, q: &Ray) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    let value = (p.projector() * q.projector()).trace().re;
    Ok(value.clamp(0.0, 1.0 + 1e-12).min(1.0))
}

/// A density operator, possibly subnormalized (trace below one) when it is
/// the unrenormalized branch of a postselected evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<C64>,
    subnormalized: bool,
}

impl DensityOperator {
    /// Validates a trace-one density operator.
    pub fn new(matrix: DMatrix<C64>, tol: f64) -> Result<Self> {
        let op = Self::subnormalized(matrix, tol)?;
        let tr = op.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidOperator {
                property: "unit trace",
                deviation: (tr - 1.0).abs(),
                tol,
            });
        }
        Ok(Self { matrix: op.matrix, subnormalized: false })
    }

    /// Validates a subnormalized density operator (trace ≤ 1 + tol).
    pub fn subnormalized(matrix: DMatrix<C64>, tol: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), got: matrix.ncols() });
        }
        let herm = linalg::hermiticity_deviation(&matrix);
        if herm > tol {
            return Err(Error::InvalidOperator { property: "Hermitian", deviation: herm, tol });
        }
        let (psd, min_eig) = linalg::is_psd(&matrix, tol);
        if !psd {
            return Err(Error::InvalidOperator {
                property: "positive semidefinite",
                deviation: -min_eig,
                tol,
            });
        }
        let tr = matrix.trace().re;
        if tr > 1.0 + tol {
            return Err(Error::InvalidOperator {
                property: "trace at most one",
                deviation: tr - 1.0,
                tol,
            });
        }
        Ok(Self { matrix, subnormalized: true })
    }

    pub fn from_ray(ray: &Ray) -> Self {
        Self { matrix: ray.projector().clone(), subnormalized: false }
    }

    /// Maximally mixed state I/dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        let matrix = DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Self { matrix, subnormalized: false }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_subnormalized(&self) -> bool {
        self.subnormalized
    }

    /// Renormalizes to unit trace.
    pub fn renormalize(&self) -> Result<Self> {
        let tr = self.trace();
        if tr < 1e-12 {
            return Err(Error::DegenerateNormalization { norm: tr });
        }
        Ok(Self { matrix: &self.matrix / C64::new(tr, 0.0), subnormalized: false })
    }

    /// Partial trace over one tensor factor of a bipartite operator.
    pub fn partial_trace(&self, dim_a: usize, dim_b: usize, out: TraceOut) -> Result<Self> {
        if dim_a * dim_b != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: dim_a * dim_b });
        }
        let reduced = linalg::partial_trace(&self.matrix, dim_a, dim_b, out);
        Ok(Self { matrix: reduced, subnormalized: self.subnormalized })
    }
}

/// Matrix of pairwise inner products ⟨v_i|v_j⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    entries: DMatrix<C64>,
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    /// Smallest eigenvalue; a Gram matrix is always PSD up to rounding.
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.entries)
    }

    /// Rank at the relative threshold `tol * max eigenvalue`.
    pub fn rank(&self, tol: f64) -> usize {
        let (vals, _) = linalg::hermitian_eigen(&self.entries);
        let max = vals.last().copied().unwrap_or(0.0).max(0.0);
        vals.iter().filter(|&&v| v > tol * max).count()
    }

    /// A unit null-space vector (coefficients of a linear dependency), if the
    /// family is rank deficient at the given relative threshold.
    pub fn null_vector(&self, tol: f64) -> Option<DVector<C64>> {
        let (vals, vecs) = linalg::hermitian_eigen(&self.entries);
        let max = vals.last().copied().unwrap_or(0.0).max(0.0);
        if vals[0] <= tol * max.max(1.0) {
            Some(vecs.column(0).clone_owned())
        } else {
            None
        }
    }
}

/// Builds the Gram matrix of a family of normalized vectors.
pub fn gram_matrix(vectors: &[StateVector]) -> Result<GramMatrix> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = vectors[0].dim();
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
        }
        let deviation = (v.norm() - 1.0).abs();
        if deviation > DEFAULT_TOL {
            return Err(Error::NotNormalized { deviation });
        }
    }
    let m = vectors.len();
    let entries = DMatrix::from_fn(m, m, |i, j| vectors[i].inner(&vectors[j]));
    Ok(GramMatrix { entries })
}

/// Result of a linear-independence test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceReport {
    pub independent: bool,
    pub rank: usize,
    /// Smallest singular value of the column matrix; zero when there are
    /// more vectors than dimensions.
    pub smallest_singular_value: f64,
}

/// Tests linear independence through the singular values of the matrix whose
/// columns are the vectors.
///
/// The rank threshold is relative, `tol * max(σ)`, which stays stable for
/// the near-degenerate families the dependence→independence sweeps produce.
pub fn linear_independence(vectors: &[StateVector], tol: f64) -> Result<IndependenceReport> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = vectors[0].dim();
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
        }
    }
    let m = vectors.len();
    let columns = DMatrix::from_fn(dim, m, |r, c| vectors[c].amplitude(r));
    let svd = columns.svd(false, false);
    let mut singulars: Vec<f64> = svd.singular_values.iter().copied().collect();
    singulars.sort_by(|a, b| b.total_cmp(a));
    let sigma_max = singulars.first().copied().unwrap_or(0.0);
    let rank = singulars.iter().filter(|&&s| s > tol * sigma_max).count();
    // More vectors than dimensions: the missing singular values are exact zeros.
    let smallest = if m > dim { 0.0 } else { singulars.last().copied().unwrap_or(0.0) };
    Ok(IndependenceReport { independent: rank == m, rank, smallest_singular_value: smallest })
}

/// Deterministic pseudo-random stream (SplitMix64 core, Box–Muller normals).
///
/// Hand-rolled so that emitted experiment bytes stay stable across platforms
/// and dependency upgrades; the sampling quality is far beyond what these
/// Monte-Carlo sweeps resolve.
#[derive(Debug, Clone)]
pub struct Prng {
    state: u64,
    cached_normal: Option<f64>,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed, cached_normal: None }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * ((self.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, n).
    pub fn below(&mut self, n: u64) -> u64 {
        // Modulo bias is irrelevant at these sample counts.
        self.next_u64() % n
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        if let Some(cached) = self.cached_normal.take() {
            return cached;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.cached_normal = Some(radius * angle.sin());
        radius * angle.cos()
    }

    pub fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }
}

/// Haar-distributed normalized vector; deterministic for a fixed seed.
///
/// Normalized complex-Gaussian amplitudes are exactly Haar on the unit
/// sphere.
pub fn random_state(dim: usize, seed: u64) -> Result<StateVector> {
    if dim == 0 {
        return Err(Error::InvalidParameter {
            name: "dim",
            reason: "dimension must be at least 1".into(),
        });
    }
    let mut rng = Prng::new(seed);
    random_state_with(dim, &mut rng)
}

/// Haar-distributed state drawn from an existing stream.
pub fn random_state_with(dim: usize, rng: &mut Prng) -> Result<StateVector> {
    loop {
        let amps = DVector::from_fn(dim, |_, _| rng.complex_normal());
        let norm = amps.norm();
        if norm > 1e-6 {
            return Ok(StateVector { amps: amps / C64::new(norm, 0.0), normalized: true });
        }
    }
}

/// A Haar-random state orthogonal to `v`.
pub fn random_orthogonal_state(v: &StateVector, rng: &mut Prng) -> Result<StateVector> {
    assert!(v.dim() >= 2, "no orthogonal direction in dimension 1");
    loop {
        let raw = random_state_with(v.dim(), rng)?;
        let overlap = v.inner(&raw);
        let residual = raw.amplitudes() - v.amplitudes() * overlap;
        let norm = residual.norm();
        if norm > 1e-6 {
            return Ok(StateVector { amps: residual / C64::new(norm, 0.0), normalized: true });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use nalgebra::dvector;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn plus() -> StateVector {
        StateVector::new(dvector![c(1.0 / SQRT_2, 0.0), c(1.0 / SQRT_2, 0.0)]).unwrap()
    }

    #[test]
    fn basis_state_projector_is_diagonal() {
        let ray = ray_from_vector(&StateVector::basis(2, 0)).unwrap();
        assert!((ray.projector()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(ray.projector()[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn global_phase_gives_same_projector() {
        let v = StateVector::basis(2, 0);
        let w = rephase(&v, PI / 3.0);
        let p = ray_from_vector(&v).unwrap();
        let q = ray_from_vector(&w).unwrap();
        assert!(max_abs(&(p.projector() - q.projector())) < 1e-15);
    }

    #[test]
    fn plus_state_projector_is_all_half() {
        let ray = ray_from_vector(&plus()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((ray.projector()[(i, j)] - c(0.5, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ray_rejects_unnormalized_input() {
        let v = StateVector::unnormalized(dvector![c(2.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(ray_from_vector(&v), Err(Error::NotNormalized { .. })));
        let z = StateVector::unnormalized(dvector![c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(ray_from_vector(&z), Err(Error::ZeroVector { .. })));
    }

    #[test]
    fn overlap_probability_examples() {
        let zero = ray_from_vector(&StateVector::basis(2, 0)).unwrap();
        let one = ray_from_vector(&StateVector::basis(2, 1)).unwrap();
        let plus = ray_from_vector(&plus()).unwrap();
        assert!(overlap_probability(&zero, &one).unwrap() < 1e-15);
        assert!((overlap_probability(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert!((overlap_probability(&zero, &plus).unwrap() - 0.5).abs() < 1e-12);
        // Symmetry.
        assert!(
            (overlap_probability(&zero, &plus).unwrap()
                - overlap_probability(&plus, &zero).unwrap())
            .abs()
                < 1e-15
        );
    }

    #[test]
    fn overlap_probability_rejects_dim_mismatch() {
        let a = ray_from_vector(&StateVector::basis(2, 0)).unwrap();
        let b = ray_from_vector(&StateVector::basis(3, 0)).unwrap();
        assert!(matches!(overlap_probability(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rephase_examples() {
        let minus_zero = rephase(&StateVector::basis(2, 0), PI);
        assert!((minus_zero.amplitude(0) - c(-1.0, 0.0)).norm() < 1e-15);
        let same = rephase(&plus(), 0.0);
        assert!((same.amplitude(0) - plus().amplitude(0)).norm() < 1e-15);
        let i_plus = rephase(&plus(), FRAC_PI_2);
        assert!((i_plus.amplitude(0) - c(0.0, 1.0 / SQRT_2)).norm() < 1e-12);
        let p = ray_from_vector(&plus()).unwrap();
        let q = ray_from_vector(&i_plus).unwrap();
        assert!(max_abs(&(p.projector() - q.projector())) < 1e-12);
    }

    #[test]
    fn gram_matrix_examples() {
        let zero = StateVector::basis(2, 0);
        let one = StateVector::basis(2, 1);
        let g = gram_matrix(&[zero.clone(), one]).unwrap();
        assert!(max_abs(&(g.entries() - DMatrix::identity(2, 2))) < 1e-15);

        let dup = gram_matrix(&[zero.clone(), zero.clone()]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((dup.entry(i, j) - c(1.0, 0.0)).norm() < 1e-15);
            }
        }
        assert_eq!(dup.rank(1e-10), 1);

        let g2 = gram_matrix(&[zero, plus()]).unwrap();
        assert!((g2.entry(0, 1) - c(1.0 / SQRT_2, 0.0)).norm() < 1e-12);
        assert!((g2.entry(1, 0) - c(1.0 / SQRT_2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gram_matrix_rejects_empty_and_mismatched() {
        assert!(matches!(gram_matrix(&[]), Err(Error::EmptyInput)));
        let a = StateVector::basis(2, 0);
        let b = StateVector::basis(3, 0);
        assert!(matches!(gram_matrix(&[a, b]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn independence_examples() {
        let zero = StateVector::basis(2, 0);
        let one = StateVector::basis(2, 1);
        let rep = linear_independence(&[zero.clone(), one.clone()], 1e-10).unwrap();
        assert!(rep.independent);
        assert_eq!(rep.rank, 2);
        assert!((rep.smallest_singular_value - 1.0).abs() < 1e-12);

        let rep = linear_independence(&[zero.clone(), one, plus()], 1e-10).unwrap();
        assert!(!rep.independent);
        assert_eq!(rep.rank, 2);
        assert_eq!(rep.smallest_singular_value, 0.0);

        // σ_min = sqrt(1 - 1/sqrt(2)), frozen from the 2x2 Gram spectrum 1 ± 1/sqrt(2).
        let rep = linear_independence(&[zero, plus()], 1e-10).unwrap();
        assert!(rep.independent);
        assert!((rep.smallest_singular_value - 0.541_196_100_146_197).abs() < 1e-12);
    }

    #[test]
    fn random_state_is_deterministic_and_normalized() {
        let a = random_state(2, 42).unwrap();
        let b = random_state(2, 42).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
        let v = random_state(4, 7).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!(matches!(random_state(0, 1), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn haar_mean_projector_is_maximally_mixed() {
        let samples = 20_000;
        let mut mean = DMatrix::from_element(2, 2, c(0.0, 0.0));
        for seed in 0..samples {
            let v = random_state(2, seed).unwrap();
            mean += ray_from_vector(&v).unwrap().projector();
        }
        mean /= c(samples as f64, 0.0);
        let target = DMatrix::identity(2, 2) * c(0.5, 0.0);
        // Monte-Carlo error at 2e4 samples is ~0.004 per entry.
        assert!(max_abs(&(mean - target)) < 0.02);
    }

    #[test]
    fn representative_reproduces_ray() {
        let mut rng = Prng::new(9);
        for _ in 0..50 {
            let v = random_state_with(4, &mut rng).unwrap();
            let ray = ray_from_vector(&v).unwrap();
            let rep = ray.representative();
            let back = ray_from_vector(&rep).unwrap();
            assert!(max_abs(&(back.projector() - ray.projector())) < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn rephasing_never_moves_the_ray(seed in 0u64..1000, gamma in 0.0..(2.0 * PI)) {
            let v = random_state(3, seed).unwrap();
            let p = ray_from_vector(&v).unwrap();
            let q = ray_from_vector(&rephase(&v, gamma)).unwrap();
            prop_assert!(max_abs(&(p.projector() - q.projector())) < 1e-12);
        }

        #[test]
        fn gram_is_psd_and_rank_matches_columns(seed in 0u64..500) {
            let mut rng = Prng::new(seed);
            let dim = 2 + (seed % 4) as usize;
            let m = 1 + (seed % 5) as usize;
            let vectors: Vec<StateVector> =
                (0..m).map(|_| random_state_with(dim, &mut rng).unwrap()).collect();
            let gram = gram_matrix(&vectors).unwrap();
            prop_assert!(gram.min_eigenvalue() >= -1e-10);
            let rep = linear_independence(&vectors, 1e-10).unwrap();
            prop_assert_eq!(gram.rank(1e-10), rep.rank);
        }

        #[test]
        fn overlap_matches_vector_inner_product(seed in 0u64..500) {
            let mut rng = Prng::new(seed);
            let a = random_state_with(3, &mut rng).unwrap();
            let b = random_state_with(3, &mut rng).unwrap();
            let p = ray_from_vector(&a).unwrap();
            let q = ray_from_vector(&b).unwrap();
            let direct = a.inner(&b).norm_sqr();
            prop_assert!((overlap_probability(&p, &q).unwrap() - direct).abs() < 1e-12);
        }
    }
}
