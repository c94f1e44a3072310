//! Discrimination-theoretic no-go machinery.
//!
//! Unambiguous discrimination of a finite pure-state family exists exactly
//! when the family is linearly independent; the POVM is built from the
//! reciprocal (biorthogonal) family. A CPTNI preprocessing step can never
//! manufacture that independence out of a dependent family — the
//! [`discrimination_pipeline`] checks this end to end and flags any run
//! that would contradict it as an explicit violation witness, which is what
//! a hypothetical universal superposer produces on the dependent triple of
//! a [`LdliScenario`]. The module also carries the isometry Gram witness
//! behind no-deleting/no-masking and the linear-independence criterion for
//! probabilistic cloning.

use nalgebra::{DMatrix, DVector};

use crate::channels::KrausChannel;
use crate::hilbert::{
    gram_matrix, linear_independence, ray_from_vector, DensityOperator, Ray, StateVector,
};
use crate::linalg;
use crate::superposer::SuperpositionWeights;
use crate::{C64, Error, Result};

/// Feasibility threshold on the smallest singular value: a guard band above
/// the 1e-10 assertion tolerance so decisions do not flap near the boundary.
pub const FEASIBILITY_SIGMA_MIN: f64 = 1e-8;

/// An unambiguous-discrimination POVM for a linearly independent family:
/// E_i = λ|φ̃_i⟩⟨φ̃_i| built on the reciprocal family, plus the inconclusive
/// element E_κ = I − ΣE_i.
#[derive(Debug, Clone)]
pub struct UdPovm {
    elements: Vec<DMatrix<C64>>,
    inconclusive: DMatrix<C64>,
    lambdas: Vec<f64>,
}

impl UdPovm {
    /// Number of conclusive outcomes.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[DMatrix<C64>] {
        &self.elements
    }

    pub fn inconclusive(&self) -> &DMatrix<C64> {
        &self.inconclusive
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Largest deviation of Σ E_i + E_κ from the identity.
    pub fn completeness_error(&self) -> f64 {
        let dim = self.inconclusive.nrows();
        let mut sum = self.inconclusive.clone();
        for e in &self.elements {
            sum += e;
        }
        linalg::max_abs(&(sum - DMatrix::identity(dim, dim)))
    }

    /// Outcome distribution (m conclusive entries then the inconclusive one)
    /// on a state; sums to tr(ρ).
    pub fn outcome_distribution(&self, state: &DensityOperator) -> Result<Vec<f64>> {
        let dim = self.inconclusive.nrows();
        if state.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: state.dim() });
        }
        let mut probs: Vec<f64> = self
            .elements
            .iter()
            .map(|e| (e * state.matrix()).trace().re.max(0.0))
            .collect();
        probs.push((&self.inconclusive * state.matrix()).trace().re.max(0.0));
        Ok(probs)
    }
}

/// Why a UD POVM could not be built, with the dependency that witnesses it.
#[derive(Debug, Clone)]
pub struct UdInfeasibility {
    pub smallest_singular_value: f64,
    /// Coefficients of a (unit-norm) linear dependency among the inputs —
    /// a null vector of the Gram matrix.
    pub dependency: DVector<C64>,
    /// Residual ‖Σ_j dependency_j |φ_j⟩‖ certifying the dependency.
    pub residual: f64,
}

/// Either a working POVM or the dependency that rules one out.
pub type UdOutcome = std::result::Result<UdPovm, UdInfeasibility>;

/// The reciprocal (biorthogonal) family of a linearly independent family:
/// φ̃_i = Σ_j (G⁻¹)_{ji} φ_j with ⟨φ̃_i|φ_j⟩ = δ_ij.
///
/// The reciprocal vectors are generally unnormalized.
pub fn reciprocal_family(vectors: &[StateVector]) -> Result<Vec<StateVector>> {
    let report = linear_independence(vectors, 1e-10)?;
    if !report.independent || report.smallest_singular_value <= FEASIBILITY_SIGMA_MIN {
        return Err(Error::LinearlyDependent { sigma_min: report.smallest_singular_value });
    }
    let gram = gram_matrix(vectors)?;
    let inverse = gram
        .entries()
        .clone()
        .try_inverse()
        .ok_or(Error::LinearlyDependent { sigma_min: report.smallest_singular_value })?;
    let m = vectors.len();
    let dim = vectors[0].dim();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut amps = DVector::from_element(dim, C64::new(0.0, 0.0));
        for j in 0..m {
            amps += vectors[j].amplitudes() * inverse[(j, i)];
        }
        out.push(StateVector::unnormalized(amps));
    }
    Ok(out)
}

/// Builds the unambiguous-discrimination POVM for a family, or reports
/// infeasibility with the witnessing Gram null vector.
///
/// The conclusive weights are uniform, λ = 1/λ_max(Σ_i |φ̃_i⟩⟨φ̃_i|): the
/// largest uniform scaling that keeps the inconclusive element PSD, which
/// makes the construction deterministic.
pub fn build_ud_povm(vectors: &[StateVector]) -> Result<UdOutcome> {
    let report = linear_independence(vectors, 1e-10)?;
    if !report.independent || report.smallest_singular_value <= FEASIBILITY_SIGMA_MIN {
        let gram = gram_matrix(vectors)?;
        let dependency = gram
            .null_vector(1e-8)
            .unwrap_or_else(|| DVector::from_element(vectors.len(), C64::new(0.0, 0.0)));
        let dim = vectors[0].dim();
        let mut combo = DVector::from_element(dim, C64::new(0.0, 0.0));
        for (j, v) in vectors.iter().enumerate() {
            combo += v.amplitudes() * dependency[j];
        }
        return Ok(Err(UdInfeasibility {
            smallest_singular_value: report.smallest_singular_value,
            dependency,
            residual: combo.norm(),
        }));
    }

    let reciprocal = reciprocal_family(vectors)?;
    let dim = vectors[0].dim();
    let mut sum = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    let outers: Vec<DMatrix<C64>> = reciprocal
        .iter()
        .map(|r| r.amplitudes() * r.amplitudes().adjoint())
        .collect();
    for o in &outers {
        sum += o;
    }
    let lambda = 1.0 / linalg::max_eigenvalue(&sum);
    let elements: Vec<DMatrix<C64>> =
        outers.into_iter().map(|o| o * C64::new(lambda, 0.0)).collect();
    let mut inconclusive = DMatrix::identity(dim, dim);
    for e in &elements {
        inconclusive -= e;
    }
    let lambdas = vec![lambda; elements.len()];
    Ok(Ok(UdPovm { elements, inconclusive, lambdas }))
}

/// Probabilistic cloning of a pure-state family is feasible iff the family
/// is linearly independent.
pub fn clone_feasibility(vectors: &[StateVector]) -> Result<bool> {
    Ok(linear_independence(vectors, 1e-10)?.independent)
}

/// The dependent-triple scenario whose superposer outputs generically turn
/// linearly independent: ψ₃ = a·ψ + b·ψ⊥ inside span{ψ, ψ⊥}, a fixed
/// orthogonal partner φ, and output phases θ₁, θ₂, θ₃.
#[derive(Debug, Clone)]
pub struct LdliScenario {
    a: C64,
    b: C64,
    thetas: [f64; 3],
    weights: SuperpositionWeights,
    psi: StateVector,
    psi_perp: StateVector,
    phi: StateVector,
}

impl LdliScenario {
    pub fn new(
        a: C64,
        b: C64,
        thetas: [f64; 3],
        weights: SuperpositionWeights,
        psi: StateVector,
        psi_perp: StateVector,
        phi: StateVector,
    ) -> Result<Self> {
        if a.norm() < 1e-12 || b.norm() < 1e-12 {
            return Err(Error::InvalidParameter {
                name: "a,b",
                reason: "both decomposition coefficients must be nonzero".into(),
            });
        }
        let deviation = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        if deviation > crate::DEFAULT_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        if psi.dim() < 3 {
            return Err(Error::InvalidParameter {
                name: "dim",
                reason: "the construction needs dimension at least 3".into(),
            });
        }
        for (x, y) in [(&psi, &psi_perp), (&psi, &phi), (&psi_perp, &phi)] {
            if x.inner(y).norm() > 1e-10 {
                return Err(Error::InvalidParameter {
                    name: "basis",
                    reason: "psi, psi_perp, phi must be mutually orthonormal".into(),
                });
            }
        }
        Ok(Self { a, b, thetas, weights, psi, psi_perp, phi })
    }

    /// The scenario on the first three computational basis vectors.
    pub fn canonical(
        a: C64,
        b: C64,
        thetas: [f64; 3],
        weights: SuperpositionWeights,
    ) -> Result<Self> {
        Self::new(
            a,
            b,
            thetas,
            weights,
            StateVector::basis(3, 0),
            StateVector::basis(3, 1),
            StateVector::basis(3, 2),
        )
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn thetas(&self) -> [f64; 3] {
        self.thetas
    }

    pub fn weights(&self) -> &SuperpositionWeights {
        &self.weights
    }

    /// The dependent input triple (ψ, ψ⊥, ψ₃ = a·ψ + b·ψ⊥).
    pub fn inputs(&self) -> Result<[StateVector; 3]> {
        let psi3 =
            StateVector::new(self.psi.amplitudes() * self.a + self.psi_perp.amplitudes() * self.b)?;
        Ok([self.psi.clone(), self.psi_perp.clone(), psi3])
    }

    /// Rephases the ψ and ψ⊥ representatives; the input rays are unchanged
    /// but the decomposition coefficients become a·e^{-iγ}, b·e^{-iδ}.
    pub fn gauge_shifted(&self, gamma: f64, delta: f64) -> Self {
        let mut shifted = self.clone();
        shifted.a *= C64::from_polar(1.0, -gamma);
        shifted.b *= C64::from_polar(1.0, -delta);
        shifted
    }
}

/// The three superposer outputs of a scenario plus independence diagnostics.
#[derive(Debug, Clone)]
pub struct LdliConstruction {
    pub outputs: [StateVector; 3],
    /// |det| of the 3×3 coefficient matrix of the outputs in the
    /// (ψ, ψ⊥, φ) basis; equals |α|²|β|·|e^{iθ₃} − a·e^{iθ₁} − b·e^{iθ₂}|.
    pub det_magnitude: f64,
    pub smallest_singular_value: f64,
}

/// Builds the outputs Ψ_j = α|ψ_j⟩ + β e^{iθ_j}|φ⟩ of the hypothetical
/// superposer on the dependent triple and reports how independent they are.
pub fn construct_ldli(scenario: &LdliScenario) -> Result<LdliConstruction> {
    let w = scenario.weights;
    let inputs = scenario.inputs()?;
    let mut outputs = Vec::with_capacity(3);
    for (input, theta) in inputs.iter().zip(scenario.thetas) {
        let phase = C64::from_polar(1.0, theta);
        let amps =
            input.amplitudes() * w.alpha() + scenario.phi.amplitudes() * (w.beta() * phase);
        // Branches are orthogonal and |α|²+|β|² = 1, so this is normalized.
        outputs.push(StateVector::new(amps)?);
    }
    let outputs: [StateVector; 3] = [outputs[0].clone(), outputs[1].clone(), outputs[2].clone()];

    // Coefficient matrix in the (ψ, ψ⊥, φ) basis; the determinant reduces to
    // α²β(e^{iθ₃} − a e^{iθ₁} − b e^{iθ₂}).
    let columns: Vec<DVector<C64>> = outputs
        .iter()
        .map(|o| {
            DVector::from_vec(vec![
                scenario.psi.inner(o),
                scenario.psi_perp.inner(o),
                scenario.phi.inner(o),
            ])
        })
        .collect();
    let coeff = DMatrix::from_columns(&columns);
    let det_magnitude = coeff.determinant().norm();
    let report = linear_independence(&outputs, 1e-10)?;
    Ok(LdliConstruction {
        outputs,
        det_magnitude,
        smallest_singular_value: report.smallest_singular_value,
    })
}

/// |e^{iθ₃} − a·e^{iθ₁} − b·e^{iθ₂}|: the conspiratorial relation the output
/// phases must satisfy for the outputs to stay dependent.
///
/// The construction's outputs are dependent iff this residual vanishes, and
/// the relation is gauge fragile: rephasing the ψ/ψ⊥ representatives moves
/// (a, b) and generically destroys it.
pub fn phase_condition_residual(scenario: &LdliScenario) -> f64 {
    let [t1, t2, t3] = scenario.thetas;
    (C64::from_polar(1.0, t3)
        - scenario.a * C64::from_polar(1.0, t1)
        - scenario.b * C64::from_polar(1.0, t2))
    .norm()
}

/// Samples a scenario sitting exactly on the phase condition (residual = 0
/// up to rounding): real decomposition magnitudes with θ₁ − θ₂ = ±π/2 make
/// |a·e^{iθ₁} + b·e^{iθ₂}| = 1, and θ₃ is set to its argument.
pub fn sample_on_condition_scenario(
    weights: SuperpositionWeights,
    rng: &mut crate::hilbert::Prng,
) -> Result<LdliScenario> {
    let a_mag = (0.05 + 0.9 * rng.uniform()).sqrt();
    let b_mag = (1.0 - a_mag * a_mag).sqrt();
    let theta2 = rng.uniform_in(0.0, std::f64::consts::TAU);
    let sign = if rng.bernoulli(0.5) { 1.0 } else { -1.0 };
    let theta1 = theta2 + sign * std::f64::consts::FRAC_PI_2;
    let target = C64::new(a_mag, 0.0) * C64::from_polar(1.0, theta1)
        + C64::new(b_mag, 0.0) * C64::from_polar(1.0, theta2);
    let theta3 = target.arg();
    LdliScenario::canonical(
        C64::new(a_mag, 0.0),
        C64::new(b_mag, 0.0),
        [theta1, theta2, theta3],
        weights,
    )
}

/// Samples a generic scenario (uniform phases, Haar-like coefficients); the
/// phase condition then fails by an O(1) margin almost surely.
pub fn sample_generic_scenario(
    weights: SuperpositionWeights,
    rng: &mut crate::hilbert::Prng,
) -> Result<LdliScenario> {
    let a_mag = (0.05 + 0.9 * rng.uniform()).sqrt();
    let b_mag = (1.0 - a_mag * a_mag).sqrt();
    let a = C64::from_polar(a_mag, rng.uniform_in(0.0, std::f64::consts::TAU));
    let b = C64::from_polar(b_mag, rng.uniform_in(0.0, std::f64::consts::TAU));
    let thetas = [
        rng.uniform_in(0.0, std::f64::consts::TAU),
        rng.uniform_in(0.0, std::f64::consts::TAU),
        rng.uniform_in(0.0, std::f64::consts::TAU),
    ];
    LdliScenario::canonical(a, b, thetas, weights)
}

/// The device under test in a discrimination pipeline.
///
/// `Channel` is an honest linear CPTNI map applied to every input. The
/// `PerInput` variant models the counterfactual superposer branch: input j
/// is routed to its own single-Kraus channel. Each branch is individually
/// CPTNI, but no single linear map realizes the whole table — that is the
/// content of the no-go being witnessed — so the device exists only on the
/// declared inputs.
#[derive(Debug, Clone)]
pub enum DiscriminationDevice {
    Channel(KrausChannel),
    PerInput(Vec<KrausChannel>),
}

impl DiscriminationDevice {
    fn apply(&self, index: usize, rho: &DensityOperator) -> Result<DMatrix<C64>> {
        match self {
            Self::Channel(ch) => ch.apply_matrix(rho.matrix()),
            Self::PerInput(branches) => {
                let branch = branches.get(index).ok_or(Error::DimensionMismatch {
                    expected: branches.len(),
                    got: index,
                })?;
                branch.apply_matrix(rho.matrix())
            }
        }
    }
}

/// The counterfactual superposer restricted to a scenario's dependent
/// triple: branch j maps ψ_j ⊗ φ_aux to Ψ_j by the rank-one partial
/// isometry |Ψ_j⟩⟨ψ_j ⊗ φ_aux|. The three branch operators together span
/// the rank-3 output space even though the inputs span only two dimensions.
pub fn hypothetical_superposer_device(scenario: &LdliScenario) -> Result<DiscriminationDevice> {
    let construction = construct_ldli(scenario)?;
    let inputs = scenario.inputs()?;
    let mut branches = Vec::with_capacity(3);
    for (input, output) in inputs.iter().zip(construction.outputs.iter()) {
        let joint = input.tensor(&scenario.phi);
        let kraus = output.amplitudes() * joint.amplitudes().adjoint();
        branches.push(KrausChannel::with_tol(vec![kraus], 1e-9)?);
    }
    Ok(DiscriminationDevice::PerInput(branches))
}

/// Tensors each scenario input with the auxiliary φ register, giving the
/// ray inputs the counterfactual device acts on.
pub fn ldli_pipeline_inputs(scenario: &LdliScenario) -> Result<Vec<Ray>> {
    let inputs = scenario.inputs()?;
    inputs.iter().map(|v| ray_from_vector(&v.tensor(&scenario.phi))).collect()
}

/// End-to-end result of preprocessing + unambiguous discrimination.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    /// confusion[i][j] = probability of conclusive outcome i on input j;
    /// the last row is the inconclusive outcome.
    pub confusion: DMatrix<f64>,
    pub unambiguous: bool,
    /// Set when the inputs were linearly dependent yet the pipeline still
    /// discriminated them unambiguously — the no-go violation witness.
    pub violation_witness: bool,
    pub inputs_independent: bool,
}

/// Applies the device to every input, builds a UD POVM on the normalized
/// outputs when they are independent, and reports outcome statistics.
///
/// Unambiguous means: off-diagonal conclusive probabilities below 1e-10
/// with strictly positive diagonals. If that holds while the *inputs* are
/// linearly dependent, the run is flagged as a violation witness.
pub fn discrimination_pipeline(
    device: &DiscriminationDevice,
    inputs: &[Ray],
) -> Result<PipelineReport> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let m = inputs.len();

    let input_vectors: Vec<StateVector> = inputs.iter().map(|r| r.representative()).collect();
    let inputs_independent = linear_independence(&input_vectors, 1e-10)?.independent;

    // Push every input through its branch; demand (numerically) rank-one
    // successful outputs and normalize them to vectors.
    let mut output_vectors = Vec::with_capacity(m);
    let mut success_probs = Vec::with_capacity(m);
    for (j, input) in inputs.iter().enumerate() {
        let rho = DensityOperator::from_ray(input);
        let raw = device.apply(j, &rho)?;
        let p = raw.trace().re;
        if p < 1e-12 {
            return Err(Error::DegenerateNormalization { norm: p });
        }
        let normalized = &raw / C64::new(p, 0.0);
        let (vals, vecs) = linalg::hermitian_eigen(&normalized);
        let top = vals[vals.len() - 1];
        let second = if vals.len() > 1 { vals[vals.len() - 2].abs() } else { 0.0 };
        if second > 1e-12 && top / second < 1e6 {
            return Err(Error::NotRankOne { ratio: top / second });
        }
        let column = vecs.column(vals.len() - 1).clone_owned();
        output_vectors.push(StateVector::new(column)?);
        success_probs.push(p);
    }

    let povm = match build_ud_povm(&output_vectors)? {
        Ok(povm) => povm,
        Err(_) => {
            // Dependent outputs: no UD POVM exists, nothing to witness.
            return Ok(PipelineReport {
                confusion: DMatrix::zeros(m + 1, m),
                unambiguous: false,
                violation_witness: false,
                inputs_independent,
            });
        }
    };

    let mut confusion = DMatrix::zeros(m + 1, m);
    for (j, out) in output_vectors.iter().enumerate() {
        let rho = DensityOperator::from_ray(&ray_from_vector(out)?);
        let dist = povm.outcome_distribution(&rho)?;
        for i in 0..=m {
            confusion[(i, j)] = success_probs[j] * dist[i];
        }
    }

    let mut unambiguous = true;
    for j in 0..m {
        for i in 0..m {
            if i == j {
                if confusion[(i, j)] <= 0.0 {
                    unambiguous = false;
                }
            } else if confusion[(i, j)] > 1e-10 {
                unambiguous = false;
            }
        }
    }

    Ok(PipelineReport {
        confusion,
        unambiguous,
        violation_witness: unambiguous && !inputs_independent,
        inputs_independent,
    })
}

/// Maximum Gram deviation max_{ij} |⟨in_i|in_j⟩ − ⟨out_i|out_j⟩| between an
/// input family and a claimed isometric image.
///
/// Any value above tolerance certifies that no isometry implements the
/// mapping — the common core of the no-deleting and no-masking arguments.
pub fn isometry_gram_witness(
    in_states: &[StateVector],
    out_states: &[StateVector],
) -> Result<f64> {
    if in_states.len() != out_states.len() {
        return Err(Error::DimensionMismatch { expected: in_states.len(), got: out_states.len() });
    }
    if in_states.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut max_dev: f64 = 0.0;
    for i in 0..in_states.len() {
        for j in 0..in_states.len() {
            let g_in = in_states[i].inner(&in_states[j]);
            let g_out = out_states[i].inner(&out_states[j]);
            max_dev = max_dev.max((g_in - g_out).norm());
        }
    }
    Ok(max_dev)
}

/// Applies an explicit isometry to each input and delegates to
/// [`isometry_gram_witness`]; the deviation is zero up to rounding whenever
/// `iso` really is an isometry.
pub fn isometry_gram_witness_with_map(
    iso: &DMatrix<C64>,
    in_states: &[StateVector],
) -> Result<f64> {
    let out_states: Vec<StateVector> = in_states
        .iter()
        .map(|v| StateVector::unnormalized(iso * v.amplitudes()))
        .collect();
    isometry_gram_witness(in_states, &out_states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{random_state_with, Prng};
    use crate::linalg::max_abs;
    use nalgebra::dvector;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn plus() -> StateVector {
        StateVector::new(dvector![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap()
    }

    #[test]
    fn reciprocal_of_orthonormal_basis_is_itself() {
        let family = [StateVector::basis(2, 0), StateVector::basis(2, 1)];
        let reciprocal = reciprocal_family(&family).unwrap();
        for (r, f) in reciprocal.iter().zip(family.iter()) {
            assert!(max_abs(&DMatrix::from_columns(&[r.amplitudes() - f.amplitudes()])) < 1e-12);
        }
    }

    #[test]
    fn reciprocal_of_zero_plus_family() {
        let family = [StateVector::basis(2, 0), plus()];
        let reciprocal = reciprocal_family(&family).unwrap();
        // φ̃_1 = |0⟩ − |1⟩, φ̃_2 = √2·|1⟩.
        assert!((reciprocal[0].amplitude(0) - c(1.0, 0.0)).norm() < 1e-10);
        assert!((reciprocal[0].amplitude(1) - c(-1.0, 0.0)).norm() < 1e-10);
        assert!(reciprocal[1].amplitude(0).norm() < 1e-10);
        assert!((reciprocal[1].amplitude(1) - c(SQRT_2, 0.0)).norm() < 1e-10);
        // Biorthogonality.
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((reciprocal[i].inner(&family[j]) - c(want, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn reciprocal_rejects_dependent_family() {
        let family = [StateVector::basis(2, 0), StateVector::basis(2, 1), plus()];
        assert!(matches!(reciprocal_family(&family), Err(Error::LinearlyDependent { .. })));
    }

    #[test]
    fn ud_povm_for_orthonormal_basis_is_projective() {
        let family = [StateVector::basis(2, 0), StateVector::basis(2, 1)];
        let povm = build_ud_povm(&family).unwrap().unwrap();
        assert!((povm.lambdas()[0] - 1.0).abs() < 1e-12);
        assert!(linalg::max_abs(povm.inconclusive()) < 1e-10);
        assert!(povm.completeness_error() < 1e-10);
    }

    #[test]
    fn ud_povm_for_zero_plus_family() {
        let family = [StateVector::basis(2, 0), plus()];
        let povm = build_ud_povm(&family).unwrap().unwrap();
        // λ = 1/(2+√2) = 1 − 1/√2.
        let lambda = 1.0 / (2.0 + SQRT_2);
        assert!((povm.lambdas()[0] - lambda).abs() < 1e-10);
        assert!(povm.completeness_error() < 1e-10);
        let (psd, min_eig) = linalg::is_psd(povm.inconclusive(), 1e-10);
        assert!(psd, "inconclusive element not PSD: {min_eig}");

        // Outcome distributions on the two members.
        let on_zero = povm
            .outcome_distribution(&DensityOperator::from_ray(
                &ray_from_vector(&family[0]).unwrap(),
            ))
            .unwrap();
        assert!((on_zero[0] - lambda).abs() < 1e-10);
        assert!(on_zero[1] < 1e-10);
        assert!((on_zero[2] - (1.0 - lambda)).abs() < 1e-10);

        let on_plus = povm
            .outcome_distribution(&DensityOperator::from_ray(
                &ray_from_vector(&family[1]).unwrap(),
            ))
            .unwrap();
        assert!(on_plus[0] < 1e-10);
        assert!((on_plus[1] - lambda).abs() < 1e-10);
        assert!((on_plus[2] - (1.0 - lambda)).abs() < 1e-10);

        // Completeness on the maximally mixed state.
        let mixed = povm.outcome_distribution(&DensityOperator::maximally_mixed(2)).unwrap();
        let total: f64 = mixed.iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ud_povm_reports_dependency_for_dependent_family() {
        let family = [StateVector::basis(2, 0), StateVector::basis(2, 1), plus()];
        let infeasible = build_ud_povm(&family).unwrap().unwrap_err();
        assert!(infeasible.smallest_singular_value < 1e-10);
        assert!(infeasible.residual < 1e-8);
        // The dependency is proportional to (1, 1, −√2).
        let d = &infeasible.dependency;
        let scale = d[0];
        assert!(scale.norm() > 1e-3);
        assert!((d[1] / scale - c(1.0, 0.0)).norm() < 1e-8);
        assert!((d[2] / scale - c(-SQRT_2, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn ud_lemma_forward_random_independent_families() {
        let mut rng = Prng::new(71);
        for trial in 0..60 {
            let dim = 2 + (trial % 5);
            let m = 1 + (trial % dim);
            let vectors: Vec<StateVector> =
                (0..m).map(|_| random_state_with(dim, &mut rng).unwrap()).collect();
            let report = linear_independence(&vectors, 1e-10).unwrap();
            if !report.independent || report.smallest_singular_value < 1e-4 {
                continue;
            }
            let povm = build_ud_povm(&vectors).unwrap().unwrap();
            assert!(povm.completeness_error() < 1e-10);
            let (psd, _) = linalg::is_psd(povm.inconclusive(), 1e-10);
            assert!(psd);
            for (j, v) in vectors.iter().enumerate() {
                let rho = DensityOperator::from_ray(&ray_from_vector(v).unwrap());
                let dist = povm.outcome_distribution(&rho).unwrap();
                for (i, p) in dist.iter().take(m).enumerate() {
                    if i == j {
                        assert!(*p > 1e-12, "conclusive probability vanished");
                    } else {
                        assert!(*p < 1e-10, "cross term too large: {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn ud_lemma_converse_random_dependent_families() {
        let mut rng = Prng::new(72);
        for trial in 0..40 {
            let dim = 2 + (trial % 4);
            // One more vector than fits, or an explicit combination.
            let mut vectors: Vec<StateVector> =
                (0..dim).map(|_| random_state_with(dim, &mut rng).unwrap()).collect();
            let combo = vectors[0].amplitudes() * c(0.6, 0.1) + vectors[1].amplitudes() * c(0.4, -0.3);
            vectors.push(StateVector::unnormalized(combo).normalize().unwrap());
            let outcome = build_ud_povm(&vectors).unwrap();
            let infeasible = outcome.unwrap_err();
            assert!(infeasible.residual < 1e-8, "claimed dependency does not annihilate");
        }
    }

    #[test]
    fn ldli_determinant_and_independence_baseline() {
        let w = SuperpositionWeights::balanced();
        let a = c(FRAC_1_SQRT_2, 0.0);
        let scenario = LdliScenario::canonical(a, a, [0.0, 0.0, 0.0], w).unwrap();
        let construction = construct_ldli(&scenario).unwrap();
        // |α²β(1 − a − b)| = (√2 − 1)/(2√2), frozen from the determinant.
        assert!((construction.det_magnitude - 0.146_446_609_406_726_2).abs() < 1e-12);
        assert!(construction.smallest_singular_value > 1e-3);
        let residual = phase_condition_residual(&scenario);
        assert!((residual - (SQRT_2 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn ldli_on_condition_scenario_is_dependent() {
        let w = SuperpositionWeights::balanced();
        let a = c(FRAC_1_SQRT_2, 0.0);
        // e^{iπ/4} = (e^{iπ/2} + 1)/√2 exactly.
        let scenario = LdliScenario::canonical(a, a, [FRAC_PI_2, 0.0, FRAC_PI_4], w).unwrap();
        assert!(phase_condition_residual(&scenario) < 1e-15);
        let construction = construct_ldli(&scenario).unwrap();
        assert!(construction.smallest_singular_value < 1e-10);
        assert!(construction.det_magnitude < 1e-15);
    }

    #[test]
    fn ldli_rejects_degenerate_coefficients() {
        let w = SuperpositionWeights::balanced();
        assert!(LdliScenario::canonical(c(1.0, 0.0), c(0.0, 0.0), [0.0; 3], w).is_err());
    }

    #[test]
    fn phase_condition_gauge_fragility() {
        let w = SuperpositionWeights::balanced();
        let mut rng = Prng::new(303);
        let mut violations = 0usize;
        let total = 2000usize;
        for _ in 0..total {
            let scenario = sample_on_condition_scenario(w, &mut rng).unwrap();
            assert!(phase_condition_residual(&scenario) < 1e-12);
            let gamma = rng.uniform_in(0.0, 2.0 * PI);
            let delta = rng.uniform_in(0.0, 2.0 * PI);
            if phase_condition_residual(&scenario.gauge_shifted(gamma, delta)) > 1e-3 {
                violations += 1;
            }
        }
        assert!(
            violations as f64 > 0.99 * total as f64,
            "gauge shifts failed to break the condition: {violations}/{total}"
        );
    }

    proptest! {
        // σ_min < 1e-10 ⟺ residual < 1e-8, on both generic and
        // on-condition scenarios.
        #[test]
        fn dependence_iff_phase_condition(seed in 0u64..300, on_condition: bool) {
            let w = SuperpositionWeights::balanced();
            let mut rng = Prng::new(seed);
            let scenario = if on_condition {
                sample_on_condition_scenario(w, &mut rng).unwrap()
            } else {
                sample_generic_scenario(w, &mut rng).unwrap()
            };
            let construction = construct_ldli(&scenario).unwrap();
            let residual = phase_condition_residual(&scenario);
            prop_assert_eq!(
                construction.smallest_singular_value < 1e-10,
                residual < 1e-8,
                "sigma_min = {}, residual = {}",
                construction.smallest_singular_value,
                residual
            );
        }
    }

    #[test]
    fn pipeline_identity_channel_on_independent_pair() {
        let device = DiscriminationDevice::Channel(KrausChannel::identity(2));
        let inputs = [
            ray_from_vector(&StateVector::basis(2, 0)).unwrap(),
            ray_from_vector(&plus()).unwrap(),
        ];
        let report = discrimination_pipeline(&device, &inputs).unwrap();
        assert!(report.unambiguous);
        assert!(!report.violation_witness);
        assert!(report.inputs_independent);
        let lambda = 1.0 / (2.0 + SQRT_2);
        assert!((report.confusion[(0, 0)] - lambda).abs() < 1e-10);
        assert!((report.confusion[(1, 1)] - lambda).abs() < 1e-10);
    }

    #[test]
    fn pipeline_identity_channel_on_dependent_triple() {
        let device = DiscriminationDevice::Channel(KrausChannel::identity(2));
        let inputs = [
            ray_from_vector(&StateVector::basis(2, 0)).unwrap(),
            ray_from_vector(&StateVector::basis(2, 1)).unwrap(),
            ray_from_vector(&plus()).unwrap(),
        ];
        let report = discrimination_pipeline(&device, &inputs).unwrap();
        assert!(!report.unambiguous);
        assert!(!report.violation_witness);
        assert!(!report.inputs_independent);
    }

    #[test]
    fn pipeline_counterfactual_superposer_raises_witness() {
        let w = SuperpositionWeights::balanced();
        let a = c(FRAC_1_SQRT_2, 0.0);
        // Generic phases: outputs independent while inputs are dependent.
        let scenario = LdliScenario::canonical(a, a, [0.4, 1.9, 5.1], w).unwrap();
        let device = hypothetical_superposer_device(&scenario).unwrap();
        let inputs = ldli_pipeline_inputs(&scenario).unwrap();
        let report = discrimination_pipeline(&device, &inputs).unwrap();
        assert!(!report.inputs_independent, "tensored inputs must stay dependent");
        assert!(report.unambiguous, "counterfactual outputs must be discriminated");
        assert!(report.violation_witness, "the no-go witness must fire");
    }

    #[test]
    fn pipeline_counterfactual_on_condition_no_witness() {
        let w = SuperpositionWeights::balanced();
        let a = c(FRAC_1_SQRT_2, 0.0);
        // On the phase condition the outputs stay dependent: no witness.
        let scenario = LdliScenario::canonical(a, a, [FRAC_PI_2, 0.0, FRAC_PI_4], w).unwrap();
        let device = hypothetical_superposer_device(&scenario).unwrap();
        let inputs = ldli_pipeline_inputs(&scenario).unwrap();
        let report = discrimination_pipeline(&device, &inputs).unwrap();
        assert!(!report.unambiguous);
        assert!(!report.violation_witness);
    }

    #[test]
    fn pipeline_rejects_full_rank_outputs() {
        // A channel that mixes: half identity, half bit flip.
        let h = FRAC_1_SQRT_2;
        let k0 = DMatrix::identity(2, 2) * c(h, 0.0);
        let k1 = nalgebra::dmatrix![c(0.0, 0.0), c(h, 0.0); c(h, 0.0), c(0.0, 0.0)];
        let device = DiscriminationDevice::Channel(KrausChannel::new(vec![k0, k1]).unwrap());
        let inputs = [
            ray_from_vector(&StateVector::basis(2, 0)).unwrap(),
            ray_from_vector(&plus()).unwrap(),
        ];
        let err = discrimination_pipeline(&device, &inputs);
        assert!(matches!(err, Err(Error::NotRankOne { .. })));
    }

    #[test]
    fn pipeline_total_probability_never_exceeds_one() {
        let mut rng = Prng::new(404);
        for trial in 0..30 {
            let dim = 2 + trial % 3;
            let vectors: Vec<StateVector> =
                (0..2).map(|_| random_state_with(dim, &mut rng).unwrap()).collect();
            let inputs: Vec<Ray> = vectors.iter().map(|v| ray_from_vector(v).unwrap()).collect();
            let device = DiscriminationDevice::Channel(KrausChannel::identity(dim));
            let Ok(report) = discrimination_pipeline(&device, &inputs) else { continue };
            for j in 0..inputs.len() {
                let total: f64 = (0..=inputs.len()).map(|i| report.confusion[(i, j)]).sum();
                assert!(total <= 1.0 + 1e-10, "outcome probabilities exceeded one: {total}");
            }
        }
    }

    #[test]
    fn gram_witness_zero_for_unitaries() {
        let mut rng = Prng::new(11);
        // Random unitary from the QR of a Gaussian matrix.
        let g = DMatrix::from_fn(3, 3, |_, _| rng.complex_normal());
        let qr = g.qr();
        let q = qr.q();
        let family: Vec<StateVector> =
            (0..4).map(|_| random_state_with(3, &mut rng).unwrap()).collect();
        let dev = isometry_gram_witness_with_map(&q, &family).unwrap();
        assert!(dev < 1e-12);
    }

    #[test]
    fn gram_witness_certifies_no_deleting() {
        // in = {|ψψ⟩, |φφ⟩} with ⟨ψ|φ⟩ = 1/√2, out = {|ψ0⟩, |φ0⟩}.
        let psi = StateVector::basis(2, 0);
        let phi = plus();
        let zero = StateVector::basis(2, 0);
        let ins = [psi.tensor(&psi), phi.tensor(&phi)];
        let outs = [psi.tensor(&zero), phi.tensor(&zero)];
        let dev = isometry_gram_witness(&ins, &outs).unwrap();
        // |s² − s| at s = 1/√2.
        assert!((dev - (0.5 - FRAC_1_SQRT_2).abs()).abs() < 1e-12);
    }

    #[test]
    fn gram_witness_masking_two_states_is_compatible() {
        // A two-element family with equal pairwise Gram can be embedded with
        // frozen marginals; here the simplest Gram-preserving image.
        let s = FRAC_1_SQRT_2;
        let ins = [StateVector::basis(2, 0), plus()];
        // Outputs in dim 4 with the same inner product s.
        let out0 = StateVector::basis(4, 0);
        let out1 = StateVector::new(dvector![
            c(s, 0.0),
            c((1.0 - s * s).sqrt(), 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0)
        ])
        .unwrap();
        let dev = isometry_gram_witness(&ins, &[out0, out1]).unwrap();
        assert!(dev < 1e-12);
    }

    #[test]
    fn clone_feasibility_follows_independence() {
        assert!(clone_feasibility(&[StateVector::basis(2, 0), plus()]).unwrap());
        assert!(!clone_feasibility(&[
            StateVector::basis(2, 0),
            StateVector::basis(2, 1),
            plus()
        ])
        .unwrap());
        // Haar families of d states in dimension d are independent almost surely.
        let mut rng = Prng::new(1234);
        let family: Vec<StateVector> =
            (0..4).map(|_| random_state_with(4, &mut rng).unwrap()).collect();
        assert!(clone_feasibility(&family).unwrap());
    }
}
