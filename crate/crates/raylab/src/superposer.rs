//! Coherent superposition of rays.
//!
//! Two rays do not determine "their superposition": the interference term
//! rotates under independent rephasing of the vector representatives, so a
//! whole θ-family of output rays is admissible. This module implements that
//! family, the phase conventions (lifts) that pick representatives, the
//! reference-calibrated superposition that a known reference ray χ makes
//! gauge invariant, and the compiled postselected channel that produces it
//! together with its exact success-probability law.

use nalgebra::{DMatrix, DVector};

use crate::channels::KrausChannel;
use crate::hilbert::{ray_from_vector, DensityOperator, Prng, Ray, StateVector};
use crate::linalg;
use crate::{C64, Error, Result};

/// Threshold below which a reference overlap counts as vanishing.
pub const OVERLAP_FLOOR: f64 = 1e-12;

/// Tolerance on the promised overlap magnitudes when routing inputs into the
/// compiled protocol; looser inputs are an explicit error, not a silent
/// approximation.
pub const PROMISE_TOL: f64 = 1e-9;

/// Fixed superposition amplitudes (α, β), both nonzero, |α|² + |β|² = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionWeights {
    alpha: C64,
    beta: C64,
}

impl SuperpositionWeights {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        if alpha.norm() < OVERLAP_FLOOR || beta.norm() < OVERLAP_FLOOR {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "alpha and beta must both be nonzero".into(),
            });
        }
        let deviation = (alpha.norm_sqr() + beta.norm_sqr() - 1.0).abs();
        if deviation > crate::DEFAULT_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { alpha, beta })
    }

    /// The balanced weights (1/√2, 1/√2).
    pub fn balanced() -> Self {
        let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self { alpha: w, beta: w }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }
}

/// Side information fixing the overlap magnitudes of both inputs against a
/// known reference: tr(P_χ P_ψ) = c₁ and tr(P_χ P_φ) = c₂, both nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapPromise {
    chi: StateVector,
    c1: f64,
    c2: f64,
}

impl OverlapPromise {
    pub fn new(chi: StateVector, c1: f64, c2: f64) -> Result<Self> {
        if !chi.is_normalized() {
            return Err(Error::NotNormalized { deviation: (chi.norm() - 1.0).abs() });
        }
        for (name, c) in [("c1", c1), ("c2", c2)] {
            if !(c > OVERLAP_FLOOR && c <= 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("promised overlap must lie in (0, 1], got {c}"),
                });
            }
        }
        Ok(Self { chi, c1, c2 })
    }

    pub fn chi(&self) -> &StateVector {
        &self.chi
    }

    pub fn chi_ray(&self) -> Ray {
        ray_from_vector(&self.chi).expect("promise reference is normalized")
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Checks that a pair of inputs actually sits on the promise manifold.
    pub fn check_inputs(&self, psi: &StateVector, phi: &StateVector) -> Result<()> {
        let m1 = self.chi.inner(psi).norm_sqr();
        let m2 = self.chi.inner(phi).norm_sqr();
        if (m1 - self.c1).abs() > PROMISE_TOL {
            return Err(Error::PromiseViolated { expected: self.c1, measured: m1 });
        }
        if (m2 - self.c2).abs() > PROMISE_TOL {
            return Err(Error::PromiseViolated { expected: self.c2, measured: m2 });
        }
        Ok(())
    }

    /// Draws a state with exact overlap magnitude `c` against the reference.
    pub fn sample_with_overlap(&self, c: f64, rng: &mut Prng) -> Result<StateVector> {
        sample_with_overlap(&self.chi, c, rng)
    }
}

/// A state at exact transition probability `c` from `chi`:
/// √c·e^{iγ}·χ + √(1-c)·e^{iδ}·u, with u Haar in χ's orthocomplement and
/// uniformly random branch phases.
pub fn sample_with_overlap(chi: &StateVector, c: f64, rng: &mut Prng) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::InvalidParameter {
            name: "c",
            reason: format!("overlap must lie in [0, 1], got {c}"),
        });
    }
    let gamma = C64::from_polar(1.0, rng.uniform_in(0.0, std::f64::consts::TAU));
    if chi.dim() == 1 || (1.0 - c).abs() < 1e-15 {
        return StateVector::new(chi.amplitudes() * gamma);
    }
    let ortho = crate::hilbert::random_orthogonal_state(chi, rng)?;
    let delta = C64::from_polar(1.0, rng.uniform_in(0.0, std::f64::consts::TAU));
    let amps = chi.amplitudes() * (gamma * C64::new(c.sqrt(), 0.0))
        + ortho.amplitudes() * (delta * C64::new((1.0 - c).sqrt(), 0.0));
    StateVector::new(amps)
}

/// A phase convention: the rule that lifts each ray (with nonvanishing
/// reference overlap) to a fixed vector representative.
///
/// The lift is Γ(ρ) = ρ|χ⟩ / √(⟨χ|ρ|χ⟩); the resulting representative has a
/// real, strictly positive inner product with |χ⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConvention {
    chi: StateVector,
}

impl PhaseConvention {
    pub fn new(chi: StateVector) -> Result<Self> {
        if !chi.is_normalized() {
            return Err(Error::NotNormalized { deviation: (chi.norm() - 1.0).abs() });
        }
        Ok(Self { chi })
    }

    pub fn reference(&self) -> &StateVector {
        &self.chi
    }

    /// Convention-fixed representative of `rho`.
    pub fn lift(&self, rho: &Ray) -> Result<StateVector> {
        if rho.dim() != self.chi.dim() {
            return Err(Error::DimensionMismatch { expected: self.chi.dim(), got: rho.dim() });
        }
        let projected: DVector<C64> = rho.projector() * self.chi.amplitudes();
        let weight = self.chi.amplitudes().dotc(&projected).re;
        if weight <= OVERLAP_FLOOR {
            return Err(Error::VanishingReferenceOverlap { overlap: weight.max(0.0) });
        }
        StateVector::new(projected / C64::new(weight.sqrt(), 0.0))
    }

    /// Convention-fixed complex overlap ⟨lift(ρ₁)|lift(ρ₂)⟩.
    ///
    /// Its modulus squared always equals tr(ρ₁ρ₂); its phase is the datum
    /// the convention supplies, and different conventions generally disagree
    /// about it.
    pub fn overlap(&self, rho1: &Ray, rho2: &Ray) -> Result<C64> {
        Ok(self.lift(rho1)?.inner(&self.lift(rho2)?))
    }
}

/// One member of the θ-family of (α, β)-superpositions of two rays.
///
/// Representatives are extracted deterministically from the projectors (top
/// eigenvector, leading amplitude rotated real positive); changing
/// representatives only reparametrizes θ, so the family as a set is well
/// defined on rays. θ is an explicit argument here: no universal device
/// exists that could pick it for arbitrary inputs.
pub fn superposition_family_member(
    p: &Ray,
    q: &Ray,
    w: &SuperpositionWeights,
    theta: f64,
) -> Result<Ray> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    let psi = p.representative();
    let phi = q.representative();
    let phase = C64::from_polar(1.0, theta);
    let amps = psi.amplitudes() * w.alpha + phi.amplitudes() * (w.beta * phase);
    let norm = amps.norm();
    if norm < OVERLAP_FLOOR {
        return Err(Error::DegenerateNormalization { norm });
    }
    ray_from_vector(&StateVector::new(amps / C64::new(norm, 0.0))?)
}

/// The expansion of an unnormalized superposition projector into its
/// ray-determined diagonal part and its gauge-sensitive interference part.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceExpansion {
    /// |α|²P_ψ + |β|²P_φ — a function of the input rays alone.
    pub diagonal: DensityOperator,
    /// αβ*e^{-iθ}|ψ⟩⟨φ| + h.c. — the coherence a device must fix.
    pub cross: DMatrix<C64>,
    /// 1 + 2Re(α*β e^{iθ}⟨ψ|φ⟩).
    pub norm_sq: f64,
}

/// Expands |Ψ_θ⟩⟨Ψ_θ| for Ψ_θ = α|ψ⟩ + βe^{iθ}|φ⟩ into diagonal + cross,
/// with the squared-norm law.
pub fn interference_expansion(
    psi: &StateVector,
    phi: &StateVector,
    w: &SuperpositionWeights,
    theta: f64,
) -> Result<InterferenceExpansion> {
    if psi.dim() != phi.dim() {
        return Err(Error::DimensionMismatch { expected: psi.dim(), got: phi.dim() });
    }
    let p = ray_from_vector(psi)?;
    let q = ray_from_vector(phi)?;
    let diagonal_matrix = p.projector() * C64::new(w.alpha.norm_sqr(), 0.0)
        + q.projector() * C64::new(w.beta.norm_sqr(), 0.0);
    let diagonal = DensityOperator::new(diagonal_matrix, 1e-9)?;
    let phase = C64::from_polar(1.0, theta);
    let coeff = w.alpha * w.beta.conj() * phase.conj();
    let outer = psi.amplitudes() * phi.amplitudes().adjoint();
    let half = outer * coeff;
    let cross = &half + half.adjoint();
    let norm_sq = 1.0 + 2.0 * (w.alpha.conj() * w.beta * phase * psi.inner(phi)).re;
    Ok(InterferenceExpansion { diagonal, cross, norm_sq })
}

/// The reference-calibrated superposition: with κ_ψ = ⟨χ|ψ⟩/|⟨χ|ψ⟩| and
/// κ_φ = ⟨χ|φ⟩/|⟨χ|φ⟩|, the vector α·κ_φ·|ψ⟩ + β·κ_ψ·|φ⟩.
///
/// The returned ray is invariant under independent rephasings of ψ, φ and χ
/// (a common global phase excepted), which is exactly what the reference
/// buys. Returns the ray together with the unnormalized vector.
pub fn reference_superposition(
    chi: &StateVector,
    psi: &StateVector,
    phi: &StateVector,
    w: &SuperpositionWeights,
) -> Result<(Ray, StateVector)> {
    let kappa_psi = unit_phase(chi.inner(psi))?;
    let kappa_phi = unit_phase(chi.inner(phi))?;
    let amps = psi.amplitudes() * (w.alpha * kappa_phi) + phi.amplitudes() * (w.beta * kappa_psi);
    let norm = amps.norm();
    if norm < OVERLAP_FLOOR {
        return Err(Error::DegenerateNormalization { norm });
    }
    let unnormalized = StateVector::unnormalized(amps.clone());
    let ray = ray_from_vector(&StateVector::new(amps / C64::new(norm, 0.0))?)?;
    Ok((ray, unnormalized))
}

fn unit_phase(z: C64) -> Result<C64> {
    let m = z.norm();
    if m < OVERLAP_FLOOR {
        return Err(Error::VanishingReferenceOverlap { overlap: m * m });
    }
    Ok(z / m)
}

/// The same superposition written purely in projectors:
/// |α|²P_ψ + |β|²P_φ + αβ*·P_ψP_χP_φ/√(tr(P_ψP_χ)tr(P_φP_χ)) + h.c.
///
/// Equals the outer product of [`reference_superposition`]'s unnormalized
/// vector; the two routes cross-validate each other.
pub fn reference_superposition_projector(
    chi: &Ray,
    p: &Ray,
    q: &Ray,
    w: &SuperpositionWeights,
) -> Result<DMatrix<C64>> {
    if chi.dim() != p.dim() || chi.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: chi.dim(), got: p.dim().max(q.dim()) });
    }
    let c1 = (p.projector() * chi.projector()).trace().re;
    let c2 = (q.projector() * chi.projector()).trace().re;
    if c1 <= OVERLAP_FLOOR || c2 <= OVERLAP_FLOOR {
        return Err(Error::VanishingReferenceOverlap { overlap: c1.min(c2) });
    }
    let scale = C64::new(1.0 / (c1 * c2).sqrt(), 0.0);
    let chain = p.projector() * chi.projector() * q.projector() * scale;
    let cross_half = chain * (w.alpha * w.beta.conj());
    let diagonal = p.projector() * C64::new(w.alpha.norm_sqr(), 0.0)
        + q.projector() * C64::new(w.beta.norm_sqr(), 0.0);
    Ok(diagonal + &cross_half + cross_half.adjoint())
}

/// Compiles the overlap promise into a single-Kraus CPTNI channel on
/// H⊗H → H whose success branch emits the reference superposition.
///
/// The success Kraus operator is
/// K = s·[(α/√c₂)(I⊗⟨χ|) + (β/√c₁)(⟨χ|⊗I)],  s = √(c₁c₂/(c₁+c₂)).
/// On promise inputs K(ψ⊗φ) = s·(α κ_φ|ψ⟩ + β κ_ψ|φ⟩), so the normalized
/// output ray is the reference superposition and the success probability is
/// c₁c₂/(c₁+c₂)·‖Ψ‖². The largest eigenvalue of K†K is
/// max((|α|√c₁+|β|√c₂)², |α|²c₁+|β|²c₂)/(c₁+c₂) ≤ 1 by Cauchy–Schwarz,
/// so the channel is CPTNI for every valid promise.
pub fn build_reference_protocol(
    promise: &OverlapPromise,
    w: &SuperpositionWeights,
) -> Result<KrausChannel> {
    let d = promise.chi.dim();
    let chi = promise.chi.amplitudes();
    let s = (promise.c1 * promise.c2 / (promise.c1 + promise.c2)).sqrt();
    let coeff_first = w.alpha / C64::new(promise.c2.sqrt(), 0.0);
    let coeff_second = w.beta / C64::new(promise.c1.sqrt(), 0.0);
    let mut kraus = DMatrix::from_element(d, d * d, C64::new(0.0, 0.0));
    for r in 0..d {
        for i in 0..d {
            for j in 0..d {
                let col = i * d + j;
                let mut entry = C64::new(0.0, 0.0);
                if r == i {
                    // (I ⊗ ⟨χ|) keeps the first register.
                    entry += coeff_first * chi[j].conj();
                }
                if r == j {
                    // (⟨χ| ⊗ I) keeps the second register.
                    entry += coeff_second * chi[i].conj();
                }
                kraus[(r, col)] = entry * C64::new(s, 0.0);
            }
        }
    }
    KrausChannel::with_tol(vec![kraus], 1e-9)
}

/// Simulated and closed-form success probabilities of the compiled protocol
/// on a promise-satisfying input pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolProbability {
    /// tr Λ(P_ψ ⊗ P_φ) from the channel simulation.
    pub simulated: f64,
    /// c₁c₂/(c₁+c₂) · ‖α κ_φ|ψ⟩ + β κ_ψ|φ⟩‖².
    pub formula: f64,
}

/// Runs the compiled channel on P_ψ ⊗ P_φ and evaluates the success law.
/// The two routes agree within 1e-9 on the promise manifold.
pub fn protocol_success_probability(
    channel: &KrausChannel,
    psi: &StateVector,
    phi: &StateVector,
    promise: &OverlapPromise,
    w: &SuperpositionWeights,
) -> Result<ProtocolProbability> {
    promise.check_inputs(psi, phi)?;
    let simulated = channel.apply_matrix(&joint_projector(psi, phi))?.trace().re;
    let (_, unnormalized) = reference_superposition(&promise.chi, psi, phi, w)?;
    let norm_sq = unnormalized.amplitudes().norm_squared();
    let formula = promise.c1 * promise.c2 / (promise.c1 + promise.c2) * norm_sq;
    Ok(ProtocolProbability { simulated, formula })
}

/// Normalized output ray of the compiled protocol on a given input pair.
pub fn protocol_output_ray(
    channel: &KrausChannel,
    psi: &StateVector,
    phi: &StateVector,
) -> Result<Ray> {
    let out = channel.apply_matrix(&joint_projector(psi, phi))?;
    let trace = out.trace().re;
    if trace < OVERLAP_FLOOR {
        return Err(Error::DegenerateNormalization { norm: trace });
    }
    Ray::new(linalg::hermitize(&(out / C64::new(trace, 0.0))), 1e-7)
}

/// The product projector P_ψ ⊗ P_φ built from the tensored vector; the
/// inputs are unit vectors, so no validation pass is needed.
fn joint_projector(psi: &StateVector, phi: &StateVector) -> DMatrix<C64> {
    let joint = linalg::kron_vec(psi.amplitudes(), phi.amplitudes());
    &joint * joint.adjoint()
}
