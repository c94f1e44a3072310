//! The steering-to-signaling counterfactual.
//!
//! Two ensemble decompositions of the same reduced state are remotely
//! preparable by measurement choice on a purifying system, yet locally
//! indistinguishable — unless a forbidden primitive (here, a probabilistic
//! cloner succeeding on a known dependent family) breaks the tie. This
//! module builds the purifications and steering measurements, evaluates the
//! exact success-statistics gap the cloner would open, simulates
//! repetition-amplified bit decoding, and verifies that any honest CPTNI
//! replacement of the oracle restores indistinguishability.
//!
//! Steering convention: for |Ω⟩ = Σ_i √λ_i |e_i⟩_A|f_i⟩_B, the Alice
//! element steering Bob to √w|φ⟩ = Σ_i d_i|f_i⟩ is the projector onto
//! Σ_i conj(d_i)/√λ_i |e_i⟩ — the amplitudes enter complex conjugated.

use nalgebra::{DMatrix, DVector};

use crate::channels::KrausChannel;
use crate::hilbert::{ray_from_vector, DensityOperator, Prng, Ray, StateVector};
use crate::linalg::{self, TraceOut};
use crate::{C64, Error, Result};

/// A pure-state ensemble: weights summing to one and the matching states.
#[derive(Debug, Clone)]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<StateVector>,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, states: Vec<StateVector>) -> Result<Self> {
        if weights.is_empty() || weights.len() != states.len() {
            return Err(Error::EnsembleMismatch {
                reason: format!("{} weights for {} states", weights.len(), states.len()),
            });
        }
        if weights.iter().any(|w| *w < 0.0) {
            return Err(Error::EnsembleMismatch { reason: "negative weight".into() });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::EnsembleMismatch {
                reason: format!("weights sum to {total}, expected 1"),
            });
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(Error::EnsembleMismatch { reason: "state dimensions differ".into() });
        }
        Ok(Self { weights, states })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// The ensemble average Σ w_i |v_i⟩⟨v_i|.
    pub fn average(&self) -> Result<DensityOperator> {
        let dim = self.dim();
        let mut sum = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for (w, s) in self.weights.iter().zip(&self.states) {
            sum += ray_from_vector(s)?.projector() * C64::new(*w, 0.0);
        }
        DensityOperator::new(sum, 1e-9)
    }

    /// Draws a state index according to the weights.
    pub fn sample_index(&self, rng: &mut Prng) -> usize {
        let mut u = rng.uniform();
        for (i, w) in self.weights.iter().enumerate() {
            if u < *w {
                return i;
            }
            u -= w;
        }
        self.weights.len() - 1
    }
}

/// Purifies a trace-one density operator: returns |Ω⟩ ∈ H_A ⊗ H_B with
/// tr_A |Ω⟩⟨Ω| = ρ_B, where dim(H_A) equals the rank of ρ_B.
pub fn purify(rho_b: &DensityOperator) -> Result<Purification> {
    if (rho_b.trace() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidOperator {
            property: "unit trace",
            deviation: (rho_b.trace() - 1.0).abs(),
            tol: 1e-9,
        });
    }
    let (values, vectors) = linalg::hermitian_eigen(rho_b.matrix());
    let dim_b = rho_b.dim();
    // Keep strictly positive eigenvalues, largest first.
    let kept: Vec<(f64, usize)> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 1e-12)
        .map(|(i, v)| (*v, i))
        .rev()
        .collect();
    if kept.is_empty() {
        return Err(Error::InvalidOperator {
            property: "positive semidefinite",
            deviation: 1.0,
            tol: 1e-12,
        });
    }
    let dim_a = kept.len();
    let mut amps = DVector::from_element(dim_a * dim_b, C64::new(0.0, 0.0));
    let mut eigenvalues = Vec::with_capacity(dim_a);
    let mut basis_b = Vec::with_capacity(dim_a);
    for (a, (lambda, col)) in kept.iter().enumerate() {
        let mut f = vectors.column(*col).clone_owned();
        // Deterministic eigenvector phase: leading amplitude real positive.
        if let Some(lead) = f.iter().find(|z| z.norm() > 1e-9) {
            let phase = lead / lead.norm();
            f /= phase;
        }
        let root = C64::new(lambda.sqrt(), 0.0);
        for b in 0..dim_b {
            amps[a * dim_b + b] = root * f[b];
        }
        eigenvalues.push(*lambda);
        basis_b.push(f);
    }
    Ok(Purification { state: StateVector::new(amps)?, dim_a, dim_b, eigenvalues, basis_b })
}

/// A purification |Ω⟩ = Σ_i √λ_i |e_i⟩_A|f_i⟩_B with its Schmidt data.
#[derive(Debug, Clone)]
pub struct Purification {
    state: StateVector,
    dim_a: usize,
    dim_b: usize,
    eigenvalues: Vec<f64>,
    basis_b: Vec<DVector<C64>>,
}

impl Purification {
    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    /// Bob's marginal tr_A |Ω⟩⟨Ω|.
    pub fn bob_marginal(&self) -> Result<DensityOperator> {
        let outer = self.state.amplitudes() * self.state.amplitudes().adjoint();
        let reduced = linalg::partial_trace(&outer, self.dim_a, self.dim_b, TraceOut::First);
        DensityOperator::new(reduced, 1e-9)
    }

    /// The Alice POVM that steers Bob to the target ensemble.
    ///
    /// Element k projects onto |a_k⟩ = Σ_i conj(d_{ki})/√λ_i |e_i⟩ where
    /// √w_k|φ_k⟩ = Σ_i d_{ki}|f_i⟩; completeness on H_A follows from the
    /// ensemble averaging to the marginal.
    pub fn steering_measurement(&self, target: &Ensemble) -> Result<Vec<DMatrix<C64>>> {
        if target.dim() != self.dim_b {
            return Err(Error::DimensionMismatch { expected: self.dim_b, got: target.dim() });
        }
        let marginal = self.bob_marginal()?;
        let average = target.average()?;
        let mismatch = linalg::max_abs(&(average.matrix() - marginal.matrix()));
        if mismatch > 1e-9 {
            return Err(Error::EnsembleMismatch {
                reason: format!("target averages differ from the marginal by {mismatch:e}"),
            });
        }
        let mut elements = Vec::with_capacity(target.len());
        for (w, phi) in target.weights().iter().zip(target.states()) {
            let mut alice = DVector::from_element(self.dim_a, C64::new(0.0, 0.0));
            for (i, f_i) in self.basis_b.iter().enumerate() {
                // d_i = √w·⟨f_i|φ⟩.
                let d_i = C64::new(w.sqrt(), 0.0) * f_i.dotc(phi.amplitudes());
                alice[i] = d_i.conj() / C64::new(self.eigenvalues[i].sqrt(), 0.0);
            }
            elements.push(&alice * alice.adjoint());
        }
        Ok(elements)
    }

    /// Bob's unnormalized conditional states under an Alice POVM:
    /// (weight, normalized state) per element.
    pub fn steered_ensemble(&self, povm: &[DMatrix<C64>]) -> Result<Vec<(f64, DensityOperator)>> {
        let outer = self.state.amplitudes() * self.state.amplitudes().adjoint();
        let mut out = Vec::with_capacity(povm.len());
        for element in povm {
            if element.nrows() != self.dim_a {
                return Err(Error::DimensionMismatch {
                    expected: self.dim_a,
                    got: element.nrows(),
                });
            }
            let lifted = element.kronecker(&DMatrix::identity(self.dim_b, self.dim_b));
            let selected = &lifted * &outer;
            let reduced = linalg::partial_trace(&selected, self.dim_a, self.dim_b, TraceOut::First);
            let weight = reduced.trace().re;
            if weight < 1e-14 {
                out.push((0.0, DensityOperator::maximally_mixed(self.dim_b)));
                continue;
            }
            let normalized =
                DensityOperator::new(linalg::hermitize(&(&reduced / C64::new(weight, 0.0))), 1e-8)?;
            out.push((weight, normalized));
        }
        Ok(out)
    }
}

/// How the clone oracle behaves off its declared success set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffSetPolicy {
    /// Never succeeds outside the set (the default modeling choice).
    Zero,
    /// Succeeds with probability max_j p_j·|⟨ψ_j|state⟩|².
    OverlapWeighted,
}

/// The counterfactual probabilistic cloner: succeeds on each member of a
/// declared state set with a per-state probability.
#[derive(Debug, Clone)]
pub struct CloneOracle {
    set: Vec<StateVector>,
    success_probs: Vec<f64>,
    policy: OffSetPolicy,
}

impl CloneOracle {
    pub fn new(
        set: Vec<StateVector>,
        success_probs: Vec<f64>,
        policy: OffSetPolicy,
    ) -> Result<Self> {
        if set.is_empty() || set.len() != success_probs.len() {
            return Err(Error::EnsembleMismatch {
                reason: "oracle needs one success probability per member".into(),
            });
        }
        if success_probs.iter().any(|p| !(*p > 0.0 && *p <= 1.0)) {
            return Err(Error::InvalidParameter {
                name: "success_probs",
                reason: "every member probability must lie in (0, 1]".into(),
            });
        }
        Ok(Self { set, success_probs, policy })
    }

    pub fn set(&self) -> &[StateVector] {
        &self.set
    }

    /// Exact success probability on a pure state, per the declared policy.
    pub fn success_probability(&self, state: &StateVector) -> f64 {
        for (member, p) in self.set.iter().zip(&self.success_probs) {
            if member.inner(state).norm_sqr() > 1.0 - 1e-9 {
                return *p;
            }
        }
        match self.policy {
            OffSetPolicy::Zero => 0.0,
            OffSetPolicy::OverlapWeighted => self
                .set
                .iter()
                .zip(&self.success_probs)
                .map(|(member, p)| p * member.inner(state).norm_sqr())
                .fold(0.0, f64::max),
        }
    }

    /// One Monte-Carlo attempt; on success returns the doubled state.
    pub fn clone_attempt(&self, state: &Ray, rng: &mut Prng) -> (bool, Option<Ray>) {
        let rep = state.representative();
        let p = self.success_probability(&rep);
        if p > 0.0 && rng.bernoulli(p) {
            (true, Some(state.tensor(state)))
        } else {
            (false, None)
        }
    }
}

/// A complete steering scenario: the shared state, the two target
/// ensembles, the purification, and Alice's two steering POVMs.
#[derive(Debug, Clone)]
pub struct SteeringScenario {
    rho_b: DensityOperator,
    ensembles: [Ensemble; 2],
    purification: Purification,
    alice_povms: [Vec<DMatrix<C64>>; 2],
}

impl SteeringScenario {
    /// Builds and validates the full scenario from the two decompositions.
    pub fn build(ensemble0: Ensemble, ensemble1: Ensemble) -> Result<Self> {
        let rho_b = ensemble0.average()?;
        let mismatch = linalg::max_abs(&(ensemble1.average()?.matrix() - rho_b.matrix()));
        if mismatch > 1e-10 {
            return Err(Error::EnsembleMismatch {
                reason: format!("decompositions disagree by {mismatch:e}"),
            });
        }
        let purification = purify(&rho_b)?;
        let povm0 = purification.steering_measurement(&ensemble0)?;
        let povm1 = purification.steering_measurement(&ensemble1)?;
        let scenario = Self {
            rho_b,
            ensembles: [ensemble0, ensemble1],
            purification,
            alice_povms: [povm0, povm1],
        };
        scenario.verify()?;
        Ok(scenario)
    }

    pub fn rho_b(&self) -> &DensityOperator {
        &self.rho_b
    }

    pub fn ensemble(&self, bit: usize) -> &Ensemble {
        &self.ensembles[bit]
    }

    pub fn purification(&self) -> &Purification {
        &self.purification
    }

    pub fn alice_povm(&self, bit: usize) -> &[DMatrix<C64>] {
        &self.alice_povms[bit]
    }

    /// Steering soundness: each POVM is complete and its conditional Bob
    /// states reproduce the target ensemble.
    fn verify(&self) -> Result<()> {
        let dim_a = self.purification.dim_a();
        for (povm, ensemble) in self.alice_povms.iter().zip(&self.ensembles) {
            let mut sum = DMatrix::from_element(dim_a, dim_a, C64::new(0.0, 0.0));
            for e in povm {
                sum += e;
                let (psd, min_eig) = linalg::is_psd(e, 1e-10);
                if !psd {
                    return Err(Error::InvalidOperator {
                        property: "POVM element PSD",
                        deviation: -min_eig,
                        tol: 1e-10,
                    });
                }
            }
            let completeness = linalg::max_abs(&(sum - DMatrix::identity(dim_a, dim_a)));
            if completeness > 1e-10 {
                return Err(Error::InvalidOperator {
                    property: "POVM completeness",
                    deviation: completeness,
                    tol: 1e-10,
                });
            }
            let steered = self.purification.steered_ensemble(povm)?;
            for ((weight, state), (target_w, target_s)) in
                steered.iter().zip(ensemble.weights().iter().zip(ensemble.states()))
            {
                if (weight - target_w).abs() > 1e-9 {
                    return Err(Error::EnsembleMismatch {
                        reason: format!("steered weight {weight} vs target {target_w}"),
                    });
                }
                let fidelity = ray_from_vector(target_s)?.projector().iter().zip(state.matrix().iter()).fold(
                    C64::new(0.0, 0.0),
                    |acc, (p, s)| acc + p.conj() * s,
                );
                if (fidelity.re - 1.0).abs() > 1e-9 {
                    return Err(Error::EnsembleMismatch {
                        reason: format!("steered state fidelity {} below 1", fidelity.re),
                    });
                }
            }
        }
        Ok(())
    }
}

/// The exact success-rate pair the cloner produces under Alice's two
/// choices, plus the trace distance between Bob's unconditional states
/// (which must vanish: steering alone cannot signal).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalingGap {
    pub p0: f64,
    pub p1: f64,
    pub unconditional_trace_distance: f64,
}

/// Evaluates P_b = Σ_k w_k^{(b)} p(state_k^{(b)}) exactly from the oracle's
/// policy and verifies Bob's unconditional state is measurement independent.
pub fn signaling_gap(scenario: &SteeringScenario, oracle: &CloneOracle) -> Result<SignalingGap> {
    let mut rates = [0.0f64; 2];
    for (bit, rate) in rates.iter_mut().enumerate() {
        let ensemble = scenario.ensemble(bit);
        *rate = ensemble
            .weights()
            .iter()
            .zip(ensemble.states())
            .map(|(w, s)| w * oracle.success_probability(s))
            .sum();
    }
    // Unconditional Bob state under either measurement: Σ_k weight_k·state_k.
    let dim = scenario.rho_b().dim();
    let mut unconditional = [
        DMatrix::from_element(dim, dim, C64::new(0.0, 0.0)),
        DMatrix::from_element(dim, dim, C64::new(0.0, 0.0)),
    ];
    for (bit, total) in unconditional.iter_mut().enumerate() {
        let steered = scenario.purification().steered_ensemble(scenario.alice_povm(bit))?;
        for (weight, state) in steered {
            *total += state.matrix() * C64::new(weight, 0.0);
        }
    }
    let distance = linalg::trace_distance(&unconditional[0], &unconditional[1]);
    Ok(SignalingGap { p0: rates[0], p1: rates[1], unconditional_trace_distance: distance })
}

/// Result of the repetition-amplified decoding simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeReport {
    pub repetitions: usize,
    pub trials: usize,
    pub empirical_error: f64,
    /// exp(−R·(P0−P1)²/2), the Chernoff-style reference bound.
    pub chernoff_bound: f64,
}

/// Simulates Alice encoding a uniformly random bit in her measurement
/// choice and Bob thresholding his clone-success count at R·(P0+P1)/2 over
/// R rounds; reports the empirical error rate over the given trials.
pub fn decode_bit(
    scenario: &SteeringScenario,
    oracle: &CloneOracle,
    repetitions: usize,
    trials: usize,
    seed: u64,
) -> Result<DecodeReport> {
    let gap = signaling_gap(scenario, oracle)?;
    if (gap.p0 - gap.p1).abs() < 1e-15 {
        return Err(Error::InvalidParameter {
            name: "oracle",
            reason: "zero success gap: nothing to decode".into(),
        });
    }
    let threshold = repetitions as f64 * (gap.p0 + gap.p1) / 2.0;
    let high_bit = if gap.p0 > gap.p1 { 0 } else { 1 };
    let mut rng = Prng::new(seed);
    let mut errors = 0usize;
    for _ in 0..trials {
        let bit = usize::from(rng.bernoulli(0.5));
        let ensemble = scenario.ensemble(bit);
        let mut successes = 0usize;
        for _ in 0..repetitions {
            let state = &ensemble.states()[ensemble.sample_index(&mut rng)];
            if rng.bernoulli(oracle.success_probability(state)) {
                successes += 1;
            }
        }
        let guess = if successes as f64 >= threshold { high_bit } else { 1 - high_bit };
        if guess != bit {
            errors += 1;
        }
    }
    let empirical_error = errors as f64 / trials as f64;
    let chernoff_bound =
        (-(repetitions as f64) * (gap.p0 - gap.p1).powi(2) / 2.0).exp();
    Ok(DecodeReport { repetitions, trials, empirical_error, chernoff_bound })
}

/// Maximum total-variation distance between Bob's outcome statistics under
/// Alice's two measurements when the oracle is replaced by an honest CPTNI
/// channel followed by a POVM — the no-signaling restoration check.
pub fn restored_statistics_gap(
    scenario: &SteeringScenario,
    channel: &KrausChannel,
    bob_povm: &[DMatrix<C64>],
) -> Result<f64> {
    let mut distributions = [Vec::new(), Vec::new()];
    for (bit, dist) in distributions.iter_mut().enumerate() {
        let ensemble = scenario.ensemble(bit);
        let mut probs = vec![0.0f64; bob_povm.len()];
        for (w, s) in ensemble.weights().iter().zip(ensemble.states()) {
            let rho = DensityOperator::from_ray(&ray_from_vector(s)?);
            let evolved = channel.apply_matrix(rho.matrix())?;
            for (m, element) in bob_povm.iter().enumerate() {
                probs[m] += w * (element * &evolved).trace().re;
            }
        }
        *dist = probs;
    }
    let tv = distributions[0]
        .iter()
        .zip(&distributions[1])
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        / 2.0;
    Ok(tv)
}

/// A random POVM on `dim` with `elements` outcomes: Gaussian squares
/// normalized by the inverse square root of their sum.
pub fn random_povm(dim: usize, elements: usize, rng: &mut Prng) -> Vec<DMatrix<C64>> {
    assert!(elements >= 1);
    let raw: Vec<DMatrix<C64>> = (0..elements)
        .map(|_| {
            let g = DMatrix::from_fn(dim, dim, |_, _| rng.complex_normal());
            &g * g.adjoint()
        })
        .collect();
    let mut sum = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    for a in &raw {
        sum += a;
    }
    let inv_sqrt = linalg::hermitian_map(&sum, |x| if x > 1e-14 { 1.0 / x.sqrt() } else { 0.0 });
    raw.into_iter().map(|a| &inv_sqrt * a * &inv_sqrt).collect()
}

/// The canonical qubit scenario: ρ_B = I/2 decomposed as {½|0⟩, ½|1⟩}
/// versus {½|+⟩, ½|−⟩}, with the cloner declared on {|0⟩, |1⟩, |+⟩} at
/// uniform success probability `p`.
pub fn canonical_scenario(p: f64) -> Result<(SteeringScenario, CloneOracle)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVector::from_pairs(&[[h, 0.0], [h, 0.0]]);
    let minus = StateVector::from_pairs(&[[h, 0.0], [-h, 0.0]]);
    let ensemble0 = Ensemble::new(
        vec![0.5, 0.5],
        vec![StateVector::basis(2, 0), StateVector::basis(2, 1)],
    )?;
    let ensemble1 = Ensemble::new(vec![0.5, 0.5], vec![plus.clone(), minus])?;
    let scenario = SteeringScenario::build(ensemble0, ensemble1)?;
    let oracle = CloneOracle::new(
        vec![StateVector::basis(2, 0), StateVector::basis(2, 1), plus],
        vec![p, p, p],
        OffSetPolicy::Zero,
    )?;
    Ok((scenario, oracle))
}
