//! Experiment configuration: a strict JSON schema with per-experiment
//! parameter blocks. Unknown keys are rejected at both levels, and the
//! master seed is mandatory for every stochastic experiment.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The six experiments the runner dispatches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Superpose,
    Ldli,
    Ud,
    Signal,
    Grover,
    Circle,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Superpose => "superpose",
            Self::Ldli => "ldli",
            Self::Ud => "ud",
            Self::Signal => "signal",
            Self::Grover => "grover",
            Self::Circle => "circle",
        }
    }

    /// Stochastic experiments must be seeded; the rest are pure functions
    /// of their parameters.
    pub fn is_stochastic(&self) -> bool {
        !matches!(self, Self::Grover)
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "superpose" => Ok(Self::Superpose),
            "ldli" => Ok(Self::Ldli),
            "ud" => Ok(Self::Ud),
            "signal" => Ok(Self::Signal),
            "grover" => Ok(Self::Grover),
            "circle" => Ok(Self::Circle),
            other => Err(Error::Config(format!("unknown experiment '{other}'"))),
        }
    }
}

/// Top-level configuration document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Master seed; per-scenario streams derive from it by a fixed counter
    /// scheme, so results are independent of evaluation order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Overrides the default assertion tolerance where a check permits it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub params: serde_json::Value,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        Self { experiment, seed: None, tolerance: None, params: serde_json::Value::Null }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.experiment.is_stochastic() && self.seed.is_none() {
            return Err(Error::Config(format!(
                "experiment '{}' is stochastic: a master seed is required",
                self.experiment.name()
            )));
        }
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(Error::Config(format!("tolerance {tol} outside (0, 1)")));
            }
        }
        Ok(())
    }

    /// Requires the seed (already guaranteed for stochastic experiments).
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// Deserializes the per-experiment parameter block, rejecting unknown
    /// keys; a null block yields the defaults.
    pub fn typed_params<P: for<'de> Deserialize<'de> + Default>(&self) -> Result<P> {
        if self.params.is_null() {
            return Ok(P::default());
        }
        serde_json::from_value(self.params.clone())
            .map_err(|e| Error::Config(format!("invalid params: {e}")))
    }
}

fn default_trials() -> usize {
    1000
}

fn default_dims() -> Vec<usize> {
    vec![2, 3, 4, 5, 6]
}

/// Gauge-invariance / formula-equivalence / protocol-law sweeps.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperposeParams {
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    /// Independent rephasings applied per gauge-invariance trial.
    #[serde(default = "default_gauge_draws")]
    pub gauge_draws: usize,
}

fn default_gauge_draws() -> usize {
    3
}

impl Default for SuperposeParams {
    fn default() -> Self {
        Self { trials: default_trials(), dims: default_dims(), gauge_draws: default_gauge_draws() }
    }
}

fn default_scenarios() -> usize {
    10_000
}

/// One explicit scenario row for a batch sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdliScenarioSpec {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub thetas: [f64; 3],
}

/// Dependence→independence sweep with phase-condition statistics.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdliParams {
    #[serde(default = "default_scenarios")]
    pub scenarios: usize,
    /// Fraction of the sweep drawn exactly on the phase condition.
    #[serde(default = "default_on_condition_fraction")]
    pub on_condition_fraction: f64,
    /// Gauge draws per on-condition scenario for the fragility statistic.
    #[serde(default = "default_gauge_draws_ldli")]
    pub gauge_draws: usize,
    /// Optional explicit scenario batch evaluated before the random sweep.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub batch: Vec<LdliScenarioSpec>,
}

fn default_on_condition_fraction() -> f64 {
    0.5
}

fn default_gauge_draws_ldli() -> usize {
    1
}

impl Default for LdliParams {
    fn default() -> Self {
        Self {
            scenarios: default_scenarios(),
            on_condition_fraction: default_on_condition_fraction(),
            gauge_draws: default_gauge_draws_ldli(),
            batch: Vec::new(),
        }
    }
}

fn default_families() -> usize {
    500
}

fn default_max_dim() -> usize {
    6
}

/// Unambiguous-discrimination construction/feasibility sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UdParams {
    /// Independent families tested (an equal number of dependent ones too).
    #[serde(default = "default_families")]
    pub families: usize,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
}

impl Default for UdParams {
    fn default() -> Self {
        Self { families: default_families(), max_dim: default_max_dim() }
    }
}

fn default_oracle_p() -> f64 {
    0.5
}

fn default_repetitions() -> Vec<usize> {
    vec![1, 10, 25, 50, 100]
}

fn default_decode_trials() -> usize {
    2000
}

fn default_bob_povms() -> usize {
    1000
}

/// One ensemble decomposition: weights and states as `[re, im]` pair rows.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub weights: Vec<f64>,
    pub states: Vec<Vec<[f64; 2]>>,
}

/// The counterfactual cloner: its success set, per-state probabilities,
/// and off-set policy ("zero" or "overlap_weighted").
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    pub states: Vec<Vec<[f64; 2]>>,
    pub probs: Vec<f64>,
    #[serde(default = "default_policy")]
    pub policy: String,
}

fn default_policy() -> String {
    "zero".to_string()
}

/// A full steering scenario: two decompositions of the same state (ρ_B is
/// their common average) plus the clone oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub ensemble0: EnsembleSpec,
    pub ensemble1: EnsembleSpec,
    pub oracle: OracleSpec,
}

/// Steering gap and repetition-amplified decoding.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalParams {
    #[serde(default = "default_oracle_p")]
    pub oracle_p: f64,
    #[serde(default = "default_repetitions")]
    pub repetitions: Vec<usize>,
    #[serde(default = "default_decode_trials")]
    pub decode_trials: usize,
    /// Random Bob POVMs for the no-signaling restoration check.
    #[serde(default = "default_bob_povms")]
    pub bob_povms: usize,
    /// Explicit scenario description; the canonical qubit scenario when
    /// omitted. Exact-value checks only apply to the canonical one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioSpec>,
}

impl Default for SignalParams {
    fn default() -> Self {
        Self {
            oracle_p: default_oracle_p(),
            repetitions: default_repetitions(),
            decode_trials: default_decode_trials(),
            bob_povms: default_bob_povms(),
            scenario: None,
        }
    }
}

fn default_qubits() -> u32 {
    10
}

fn default_crosscheck_qubits() -> u32 {
    14
}

/// Standard-vs-super trace comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroverParams {
    #[serde(default = "default_qubits")]
    pub qubits: u32,
    #[serde(default)]
    pub marked: usize,
    /// Largest instance for the statevector/subspace cross-check.
    #[serde(default = "default_crosscheck_qubits")]
    pub crosscheck_qubits: u32,
}

impl Default for GroverParams {
    fn default() -> Self {
        Self {
            qubits: default_qubits(),
            marked: 0,
            crosscheck_qubits: default_crosscheck_qubits(),
        }
    }
}

fn default_polar_steps() -> usize {
    400
}

fn default_azimuth_steps() -> usize {
    800
}

fn default_overlap_c() -> f64 {
    0.5
}

fn default_haar_points() -> usize {
    200
}

/// Success-set scan and circle fitting.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleParams {
    #[serde(default = "default_polar_steps")]
    pub polar_steps: usize,
    #[serde(default = "default_azimuth_steps")]
    pub azimuth_steps: usize,
    /// The promised overlap of the unknown input with the anchor.
    #[serde(default = "default_overlap_c")]
    pub c: f64,
    /// Haar points for the negative (no plane fits the sphere) control.
    #[serde(default = "default_haar_points")]
    pub haar_points: usize,
    /// Explicit channel to scan, as a list of dim-2×4 Kraus matrices with
    /// `[re, im]` entries in row-major order; the compiled reference
    /// protocol when omitted. The circle-coefficient check only applies to
    /// the compiled protocol.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<Vec<Vec<[f64; 2]>>>>,
}

impl Default for CircleParams {
    fn default() -> Self {
        Self {
            polar_steps: default_polar_steps(),
            azimuth_steps: default_azimuth_steps(),
            c: default_overlap_c(),
            haar_points: default_haar_points(),
            kraus: None,
        }
    }
}
