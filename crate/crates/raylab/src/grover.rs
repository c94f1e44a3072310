//! Unstructured search with an instrumented phase oracle, and the
//! overlap-amplification recursion that collapses its query scaling.
//!
//! The standard iterate reflects about the fixed uniform state and rotates
//! by an angle set by the 1/√N marked-state overlap, hence Θ(√N) queries.
//! Replacing the fixed reflection by a reflection about the *current*
//! (oracle-dependent, hence unknown) state makes the marked-state overlap
//! obey a_{r+1} = (3 − 4|a_r|²)·a_r — probability at least quadruples per
//! round while p ≤ 1/4, so a constant bias arrives after ⌈log₄(N/4)⌉
//! rounds. Reflections about unknown states are exactly the primitive the
//! overlap no-go forbids; they are counted as free here, only oracle calls
//! are metered.
//!
//! Both a full statevector mode and an exact two-dimensional subspace mode
//! are provided; the iterates provably stay in span{|w⟩, uniform-unmarked},
//! and the two modes cross-validate each other round by round.

use nalgebra::DVector;

use crate::{C64, Error, Result};

/// A search instance: N = 2^n basis states with a unique marked index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroverInstance {
    qubits: u32,
    size: usize,
    marked: usize,
}

impl GroverInstance {
    pub fn new(qubits: u32, marked: usize) -> Result<Self> {
        if qubits == 0 || qubits > 40 {
            return Err(Error::InvalidParameter {
                name: "qubits",
                reason: "qubit count must lie in 1..=40".into(),
            });
        }
        let size = 1usize << qubits;
        if marked >= size {
            return Err(Error::InvalidParameter {
                name: "marked",
                reason: format!("marked index {marked} outside [0, {size})"),
            });
        }
        Ok(Self { qubits, size, marked })
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn marked(&self) -> usize {
        self.marked
    }
}

/// The phase oracle O|x⟩ = (−1)^{f(x)}|x⟩ with a query counter.
///
/// Every oracle application goes through this struct and increments the
/// counter exactly once; nothing else in the module touches the marked
/// index directly.
#[derive(Debug, Clone)]
pub struct PhaseOracle {
    instance: GroverInstance,
    queries: u64,
}

impl PhaseOracle {
    pub fn new(instance: GroverInstance) -> Self {
        Self { instance, queries: 0 }
    }

    pub fn instance(&self) -> &GroverInstance {
        &self.instance
    }

    pub fn queries(&self) -> u64 {
        self.queries
    }

    pub fn reset_counter(&mut self) {
        self.queries = 0;
    }

    /// Full statevector application: negates the marked amplitude.
    pub fn apply(&mut self, state: &mut DVector<C64>) -> Result<()> {
        if state.len() != self.instance.size {
            return Err(Error::DimensionMismatch {
                expected: self.instance.size,
                got: state.len(),
            });
        }
        state[self.instance.marked] = -state[self.instance.marked];
        self.queries += 1;
        Ok(())
    }

    /// Subspace application: a ↦ −a on the marked component.
    pub fn apply_subspace(&mut self, state: &mut TwoDimState) {
        state.marked = -state.marked;
        self.queries += 1;
    }
}

/// The iterated state written in the invariant plane
/// span{|w⟩, |u⟩}, where |u⟩ is the normalized uniform superposition over
/// unmarked indices: exact at any N for O(1) per round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDimState {
    /// Amplitude on |w⟩.
    pub marked: C64,
    /// Amplitude on |u⟩.
    pub unmarked: C64,
}

impl TwoDimState {
    pub fn new(marked: C64, unmarked: C64) -> Result<Self> {
        let deviation = (marked.norm_sqr() + unmarked.norm_sqr() - 1.0).abs();
        if deviation > 1e-12 {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self { marked, unmarked })
    }

    /// The uniform state: marked amplitude 1/√N.
    pub fn uniform(instance: &GroverInstance) -> Self {
        let n = instance.size as f64;
        Self {
            marked: C64::new(1.0 / n.sqrt(), 0.0),
            unmarked: C64::new(((n - 1.0) / n).sqrt(), 0.0),
        }
    }

    pub fn success_probability(&self) -> f64 {
        self.marked.norm_sqr()
    }

    /// Expands into the full statevector.
    pub fn to_statevector(&self, instance: &GroverInstance) -> DVector<C64> {
        let n = instance.size;
        let spread = self.unmarked / C64::new(((n - 1) as f64).sqrt(), 0.0);
        let mut amps = DVector::from_element(n, spread);
        amps[instance.marked] = self.marked;
        amps
    }
}

/// The uniform statevector over all N indices.
pub fn uniform_state(instance: &GroverInstance) -> DVector<C64> {
    let n = instance.size;
    DVector::from_element(n, C64::new(1.0 / (n as f64).sqrt(), 0.0))
}

/// Reflects `state` about `axis`: v ↦ 2⟨axis|v⟩·axis − v.
///
/// Involutory, and on a known test vector it produces the phase-sensitive
/// overlap term 2⟨axis|v⟩|axis⟩ − |v⟩ explicitly.
pub fn reflect_about(axis: &DVector<C64>, state: &DVector<C64>) -> Result<DVector<C64>> {
    if axis.len() != state.len() {
        return Err(Error::DimensionMismatch { expected: axis.len(), got: state.len() });
    }
    let norm_dev = (axis.norm() - 1.0).abs();
    if norm_dev > 1e-10 {
        return Err(Error::NotNormalized { deviation: norm_dev });
    }
    let overlap = axis.dotc(state);
    Ok(axis * (overlap * C64::new(2.0, 0.0)) - state)
}

/// One standard Grover iterate: the diffusion (reflection about the fixed
/// uniform state) after one oracle query.
pub fn grover_iterate(oracle: &mut PhaseOracle, state: &mut DVector<C64>) -> Result<()> {
    oracle.apply(state)?;
    let axis = uniform_state(oracle.instance());
    *state = reflect_about(&axis, state)?;
    Ok(())
}

/// One standard iterate in the invariant plane.
pub fn grover_iterate_subspace(oracle: &mut PhaseOracle, state: &mut TwoDimState) {
    oracle.apply_subspace(state);
    let uniform = TwoDimState::uniform(oracle.instance());
    // Reflection about the uniform axis within the plane.
    let overlap =
        uniform.marked.conj() * state.marked + uniform.unmarked.conj() * state.unmarked;
    let two = C64::new(2.0, 0.0);
    state.marked = uniform.marked * overlap * two - state.marked;
    state.unmarked = uniform.unmarked * overlap * two - state.unmarked;
}

/// One round of the nonlinear recursion a ↦ (3 − 4|a|²)·a; the induced
/// probability map is p ↦ p(3 − 4p)².
pub fn overlap_recursion_step(a: C64) -> C64 {
    a * C64::new(3.0 - 4.0 * a.norm_sqr(), 0.0)
}

/// ⌈log₄(N/4)⌉: rounds after which the recursion started at p₀ = 1/N has
/// first reached a success probability of at least 1/4 (the probability at
/// least quadruples each round while p ≤ 1/4).
pub fn round_bound(size: usize) -> Result<usize> {
    if size < 4 {
        return Err(Error::InvalidParameter {
            name: "size",
            reason: format!("round bound needs N ≥ 4, got {size}"),
        });
    }
    let rounds = ((size as f64) / 4.0).log(4.0).ceil();
    Ok(rounds.max(0.0) as usize)
}

/// Which simulation backend a super-Grover run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    /// Full N-dimensional statevector.
    Statevector,
    /// Exact two-dimensional invariant-plane representation.
    Subspace,
}

/// One row of a super-Grover trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub round: usize,
    pub marked_amplitude: C64,
    pub success_probability: f64,
}

/// A completed super-Grover run.
#[derive(Debug, Clone)]
pub struct SuperGroverRun {
    pub trace: Vec<TraceRow>,
    pub queries: u64,
    pub mode: RunMode,
}

/// Iterates |ψ_{r+1}⟩ = R_{ψ_r}·O|ψ_r⟩ from the uniform state until the
/// marked-state probability reaches `target_p`, one oracle query per round.
///
/// The reflection about the current (unknown) state is the counterfactual
/// primitive; it costs nothing in the query metric. Rounds are capped at
/// 10·log₄N because the recursion is not monotone above p = 1/4 and an
/// unreachable target would otherwise cycle forever.
pub fn super_grover_run(
    instance: &GroverInstance,
    target_p: f64,
    mode: RunMode,
) -> Result<SuperGroverRun> {
    let n = instance.size as f64;
    if !(target_p > 1.0 / n && target_p <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "target_p",
            reason: format!("target probability must lie in (1/N, 1], got {target_p}"),
        });
    }
    let cap = (10.0 * n.log(4.0)).ceil().max(1.0) as usize;
    // Rounding headroom so a target of exactly 1 is reachable.
    let reached = |p: f64| p >= target_p - 1e-12;
    let mut oracle = PhaseOracle::new(*instance);
    let mut trace = Vec::new();

    match mode {
        RunMode::Subspace => {
            let mut state = TwoDimState::uniform(instance);
            trace.push(TraceRow {
                round: 0,
                marked_amplitude: state.marked,
                success_probability: state.success_probability(),
            });
            if reached(state.success_probability()) {
                return Ok(SuperGroverRun { trace, queries: 0, mode });
            }
            for round in 1..=cap {
                let current = state;
                oracle.apply_subspace(&mut state);
                // Reflection about the pre-oracle state, within the plane.
                let overlap = current.marked.conj() * state.marked
                    + current.unmarked.conj() * state.unmarked;
                let two = C64::new(2.0, 0.0);
                state.marked = current.marked * overlap * two - state.marked;
                state.unmarked = current.unmarked * overlap * two - state.unmarked;
                trace.push(TraceRow {
                    round,
                    marked_amplitude: state.marked,
                    success_probability: state.success_probability(),
                });
                if reached(state.success_probability()) {
                    return Ok(SuperGroverRun { trace, queries: oracle.queries(), mode });
                }
            }
        }
        RunMode::Statevector => {
            let mut state = uniform_state(instance);
            trace.push(TraceRow {
                round: 0,
                marked_amplitude: state[instance.marked],
                success_probability: state[instance.marked].norm_sqr(),
            });
            if reached(state[instance.marked].norm_sqr()) {
                return Ok(SuperGroverRun { trace, queries: 0, mode });
            }
            for round in 1..=cap {
                let axis = state.clone();
                oracle.apply(&mut state)?;
                state = reflect_about(&axis, &state)?;
                trace.push(TraceRow {
                    round,
                    marked_amplitude: state[instance.marked],
                    success_probability: state[instance.marked].norm_sqr(),
                });
                if reached(state[instance.marked].norm_sqr()) {
                    return Ok(SuperGroverRun { trace, queries: oracle.queries(), mode });
                }
            }
        }
    }
    Err(Error::TargetUnreachable { target: target_p, cap })
}

/// A standard Grover trace: success probability after each iterate.
#[derive(Debug, Clone)]
pub struct StandardGroverRun {
    pub probabilities: Vec<f64>,
    pub queries: u64,
}

/// Runs `rounds` standard iterations on the full statevector, recording the
/// success probability after each (index 0 = before any query).
pub fn standard_grover_run(instance: &GroverInstance, rounds: usize) -> Result<StandardGroverRun> {
    let mut oracle = PhaseOracle::new(*instance);
    let mut state = uniform_state(instance);
    let mut probabilities = vec![state[instance.marked].norm_sqr()];
    for _ in 0..rounds {
        grover_iterate(&mut oracle, &mut state)?;
        probabilities.push(state[instance.marked].norm_sqr());
    }
    Ok(StandardGroverRun { probabilities, queries: oracle.queries() })
}

/// Closed-form standard-Grover success probability after r iterations:
/// sin²((2r+1)·arcsin(1/√N)).
pub fn standard_success_probability(size: usize, rounds: usize) -> f64 {
    let theta = (1.0 / (size as f64).sqrt()).asin();
    ((2 * rounds + 1) as f64 * theta).sin().powi(2)
}

/// The query-count contrast between the two algorithms on one instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryComparison {
    /// Queries until the standard iterate first exceeds p > 1/2
    /// (instrumented run, cross-checked against the closed form).
    pub standard_queries: u64,
    /// Success probability at that point.
    pub standard_probability: f64,
    /// Rounds until the recursion first exceeds p > 1/4 (strictly; at N = 4
    /// the uniform state already sits exactly at 1/4 and one round lifts it
    /// to certainty).
    pub super_queries: u64,
    /// Success probability at that point.
    pub super_probability: f64,
}

/// Runs both algorithms with instrumented oracles and reports the counts.
/// The super count never exceeds [`round_bound`] + 1.
pub fn query_comparison(instance: &GroverInstance) -> Result<QueryComparison> {
    // Standard: iterate until the probability first exceeds 1/2.
    let mut oracle = PhaseOracle::new(*instance);
    let mut state = TwoDimState::uniform(instance);
    let mut standard_probability = state.success_probability();
    while standard_probability <= 0.5 {
        grover_iterate_subspace(&mut oracle, &mut state);
        standard_probability = state.success_probability();
    }
    let standard_queries = oracle.queries();

    // Super: recursion until strictly above 1/4.
    let mut super_oracle = PhaseOracle::new(*instance);
    let mut current = TwoDimState::uniform(instance);
    while current.success_probability() <= 0.25 {
        let before = current;
        super_oracle.apply_subspace(&mut current);
        let overlap = before.marked.conj() * current.marked
            + before.unmarked.conj() * current.unmarked;
        let two = C64::new(2.0, 0.0);
        current.marked = before.marked * overlap * two - current.marked;
        current.unmarked = before.unmarked * overlap * two - current.unmarked;
    }
    Ok(QueryComparison {
        standard_queries,
        standard_probability,
        super_queries: super_oracle.queries(),
        super_probability: current.success_probability(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Prng;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn oracle_negates_only_the_marked_amplitude() {
        let instance = GroverInstance::new(2, 1).unwrap();
        let mut oracle = PhaseOracle::new(instance);
        let mut state = uniform_state(&instance);
        oracle.apply(&mut state).unwrap();
        assert_eq!(oracle.queries(), 1);
        for (i, amp) in state.iter().enumerate() {
            let want = if i == 1 { -0.5 } else { 0.5 };
            assert!((amp - c(want, 0.0)).norm() < 1e-15);
        }

        // Marked basis state flips sign; orthogonal states are untouched.
        let mut marked = DVector::from_element(4, c(0.0, 0.0));
        marked[1] = c(1.0, 0.0);
        oracle.apply(&mut marked).unwrap();
        assert!((marked[1] - c(-1.0, 0.0)).norm() < 1e-15);
        let mut orthogonal = DVector::from_element(4, c(0.0, 0.0));
        orthogonal[3] = c(1.0, 0.0);
        oracle.apply(&mut orthogonal).unwrap();
        assert!((orthogonal[3] - c(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(oracle.queries(), 3);
    }

    #[test]
    fn oracle_subspace_flips_marked_sign() {
        let instance = GroverInstance::new(5, 7).unwrap();
        let mut oracle = PhaseOracle::new(instance);
        let mut state = TwoDimState::uniform(&instance);
        let before = state.marked;
        oracle.apply_subspace(&mut state);
        assert!((state.marked + before).norm() < 1e-15);
        assert_eq!(oracle.queries(), 1);
    }

    #[test]
    fn n4_single_iteration_is_certain() {
        let instance = GroverInstance::new(2, 3).unwrap();
        let run = standard_grover_run(&instance, 1).unwrap();
        assert_eq!(run.queries, 1);
        assert!((run.probabilities[1] - 1.0).abs() < 1e-12);
        assert!((run.probabilities[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn n1024_quarter_pi_roots_reach_high_probability() {
        let instance = GroverInstance::new(10, 77).unwrap();
        let optimal = (std::f64::consts::FRAC_PI_4 * 32.0).floor() as usize;
        assert_eq!(optimal, 25);
        let run = standard_grover_run(&instance, optimal).unwrap();
        assert!(run.probabilities[optimal] > 0.99);
        assert_eq!(run.queries, optimal as u64);
        // Statevector agrees with the closed form along the way.
        for (r, p) in run.probabilities.iter().enumerate() {
            let formula = standard_success_probability(1024, r);
            assert!((p - formula).abs() < 1e-10, "round {r}: {p} vs {formula}");
        }
    }

    #[test]
    fn zero_iterations_probability_is_one_over_n() {
        let instance = GroverInstance::new(6, 11).unwrap();
        let run = standard_grover_run(&instance, 0).unwrap();
        assert_eq!(run.queries, 0);
        assert!((run.probabilities[0] - 1.0 / 64.0).abs() < 1e-15);
    }

    #[test]
    fn reflection_fixes_axis_negates_orthogonal_and_squares_to_identity() {
        let mut rng = Prng::new(21);
        let axis = crate::hilbert::random_state_with(8, &mut rng).unwrap();
        let axis = axis.amplitudes().clone_owned();
        let fixed = reflect_about(&axis, &axis).unwrap();
        assert!((&fixed - &axis).norm() < 1e-12);

        // Orthogonal vector: negated.
        let raw = crate::hilbert::random_state_with(8, &mut rng).unwrap();
        let overlap = axis.dotc(raw.amplitudes());
        let ortho = raw.amplitudes() - &axis * overlap;
        let ortho = &ortho / C64::new(ortho.norm(), 0.0);
        let reflected = reflect_about(&axis, &ortho).unwrap();
        assert!((&reflected + &ortho).norm() < 1e-12);

        // Involution on a random vector.
        let v = crate::hilbert::random_state_with(8, &mut rng).unwrap();
        let twice =
            reflect_about(&axis, &reflect_about(&axis, v.amplitudes()).unwrap()).unwrap();
        assert!((&twice - v.amplitudes()).norm() < 1e-12);

        // Explicit overlap form on a known test vector.
        let t = crate::hilbert::random_state_with(8, &mut rng).unwrap();
        let reflected = reflect_about(&axis, t.amplitudes()).unwrap();
        let expected = &axis * (axis.dotc(t.amplitudes()) * c(2.0, 0.0)) - t.amplitudes();
        assert!((&reflected - &expected).norm() < 1e-13);

        // Unnormalized axis is rejected.
        let long = &axis * c(1.5, 0.0);
        assert!(reflect_about(&long, v.amplitudes()).is_err());
    }

    #[test]
    fn recursion_step_examples() {
        assert!((overlap_recursion_step(c(0.5, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(overlap_recursion_step(c(0.0, 0.0)).norm() < 1e-15);
        assert!((overlap_recursion_step(c(1.0, 0.0)) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn super_run_n4_reaches_certainty_in_one_round() {
        let instance = GroverInstance::new(2, 0).unwrap();
        let run = super_grover_run(&instance, 1.0, RunMode::Subspace).unwrap();
        assert_eq!(run.queries, 1);
        assert!((run.trace[0].success_probability - 0.25).abs() < 1e-15);
        assert!((run.trace[1].success_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn super_run_n1024_three_rounds_to_quarter() {
        let instance = GroverInstance::new(10, 512).unwrap();
        let run = super_grover_run(&instance, 0.25, RunMode::Subspace).unwrap();
        assert_eq!(run.queries, 3);
        // Frozen from the recursion p ↦ p(3−4p)² starting at 1/1024.
        let p3 = run.trace[3].success_probability;
        assert!((p3 - 0.558_355_923_305_556_2).abs() < 1e-12, "p3 = {p3}");
        assert!(run.queries <= round_bound(1024).unwrap() as u64);
    }

    #[test]
    fn super_run_statevector_matches_subspace() {
        let instance = GroverInstance::new(8, 100).unwrap();
        let sub = super_grover_run(&instance, 0.9, RunMode::Subspace).unwrap();
        let full = super_grover_run(&instance, 0.9, RunMode::Statevector).unwrap();
        assert_eq!(sub.trace.len(), full.trace.len());
        for (a, b) in sub.trace.iter().zip(full.trace.iter()) {
            assert!(
                (a.marked_amplitude - b.marked_amplitude).norm() < 1e-9,
                "round {}: {} vs {}",
                a.round,
                a.marked_amplitude,
                b.marked_amplitude
            );
        }
    }

    #[test]
    fn super_run_statevector_follows_recursion_and_stays_normalized() {
        let instance = GroverInstance::new(9, 17).unwrap();
        let run = super_grover_run(&instance, 0.9, RunMode::Statevector).unwrap();
        for pair in run.trace.windows(2) {
            let predicted = overlap_recursion_step(pair[0].marked_amplitude);
            assert!((predicted - pair[1].marked_amplitude).norm() < 1e-9);
        }
        // Unitarity: re-run and check the final statevector norm directly.
        let mut oracle = PhaseOracle::new(instance);
        let mut state = uniform_state(&instance);
        for _ in 0..run.queries {
            let axis = state.clone();
            oracle.apply(&mut state).unwrap();
            state = reflect_about(&axis, &state).unwrap();
            assert!((state.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn super_run_unreachable_target_errors() {
        let instance = GroverInstance::new(2, 0).unwrap();
        // p cycles through 1/4 → 1 → 1 …; 0.9999 is reached at p = 1,
        // so ask for an impossible window instead: p ∈ (1/N, 1] always
        // reachable at N = 4 — use N = 8 where the recursion overshoots
        // 0.999 without ever landing in [0.999, 1].
        let instance8 = GroverInstance::new(3, 0).unwrap();
        let result = super_grover_run(&instance8, 0.9999, RunMode::Subspace);
        assert!(matches!(result, Err(Error::TargetUnreachable { .. })));
        // Sanity: moderate targets succeed.
        assert!(super_grover_run(&instance, 0.5, RunMode::Subspace).is_ok());
    }

    #[test]
    fn round_bound_examples() {
        assert_eq!(round_bound(1024).unwrap(), 4);
        assert_eq!(round_bound(4).unwrap(), 0);
        assert_eq!(round_bound(1 << 20).unwrap(), 9);
        assert!(round_bound(2).is_err());
    }

    #[test]
    fn round_bound_dominates_first_crossing() {
        // N = 4 is the boundary: the bound is 0 and the uniform state
        // already sits at p = 1/4, so there is nothing to run.
        assert_eq!(round_bound(4).unwrap(), 0);
        assert!(
            (TwoDimState::uniform(&GroverInstance::new(2, 1).unwrap()).success_probability()
                - 0.25)
                .abs()
                < 1e-15
        );
        for n in [5u32, 10, 14, 20] {
            let instance = GroverInstance::new(n, 1).unwrap();
            let bound = round_bound(instance.size()).unwrap();
            let run = super_grover_run(&instance, 0.25, RunMode::Subspace).unwrap();
            assert!(
                run.queries as usize <= bound,
                "N = 2^{n}: {} rounds exceeded bound {bound}",
                run.queries
            );
        }
    }

    #[test]
    fn query_comparison_examples() {
        // N = 4: both algorithms need exactly one query.
        let n4 = query_comparison(&GroverInstance::new(2, 2).unwrap()).unwrap();
        assert_eq!(n4.standard_queries, 1);
        assert_eq!(n4.super_queries, 1);
        assert!((n4.standard_probability - 1.0).abs() < 1e-12);
        assert!((n4.super_probability - 1.0).abs() < 1e-12);

        // N = 1024: 13 standard queries to cross 1/2 (closed form) vs 3.
        let n1024 = query_comparison(&GroverInstance::new(10, 5).unwrap()).unwrap();
        assert_eq!(n1024.standard_queries, 13);
        assert_eq!(n1024.super_queries, 3);
        // Within the ±2 window of round((π/4)√N) scaled to the 1/2 crossing.
        let full_rotation = (std::f64::consts::FRAC_PI_4 * 32.0).round();
        let expected_half = (full_rotation * 0.5).round() as i64;
        assert!((n1024.standard_queries as i64 - expected_half).abs() <= 2);

        // N = 2^20: ~402 standard queries vs at most the round bound.
        let big = query_comparison(&GroverInstance::new(20, 123).unwrap()).unwrap();
        assert_eq!(big.standard_queries, 402);
        assert!(big.super_queries as usize <= round_bound(1 << 20).unwrap());
    }

    #[test]
    fn growth_bound_is_exact_below_one_quarter() {
        // p' − 4p = p(3−4p)² − 4p = p(4p−1)(4p−5) ≥ 0 for p ≤ 1/4.
        let mut p = 1.0 / (1u64 << 30) as f64;
        while p <= 0.25 {
            let next = p * (3.0 - 4.0 * p).powi(2);
            assert!(next + 1e-12 >= 4.0 * p, "growth failed at p = {p}");
            p = if next > p { next } else { p * 1.7 };
        }
    }

    proptest! {
        #[test]
        fn recursion_matches_statevector_on_complex_amplitudes(re in -0.7f64..0.7, im in -0.7f64..0.7) {
            // The recursion is stated for complex a; embed a two-dim state
            // with that marked amplitude and compare one full round.
            let a = c(re, im);
            prop_assume!(a.norm_sqr() < 0.99);
            let b = c((1.0 - a.norm_sqr()).sqrt(), 0.0);
            let instance = GroverInstance::new(6, 3).unwrap();
            let state = TwoDimState::new(a, b).unwrap();
            let mut full = state.to_statevector(&instance);
            let mut oracle = PhaseOracle::new(instance);
            let axis = full.clone();
            oracle.apply(&mut full).unwrap();
            full = reflect_about(&axis, &full).unwrap();
            let predicted = overlap_recursion_step(a);
            prop_assert!((full[instance.marked()] - predicted).norm() < 1e-10);
        }

        #[test]
        fn standard_statevector_matches_closed_form(qubits in 2u32..8, rounds in 0usize..12) {
            let instance = GroverInstance::new(qubits, 1).unwrap();
            let run = standard_grover_run(&instance, rounds).unwrap();
            let formula = standard_success_probability(instance.size(), rounds);
            prop_assert!((run.probabilities[rounds] - formula).abs() < 1e-10);
            prop_assert_eq!(run.queries, rounds as u64);
        }
    }
}
