//! C ABI for the raylab numerical laboratory.
//!
//! Every object crosses the boundary as an opaque handle created and
//! destroyed by paired `_new`/`_free` calls; every fallible function
//! returns a [`RaylabStatus`] and writes results through out-pointers.
//! Amplitudes travel as interleaved `[re, im]` doubles of length `2·dim`.
//! The generated header lives at `include/raylab.h`.

use raylab::bloch::{bloch_state, fixed_overlap_circle, BlochPoint};
use raylab::channels::KrausChannel;
use raylab::grover::{overlap_recursion_step, round_bound, super_grover_run, GroverInstance, RunMode};
use raylab::hilbert::{linear_independence, random_state, ray_from_vector, rephase, Ray, StateVector};
use raylab::nogo::build_ud_povm;
use raylab::superposer::{
    build_reference_protocol, protocol_success_probability, reference_superposition,
    OverlapPromise, SuperpositionWeights,
};
use raylab::C64;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaylabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotNormalized = 4,
    VanishingOverlap = 5,
    PromiseViolated = 6,
    LinearlyDependent = 7,
    NumericalFailure = 8,
}

fn status_of(err: &raylab::Error) -> RaylabStatus {
    use raylab::Error as E;
    match err {
        E::DimensionMismatch { .. } => RaylabStatus::DimensionMismatch,
        E::NotNormalized { .. } | E::ZeroVector { .. } => RaylabStatus::NotNormalized,
        E::VanishingReferenceOverlap { .. } => RaylabStatus::VanishingOverlap,
        E::PromiseViolated { .. } => RaylabStatus::PromiseViolated,
        E::LinearlyDependent { .. } => RaylabStatus::LinearlyDependent,
        E::InvalidParameter { .. } | E::EmptyInput | E::Config(_) => RaylabStatus::InvalidArgument,
        _ => RaylabStatus::NumericalFailure,
    }
}

/// Opaque handle to a normalized state vector.
pub struct RaylabState {
    inner: StateVector,
}

/// Opaque handle to a ray (rank-one projector).
pub struct RaylabRay {
    inner: Ray,
}

/// Opaque handle to a Kraus channel.
pub struct RaylabChannel {
    inner: KrausChannel,
}

/// Opaque handle to an overlap promise (reference state plus c1, c2).
pub struct RaylabPromise {
    inner: OverlapPromise,
}

unsafe fn write_out<T>(out: *mut T, value: T) -> RaylabStatus {
    if out.is_null() {
        return RaylabStatus::NullPointer;
    }
    unsafe { out.write(value) };
    RaylabStatus::Ok
}

unsafe fn box_out<T>(out: *mut *mut T, value: T) -> RaylabStatus {
    if out.is_null() {
        return RaylabStatus::NullPointer;
    }
    unsafe { out.write(Box::into_raw(Box::new(value))) };
    RaylabStatus::Ok
}

fn weights_from(alpha_re: f64, alpha_im: f64, beta_re: f64, beta_im: f64) -> Option<SuperpositionWeights> {
    SuperpositionWeights::new(C64::new(alpha_re, alpha_im), C64::new(beta_re, beta_im)).ok()
}

/// Builds a state from `2*dim` interleaved `[re, im]` doubles; the vector
/// must be normalized.
///
/// # Safety
/// `amplitudes` must point to `2*dim` readable doubles and `out` must be a
/// valid writable pointer. The returned handle must be released with
/// [`raylab_state_free`].
#[no_mangle]
pub unsafe extern "C" fn raylab_state_new(
    amplitudes: *const f64,
    dim: usize,
    out: *mut *mut RaylabState,
) -> RaylabStatus {
    if amplitudes.is_null() || out.is_null() {
        return RaylabStatus::NullPointer;
    }
    if dim == 0 {
        return RaylabStatus::InvalidArgument;
    }
    let raw = unsafe { std::slice::from_raw_parts(amplitudes, 2 * dim) };
    let pairs: Vec<[f64; 2]> = raw.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
    let vector = StateVector::from_pairs(&pairs);
    if !vector.is_normalized() {
        return RaylabStatus::NotNormalized;
    }
    unsafe { box_out(out, RaylabState { inner: vector }) }
}

/// The computational basis state |index⟩ in dimension `dim`.
///
/// # Safety
/// `out` must be a valid writable pointer; release with
/// [`raylab_state_free`].
#[no_mangle]
pub unsafe extern "C" fn raylab_state_basis(
    dim: usize,
    index: usize,
    out: *mut *mut RaylabState,
) -> RaylabStatus {
    if dim == 0 || index >= dim {
        return RaylabStatus::InvalidArgument;
    }
    unsafe { box_out(out, RaylabState { inner: StateVector::basis(dim, index) }) }
}

/// A Haar-random state, deterministic for a fixed seed.
///
/// # Safety
/// `out` must be a valid writable pointer; release with
/// [`raylab_state_free`].
#[no_mangle]
pub unsafe extern "C" fn raylab_state_random(
    dim: usize,
    seed: u64,
    out: *mut *mut RaylabState,
) -> RaylabStatus {
    match random_state(dim, seed) {
        Ok(state) => unsafe { box_out(out, RaylabState { inner: state }) },
        Err(e) => status_of(&e),
    }
}

/// Dimension of a state handle; 0 for a null handle.
///
/// # Safety
/// `state` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn raylab_state_dim(state: *const RaylabState) -> usize {
    if state.is_null() {
        return 0;
    }
    unsafe { &*state }.inner.dim()
}

/// Copies the amplitudes into `buffer` as `2*dim` interleaved doubles.
///
/// # Safety
/// `state` must be a live handle; `buffer` must point to `2*dim` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn raylab_state_amplitudes(
    state: *const RaylabState,
    buffer: *mut f64,
) -> RaylabStatus {
    if state.is_null() || buffer.is_null() {
        return RaylabStatus::NullPointer;
    }
    let state = unsafe { &*state };
    let out = unsafe { std::slice::from_raw_parts_mut(buffer, 2 * state.inner.dim()) };
    for (i, amp) in state.inner.amplitudes().iter().enumerate() {
        out[2 * i] = amp.re;
        out[2 * i + 1] = amp.im;
    }
    RaylabStatus::Ok
}

/// Multiplies every amplitude by e^{i·gamma}; the ray is unchanged.
///
/// # Safety
/// `state` must be a live handle and `out` a valid writable pointer;
/// release the result with [`raylab_state_free`].
#[no_mangle]
pub unsafe extern "C" fn raylab_state_rephase(
    state: *const RaylabState,
    gamma: f64,
    out: *mut *mut RaylabState,
) -> RaylabStatus {
    if state.is_null() {
        return RaylabStatus::NullPointer;
    }
    let rotated = rephase(&unsafe { &*state }.inner, gamma);
    unsafe { box_out(out, RaylabState { inner: rotated }) }
}

/// Releases a state handle; null is ignored.
///
/// # Safety
/// `state` must be null or a handle produced by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn raylab_state_free(state: *mut RaylabState) {
    if !state.is_null() {
        drop(unsafe { Box::from_raw(state) });
    }
}

/// The rank-one projector of a normalized state.
///
/// # Safety
/// `state` must be a live handle and `out` a valid writable pointer;
/// release the result with [`raylab_ray_free`].
#[no_mangle]
pub unsafe extern "C" fn raylab_ray_from_state(
    state: *const RaylabState,
    out: *mut *mut RaylabRay,
) -> RaylabStatus {
    if state.is_null() {
        return RaylabStatus::NullPointer;
    }
    match ray_from_vector(&unsafe { &*state }.inner) {
        Ok(ray) => unsafe { box_out(out, RaylabRay { inner: ray }) },
        Err(e) => status_of(&e),
    }
}

/// Releases a ray handle; null is ignored.
///
/// # Safety
/// `ray` must be null or a handle produced by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn raylab_ray_free(ray: *mut RaylabRay) {
    if !ray.is_null() {
        drop(unsafe { Box::from_raw(ray) });
    }
}

/// Transition probability tr(P·Q) of two rays.
///
/// # Safety
/// `p` and `q` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn raylab_overlap_probability(
    p: *const RaylabRay,
    q: *const RaylabRay,
    out: *mut f64,
) -> RaylabStatus {
    if p.is_null() || q.is_null() {
        return RaylabStatus::NullPointer;
    }
    match unsafe { &*p }.inner.overlap_probability(&unsafe { &*q }.inner) {
        Ok(value) => unsafe { write_out(out, value) },
        Err(e) => status_of(&e),
    }
}

/// The reference-calibrated superposition ray of (ψ, φ) against χ with
/// weights (α, β); also reports the squared norm of the unnormalized
/// superposition vector.
///
/// # Safety
/// All handles must be live; `out_ray` and `out_norm_sq` must be writable.
/// Release the ray with [`raylab_ray_free`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn raylab_reference_superposition(
    chi: *const RaylabState,
    psi: *const RaylabState,
    phi: *const RaylabState,
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    out_ray: *mut *mut RaylabRay,
    out_norm_sq: *mut f64,
) -> RaylabStatus {
    if chi.is_null() || psi.is_null() || phi.is_null() {
        return RaylabStatus::NullPointer;
    }
    let Some(weights) = weights_from(alpha_re, alpha_im, beta_re, beta_im) else {
        return RaylabStatus::InvalidArgument;
    };
    match reference_superposition(
        &unsafe { &*chi }.inner,
        &unsafe { &*psi }.inner,
        &unsafe { &*phi }.inner,
        &weights,
    ) {
        Ok((ray, unnormalized)) => {
            let norm_sq = unnormalized.amplitudes().norm_squared();
            let status = unsafe { write_out(out_norm_sq, norm_sq) };
            if status != RaylabStatus::Ok {
                return status;
            }
            unsafe { box_out(out_ray, RaylabRay { inner: ray }) }
        }
        Err(e) => status_of(&e),
    }
}

/// An overlap promise: reference state χ with promised overlaps c1, c2.
///
/// # Safety
/// `chi` must be a live handle and `out` writable; release with
/// [`raylab_promise_free`].
#[no_mangle]
pub unsafe extern "C" fn raylab_promise_new(
    chi: *const RaylabState,
    c1: f64,
    c2: f64,
    out: *mut *mut RaylabPromise,
) -> RaylabStatus {
    if chi.is_null() {
        return RaylabStatus::NullPointer;
    }
    match OverlapPromise::new(unsafe { &*chi }.inner.clone(), c1, c2) {
        Ok(promise) => unsafe { box_out(out, RaylabPromise { inner: promise }) },
        Err(e) => status_of(&e),
    }
}

/// Releases a promise handle; null is ignored.
///
/// # Safety
/// `promise` must be null or a handle produced by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn raylab_promise_free(promise: *mut RaylabPromise) {
    if !promise.is_null() {
        drop(unsafe { Box::from_raw(promise) });
    }
}

/// Compiles the promise into the postselected superposition channel.
///
/// # Safety
/// `promise` must be a live handle and `out` writable; release with
/// [`raylab_channel_free`].
#[no_mangle]
pub unsafe extern "C" fn raylab_protocol_channel_new(
    promise: *const RaylabPromise,
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    out: *mut *mut RaylabChannel,
) -> RaylabStatus {
    if promise.is_null() {
        return RaylabStatus::NullPointer;
    }
    let Some(weights) = weights_from(alpha_re, alpha_im, beta_re, beta_im) else {
        return RaylabStatus::InvalidArgument;
    };
    match build_reference_protocol(&unsafe { &*promise }.inner, &weights) {
        Ok(channel) => unsafe { box_out(out, RaylabChannel { inner: channel }) },
        Err(e) => status_of(&e),
    }
}

/// Releases a channel handle; null is ignored.
///
/// # Safety
/// `channel` must be null or a handle produced by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn raylab_channel_free(channel: *mut RaylabChannel) {
    if !channel.is_null() {
        drop(unsafe { Box::from_raw(channel) });
    }
}

/// Trace-nonincreasing check: writes 1/0 and the largest eigenvalue of
/// the Kraus Gram sum.
///
/// # Safety
/// `channel` must be a live handle; `out_ok` and `out_max_eigenvalue` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn raylab_channel_is_cptni(
    channel: *const RaylabChannel,
    tol: f64,
    out_ok: *mut i32,
    out_max_eigenvalue: *mut f64,
) -> RaylabStatus {
    if channel.is_null() {
        return RaylabStatus::NullPointer;
    }
    let (ok, max_eig) = unsafe { &*channel }.inner.is_cptni(tol);
    let status = unsafe { write_out(out_ok, i32::from(ok)) };
    if status != RaylabStatus::Ok {
        return status;
    }
    unsafe { write_out(out_max_eigenvalue, max_eig) }
}

/// Simulated and closed-form success probabilities of the compiled
/// protocol on a promise-satisfying pair.
///
/// # Safety
/// All handles must be live; `out_simulated` and `out_formula` must be
/// writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn raylab_protocol_success_probability(
    channel: *const RaylabChannel,
    promise: *const RaylabPromise,
    psi: *const RaylabState,
    phi: *const RaylabState,
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    out_simulated: *mut f64,
    out_formula: *mut f64,
) -> RaylabStatus {
    if channel.is_null() || promise.is_null() || psi.is_null() || phi.is_null() {
        return RaylabStatus::NullPointer;
    }
    let Some(weights) = weights_from(alpha_re, alpha_im, beta_re, beta_im) else {
        return RaylabStatus::InvalidArgument;
    };
    match protocol_success_probability(
        &unsafe { &*channel }.inner,
        &unsafe { &*psi }.inner,
        &unsafe { &*phi }.inner,
        &unsafe { &*promise }.inner,
        &weights,
    ) {
        Ok(p) => {
            let status = unsafe { write_out(out_simulated, p.simulated) };
            if status != RaylabStatus::Ok {
                return status;
            }
            unsafe { write_out(out_formula, p.formula) }
        }
        Err(e) => status_of(&e),
    }
}

/// Linear-independence test of a family of state handles: writes 1/0, the
/// rank, and the smallest singular value of the column matrix.
///
/// # Safety
/// `family` must point to `count` live state handles; the out-pointers
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn raylab_linear_independence(
    family: *const *const RaylabState,
    count: usize,
    out_independent: *mut i32,
    out_rank: *mut usize,
    out_sigma_min: *mut f64,
) -> RaylabStatus {
    if family.is_null() {
        return RaylabStatus::NullPointer;
    }
    let handles = unsafe { std::slice::from_raw_parts(family, count) };
    let mut vectors = Vec::with_capacity(count);
    for h in handles {
        if h.is_null() {
            return RaylabStatus::NullPointer;
        }
        vectors.push(unsafe { &**h }.inner.clone());
    }
    match linear_independence(&vectors, 1e-10) {
        Ok(report) => {
            let status = unsafe { write_out(out_independent, i32::from(report.independent)) };
            if status != RaylabStatus::Ok {
                return status;
            }
            let status = unsafe { write_out(out_rank, report.rank) };
            if status != RaylabStatus::Ok {
                return status;
            }
            unsafe { write_out(out_sigma_min, report.smallest_singular_value) }
        }
        Err(e) => status_of(&e),
    }
}

/// The uniform conclusive weight λ of the unambiguous-discrimination POVM
/// for a linearly independent family.
///
/// # Safety
/// `family` must point to `count` live state handles; `out_lambda` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn raylab_ud_povm_lambda(
    family: *const *const RaylabState,
    count: usize,
    out_lambda: *mut f64,
) -> RaylabStatus {
    if family.is_null() {
        return RaylabStatus::NullPointer;
    }
    let handles = unsafe { std::slice::from_raw_parts(family, count) };
    let mut vectors = Vec::with_capacity(count);
    for h in handles {
        if h.is_null() {
            return RaylabStatus::NullPointer;
        }
        vectors.push(unsafe { &**h }.inner.clone());
    }
    match build_ud_povm(&vectors) {
        Ok(Ok(povm)) => unsafe { write_out(out_lambda, povm.lambdas()[0]) },
        Ok(Err(_)) => RaylabStatus::LinearlyDependent,
        Err(e) => status_of(&e),
    }
}

/// One step of the overlap recursion a ↦ (3 − 4|a|²)·a.
///
/// # Safety
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn raylab_overlap_recursion_step(
    a_re: f64,
    a_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RaylabStatus {
    let next = overlap_recursion_step(C64::new(a_re, a_im));
    let status = unsafe { write_out(out_re, next.re) };
    if status != RaylabStatus::Ok {
        return status;
    }
    unsafe { write_out(out_im, next.im) }
}

/// ⌈log₄(N/4)⌉ for N ≥ 4.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn raylab_round_bound(size: usize, out: *mut usize) -> RaylabStatus {
    match round_bound(size) {
        Ok(bound) => unsafe { write_out(out, bound) },
        Err(e) => status_of(&e),
    }
}

/// Runs the reflection-iterated search in the exact two-dimensional
/// subspace until `target_p`: writes oracle queries used and the final
/// success probability.
///
/// # Safety
/// `out_queries` and `out_probability` must be writable.
#[no_mangle]
pub unsafe extern "C" fn raylab_super_grover_rounds(
    qubits: u32,
    marked: usize,
    target_p: f64,
    out_queries: *mut u64,
    out_probability: *mut f64,
) -> RaylabStatus {
    let instance = match GroverInstance::new(qubits, marked) {
        Ok(instance) => instance,
        Err(e) => return status_of(&e),
    };
    match super_grover_run(&instance, target_p, RunMode::Subspace) {
        Ok(run) => {
            let final_p = run.trace.last().map(|row| row.success_probability).unwrap_or(0.0);
            let status = unsafe { write_out(out_queries, run.queries) };
            if status != RaylabStatus::Ok {
                return status;
            }
            unsafe { write_out(out_probability, final_p) }
        }
        Err(e) => status_of(&e),
    }
}

/// The qubit cos(x/2)|0⟩ + e^{−iy}·sin(x/2)|1⟩.
///
/// # Safety
/// `out` must be writable; release with [`raylab_state_free`].
#[no_mangle]
pub unsafe extern "C" fn raylab_bloch_state(
    polar: f64,
    azimuth: f64,
    out: *mut *mut RaylabState,
) -> RaylabStatus {
    match BlochPoint::new(polar, azimuth) {
        Ok(point) => unsafe { box_out(out, RaylabState { inner: bloch_state(&point) }) },
        Err(e) => status_of(&e),
    }
}

/// The planar constraint (A, B, C, D) of the circle |⟨χ|ψ⟩|² = c, written
/// into a 4-element buffer.
///
/// # Safety
/// `chi` must be a live qubit handle; `out_abcd` must point to 4 writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn raylab_fixed_overlap_circle(
    chi: *const RaylabState,
    c: f64,
    out_abcd: *mut f64,
) -> RaylabStatus {
    if chi.is_null() || out_abcd.is_null() {
        return RaylabStatus::NullPointer;
    }
    match fixed_overlap_circle(&unsafe { &*chi }.inner, c) {
        Ok(constraint) => {
            let out = unsafe { std::slice::from_raw_parts_mut(out_abcd, 4) };
            out[0] = constraint.a;
            out[1] = constraint.b;
            out[2] = constraint.c;
            out[3] = constraint.d;
            RaylabStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
