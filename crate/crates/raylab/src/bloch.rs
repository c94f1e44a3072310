//! Bloch-sphere geometry of fixed known+unknown qubit superposers.
//!
//! A fixed channel fed P_ψ(x,y) ⊗ P_anchor succeeds as a superposer only on
//! a thin subset of the sphere: every successful input satisfies a planar
//! constraint A·cos x + B·sin x·cos y + C·sin x·sin y + D = 0, i.e. lies on
//! a circle. The scanner recovers that set numerically, the fitter recovers
//! the plane, and the fixed-overlap family provides the closed-form case.

use nalgebra::DMatrix;

use crate::channels::KrausChannel;
use crate::hilbert::StateVector;
use crate::linalg;
use crate::superposer::SuperpositionWeights;
use crate::{C64, Error, Result};

/// A point on the Bloch sphere: polar angle x ∈ [0, π], azimuth y ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint {
    pub polar: f64,
    pub azimuth: f64,
}

impl BlochPoint {
    pub fn new(polar: f64, azimuth: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&polar) {
            return Err(Error::InvalidParameter {
                name: "polar",
                reason: format!("polar angle {polar} outside [0, π]"),
            });
        }
        if !(0.0..std::f64::consts::TAU).contains(&azimuth) {
            return Err(Error::InvalidParameter {
                name: "azimuth",
                reason: format!("azimuth {azimuth} outside [0, 2π)"),
            });
        }
        Ok(Self { polar, azimuth })
    }

    /// Cartesian coordinates (cos x, sin x·cos y, sin x·sin y) entering the
    /// planar constraint.
    pub fn constraint_coordinates(&self) -> [f64; 3] {
        [
            self.polar.cos(),
            self.polar.sin() * self.azimuth.cos(),
            self.polar.sin() * self.azimuth.sin(),
        ]
    }
}

/// The qubit cos(x/2)|0⟩ + e^{−iy}·sin(x/2)|1⟩.
pub fn bloch_state(point: &BlochPoint) -> StateVector {
    let half = point.polar / 2.0;
    let lower = C64::from_polar(half.sin(), -point.azimuth);
    StateVector::from_pairs(&[[half.cos(), 0.0], [lower.re, lower.im]])
}

/// A planar constraint A·cos x + B·sin x·cos y + C·sin x·sin y + D = 0 with
/// (A, B, C) unit normalized; its sphere intersection is a circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleConstraint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl CircleConstraint {
    /// Normalizes (A, B, C) to a unit vector with a canonical sign (first
    /// nonvanishing component positive); rejects the all-zero normal.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let norm = (a * a + b * b + c * c).sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidParameter {
                name: "constraint",
                reason: "A, B, C must not all vanish".into(),
            });
        }
        let mut out = Self { a: a / norm, b: b / norm, c: c / norm, d: d / norm };
        let lead = [out.a, out.b, out.c].into_iter().find(|v| v.abs() > 1e-12).unwrap_or(1.0);
        if lead < 0.0 {
            out = Self { a: -out.a, b: -out.b, c: -out.c, d: -out.d };
        }
        Ok(out)
    }

    /// Signed residual at a point.
    pub fn residual(&self, point: &BlochPoint) -> f64 {
        let [f1, f2, f3] = point.constraint_coordinates();
        self.a * f1 + self.b * f2 + self.c * f3 + self.d
    }

    /// The polar angles solving the constraint at a fixed azimuth (0, 1, or
    /// 2 solutions in [0, π]).
    pub fn solve_polar(&self, azimuth: f64) -> Vec<f64> {
        // A·cos x + E·sin x = −D with E = B·cos y + C·sin y.
        let e = self.b * azimuth.cos() + self.c * azimuth.sin();
        let radius = (self.a * self.a + e * e).sqrt();
        if radius < 1e-14 {
            return Vec::new();
        }
        let ratio = -self.d / radius;
        if ratio.abs() > 1.0 {
            return Vec::new();
        }
        let phase = e.atan2(self.a);
        let offset = ratio.acos();
        let mut out = Vec::new();
        for candidate in [phase + offset, phase - offset] {
            if (0.0..=std::f64::consts::PI).contains(&candidate)
                && out.iter().all(|x: &f64| (x - candidate).abs() > 1e-12)
            {
                out.push(candidate);
            }
        }
        out
    }
}

/// The circle |⟨χ|ψ⟩|² = c as a planar constraint: with Bloch vector n_χ,
/// the overlap law (1 + n_χ·n_ψ)/2 = c gives n_χ·n_ψ = 2c − 1.
pub fn fixed_overlap_circle(chi: &StateVector, c: f64) -> Result<CircleConstraint> {
    if chi.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: chi.dim() });
    }
    if !(c > 1e-12 && c < 1.0 - 1e-12) {
        return Err(Error::InvalidParameter {
            name: "c",
            reason: format!("overlap {c} degenerates the circle to a point or the full sphere"),
        });
    }
    let a0 = chi.amplitude(0);
    let a1 = chi.amplitude(1);
    let cross = a0.conj() * a1;
    let nx = 2.0 * cross.re;
    let ny = 2.0 * cross.im;
    let nz = a0.norm_sqr() - a1.norm_sqr();
    // ψ(x, y) has Bloch vector (sin x·cos y, −sin x·sin y, cos x).
    CircleConstraint::new(nz, nx, -ny, -(2.0 * c - 1.0))
}

/// Scan resolution: `polar_steps` intervals over [0, π] (inclusive of both
/// poles, so polar_steps + 1 rows) and `azimuth_steps` over [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanGrid {
    pub polar_steps: usize,
    pub azimuth_steps: usize,
}

impl ScanGrid {
    pub fn new(polar_steps: usize, azimuth_steps: usize) -> Self {
        Self { polar_steps, azimuth_steps }
    }
}

/// Scans the Bloch sphere for inputs where the channel output on
/// P_ψ(x,y) ⊗ P_anchor is (i) nonvanishing, (ii) numerically rank one, and
/// (iii) a member of the θ-family α|ψ(x,y)⟩ + βe^{iθ}|anchor⟩.
///
/// Membership maximizes the family fidelity over a θ grid refined by
/// golden-section search and demands 1 − fidelity < tol. Grid points whose
/// ray coincides with the anchor ray are excluded: there the θ-family
/// collapses to the single anchor ray and membership would hold vacuously
/// for any channel that merely reproduces the anchor, witnessing no
/// superposition at all. The scan is a pure function of its arguments;
/// identical inputs give identical point sets.
pub fn success_set_scan(
    channel: &KrausChannel,
    anchor: &StateVector,
    weights: &SuperpositionWeights,
    grid: ScanGrid,
    tol: f64,
) -> Result<Vec<BlochPoint>> {
    if channel.dim_in() != 4 || channel.dim_out() != 2 {
        return Err(Error::DimensionMismatch { expected: 4, got: channel.dim_in() });
    }
    if anchor.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: anchor.dim() });
    }
    // Pull the Kraus entries into flat arrays: the grid loop is pure scalar
    // arithmetic, no allocation per point.
    let kraus: Vec<[[C64; 4]; 2]> = channel
        .kraus_ops()
        .iter()
        .map(|m| {
            let mut rows = [[C64::new(0.0, 0.0); 4]; 2];
            for (r, row) in rows.iter_mut().enumerate() {
                for (col, entry) in row.iter_mut().enumerate() {
                    *entry = m[(r, col)];
                }
            }
            rows
        })
        .collect();
    let anchor_amps = [anchor.amplitude(0), anchor.amplitude(1)];
    let alpha = weights.alpha();
    let beta = weights.beta();

    let mut points = Vec::new();
    for i in 0..=grid.polar_steps {
        let polar = std::f64::consts::PI * i as f64 / grid.polar_steps as f64;
        let half = polar / 2.0;
        for j in 0..grid.azimuth_steps {
            let azimuth = std::f64::consts::TAU * j as f64 / grid.azimuth_steps as f64;
            let psi = [C64::new(half.cos(), 0.0), C64::from_polar(half.sin(), -azimuth)];
            let joint = [
                psi[0] * anchor_amps[0],
                psi[0] * anchor_amps[1],
                psi[1] * anchor_amps[0],
                psi[1] * anchor_amps[1],
            ];

            // ρ_out = Σ_k (M_k v)(M_k v)†, accumulated entrywise.
            let mut rho00 = 0.0f64;
            let mut rho11 = 0.0f64;
            let mut rho01 = C64::new(0.0, 0.0);
            for m in &kraus {
                let mut w0 = C64::new(0.0, 0.0);
                let mut w1 = C64::new(0.0, 0.0);
                for col in 0..4 {
                    w0 += m[0][col] * joint[col];
                    w1 += m[1][col] * joint[col];
                }
                rho00 += w0.norm_sqr();
                rho11 += w1.norm_sqr();
                rho01 += w0 * w1.conj();
            }
            let trace = rho00 + rho11;
            if trace <= tol.max(1e-12) {
                continue;
            }

            // 2×2 Hermitian spectrum.
            let det = rho00 * rho11 - rho01.norm_sqr();
            let gap = ((rho00 - rho11).powi(2) + 4.0 * rho01.norm_sqr()).sqrt();
            let top = (trace + gap) / 2.0;
            let second = (det / top).max(trace - top);
            if second > 1e-12 * trace && top / second < 1e6 {
                continue;
            }

            // Top eigenvector.
            let out = if rho01.norm() > 1e-14 * trace {
                normalize2([rho01, C64::new(top - rho00, 0.0)])
            } else if rho00 >= rho11 {
                [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
            } else {
                [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
            };

            // θ-family membership through the closed overlap form.
            let psi_dot_out = psi[0].conj() * out[0] + psi[1].conj() * out[1];
            let anchor_dot_out = anchor_amps[0].conj() * out[0] + anchor_amps[1].conj() * out[1];
            let psi_dot_anchor =
                psi[0].conj() * anchor_amps[0] + psi[1].conj() * anchor_amps[1];
            if psi_dot_anchor.norm_sqr() > 1.0 - 1e-9 {
                // Degenerate family: the input ray coincides with the anchor.
                continue;
            }
            let coeff_a = alpha.conj() * psi_dot_out;
            let coeff_b = beta.conj() * anchor_dot_out;
            let coeff_c = alpha.conj() * beta * psi_dot_anchor;
            let fidelity = |theta: f64| -> f64 {
                let phase = C64::from_polar(1.0, theta);
                let norm_sq = 1.0 + 2.0 * (coeff_c * phase).re;
                if norm_sq < 1e-12 {
                    return 0.0;
                }
                (coeff_a + coeff_b * phase.conj()).norm_sqr() / norm_sq
            };
            let best = maximize_periodic(fidelity);
            if 1.0 - best < tol {
                points.push(BlochPoint { polar, azimuth });
            }
        }
    }
    Ok(points)
}

fn normalize2(v: [C64; 2]) -> [C64; 2] {
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / norm, v[1] / norm]
}

/// Coarse 64-point grid over [0, 2π) followed by golden-section refinement
/// around the best cell.
fn maximize_periodic(f: impl Fn(f64) -> f64) -> f64 {
    const COARSE: usize = 64;
    let step = std::f64::consts::TAU / COARSE as f64;
    let mut best_theta = 0.0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..COARSE {
        let theta = step * k as f64;
        let value = f(theta);
        if value > best {
            best = value;
            best_theta = theta;
        }
    }
    let golden = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut lo = best_theta - step;
    let mut hi = best_theta + step;
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..60 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = f(x1);
        }
    }
    best.max(f1).max(f2)
}

/// Least-squares plane fit to a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFit {
    pub constraint: CircleConstraint,
    pub max_residual: f64,
}

/// Fits A·cos x + B·sin x·cos y + C·sin x·sin y + D = 0 to a point set by
/// total least squares: the normal is the smallest-covariance direction of
/// the centered constraint coordinates. Requires at least 4 points.
pub fn fit_circle_constraint(points: &[BlochPoint]) -> Result<CircleFit> {
    if points.len() < 4 {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: format!("plane fitting needs at least 4 points, got {}", points.len()),
        });
    }
    let coords: Vec<[f64; 3]> = points.iter().map(BlochPoint::constraint_coordinates).collect();
    let mut centroid = [0.0f64; 3];
    for p in &coords {
        for (axis, v) in p.iter().enumerate() {
            centroid[axis] += v;
        }
    }
    for v in &mut centroid {
        *v /= coords.len() as f64;
    }
    let spread: f64 = coords
        .iter()
        .map(|p| {
            p.iter().zip(&centroid).map(|(a, b)| (a - b) * (a - b)).sum::<f64>()
        })
        .sum();
    if spread < 1e-20 {
        return Err(Error::InvalidParameter {
            name: "points",
            reason: "all points identical: the fit is degenerate".into(),
        });
    }
    let mut covariance = DMatrix::from_element(3, 3, C64::new(0.0, 0.0));
    for p in &coords {
        for r in 0..3 {
            for q in 0..3 {
                covariance[(r, q)] +=
                    C64::new((p[r] - centroid[r]) * (p[q] - centroid[q]), 0.0);
            }
        }
    }
    let (_, vectors) = linalg::hermitian_eigen(&covariance);
    let normal = vectors.column(0);
    let (a, b, c) = (normal[0].re, normal[1].re, normal[2].re);
    let d = -(a * centroid[0] + b * centroid[1] + c * centroid[2]);
    let constraint = CircleConstraint::new(a, b, c, d)?;
    let max_residual = points
        .iter()
        .map(|p| constraint.residual(p).abs())
        .fold(0.0, f64::max);
    Ok(CircleFit { constraint, max_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{overlap_probability, ray_from_vector, Prng};
    use crate::superposer::{build_reference_protocol, OverlapPromise};
    use nalgebra::dmatrix;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn bloch_state_poles_and_equator() {
        let north = bloch_state(&BlochPoint::new(0.0, 0.3).unwrap());
        assert!((north.amplitude(0) - c(1.0, 0.0)).norm() < 1e-15);

        let south = bloch_state(&BlochPoint::new(PI, 1.2).unwrap());
        assert!(south.amplitude(0).norm() < 1e-15);
        assert!((south.amplitude(1).norm() - 1.0).abs() < 1e-12);

        let plus = bloch_state(&BlochPoint::new(FRAC_PI_2, 0.0).unwrap());
        assert!((plus.amplitude(0).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((plus.amplitude(1).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn bloch_point_rejects_out_of_range() {
        assert!(BlochPoint::new(-0.1, 0.0).is_err());
        assert!(BlochPoint::new(0.0, TAU).is_err());
    }

    #[test]
    fn fixed_overlap_circle_examples() {
        // χ = |0⟩, c = 1/2: the equator (1, 0, 0, 0).
        let eq = fixed_overlap_circle(&StateVector::basis(2, 0), 0.5).unwrap();
        assert!((eq.a - 1.0).abs() < 1e-12);
        assert!(eq.b.abs() < 1e-12 && eq.c.abs() < 1e-12 && eq.d.abs() < 1e-12);

        // Degenerate overlaps rejected.
        assert!(fixed_overlap_circle(&StateVector::basis(2, 0), 1.0).is_err());
        assert!(fixed_overlap_circle(&StateVector::basis(2, 0), 0.0).is_err());

        // χ = |+⟩, c = 1/2: the great circle (0, 1, 0, 0).
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = StateVector::from_pairs(&[[h, 0.0], [h, 0.0]]);
        let gc = fixed_overlap_circle(&plus, 0.5).unwrap();
        assert!(gc.a.abs() < 1e-12);
        assert!((gc.b - 1.0).abs() < 1e-12);
        assert!(gc.c.abs() < 1e-12 && gc.d.abs() < 1e-12);
    }

    #[test]
    fn circle_points_reproduce_the_promised_overlap() {
        let mut rng = Prng::new(19);
        for trial in 0..20 {
            let chi = crate::hilbert::random_state_with(2, &mut rng).unwrap();
            let c_target = 0.1 + 0.8 * rng.uniform();
            let circle = fixed_overlap_circle(&chi, c_target).unwrap();
            let chi_ray = ray_from_vector(&chi).unwrap();
            let mut solutions = 0;
            for k in 0..40 {
                let azimuth = TAU * (k as f64 + 0.13 * trial as f64) / 40.0 % TAU;
                for polar in circle.solve_polar(azimuth) {
                    solutions += 1;
                    let point = BlochPoint::new(polar, azimuth).unwrap();
                    assert!(circle.residual(&point).abs() < 1e-10);
                    let state = bloch_state(&point);
                    let overlap =
                        overlap_probability(&chi_ray, &ray_from_vector(&state).unwrap()).unwrap();
                    assert!(
                        (overlap - c_target).abs() < 1e-10,
                        "overlap {overlap} vs target {c_target}"
                    );
                }
            }
            assert!(solutions > 0, "no circle points found");
        }
    }

    fn known_unknown_channel() -> crate::channels::KrausChannel {
        // The compiled protocol with the anchor as its own reference:
        // c₁ = 1/2 on the unknown input, c₂ = 1 on the known one.
        let promise = OverlapPromise::new(StateVector::basis(2, 0), 0.5, 1.0).unwrap();
        build_reference_protocol(&promise, &SuperpositionWeights::balanced()).unwrap()
    }

    #[test]
    fn scan_finds_the_equator_for_the_reference_protocol() {
        let channel = known_unknown_channel();
        let grid = ScanGrid::new(40, 80);
        let points = success_set_scan(
            &channel,
            &StateVector::basis(2, 0),
            &SuperpositionWeights::balanced(),
            grid,
            1e-9,
        )
        .unwrap();
        assert!(!points.is_empty());
        for p in &points {
            assert!(
                (p.polar - FRAC_PI_2).abs() < 1e-9,
                "off-equator point at polar {}",
                p.polar
            );
        }
        // Exactly one polar row passes, every azimuth of it.
        assert_eq!(points.len(), 80);
        // Deterministic.
        let again = success_set_scan(
            &channel,
            &StateVector::basis(2, 0),
            &SuperpositionWeights::balanced(),
            grid,
            1e-9,
        )
        .unwrap();
        assert_eq!(points.len(), again.len());
        for (a, b) in points.iter().zip(again.iter()) {
            assert_eq!(a.polar, b.polar);
            assert_eq!(a.azimuth, b.azimuth);
        }
    }

    #[test]
    fn scan_on_annihilating_channel_is_empty() {
        // K = |0⟩⟨1|⊗⟨1|: annihilates every ψ ⊗ |0⟩ slice.
        let kraus = dmatrix![
            c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0);
            c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)
        ];
        let channel = crate::channels::KrausChannel::new(vec![kraus]).unwrap();
        let points = success_set_scan(
            &channel,
            &StateVector::basis(2, 0),
            &SuperpositionWeights::balanced(),
            ScanGrid::new(20, 40),
            1e-9,
        )
        .unwrap();
        assert!(points.is_empty());
    }

    #[test]
    fn scan_rejects_full_rank_outputs_everywhere() {
        // Trace out the second register, then depolarize the first:
        // Kraus {√w·P ⊗ ⟨b|} over Paulis P and basis bras b.
        let w = 0.25f64.sqrt();
        let paulis = [
            dmatrix![c(w, 0.0), c(0.0, 0.0); c(0.0, 0.0), c(w, 0.0)],
            dmatrix![c(0.0, 0.0), c(w, 0.0); c(w, 0.0), c(0.0, 0.0)],
            dmatrix![c(0.0, 0.0), c(0.0, -w); c(0.0, w), c(0.0, 0.0)],
            dmatrix![c(w, 0.0), c(0.0, 0.0); c(0.0, 0.0), c(-w, 0.0)],
        ];
        let mut kraus = Vec::new();
        for p in &paulis {
            for b in 0..2usize {
                let mut op = DMatrix::from_element(2, 4, c(0.0, 0.0));
                for r in 0..2 {
                    for col in 0..2 {
                        op[(r, col * 2 + b)] = p[(r, col)];
                    }
                }
                kraus.push(op);
            }
        }
        let channel = crate::channels::KrausChannel::new(kraus).unwrap();
        let points = success_set_scan(
            &channel,
            &StateVector::basis(2, 0),
            &SuperpositionWeights::balanced(),
            ScanGrid::new(20, 40),
            1e-9,
        )
        .unwrap();
        assert!(points.is_empty(), "depolarized outputs passed the rank-one test");
    }

    #[test]
    fn fit_recovers_the_equator_plane() {
        let points: Vec<BlochPoint> = (0..100)
            .map(|k| BlochPoint::new(FRAC_PI_2, TAU * k as f64 / 100.0).unwrap())
            .collect();
        let fit = fit_circle_constraint(&points).unwrap();
        assert!((fit.constraint.a - 1.0).abs() < 1e-9);
        assert!(fit.constraint.b.abs() < 1e-9);
        assert!(fit.constraint.c.abs() < 1e-9);
        assert!(fit.constraint.d.abs() < 1e-9);
        assert!(fit.max_residual < 1e-9);
    }

    #[test]
    fn fit_recovers_a_polar_great_circle() {
        // The circle through both poles at azimuth 0/π: sin x·sin y = 0.
        let points: Vec<BlochPoint> = (0..50)
            .map(|k| BlochPoint::new(PI * k as f64 / 49.0, 0.0).unwrap())
            .chain((1..49).map(|k| BlochPoint::new(PI * k as f64 / 49.0, PI).unwrap()))
            .collect();
        let fit = fit_circle_constraint(&points).unwrap();
        assert!(fit.constraint.a.abs() < 1e-9);
        assert!(fit.constraint.b.abs() < 1e-9);
        assert!((fit.constraint.c - 1.0).abs() < 1e-9);
        assert!(fit.constraint.d.abs() < 1e-9);
        assert!(fit.max_residual < 1e-9);
    }

    #[test]
    fn fit_fails_on_haar_random_points() {
        let mut rng = Prng::new(77);
        let points: Vec<BlochPoint> = (0..200)
            .map(|_| {
                // Uniform on the sphere: cos x uniform in [−1, 1].
                let z = rng.uniform_in(-1.0, 1.0);
                BlochPoint::new(z.acos(), rng.uniform_in(0.0, TAU)).unwrap()
            })
            .collect();
        let fit = fit_circle_constraint(&points).unwrap();
        assert!(fit.max_residual > 0.1, "random sphere fit residual {}", fit.max_residual);
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        let p = BlochPoint::new(1.0, 1.0).unwrap();
        assert!(fit_circle_constraint(&[p; 3]).is_err());
        assert!(fit_circle_constraint(&[p; 10]).is_err());
    }

    #[test]
    fn scan_points_fit_the_expected_circle() {
        let channel = known_unknown_channel();
        let points = success_set_scan(
            &channel,
            &StateVector::basis(2, 0),
            &SuperpositionWeights::balanced(),
            ScanGrid::new(60, 120),
            1e-9,
        )
        .unwrap();
        let fit = fit_circle_constraint(&points).unwrap();
        let expected = fixed_overlap_circle(&StateVector::basis(2, 0), 0.5).unwrap();
        assert!((fit.constraint.a - expected.a).abs() < 1e-9);
        assert!(fit.max_residual < 1e-9);
    }
}
