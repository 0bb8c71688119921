//! Brute-force evaluation of the one-way information deficit, quantum
//! discord and concurrence, independent of every closed form in
//! [`crate::closed_form`]. The measurement side is qubit b throughout.
//!
//! A one-qubit von Neumann measurement is a pair of projectors
//! (I +- n.sigma)/2 for a unit Bloch direction n, so each minimization
//! runs over the 2-sphere: a coarse grid on the antipodal-quotient
//! hemisphere followed by Nelder-Mead refinement from the best cell.

use rayon::prelude::*;

use crate::closed_form::{f_raw, ClampedBits};
use crate::error::{Error, Result};
use crate::linalg::{
    eigenvalues_hermitian, eigh4, kron, partial_trace_a, partial_trace_b, sigma_x, sigma_y,
    sigma_z, von_neumann_entropy, von_neumann_entropy2, ComplexMatrix2, ComplexMatrix4,
    DensityMatrix4, C64,
};
use crate::states::XStateParams;

/// Unit Bloch vector selecting a one-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection([f64; 3]);

impl MeasurementDirection {
    pub fn new(n: [f64; 3]) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "measurement direction must have unit norm, got {norm}"
            )));
        }
        Ok(Self(n))
    }

    pub fn from_polar_azimuth(polar: f64, azimuth: f64) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Self([sp * ca, sp * sa, cp])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }
}

/// The (t, y) parametrization of a 2x2 unitary V = t I + i y.sigma with
/// t^2 + |y|^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitaryParams {
    t: f64,
    y: [f64; 3],
}

impl UnitaryParams {
    pub fn new(t: f64, y: [f64; 3]) -> Result<Self> {
        let norm_sq = t * t + y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
        if !norm_sq.is_finite() || (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "t^2 + |y|^2 must equal 1, got {norm_sq}"
            )));
        }
        Ok(Self { t, y })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> [f64; 3] {
        self.y
    }

    /// The unitary itself.
    pub fn matrix(&self) -> ComplexMatrix2 {
        let (t, [y1, y2, y3]) = (self.t, self.y);
        ComplexMatrix2([
            [C64::new(t, y3), C64::new(y2, y1)],
            [C64::new(-y2, y1), C64::new(t, -y3)],
        ])
    }
}

/// The Bloch direction the measurement V Pi_k V^dag actually probes:
/// z1 = 2(-t y2 + y1 y3), z2 = 2(t y1 + y2 y3), z3 = t^2 + y3^2 - y1^2 - y2^2.
///
/// The post-measurement state depends on (t, y) only through this z,
/// which is why the oracle searches the sphere and not U(2).
pub fn direction_of_unitary(u: &UnitaryParams) -> MeasurementDirection {
    let (t, [y1, y2, y3]) = (u.t, u.y);
    let z = [
        2.0 * (-t * y2 + y1 * y3),
        2.0 * (t * y1 + y2 * y3),
        t * t + y3 * y3 - y1 * y1 - y2 * y2,
    ];
    MeasurementDirection::new(z).expect("normalized (t, y) yields a unit z")
}

/// Projector pair (I +- n.sigma)/2 of the measurement along n.
pub fn projectors(n: &MeasurementDirection) -> (ComplexMatrix2, ComplexMatrix2) {
    let [n1, n2, n3] = n.0;
    let m = sigma_x()
        .scale(n1)
        .add(&sigma_y().scale(n2))
        .add(&sigma_z().scale(n3));
    let id = ComplexMatrix2::identity();
    (id.add(&m).scale(0.5), id.sub(&m).scale(0.5))
}

/// State after the non-selective measurement of qubit b along n:
/// sum_k (I (x) Pi_k) rho (I (x) Pi_k).
pub fn post_measurement_state(rho: &DensityMatrix4, n: &MeasurementDirection) -> DensityMatrix4 {
    let (pi_plus, pi_minus) = projectors(n);
    let id = ComplexMatrix2::identity();
    let mut sum = ComplexMatrix4::zero();
    for pi in [pi_plus, pi_minus] {
        let b = kron(&id, &pi);
        sum = sum.add(&b.mul(rho.matrix()).mul(&b));
    }
    DensityMatrix4::new(sum).expect("measurement of a valid state stays valid")
}

/// Entropy in bits after measuring qubit b along n; never below S(rho).
pub fn measured_entropy(rho: &DensityMatrix4, n: &MeasurementDirection) -> f64 {
    von_neumann_entropy(&post_measurement_state(rho, n))
}

/// Search controls for the sphere minimization.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    coarse_polar_steps: usize,
    coarse_azimuth_steps: usize,
    refine_iterations: usize,
    refine_tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            coarse_polar_steps: 90,
            coarse_azimuth_steps: 180,
            refine_iterations: 200,
            refine_tolerance: 1e-12,
        }
    }
}

impl OptimizerConfig {
    pub fn new(
        coarse_polar_steps: usize,
        coarse_azimuth_steps: usize,
        refine_iterations: usize,
        refine_tolerance: f64,
    ) -> Result<Self> {
        if coarse_polar_steps < 8 || coarse_azimuth_steps < 8 {
            return Err(Error::InvalidArgument(
                "coarse grid needs at least 8 steps per angle".into(),
            ));
        }
        if !refine_tolerance.is_finite() || refine_tolerance <= 0.0 {
            return Err(Error::InvalidArgument(
                "refine tolerance must be positive".into(),
            ));
        }
        Ok(Self {
            coarse_polar_steps,
            coarse_azimuth_steps,
            refine_iterations,
            refine_tolerance,
        })
    }

    pub fn coarse_polar_steps(&self) -> usize {
        self.coarse_polar_steps
    }

    pub fn coarse_azimuth_steps(&self) -> usize {
        self.coarse_azimuth_steps
    }

    pub fn refine_iterations(&self) -> usize {
        self.refine_iterations
    }

    pub fn refine_tolerance(&self) -> f64 {
        self.refine_tolerance
    }
}

pub(crate) struct SphereMinimum {
    pub value: f64,
    pub direction: MeasurementDirection,
    pub converged: bool,
    pub iterations: usize,
    pub spread: f64,
}

fn dir_from_angles(polar: f64, azimuth: f64) -> [f64; 3] {
    let (sp, cp) = polar.sin_cos();
    let (sa, ca) = azimuth.sin_cos();
    [sp * ca, sp * sa, cp]
}

/// Minimize a pure objective over measurement directions.
///
/// Antipodal directions give identical measurements, so the coarse grid
/// covers the z >= 0 hemisphere; refinement is an unconstrained
/// Nelder-Mead in (polar, azimuth), which wraps harmlessly. The argmin
/// is deterministic: exact value ties break on lexicographic direction
/// order.
pub(crate) fn minimize_on_sphere<F>(objective: F, cfg: &OptimizerConfig) -> SphereMinimum
where
    F: Fn(&[f64; 3]) -> f64 + Sync,
{
    let np = cfg.coarse_polar_steps;
    let na = cfg.coarse_azimuth_steps;
    let polar_step = std::f64::consts::FRAC_PI_2 / np as f64;
    let azimuth_step = std::f64::consts::TAU / na as f64;

    let values: Vec<f64> = (0..(np + 1) * na)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / na, idx % na);
            objective(&dir_from_angles(
                i as f64 * polar_step,
                j as f64 * azimuth_step,
            ))
        })
        .collect();

    let mut best_value = f64::INFINITY;
    let mut best_angles = (0.0, 0.0);
    let mut best_dir = [0.0, 0.0, 1.0];
    for (idx, &v) in values.iter().enumerate() {
        let (i, j) = (idx / na, idx % na);
        let angles = (i as f64 * polar_step, j as f64 * azimuth_step);
        let dir = dir_from_angles(angles.0, angles.1);
        if v < best_value || (v == best_value && dir < best_dir) {
            best_value = v;
            best_angles = angles;
            best_dir = dir;
        }
    }

    let refined = nelder_mead_2d(
        &|p, a| objective(&dir_from_angles(p, a)),
        best_angles,
        (0.5 * polar_step, 0.5 * azimuth_step),
        cfg.refine_iterations,
        cfg.refine_tolerance,
    );

    let (value, angles) = if refined.value < best_value {
        (refined.value, refined.point)
    } else {
        (best_value, best_angles)
    };
    SphereMinimum {
        value,
        direction: MeasurementDirection::from_polar_azimuth(angles.0, angles.1),
        converged: refined.converged,
        iterations: refined.iterations,
        spread: refined.spread,
    }
}

struct Refined {
    value: f64,
    point: (f64, f64),
    converged: bool,
    iterations: usize,
    spread: f64,
}

/// Plain Nelder-Mead on two angles: reflection 1, expansion 2,
/// contraction 0.5, shrink 0.5. Stops when the simplex value spread
/// drops below `tolerance`.
fn nelder_mead_2d<F>(
    objective: &F,
    start: (f64, f64),
    step: (f64, f64),
    max_iterations: usize,
    tolerance: f64,
) -> Refined
where
    F: Fn(f64, f64) -> f64,
{
    let mut simplex = [
        (start, objective(start.0, start.1)),
        (
            (start.0 + step.0, start.1),
            objective(start.0 + step.0, start.1),
        ),
        (
            (start.0, start.1 + step.1),
            objective(start.0, start.1 + step.1),
        ),
    ];

    let mut iterations = 0;
    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective"));
        let spread = simplex[2].1 - simplex[0].1;
        if spread < tolerance {
            return Refined {
                value: simplex[0].1,
                point: simplex[0].0,
                converged: true,
                iterations,
                spread,
            };
        }
        if iterations >= max_iterations {
            return Refined {
                value: simplex[0].1,
                point: simplex[0].0,
                converged: false,
                iterations,
                spread,
            };
        }
        iterations += 1;

        let best = simplex[0];
        let second = simplex[1];
        let worst = simplex[2];
        let centroid = (
            0.5 * (best.0 .0 + second.0 .0),
            0.5 * (best.0 .1 + second.0 .1),
        );
        let reflect = (
            centroid.0 + (centroid.0 - worst.0 .0),
            centroid.1 + (centroid.1 - worst.0 .1),
        );
        let f_reflect = objective(reflect.0, reflect.1);

        if f_reflect < best.1 {
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - worst.0 .0),
                centroid.1 + 2.0 * (centroid.1 - worst.0 .1),
            );
            let f_expand = objective(expand.0, expand.1);
            simplex[2] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
        } else if f_reflect < second.1 {
            simplex[2] = (reflect, f_reflect);
        } else {
            let contract = (
                centroid.0 + 0.5 * (worst.0 .0 - centroid.0),
                centroid.1 + 0.5 * (worst.0 .1 - centroid.1),
            );
            let f_contract = objective(contract.0, contract.1);
            if f_contract < worst.1 {
                simplex[2] = (contract, f_contract);
            } else {
                for point in simplex.iter_mut().skip(1) {
                    point.0 = (
                        best.0 .0 + 0.5 * (point.0 .0 - best.0 .0),
                        best.0 .1 + 0.5 * (point.0 .1 - best.0 .1),
                    );
                    point.1 = objective(point.0 .0, point.0 .1);
                }
            }
        }
    }
}

/// Result of the brute-force deficit minimization.
#[derive(Debug, Clone)]
pub struct OwidOracleResult {
    pub deficit: ClampedBits,
    pub argmin: MeasurementDirection,
    pub min_measured_entropy: f64,
}

/// One-way information deficit by direct minimization:
/// min over n of S(post-measurement) - S(rho).
pub fn owid_oracle(rho: &DensityMatrix4, cfg: &OptimizerConfig) -> Result<OwidOracleResult> {
    let base_entropy = von_neumann_entropy(rho);
    let minimum = minimize_on_sphere(
        |n| von_neumann_entropy(&post_measurement_state(rho, &MeasurementDirection(*n))),
        cfg,
    );
    if !minimum.converged {
        return Err(Error::NonConvergence {
            best: (minimum.value - base_entropy).max(0.0),
            spread: minimum.spread,
            iterations: minimum.iterations,
        });
    }
    Ok(OwidOracleResult {
        deficit: ClampedBits::from_raw(minimum.value - base_entropy),
        argmin: minimum.direction,
        min_measured_entropy: minimum.value,
    })
}

/// Minimum measured entropy of an X-family state through the reduced
/// two-sphere objective f(s z3, sqrt(sum c_i^2 z_i^2)).
///
/// Valid for the whole family, with or without the ordering condition;
/// on the (never observed) chance that refinement misses its tolerance
/// the best value found is still returned.
pub fn min_measured_entropy_x_reduced(p: &XStateParams, cfg: &OptimizerConfig) -> f64 {
    let [c1, c2, c3] = p.c();
    let s = p.s();
    let minimum = minimize_on_sphere(
        |z| {
            let theta_sq = c1 * c1 * z[0] * z[0] + c2 * c2 * z[1] * z[1] + c3 * c3 * z[2] * z[2];
            f_raw(s * z[2], theta_sq.sqrt())
        },
        cfg,
    );
    minimum.value
}

/// One-sided quantum discord with the measurement on qubit b:
/// S(rho_b) - S(rho) + min over n of sum_k p_k S(rho_{a|k}).
pub fn discord_oracle(rho: &DensityMatrix4, cfg: &OptimizerConfig) -> Result<f64> {
    let s_b = von_neumann_entropy2(&partial_trace_a(rho.matrix()))
        .expect("reduced state of a valid state is valid");
    let s_ab = von_neumann_entropy(rho);
    let id = ComplexMatrix2::identity();

    let conditional = |n: &[f64; 3]| -> f64 {
        let (pi_plus, pi_minus) = projectors(&MeasurementDirection(*n));
        let mut total = 0.0;
        for pi in [pi_plus, pi_minus] {
            let b = kron(&id, &pi);
            let outcome = b.mul(rho.matrix()).mul(&b);
            let prob = outcome.trace().re;
            if prob < 1e-14 {
                continue;
            }
            let conditional_a = partial_trace_b(&outcome).scale(1.0 / prob);
            total += prob
                * von_neumann_entropy2(&conditional_a)
                    .expect("conditional state is a valid density");
        }
        total
    };

    let minimum = minimize_on_sphere(conditional, cfg);
    if !minimum.converged {
        return Err(Error::NonConvergence {
            best: (s_b - s_ab + minimum.value).max(0.0),
            spread: minimum.spread,
            iterations: minimum.iterations,
        });
    }
    Ok((s_b - s_ab + minimum.value).max(0.0))
}

/// Wootters concurrence of an arbitrary two-qubit state.
///
/// Uses the Hermitian form: the eigenvalues of rho rho~ equal those of
/// sqrt(rho) rho~ sqrt(rho), so two Hermitian eigendecompositions
/// suffice. Tiny negative eigenvalues are clamped before square roots.
pub fn concurrence_oracle(rho: &DensityMatrix4) -> f64 {
    let syy = kron(&sigma_y(), &sigma_y());
    let flipped = syy.mul(&rho.matrix().conjugate()).mul(&syy);

    let decomp = eigh4(rho.matrix()).expect("density matrix is Hermitian");
    let mut sqrt_diag = ComplexMatrix4::zero();
    for i in 0..4 {
        sqrt_diag.0[i][i] = C64::new(decomp.values[i].max(0.0).sqrt(), 0.0);
    }
    let sqrt_rho = decomp
        .vectors
        .mul(&sqrt_diag)
        .mul(&decomp.vectors.adjoint());

    let product = sqrt_rho.mul(&flipped).mul(&sqrt_rho);
    let mu = eigenvalues_hermitian(&product).expect("sqrt-conjugated product is Hermitian");
    let roots: Vec<f64> = mu.values().iter().map(|&v| v.max(0.0).sqrt()).collect();
    let max = roots.iter().fold(0.0f64, |acc, v| acc.max(*v));
    let sum: f64 = roots.iter().sum();
    (2.0 * max - sum).max(0.0)
}
