//! Closed-form correlation measures for both state families: entropies,
//! the measured-entropy surface f(phi, theta), its minimum, the one-way
//! information deficit, and the X-state concurrence.
//!
//! All logarithms are base 2 and 0 log 0 := 0; log arguments in
//! [-1e-12, 0) count as rounding noise and clamp to zero, anything more
//! negative is a domain error.

use crate::error::{Error, Result};
use crate::states::{BellDiagonalParams, XStateParams};

/// Log arguments may undershoot zero by at most this much.
pub const LOG_ARG_TOL: f64 = 1e-12;

fn xlog2(v: f64) -> f64 {
    if v > 0.0 {
        v * v.log2()
    } else {
        0.0
    }
}

/// A nonnegative quantity in bits, clamped at zero, with the raw value
/// kept for diagnostics (it may sit a few ulps below zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClampedBits {
    pub bits: f64,
    pub raw: f64,
}

impl ClampedBits {
    pub(crate) fn from_raw(raw: f64) -> Self {
        Self {
            bits: raw.max(0.0),
            raw,
        }
    }
}

/// The pair (phi, theta) a one-qubit von Neumann measurement reduces to:
/// phi = s z3 and theta = sqrt(|c1 z1|^2 + |c2 z2|^2 + |c3 z3|^2) for a
/// unit Bloch direction z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementReduction {
    phi: f64,
    theta: f64,
}

impl MeasurementReduction {
    pub fn new(phi: f64, theta: f64) -> Result<Self> {
        if !phi.is_finite() || phi.abs() >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "phi must lie in (-1, 1), got {phi}"
            )));
        }
        if !theta.is_finite() || !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "theta must lie in [0, 1], got {theta}"
            )));
        }
        if 1.0 - phi.abs() - theta <= -LOG_ARG_TOL {
            return Err(Error::InvalidArgument(format!(
                "1 - |phi| - theta = {} is negative beyond tolerance",
                1.0 - phi.abs() - theta
            )));
        }
        Ok(Self { phi, theta })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The post-measurement entropy f(phi, theta).
    pub fn entropy(&self) -> f64 {
        f_raw(self.phi, self.theta)
    }
}

/// f with all four log arguments clamped at zero. Callers guarantee the
/// arguments are nonnegative up to rounding.
pub(crate) fn f_raw(phi: f64, theta: f64) -> f64 {
    2.0 - 0.25
        * (xlog2((1.0 + phi - theta).max(0.0))
            + xlog2((1.0 + phi + theta).max(0.0))
            + xlog2((1.0 - phi - theta).max(0.0))
            + xlog2((1.0 - phi + theta).max(0.0)))
}

/// Entropy of the post-measurement state as a function of the reduced
/// coordinates: f(phi, theta) = 2 - (1/4) sum (1 +- phi +- theta) log2(...).
///
/// Symmetric under phi -> -phi and theta -> -theta and monotonically
/// decreasing in both |phi| and theta.
pub fn f_phi_theta(phi: f64, theta: f64) -> Result<f64> {
    for arg in [
        1.0 + phi - theta,
        1.0 + phi + theta,
        1.0 - phi - theta,
        1.0 - phi + theta,
    ] {
        if arg < -LOG_ARG_TOL {
            return Err(Error::InvalidArgument(format!(
                "log argument {arg:e} is negative beyond tolerance"
            )));
        }
    }
    Ok(f_raw(phi, theta))
}

/// Entropy of a Bell-diagonal state in bits,
/// S = 2 - (1/4) sum_{signs} (1 -+ c1 -+ c2 -+ c3) log2(...).
pub fn entropy_bell_diagonal(p: &BellDiagonalParams) -> f64 {
    let [c1, c2, c3] = p.c();
    2.0 - 0.25
        * (xlog2((1.0 - c1 - c2 - c3).max(0.0))
            + xlog2((1.0 - c1 + c2 + c3).max(0.0))
            + xlog2((1.0 + c1 - c2 + c3).max(0.0))
            + xlog2((1.0 + c1 + c2 - c3).max(0.0)))
}

/// Minimum over one-qubit von Neumann measurements of the measured
/// entropy of a Bell-diagonal state; attained at theta = max |c_i|.
pub fn min_measured_entropy_bell(p: &BellDiagonalParams) -> f64 {
    let c = p.c().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    f_raw(0.0, c)
}

/// One-way information deficit of a Bell-diagonal state (closed form).
pub fn owid_bell_diagonal(p: &BellDiagonalParams) -> ClampedBits {
    ClampedBits::from_raw(min_measured_entropy_bell(p) - entropy_bell_diagonal(p))
}

/// Entropy of an X-family state in bits, from its closed-form spectrum.
pub fn entropy_x_state(p: &XStateParams) -> f64 {
    let [c1, c2, c3] = p.c();
    let s = p.s();
    let root_plus = (s * s + (c1 + c2) * (c1 + c2)).sqrt();
    let root_minus = (s * s + (c1 - c2) * (c1 - c2)).sqrt();
    2.0 - 0.25
        * (xlog2((1.0 - c3 + root_plus).max(0.0))
            + xlog2((1.0 - c3 - root_plus).max(0.0))
            + xlog2((1.0 + c3 + root_minus).max(0.0))
            + xlog2((1.0 + c3 - root_minus).max(0.0)))
}

/// Whether equality cases of the ordering condition are admitted.
///
/// The closed-form minimum is derived under strict inequalities; its
/// value extends continuously to the boundary (s = 0, equal magnitudes),
/// which `AllowEqualities` opts into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Strict,
    AllowEqualities,
}

fn check_closed_form(p: &XStateParams, boundary: Boundary) -> Result<()> {
    let report = match boundary {
        Boundary::Strict => p.closed_form_condition(),
        Boundary::AllowEqualities => p.closed_form_condition_closure(),
    };
    if report.holds {
        Ok(())
    } else {
        Err(Error::ClosedFormUnsupported(report.violations.join("; ")))
    }
}

/// Minimum measured entropy of an X-family state under the ordering
/// condition: the minimum of f sits at the corner (|s|, |c3|).
pub fn min_measured_entropy_x(p: &XStateParams, boundary: Boundary) -> Result<f64> {
    check_closed_form(p, boundary)?;
    Ok(f_raw(p.s().abs(), p.c()[2].abs()))
}

/// One-way information deficit of an X-family state (closed form),
/// valid under the ordering condition.
pub fn owid_x_state(p: &XStateParams, boundary: Boundary) -> Result<ClampedBits> {
    let min_entropy = min_measured_entropy_x(p, boundary)?;
    Ok(ClampedBits::from_raw(min_entropy - entropy_x_state(p)))
}

/// Concurrence of an X-family state from the closed-form square roots of
/// the spin-flip eigenvalues.
pub fn concurrence_x_state(p: &XStateParams) -> f64 {
    let [c1, c2, c3] = p.c();
    let s = p.s();
    let root_a = (((1.0 + c3) * (1.0 + c3) - s * s).max(0.0)).sqrt();
    let root_b = (((1.0 - c3) * (1.0 - c3) - s * s).max(0.0)).sqrt();
    let roots = [
        0.25 * (c1 - c2 - root_a).abs(),
        0.25 * (c1 - c2 + root_a).abs(),
        0.25 * (c1 + c2 - root_b).abs(),
        0.25 * (c1 + c2 + root_b).abs(),
    ];
    let max = roots.iter().fold(0.0f64, |acc, v| acc.max(*v));
    let sum: f64 = roots.iter().sum();
    (2.0 * max - sum).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const REF_S: f64 = 0.3;
    const REF_C: [f64; 3] = [0.3, -0.4, 0.56];

    fn reference_params() -> XStateParams {
        XStateParams::new(REF_S, REF_C[0], REF_C[1], REF_C[2]).unwrap()
    }

    #[test]
    fn f_anchors() {
        assert_abs_diff_eq!(f_phi_theta(0.0, 0.0).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f_phi_theta(0.0, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        // frozen value, cross-checked against the measurement oracle
        assert_abs_diff_eq!(
            f_phi_theta(0.3, 0.56).unwrap(),
            1.6582978717936445,
            epsilon = 1e-13
        );
    }

    #[test]
    fn f_rejects_arguments_outside_tolerance() {
        assert!(f_phi_theta(0.9, 0.5).is_err());
        // exactly at the tolerance edge still fine
        assert!(f_phi_theta(0.5, 0.5).is_ok());
    }

    #[test]
    fn measurement_reduction_validation() {
        assert!(MeasurementReduction::new(0.3, 0.56).is_ok());
        assert!(MeasurementReduction::new(1.0, 0.0).is_err());
        assert!(MeasurementReduction::new(0.0, 1.2).is_err());
        assert!(MeasurementReduction::new(0.6, 0.6).is_err());
        let m = MeasurementReduction::new(0.3, 0.56).unwrap();
        assert_abs_diff_eq!(m.entropy(), 1.6582978717936445, epsilon = 1e-13);
    }

    #[test]
    fn bell_entropy_anchors() {
        let mixed = BellDiagonalParams::new(0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(entropy_bell_diagonal(&mixed), 2.0, epsilon = 1e-15);
        let bell = BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(entropy_bell_diagonal(&bell), 0.0, epsilon = 1e-15);
        // frozen value, cross-checked against the eigensolver route
        let p = BellDiagonalParams::new(0.5, 0.2, 0.1).unwrap();
        assert_abs_diff_eq!(
            entropy_bell_diagonal(&p),
            1.739353872167201,
            epsilon = 1e-13
        );
    }

    #[test]
    fn min_measured_entropy_bell_anchors() {
        let mixed = BellDiagonalParams::new(0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(min_measured_entropy_bell(&mixed), 2.0, epsilon = 1e-15);
        let bell = BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(min_measured_entropy_bell(&bell), 1.0, epsilon = 1e-15);
        let p = BellDiagonalParams::new(0.5, 0.2, 0.1).unwrap();
        assert_abs_diff_eq!(
            min_measured_entropy_bell(&p),
            f_phi_theta(0.0, 0.5).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn owid_bell_anchors() {
        let mixed = BellDiagonalParams::new(0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(owid_bell_diagonal(&mixed).bits, 0.0, epsilon = 1e-15);
        let bell = BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(owid_bell_diagonal(&bell).bits, 1.0, epsilon = 1e-15);
        // frozen value from the brute-force oracle
        let p = BellDiagonalParams::new(0.3, -0.4, 0.56).unwrap();
        assert_abs_diff_eq!(
            owid_bell_diagonal(&p).bits,
            0.12570350351112025,
            epsilon = 1e-12
        );
    }

    #[test]
    fn x_entropy_matches_bell_reduction_at_zero_s() {
        let x = XStateParams::new(0.0, 0.3, -0.4, 0.56).unwrap();
        let b = BellDiagonalParams::new(0.3, -0.4, 0.56).unwrap();
        assert_abs_diff_eq!(
            entropy_x_state(&x),
            entropy_bell_diagonal(&b),
            epsilon = 1e-14
        );
    }

    #[test]
    fn x_entropy_reference_value() {
        // frozen value, equal to the numerical entropy of the density matrix
        assert_abs_diff_eq!(
            entropy_x_state(&reference_params()),
            1.529066814097181,
            epsilon = 1e-13
        );
    }

    #[test]
    fn x_entropy_is_continuous_onto_the_rank_deficient_boundary() {
        // |s| = 1 - |c3| with c1 = c2 = 0 puts one eigenvalue exactly at 0
        let p = XStateParams::new(0.44, 0.0, 0.0, 0.56).unwrap();
        assert_abs_diff_eq!(p.spectrum().min(), 0.0, epsilon = 1e-15);
        let three_term: f64 = p
            .spectrum()
            .values()
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|&v| -v * v.log2())
            .sum();
        assert_abs_diff_eq!(entropy_x_state(&p), three_term, epsilon = 1e-13);

        // approaching the boundary from inside converges to the same value
        let near = XStateParams::new(0.44 - 1e-9, 0.0, 0.0, 0.56).unwrap();
        assert_abs_diff_eq!(entropy_x_state(&near), three_term, epsilon = 1e-7);
    }

    #[test]
    fn min_measured_entropy_x_is_corner_value() {
        let p = reference_params();
        assert_abs_diff_eq!(
            min_measured_entropy_x(&p, Boundary::Strict).unwrap(),
            f_phi_theta(0.3, 0.56).unwrap(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn min_measured_entropy_x_refuses_violations() {
        let p = XStateParams::new(0.3, 0.56, -0.4, 0.3).unwrap();
        assert!(matches!(
            min_measured_entropy_x(&p, Boundary::Strict),
            Err(Error::ClosedFormUnsupported(_))
        ));
        // still refused by the closure: ordering is violated, not just strictness
        assert!(min_measured_entropy_x(&p, Boundary::AllowEqualities).is_err());
    }

    #[test]
    fn zero_s_boundary_reduces_to_bell_formula() {
        let x = XStateParams::new(0.0, 0.2, -0.3, 0.4).unwrap();
        assert!(owid_x_state(&x, Boundary::Strict).is_err());
        let owid = owid_x_state(&x, Boundary::AllowEqualities).unwrap();
        let b = BellDiagonalParams::new(0.2, -0.3, 0.4).unwrap();
        assert_abs_diff_eq!(owid.bits, owid_bell_diagonal(&b).bits, epsilon = 1e-14);
    }

    #[test]
    fn owid_x_reference_value() {
        // frozen value from the brute-force oracle
        let owid = owid_x_state(&reference_params(), Boundary::Strict).unwrap();
        assert_abs_diff_eq!(owid.bits, 0.12923105769646348, epsilon = 1e-12);
    }

    #[test]
    fn concurrence_anchors() {
        let mixed = XStateParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(concurrence_x_state(&mixed), 0.0, epsilon = 1e-15);
        let bell = XStateParams::new(0.0, 1.0, -1.0, 1.0).unwrap();
        assert_abs_diff_eq!(concurrence_x_state(&bell), 1.0, epsilon = 1e-15);
        // frozen value, cross-checked against the spin-flip oracle
        assert_abs_diff_eq!(
            concurrence_x_state(&reference_params()),
            0.18906523060568903,
            epsilon = 1e-12
        );
    }
}
