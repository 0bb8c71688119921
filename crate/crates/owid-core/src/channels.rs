//! Phase-flip decoherence applied to both qubits: Kraus realization, the
//! equivalent parameter map (c1, c2) -> (1-p)^2 (c1, c2), deficit and
//! concurrence trajectories, and the two events of interest along them:
//! entanglement sudden death and the deficit/concurrence crossing.

use crate::closed_form::{
    concurrence_x_state, entropy_x_state, owid_x_state, Boundary, ClampedBits,
};
use crate::error::{Error, Result};
use crate::linalg::{kron, sigma_z, ComplexMatrix2, ComplexMatrix4, DensityMatrix4};
use crate::oracle::{min_measured_entropy_x_reduced, OptimizerConfig};
use crate::states::XStateParams;

/// Interval width at which the event bisections stop.
pub const EVENT_TOLERANCE: f64 = 1e-8;

/// Phase flip of strength p on each qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFlipChannel {
    p: f64,
}

impl PhaseFlipChannel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || !p.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "decoherence strength p must lie in [0, 1], got {p}"
            )));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// p = 1 - exp(-gamma t) for phase damping rate gamma and elapsed time t.
pub fn p_of_time(gamma: f64, t: f64) -> Result<f64> {
    if gamma < 0.0 || t < 0.0 || !gamma.is_finite() || !t.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "gamma and t must be nonnegative, got gamma = {gamma}, t = {t}"
        )));
    }
    Ok(1.0 - (-gamma * t).exp())
}

/// The four phase-flip Kraus operators, grouped per side:
/// sqrt(1 - p/2) I and sqrt(p/2) sigma_z on qubit a, then on qubit b.
#[derive(Debug, Clone)]
pub struct PhaseFlipKraus {
    pub side_a: [ComplexMatrix4; 2],
    pub side_b: [ComplexMatrix4; 2],
}

pub fn kraus_phase_flip(p: f64) -> Result<PhaseFlipKraus> {
    let channel = PhaseFlipChannel::new(p)?;
    let keep = (1.0 - channel.p / 2.0).sqrt();
    let flip = (channel.p / 2.0).sqrt();
    let id = ComplexMatrix2::identity();
    Ok(PhaseFlipKraus {
        side_a: [
            kron(&id.scale(keep), &id),
            kron(&sigma_z().scale(flip), &id),
        ],
        side_b: [
            kron(&id, &id.scale(keep)),
            kron(&id, &sigma_z().scale(flip)),
        ],
    })
}

/// Apply Kraus sets in sequence: for each set, rho -> sum_k G_k rho G_k^dag.
/// Each set must satisfy sum_k G_k^dag G_k = I within 1e-10.
pub fn apply_channel_kraus(
    rho: &DensityMatrix4,
    sets: &[&[ComplexMatrix4]],
) -> Result<DensityMatrix4> {
    let mut current = rho.clone();
    for (set_index, set) in sets.iter().enumerate() {
        let mut completeness = ComplexMatrix4::zero();
        for kraus in set.iter() {
            completeness = completeness.add(&kraus.adjoint().mul(kraus));
        }
        let deviation = completeness.max_abs_diff(&ComplexMatrix4::identity());
        if deviation > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "Kraus set #{set_index} is incomplete: max |sum G^dag G - I| = {deviation:e}"
            )));
        }
        let mut out = ComplexMatrix4::zero();
        for kraus in set.iter() {
            out = out.add(&kraus.mul(current.matrix()).mul(&kraus.adjoint()));
        }
        current = DensityMatrix4::new(out)?;
    }
    Ok(current)
}

impl PhaseFlipKraus {
    /// Side a then side b; the two dephasings commute.
    pub fn apply(&self, rho: &DensityMatrix4) -> Result<DensityMatrix4> {
        apply_channel_kraus(rho, &[&self.side_a, &self.side_b])
    }
}

/// The channel in parameter form: (s, c1, c2, c3) -> (s, q c1, q c2, c3)
/// with q = (1-p)^2.
pub fn apply_phase_flip_x(params: &XStateParams, p: f64) -> Result<XStateParams> {
    let channel = PhaseFlipChannel::new(p)?;
    let q = (1.0 - channel.p) * (1.0 - channel.p);
    let [c1, c2, c3] = params.c();
    Ok(XStateParams::new(params.s(), q * c1, q * c2, c3)
        .expect("dephasing keeps a physical state physical"))
}

/// Where a deficit value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    ReducedOracle,
}

#[derive(Debug, Clone, Copy)]
pub struct OwidEval {
    pub deficit: ClampedBits,
    pub provenance: Provenance,
}

/// Deficit of the state after phase flip of strength p.
///
/// Uses the closed form whenever the (closure of the) ordering condition
/// holds for the scaled parameters — the scaling can only shrink |c1|
/// and |c2|, so inputs inside the condition stay inside. Anything else
/// is routed to the reduced sphere minimization.
pub fn owid_under_phase_flip(
    params: &XStateParams,
    p: f64,
    cfg: &OptimizerConfig,
) -> Result<OwidEval> {
    let scaled = apply_phase_flip_x(params, p)?;
    match owid_x_state(&scaled, Boundary::AllowEqualities) {
        Ok(deficit) => Ok(OwidEval {
            deficit,
            provenance: Provenance::ClosedForm,
        }),
        Err(Error::ClosedFormUnsupported(_)) => {
            let minimum = min_measured_entropy_x_reduced(&scaled, cfg);
            Ok(OwidEval {
                deficit: ClampedBits::from_raw(minimum - entropy_x_state(&scaled)),
                provenance: Provenance::ReducedOracle,
            })
        }
        Err(other) => Err(other),
    }
}

/// One sample of the decoherence trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub p: f64,
    pub owid_bits: f64,
    pub concurrence: f64,
}

/// Deficit and concurrence along a sorted grid of channel strengths.
pub fn dynamics_trajectory(
    params: &XStateParams,
    p_grid: &[f64],
    cfg: &OptimizerConfig,
) -> Result<Vec<TrajectoryPoint>> {
    if p_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("p grid must be sorted".into()));
    }
    p_grid
        .iter()
        .map(|&p| {
            let owid = owid_under_phase_flip(params, p, cfg)?;
            let scaled = apply_phase_flip_x(params, p)?;
            Ok(TrajectoryPoint {
                p,
                owid_bits: owid.deficit.bits,
                concurrence: concurrence_x_state(&scaled),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    SuddenDeath,
    Crossing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventReport {
    pub kind: EventKind,
    pub p_star: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventOutcome {
    Found(EventReport),
    NoEvent { reason: String },
}

fn concurrence_at(params: &XStateParams, p: f64) -> f64 {
    let scaled = apply_phase_flip_x(params, p).expect("p in [0, 1]");
    concurrence_x_state(&scaled)
}

/// Smallest p at which the concurrence reaches zero and stays there.
///
/// The concurrence is clamped at zero past the transition, so the search
/// brackets the predicate C(p) > 0 instead of a sign change; a trailing
/// grid confirms nothing re-emerges (local dephasing cannot revive
/// entanglement, but the check is cheap).
pub fn find_sudden_death(params: &XStateParams) -> EventOutcome {
    if concurrence_at(params, 0.0) <= 0.0 {
        return EventOutcome::NoEvent {
            reason: "state is separable already at p = 0".into(),
        };
    }
    if concurrence_at(params, 1.0) > 0.0 {
        return EventOutcome::NoEvent {
            reason: "concurrence stays positive up to p = 1".into(),
        };
    }

    let mut lo = 0.0;
    let mut hi = 1.0;
    loop {
        while hi - lo > EVENT_TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if concurrence_at(params, mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // verification sweep beyond the candidate
        let revived = (1..=64)
            .map(|k| hi + (1.0 - hi) * k as f64 / 64.0)
            .find(|&p| concurrence_at(params, p) > 0.0);
        match revived {
            None => break,
            Some(p) => {
                lo = p;
                hi = 1.0;
            }
        }
    }

    let p_star = 0.5 * (lo + hi);
    EventOutcome::Found(EventReport {
        kind: EventKind::SuddenDeath,
        p_star,
        residual: concurrence_at(params, p_star),
    })
}

/// The p at which concurrence and deficit exchange order, located by
/// bisection on C(p) - OWID(p) between p = 0 and the sudden-death point
/// (or p = 1 when entanglement never dies).
pub fn find_crossing(params: &XStateParams, cfg: &OptimizerConfig) -> EventOutcome {
    let difference = |p: f64| -> Result<f64> {
        let owid = owid_under_phase_flip(params, p, cfg)?;
        Ok(concurrence_at(params, p) - owid.deficit.bits)
    };

    let right_end = match find_sudden_death(params) {
        EventOutcome::Found(report) => report.p_star,
        EventOutcome::NoEvent { .. } => 1.0,
    };

    let f_lo = match difference(0.0) {
        Ok(v) => v,
        Err(e) => {
            return EventOutcome::NoEvent {
                reason: format!("evaluation failed at p = 0: {e}"),
            }
        }
    };
    let f_hi = difference(right_end).expect("valid p");
    if f_lo == 0.0 {
        return EventOutcome::Found(EventReport {
            kind: EventKind::Crossing,
            p_star: 0.0,
            residual: 0.0,
        });
    }
    // touching zero at the right end does not count as a crossing
    if f_lo * f_hi >= 0.0 {
        return EventOutcome::NoEvent {
            reason: format!(
                "no sign change: C - OWID is {f_lo:+.3e} at p = 0 and {f_hi:+.3e} at p = {right_end:.6}"
            ),
        };
    }

    let mut lo = 0.0;
    let mut hi = right_end;
    let mut f_lo = f_lo;
    while hi - lo > EVENT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        let f_mid = difference(mid).expect("valid p");
        if f_mid == 0.0 {
            return EventOutcome::Found(EventReport {
                kind: EventKind::Crossing,
                p_star: mid,
                residual: 0.0,
            });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let p_star = 0.5 * (lo + hi);
    EventOutcome::Found(EventReport {
        kind: EventKind::Crossing,
        p_star,
        residual: difference(p_star).expect("valid p"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::owid_bell_diagonal;
    use crate::states::{bloch_decompose, BellDiagonalParams};
    use approx::assert_abs_diff_eq;

    fn reference_params() -> XStateParams {
        XStateParams::new(0.3, 0.3, -0.4, 0.56).unwrap()
    }

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::new(24, 48, 150, 1e-12).unwrap()
    }

    #[test]
    fn p_of_time_anchors() {
        assert_abs_diff_eq!(p_of_time(2.0, 0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p_of_time(0.0, 5.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            p_of_time(1.0, std::f64::consts::LN_2).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert!(p_of_time(-1.0, 1.0).is_err());
    }

    #[test]
    fn kraus_sets_are_complete_for_any_p() {
        for p in [0.0, 0.3, 0.7, 1.0] {
            let kraus = kraus_phase_flip(p).unwrap();
            for set in [&kraus.side_a, &kraus.side_b] {
                let mut sum = ComplexMatrix4::zero();
                for k in set {
                    sum = sum.add(&k.adjoint().mul(k));
                }
                assert!(sum.max_abs_diff(&ComplexMatrix4::identity()) <= 1e-12);
            }
        }
    }

    #[test]
    fn zero_strength_channel_is_identity() {
        let rho = reference_params().density();
        let out = kraus_phase_flip(0.0).unwrap().apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) <= 1e-12);
    }

    #[test]
    fn unital_channel_fixes_maximally_mixed() {
        let rho = BellDiagonalParams::new(0.0, 0.0, 0.0).unwrap().density();
        let out = kraus_phase_flip(0.37).unwrap().apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) <= 1e-13);
    }

    #[test]
    fn kraus_action_matches_parameter_map() {
        let params = reference_params();
        for p in [0.1, 0.3, 0.9] {
            let via_kraus = kraus_phase_flip(p)
                .unwrap()
                .apply(&params.density())
                .unwrap();
            let via_params = apply_phase_flip_x(&params, p).unwrap().density();
            assert!(via_kraus.matrix().max_abs_diff(via_params.matrix()) <= 1e-10);

            let bloch = bloch_decompose(&via_kraus);
            let q = (1.0 - p) * (1.0 - p);
            assert_abs_diff_eq!(bloch.t[0][0], q * 0.3, epsilon = 1e-12);
            assert_abs_diff_eq!(bloch.t[1][1], q * -0.4, epsilon = 1e-12);
            assert_abs_diff_eq!(bloch.t[2][2], 0.56, epsilon = 1e-12);
            assert_abs_diff_eq!(bloch.s[2], 0.3, epsilon = 1e-12);
        }
    }

    #[test]
    fn parameter_map_extremes() {
        let params = reference_params();
        let unchanged = apply_phase_flip_x(&params, 0.0).unwrap();
        assert_eq!(unchanged, params);
        let fully = apply_phase_flip_x(&params, 1.0).unwrap();
        assert_eq!(fully.c(), [0.0, 0.0, 0.56]);
        assert_eq!(fully.s(), 0.3);
    }

    #[test]
    fn incomplete_kraus_set_is_rejected() {
        let rho = reference_params().density();
        let half = [ComplexMatrix4::identity().scale(0.5)];
        assert!(matches!(
            apply_channel_kraus(&rho, &[&half]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn owid_under_channel_matches_direct_closed_form() {
        let params = reference_params();
        let at_zero = owid_under_phase_flip(&params, 0.0, &cfg()).unwrap();
        let direct = owid_x_state(&params, Boundary::Strict).unwrap();
        assert_abs_diff_eq!(at_zero.deficit.bits, direct.bits, epsilon = 1e-15);
        assert_eq!(at_zero.provenance, Provenance::ClosedForm);

        // fully dephased: diagonal state, zero deficit
        let at_one = owid_under_phase_flip(&params, 1.0, &cfg()).unwrap();
        assert_abs_diff_eq!(at_one.deficit.bits, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ordering_violations_route_to_the_oracle() {
        let params = XStateParams::new(0.3, 0.56, -0.4, 0.3).unwrap();
        let eval = owid_under_phase_flip(&params, 0.2, &cfg()).unwrap();
        assert_eq!(eval.provenance, Provenance::ReducedOracle);
        assert!(eval.deficit.bits >= 0.0);
    }

    #[test]
    fn trajectory_shape_and_consistency() {
        let params = reference_params();
        let grid = [0.0, 0.5, 1.0];
        let points = dynamics_trajectory(&params, &grid, &cfg()).unwrap();
        assert_eq!(points.len(), 3);
        assert_abs_diff_eq!(
            points[0].owid_bits,
            owid_x_state(&params, Boundary::Strict).unwrap().bits,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(points[0].concurrence, 0.18906523060568903, epsilon = 1e-12);
        assert_abs_diff_eq!(points[2].concurrence, 0.0, epsilon = 1e-15);
        // deficit decays monotonically for these parameters
        assert!(points[0].owid_bits >= points[1].owid_bits);
        assert!(points[1].owid_bits >= points[2].owid_bits);

        assert!(dynamics_trajectory(&params, &[0.5, 0.0], &cfg()).is_err());
    }

    #[test]
    fn sudden_death_reference_value() {
        // frozen value 0.321904411722884 from bisection on the closed form
        match find_sudden_death(&reference_params()) {
            EventOutcome::Found(report) => {
                assert!(
                    (report.p_star - 0.321904411722884).abs() <= EVENT_TOLERANCE,
                    "p_star = {}",
                    report.p_star
                );
                assert!(report.residual.abs() <= 1e-7);
            }
            EventOutcome::NoEvent { reason } => panic!("expected an event, got: {reason}"),
        }
    }

    #[test]
    fn separable_input_reports_no_sudden_death() {
        let params = XStateParams::new(0.1, 0.05, -0.1, 0.2).unwrap();
        assert_abs_diff_eq!(concurrence_x_state(&params), 0.0);
        assert!(matches!(
            find_sudden_death(&params),
            EventOutcome::NoEvent { .. }
        ));
    }

    #[test]
    fn bell_state_sudden_death_is_interior() {
        let params = XStateParams::new(0.0, 1.0, -1.0, 1.0).unwrap();
        match find_sudden_death(&params) {
            EventOutcome::Found(report) => {
                assert!(report.p_star > 0.0 && report.p_star < 1.0);
            }
            EventOutcome::NoEvent { reason } => panic!("expected an event, got: {reason}"),
        }
    }

    #[test]
    fn crossing_reference_value() {
        // frozen value 0.23721082520752848 from bisection on the closed forms
        match find_crossing(&reference_params(), &cfg()) {
            EventOutcome::Found(report) => {
                assert!(
                    (report.p_star - 0.23721082520752848).abs() <= EVENT_TOLERANCE,
                    "p_star = {}",
                    report.p_star
                );
                assert!(report.residual.abs() <= 1e-7);
            }
            EventOutcome::NoEvent { reason } => panic!("expected an event, got: {reason}"),
        }
    }

    #[test]
    fn no_crossing_when_deficit_dominates_throughout() {
        // zero concurrence everywhere: C - OWID never changes sign
        let params = XStateParams::new(0.1, 0.05, -0.1, 0.2).unwrap();
        assert!(matches!(
            find_crossing(&params, &cfg()),
            EventOutcome::NoEvent { .. }
        ));
    }

    #[test]
    fn owid_bell_reduction_consistency_under_channel() {
        // s = 0 trajectory point agrees with the Bell-diagonal closed form
        let params = XStateParams::new(0.0, 0.2, -0.3, 0.4).unwrap();
        let eval = owid_under_phase_flip(&params, 0.25, &cfg()).unwrap();
        let q = 0.75 * 0.75;
        let bell = BellDiagonalParams::new(0.2 * q, -0.3 * q, 0.4).unwrap();
        assert_abs_diff_eq!(
            eval.deficit.bits,
            owid_bell_diagonal(&bell).bits,
            epsilon = 1e-13
        );
    }
}
