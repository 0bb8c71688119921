//! Quantum correlation measures for two-qubit states.
//!
//! The library computes the one-way information deficit — the minimum,
//! over projective measurements on one qubit, of the entropy increase
//! S(sum_k Pi_k rho Pi_k) - S(rho) — together with quantum discord and
//! concurrence, for Bell-diagonal states and the four-parameter X family
//!
//! ```text
//! rho = (I(x)I + I(x)s sigma_3 + sum_i c_i sigma_i(x)sigma_i) / 4 .
//! ```
//!
//! Closed forms ([`closed_form`]) are validated against a brute-force
//! measurement minimization ([`oracle`]). On top of those sit phase-flip
//! decoherence dynamics with event detection ([`channels`]) and
//! constant-deficit level-surface extraction ([`geometry`]).

pub mod channels;
pub mod closed_form;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod oracle;
pub mod sample;
pub mod states;

pub use channels::{
    apply_channel_kraus, apply_phase_flip_x, dynamics_trajectory, find_crossing, find_sudden_death,
    kraus_phase_flip, p_of_time, EventKind, EventOutcome, EventReport, OwidEval, PhaseFlipChannel,
    PhaseFlipKraus, Provenance, TrajectoryPoint,
};
pub use closed_form::{
    concurrence_x_state, entropy_bell_diagonal, entropy_x_state, f_phi_theta,
    min_measured_entropy_bell, min_measured_entropy_x, owid_bell_diagonal, owid_x_state, Boundary,
    ClampedBits, MeasurementReduction,
};
pub use error::{Error, Result};
pub use geometry::{
    export_surface, owid_field, sample_level_surface, superlevel_count, ExportFormat,
    FieldEvaluator, LevelSurfaceSample, SurfacePoint, SurfaceSpec,
};
pub use linalg::{
    eigenvalues_hermitian, eigenvalues_hermitian2, kron, partial_trace_a, partial_trace_b, pauli,
    sigma_x, sigma_y, sigma_z, von_neumann_entropy, von_neumann_entropy2, ComplexMatrix2,
    ComplexMatrix4, DensityMatrix4, HermitianSpectrum, C64,
};
pub use oracle::{
    concurrence_oracle, direction_of_unitary, discord_oracle, measured_entropy,
    min_measured_entropy_x_reduced, owid_oracle, post_measurement_state, projectors,
    MeasurementDirection, OptimizerConfig, OwidOracleResult, UnitaryParams,
};
pub use states::{
    bell_diagonal_spectrum, bloch_decompose, ordering_condition, ordering_condition_closure,
    x_state_spectrum, BellDiagonalParams, BlochDecomposition, ConditionReport, StateParams,
    XStateParams,
};
