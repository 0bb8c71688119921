//! The two state families: Bell-diagonal states (c1, c2, c3) and the
//! four-parameter X family (s, c1, c2, c3) with the Bloch vector on
//! qubit b along z. Constructors validate physicality; spectra come in
//! closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    kron, sigma_x, sigma_y, sigma_z, ComplexMatrix2, ComplexMatrix4, DensityMatrix4,
    HermitianSpectrum, C64, EIGENVALUE_FLOOR,
};

/// Closed-form spectrum of a Bell-diagonal state, for arbitrary
/// (possibly unphysical) coefficients, ascending.
pub fn bell_diagonal_spectrum(c: [f64; 3]) -> HermitianSpectrum {
    let [c1, c2, c3] = c;
    HermitianSpectrum::from_unsorted(vec![
        0.25 * (1.0 - c1 - c2 - c3),
        0.25 * (1.0 - c1 + c2 + c3),
        0.25 * (1.0 + c1 - c2 + c3),
        0.25 * (1.0 + c1 + c2 - c3),
    ])
}

/// Closed-form spectrum of the X family for arbitrary coefficients, ascending.
pub fn x_state_spectrum(s: f64, c: [f64; 3]) -> HermitianSpectrum {
    let [c1, c2, c3] = c;
    let root_plus = (s * s + (c1 + c2) * (c1 + c2)).sqrt();
    let root_minus = (s * s + (c1 - c2) * (c1 - c2)).sqrt();
    HermitianSpectrum::from_unsorted(vec![
        0.25 * (1.0 - c3 + root_plus),
        0.25 * (1.0 - c3 - root_plus),
        0.25 * (1.0 + c3 + root_minus),
        0.25 * (1.0 + c3 - root_minus),
    ])
}

fn check_spectrum_physical(spectrum: &HermitianSpectrum) -> Result<()> {
    for (i, &v) in spectrum.values().iter().enumerate() {
        if v < EIGENVALUE_FLOOR {
            return Err(Error::Unphysical(format!(
                "spectrum value #{i} = {v:.6e} is negative"
            )));
        }
    }
    Ok(())
}

/// Correlation coefficients (c1, c2, c3) of a Bell-diagonal state.
///
/// Valid parameters live in the physicality tetrahedron where all four
/// closed-form eigenvalues are nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalParams {
    c: [f64; 3],
}

impl BellDiagonalParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        for (name, v) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            if !(-1.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in [-1, 1], got {v}"
                )));
            }
        }
        let params = Self { c: [c1, c2, c3] };
        check_spectrum_physical(&params.spectrum())?;
        Ok(params)
    }

    pub fn c(&self) -> [f64; 3] {
        self.c
    }

    pub fn spectrum(&self) -> HermitianSpectrum {
        bell_diagonal_spectrum(self.c)
    }

    /// rho = (I(x)I + sum_i c_i sigma_i(x)sigma_i) / 4.
    pub fn density(&self) -> DensityMatrix4 {
        let mut m = ComplexMatrix4::identity();
        for (i, sigma) in [sigma_x(), sigma_y(), sigma_z()].iter().enumerate() {
            m = m.add(&kron(sigma, sigma).scale(self.c[i]));
        }
        DensityMatrix4::from_validated_parts(m.scale(0.25), self.spectrum().values().to_vec())
    }
}

/// Parameters (s, c1, c2, c3) of the X family: Bloch vector (0, 0, s) on
/// qubit b, diagonal correlation matrix diag(c1, c2, c3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateParams {
    s: f64,
    c: [f64; 3],
}

/// Outcome of the ordering-condition check `|c1| < |c2| < |c3|`,
/// `0 < |s| < 1 - |c3|` that underwrites the closed-form minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub holds: bool,
    pub violations: Vec<String>,
}

impl XStateParams {
    pub fn new(s: f64, c1: f64, c2: f64, c3: f64) -> Result<Self> {
        if !s.is_finite() || s <= -1.0 || s >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "s must lie in (-1, 1), got {s}"
            )));
        }
        for (name, v) in [("c1", c1), ("c2", c2), ("c3", c3)] {
            if !(-1.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in [-1, 1], got {v}"
                )));
            }
        }
        let params = Self { s, c: [c1, c2, c3] };
        check_spectrum_physical(&params.spectrum())?;
        Ok(params)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn c(&self) -> [f64; 3] {
        self.c
    }

    pub fn spectrum(&self) -> HermitianSpectrum {
        x_state_spectrum(self.s, self.c)
    }

    /// The explicit X-shaped matrix: diagonal
    /// (1+s+c3, 1-s-c3, 1+s-c3, 1-s+c3)/4 and anti-diagonal
    /// (c1-c2, c1+c2, c1+c2, c1-c2)/4.
    pub fn density(&self) -> DensityMatrix4 {
        let [c1, c2, c3] = self.c;
        let s = self.s;
        let mut m = ComplexMatrix4::zero();
        let diag = [1.0 + s + c3, 1.0 - s - c3, 1.0 + s - c3, 1.0 - s + c3];
        let anti = [c1 - c2, c1 + c2, c1 + c2, c1 - c2];
        for i in 0..4 {
            m.0[i][i] = C64::new(0.25 * diag[i], 0.0);
            m.0[i][3 - i] = C64::new(0.25 * anti[i], 0.0);
        }
        DensityMatrix4::from_validated_parts(m, self.spectrum().values().to_vec())
    }

    /// Strict ordering condition; when it holds, the minimum measured
    /// entropy sits at the (|s|, |c3|) corner and the closed-form deficit
    /// applies.
    pub fn closed_form_condition(&self) -> ConditionReport {
        ordering_condition(self.s, self.c)
    }

    /// Closure of the ordering condition: equalities and s = 0 allowed.
    /// The closed forms extend there continuously.
    pub fn closed_form_condition_closure(&self) -> ConditionReport {
        ordering_condition_closure(self.s, self.c)
    }
}

/// The strict ordering condition |c1| < |c2| < |c3|, 0 < |s| < 1 - |c3|
/// on raw coefficients (no physicality assumed).
///
/// Written with negated strict comparisons so NaN coefficients count as
/// violations.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn ordering_condition(s: f64, c: [f64; 3]) -> ConditionReport {
    let [c1, c2, c3] = c;
    let mut violations = Vec::new();
    if !(c1.abs() < c2.abs()) {
        violations.push(format!("|c1| = {} is not < |c2| = {}", c1.abs(), c2.abs()));
    }
    if !(c2.abs() < c3.abs()) {
        violations.push(format!("|c2| = {} is not < |c3| = {}", c2.abs(), c3.abs()));
    }
    if !(s.abs() > 0.0) {
        violations.push("|s| = 0".to_string());
    }
    if !(s.abs() < 1.0 - c3.abs()) {
        violations.push(format!(
            "|s| = {} is not < 1 - |c3| = {}",
            s.abs(),
            1.0 - c3.abs()
        ));
    }
    ConditionReport {
        holds: violations.is_empty(),
        violations,
    }
}

/// Closure of [`ordering_condition`]: equalities and s = 0 allowed.
pub fn ordering_condition_closure(s: f64, c: [f64; 3]) -> ConditionReport {
    let [c1, c2, c3] = c;
    let mut violations = Vec::new();
    if c1.abs() > c2.abs() {
        violations.push(format!("|c1| = {} exceeds |c2| = {}", c1.abs(), c2.abs()));
    }
    if c2.abs() > c3.abs() {
        violations.push(format!("|c2| = {} exceeds |c3| = {}", c2.abs(), c3.abs()));
    }
    if s.abs() > 1.0 - c3.abs() {
        violations.push(format!(
            "|s| = {} exceeds 1 - |c3| = {}",
            s.abs(),
            1.0 - c3.abs()
        ));
    }
    ConditionReport {
        holds: violations.is_empty(),
        violations,
    }
}

/// Bloch picture of a two-qubit state: local vectors r (qubit a) and
/// s (qubit b) plus the 3x3 correlation matrix T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochDecomposition {
    pub r: [f64; 3],
    pub s: [f64; 3],
    pub t: [[f64; 3]; 3],
}

/// r_i = tr(rho sigma_i (x) I), s_j = tr(rho I (x) sigma_j),
/// T_ij = tr(rho sigma_i (x) sigma_j).
pub fn bloch_decompose(rho: &DensityMatrix4) -> BlochDecomposition {
    let sigmas = [sigma_x(), sigma_y(), sigma_z()];
    let id = ComplexMatrix2::identity();
    let m = rho.matrix();
    let mut out = BlochDecomposition {
        r: [0.0; 3],
        s: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for i in 0..3 {
        out.r[i] = m.mul(&kron(&sigmas[i], &id)).trace().re;
        out.s[i] = m.mul(&kron(&id, &sigmas[i])).trace().re;
        for j in 0..3 {
            out.t[i][j] = m.mul(&kron(&sigmas[i], &sigmas[j])).trace().re;
        }
    }
    out
}

impl BlochDecomposition {
    /// rho = (I(x)I + r.sigma(x)I + I(x)s.sigma + sum T_ij sigma_i(x)sigma_j) / 4.
    pub fn reconstruct(&self) -> ComplexMatrix4 {
        let sigmas = [sigma_x(), sigma_y(), sigma_z()];
        let id = ComplexMatrix2::identity();
        let mut m = ComplexMatrix4::identity();
        for i in 0..3 {
            m = m.add(&kron(&sigmas[i], &id).scale(self.r[i]));
            m = m.add(&kron(&id, &sigmas[i]).scale(self.s[i]));
            for j in 0..3 {
                m = m.add(&kron(&sigmas[i], &sigmas[j]).scale(self.t[i][j]));
            }
        }
        m.scale(0.25)
    }
}

/// Wire format for state parameters:
/// `{"family": "bell" | "x", "s": number?, "c": [c1, c2, c3]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateParams {
    Bell { c: [f64; 3] },
    X { s: f64, c: [f64; 3] },
}

impl StateParams {
    /// Validate and view as a member of the X family (a Bell-diagonal
    /// state is the s = 0 slice).
    pub fn to_x_params(&self) -> Result<XStateParams> {
        match *self {
            StateParams::Bell { c } => XStateParams::new(0.0, c[0], c[1], c[2]),
            StateParams::X { s, c } => XStateParams::new(s, c[0], c[1], c[2]),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            StateParams::Bell { .. } => "bell",
            StateParams::X { .. } => "x",
        }
    }
}
