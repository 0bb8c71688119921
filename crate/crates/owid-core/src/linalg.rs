//! Dense complex Hermitian linear algebra for 2x2 and 4x4 matrices.
//!
//! Everything a two-qubit computation needs and nothing more: Pauli
//! matrices, Kronecker products, a cyclic Jacobi eigensolver and the
//! von Neumann entropy in bits. Matrices are plain fixed-size arrays of
//! `Complex64`; all values are immutable once built.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance: keeps downstream entropy errors below 1e-10.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues of a density matrix may undershoot zero by at most this much.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
/// Jacobi sweeps stop once the off-diagonal norm falls below this.
const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix2(pub(crate) [[C64; 2]; 2]);

/// 4x4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMatrix4(pub(crate) [[C64; 4]; 4]);

macro_rules! impl_matrix_common {
    ($name:ident, $n:expr) => {
        impl $name {
            pub fn new(entries: [[C64; $n]; $n]) -> Result<Self> {
                for row in &entries {
                    for e in row {
                        if !e.re.is_finite() || !e.im.is_finite() {
                            return Err(Error::InvalidArgument(
                                "matrix entries must be finite".into(),
                            ));
                        }
                    }
                }
                Ok(Self(entries))
            }

            pub fn zero() -> Self {
                Self([[ZERO; $n]; $n])
            }

            pub fn identity() -> Self {
                let mut m = Self::zero();
                for i in 0..$n {
                    m.0[i][i] = ONE;
                }
                m
            }

            pub fn entries(&self) -> &[[C64; $n]; $n] {
                &self.0
            }

            pub fn get(&self, row: usize, col: usize) -> C64 {
                self.0[row][col]
            }

            pub fn adjoint(&self) -> Self {
                let mut out = Self::zero();
                for i in 0..$n {
                    for j in 0..$n {
                        out.0[i][j] = self.0[j][i].conj();
                    }
                }
                out
            }

            /// Entrywise complex conjugate (no transpose).
            pub fn conjugate(&self) -> Self {
                let mut out = *self;
                for row in out.0.iter_mut() {
                    for e in row.iter_mut() {
                        *e = e.conj();
                    }
                }
                out
            }

            pub fn trace(&self) -> C64 {
                (0..$n).map(|i| self.0[i][i]).sum()
            }

            pub fn scale(&self, factor: f64) -> Self {
                let mut out = *self;
                for row in out.0.iter_mut() {
                    for e in row.iter_mut() {
                        *e *= factor;
                    }
                }
                out
            }

            pub fn add(&self, other: &Self) -> Self {
                let mut out = *self;
                for i in 0..$n {
                    for j in 0..$n {
                        out.0[i][j] += other.0[i][j];
                    }
                }
                out
            }

            pub fn sub(&self, other: &Self) -> Self {
                let mut out = *self;
                for i in 0..$n {
                    for j in 0..$n {
                        out.0[i][j] -= other.0[i][j];
                    }
                }
                out
            }

            pub fn mul(&self, other: &Self) -> Self {
                let mut out = Self::zero();
                for i in 0..$n {
                    for k in 0..$n {
                        let a = self.0[i][k];
                        if a == ZERO {
                            continue;
                        }
                        for j in 0..$n {
                            out.0[i][j] += a * other.0[k][j];
                        }
                    }
                }
                out
            }

            /// Largest entrywise absolute difference.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                let mut worst: f64 = 0.0;
                for i in 0..$n {
                    for j in 0..$n {
                        worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
                    }
                }
                worst
            }

            /// Max |M - M^dag| entry.
            pub fn hermiticity_deviation(&self) -> f64 {
                let mut worst: f64 = 0.0;
                for i in 0..$n {
                    for j in 0..$n {
                        worst = worst.max((self.0[i][j] - self.0[j][i].conj()).norm());
                    }
                }
                worst
            }

            fn check_hermitian(&self) -> Result<()> {
                let dev = self.hermiticity_deviation();
                if dev > HERMITICITY_TOL {
                    return Err(Error::NotHermitian { max_deviation: dev });
                }
                Ok(())
            }
        }
    };
}

impl_matrix_common!(ComplexMatrix2, 2);
impl_matrix_common!(ComplexMatrix4, 4);

/// sigma_x.
pub fn sigma_x() -> ComplexMatrix2 {
    ComplexMatrix2([[ZERO, ONE], [ONE, ZERO]])
}

/// sigma_y.
pub fn sigma_y() -> ComplexMatrix2 {
    ComplexMatrix2([[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]])
}

/// sigma_z.
pub fn sigma_z() -> ComplexMatrix2 {
    ComplexMatrix2([[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]])
}

/// Pauli matrix by conventional index: 1 -> x, 2 -> y, 3 -> z.
pub fn pauli(index: usize) -> Result<ComplexMatrix2> {
    match index {
        1 => Ok(sigma_x()),
        2 => Ok(sigma_y()),
        3 => Ok(sigma_z()),
        _ => Err(Error::InvalidArgument(format!(
            "Pauli index must be 1, 2 or 3, got {index}"
        ))),
    }
}

/// Kronecker product: qubit a left, qubit b right, basis |00>,|01>,|10>,|11>.
pub fn kron(a: &ComplexMatrix2, b: &ComplexMatrix2) -> ComplexMatrix4 {
    let mut out = ComplexMatrix4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

/// Trace out qubit a, leaving the 2x2 state of qubit b.
pub fn partial_trace_a(m: &ComplexMatrix4) -> ComplexMatrix2 {
    let mut out = ComplexMatrix2::zero();
    for i in 0..2 {
        for j in 0..2 {
            out.0[i][j] = m.0[i][j] + m.0[2 + i][2 + j];
        }
    }
    out
}

/// Trace out qubit b, leaving the 2x2 state of qubit a.
pub fn partial_trace_b(m: &ComplexMatrix4) -> ComplexMatrix2 {
    let mut out = ComplexMatrix2::zero();
    for i in 0..2 {
        for j in 0..2 {
            out.0[i][j] = m.0[2 * i][2 * j] + m.0[2 * i + 1][2 * j + 1];
        }
    }
    out
}

/// Real eigenvalues of a Hermitian matrix, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianSpectrum {
    values: Vec<f64>,
}

impl HermitianSpectrum {
    pub(crate) fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Full eigendecomposition of a Hermitian matrix: `values` ascending and the
/// matching unitary of column eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigendecomposition4 {
    pub values: [f64; 4],
    pub vectors: ComplexMatrix4,
}

/// Eigenvalues of a Hermitian 2x2 or 4x4 matrix, ascending.
pub fn eigenvalues_hermitian2(m: &ComplexMatrix2) -> Result<HermitianSpectrum> {
    m.check_hermitian()?;
    let a = m.0[0][0].re;
    let d = m.0[1][1].re;
    let half_gap = 0.5 * (a - d);
    let disc = (half_gap * half_gap + m.0[0][1].norm_sqr()).sqrt();
    let mid = 0.5 * (a + d);
    Ok(HermitianSpectrum::from_unsorted(vec![
        mid - disc,
        mid + disc,
    ]))
}

/// Eigenvalues of a Hermitian 4x4 matrix, ascending.
pub fn eigenvalues_hermitian(m: &ComplexMatrix4) -> Result<HermitianSpectrum> {
    let decomp = eigh4(m)?;
    Ok(HermitianSpectrum::from_unsorted(decomp.values.to_vec()))
}

/// Cyclic Jacobi eigendecomposition of a Hermitian 4x4 matrix.
///
/// Rotations are applied pairwise until the off-diagonal Frobenius norm drops
/// below 1e-14; this converges quadratically for these tiny dimensions.
pub fn eigh4(m: &ComplexMatrix4) -> Result<Eigendecomposition4> {
    m.check_hermitian()?;

    // Work on the symmetrized copy so the iteration sees an exactly
    // Hermitian matrix even when the input sits at the tolerance edge.
    let mut a = m.add(&m.adjoint()).scale(0.5);
    let mut v = ComplexMatrix4::identity();

    let off_norm = |a: &ComplexMatrix4| -> f64 {
        let mut s = 0.0;
        for p in 0..4 {
            for q in (p + 1)..4 {
                s += 2.0 * a.0[p][q].norm_sqr();
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > JACOBI_OFF_TOL {
        if sweeps >= JACOBI_MAX_SWEEPS {
            return Err(Error::EigensolverFailure {
                off_diagonal: off_norm(&a),
                sweeps,
            });
        }
        sweeps += 1;
        for p in 0..4 {
            for q in (p + 1)..4 {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a.0[i][i].re.partial_cmp(&a.0[j][j].re).expect("finite"));

    let mut values = [0.0; 4];
    let mut vectors = ComplexMatrix4::zero();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = a.0[src][src].re;
        for row in 0..4 {
            vectors.0[row][dst] = v.0[row][src];
        }
    }
    Ok(Eigendecomposition4 { values, vectors })
}

/// One complex Jacobi rotation annihilating the (p, q) entry of `a`,
/// accumulated into `v`.
fn rotate(a: &mut ComplexMatrix4, v: &mut ComplexMatrix4, p: usize, q: usize) {
    let apq = a.0[p][q];
    let r = apq.norm();
    if r <= f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r;
    let tau = (a.0[q][q].re - a.0[p][p].re) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // R differs from the identity only in rows/columns p and q:
    //   R[p][p] = c, R[p][q] = s*phase, R[q][p] = -s*conj(phase), R[q][q] = c.
    let sp = s * phase;
    let spc = s * phase.conj();

    // A <- A R, V <- V R (column update).
    for k in 0..4 {
        let akp = a.0[k][p];
        let akq = a.0[k][q];
        a.0[k][p] = akp * c - akq * spc;
        a.0[k][q] = akp * sp + akq * c;

        let vkp = v.0[k][p];
        let vkq = v.0[k][q];
        v.0[k][p] = vkp * c - vkq * spc;
        v.0[k][q] = vkp * sp + vkq * c;
    }
    // A <- R^dag A (row update).
    for k in 0..4 {
        let apk = a.0[p][k];
        let aqk = a.0[q][k];
        a.0[p][k] = apk * c - aqk * sp;
        a.0[q][k] = apk * spc + aqk * c;
    }
    // Pin the annihilated pair and the real diagonal exactly.
    a.0[p][q] = ZERO;
    a.0[q][p] = ZERO;
    a.0[p][p] = C64::new(a.0[p][p].re, 0.0);
    a.0[q][q] = C64::new(a.0[q][q].re, 0.0);
}

fn xlog2(v: f64) -> f64 {
    if v > 0.0 {
        v * v.log2()
    } else {
        0.0
    }
}

/// Shannon entropy in bits of an eigenvalue list, with 0 log 0 := 0.
///
/// Values in [-1e-10, 0) are clamped to 0; anything more negative signals an
/// unphysical state and is a hard error.
pub fn entropy_from_eigenvalues(values: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for &v in values {
        if v < EIGENVALUE_FLOOR {
            return Err(Error::Unphysical(format!(
                "eigenvalue {v:e} below the physical floor {EIGENVALUE_FLOOR:e}"
            )));
        }
        total -= xlog2(v.max(0.0));
    }
    Ok(total)
}

/// Validated two-qubit density matrix: Hermitian, unit trace, positive
/// semidefinite up to a 1e-10 floor. Carries its spectrum so entropy is free.
#[derive(Debug, Clone)]
pub struct DensityMatrix4 {
    matrix: ComplexMatrix4,
    spectrum: HermitianSpectrum,
}

impl DensityMatrix4 {
    pub fn new(matrix: ComplexMatrix4) -> Result<Self> {
        matrix.check_hermitian()?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > HERMITICITY_TOL || tr.im.abs() > HERMITICITY_TOL {
            return Err(Error::Unphysical(format!(
                "trace must be 1, got {} + {}i",
                tr.re, tr.im
            )));
        }
        let raw = eigenvalues_hermitian(&matrix)?;
        let spectrum = Self::clamp_spectrum(&raw)?;
        Ok(Self { matrix, spectrum })
    }

    /// Build from a matrix whose exact spectrum is already known analytically.
    pub(crate) fn from_validated_parts(matrix: ComplexMatrix4, raw_spectrum: Vec<f64>) -> Self {
        let raw = HermitianSpectrum::from_unsorted(raw_spectrum);
        let spectrum = Self::clamp_spectrum(&raw)
            .expect("caller guarantees eigenvalues above the physical floor");
        Self { matrix, spectrum }
    }

    fn clamp_spectrum(raw: &HermitianSpectrum) -> Result<HermitianSpectrum> {
        let mut values = Vec::with_capacity(raw.len());
        for &v in raw.values() {
            if v < EIGENVALUE_FLOOR {
                return Err(Error::Unphysical(format!(
                    "eigenvalue {v:e} below the physical floor {EIGENVALUE_FLOOR:e}"
                )));
            }
            values.push(v.max(0.0));
        }
        Ok(HermitianSpectrum::from_unsorted(values))
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.matrix
    }

    pub fn spectrum(&self) -> &HermitianSpectrum {
        &self.spectrum
    }
}

/// Von Neumann entropy in bits of a two-qubit state; lies in [0, 2].
pub fn von_neumann_entropy(rho: &DensityMatrix4) -> f64 {
    entropy_from_eigenvalues(rho.spectrum().values())
        .expect("density matrix spectrum is validated at construction")
}

/// Von Neumann entropy in bits of a single-qubit density matrix; lies in [0, 1].
pub fn von_neumann_entropy2(rho: &ComplexMatrix2) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > HERMITICITY_TOL || tr.im.abs() > HERMITICITY_TOL {
        return Err(Error::Unphysical(format!(
            "trace must be 1, got {} + {}i",
            tr.re, tr.im
        )));
    }
    let spectrum = eigenvalues_hermitian2(rho)?;
    entropy_from_eigenvalues(spectrum.values())
}
