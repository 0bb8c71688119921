//! Rejection samplers over the physical parameter regions, plus random
//! density matrices and unitaries. Used by the validation suites and
//! benchmarks; pass a seeded generator for reproducible draws.

use rand::Rng;

use crate::linalg::{ComplexMatrix4, DensityMatrix4, C64};
use crate::oracle::UnitaryParams;
use crate::states::{BellDiagonalParams, XStateParams};

/// Uniform draw from the Bell-diagonal physicality tetrahedron.
pub fn bell_diagonal<R: Rng>(rng: &mut R) -> BellDiagonalParams {
    loop {
        let c1 = rng.random_range(-1.0..1.0);
        let c2 = rng.random_range(-1.0..1.0);
        let c3 = rng.random_range(-1.0..1.0);
        if let Ok(p) = BellDiagonalParams::new(c1, c2, c3) {
            return p;
        }
    }
}

/// Uniform draw from the physical region of the X family.
pub fn x_state<R: Rng>(rng: &mut R) -> XStateParams {
    loop {
        let s = rng.random_range(-1.0..1.0);
        let c1 = rng.random_range(-1.0..1.0);
        let c2 = rng.random_range(-1.0..1.0);
        let c3 = rng.random_range(-1.0..1.0);
        if let Ok(p) = XStateParams::new(s, c1, c2, c3) {
            return p;
        }
    }
}

/// Physical X state satisfying the strict ordering condition
/// |c1| < |c2| < |c3|, 0 < |s| < 1 - |c3|.
pub fn x_state_ordered<R: Rng>(rng: &mut R) -> XStateParams {
    loop {
        let c3: f64 = rng.random_range(-1.0..1.0);
        if c3 == 0.0 {
            continue;
        }
        let c2 = rng.random_range(-c3.abs()..c3.abs());
        let c1 = if c2 == 0.0 {
            continue;
        } else {
            rng.random_range(-c2.abs()..c2.abs())
        };
        let margin = 1.0 - c3.abs();
        let s = rng.random_range(-margin..margin);
        let Ok(p) = XStateParams::new(s, c1, c2, c3) else {
            continue;
        };
        if p.closed_form_condition().holds {
            return p;
        }
    }
}

/// Random mixed state: G G^dag normalized, G with standard complex
/// Gaussian entries.
pub fn density_matrix<R: Rng>(rng: &mut R) -> DensityMatrix4 {
    let mut g = ComplexMatrix4::zero();
    for i in 0..4 {
        for j in 0..4 {
            g.0[i][j] = C64::new(normal(rng), normal(rng));
        }
    }
    let gg = g.mul(&g.adjoint());
    let trace = gg.trace().re;
    DensityMatrix4::new(gg.scale(1.0 / trace)).expect("Gram matrix is a valid state")
}

/// Haar-random (t, y) on the unit 3-sphere.
pub fn unitary_params<R: Rng>(rng: &mut R) -> UnitaryParams {
    loop {
        let raw: [f64; 4] = std::array::from_fn(|_| normal(rng));
        let norm = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        return UnitaryParams::new(raw[0] / norm, [raw[1] / norm, raw[2] / norm, raw[3] / norm])
            .expect("normalized by construction");
    }
}

// Box-Muller; avoids pulling in a distributions crate for one Gaussian.
fn normal<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}
