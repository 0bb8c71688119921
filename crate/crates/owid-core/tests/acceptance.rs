//! Acceptance suite. Each test covers one release criterion at its stated
//! tolerance and prints a single PASS line (run with `--nocapture` to see
//! them); a failing criterion panics with the offending values.

use std::time::Instant;

use rayon::prelude::*;

use owid_core::channels::{apply_phase_flip_x, kraus_phase_flip};
use owid_core::channels::{find_crossing, find_sudden_death, EventOutcome};
use owid_core::closed_form::{
    concurrence_x_state, f_phi_theta, min_measured_entropy_x, owid_bell_diagonal, owid_x_state,
    Boundary,
};
use owid_core::geometry::{superlevel_count, FieldEvaluator, SurfaceSpec};
use owid_core::linalg::{von_neumann_entropy, ComplexMatrix4, DensityMatrix4};
use owid_core::oracle::{
    concurrence_oracle, discord_oracle, min_measured_entropy_x_reduced, owid_oracle,
    OptimizerConfig,
};
use owid_core::sample;
use owid_core::states::{BellDiagonalParams, XStateParams};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const REFERENCE: (f64, [f64; 3]) = (0.3, [0.3, -0.4, 0.56]);

fn reference_params() -> XStateParams {
    XStateParams::new(REFERENCE.0, REFERENCE.1[0], REFERENCE.1[1], REFERENCE.1[2]).unwrap()
}

fn pass(criterion: &str, detail: String) {
    println!("acceptance {criterion}: PASS ({detail})");
}

fn fail(criterion: &str, detail: String) -> ! {
    println!("acceptance {criterion}: FAIL ({detail})");
    panic!("acceptance {criterion} failed: {detail}");
}

#[test]
fn criterion_01_bell_diagonal_closed_form_matches_oracle() {
    let name = "1 (Bell-diagonal closed form vs oracle)";
    let started = Instant::now();
    let cfg = OptimizerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let samples: Vec<BellDiagonalParams> =
        (0..100).map(|_| sample::bell_diagonal(&mut rng)).collect();

    let worst = samples
        .par_iter()
        .map(|p| {
            let closed = owid_bell_diagonal(p).bits;
            let oracle = owid_oracle(&p.density(), &cfg)
                .expect("oracle converges")
                .deficit
                .bits;
            (closed - oracle).abs()
        })
        .reduce(|| 0.0, f64::max);

    let elapsed = started.elapsed().as_secs_f64();
    if worst > 1e-6 {
        fail(name, format!("max |closed - oracle| = {worst:e} > 1e-6"));
    }
    if elapsed >= 60.0 {
        fail(name, format!("runtime {elapsed:.1} s exceeds 60 s"));
    }
    pass(
        name,
        format!("100 states, max delta {worst:.2e}, {elapsed:.1} s"),
    );
}

#[test]
fn criterion_02_x_state_closed_form_matches_oracle() {
    let name = "2 (X-state closed form vs oracle)";
    let cfg = OptimizerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let samples: Vec<XStateParams> = (0..100)
        .map(|_| sample::x_state_ordered(&mut rng))
        .collect();

    let worst = samples
        .par_iter()
        .map(|p| {
            let closed = owid_x_state(p, Boundary::Strict)
                .expect("ordering holds")
                .bits;
            let oracle = owid_oracle(&p.density(), &cfg)
                .expect("oracle converges")
                .deficit
                .bits;
            (closed - oracle).abs()
        })
        .reduce(|| 0.0, f64::max);

    if worst > 1e-6 {
        fail(name, format!("max |closed - oracle| = {worst:e} > 1e-6"));
    }
    pass(name, format!("100 states, max delta {worst:.2e}"));
}

#[test]
fn criterion_03_reference_event_values() {
    let name = "3 (decoherence event values)";
    let started = Instant::now();
    let params = reference_params();
    let cfg = OptimizerConfig::default();

    let sudden_death = match find_sudden_death(&params) {
        EventOutcome::Found(report) => report,
        EventOutcome::NoEvent { reason } => fail(name, format!("no sudden death: {reason}")),
    };
    let crossing = match find_crossing(&params, &cfg) {
        EventOutcome::Found(report) => report,
        EventOutcome::NoEvent { reason } => fail(name, format!("no crossing: {reason}")),
    };
    let elapsed = started.elapsed().as_secs_f64();

    if (sudden_death.p_star - 0.321904).abs() > 5e-6 {
        fail(
            name,
            format!("sudden death at {} != 0.321904", sudden_death.p_star),
        );
    }
    if (crossing.p_star - 0.237211).abs() > 5e-6 {
        fail(name, format!("crossing at {} != 0.237211", crossing.p_star));
    }
    if sudden_death.residual.abs() > 1e-7 || crossing.residual.abs() > 1e-7 {
        fail(
            name,
            format!(
                "residuals too large: {:e}, {:e}",
                sudden_death.residual, crossing.residual
            ),
        );
    }
    if elapsed >= 5.0 {
        fail(name, format!("runtime {elapsed:.2} s exceeds 5 s"));
    }
    pass(
        name,
        format!(
            "sudden death {:.6}, crossing {:.6}, residuals {:.1e}/{:.1e}, {:.2} s",
            sudden_death.p_star, crossing.p_star, sudden_death.residual, crossing.residual, elapsed
        ),
    );
}

#[test]
fn criterion_04_discord_coincides_for_bell_diagonal() {
    let name = "4 (deficit equals discord on Bell-diagonal states)";
    let cfg = OptimizerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let samples: Vec<BellDiagonalParams> =
        (0..50).map(|_| sample::bell_diagonal(&mut rng)).collect();

    let worst = samples
        .par_iter()
        .map(|p| {
            let owid = owid_bell_diagonal(p).bits;
            let discord = discord_oracle(&p.density(), &cfg).expect("oracle converges");
            (owid - discord).abs()
        })
        .reduce(|| 0.0, f64::max);

    if worst > 1e-6 {
        fail(name, format!("max |owid - discord| = {worst:e} > 1e-6"));
    }
    pass(name, format!("50 states, max delta {worst:.2e}"));
}

#[test]
fn criterion_05_concurrence_closed_form_matches_wootters_oracle() {
    let name = "5 (concurrence closed form vs spin-flip oracle)";
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = sample::x_state(&mut rng);
        let delta = (concurrence_x_state(&p) - concurrence_oracle(&p.density())).abs();
        worst = worst.max(delta);
    }
    if worst > 1e-9 {
        fail(name, format!("max |closed - oracle| = {worst:e} > 1e-9"));
    }
    pass(name, format!("100 states, max delta {worst:.2e}"));
}

#[test]
fn criterion_06_channel_consistency_and_semigroup() {
    let name = "6 (Kraus action vs parameter map)";
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let mut worst_map = 0.0f64;
    let mut worst_semigroup = 0.0f64;
    for _ in 0..100 {
        let params = sample::x_state(&mut rng);
        let p: f64 = rng.random_range(0.0..=1.0);
        let via_kraus = kraus_phase_flip(p)
            .unwrap()
            .apply(&params.density())
            .unwrap();
        let via_map = apply_phase_flip_x(&params, p).unwrap().density();
        worst_map = worst_map.max(via_kraus.matrix().max_abs_diff(via_map.matrix()));

        let p2: f64 = rng.random_range(0.0..=1.0);
        let stepwise = apply_phase_flip_x(&apply_phase_flip_x(&params, p).unwrap(), p2).unwrap();
        let combined = apply_phase_flip_x(&params, 1.0 - (1.0 - p) * (1.0 - p2)).unwrap();
        for (a, b) in stepwise.c().iter().zip(combined.c()) {
            worst_semigroup = worst_semigroup.max((a - b).abs());
        }
    }
    if worst_map > 1e-10 {
        fail(
            name,
            format!("max Kraus/map deviation = {worst_map:e} > 1e-10"),
        );
    }
    if worst_semigroup > 1e-12 {
        fail(
            name,
            format!("max semigroup deviation = {worst_semigroup:e} > 1e-12"),
        );
    }
    pass(
        name,
        format!("100 samples, map delta {worst_map:.2e}, semigroup delta {worst_semigroup:.2e}"),
    );
}

#[test]
fn criterion_07_level_surfaces_exist_and_shrink() {
    let name = "7 (level surfaces at resolution 64)";
    let started = Instant::now();
    let resolution = 64;

    for (s, target) in [(0.3, 0.03), (0.5, 0.03), (0.3, 0.15), (0.5, 0.15)] {
        let spec = SurfaceSpec::new(s, target)
            .unwrap()
            .with_resolution(resolution)
            .unwrap();
        let sample = owid_core::geometry::sample_level_surface(&spec).unwrap();
        if sample.is_empty() {
            fail(
                name,
                format!(
                    "surface (s = {s}, target = {target}) is empty: {:?}",
                    sample.diagnostic
                ),
            );
        }
    }

    let cfg = SurfaceSpec::new(0.3, 0.03).unwrap().optimizer;
    for target in [0.03, 0.15] {
        let wide = superlevel_count(0.3, target, resolution, FieldEvaluator::ReducedOracle, &cfg);
        let narrow = superlevel_count(0.5, target, resolution, FieldEvaluator::ReducedOracle, &cfg);
        if narrow > wide {
            fail(
                name,
                format!("no shrinkage at target {target}: count(s=0.5) = {narrow} > count(s=0.3) = {wide}"),
            );
        }
    }

    let elapsed = started.elapsed().as_secs_f64();
    if elapsed >= 300.0 {
        fail(name, format!("runtime {elapsed:.0} s exceeds 5 min"));
    }
    pass(
        name,
        format!("4 surfaces nonempty, shrinkage holds, {elapsed:.0} s"),
    );
}

#[test]
fn criterion_08_f_is_monotone_in_theta_and_abs_phi() {
    let name = "8 (monotonicity of the measured-entropy surface)";
    let h = 1e-6;
    let mut checked = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for i in 1..=200 {
        let phi = i as f64 / 201.0;
        for j in 1..=200 {
            let theta = j as f64 / 201.0;
            // keep the whole stencil strictly inside the feasible triangle
            if 1.0 - phi - theta - h <= 1e-9 {
                continue;
            }
            checked += 1;
            let d_theta = (f_phi_theta(phi, theta + h).unwrap()
                - f_phi_theta(phi, theta - h).unwrap())
                / (2.0 * h);
            let d_phi = (f_phi_theta(phi + h, theta).unwrap()
                - f_phi_theta(phi - h, theta).unwrap())
                / (2.0 * h);
            worst = worst.max(d_theta).max(d_phi);
        }
    }
    if worst > 1e-9 {
        fail(name, format!("central difference reached {worst:e} > 1e-9"));
    }
    if checked < 10_000 {
        fail(
            name,
            format!("only {checked} interior grid points were feasible"),
        );
    }
    pass(
        name,
        format!("{checked} grid points, max partial {worst:.2e}"),
    );
}

#[test]
fn criterion_09_trivial_anchors() {
    let name = "9 (trivial anchors)";
    let cfg = OptimizerConfig::default();

    let mixed = DensityMatrix4::new(ComplexMatrix4::identity().scale(0.25)).unwrap();
    let entropy = von_neumann_entropy(&mixed);
    let owid_mixed = owid_oracle(&mixed, &cfg).unwrap().deficit.bits;
    let closed_mixed = owid_bell_diagonal(&BellDiagonalParams::new(0.0, 0.0, 0.0).unwrap()).bits;

    let bell = BellDiagonalParams::new(1.0, -1.0, 1.0).unwrap();
    let owid_bell_oracle = owid_oracle(&bell.density(), &cfg).unwrap().deficit.bits;
    let owid_bell_closed = owid_bell_diagonal(&bell).bits;

    for (label, got, want) in [
        ("S(I/4)", entropy, 2.0),
        ("OWID(I/4) oracle", owid_mixed, 0.0),
        ("OWID(I/4) closed", closed_mixed, 0.0),
        ("OWID(Bell) oracle", owid_bell_oracle, 1.0),
        ("OWID(Bell) closed", owid_bell_closed, 1.0),
    ] {
        if (got - want).abs() > 1e-9 {
            fail(name, format!("{label} = {got}, want {want}"));
        }
    }
    pass(name, "all five anchors within 1e-9".to_string());
}

#[test]
fn criterion_10_corner_minimum_verification() {
    let name = "10 (corner minimum of the reduced objective)";
    let cfg = OptimizerConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let samples: Vec<XStateParams> = (0..100)
        .map(|_| sample::x_state_ordered(&mut rng))
        .collect();

    let deltas: Vec<(XStateParams, f64, f64, f64)> = samples
        .par_iter()
        .map(|p| {
            let corner = min_measured_entropy_x(p, Boundary::Strict).expect("ordering holds");
            let reduced = min_measured_entropy_x_reduced(p, &cfg);
            (*p, corner, reduced, (corner - reduced).abs())
        })
        .collect();

    let counterexamples: Vec<_> = deltas.iter().filter(|(_, _, _, d)| *d > 1e-8).collect();
    if !counterexamples.is_empty() {
        // structured report: one line per counterexample
        for (p, corner, reduced, delta) in &counterexamples {
            println!(
                "counterexample {{ \"s\": {}, \"c\": [{}, {}, {}], \"corner_bits\": {corner}, \"reduced_bits\": {reduced}, \"delta_bits\": {delta} }}",
                p.s(),
                p.c()[0],
                p.c()[1],
                p.c()[2]
            );
        }
        fail(
            name,
            format!(
                "{} corner-minimum counterexamples found",
                counterexamples.len()
            ),
        );
    }
    let worst = deltas.iter().map(|(_, _, _, d)| *d).fold(0.0, f64::max);
    pass(name, format!("100 states, max delta {worst:.2e}"));
}
