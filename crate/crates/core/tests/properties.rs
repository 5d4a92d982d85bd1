use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Vector3;
use proptest::prelude::*;

use wrist_core::actuation::{coordinate_antagonistic, quantize, ActuatorLimits};
use wrist_core::design::{layout_four_tendon, layout_three_tendon, validate_design, MaterialSpec, WristDesign};
use wrist_core::gripper::{closure_displacement, jaw_gap};
use wrist_core::hysteresis::{loop_area, play_step, simulate_loop, HysteresisParams, HysteresisState};
use wrist_core::kinematics::{
    forward_kinematics, inverse_kinematics, tendon_displacements, BendState,
};
use wrist_core::mechanics::{
    bend_for_tension, cell_stiffness, max_bend_under_limits, tension_for_bend, StiffnessModel,
};
use wrist_core::GripperDesign;

const L: f64 = 3.75e-3;
const D: f64 = 0.45e-3;

fn design_with_thickness(t: f64) -> WristDesign {
    WristDesign {
        plate_thickness: t,
        ..WristDesign::paper_default()
    }
}

/// Constant-curvature arc sampled at `n + 1` points by evaluating the
/// closed form at partial arc lengths; returns the polyline length.
fn polyline_length(state: &BendState, n: usize) -> f64 {
    let point = |k: usize| {
        let s = state.length * k as f64 / n as f64;
        if s == 0.0 {
            return Vector3::zeros();
        }
        let partial = BendState::new(state.angle * s / state.length, state.plane, s).unwrap();
        forward_kinematics(&partial).position
    };
    let mut total = 0.0;
    let mut prev = point(0);
    for k in 1..=n {
        let p = point(k);
        total += (p - prev).norm();
        prev = p;
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn validation_idempotent(
        side in 0.5e-3..3e-3f64,
        cells in 1u32..40,
        pitch in 0.05e-3..0.5e-3f64,
        t in 5e-6..60e-6f64,
        frac in 0.05..0.95f64,
    ) {
        let design = WristDesign {
            side_length: side,
            backbone_length: f64::from(cells) * pitch,
            total_length: f64::from(cells) * pitch + 1e-3,
            cell_count: cells,
            cell_pitch: pitch,
            plate_thickness: t,
            tendon_layout: layout_three_tendon(frac * side / 2.0),
            gripper: GripperDesign { initial_gap: 0.1 * side, ..Default::default() },
            ..WristDesign::paper_default()
        };
        let m = MaterialSpec::default();
        let once = validate_design(&design, &m).unwrap();
        let twice = validate_design(&once, &m).unwrap();
        prop_assert_eq!(&once, &design);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn tension_is_linear_and_invertible(theta in 0.0..5.0f64, a in 0.0..10.0f64) {
        let d = WristDesign::paper_default();
        let m = MaterialSpec::default();
        let l = ActuatorLimits::default();
        let s = cell_stiffness(&d, &m).unwrap();
        let t1 = tension_for_bend(&d, &m, &s, &l, theta).unwrap().tension;
        let ta = tension_for_bend(&d, &m, &s, &l, a * theta).unwrap().tension;
        prop_assert!((ta - a * t1).abs() <= 1e-12 * ta.abs().max(1e-300));
        if theta > 0.0 {
            let back = bend_for_tension(&d, &s, t1);
            prop_assert!((back - theta).abs() <= 1e-12 * theta);
        }
    }

    #[test]
    fn thinner_plates_need_less_tension(t1 in 5e-6..50e-6f64, dt in 1e-7..20e-6f64, theta in 0.01..3.0f64) {
        let m = MaterialSpec::default();
        let l = ActuatorLimits::default();
        let thin = design_with_thickness(t1);
        let thick = design_with_thickness(t1 + dt);
        let s_thin = cell_stiffness(&thin, &m).unwrap();
        let s_thick = cell_stiffness(&thick, &m).unwrap();
        let a = tension_for_bend(&thin, &m, &s_thin, &l, theta).unwrap().tension;
        let b = tension_for_bend(&thick, &m, &s_thick, &l, theta).unwrap().tension;
        prop_assert!(a < b);
    }

    #[test]
    fn max_bend_monotone_in_stiffness(k1 in 1e-7..1e-3f64, scale in 1.0..100.0f64) {
        let d = WristDesign::paper_default();
        let m = MaterialSpec::default();
        let l = ActuatorLimits::default();
        let soft = StiffnessModel { plate_rigidity: 1.0, cell_stiffness: k1 * 12.0, wrist_stiffness: k1 };
        let stiff = StiffnessModel { wrist_stiffness: k1 * scale, cell_stiffness: k1 * scale * 12.0, ..soft };
        prop_assert!(max_bend_under_limits(&d, &m, &stiff, &l) <= max_bend_under_limits(&d, &m, &soft, &l));
    }

    #[test]
    fn plane_symmetry(theta in 1e-6..6.0f64, phi in -PI..PI) {
        let a = forward_kinematics(&BendState::new(theta, phi, L).unwrap()).position;
        let b = forward_kinematics(&BendState::new(theta, phi + PI, L).unwrap()).position;
        prop_assert!((a.x + b.x).abs() < 1e-15);
        prop_assert!((a.y + b.y).abs() < 1e-15);
        prop_assert!((a.z - b.z).abs() < 1e-15);
    }

    #[test]
    fn displacement_linearity(theta in 0.0..3.0f64, phi in 0.0..TAU, a in 0.0..2.0f64) {
        let layout = layout_three_tendon(D);
        let one = tendon_displacements(&BendState::new(theta, phi, L).unwrap(), &layout);
        let scaled = tendon_displacements(&BendState::new(a * theta, phi, L).unwrap(), &layout);
        for (x, y) in one.iter().zip(&scaled) {
            prop_assert!((y - a * x).abs() <= 1e-18);
        }
    }

    #[test]
    fn antagonist_pairs_cancel(theta in 0.0..3.0f64, phi in 0.0..TAU) {
        let dl = tendon_displacements(&BendState::new(theta, phi, L).unwrap(), &layout_four_tendon(D));
        // Exact up to the rounding of cos at the four stations.
        let tol = 1e-15 * D * theta;
        prop_assert!((dl[0] + dl[2]).abs() <= tol);
        prop_assert!((dl[1] + dl[3]).abs() <= tol);
    }

    #[test]
    fn orientation_proper_and_untwisted(theta in 0.0..6.2f64, phi in -PI..PI) {
        let tip = forward_kinematics(&BendState::new(theta, phi, L).unwrap());
        let r = tip.orientation.matrix();
        prop_assert!((r.transpose() * r - nalgebra::Matrix3::identity()).norm() < 1e-12);
        prop_assert!((r.determinant() - 1.0).abs() < 1e-12);
        prop_assert!(tip.axial_twist().abs() < 1e-12);
    }

    #[test]
    fn dead_band_containment(steps in proptest::collection::vec(-0.3e-3..0.3e-3f64, 1..200), r in 0.0..0.2e-3f64) {
        let p = HysteresisParams::new(r, D).unwrap();
        let mut state = HysteresisState::default();
        let mut u = 0.0;
        for du in steps {
            u += du;
            let (next, theta) = play_step(&p, state, u);
            prop_assert!((u - next.effective_displacement).abs() <= r + 1e-18);
            prop_assert_eq!(theta, next.effective_displacement / D);
            state = next;
        }
    }

    #[test]
    fn monotone_runs_give_monotone_angle(start in 0.0..0.5e-3f64, incs in proptest::collection::vec(0.0..0.05e-3f64, 1..100), r in 0.0..0.1e-3f64) {
        let p = HysteresisParams::new(r, D).unwrap();
        let mut path = vec![0.0, start];
        for i in incs {
            let last = *path.last().unwrap();
            path.push(last + i);
        }
        let pts = simulate_loop(&p, &path);
        for w in pts[1..].windows(2) {
            prop_assert!(w[1].angle >= w[0].angle);
        }
    }

    #[test]
    fn quantize_idempotent_monotone(a in 0.0..20e-3f64, b in 0.0..20e-3f64) {
        let l = ActuatorLimits::default();
        let qa = quantize(a, &l).unwrap();
        if qa <= l.stroke {
            prop_assert_eq!(quantize(qa, &l).unwrap(), qa);
        }
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(quantize(lo, &l).unwrap() <= quantize(hi, &l).unwrap());
    }

    #[test]
    fn at_most_one_tendon_per_pair(theta in -1.8..1.8f64, axis in 1u8..=2) {
        let cmd = coordinate_antagonistic(theta, axis, &layout_four_tendon(D), &ActuatorLimits::default(), 5.88).unwrap();
        prop_assert!(cmd.steps[0] == 0 || cmd.steps[2] == 0);
        prop_assert!(cmd.steps[1] == 0 || cmd.steps[3] == 0);
        prop_assert!(cmd.active_tendons().count() <= 1);
        // Protocol bends never need more than 1 mm of pull.
        prop_assert!(cmd.displacements().iter().all(|&x| x < 1e-3));
    }

    #[test]
    fn jaw_gap_monotone(a in 0.0..0.2e-3f64, b in 0.0..0.2e-3f64) {
        let g = GripperDesign::default();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let ga = jaw_gap(&g, lo).unwrap();
        let gb = jaw_gap(&g, hi).unwrap();
        prop_assert!(gb <= ga);
        let close = closure_displacement(&g).unwrap();
        if hi < close && lo < hi {
            prop_assert!(gb < ga);
        }
    }
}

#[test]
fn fk_ik_roundtrip_random_states() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let s = BendState::new(rng.gen_range(0.0..PI), rng.gen_range(-PI..PI), L).unwrap();
        let p = forward_kinematics(&s).position;
        let back = inverse_kinematics(&p, L).unwrap();
        let again = forward_kinematics(&back).position;
        assert!((again - p).norm() <= 1e-9 * L, "{s:?} -> {back:?}");
    }
}

#[test]
fn arc_length_preserved() {
    for &(theta, phi) in &[(0.3, 0.0), (FRAC_PI_2, 1.0), (PI, -2.0), (5.0, 0.4)] {
        let s = BendState::new(theta, phi, L).unwrap();
        let len = polyline_length(&s, 100_000);
        assert!(((len - L) / L).abs() < 1e-9, "{theta}: {len}");
    }
}

#[test]
fn max_bend_matches_bisection_on_flags() {
    let d = WristDesign::paper_default();
    let m = MaterialSpec::default();
    for (force, cap_stiffness) in [(18.0, 1.0), (0.01, 1.0), (18.0, 100.0), (0.5, 30.0)] {
        let l = ActuatorLimits {
            rated_force: force,
            ..Default::default()
        };
        let base = cell_stiffness(&d, &m).unwrap();
        let s = StiffnessModel {
            wrist_stiffness: base.wrist_stiffness * cap_stiffness,
            cell_stiffness: base.cell_stiffness * cap_stiffness,
            ..base
        };
        let cap = 12.0 * 2.0 * (0.3125f64 / 1.25).atan();
        // Predicate: no load flag, stroke respected, below self-contact.
        let ok = |theta: f64| {
            tension_for_bend(&d, &m, &s, &l, theta).unwrap().is_ok()
                && D * theta <= l.stroke
                && theta <= cap
        };
        let (mut lo, mut hi) = (0.0, 1e3);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let got = max_bend_under_limits(&d, &m, &s, &l);
        assert!((got - lo).abs() <= 1e-9 * lo.max(1.0), "{got} vs {lo}");
    }
}

#[test]
fn closed_loop_repeats_without_drift() {
    let p = HysteresisParams::new(0.05e-3, D).unwrap();
    let cycle: Vec<f64> = (0..=40)
        .chain((0..40).rev())
        .map(|k| k as f64 * 2e-5)
        .chain((1..=40).map(|k| -(k as f64) * 2e-5))
        .chain((0..40).rev().map(|k| -(k as f64) * 2e-5))
        .collect();
    let mut twice = cycle.clone();
    twice.extend(&cycle);
    let mut thrice = twice.clone();
    thrice.extend(&cycle);
    let pts = simulate_loop(&p, &thrice);
    let n = cycle.len();
    for k in 0..n {
        assert_eq!(pts[n + k].angle, pts[2 * n + k].angle);
    }
}

#[test]
fn loop_area_matches_trapezoid_oracle() {
    let r = 0.05e-3;
    let p = HysteresisParams::new(r, D).unwrap();
    let a = 0.8e-3;
    let n = 800;
    let path: Vec<f64> = (0..=n)
        .chain((0..n).rev())
        .map(|k| a * k as f64 / n as f64)
        .collect();
    let pts = simulate_loop(&p, &path);
    // Trapezoid integral of (unload − load) over the shared grid.
    let mut area = 0.0;
    for k in 0..n {
        let load0 = pts[k].angle;
        let load1 = pts[k + 1].angle;
        let unload0 = pts[2 * n - k].angle;
        let unload1 = pts[2 * n - k - 1].angle;
        let h = a / n as f64;
        area += 0.5 * h * ((unload0 - load0) + (unload1 - load1));
    }
    let shoelace: Vec<(f64, f64)> = pts.iter().map(|p| (p.input, p.angle)).collect();
    // Load runs along the bottom, unload back along the top: counter-clockwise.
    let got = loop_area(&shoelace);
    assert!(area > 0.0);
    assert!((got - area).abs() <= 1e-12 * area, "{got} vs {area}");
}

#[test]
fn right_angle_displacement_help_cases() {
    // θ = π/2 at φ = 0 with three tendons: [0.7069, −0.3534, −0.3534] mm.
    let dl = tendon_displacements(&BendState::new(FRAC_PI_2, 0.0, L).unwrap(), &layout_three_tendon(D));
    let mm: Vec<f64> = dl.iter().map(|x| x * 1e3).collect();
    assert!((mm[0] - 0.7069).abs() < 1e-4);
    assert!((mm[1] + 0.3534).abs() < 1e-4);
    assert!((mm[2] + 0.3534).abs() < 1e-4);
    let sum: f64 = dl.iter().sum();
    assert!(sum.abs() < 1e-18);
}
