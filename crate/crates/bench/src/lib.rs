//! Shared fixtures for the criterion benches.

use wrist_core::hysteresis::{simulate_loop, HysteresisParams};

/// Triangle path 0 → `amplitude` → 0 with `points_per_leg` samples per leg.
pub fn triangle(amplitude: f64, points_per_leg: usize) -> Vec<f64> {
    let up = (0..=points_per_leg).map(|k| amplitude * k as f64 / points_per_leg as f64);
    let down = (0..points_per_leg)
        .rev()
        .map(|k| amplitude * k as f64 / points_per_leg as f64);
    up.chain(down).collect()
}

/// Noise-free `(u, θ)` loop from the default play parameters.
pub fn synthetic_loop(points_per_leg: usize) -> Vec<(f64, f64)> {
    let params = HysteresisParams {
        play_radius: 0.05e-3,
        effective_offset: 0.45e-3,
    };
    simulate_loop(&params, &triangle(0.8e-3, points_per_leg))
        .into_iter()
        .map(|p| (p.input, p.angle))
        .collect()
}
