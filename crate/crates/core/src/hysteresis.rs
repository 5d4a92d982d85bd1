//! Rate-independent play (backlash) hysteresis in the tendon-displacement
//! domain, and identification of its parameters from loop data.
//!
//! The operator output `y` follows the commanded displacement `u` with a
//! dead band of half-width `r`:
//!
//! ```text
//! y' = max(u − r, min(u + r, y))
//! ```
//!
//! and the observed bend is `θ = y / d`. A [`PlayStack`] superposes
//! weighted operators; the single-operator model is a one-element stack.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HysteresisError {
    #[error("degenerate loop data: {0}")]
    DegenerateData(&'static str),
    #[error("invalid hysteresis parameters: {0}")]
    InvalidParams(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HysteresisParams {
    /// Dead-band half-width [m].
    pub play_radius: f64,
    /// Offset converting effective displacement to angle [m].
    pub effective_offset: f64,
}

impl HysteresisParams {
    pub fn new(play_radius: f64, effective_offset: f64) -> Result<Self, HysteresisError> {
        if !(play_radius >= 0.0) || !play_radius.is_finite() {
            return Err(HysteresisError::InvalidParams("play_radius must be >= 0"));
        }
        if !(effective_offset > 0.0) || !effective_offset.is_finite() {
            return Err(HysteresisError::InvalidParams("effective_offset must be > 0"));
        }
        Ok(Self {
            play_radius,
            effective_offset,
        })
    }

    pub fn to_stack(&self) -> PlayStack {
        PlayStack {
            operators: vec![WeightedPlay {
                radius: self.play_radius,
                weight: 1.0,
            }],
            effective_offset: self.effective_offset,
        }
    }
}

/// Operator memory.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct HysteresisState {
    /// Effective displacement `y` [m].
    pub effective_displacement: f64,
}

#[inline]
fn play(radius: f64, y: f64, u: f64) -> f64 {
    (u - radius).max((u + radius).min(y))
}

/// One update of the single play operator. Returns the new memory and the
/// observed bend angle [rad].
pub fn play_step(params: &HysteresisParams, state: HysteresisState, u: f64) -> (HysteresisState, f64) {
    let y = play(params.play_radius, state.effective_displacement, u);
    (
        HysteresisState {
            effective_displacement: y,
        },
        y / params.effective_offset,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedPlay {
    pub radius: f64,
    pub weight: f64,
}

/// Weighted superposition of play operators sharing one input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlayStack {
    pub operators: Vec<WeightedPlay>,
    pub effective_offset: f64,
}

impl PlayStack {
    /// Virgin memories, one per operator.
    pub fn initial_memory(&self) -> Vec<f64> {
        vec![0.0; self.operators.len()]
    }

    /// Advances every operator and returns the weighted effective
    /// displacement.
    pub fn step(&self, memory: &mut [f64], u: f64) -> f64 {
        let mut total = 0.0;
        for (op, y) in self.operators.iter().zip(memory.iter_mut()) {
            *y = play(op.radius, *y, u);
            total += op.weight * *y;
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopPoint {
    /// Commanded displacement [m].
    pub input: f64,
    /// Operator memory after the step [m].
    pub effective: f64,
    /// Observed bend [rad].
    pub angle: f64,
}

/// Folds [`play_step`] over an input path starting from the virgin state.
pub fn simulate_loop(params: &HysteresisParams, inputs: &[f64]) -> Vec<LoopPoint> {
    let mut state = HysteresisState::default();
    inputs
        .iter()
        .map(|&u| {
            let (next, angle) = play_step(params, state, u);
            state = next;
            LoopPoint {
                input: u,
                effective: next.effective_displacement,
                angle,
            }
        })
        .collect()
}

/// Signed area enclosed by the `(u, θ)` path, closing it back to the start
/// [m·rad]. Counter-clockwise loops are positive.
pub fn loop_area(points: &[(f64, f64)]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for (i, &(x0, y0)) in points.iter().enumerate() {
        let (x1, y1) = points[(i + 1) % points.len()];
        twice += x0 * y1 - x1 * y0;
    }
    0.5 * twice
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HysteresisFit {
    pub params: HysteresisParams,
    /// RMS angle residual [rad].
    pub rms_residual: f64,
    pub iterations: usize,
}

/// Operator outputs and their sensitivity to the play radius.
fn trajectory(radius: f64, inputs: &[f64], y: &mut [f64], dy: &mut [f64]) {
    let (mut cur, mut dcur) = (0.0, 0.0);
    for (k, &u) in inputs.iter().enumerate() {
        let (mut cand, mut dcand) = (cur, dcur);
        if u + radius < cand {
            cand = u + radius;
            dcand = 1.0;
        }
        if u - radius > cand {
            cand = u - radius;
            dcand = -1.0;
        }
        cur = cand;
        dcur = dcand;
        y[k] = cur;
        dy[k] = dcur;
    }
}

fn has_reversal(inputs: &[f64]) -> bool {
    let mut last = 0.0f64;
    for w in inputs.windows(2) {
        let du = w[1] - w[0];
        if du == 0.0 {
            continue;
        }
        if last != 0.0 && last.signum() != du.signum() {
            return true;
        }
        last = du;
    }
    false
}

const MAX_ITERATIONS: usize = 200;

/// Least-squares identification of `(play_radius, effective_offset)` from
/// `(u [m], θ [rad])` samples in acquisition order.
///
/// Levenberg-Marquardt on angle residuals, started from a play radius of a
/// quarter of the largest displacement and `d = max u / max θ`. Stops when
/// the scaled parameter step falls below 1e-12 or after 200 iterations.
pub fn fit_hysteresis(data: &[(f64, f64)]) -> Result<HysteresisFit, HysteresisError> {
    if data.len() < 3 {
        return Err(HysteresisError::DegenerateData("fewer than 3 samples"));
    }
    if data.iter().any(|(u, t)| !u.is_finite() || !t.is_finite()) {
        return Err(HysteresisError::DegenerateData("non-finite sample"));
    }
    if data[0].0 != 0.0 {
        return Err(HysteresisError::DegenerateData("displacement must start at 0"));
    }
    let inputs: Vec<f64> = data.iter().map(|d| d.0).collect();
    let angles: Vec<f64> = data.iter().map(|d| d.1).collect();
    if inputs.iter().all(|&u| u == inputs[0]) {
        return Err(HysteresisError::DegenerateData("all displacements identical"));
    }
    if !has_reversal(&inputs) {
        return Err(HysteresisError::DegenerateData("no reversal in displacement"));
    }

    let scale = inputs.iter().fold(0.0f64, |m, u| m.max(u.abs()));
    let max_angle = angles.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if max_angle == 0.0 {
        return Err(HysteresisError::DegenerateData("all angles zero"));
    }

    let n = inputs.len();
    let mut y = vec![0.0; n];
    let mut dy = vec![0.0; n];
    let cost = |radius: f64, offset: f64, y: &mut [f64], dy: &mut [f64]| -> f64 {
        trajectory(radius, &inputs, y, dy);
        y.iter()
            .zip(&angles)
            .map(|(yk, tk)| {
                let r = yk / offset - tk;
                r * r
            })
            .sum()
    };

    // Work in units of the largest displacement so both parameters are O(1).
    let mut radius = 0.25 * scale;
    let mut offset = scale / max_angle;
    let mut current = cost(radius, offset, &mut y, &mut dy);
    let mut lambda = 1e-3;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS && current > 0.0 {
        iterations += 1;
        // Normal equations in scaled parameters (ρ = r/scale, δ = d/scale).
        let (mut a11, mut a12, mut a22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for k in 0..n {
            let res = y[k] / offset - angles[k];
            let j1 = dy[k] / offset * scale;
            let j2 = -y[k] / (offset * offset) * scale;
            a11 += j1 * j1;
            a12 += j1 * j2;
            a22 += j2 * j2;
            g1 += j1 * res;
            g2 += j2 * res;
        }

        let mut accepted = false;
        let mut step_norm = 0.0;
        for _ in 0..60 {
            let b11 = a11 + lambda * a11.max(1e-30);
            let b22 = a22 + lambda * a22.max(1e-30);
            let det = b11 * b22 - a12 * a12;
            if det == 0.0 || !det.is_finite() {
                lambda *= 10.0;
                continue;
            }
            let s1 = -(b22 * g1 - a12 * g2) / det;
            let s2 = -(b11 * g2 - a12 * g1) / det;
            let cand_radius = (radius + s1 * scale).max(0.0);
            let cand_offset = offset + s2 * scale;
            if !(cand_offset > 0.0) {
                lambda *= 10.0;
                continue;
            }
            let trial = cost(cand_radius, cand_offset, &mut y, &mut dy);
            if trial <= current {
                step_norm = ((cand_radius - radius).powi(2) + (cand_offset - offset).powi(2)).sqrt() / scale;
                radius = cand_radius;
                offset = cand_offset;
                current = trial;
                lambda = (lambda * 0.1).max(1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            break;
        }
        // y/dy hold the accepted trial already.
        if step_norm < 1e-12 {
            break;
        }
    }
    // Refresh buffers for the final parameters' residual.
    let current = cost(radius, offset, &mut y, &mut dy);

    Ok(HysteresisFit {
        params: HysteresisParams {
            play_radius: radius,
            effective_offset: offset,
        },
        rms_residual: (current / n as f64).sqrt(),
        iterations,
    })
}
