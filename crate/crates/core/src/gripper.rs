//! Jaw closure of the simply supported center plate.
//!
//! Pulling the central tendon by `δ` deflects the plate midpoint by `δ`.
//! For a central point load the end slope is `3δ/L_g`, and each jaw swings
//! on a lever of length `l_jaw`, so
//!
//! ```text
//! g = max(0, g₀ − 2·l_jaw·sin(3δ/L_g))
//! ```
//!
//! Both jaws move identically; only the gap is modeled. The slope is held
//! at π/2 beyond that point so the gap never reopens, and contact is
//! sticky. Axial compression coupled into the jaw motion is not modeled.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;
use thiserror::Error;

use crate::design::GripperDesign;

#[derive(Debug, Error, PartialEq)]
pub enum GripperError {
    #[error("negative tendon pull {0:e} m")]
    NegativePull(f64),
    #[error("jaws never close: 2 x jaw_length {reach:e} m < initial gap {gap:e} m")]
    NeverCloses { reach: f64, gap: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GripperState {
    /// Central tendon displacement δ [m].
    pub tendon_pull: f64,
    /// [m]
    pub jaw_gap: f64,
}

fn end_slope(design: &GripperDesign, pull: f64) -> f64 {
    (3.0 * pull / design.plate_length).min(FRAC_PI_2)
}

/// Jaw gap for a central tendon pull `pull` [m].
pub fn jaw_gap(design: &GripperDesign, pull: f64) -> Result<f64, GripperError> {
    if !(pull >= 0.0) {
        return Err(GripperError::NegativePull(pull));
    }
    let closing = 2.0 * design.jaw_length * end_slope(design, pull).sin();
    Ok((design.initial_gap - closing).max(0.0))
}

pub fn gripper_state(design: &GripperDesign, pull: f64) -> Result<GripperState, GripperError> {
    Ok(GripperState {
        tendon_pull: pull,
        jaw_gap: jaw_gap(design, pull)?,
    })
}

/// Small-angle estimate of the closing pull, `g₀·L_g / (6·l_jaw)`.
pub fn closure_estimate(design: &GripperDesign) -> f64 {
    design.initial_gap * design.plate_length / (6.0 * design.jaw_length)
}

/// Smallest pull that brings the jaws into contact, by bisection to 1e-12 m.
pub fn closure_displacement(design: &GripperDesign) -> Result<f64, GripperError> {
    let reach = 2.0 * design.jaw_length;
    if reach < design.initial_gap {
        return Err(GripperError::NeverCloses {
            reach,
            gap: design.initial_gap,
        });
    }
    if design.initial_gap <= 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    // End slope saturates at π/2 here; the gap is zero at this pull.
    let mut hi = FRAC_PI_2 * design.plate_length / 3.0;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if jaw_gap(design, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
