//! Linear actuator model: stroke, force rating, step quantization, and the
//! pull-only coordination of antagonistic tendon pairs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design::TendonLayout;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActuatorLimits {
    /// Travel of the actuator rod [m].
    pub stroke: f64,
    /// [N]
    pub rated_force: f64,
    /// Minimum repeatable step [m].
    pub step: f64,
}

impl Default for ActuatorLimits {
    fn default() -> Self {
        Self {
            stroke: 20e-3,
            rated_force: 18.0,
            step: 100e-6,
        }
    }
}

impl ActuatorLimits {
    pub fn check(&self) -> Result<(), ActuationError> {
        if !(self.stroke > 0.0 && self.rated_force > 0.0 && self.step > 0.0) {
            return Err(ActuationError::InvalidLimits("stroke, rated_force and step must be positive"));
        }
        if self.step > self.stroke {
            return Err(ActuationError::InvalidLimits("step exceeds stroke"));
        }
        Ok(())
    }

    /// Bend-angle resolution induced by one actuator step at offset `d`.
    pub fn angle_resolution(&self, offset: f64) -> f64 {
        self.step / offset
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ActuationError {
    #[error("displacement {0:e} m outside actuator stroke")]
    OutOfStroke(f64),
    #[error("invalid actuator limits: {0}")]
    InvalidLimits(&'static str),
    #[error("axis must be 1 or 2, got {0}")]
    BadAxis(u8),
    #[error("antagonistic coordination needs the four-tendon layout")]
    NotFourTendon,
    #[error("bend {angle} rad exceeds the reachable limit {limit} rad")]
    BeyondLimit { angle: f64, limit: f64 },
}

fn step_count(x: f64, step: f64) -> u64 {
    let q = x / step;
    let lower = q.floor();
    // Ties round up (away from zero for nonnegative inputs). The slack
    // absorbs representation error such as 0.75e-3 / 1e-4.
    if q - lower >= 0.5 - 1e-9 {
        lower as u64 + 1
    } else {
        lower as u64
    }
}

/// Rounds a displacement to the nearest whole actuator step.
pub fn quantize(x: f64, limits: &ActuatorLimits) -> Result<f64, ActuationError> {
    if !(0.0..=limits.stroke).contains(&x) {
        return Err(ActuationError::OutOfStroke(x));
    }
    Ok(step_count(x, limits.step) as f64 * limits.step)
}

/// Per-tendon commands, stored as whole step counts so every command is an
/// exact multiple of the step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActuatorCommand {
    pub steps: Vec<u64>,
    pub step: f64,
}

impl ActuatorCommand {
    pub fn zeros(tendons: usize, step: f64) -> Self {
        Self {
            steps: vec![0; tendons],
            step,
        }
    }

    /// Commanded displacements [m].
    pub fn displacements(&self) -> Vec<f64> {
        self.steps.iter().map(|&n| n as f64 * self.step).collect()
    }

    pub fn active_tendons(&self) -> impl Iterator<Item = usize> + '_ {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, _)| i)
    }
}

/// Tendon index pulled for a signed bend about `axis` in the four-tendon
/// layout. Positive bends pull station `axis − 1`, negative bends its
/// antagonist two stations further round.
pub fn agonist_index(axis: u8, positive: bool) -> Result<usize, ActuationError> {
    let base = match axis {
        1 => 0,
        2 => 1,
        other => return Err(ActuationError::BadAxis(other)),
    };
    Ok(if positive { base } else { base + 2 })
}

/// Command for a signed in-plane bend: the agonist pulls `d·|θ|`
/// (quantized), every other tendon is released to slack.
pub fn coordinate_antagonistic(
    angle: f64,
    axis: u8,
    layout: &TendonLayout,
    limits: &ActuatorLimits,
    max_angle: f64,
) -> Result<ActuatorCommand, ActuationError> {
    if layout.len() != 4 {
        return Err(ActuationError::NotFourTendon);
    }
    let idx = agonist_index(axis, angle >= 0.0)?;
    if angle.abs() > max_angle {
        return Err(ActuationError::BeyondLimit {
            angle,
            limit: max_angle,
        });
    }
    let pull = layout.offset * angle.abs();
    let mut cmd = ActuatorCommand::zeros(4, limits.step);
    quantize(pull, limits)?;
    cmd.steps[idx] = step_count(pull, limits.step);
    Ok(cmd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::layout_four_tendon;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn nearest_multiple() {
        let l = ActuatorLimits::default();
        assert!((quantize(0.247e-3, &l).unwrap() - 0.2e-3).abs() < 1e-15);
        assert!((quantize(0.75e-3, &l).unwrap() - 0.8e-3).abs() < 1e-15);
        assert_eq!(quantize(0.0, &l).unwrap(), 0.0);
    }

    #[test]
    fn out_of_stroke() {
        let l = ActuatorLimits::default();
        assert!(quantize(-1e-6, &l).is_err());
        assert!(quantize(20.1e-3, &l).is_err());
        assert!(quantize(20e-3, &l).is_ok());
    }

    #[test]
    fn resolution_default() {
        let l = ActuatorLimits::default();
        let r = l.angle_resolution(0.45e-3);
        assert!((r - 0.2222).abs() < 1e-4);
        assert!((r.to_degrees() - 12.73).abs() < 0.01);
    }

    #[test]
    fn antagonistic_commands() {
        let l = ActuatorLimits::default();
        let layout = layout_four_tendon(0.45e-3);
        let cap = 5.88;
        let pos = coordinate_antagonistic(FRAC_PI_2, 1, &layout, &l, cap).unwrap();
        assert_eq!(pos.steps, vec![7, 0, 0, 0]);
        let neg = coordinate_antagonistic(-FRAC_PI_2, 1, &layout, &l, cap).unwrap();
        assert_eq!(neg.steps, vec![0, 0, 7, 0]);
        let ax2 = coordinate_antagonistic(-FRAC_PI_2, 2, &layout, &l, cap).unwrap();
        assert_eq!(ax2.steps, vec![0, 0, 0, 7]);
        let zero = coordinate_antagonistic(0.0, 2, &layout, &l, cap).unwrap();
        assert_eq!(zero.steps, vec![0; 4]);
        assert!((pos.displacements()[0] - 0.7e-3).abs() < 1e-15);
    }

    #[test]
    fn antagonistic_errors() {
        let l = ActuatorLimits::default();
        let layout = layout_four_tendon(0.45e-3);
        assert_eq!(
            coordinate_antagonistic(0.1, 3, &layout, &l, 1.0),
            Err(ActuationError::BadAxis(3))
        );
        assert!(matches!(
            coordinate_antagonistic(2.0, 1, &layout, &l, 1.0),
            Err(ActuationError::BeyondLimit { .. })
        ));
        let three = crate::design::layout_three_tendon(0.45e-3);
        assert_eq!(
            coordinate_antagonistic(0.1, 1, &three, &l, 1.0),
            Err(ActuationError::NotFourTendon)
        );
        // 100 rad at 0.45 mm needs 45 mm of travel.
        assert!(matches!(
            coordinate_antagonistic(100.0, 1, &layout, &l, 200.0),
            Err(ActuationError::OutOfStroke(_))
        ));
    }

    #[test]
    fn limits_check() {
        assert!(ActuatorLimits::default().check().is_ok());
        let bad = ActuatorLimits {
            step: 1.0,
            ..Default::default()
        };
        assert!(bad.check().is_err());
    }
}
