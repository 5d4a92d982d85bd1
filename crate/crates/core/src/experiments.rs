//! Simulated versions of the characterization experiments: the
//! antagonistic bend sweep with hysteresis, the circular trace, and the
//! gripper closure table.

use nalgebra::Vector3;
use serde::Serialize;
use thiserror::Error;

use crate::actuation::{agonist_index, ActuationError};
use crate::config::WristConfig;
use crate::design::layout_four_tendon;
use crate::gripper::{closure_displacement, jaw_gap, GripperError, GripperState};
use crate::hysteresis::{play_step, HysteresisError, HysteresisParams, HysteresisState};
use crate::kinematics::{circular_trace, fit_circle, forward_kinematics, BendState, CircleFit, KinematicsError};
use crate::mechanics::{
    cell_stiffness, max_bend_under_limits, tension_for_bend, MechanicsError, StiffnessModel,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid options: {0}")]
    Options(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Mechanics(#[from] MechanicsError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error(transparent)]
    Hysteresis(#[from] HysteresisError),
    #[error(transparent)]
    Actuation(#[from] ActuationError),
    #[error(transparent)]
    Gripper(#[from] GripperError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Load,
    Unload,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Load => "load",
            Phase::Unload => "unload",
        }
    }
}

/// One quantized actuator step of the sweep. Lengths in mm, angles in
/// degrees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub step_index: usize,
    pub tendon_id: usize,
    pub commanded_displacement: f64,
    /// Signed operator output; negative while the antagonist pulls.
    pub effective_displacement: f64,
    pub bend_angle: f64,
    pub axis: u8,
    pub phase: Phase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub axis: u8,
    /// Stop loading once the bend reaches this angle [rad].
    pub target_angle: f64,
    /// Command increment [m]; a whole number of actuator steps.
    pub increment: f64,
    /// Overrides the design file's play radius [m].
    pub play_radius: Option<f64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            axis: 1,
            target_angle: 90f64.to_radians(),
            increment: 100e-6,
            play_radius: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionSummary {
    pub tendon_id: usize,
    pub max_angle_deg: f64,
    /// L/θ at the largest bend [mm]; null when the wrist never bent.
    pub radius_at_max_mm: Option<f64>,
    pub max_command_mm: f64,
    /// Largest unload-minus-load angle gap at a shared command [deg].
    pub loop_width_deg: f64,
    pub max_tension_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub axis: u8,
    pub target_deg: f64,
    pub increment_mm: f64,
    pub play_radius_mm: f64,
    pub branches: usize,
    pub positive: DirectionSummary,
    pub negative: DirectionSummary,
    pub max_bend_under_limits_deg: f64,
    pub tendon_break_tension_n: f64,
    pub rated_force_n: f64,
    pub stiffness: StiffnessModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub records: Vec<SweepRecord>,
    pub summary: SweepSummary,
}

impl Sweep {
    /// `(signed net displacement [mm], angle [deg])` in acquisition order,
    /// the input format of the loop fit.
    pub fn loop_points(&self) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .map(|r| {
                // Stations 2 and 3 are the antagonists of 0 and 1.
                let sign = if r.tendon_id >= 2 { -1.0 } else { 1.0 };
                (sign * r.commanded_displacement, r.bend_angle)
            })
            .collect()
    }
}

fn whole_steps(increment: f64, step: f64) -> Option<u64> {
    let q = increment / step;
    let n = q.round();
    (n >= 1.0 && (q - n).abs() < 1e-9).then_some(n as u64)
}

/// Runs the four-branch characterization protocol on one axis using the
/// four-tendon layout: load the agonist until the target bend, release it
/// back to zero, then the same with the antagonist.
///
/// A single play operator acts on the axis's signed net displacement.
/// `noise` is called once per record and its value [rad] is added to the
/// observed angle; the protocol itself stops on the noiseless angle.
pub fn simulate_sweep(
    config: &WristConfig,
    options: &SweepOptions,
    mut noise: impl FnMut() -> f64,
) -> Result<Sweep, ExperimentError> {
    let design = config.design.with_four_tendons();
    let material = &config.material;
    let limits = &config.limits;
    let stiffness = cell_stiffness(&design, material)?;
    let max_bend = max_bend_under_limits(&design, material, &stiffness, limits);
    let layout = layout_four_tendon(design.tendon_offset());
    let play_radius = options.play_radius.unwrap_or(config.play_radius);
    let params = HysteresisParams::new(play_radius, layout.offset)?;

    agonist_index(options.axis, true)?;
    if !(options.target_angle >= 0.0) || !options.target_angle.is_finite() {
        return Err(ExperimentError::Options("target angle must be finite and >= 0".into()));
    }
    let per_increment = whole_steps(options.increment, limits.step).ok_or_else(|| {
        ExperimentError::Options(format!(
            "step size {:e} m is not a whole number of {:e} m actuator steps",
            options.increment, limits.step
        ))
    })?;
    if options.target_angle > max_bend {
        return Err(ExperimentError::Infeasible(format!(
            "target {:.3} deg exceeds reachable {:.3} deg",
            options.target_angle.to_degrees(),
            max_bend.to_degrees()
        )));
    }

    let mut records = Vec::new();
    let mut directions = Vec::new();
    let mut state = HysteresisState::default();
    let run = options.target_angle > 0.0;

    for positive in [true, false] {
        let tendon = agonist_index(options.axis, positive)?;
        let sign = if positive { 1.0 } else { -1.0 };
        let mut summary = DirectionSummary {
            tendon_id: tendon,
            max_angle_deg: 0.0,
            radius_at_max_mm: None,
            max_command_mm: 0.0,
            loop_width_deg: 0.0,
            max_tension_n: 0.0,
        };
        if !run {
            directions.push(summary);
            continue;
        }

        let mut load_angles = Vec::new();
        let mut count = 0u64;
        loop {
            let command = count as f64 * limits.step;
            if command > limits.stroke {
                return Err(ExperimentError::Infeasible(format!(
                    "target not reached within {:e} m stroke",
                    limits.stroke
                )));
            }
            let (next, angle) = play_step(&params, state, sign * command);
            state = next;
            let magnitude = angle.abs();
            let tension = tension_for_bend(&design, material, &stiffness, limits, magnitude)?;
            if !tension.is_ok() || magnitude > max_bend {
                return Err(ExperimentError::Infeasible(format!(
                    "bend {:.3} deg violates load limits {:?}",
                    magnitude.to_degrees(),
                    tension.flags
                )));
            }
            summary.max_tension_n = summary.max_tension_n.max(tension.tension);
            let observed = angle + noise();
            load_angles.push(observed);
            records.push(SweepRecord {
                step_index: records.len(),
                tendon_id: tendon,
                commanded_displacement: command * 1e3,
                effective_displacement: state.effective_displacement * 1e3,
                bend_angle: observed.to_degrees(),
                axis: options.axis,
                phase: Phase::Load,
            });
            if magnitude > 0.0 && magnitude.to_degrees() > summary.max_angle_deg {
                summary.max_angle_deg = magnitude.to_degrees();
                summary.radius_at_max_mm = Some(design.backbone_length / magnitude * 1e3);
            }
            summary.max_command_mm = command * 1e3;
            if magnitude >= options.target_angle {
                break;
            }
            count += per_increment;
        }

        let top = count;
        let mut level = top;
        while level > 0 {
            level = level.saturating_sub(per_increment);
            let command = level as f64 * limits.step;
            let (next, angle) = play_step(&params, state, sign * command);
            state = next;
            let observed = angle + noise();
            let width = (observed - load_angles[(level / per_increment) as usize]).abs();
            summary.loop_width_deg = summary.loop_width_deg.max(width.to_degrees());
            records.push(SweepRecord {
                step_index: records.len(),
                tendon_id: tendon,
                commanded_displacement: command * 1e3,
                effective_displacement: state.effective_displacement * 1e3,
                bend_angle: observed.to_degrees(),
                axis: options.axis,
                phase: Phase::Unload,
            });
        }
        directions.push(summary);
    }

    let negative = directions.pop().expect("two directions");
    let positive = directions.pop().expect("two directions");
    Ok(Sweep {
        records,
        summary: SweepSummary {
            axis: options.axis,
            target_deg: options.target_angle.to_degrees(),
            increment_mm: options.increment * 1e3,
            play_radius_mm: play_radius * 1e3,
            branches: if run { 4 } else { 0 },
            positive,
            negative,
            max_bend_under_limits_deg: max_bend.to_degrees(),
            tendon_break_tension_n: material.tendon_break_tension(),
            rated_force_n: limits.rated_force,
            stiffness,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub index: usize,
    /// Bending plane [rad].
    pub plane: f64,
    /// Per-tendon displacement [m].
    pub displacements: Vec<f64>,
    /// FK tip [m].
    pub tip: Vector3<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceReport {
    pub angle: f64,
    pub rows: Vec<TraceRow>,
    pub fit: CircleFit,
    /// Fit residual divided by the backbone length.
    pub relative_residual: f64,
}

/// Circular trace with the design's own tendon layout.
pub fn run_trace(config: &WristConfig, angle: f64, steps: usize) -> Result<TraceReport, ExperimentError> {
    let length = config.design.backbone_length;
    let trace = circular_trace(angle, steps, &config.design.tendon_layout, length)?;
    let rows: Vec<TraceRow> = trace
        .into_iter()
        .map(|step| TraceRow {
            index: step.index,
            plane: step.state.plane,
            tip: forward_kinematics(&step.state).position,
            displacements: step.displacements,
        })
        .collect();
    let tips: Vec<_> = rows.iter().map(|r| r.tip).collect();
    let fit = fit_circle(&tips)?;
    Ok(TraceReport {
        angle,
        relative_residual: fit.residual / length,
        rows,
        fit,
    })
}

/// Tip of a constant-curvature bend; convenience for reports.
pub fn tip_for(config: &WristConfig, angle: f64, plane: f64) -> Result<Vector3<f64>, ExperimentError> {
    let state = BendState::new(angle, plane, config.design.backbone_length)?;
    Ok(forward_kinematics(&state).position)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GripperTable {
    pub rows: Vec<GripperState>,
    /// Pull at first contact [m]; absent when the jaws cannot close.
    pub closure_displacement: Option<f64>,
}

/// Jaw gap at `steps + 1` evenly spaced pulls from 0 to `max_pull`
/// inclusive; a single row when `max_pull` is 0.
pub fn gripper_table(config: &WristConfig, max_pull: f64, steps: usize) -> Result<GripperTable, ExperimentError> {
    let g = &config.design.gripper;
    if !(max_pull >= 0.0) || !max_pull.is_finite() {
        return Err(ExperimentError::Options("max pull must be finite and >= 0".into()));
    }
    let pulls: Vec<f64> = if max_pull == 0.0 {
        vec![0.0]
    } else {
        if steps == 0 {
            return Err(ExperimentError::Options("steps must be >= 1".into()));
        }
        (0..=steps).map(|k| max_pull * k as f64 / steps as f64).collect()
    };
    let rows = pulls
        .into_iter()
        .map(|p| {
            Ok(GripperState {
                tendon_pull: p,
                jaw_gap: jaw_gap(g, p)?,
            })
        })
        .collect::<Result<Vec<_>, GripperError>>()?;
    Ok(GripperTable {
        rows,
        closure_displacement: closure_displacement(g).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sweep_reaches_target_both_ways() {
        let cfg = WristConfig::paper_default();
        let sweep = simulate_sweep(&cfg, &SweepOptions::default(), || 0.0).unwrap();
        let s = &sweep.summary;
        assert_eq!(s.branches, 4);
        assert!(s.positive.max_angle_deg >= 90.0);
        assert!(s.negative.max_angle_deg >= 90.0);
        // 0.8 mm pull, 0.05 mm play: (0.8 − 0.05)/0.45 rad.
        assert!((s.positive.max_angle_deg - (0.75f64 / 0.45).to_degrees()).abs() < 1e-9);
        let r = s.positive.radius_at_max_mm.unwrap();
        assert!((2.1..=2.3).contains(&r));
        // Loop width 2r/d.
        assert!((s.positive.loop_width_deg - (0.1f64 / 0.45).to_degrees()).abs() < 1e-9);
        assert_eq!(s.positive.tendon_id, 0);
        assert_eq!(s.negative.tendon_id, 2);
    }

    #[test]
    fn phases_alternate_once_per_branch() {
        let cfg = WristConfig::paper_default();
        let sweep = simulate_sweep(&cfg, &SweepOptions::default(), || 0.0).unwrap();
        let mut transitions = 0;
        for w in sweep.records.windows(2) {
            if w[0].phase != w[1].phase {
                transitions += 1;
            }
        }
        // load→unload, unload→load, load→unload
        assert_eq!(transitions, 3);
        assert_eq!(sweep.records.first().unwrap().commanded_displacement, 0.0);
        assert_eq!(sweep.records.last().unwrap().commanded_displacement, 0.0);
    }

    #[test]
    fn zero_target_is_empty() {
        let cfg = WristConfig::paper_default();
        let opts = SweepOptions {
            target_angle: 0.0,
            ..Default::default()
        };
        let sweep = simulate_sweep(&cfg, &opts, || 0.0).unwrap();
        assert!(sweep.records.is_empty());
        assert_eq!(sweep.summary.positive.max_angle_deg, 0.0);
        assert_eq!(sweep.summary.branches, 0);
    }

    #[test]
    fn no_play_means_no_loop() {
        let cfg = WristConfig::paper_default();
        let opts = SweepOptions {
            play_radius: Some(0.0),
            axis: 2,
            ..Default::default()
        };
        let sweep = simulate_sweep(&cfg, &opts, || 0.0).unwrap();
        assert_eq!(sweep.summary.positive.loop_width_deg, 0.0);
        assert_eq!(sweep.summary.negative.loop_width_deg, 0.0);
        assert_eq!(sweep.summary.positive.tendon_id, 1);
    }

    #[test]
    fn unreachable_target_is_infeasible() {
        let cfg = WristConfig::paper_default();
        let opts = SweepOptions {
            target_angle: 400f64.to_radians(),
            ..Default::default()
        };
        assert!(matches!(
            simulate_sweep(&cfg, &opts, || 0.0),
            Err(ExperimentError::Infeasible(_))
        ));
    }

    #[test]
    fn fractional_increment_rejected() {
        let cfg = WristConfig::paper_default();
        let opts = SweepOptions {
            increment: 150e-6,
            ..Default::default()
        };
        assert!(matches!(
            simulate_sweep(&cfg, &opts, || 0.0),
            Err(ExperimentError::Options(_))
        ));
    }

    #[test]
    fn gripper_table_fencepost() {
        let cfg = WristConfig::paper_default();
        assert_eq!(gripper_table(&cfg, 0.05e-3, 100).unwrap().rows.len(), 101);
        let single = gripper_table(&cfg, 0.0, 100).unwrap();
        assert_eq!(single.rows.len(), 1);
        assert_eq!(single.rows[0].jaw_gap, 0.2e-3);
    }

    #[test]
    fn trace_residual_small() {
        let cfg = WristConfig::paper_default();
        let t = run_trace(&cfg, std::f64::consts::FRAC_PI_2, 36).unwrap();
        assert_eq!(t.rows.len(), 36);
        assert!(t.relative_residual < 1e-12, "{}", t.relative_residual);
    }
}
