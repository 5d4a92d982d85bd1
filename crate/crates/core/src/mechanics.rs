//! Bending stiffness of the backbone and the tendon tension it demands.
//!
//! The stiffness is a first-order surrogate: each unit cell behaves as
//! `plates_per_cell` thin plates acting in parallel, and the cells act in
//! series along the backbone. Statics is a single moment balance
//! `T·d = k_wrist·θ`; friction and gravity are not part of it.

use serde::Serialize;
use thiserror::Error;

use crate::actuation::ActuatorLimits;
use crate::design::{validate_design, MaterialSpec, ValidationReport, WristDesign};

#[derive(Debug, Error, PartialEq)]
pub enum MechanicsError {
    #[error("nonpositive plate thickness {0:e} m")]
    NonpositiveThickness(f64),
    #[error("negative bend angle {0} rad")]
    NegativeAngle(f64),
    #[error("invalid design:\n{0}")]
    InvalidDesign(#[from] ValidationReport),
    #[error("calibration pair must have positive tension and angle")]
    BadCalibration,
}

/// Thin-plate flexural rigidity `D = E·t³ / (12·(1 − ν²))` [N·m].
pub fn plate_flexural_rigidity(material: &MaterialSpec, thickness: f64) -> Result<f64, MechanicsError> {
    if !(thickness > 0.0) {
        return Err(MechanicsError::NonpositiveThickness(thickness));
    }
    let nu = material.poisson_ratio;
    Ok(material.youngs_modulus * thickness.powi(3) / (12.0 * (1.0 - nu * nu)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StiffnessModel {
    /// Flexural rigidity of one plate segment [N·m].
    pub plate_rigidity: f64,
    /// Rotational stiffness of one unit cell [N·m/rad].
    pub cell_stiffness: f64,
    /// Rotational stiffness of the whole bending section [N·m/rad].
    pub wrist_stiffness: f64,
}

impl StiffnessModel {
    /// Rescales the wrist stiffness so that a measured `(tension, angle)`
    /// pair satisfies the moment balance exactly at tendon offset `offset`.
    /// Cell stiffness is scaled by the same factor.
    pub fn calibrated(&self, tension: f64, angle: f64, offset: f64) -> Result<Self, MechanicsError> {
        if !(tension > 0.0 && angle > 0.0 && offset > 0.0) {
            return Err(MechanicsError::BadCalibration);
        }
        let target = tension * offset / angle;
        let scale = target / self.wrist_stiffness;
        Ok(Self {
            plate_rigidity: self.plate_rigidity * scale,
            cell_stiffness: self.cell_stiffness * scale,
            wrist_stiffness: target,
        })
    }
}

/// `k_cell = plates_per_cell · D · side_length / plate_span`, and
/// `k_wrist = k_cell / cell_count`.
pub fn cell_stiffness(design: &WristDesign, material: &MaterialSpec) -> Result<StiffnessModel, MechanicsError> {
    validate_design(design, material)?;
    let d = plate_flexural_rigidity(material, design.plate_thickness)?;
    let k_cell = f64::from(design.plates_per_cell) * d * design.side_length / design.plate_span;
    Ok(StiffnessModel {
        plate_rigidity: d,
        cell_stiffness: k_cell,
        wrist_stiffness: k_cell / f64::from(design.cell_count),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadFlag {
    TendonOverload,
    ActuatorOverload,
}

/// Tension required for a bend, with any exceeded limit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensionReport {
    /// [N]
    pub tension: f64,
    /// Tendon breakage is always listed before actuator overload.
    pub flags: Vec<LoadFlag>,
}

impl TensionReport {
    pub fn is_ok(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Tendon tension `T = k_wrist·θ / d` for a bend of `angle` radians.
pub fn tension_for_bend(
    design: &WristDesign,
    material: &MaterialSpec,
    stiffness: &StiffnessModel,
    limits: &ActuatorLimits,
    angle: f64,
) -> Result<TensionReport, MechanicsError> {
    validate_design(design, material)?;
    if !(angle >= 0.0) {
        return Err(MechanicsError::NegativeAngle(angle));
    }
    let tension = stiffness.wrist_stiffness * angle / design.tendon_offset();
    let mut flags = Vec::new();
    if tension > material.tendon_break_tension() {
        flags.push(LoadFlag::TendonOverload);
    }
    if tension > limits.rated_force {
        flags.push(LoadFlag::ActuatorOverload);
    }
    Ok(TensionReport { tension, flags })
}

/// Inverse of [`tension_for_bend`]: `θ = T·d / k_wrist`.
pub fn bend_for_tension(design: &WristDesign, stiffness: &StiffnessModel, tension: f64) -> f64 {
    tension * design.tendon_offset() / stiffness.wrist_stiffness
}

/// Bend at which adjacent cell faces touch: `N · 2·atan(p / a)`.
pub fn self_contact_cap(design: &WristDesign) -> f64 {
    f64::from(design.cell_count) * 2.0 * (design.cell_pitch / design.side_length).atan()
}

/// Largest bend reachable without breaking the tendon, overloading the
/// actuator, running out of stroke or exceeding the self-contact cap.
/// Returns 0 for invalid inputs or when any limit is zero.
pub fn max_bend_under_limits(
    design: &WristDesign,
    material: &MaterialSpec,
    stiffness: &StiffnessModel,
    limits: &ActuatorLimits,
) -> f64 {
    if validate_design(design, material).is_err() {
        return 0.0;
    }
    let d = design.tendon_offset();
    let allowed_tension = material.tendon_break_tension().min(limits.rated_force);
    // Agonist tendon aligned with the bending plane needs ΔL = d·θ.
    let by_tension = allowed_tension * d / stiffness.wrist_stiffness;
    let by_stroke = limits.stroke / d;
    by_tension
        .min(by_stroke)
        .min(self_contact_cap(design))
        .max(0.0)
}
