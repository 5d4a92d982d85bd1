//! Simulation and characterization models for a millimeter-scale
//! tendon-driven continuum wrist with an integrated gripper.
//!
//! Modules follow the physical chain: [`design`] holds the geometry and
//! material, [`mechanics`] turns it into bending stiffness and tendon
//! tension, [`kinematics`] maps bends to tip poses and tendon
//! displacements, [`hysteresis`] adds tendon-channel friction,
//! [`actuation`] quantizes commands for the linear actuators, and
//! [`gripper`] models jaw closure. [`experiments`] strings them together
//! into the characterization protocols.

pub mod actuation;
pub mod config;
pub mod design;
pub mod experiments;
pub mod gripper;
pub mod hysteresis;
pub mod kinematics;
pub mod mechanics;

pub use actuation::{quantize, ActuatorCommand, ActuatorLimits};
pub use config::WristConfig;
pub use design::{
    layout_four_tendon, layout_three_tendon, validate_design, GripperDesign, MaterialSpec,
    TendonLayout, ValidationReport, WristDesign,
};
pub use hysteresis::{HysteresisParams, HysteresisState};
pub use kinematics::{BendState, TipPose};
pub use mechanics::StiffnessModel;
