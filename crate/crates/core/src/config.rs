//! Flat key-value design files.
//!
//! One TOML table with keys named after the model fields (SI units).
//! Missing keys fall back to the canonical `paper-default` design; unknown
//! keys are rejected.

use serde::Deserialize;
use thiserror::Error;

use crate::actuation::{ActuationError, ActuatorLimits};
use crate::design::{
    validate_design, GripperDesign, MaterialSpec, TendonLayout, ValidationReport, WristDesign,
};

/// Text of the canonical design file.
pub const PAPER_DEFAULT: &str = include_str!("../designs/paper-default.toml");

/// Name accepted in place of a path for the embedded design.
pub const PAPER_DEFAULT_NAME: &str = "paper-default";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse design file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid design:\n{0}")]
    Invalid(#[from] ValidationReport),
    #[error("invalid actuator limits: {0}")]
    Limits(#[from] ActuationError),
    #[error("invalid play_radius {0}")]
    PlayRadius(f64),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatConfig {
    side_length: Option<f64>,
    backbone_length: Option<f64>,
    total_length: Option<f64>,
    cell_count: Option<u32>,
    cell_pitch: Option<f64>,
    plate_thickness: Option<f64>,
    plate_span: Option<f64>,
    plates_per_cell: Option<u32>,
    tendon_offset: Option<f64>,
    tendon_stations: Option<Vec<f64>>,
    plate_length: Option<f64>,
    jaw_length: Option<f64>,
    initial_gap: Option<f64>,
    plate_width: Option<f64>,
    plate_thickness_g: Option<f64>,
    youngs_modulus: Option<f64>,
    poisson_ratio: Option<f64>,
    tendon_diameter: Option<f64>,
    tendon_tensile_strength: Option<f64>,
    stroke: Option<f64>,
    rated_force: Option<f64>,
    step: Option<f64>,
    play_radius: Option<f64>,
}

/// Everything a design file describes.
#[derive(Debug, Clone, PartialEq)]
pub struct WristConfig {
    pub design: WristDesign,
    pub material: MaterialSpec,
    pub limits: ActuatorLimits,
    /// Tendon-channel play radius [m].
    pub play_radius: f64,
}

impl WristConfig {
    pub fn paper_default() -> Self {
        Self::parse(PAPER_DEFAULT).expect("embedded design is valid")
    }

    /// Parses and validates a design file. Keys not present keep the values
    /// of the built-in defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let flat: FlatConfig = toml::from_str(text)?;
        let d = WristDesign::paper_default();
        let g = GripperDesign::default();
        let m = MaterialSpec::default();
        let l = ActuatorLimits::default();

        let design = WristDesign {
            side_length: flat.side_length.unwrap_or(d.side_length),
            backbone_length: flat.backbone_length.unwrap_or(d.backbone_length),
            total_length: flat.total_length.unwrap_or(d.total_length),
            cell_count: flat.cell_count.unwrap_or(d.cell_count),
            cell_pitch: flat.cell_pitch.unwrap_or(d.cell_pitch),
            plate_thickness: flat.plate_thickness.unwrap_or(d.plate_thickness),
            plate_span: flat.plate_span.unwrap_or(d.plate_span),
            plates_per_cell: flat.plates_per_cell.unwrap_or(d.plates_per_cell),
            tendon_layout: TendonLayout {
                offset: flat.tendon_offset.unwrap_or(d.tendon_layout.offset),
                stations: flat.tendon_stations.unwrap_or(d.tendon_layout.stations),
            },
            gripper: GripperDesign {
                plate_length: flat.plate_length.unwrap_or(g.plate_length),
                jaw_length: flat.jaw_length.unwrap_or(g.jaw_length),
                initial_gap: flat.initial_gap.unwrap_or(g.initial_gap),
                plate_width: flat.plate_width.unwrap_or(g.plate_width),
                plate_thickness_g: flat.plate_thickness_g.unwrap_or(g.plate_thickness_g),
            },
        };
        let material = MaterialSpec {
            youngs_modulus: flat.youngs_modulus.unwrap_or(m.youngs_modulus),
            poisson_ratio: flat.poisson_ratio.unwrap_or(m.poisson_ratio),
            tendon_diameter: flat.tendon_diameter.unwrap_or(m.tendon_diameter),
            tendon_tensile_strength: flat
                .tendon_tensile_strength
                .unwrap_or(m.tendon_tensile_strength),
        };
        let limits = ActuatorLimits {
            stroke: flat.stroke.unwrap_or(l.stroke),
            rated_force: flat.rated_force.unwrap_or(l.rated_force),
            step: flat.step.unwrap_or(l.step),
        };
        let play_radius = flat.play_radius.unwrap_or(0.05e-3);

        validate_design(&design, &material)?;
        limits.check()?;
        if !(play_radius >= 0.0) || !play_radius.is_finite() {
            return Err(ConfigError::PlayRadius(play_radius));
        }
        Ok(Self {
            design,
            material,
            limits,
            play_radius,
        })
    }
}
