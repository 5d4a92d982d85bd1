//! Geometric and material parameters of the wrist, plus validation.
//!
//! Everything is SI internally (meters, pascals, radians). The defaults
//! describe the 1.25 mm square, 3.75 mm long backbone with a 5.47 mm
//! overall length once the gripper is attached.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Angular stations of the tendon channels around the backbone, all at a
/// common radial offset from the neutral axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TendonLayout {
    /// Radial offset `d` of every channel [m].
    pub offset: f64,
    /// Station angles measured from bending axis 1 [rad].
    pub stations: Vec<f64>,
}

impl TendonLayout {
    pub fn len(&self) -> usize {
        self.stations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stations.is_empty()
    }
}

/// Three channels spaced evenly around the circumference: `{0, 2π/3, 4π/3}`.
pub fn layout_three_tendon(offset: f64) -> TendonLayout {
    TendonLayout {
        offset,
        stations: vec![0.0, TAU / 3.0, 2.0 * TAU / 3.0],
    }
}

/// Two antagonistic pairs, one per primary axis: `{0, π/2, π, 3π/2}`.
///
/// Indices 0/2 form the axis-1 pair and 1/3 the axis-2 pair.
pub fn layout_four_tendon(offset: f64) -> TendonLayout {
    TendonLayout {
        offset,
        stations: vec![0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2],
    }
}

/// Simply supported center plate and the jaws it drives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GripperDesign {
    /// Span between the plate's simple supports [m].
    pub plate_length: f64,
    /// Lever arm from the plate end to the jaw tip [m].
    pub jaw_length: f64,
    /// Jaw gap with the central tendon slack [m].
    pub initial_gap: f64,
    pub plate_width: f64,
    pub plate_thickness_g: f64,
}

impl Default for GripperDesign {
    fn default() -> Self {
        Self {
            plate_length: 1.0e-3,
            jaw_length: 0.8e-3,
            initial_gap: 0.2e-3,
            plate_width: 0.4e-3,
            plate_thickness_g: 20e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WristDesign {
    /// Side of the square cross-section [m].
    pub side_length: f64,
    /// Length of the bending section [m].
    pub backbone_length: f64,
    /// Backbone plus gripper [m].
    pub total_length: f64,
    pub cell_count: u32,
    /// Axial extent of one unit cell [m].
    pub cell_pitch: f64,
    /// Wall thickness of the thin-plate segments [m].
    pub plate_thickness: f64,
    /// In-plane bending span of one plate segment [m].
    pub plate_span: f64,
    pub plates_per_cell: u32,
    pub tendon_layout: TendonLayout,
    pub gripper: GripperDesign,
}

impl WristDesign {
    /// The printed device: 12 cells of 0.3125 mm pitch, three tendons at
    /// 0.45 mm offset.
    pub fn paper_default() -> Self {
        Self {
            side_length: 1.25e-3,
            backbone_length: 3.75e-3,
            total_length: 5.47e-3,
            cell_count: 12,
            cell_pitch: 0.3125e-3,
            plate_thickness: 20e-6,
            plate_span: 0.3e-3,
            plates_per_cell: 4,
            tendon_layout: layout_three_tendon(0.45e-3),
            gripper: GripperDesign::default(),
        }
    }

    pub fn tendon_offset(&self) -> f64 {
        self.tendon_layout.offset
    }

    /// Same design with the channel stations replaced by the four-tendon
    /// characterization layout.
    pub fn with_four_tendons(&self) -> Self {
        Self {
            tendon_layout: layout_four_tendon(self.tendon_offset()),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

impl Default for WristDesign {
    fn default() -> Self {
        Self::paper_default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    /// Young's modulus of the printed resin [Pa].
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    /// Tendon wire diameter [m].
    pub tendon_diameter: f64,
    /// Ultimate tensile strength of the tendon wire [Pa].
    pub tendon_tensile_strength: f64,
}

impl MaterialSpec {
    /// Cross-sectional area of one tendon [m²].
    pub fn tendon_area(&self) -> f64 {
        let r = 0.5 * self.tendon_diameter;
        PI * r * r
    }

    /// Tension at which the tendon wire breaks [N].
    pub fn tendon_break_tension(&self) -> f64 {
        self.tendon_tensile_strength * self.tendon_area()
    }
}

impl Default for MaterialSpec {
    fn default() -> Self {
        Self {
            youngs_modulus: 5e9,
            poisson_ratio: 0.35,
            tendon_diameter: 25e-6,
            tendon_tensile_strength: 3.4e9,
        }
    }
}

/// One failed invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Nonpositive(&'static str),
    CellPitchMismatch { cells_times_pitch: f64, backbone_length: f64 },
    TendonOffsetOutsideCrossSection { offset: f64, half_side: f64 },
    DuplicateTendonStation { first: usize, second: usize },
    NoTendons,
    TotalLengthNotBeyondBackbone,
    PoissonRatioOutOfRange(f64),
    GripperGapExceedsSide,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Nonpositive(field) => write!(f, "nonpositive {field}"),
            Violation::CellPitchMismatch {
                cells_times_pitch,
                backbone_length,
            } => write!(
                f,
                "cell_count x cell_pitch = {cells_times_pitch:e} m does not match backbone_length {backbone_length:e} m"
            ),
            Violation::TendonOffsetOutsideCrossSection { offset, half_side } => write!(
                f,
                "tendon offset outside cross-section ({offset:e} m >= {half_side:e} m)"
            ),
            Violation::DuplicateTendonStation { first, second } => {
                write!(f, "tendon stations {first} and {second} coincide modulo 2pi")
            }
            Violation::NoTendons => write!(f, "tendon layout has no stations"),
            Violation::TotalLengthNotBeyondBackbone => {
                write!(f, "total_length must exceed backbone_length")
            }
            Violation::PoissonRatioOutOfRange(nu) => {
                write!(f, "poisson_ratio {nu} outside [0, 0.5)")
            }
            Violation::GripperGapExceedsSide => {
                write!(f, "gripper initial_gap must be smaller than side_length")
            }
        }
    }
}

/// Every invariant violated by a design, in check order.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

fn positive(value: f64, name: &'static str, out: &mut Vec<Violation>) {
    // NaN fails too.
    if !(value > 0.0) {
        out.push(Violation::Nonpositive(name));
    }
}

/// Checks every geometric and material invariant and returns the design
/// untouched when all hold. Nothing is clamped.
pub fn validate_design(
    design: &WristDesign,
    material: &MaterialSpec,
) -> Result<WristDesign, ValidationReport> {
    let mut v = Vec::new();

    positive(design.side_length, "side_length", &mut v);
    positive(design.backbone_length, "backbone_length", &mut v);
    positive(design.total_length, "total_length", &mut v);
    if design.cell_count == 0 {
        v.push(Violation::Nonpositive("cell_count"));
    }
    positive(design.cell_pitch, "cell_pitch", &mut v);
    positive(design.plate_thickness, "plate_thickness", &mut v);
    positive(design.plate_span, "plate_span", &mut v);
    if design.plates_per_cell == 0 {
        v.push(Violation::Nonpositive("plates_per_cell"));
    }
    positive(design.tendon_layout.offset, "tendon offset", &mut v);

    if design.cell_count > 0 && design.cell_pitch > 0.0 && design.backbone_length > 0.0 {
        let product = f64::from(design.cell_count) * design.cell_pitch;
        if ((product - design.backbone_length) / design.backbone_length).abs() > 1e-12 {
            v.push(Violation::CellPitchMismatch {
                cells_times_pitch: product,
                backbone_length: design.backbone_length,
            });
        }
    }

    let half_side = 0.5 * design.side_length;
    if design.tendon_layout.offset >= half_side {
        v.push(Violation::TendonOffsetOutsideCrossSection {
            offset: design.tendon_layout.offset,
            half_side,
        });
    }

    let stations = &design.tendon_layout.stations;
    if stations.is_empty() {
        v.push(Violation::NoTendons);
    }
    for i in 0..stations.len() {
        for j in (i + 1)..stations.len() {
            let gap = (stations[i] - stations[j]).rem_euclid(TAU);
            if gap.min(TAU - gap) < 1e-9 {
                v.push(Violation::DuplicateTendonStation { first: i, second: j });
            }
        }
    }

    if !(design.total_length > design.backbone_length) {
        v.push(Violation::TotalLengthNotBeyondBackbone);
    }

    let g = &design.gripper;
    positive(g.plate_length, "gripper plate_length", &mut v);
    positive(g.jaw_length, "gripper jaw_length", &mut v);
    positive(g.initial_gap, "gripper initial_gap", &mut v);
    positive(g.plate_width, "gripper plate_width", &mut v);
    positive(g.plate_thickness_g, "gripper plate_thickness_g", &mut v);
    if !(g.initial_gap < design.side_length) {
        v.push(Violation::GripperGapExceedsSide);
    }

    positive(material.youngs_modulus, "youngs_modulus", &mut v);
    if !(0.0..0.5).contains(&material.poisson_ratio) {
        v.push(Violation::PoissonRatioOutOfRange(material.poisson_ratio));
    }
    positive(material.tendon_diameter, "tendon_diameter", &mut v);
    positive(
        material.tendon_tensile_strength,
        "tendon_tensile_strength",
        &mut v,
    );

    if v.is_empty() {
        Ok(design.clone())
    } else {
        Err(ValidationReport { violations: v })
    }
}
