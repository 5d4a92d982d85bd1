//! Constant-curvature kinematics of the bending section.
//!
//! The backbone is a single circular arc of length `L`, bent by `θ` in the
//! plane at angle `φ` from axis 1 (front view; axis 2 is the right view).
//! The arc base sits at the origin with its tangent along +z.

use std::f64::consts::TAU;

use nalgebra::{Matrix3, Rotation3, Unit, UnitQuaternion, Vector2, Vector3};
use serde::Serialize;
use thiserror::Error;

use crate::design::TendonLayout;

#[derive(Debug, Error, PartialEq)]
pub enum KinematicsError {
    #[error("nonpositive tendon offset {0:e} m")]
    NonpositiveOffset(f64),
    #[error("invalid bend state: {0}")]
    InvalidState(&'static str),
    #[error("target unreachable by a constant-curvature arc (miss {miss:e} m)")]
    Infeasible { miss: f64 },
    #[error("circular trace needs at least 3 steps, got {0}")]
    TraceTooShort(usize),
    #[error("circular trace needs a positive bend angle")]
    TraceAngle,
    #[error("circle fit needs at least 3 points")]
    TooFewPoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BendState {
    /// Bend angle θ ≥ 0 [rad].
    pub angle: f64,
    /// Bending-plane angle φ from axis 1 [rad]; 0 when straight.
    pub plane: f64,
    /// Arc length [m].
    pub length: f64,
}

impl BendState {
    pub fn new(angle: f64, plane: f64, length: f64) -> Result<Self, KinematicsError> {
        if !(angle >= 0.0) || !angle.is_finite() {
            return Err(KinematicsError::InvalidState("bend angle must be finite and >= 0"));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(KinematicsError::InvalidState("arc length must be positive"));
        }
        if !plane.is_finite() {
            return Err(KinematicsError::InvalidState("bending plane must be finite"));
        }
        let plane = if angle == 0.0 { 0.0 } else { plane };
        Ok(Self { angle, plane, length })
    }

    pub fn straight(length: f64) -> Self {
        Self {
            angle: 0.0,
            plane: 0.0,
            length,
        }
    }

    /// κ = θ / L [1/m].
    pub fn curvature(&self) -> f64 {
        self.angle / self.length
    }

    /// r = L / θ [m]; infinite when straight.
    pub fn radius(&self) -> f64 {
        self.length / self.angle
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TipPose {
    pub position: Vector3<f64>,
    /// Tip tangent frame; its local z is the arc tangent.
    pub orientation: Rotation3<f64>,
}

impl TipPose {
    /// Rotation of the tip frame about its own tangent, from a swing-twist
    /// split with respect to the base z axis [rad].
    pub fn axial_twist(&self) -> f64 {
        let q = UnitQuaternion::from_rotation_matrix(&self.orientation);
        let q = q.quaternion();
        // q and −q are the same rotation; pick w ≥ 0.
        let (k, w) = if q.w < 0.0 { (-q.k, -q.w) } else { (q.k, q.w) };
        2.0 * k.atan2(w)
    }
}

/// θ = ΔL / d. Signed: a negative result means the antagonist shortens.
pub fn bend_from_displacement(displacement: f64, offset: f64) -> Result<f64, KinematicsError> {
    if !(offset > 0.0) {
        return Err(KinematicsError::NonpositiveOffset(offset));
    }
    Ok(displacement / offset)
}

/// ΔL_i = d·θ·cos(φ_i − φ); positive values shorten (pull) the tendon.
pub fn tendon_displacements(state: &BendState, layout: &TendonLayout) -> Vec<f64> {
    layout
        .stations
        .iter()
        .map(|&station| layout.offset * state.angle * (station - state.plane).cos())
        .collect()
}

/// In-plane tip coordinates `(ρ, z)` of an arc of length `length` bent by
/// `angle`. Written with half-angle forms so small angles stay accurate.
fn planar_tip(angle: f64, length: f64) -> Vector2<f64> {
    if angle == 0.0 {
        return Vector2::new(0.0, length);
    }
    let half = 0.5 * angle;
    let s = half.sin();
    Vector2::new(length * 2.0 * s * s / angle, length * angle.sin() / angle)
}

fn planar_tip_derivative(angle: f64, length: f64) -> Vector2<f64> {
    if angle < 1e-4 {
        let a2 = angle * angle;
        return Vector2::new(
            length * (0.5 - a2 / 8.0),
            length * (-angle / 3.0 + angle * a2 / 30.0),
        );
    }
    let (s, c) = angle.sin_cos();
    let a2 = angle * angle;
    Vector2::new(
        length * (angle * s - (1.0 - c)) / a2,
        length * (angle * c - s) / a2,
    )
}

fn bending_axis(plane: f64) -> Unit<Vector3<f64>> {
    let (s, c) = plane.sin_cos();
    // R_z(φ)·ŷ
    Unit::new_unchecked(Vector3::new(-s, c, 0.0))
}

/// Closed-form constant-curvature tip pose. The frame is swung about the
/// bending axis with no axial twist.
pub fn forward_kinematics(state: &BendState) -> TipPose {
    if state.angle == 0.0 {
        return TipPose {
            position: Vector3::new(0.0, 0.0, state.length),
            orientation: Rotation3::identity(),
        };
    }
    let p = planar_tip(state.angle, state.length);
    let (s, c) = state.plane.sin_cos();
    TipPose {
        position: Vector3::new(c * p.x, s * p.x, p.y),
        orientation: Rotation3::from_axis_angle(&bending_axis(state.plane), state.angle),
    }
}

/// Chain of `cells` rigid links of length `L/cells`, link `k` pitched by
/// `(k + ½)·θ/cells`. Converges to [`forward_kinematics`] as the cell
/// count grows; kept as an independent check on the closed form.
pub fn discrete_cell_fk(state: &BendState, cells: usize) -> TipPose {
    let cells = cells.max(1);
    let link = state.length / cells as f64;
    let dtheta = state.angle / cells as f64;
    let (ds, dc) = dtheta.sin_cos();
    let (mut s, mut c) = (0.5 * dtheta).sin_cos();
    let mut rho = 0.0;
    let mut z = 0.0;
    for k in 0..cells {
        if k % 4096 == 0 {
            // Re-anchor the rotation recurrence to bound drift.
            let (s0, c0) = ((k as f64 + 0.5) * dtheta).sin_cos();
            s = s0;
            c = c0;
        }
        rho += link * s;
        z += link * c;
        let next_s = s * dc + c * ds;
        c = c * dc - s * ds;
        s = next_s;
    }
    let (ps, pc) = state.plane.sin_cos();
    TipPose {
        position: Vector3::new(pc * rho, ps * rho, z),
        orientation: Rotation3::from_axis_angle(&bending_axis(state.plane), state.angle),
    }
}

/// Bend state reaching `target` with an arc of length `length`.
///
/// The plane comes from the transverse components. The bend angle starts
/// at the chord-direction estimate `2·atan2(ρ, z)` and is polished by
/// Gauss-Newton on the planar residual until the step drops below 1e-12
/// rad. Targets missed by more than `1e-6·L` are infeasible.
pub fn inverse_kinematics(target: &Vector3<f64>, length: f64) -> Result<BendState, KinematicsError> {
    if !(length > 0.0) {
        return Err(KinematicsError::InvalidState("arc length must be positive"));
    }
    let tolerance = 1e-6 * length;
    let rho = target.x.hypot(target.y);
    let planar = Vector2::new(rho, target.z);

    let mut angle = 2.0 * rho.atan2(target.z);
    for _ in 0..50 {
        let r = planar_tip(angle, length) - planar;
        let j = planar_tip_derivative(angle, length);
        let jj = j.dot(&j);
        if jj == 0.0 {
            break;
        }
        let step = j.dot(&r) / jj;
        angle = (angle - step).clamp(0.0, TAU);
        if step.abs() < 1e-12 {
            break;
        }
    }

    let plane = if angle == 0.0 { 0.0 } else { target.y.atan2(target.x) };
    let state = BendState::new(angle, plane, length)?;
    let miss = (forward_kinematics(&state).position - target).norm();
    if !(miss <= tolerance) {
        return Err(KinematicsError::Infeasible { miss });
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub index: usize,
    pub state: BendState,
    /// Per-tendon displacement [m], ordered as the layout stations.
    pub displacements: Vec<f64>,
}

/// Sweeps the bending plane once around at constant bend angle:
/// step `k` has `φ = 2πk / n_steps`.
pub fn circular_trace(
    angle: f64,
    n_steps: usize,
    layout: &TendonLayout,
    length: f64,
) -> Result<Vec<TraceStep>, KinematicsError> {
    if n_steps < 3 {
        return Err(KinematicsError::TraceTooShort(n_steps));
    }
    if !(angle > 0.0) {
        return Err(KinematicsError::TraceAngle);
    }
    (0..n_steps)
        .map(|k| {
            let state = BendState::new(angle, TAU * k as f64 / n_steps as f64, length)?;
            Ok(TraceStep {
                index: k,
                displacements: tendon_displacements(&state, layout),
                state,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleFit {
    pub center: Vector3<f64>,
    pub normal: Vector3<f64>,
    pub radius: f64,
    /// RMS distance of the points from the fitted circle [m].
    pub residual: f64,
}

/// Least-squares circle through 3-D points: best-fit plane from the
/// covariance eigenvectors, then an algebraic circle fit inside the plane.
pub fn fit_circle(points: &[Vector3<f64>]) -> Result<CircleFit, KinematicsError> {
    if points.len() < 3 {
        return Err(KinematicsError::TooFewPoints);
    }
    let n = points.len() as f64;
    let centroid = points.iter().sum::<Vector3<f64>>() / n;
    let cov = points.iter().fold(Matrix3::zeros(), |acc, p| {
        let d = p - centroid;
        acc + d * d.transpose()
    });
    let eig = cov.symmetric_eigen();
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let normal: Vector3<f64> = eig.eigenvectors.column(order[0]).into();
    let e1: Vector3<f64> = eig.eigenvectors.column(order[2]).into();
    let e2 = normal.cross(&e1);

    // Kasa fit: minimise Σ (u² + v² + a·u + b·v + c)².
    let local: Vec<(f64, f64, f64)> = points
        .iter()
        .map(|p| {
            let d = p - centroid;
            (d.dot(&e1), d.dot(&e2), d.dot(&normal))
        })
        .collect();
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    for &(u, v, _) in &local {
        let row = Vector3::new(u, v, 1.0);
        ata += row * row.transpose();
        atb += row * -(u * u + v * v);
    }
    let sol = ata
        .lu()
        .solve(&atb)
        .ok_or(KinematicsError::TooFewPoints)?;
    let (cu, cv) = (-0.5 * sol.x, -0.5 * sol.y);
    let radius = (cu * cu + cv * cv - sol.z).max(0.0).sqrt();
    let sq: f64 = local
        .iter()
        .map(|&(u, v, w)| {
            let radial = (u - cu).hypot(v - cv) - radius;
            radial * radial + w * w
        })
        .sum();
    Ok(CircleFit {
        center: centroid + e1 * cu + e2 * cv,
        normal,
        radius,
        residual: (sq / n).sqrt(),
    })
}
