use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

use super::geometry::{MechanismGeometry, Pose};
use super::ik::{cross2, JointState};
use super::mode::{ActuatingMode, LegDrive};

/// Serial singularity threshold on |sin(delta_i - alpha_i)|.
pub const SERIAL_SIN_TOL: f64 = 1e-8;

/// Parallel singularity threshold on |det(A_norm)|, scaled by the cubed
/// Frobenius norm of the normalized direct matrix.
pub const PARALLEL_DET_TOL: f64 = 1e-10;

/// Direct and inverse Jacobian matrices of the velocity relation
/// `A * t = B * qdot` for one pose and actuating mode.
///
/// Row i of `direct` is the wrench of the leg's transmitted-force line:
/// `[(c_i - h_i)^T, -(c_i - h_i)^T E (p - c_i)]` with `h_i = b_i` for a
/// proximal-driven leg and `h_i = a_i` for a distal-driven leg. `inverse_diag`
/// holds the diagonal of B, `(c_i - b_i)^T E (b_i - a_i)`, which does not
/// depend on the actuating mode.
#[derive(Clone, Copy, Debug)]
pub struct JacobianPair {
    pub direct: Matrix3<f64>,
    pub inverse_diag: [f64; 3],
    /// Product of the link lengths; relates the B diagonal to
    /// sin(delta - alpha) for singularity tests.
    serial_scale: f64,
}

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum SingularityError {
    /// det(A_norm) vanishes: the transmitted-force lines are concurrent,
    /// possibly at infinity.
    #[error("parallel singularity: direct matrix is singular")]
    Parallel,
    /// A diagonal entry of B vanishes: leg points A, B, C are aligned
    /// (1-based leg index).
    #[error("serial singularity: leg {leg} aligned")]
    Serial { leg: usize },
}

/// Singularity predicates for one pose and actuating mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingularityFlags {
    /// Per leg: points A_i, B_i, C_i aligned within tolerance.
    pub serial: [bool; 3],
    /// det(A_norm) below tolerance.
    pub parallel: bool,
}

impl SingularityFlags {
    pub fn any_serial(&self) -> bool {
        self.serial.iter().any(|&s| s)
    }
}

/// Builds the Jacobian pair from a solved joint state.
pub fn jacobian_pair(
    geometry: &MechanismGeometry,
    state: &JointState,
    pose: &Pose,
    mode: &ActuatingMode,
) -> JacobianPair {
    let p = pose.position();
    let mut direct = Matrix3::zeros();
    let mut inverse_diag = [0.0; 3];

    for leg in 0..3 {
        let a = geometry.base_anchors[leg];
        let b = state.elbow_points[leg];
        let c = state.platform_points[leg];
        let h = match mode.drive(leg) {
            LegDrive::Proximal => b,
            LegDrive::Distal => a,
        };
        let dir = c - h;
        direct[(leg, 0)] = dir.x;
        direct[(leg, 1)] = dir.y;
        direct[(leg, 2)] = cross2(dir, p - c);
        inverse_diag[leg] = cross2(b - a, c - b);
    }

    JacobianPair {
        direct,
        inverse_diag,
        serial_scale: geometry.proximal_length * geometry.distal_length,
    }
}

impl JacobianPair {
    /// Direct matrix with its moment column divided by the normalizing
    /// length, making the entries dimensionally homogeneous.
    pub fn normalized_direct(&self, char_length: f64) -> Matrix3<f64> {
        let mut m = self.direct;
        m.set_column(2, &(m.column(2) / char_length));
        m
    }

    /// det(A_norm) together with the scale-aware threshold below which the
    /// matrix counts as singular.
    pub fn normalized_det(&self, char_length: f64) -> (f64, f64) {
        let a = self.normalized_direct(char_length);
        let det = a.determinant();
        let scale = a.norm();
        (det, PARALLEL_DET_TOL * scale * scale * scale)
    }

    pub fn is_parallel_singular(&self, char_length: f64) -> bool {
        let (det, tol) = self.normalized_det(char_length);
        det.abs() < tol
    }

    pub fn serial_flags(&self) -> [bool; 3] {
        self.inverse_diag
            .map(|b| b.abs() < SERIAL_SIN_TOL * self.serial_scale)
    }
}

/// Kinematic Jacobian `J = A_norm^-1 * B`.
///
/// `J` maps actuated joint rates to the homogenized twist
/// `(xdot, ydot, char_length * phidot)`.
pub fn kinematic_jacobian(
    pair: &JacobianPair,
    char_length: f64,
) -> Result<Matrix3<f64>, SingularityError> {
    let (det, tol) = pair.normalized_det(char_length);
    if det.abs() < tol {
        return Err(SingularityError::Parallel);
    }
    let inv = pair
        .normalized_direct(char_length)
        .try_inverse()
        .ok_or(SingularityError::Parallel)?;
    let mut j = inv;
    for col in 0..3 {
        j.set_column(col, &(inv.column(col) * pair.inverse_diag[col]));
    }
    Ok(j)
}

/// Rate-inverse matrix `K = B^-1 * A_norm`, so that `qdot = K * t` with the
/// same homogenized twist convention as [`kinematic_jacobian`]; `K * J` is
/// the identity whenever both exist.
pub fn rate_inverse(pair: &JacobianPair, char_length: f64) -> Result<Matrix3<f64>, SingularityError> {
    let serial = pair.serial_flags();
    if let Some(leg) = serial.iter().position(|&s| s) {
        return Err(SingularityError::Serial { leg: leg + 1 });
    }
    let a = pair.normalized_direct(char_length);
    let mut k = a;
    for row in 0..3 {
        k.set_row(row, &(a.row(row) / pair.inverse_diag[row]));
    }
    Ok(k)
}

/// Serial and parallel singularity predicates for a pose.
pub fn singularity_flags(
    geometry: &MechanismGeometry,
    state: &JointState,
    pose: &Pose,
    mode: &ActuatingMode,
    char_length: f64,
) -> SingularityFlags {
    let pair = jacobian_pair(geometry, state, pose, mode);
    SingularityFlags {
        serial: pair.serial_flags(),
        parallel: pair.is_parallel_singular(char_length),
    }
}

/// Actuated joint coordinates `q_i` consistent with the velocity relation
/// `A * t = B * qdot`.
///
/// A proximal-driven leg contributes alpha_i. For a distal-driven leg the
/// wrench row `(c_i - a_i)^T` pairs with the coordinate `alpha_i - delta_i`
/// (the negated elbow angle): dotting the loop-closure rate with
/// `(c_i - a_i)` leaves exactly `B_ii * (alphadot_i - deltadot_i)`.
pub fn actuated_coordinates(state: &JointState, mode: &ActuatingMode) -> [f64; 3] {
    let mut q = [0.0; 3];
    for leg in 0..3 {
        q[leg] = match mode.drive(leg) {
            LegDrive::Proximal => state.alpha[leg],
            LegDrive::Distal => state.alpha[leg] - state.delta[leg],
        };
    }
    q
}

/// Homogenized twist `(xdot, ydot, char_length * phidot)` matching the
/// column convention of the normalized direct matrix.
pub fn homogenized_twist(twist: &Vector3<f64>, char_length: f64) -> Vector3<f64> {
    Vector3::new(twist.x, twist.y, char_length * twist.z)
}
