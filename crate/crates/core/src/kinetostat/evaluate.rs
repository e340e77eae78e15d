use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix3, Point2};

use super::condition::frobenius_condition;
use super::transmission::{fold_to_right_angle, instantaneous_center, ForceLine, Icr};
use crate::mech::{
    full_ik, jacobian_pair, kinematic_jacobian, ActuatingMode, IkError, JointState, LegDrive,
    MechanismGeometry, Pose, WorkingMode,
};

/// Per-pose kinetostatic indices for one actuating mode.
#[derive(Clone, Copy, Debug)]
pub struct PoseIndices {
    pub serial: [bool; 3],
    pub parallel: bool,
    /// Inverse Frobenius condition number of the normalized kinematic
    /// Jacobian; zero at serial or parallel singularities.
    pub inv_condition: f64,
    /// Mechanism transmission angle, max over legs, in [0, pi/2].
    pub psi: f64,
    pub psi_per_leg: [f64; 3],
}

/// Composite per-pose performance record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerformanceSample {
    pub reachable: bool,
    pub serial_singular: bool,
    pub parallel_singular: bool,
    pub inv_condition: Option<f64>,
    pub transmission_angles: Option<[f64; 3]>,
    pub transmission_angle: Option<f64>,
}

impl PerformanceSample {
    fn unreachable() -> Self {
        PerformanceSample {
            reachable: false,
            serial_singular: false,
            parallel_singular: false,
            inv_condition: None,
            transmission_angles: None,
            transmission_angle: None,
        }
    }
}

/// Shared per-pose work for evaluating several actuating modes: the force
/// lines and wrench rows of both drive variants per leg, and the velocity
/// directions of all twelve instantaneous-centre combinations.
pub struct PoseModeEvaluator {
    platform: [Point2<f64>; 3],
    /// Wrench row per leg and drive variant (moment column unnormalized).
    rows: [[[f64; 3]; 2]; 3],
    /// Force line per leg and drive variant; None when the defining vector
    /// degenerates (platform point on the base anchor).
    lines: [[Option<ForceLine>; 2]; 3],
    /// inverse-Jacobian diagonal (mode independent).
    b_diag: [f64; 3],
    serial: [bool; 3],
    /// beta[leg][drive_j][drive_k]: velocity direction of C_leg from the
    /// other two legs' force lines; None when those lines are coincident or
    /// degenerate.
    beta: [[[Option<f64>; 2]; 2]; 3],
}

#[inline]
fn variant(drive: LegDrive) -> usize {
    match drive {
        LegDrive::Proximal => 0,
        LegDrive::Distal => 1,
    }
}

impl PoseModeEvaluator {
    pub fn new(geometry: &MechanismGeometry, state: &JointState, pose: &Pose) -> Self {
        let p = pose.position();
        let mut rows = [[[0.0; 3]; 2]; 3];
        let mut lines: [[Option<ForceLine>; 2]; 3] = [[None; 2]; 3];
        let mut b_diag = [0.0; 3];

        for leg in 0..3 {
            let a = geometry.base_anchors[leg];
            let b = state.elbow_points[leg];
            let c = state.platform_points[leg];
            for (v, h) in [(0, b), (1, a)] {
                let dir = c - h;
                let pc = p - c;
                rows[leg][v] = [dir.x, dir.y, dir.x * pc.y - dir.y * pc.x];
                lines[leg][v] = ForceLine::from_direction(c, dir);
            }
            let ba = b - a;
            let cb = c - b;
            b_diag[leg] = ba.x * cb.y - ba.y * cb.x;
        }

        let serial_scale = geometry.proximal_length * geometry.distal_length;
        let serial = b_diag.map(|b| b.abs() < crate::mech::SERIAL_SIN_TOL * serial_scale);

        let mut beta = [[[None; 2]; 2]; 3];
        for leg in 0..3 {
            let j = (leg + 1) % 3;
            let k = (leg + 2) % 3;
            let c = state.platform_points[leg];
            for vj in 0..2 {
                for vk in 0..2 {
                    let (Some(line_j), Some(line_k)) = (lines[j][vj], lines[k][vk]) else {
                        continue;
                    };
                    beta[leg][vj][vk] = match instantaneous_center(&line_j, &line_k) {
                        Icr::Point(center) => {
                            let radial = c - center;
                            Some(radial.y.atan2(radial.x) + FRAC_PI_2)
                        }
                        Icr::AtInfinity {
                            direction,
                            degenerate: false,
                        } => Some(direction.y.atan2(direction.x) + FRAC_PI_2),
                        Icr::AtInfinity {
                            degenerate: true, ..
                        } => None,
                    };
                }
            }
        }

        PoseModeEvaluator {
            platform: state.platform_points,
            rows,
            lines,
            b_diag,
            serial,
            beta,
        }
    }

    pub fn serial(&self) -> [bool; 3] {
        self.serial
    }

    pub fn any_serial(&self) -> bool {
        self.serial.iter().any(|&s| s)
    }

    /// Kinetostatic indices for one actuating mode at the evaluated pose.
    pub fn indices(&self, mode: &ActuatingMode, char_length: f64) -> PoseIndices {
        let variants = mode.drives().map(variant);

        let mut a_norm = Matrix3::zeros();
        for leg in 0..3 {
            let row = self.rows[leg][variants[leg]];
            a_norm[(leg, 0)] = row[0];
            a_norm[(leg, 1)] = row[1];
            a_norm[(leg, 2)] = row[2] / char_length;
        }
        let det = a_norm.determinant();
        let scale = a_norm.norm();
        let parallel = det.abs() < crate::mech::PARALLEL_DET_TOL * scale * scale * scale;

        let inv_condition = if parallel || self.any_serial() {
            0.0
        } else {
            match a_norm.try_inverse() {
                Some(inv) => {
                    let mut j = inv;
                    for col in 0..3 {
                        j.set_column(col, &(inv.column(col) * self.b_diag[col]));
                    }
                    frobenius_condition(&j).1
                }
                None => 0.0,
            }
        };

        let mut psi_per_leg = [FRAC_PI_2; 3];
        for leg in 0..3 {
            let j = (leg + 1) % 3;
            let k = (leg + 2) % 3;
            let gamma = match self.lines[leg][variants[leg]] {
                Some(line) => line.direction_angle,
                None => {
                    psi_per_leg[leg] = FRAC_PI_2;
                    continue;
                }
            };
            psi_per_leg[leg] = match self.beta[leg][variants[j]][variants[k]] {
                Some(beta) => fold_to_right_angle(gamma - beta),
                None => FRAC_PI_2,
            };
        }
        let psi = psi_per_leg.iter().copied().fold(0.0, f64::max);

        PoseIndices {
            serial: self.serial,
            parallel,
            inv_condition,
            psi,
            psi_per_leg,
        }
    }

    /// Platform points the evaluator was built from.
    pub fn platform_points(&self) -> [Point2<f64>; 3] {
        self.platform
    }
}

/// Indices for one solved state and actuating mode.
pub fn evaluate_state(
    geometry: &MechanismGeometry,
    state: &JointState,
    pose: &Pose,
    mode: &ActuatingMode,
    char_length: f64,
) -> PoseIndices {
    PoseModeEvaluator::new(geometry, state, pose).indices(mode, char_length)
}

/// Full per-pose evaluation: inverse kinematics, singularity flags and both
/// performance indices. Unreachable poses yield `reachable = false` with the
/// indices unset.
pub fn evaluate_pose(
    geometry: &MechanismGeometry,
    pose: &Pose,
    working_mode: &WorkingMode,
    mode: &ActuatingMode,
    char_length: f64,
) -> PerformanceSample {
    let state = match full_ik(geometry, pose, working_mode) {
        Ok(state) => state,
        Err(IkError::Unreachable { .. }) => return PerformanceSample::unreachable(),
    };
    let indices = evaluate_state(geometry, &state, pose, mode, char_length);
    PerformanceSample {
        reachable: true,
        serial_singular: indices.serial.iter().any(|&s| s),
        parallel_singular: indices.parallel,
        inv_condition: Some(indices.inv_condition),
        transmission_angles: Some(indices.psi_per_leg),
        transmission_angle: Some(indices.psi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unreachable_pose_sample() {
        let g = MechanismGeometry::default();
        let sample = evaluate_pose(
            &g,
            &Pose::new(20.0, 0.0, 0.0),
            &WorkingMode::default(),
            &ActuatingMode::from_number(1).unwrap(),
            3.0,
        );
        assert!(!sample.reachable);
        assert_eq!(sample.inv_condition, None);
        assert_eq!(sample.transmission_angle, None);
    }

    #[test]
    fn regular_pose_indices_in_range() {
        let g = MechanismGeometry::default();
        for mode in ActuatingMode::all() {
            let sample = evaluate_pose(
                &g,
                &Pose::new(0.2, -0.1, 17.5_f64.to_radians()),
                &WorkingMode::default(),
                &mode,
                3.0,
            );
            assert!(sample.reachable);
            assert!(!sample.serial_singular && !sample.parallel_singular);
            let inv = sample.inv_condition.unwrap();
            assert!(inv > 0.0 && inv < 1.0, "inv_condition {inv} out of (0,1)");
            let psi = sample.transmission_angle.unwrap();
            assert!(psi > 0.0 && psi < FRAC_PI_2);
            let per_leg = sample.transmission_angles.unwrap();
            let max = per_leg.iter().copied().fold(0.0, f64::max);
            assert_abs_diff_eq!(psi, max, epsilon = 0.0);
        }
    }

    #[test]
    fn serial_singular_pose_has_zero_condition() {
        let g = MechanismGeometry::default();
        // Stretch leg 1 exactly: C_1 at distance l1 + l2 from A_1.
        let a1 = g.base_anchors[0];
        let dir = nalgebra::Vector2::new(0.8, 0.6);
        let c1 = a1 + dir * g.max_reach();
        let phi = 0.1;
        let p = c1 - nalgebra::Rotation2::new(phi) * g.platform_offsets[0].coords;
        let sample = evaluate_pose(
            &g,
            &Pose::new(p.x, p.y, phi),
            &WorkingMode::default(),
            &ActuatingMode::from_number(1).unwrap(),
            3.0,
        );
        assert!(sample.reachable);
        assert!(sample.serial_singular);
        assert_eq!(sample.inv_condition, Some(0.0));
    }

    #[test]
    fn evaluator_matches_pairwise_path() {
        let g = MechanismGeometry::default();
        let pose = Pose::new(0.5, 0.3, 0.25);
        let state = full_ik(&g, &pose, &WorkingMode::default()).unwrap();
        let eval = PoseModeEvaluator::new(&g, &state, &pose);
        for mode in ActuatingMode::all() {
            let pair = jacobian_pair(&g, &state, &pose, &mode);
            let j = kinematic_jacobian(&pair, 3.0).unwrap();
            let (_, inv) = frobenius_condition(&j);
            let indices = eval.indices(&mode, 3.0);
            assert_abs_diff_eq!(indices.inv_condition, inv, epsilon = 1e-12);
        }
    }

    #[test]
    fn deterministic_samples() {
        let g = MechanismGeometry::default();
        let pose = Pose::new(0.31, -0.77, 0.123);
        let mode = ActuatingMode::from_number(5).unwrap();
        let s1 = evaluate_pose(&g, &pose, &WorkingMode::default(), &mode, 3.0);
        let s2 = evaluate_pose(&g, &pose, &WorkingMode::default(), &mode, 3.0);
        assert_eq!(s1, s2);
    }
}
