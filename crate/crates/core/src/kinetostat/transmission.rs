use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Point2, Vector2};
use thiserror::Error;

use crate::mech::{ActuatingMode, JointState, LegDrive, MechanismGeometry};

/// Angle difference below which two force lines count as parallel.
const PARALLEL_SIN_TOL: f64 = 1e-12;

/// Relative tolerance deciding when two parallel lines coincide.
const COINCIDENT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum TransmissionError {
    /// The vector defining a leg's force direction has zero length; cannot
    /// occur for valid geometry.
    #[error("degenerate force direction on leg {leg}")]
    DegenerateDirection { leg: usize },
}

/// Transmitted-force line of one leg: passes through the platform point
/// `C_i` with direction angle `gamma_i` normalized to `(-pi/2, pi/2]`.
///
/// `intercept` is the axis offset `y_C - x_C * tan(gamma)`;
/// it is `f64::INFINITY` for a vertical line.
#[derive(Clone, Copy, Debug)]
pub struct ForceLine {
    pub through_point: Point2<f64>,
    pub direction_angle: f64,
    pub intercept: f64,
}

impl ForceLine {
    /// Line through `point` along the (not necessarily unit) vector `dir`.
    pub fn from_direction(point: Point2<f64>, dir: Vector2<f64>) -> Option<ForceLine> {
        if dir.norm() < 1e-12 {
            return None;
        }
        let mut angle = dir.y.atan2(dir.x);
        if angle > FRAC_PI_2 {
            angle -= PI;
        } else if angle <= -FRAC_PI_2 {
            angle += PI;
        }
        let intercept = if angle == FRAC_PI_2 {
            f64::INFINITY
        } else {
            point.y - point.x * angle.tan()
        };
        Some(ForceLine {
            through_point: point,
            direction_angle: angle,
            intercept,
        })
    }

    /// Homogeneous coefficients `(a, b, c)` with `a x + b y + c = 0` and
    /// unit normal `(a, b)`.
    pub fn homogeneous(&self) -> (f64, f64, f64) {
        let (sin, cos) = self.direction_angle.sin_cos();
        let a = -sin;
        let b = cos;
        let c = -(a * self.through_point.x + b * self.through_point.y);
        (a, b, c)
    }

    pub fn direction(&self) -> Vector2<f64> {
        let (sin, cos) = self.direction_angle.sin_cos();
        Vector2::new(cos, sin)
    }
}

/// Intersection of two force lines.
#[derive(Clone, Copy, Debug)]
pub enum Icr {
    Point(Point2<f64>),
    /// Parallel lines meet at infinity along their common direction;
    /// `degenerate` marks coincident lines, for which the centre is
    /// indeterminate.
    AtInfinity {
        direction: Vector2<f64>,
        degenerate: bool,
    },
}

/// Force line of one leg for the given drive: a proximal-driven leg pushes
/// along its distal link `(B_i C_i)`, a distal-driven leg along the line
/// `(A_i C_i)`.
pub fn force_line(
    geometry: &MechanismGeometry,
    state: &JointState,
    leg: usize,
    drive: LegDrive,
) -> Result<ForceLine, TransmissionError> {
    let c = state.platform_points[leg];
    let dir = match drive {
        LegDrive::Proximal => c - state.elbow_points[leg],
        LegDrive::Distal => c - geometry.base_anchors[leg],
    };
    ForceLine::from_direction(c, dir).ok_or(TransmissionError::DegenerateDirection { leg: leg + 1 })
}

/// Intersection of two lines via homogeneous coordinates, exact for
/// vertical lines and matching the slope-intercept formulas whenever both
/// tangents are finite.
pub fn instantaneous_center(line_j: &ForceLine, line_k: &ForceLine) -> Icr {
    let (a1, b1, c1) = line_j.homogeneous();
    let (a2, b2, c2) = line_k.homogeneous();
    let w = a1 * b2 - b1 * a2;
    if w.abs() > PARALLEL_SIN_TOL {
        let x = b1 * c2 - c1 * b2;
        let y = c1 * a2 - a1 * c2;
        return Icr::Point(Point2::new(x / w, y / w));
    }
    // Same normal direction up to sign: coincident when the offsets agree.
    let sign = if a1 * a2 + b1 * b2 >= 0.0 { 1.0 } else { -1.0 };
    let degenerate = (c1 - sign * c2).abs() < COINCIDENT_TOL * (1.0 + c1.abs() + c2.abs());
    Icr::AtInfinity {
        direction: line_j.direction(),
        degenerate,
    }
}

/// Folds an angle difference into `[0, pi/2]`: reduce modulo pi, then
/// reflect the upper half of the period.
pub fn fold_to_right_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(PI);
    if r > FRAC_PI_2 {
        PI - r
    } else {
        r
    }
}

/// Transmission state of one leg.
#[derive(Clone, Copy, Debug)]
pub struct LegTransmission {
    /// Force direction angle gamma_i.
    pub gamma: f64,
    /// Velocity direction angle beta_i of the platform point.
    pub beta: f64,
    /// Folded transmission angle psi_i in [0, pi/2].
    pub psi: f64,
    /// Instantaneous centre from the other two legs' force lines.
    pub icr: Icr,
    /// The two defining lines were coincident; psi_i is pinned to pi/2.
    pub indeterminate: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct TransmissionReport {
    /// Mechanism transmission angle `psi = max_i psi_i`.
    pub psi: f64,
    pub per_leg: [LegTransmission; 3],
}

impl TransmissionReport {
    pub fn psi_per_leg(&self) -> [f64; 3] {
        [self.per_leg[0].psi, self.per_leg[1].psi, self.per_leg[2].psi]
    }
}

/// Per-leg and mechanism transmission angles for the given actuating mode.
///
/// For leg i the instantaneous centre `I_i` is the intersection of the other
/// two legs' force lines; the velocity of `C_i` is perpendicular to
/// `C_i - I_i` (or to the common line direction when `I_i` is at infinity),
/// and `psi_i = |gamma_i - beta_i|` folded into `[0, pi/2]`.
pub fn transmission_angles(
    geometry: &MechanismGeometry,
    state: &JointState,
    mode: &ActuatingMode,
) -> Result<TransmissionReport, TransmissionError> {
    let lines = [
        force_line(geometry, state, 0, mode.drive(0))?,
        force_line(geometry, state, 1, mode.drive(1))?,
        force_line(geometry, state, 2, mode.drive(2))?,
    ];

    let mut per_leg = [LegTransmission {
        gamma: 0.0,
        beta: 0.0,
        psi: 0.0,
        icr: Icr::AtInfinity {
            direction: Vector2::zeros(),
            degenerate: false,
        },
        indeterminate: false,
    }; 3];

    for leg in 0..3 {
        let j = (leg + 1) % 3;
        let k = (leg + 2) % 3;
        let icr = instantaneous_center(&lines[j], &lines[k]);
        let gamma = lines[leg].direction_angle;
        let c = state.platform_points[leg];
        let (beta, psi, indeterminate) = match icr {
            Icr::Point(center) => {
                let radial = c - center;
                let beta = radial.y.atan2(radial.x) + FRAC_PI_2;
                (beta, fold_to_right_angle(gamma - beta), false)
            }
            Icr::AtInfinity {
                direction,
                degenerate: false,
            } => {
                let beta = direction.y.atan2(direction.x) + FRAC_PI_2;
                (beta, fold_to_right_angle(gamma - beta), false)
            }
            Icr::AtInfinity {
                degenerate: true, ..
            } => (gamma + FRAC_PI_2, FRAC_PI_2, true),
        };
        per_leg[leg] = LegTransmission {
            gamma,
            beta,
            psi,
            icr,
            indeterminate,
        };
    }

    let psi = per_leg.iter().map(|l| l.psi).fold(0.0, f64::max);
    Ok(TransmissionReport { psi, per_leg })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mech::{full_ik, ActuatingMode, MechanismGeometry, Pose, WorkingMode};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn horizontal_force_line() {
        let line =
            ForceLine::from_direction(Point2::new(3.0, 0.0), Vector2::new(3.0, 0.0)).unwrap();
        assert_abs_diff_eq!(line.direction_angle, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(line.intercept, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn diagonal_force_line() {
        let line =
            ForceLine::from_direction(Point2::new(3.0, 3.0), Vector2::new(3.0, 3.0)).unwrap();
        assert_abs_diff_eq!(line.direction_angle, FRAC_PI_4, epsilon = 1e-15);
    }

    #[test]
    fn vertical_force_line_has_infinite_intercept() {
        let line =
            ForceLine::from_direction(Point2::new(1.0, 2.0), Vector2::new(0.0, 3.0)).unwrap();
        assert_abs_diff_eq!(line.direction_angle, FRAC_PI_2, epsilon = 1e-15);
        assert!(line.intercept.is_infinite());
        // Downward vertical folds to the same line.
        let down =
            ForceLine::from_direction(Point2::new(1.0, 2.0), Vector2::new(0.0, -3.0)).unwrap();
        assert_abs_diff_eq!(down.direction_angle, FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn intersection_example() {
        // gamma = 0 through (0,0) meets gamma = pi/4 through (4,0) at (4,0):
        // frozen from the slope-intercept oracle y = x - 4 vs y = 0.
        let l2 = ForceLine::from_direction(Point2::new(0.0, 0.0), Vector2::new(1.0, 0.0)).unwrap();
        let l3 = ForceLine::from_direction(Point2::new(4.0, 0.0), Vector2::new(1.0, 1.0)).unwrap();
        match instantaneous_center(&l2, &l3) {
            Icr::Point(p) => {
                assert_abs_diff_eq!(p.x, 4.0, epsilon = 1e-12);
                assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-12);
            }
            other => panic!("expected point intersection, got {other:?}"),
        }
        // Slope-intercept route: b2 = 0, b3 = 0 - 4*tan(pi/4) = -4.
        assert_abs_diff_eq!(l3.intercept, -4.0, epsilon = 1e-12);
    }

    #[test]
    fn parallel_lines_meet_at_infinity() {
        let l1 = ForceLine::from_direction(Point2::new(0.0, 0.0), Vector2::new(1.0, 0.0)).unwrap();
        let l2 = ForceLine::from_direction(Point2::new(0.0, 2.0), Vector2::new(1.0, 0.0)).unwrap();
        match instantaneous_center(&l1, &l2) {
            Icr::AtInfinity {
                direction,
                degenerate,
            } => {
                assert!(!degenerate);
                assert_abs_diff_eq!(direction.x.abs(), 1.0, epsilon = 1e-15);
                assert_abs_diff_eq!(direction.y, 0.0, epsilon = 1e-15);
            }
            other => panic!("expected parallel case, got {other:?}"),
        }
    }

    #[test]
    fn coincident_lines_are_degenerate() {
        let l1 = ForceLine::from_direction(Point2::new(1.0, 1.0), Vector2::new(2.0, 1.0)).unwrap();
        let l2 = ForceLine::from_direction(Point2::new(3.0, 2.0), Vector2::new(-4.0, -2.0)).unwrap();
        match instantaneous_center(&l1, &l2) {
            Icr::AtInfinity { degenerate, .. } => assert!(degenerate),
            other => panic!("expected degenerate case, got {other:?}"),
        }
    }

    #[test]
    fn icr_is_symmetric() {
        let l1 = ForceLine::from_direction(Point2::new(0.3, -1.0), Vector2::new(1.0, 2.0)).unwrap();
        let l2 = ForceLine::from_direction(Point2::new(2.0, 0.5), Vector2::new(-1.0, 1.5)).unwrap();
        match (instantaneous_center(&l1, &l2), instantaneous_center(&l2, &l1)) {
            (Icr::Point(p), Icr::Point(q)) => {
                assert_abs_diff_eq!((p - q).norm(), 0.0, epsilon = 1e-12)
            }
            _ => panic!("expected point intersections"),
        }
    }

    #[test]
    fn fold_examples() {
        assert_abs_diff_eq!(fold_to_right_angle(0.3), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(fold_to_right_angle(-0.3), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(fold_to_right_angle(2.0), PI - 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fold_to_right_angle(PI), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fold_to_right_angle(3.5 * PI + 0.1), FRAC_PI_2 - 0.1, epsilon = 1e-12);
    }

    #[test]
    fn uniform_mode_home_pose_is_symmetric() {
        let g = MechanismGeometry::default();
        let state = full_ik(&g, &Pose::new(0.0, 0.0, 0.4), &WorkingMode::default()).unwrap();
        for mode_number in [1, 8] {
            let mode = ActuatingMode::from_number(mode_number).unwrap();
            let report = transmission_angles(&g, &state, &mode).unwrap();
            let psi = report.psi_per_leg();
            assert_relative_eq!(psi[0], psi[1], max_relative = 1e-9);
            assert_relative_eq!(psi[1], psi[2], max_relative = 1e-9);
        }
    }
}
