use nalgebra::{Point2, Vector2};
use thiserror::Error;

use super::geometry::{platform_points, MechanismGeometry, Pose};
use super::mode::{Elbow, WorkingMode};

/// Relative tolerance deciding when a leg sits exactly on the boundary of
/// its reachable annulus.
const BOUNDARY_REL_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum IkError {
    /// The platform point of the given leg (1-based) is outside the leg's
    /// reachable annulus.
    #[error("unreachable: leg {leg}")]
    Unreachable { leg: usize },
}

/// One leg's inverse-kinematics solution.
#[derive(Clone, Copy, Debug)]
pub struct LegSolution {
    /// Elbow point B.
    pub elbow_point: Point2<f64>,
    /// Direction angle of the proximal link (B - A).
    pub alpha: f64,
    /// Direction angle of the distal link (C - B).
    pub delta: f64,
    /// True when the target distance sits on the annulus boundary within
    /// tolerance (fully stretched or folded leg); the solution is still
    /// returned.
    pub boundary: bool,
}

/// Leg configurations solved for one platform pose.
#[derive(Clone, Copy, Debug)]
pub struct JointState {
    /// Proximal link direction angles alpha_i.
    pub alpha: [f64; 3],
    /// Distal link direction angles delta_i.
    pub delta: [f64; 3],
    /// Elbow points B_i (base frame).
    pub elbow_points: [Point2<f64>; 3],
    /// Platform points C_i (base frame).
    pub platform_points: [Point2<f64>; 3],
}

/// Rotates a vector by +90 degrees (the planar cross operator E).
#[inline]
pub(crate) fn perp(v: Vector2<f64>) -> Vector2<f64> {
    Vector2::new(-v.y, v.x)
}

/// z component of the planar cross product u x v.
#[inline]
pub(crate) fn cross2(u: Vector2<f64>, v: Vector2<f64>) -> f64 {
    u.x * v.y - u.y * v.x
}

/// Solves the two-link chain from `anchor` to `target`.
///
/// The elbow point lies on both the circle of radius `l_prox` around
/// `anchor` and the circle of radius `l_dist` around `target`;
/// `Elbow::Plus` selects the intersection to the left of the ray
/// anchor -> target. A target distance on the annulus boundary (within
/// relative tolerance) yields the aligned solution with `boundary` set.
pub fn leg_ik(
    anchor: Point2<f64>,
    target: Point2<f64>,
    l_prox: f64,
    l_dist: f64,
    elbow: Elbow,
) -> Result<LegSolution, IkError> {
    debug_assert!(l_prox > 0.0 && l_dist > 0.0);
    let to_target = target - anchor;
    let dist = to_target.norm();
    let max_reach = l_prox + l_dist;
    let min_reach = (l_prox - l_dist).abs();
    let tol = BOUNDARY_REL_TOL * max_reach;

    if dist > max_reach + tol || dist < min_reach - tol {
        return Err(IkError::Unreachable { leg: 0 });
    }

    if dist <= tol {
        // Concentric circles (only reachable when l_prox == l_dist): the
        // elbow is free; pick a fixed representative.
        let elbow_point = anchor + Vector2::new(l_prox, 0.0);
        return Ok(LegSolution {
            elbow_point,
            alpha: 0.0,
            delta: std::f64::consts::PI,
            boundary: true,
        });
    }

    let boundary = dist >= max_reach - tol || dist <= min_reach + tol;
    let along = ((dist * dist + l_prox * l_prox - l_dist * l_dist) / (2.0 * dist)).clamp(-l_prox, l_prox);
    let height = (l_prox * l_prox - along * along).max(0.0).sqrt();
    let unit = to_target / dist;
    let elbow_point = anchor + unit * along + perp(unit) * (elbow.sign() * height);

    let prox = elbow_point - anchor;
    let dist_vec = target - elbow_point;
    Ok(LegSolution {
        elbow_point,
        alpha: prox.y.atan2(prox.x),
        delta: dist_vec.y.atan2(dist_vec.x),
        boundary,
    })
}

/// Solves all three legs for a pose; fails atomically on the first
/// unreachable leg (1-based index in the error).
pub fn full_ik(
    geometry: &MechanismGeometry,
    pose: &Pose,
    working_mode: &WorkingMode,
) -> Result<JointState, IkError> {
    let targets = platform_points(geometry, pose);
    let mut alpha = [0.0; 3];
    let mut delta = [0.0; 3];
    let mut elbow_points = [Point2::origin(); 3];

    for leg in 0..3 {
        let sol = leg_ik(
            geometry.base_anchors[leg],
            targets[leg],
            geometry.proximal_length,
            geometry.distal_length,
            working_mode.elbow(leg),
        )
        .map_err(|_| IkError::Unreachable { leg: leg + 1 })?;
        alpha[leg] = sol.alpha;
        delta[leg] = sol.delta;
        elbow_points[leg] = sol.elbow_point;
    }

    Ok(JointState {
        alpha,
        delta,
        elbow_points,
        platform_points: targets,
    })
}
