use nalgebra::{Point2, Rotation2, Vector2};

/// Fixed dimensions of the 3-RRR mechanism.
///
/// The base anchors `A_i` live in the base frame; the platform offsets `C_i`
/// live in the moving frame attached to the operation point `P`. Both link
/// lengths are shared by the three legs.
#[derive(Clone, Debug, PartialEq)]
pub struct MechanismGeometry {
    /// Base anchor points A1, A2, A3 (base frame).
    pub base_anchors: [Point2<f64>; 3],
    /// Platform attachment points C1, C2, C3 relative to P (moving frame).
    pub platform_offsets: [Point2<f64>; 3],
    /// Length of the proximal links |A_i B_i|.
    pub proximal_length: f64,
    /// Length of the distal links |B_i C_i|.
    pub distal_length: f64,
}

/// Planar platform pose: position of P in the base frame and the platform
/// rotation angle in radians. The revolute joints have no stops, so `phi`
/// is unrestricted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub phi: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, phi: f64) -> Self {
        Pose { x, y, phi }
    }

    pub fn position(&self) -> Point2<f64> {
        Point2::new(self.x, self.y)
    }
}

/// Vertices of an equilateral triangle with the given side length, centroid
/// at the origin, the first-to-second edge parallel to the x axis, vertices
/// counterclockwise and the first vertex in the lower-left half-plane.
fn equilateral(side: f64) -> [Point2<f64>; 3] {
    let half = side / 2.0;
    let inradius = side / (2.0 * 3.0_f64.sqrt());
    let circumradius = side / 3.0_f64.sqrt();
    [
        Point2::new(-half, -inradius),
        Point2::new(half, -inradius),
        Point2::new(0.0, circumradius),
    ]
}

impl MechanismGeometry {
    /// Mechanism with explicit triangle side lengths and link lengths, using
    /// the standard orientation convention for both triangles.
    pub fn with_sides(base_side: f64, platform_side: f64, proximal: f64, distal: f64) -> Self {
        MechanismGeometry {
            base_anchors: equilateral(base_side),
            platform_offsets: equilateral(platform_side),
            proximal_length: proximal,
            distal_length: distal,
        }
    }

    /// Maximum |C_i - A_i| distance any leg can span.
    pub fn max_reach(&self) -> f64 {
        self.proximal_length + self.distal_length
    }

    /// Minimum |C_i - A_i| distance any leg can span.
    pub fn min_reach(&self) -> f64 {
        (self.proximal_length - self.distal_length).abs()
    }
}

/// Reference dimensions: base triangle side 10.0, platform triangle side
/// 5.0, both link lengths 3.0.
impl Default for MechanismGeometry {
    fn default() -> Self {
        MechanismGeometry::with_sides(10.0, 5.0, 3.0, 3.0)
    }
}

/// Platform attachment points C_i in the base frame for the given pose:
/// `c_i = p + R(phi) * offset_i`.
pub fn platform_points(geometry: &MechanismGeometry, pose: &Pose) -> [Point2<f64>; 3] {
    let rot = Rotation2::new(pose.phi);
    let p = Vector2::new(pose.x, pose.y);
    geometry
        .platform_offsets
        .map(|offset| Point2::from(p + rot * offset.coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn default_base_side_is_ten() {
        let g = MechanismGeometry::default();
        let side = (g.base_anchors[0] - g.base_anchors[1]).norm();
        assert_relative_eq!(side, 10.0, max_relative = 1e-12);
        let side23 = (g.base_anchors[1] - g.base_anchors[2]).norm();
        let side31 = (g.base_anchors[2] - g.base_anchors[0]).norm();
        assert_relative_eq!(side23, 10.0, max_relative = 1e-12);
        assert_relative_eq!(side31, 10.0, max_relative = 1e-12);
    }

    #[test]
    fn default_platform_side_is_five() {
        let g = MechanismGeometry::default();
        let side = (g.platform_offsets[0] - g.platform_offsets[1]).norm();
        assert_relative_eq!(side, 5.0, max_relative = 1e-12);
    }

    #[test]
    fn default_centroids_at_origin() {
        let g = MechanismGeometry::default();
        for points in [&g.base_anchors, &g.platform_offsets] {
            let centroid = (points[0].coords + points[1].coords + points[2].coords) / 3.0;
            assert_abs_diff_eq!(centroid.norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn orientation_convention() {
        let g = MechanismGeometry::default();
        // A1A2 parallel to the x axis, counterclockwise, A1 lower-left.
        assert_abs_diff_eq!(g.base_anchors[0].y, g.base_anchors[1].y, epsilon = 1e-12);
        assert!(g.base_anchors[0].x < 0.0 && g.base_anchors[0].y < 0.0);
        let e1 = g.base_anchors[1] - g.base_anchors[0];
        let e2 = g.base_anchors[2] - g.base_anchors[1];
        assert!(e1.x * e2.y - e1.y * e2.x > 0.0);
    }

    #[test]
    fn platform_points_identity_pose() {
        let g = MechanismGeometry::default();
        let c = platform_points(&g, &Pose::new(0.0, 0.0, 0.0));
        for i in 0..3 {
            assert_abs_diff_eq!((c[i] - g.platform_offsets[i]).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn platform_points_pure_translation() {
        let g = MechanismGeometry::default();
        let c = platform_points(&g, &Pose::new(1.0, 2.0, 0.0));
        for i in 0..3 {
            let expected = g.platform_offsets[i] + Vector2::new(1.0, 2.0);
            assert_abs_diff_eq!((c[i] - expected).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn platform_points_half_turn() {
        let g = MechanismGeometry::default();
        let c = platform_points(&g, &Pose::new(0.0, 0.0, std::f64::consts::PI));
        for i in 0..3 {
            let expected = Point2::from(-g.platform_offsets[i].coords);
            assert_abs_diff_eq!((c[i] - expected).norm(), 0.0, epsilon = 1e-12);
        }
    }
}
