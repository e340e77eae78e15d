//! Mechanism geometry, inverse kinematics, Jacobian matrices and
//! singularity predicates.

mod geometry;
mod ik;
mod jacobian;
mod mode;

pub use geometry::{platform_points, MechanismGeometry, Pose};
pub use ik::{full_ik, leg_ik, IkError, JointState, LegSolution};
pub use jacobian::{
    actuated_coordinates, jacobian_pair, kinematic_jacobian, rate_inverse, singularity_flags,
    JacobianPair, SingularityError, SingularityFlags, PARALLEL_DET_TOL, SERIAL_SIN_TOL,
};
pub use mode::{ActuatingMode, Elbow, LegDrive, WorkingMode};
