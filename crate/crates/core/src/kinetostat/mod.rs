//! Performance indices: Frobenius condition number of the normalized
//! kinematic Jacobian and the transmission angle via instantaneous centres
//! of rotation.

mod condition;
mod evaluate;
mod transmission;

pub use condition::frobenius_condition;
pub use evaluate::{evaluate_pose, evaluate_state, PerformanceSample, PoseIndices, PoseModeEvaluator};
pub use transmission::{
    fold_to_right_angle, force_line, instantaneous_center, transmission_angles, ForceLine, Icr,
    LegTransmission, TransmissionError, TransmissionReport,
};
