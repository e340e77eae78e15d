//! Kinetostatic model of a 3-RRR planar parallel mechanism with variable
//! actuation (VAM).
//!
//! Each of the three legs is an A-B-C chain of two links; a clutch at the
//! base anchor lets either the proximal link angle or the distal link
//! direction be the driven coordinate, giving eight actuating modes. The
//! crate provides:
//!
//! * inverse kinematics and the direct/inverse Jacobian pair per actuating
//!   mode ([`mech`]),
//! * per-pose performance indices: inverse Frobenius condition number of the
//!   length-normalized Jacobian and the transmission angle via instantaneous
//!   centres of rotation ([`kinetostat`]),
//! * grid scans, zone classification, workspace-size ratios and maximal
//!   inscribed-circle (regular dextrous workspace) searches ([`workspace`]),
//! * flat-file export and the configuration layer behind the `vamk` binary
//!   ([`config`], [`export`]).
//!
//! All evaluation paths are pure functions of immutable inputs; scans are
//! data-parallel over cells via rayon.

pub mod config;
pub mod export;
pub mod kinetostat;
pub mod mech;
pub mod workspace;

pub use config::{CharLengthChoice, ConfigError, OutputFormat, RunConfig};
pub use kinetostat::{
    evaluate_pose, evaluate_state, force_line, frobenius_condition, instantaneous_center,
    transmission_angles, ForceLine, Icr, PerformanceSample, PoseIndices, PoseModeEvaluator,
    TransmissionReport,
};
pub use mech::{
    actuated_coordinates, full_ik, jacobian_pair, kinematic_jacobian, leg_ik, platform_points,
    rate_inverse, singularity_flags, ActuatingMode, Elbow, IkError, JacobianPair, JointState,
    LegDrive, MechanismGeometry, Pose, SingularityError, SingularityFlags, WorkingMode,
};
pub use workspace::{
    calibrate_char_length, classify_cell, compare_modes, fixed_phi_field, rdw_search,
    scan_constant_phi, scan_map, sweep_field, vam_classify_cell, CalibrationResult, CellClass,
    CellField, CompareRow, FixedPhiField, GridSpec, IndexKind, ModeSelect, RdwResult, ScanError,
    ScanResult,
};
