//! Grid scans over poses, zone classification, workspace-size ratios,
//! pointwise-best mode selection and the maximal inscribed-circle search.

mod calibrate;
mod grid;
mod rdw;
mod scan;

pub use calibrate::{calibrate_char_length, CalibrationResult, TABLE_COND_RATIO_TARGETS};
pub use grid::{CellClass, GridError, GridSpec, IndexKind, ModeSelect, ScanResult};
pub use rdw::{distance_to_boundary_map, rdw_search, RdwResult};
pub use scan::{
    classify_cell, compare_modes, fixed_phi_field, scan_constant_phi, scan_map, sweep_field,
    vam_classify_cell, CellField, CompareRow, FixedPhiField, ScanError,
};
