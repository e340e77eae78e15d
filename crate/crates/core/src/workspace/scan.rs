use rayon::prelude::*;
use thiserror::Error;

use super::grid::{CellClass, GridSpec, IndexKind, ModeSelect, ScanResult};
use super::rdw::rdw_search;
use crate::kinetostat::PoseModeEvaluator;
use crate::mech::{full_ik, ActuatingMode, MechanismGeometry, Pose, WorkingMode};

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum ScanError {
    #[error("no reachable cell in the scan region")]
    EmptyWorkspace,
}

/// Slot layout for per-mode aggregates: modes 1..8 occupy indices 0..7, the
/// pointwise VAM union sits at index 8.
pub const VAM_SLOT: usize = 8;

fn slot(select: ModeSelect) -> usize {
    match select {
        ModeSelect::Mode(mode) => mode.number() as usize - 1,
        ModeSelect::Vam => VAM_SLOT,
    }
}

/// Worst-case aggregates of one cell over the orientation sweep.
#[derive(Clone, Copy, Debug)]
pub struct CellAggregate {
    /// Some orientation sample was unreachable or serially singular.
    pub dark: bool,
    /// Per slot: min over the sweep of the inverse condition number.
    pub min_inv: [f64; 9],
    /// Per slot: max over the sweep of the transmission angle.
    pub max_psi: [f64; 9],
}

impl CellAggregate {
    fn dark() -> Self {
        CellAggregate {
            dark: true,
            min_inv: [f64::NAN; 9],
            max_psi: [f64::NAN; 9],
        }
    }

    /// Worst-case value of the given index for a slot.
    pub fn worst(&self, select: ModeSelect, index: IndexKind) -> f64 {
        let s = slot(select);
        match index {
            IndexKind::InvCondition => self.min_inv[s],
            IndexKind::TransmissionAngle => self.max_psi[s],
        }
    }

    pub fn class(&self, select: ModeSelect, index: IndexKind, threshold: f64) -> CellClass {
        if self.dark {
            return CellClass::Dark;
        }
        let s = slot(select);
        if index.passes(threshold, self.min_inv[s], self.max_psi[s]) {
            CellClass::LightGray
        } else {
            CellClass::DarkGray
        }
    }
}

/// Aggregates one (x, y) position over the orientation samples of `spec`.
fn cell_aggregate(
    geometry: &MechanismGeometry,
    x: f64,
    y: f64,
    phi_range: (f64, f64),
    phi_res: usize,
    working_mode: &WorkingMode,
    char_length: f64,
) -> CellAggregate {
    let modes = ActuatingMode::all();
    let mut min_inv = [f64::INFINITY; 9];
    let mut max_psi = [f64::NEG_INFINITY; 9];

    for k in 0..phi_res {
        let phi = if phi_res <= 1 {
            0.5 * (phi_range.0 + phi_range.1)
        } else {
            phi_range.0 + (phi_range.1 - phi_range.0) * k as f64 / (phi_res - 1) as f64
        };
        let pose = Pose::new(x, y, phi);
        let Ok(state) = full_ik(geometry, &pose, working_mode) else {
            return CellAggregate::dark();
        };
        let eval = PoseModeEvaluator::new(geometry, &state, &pose);
        if eval.any_serial() {
            return CellAggregate::dark();
        }
        let mut vam_inv = f64::NEG_INFINITY;
        let mut vam_psi = f64::INFINITY;
        for (m, mode) in modes.iter().enumerate() {
            let indices = eval.indices(mode, char_length);
            min_inv[m] = min_inv[m].min(indices.inv_condition);
            max_psi[m] = max_psi[m].max(indices.psi);
            vam_inv = vam_inv.max(indices.inv_condition);
            vam_psi = vam_psi.min(indices.psi);
        }
        min_inv[VAM_SLOT] = min_inv[VAM_SLOT].min(vam_inv);
        max_psi[VAM_SLOT] = max_psi[VAM_SLOT].max(vam_psi);
    }

    CellAggregate {
        dark: false,
        min_inv,
        max_psi,
    }
}

/// Per-cell worst-case aggregates of the full orientation sweep, for all
/// eight actuating modes and the VAM union at once.
#[derive(Clone, Debug)]
pub struct CellField {
    pub spec: GridSpec,
    pub cells: Vec<CellAggregate>,
}

/// Runs the orientation-sweep scan over the full grid. Cells are evaluated
/// independently and in parallel; the result is deterministic.
pub fn sweep_field(
    geometry: &MechanismGeometry,
    spec: &GridSpec,
    working_mode: &WorkingMode,
    char_length: f64,
) -> CellField {
    let cells = (0..spec.cell_count())
        .into_par_iter()
        .map(|idx| {
            let (ix, iy) = spec.cell_coords(idx);
            cell_aggregate(
                geometry,
                spec.x_at(ix),
                spec.y_at(iy),
                spec.phi_range,
                spec.phi_res,
                working_mode,
                char_length,
            )
        })
        .collect();
    CellField { spec: *spec, cells }
}

impl CellField {
    /// Classified map for one mode selection, index and threshold.
    pub fn classify(&self, select: ModeSelect, index: IndexKind, threshold: f64) -> ScanResult {
        let classes = self
            .cells
            .iter()
            .map(|agg| agg.class(select, index, threshold))
            .collect();
        let values = self.cells.iter().map(|agg| agg.worst(select, index)).collect();
        ScanResult {
            spec: self.spec,
            mode: select,
            index,
            threshold,
            classes,
            values,
        }
    }
}

/// Zone class of a single (x, y) position for one actuating mode: the
/// orientation sweep must be reachable in the given working mode with no
/// serial singularity (else `Dark`), and the index threshold must hold at
/// every sample for `LightGray`.
#[allow(clippy::too_many_arguments)]
pub fn classify_cell(
    geometry: &MechanismGeometry,
    x: f64,
    y: f64,
    mode: &ActuatingMode,
    phi_range: (f64, f64),
    phi_res: usize,
    index: IndexKind,
    threshold: f64,
    working_mode: &WorkingMode,
    char_length: f64,
) -> CellClass {
    cell_aggregate(geometry, x, y, phi_range, phi_res, working_mode, char_length)
        .class(ModeSelect::Mode(*mode), index, threshold)
}

/// Like [`classify_cell`], but a sample passes when any of the eight
/// actuating modes passes the threshold.
#[allow(clippy::too_many_arguments)]
pub fn vam_classify_cell(
    geometry: &MechanismGeometry,
    x: f64,
    y: f64,
    phi_range: (f64, f64),
    phi_res: usize,
    index: IndexKind,
    threshold: f64,
    working_mode: &WorkingMode,
    char_length: f64,
) -> CellClass {
    cell_aggregate(geometry, x, y, phi_range, phi_res, working_mode, char_length)
        .class(ModeSelect::Vam, index, threshold)
}

/// Fixed-orientation evaluation of one cell (both indices, all slots).
#[derive(Clone, Copy, Debug)]
pub struct FixedCell {
    pub inv: [f64; 9],
    pub psi: [f64; 9],
}

/// Per-cell index values at one fixed orientation.
#[derive(Clone, Debug)]
pub struct FixedPhiField {
    pub spec: GridSpec,
    pub phi: f64,
    /// None for unreachable cells.
    pub cells: Vec<Option<FixedCell>>,
}

pub fn fixed_phi_field(
    geometry: &MechanismGeometry,
    phi: f64,
    spec: &GridSpec,
    working_mode: &WorkingMode,
    char_length: f64,
) -> FixedPhiField {
    let modes = ActuatingMode::all();
    let cells = (0..spec.cell_count())
        .into_par_iter()
        .map(|idx| {
            let (ix, iy) = spec.cell_coords(idx);
            let pose = Pose::new(spec.x_at(ix), spec.y_at(iy), phi);
            let state = full_ik(geometry, &pose, working_mode).ok()?;
            let eval = PoseModeEvaluator::new(geometry, &state, &pose);
            let mut inv = [0.0; 9];
            let mut psi = [0.0; 9];
            let mut vam_inv = f64::NEG_INFINITY;
            let mut vam_psi = f64::INFINITY;
            for (m, mode) in modes.iter().enumerate() {
                let indices = eval.indices(mode, char_length);
                inv[m] = indices.inv_condition;
                psi[m] = indices.psi;
                vam_inv = vam_inv.max(indices.inv_condition);
                vam_psi = vam_psi.min(indices.psi);
            }
            inv[VAM_SLOT] = vam_inv;
            psi[VAM_SLOT] = vam_psi;
            Some(FixedCell { inv, psi })
        })
        .collect();
    FixedPhiField {
        spec: *spec,
        phi,
        cells,
    }
}

impl FixedPhiField {
    /// Fraction of reachable cells passing the index threshold.
    pub fn ratio(
        &self,
        select: ModeSelect,
        index: IndexKind,
        threshold: f64,
    ) -> Result<f64, ScanError> {
        let s = slot(select);
        let mut reachable = 0usize;
        let mut passing = 0usize;
        for cell in self.cells.iter().flatten() {
            reachable += 1;
            if index.passes(threshold, cell.inv[s], cell.psi[s]) {
                passing += 1;
            }
        }
        if reachable == 0 {
            return Err(ScanError::EmptyWorkspace);
        }
        Ok(passing as f64 / reachable as f64)
    }
}

/// Workspace-size ratio at a fixed orientation: passing cells over reachable
/// cells.
#[allow(clippy::too_many_arguments)]
pub fn scan_constant_phi(
    geometry: &MechanismGeometry,
    select: ModeSelect,
    phi: f64,
    spec: &GridSpec,
    index: IndexKind,
    threshold: f64,
    working_mode: &WorkingMode,
    char_length: f64,
) -> Result<f64, ScanError> {
    fixed_phi_field(geometry, phi, spec, working_mode, char_length).ratio(select, index, threshold)
}

/// Orientation-sweep scan classified for one mode selection.
pub fn scan_map(
    geometry: &MechanismGeometry,
    select: ModeSelect,
    spec: &GridSpec,
    index: IndexKind,
    threshold: f64,
    working_mode: &WorkingMode,
    char_length: f64,
) -> ScanResult {
    sweep_field(geometry, spec, working_mode, char_length).classify(select, index, threshold)
}

/// One row of the mode comparison: workspace-size ratios at the fixed
/// orientation and inscribed-circle radii over the sweep, for both indices.
#[derive(Clone, Copy, Debug)]
pub struct CompareRow {
    pub select: ModeSelect,
    pub ratio_cond: f64,
    pub ratio_angle: f64,
    pub radius_cond: f64,
    pub radius_angle: f64,
}

/// Compares the eight actuating modes and the VAM union: per-row ratios at
/// `phi_fixed` and inscribed-circle radii over the grid's orientation range,
/// for both performance indices. Rows are ordered by mode number with the
/// VAM row last.
#[allow(clippy::too_many_arguments)]
pub fn compare_modes(
    geometry: &MechanismGeometry,
    spec: &GridSpec,
    phi_fixed: f64,
    cond_threshold: f64,
    angle_threshold: f64,
    working_mode: &WorkingMode,
    char_length: f64,
) -> Result<Vec<CompareRow>, ScanError> {
    let fixed = fixed_phi_field(geometry, phi_fixed, spec, working_mode, char_length);
    let field = sweep_field(geometry, spec, working_mode, char_length);

    let selects = ActuatingMode::all()
        .into_iter()
        .map(ModeSelect::Mode)
        .chain(std::iter::once(ModeSelect::Vam));

    let mut rows = Vec::with_capacity(9);
    for select in selects {
        let ratio_cond = fixed.ratio(select, IndexKind::InvCondition, cond_threshold)?;
        let ratio_angle = fixed.ratio(select, IndexKind::TransmissionAngle, angle_threshold)?;
        let radius_cond =
            rdw_search(&field.classify(select, IndexKind::InvCondition, cond_threshold)).radius;
        let radius_angle =
            rdw_search(&field.classify(select, IndexKind::TransmissionAngle, angle_threshold)).radius;
        rows.push(CompareRow {
            select,
            ratio_cond,
            ratio_angle,
            radius_cond,
            radius_angle,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec() -> GridSpec {
        GridSpec::new(
            (-9.0, 9.0),
            (-9.0, 9.0),
            60,
            60,
            (5.0_f64.to_radians(), 25.0_f64.to_radians()),
            5,
        )
        .unwrap()
    }

    #[test]
    fn vacuous_condition_threshold_passes_everything() {
        let g = MechanismGeometry::default();
        let ratio = scan_constant_phi(
            &g,
            ModeSelect::Mode(ActuatingMode::from_number(1).unwrap()),
            17.5_f64.to_radians(),
            &small_spec(),
            IndexKind::InvCondition,
            0.0,
            &WorkingMode::default(),
            3.0,
        )
        .unwrap();
        assert!(ratio > 0.99, "ratio {ratio}");
    }

    #[test]
    fn empty_workspace_errors() {
        let g = MechanismGeometry::default();
        let spec = GridSpec::new((30.0, 40.0), (30.0, 40.0), 5, 5, (0.0, 0.1), 2).unwrap();
        let res = scan_constant_phi(
            &g,
            ModeSelect::Vam,
            0.0,
            &spec,
            IndexKind::InvCondition,
            0.15,
            &WorkingMode::default(),
            3.0,
        );
        assert_eq!(res.unwrap_err(), ScanError::EmptyWorkspace);
    }

    #[test]
    fn far_cell_is_dark() {
        let g = MechanismGeometry::default();
        let class = classify_cell(
            &g,
            12.0,
            0.0,
            &ActuatingMode::from_number(1).unwrap(),
            (5.0_f64.to_radians(), 25.0_f64.to_radians()),
            3,
            IndexKind::InvCondition,
            0.15,
            &WorkingMode::default(),
            3.0,
        );
        assert_eq!(class, CellClass::Dark);
    }

    #[test]
    fn center_cell_is_light_for_mode_one() {
        let g = MechanismGeometry::default();
        let class = classify_cell(
            &g,
            0.0,
            0.0,
            &ActuatingMode::from_number(1).unwrap(),
            (5.0_f64.to_radians(), 25.0_f64.to_radians()),
            11,
            IndexKind::InvCondition,
            0.15,
            &WorkingMode::default(),
            3.0,
        );
        assert_eq!(class, CellClass::LightGray);
    }

    #[test]
    fn vam_dominates_single_modes() {
        let g = MechanismGeometry::default();
        let spec = small_spec();
        let field = sweep_field(&g, &spec, &WorkingMode::default(), 3.0);
        let threshold = 0.15;
        let vam = field.classify(ModeSelect::Vam, IndexKind::InvCondition, threshold);
        for mode in ActuatingMode::all() {
            let single = field.classify(ModeSelect::Mode(mode), IndexKind::InvCondition, threshold);
            for (v, s) in vam.classes.iter().zip(&single.classes) {
                if *s == CellClass::LightGray {
                    assert_eq!(*v, CellClass::LightGray);
                }
            }
        }
    }

    #[test]
    fn vam_union_equals_per_sample_union() {
        let g = MechanismGeometry::default();
        let wm = WorkingMode::default();
        let threshold = 0.15;
        // Check the union identity sample-by-sample on a coarse grid.
        let spec = GridSpec::new(
            (-4.0, 4.0),
            (-4.0, 4.0),
            9,
            9,
            (5.0_f64.to_radians(), 25.0_f64.to_radians()),
            3,
        )
        .unwrap();
        for iy in 0..spec.y_res {
            for ix in 0..spec.x_res {
                let (x, y) = (spec.x_at(ix), spec.y_at(iy));
                for phi in spec.phi_samples() {
                    let pose = Pose::new(x, y, phi);
                    let Ok(state) = full_ik(&g, &pose, &wm) else {
                        continue;
                    };
                    let eval = PoseModeEvaluator::new(&g, &state, &pose);
                    let mut any = false;
                    let mut vam_inv = f64::NEG_INFINITY;
                    for mode in ActuatingMode::all() {
                        let idx = eval.indices(&mode, 3.0);
                        any |= idx.inv_condition > threshold;
                        vam_inv = vam_inv.max(idx.inv_condition);
                    }
                    assert_eq!(any, vam_inv > threshold);
                }
            }
        }
    }
}
