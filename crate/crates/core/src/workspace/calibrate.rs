use super::grid::{GridSpec, IndexKind, ModeSelect};
use super::scan::{fixed_phi_field, ScanError};
use crate::mech::{ActuatingMode, MechanismGeometry, WorkingMode};

/// Target workspace-size ratios for the condition-number index, one per
/// symmetry group of actuating modes: mode 1, modes 2-4, modes 5-7, mode 8.
pub const TABLE_COND_RATIO_TARGETS: [f64; 4] = [0.8827, 0.7533, 0.6226, 0.5215];

/// Search interval for the normalizing length.
const SEARCH_RANGE: (f64, f64) = (0.5, 20.0);
const COARSE_STEPS: usize = 40;
const GOLDEN_ITERS: usize = 28;

/// Representative mode of each symmetry group and the group size used to
/// weight its squared error.
const GROUP_REPS: [(u8, f64); 4] = [(1, 1.0), (2, 3.0), (5, 3.0), (8, 1.0)];

#[derive(Clone, Copy, Debug)]
pub struct CalibrationResult {
    pub char_length: f64,
    /// Weighted sum of squared ratio errors at the returned length.
    pub objective: f64,
    /// The objective was flat over the search range (degenerate grid); the
    /// interval midpoint was returned.
    pub flat: bool,
}

/// Minimizes `f` over `[lo, hi]`: a coarse sweep brackets the minimum
/// (earlier, i.e. smaller, arguments win ties), then golden-section search
/// refines it. A flat objective returns the interval midpoint.
fn sweep_argmin(
    f: &mut impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    coarse_steps: usize,
    golden_iters: usize,
) -> (f64, f64, bool) {
    let mut best_i = 0;
    let mut best_val = f64::INFINITY;
    let mut min_val = f64::INFINITY;
    let mut max_val = f64::NEG_INFINITY;
    let coarse: Vec<f64> = (0..coarse_steps)
        .map(|i| lo + (hi - lo) * i as f64 / (coarse_steps - 1) as f64)
        .collect();
    for (i, &x) in coarse.iter().enumerate() {
        let val = f(x);
        min_val = min_val.min(val);
        max_val = max_val.max(val);
        if val < best_val {
            best_val = val;
            best_i = i;
        }
    }
    if max_val - min_val <= 1e-12 * (1.0 + max_val.abs()) {
        let mid = 0.5 * (lo + hi);
        return (mid, f(mid), true);
    }

    let mut a = coarse[best_i.saturating_sub(1)];
    let mut b = coarse[(best_i + 1).min(coarse_steps - 1)];
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..golden_iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        if b - a < 1e-4 {
            break;
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x), false)
}

/// Sweeps the normalizing length over `[0.5, 20]`, minimizing the weighted
/// sum of squared errors between the condition-number workspace ratios at
/// `phi` and `targets` (one ratio target per mode symmetry group).
pub fn calibrate_char_length(
    geometry: &MechanismGeometry,
    spec: &GridSpec,
    phi: f64,
    targets: &[f64; 4],
    working_mode: &WorkingMode,
) -> Result<CalibrationResult, ScanError> {
    let mut scan_error = None;
    let mut objective = |length: f64| -> f64 {
        let field = fixed_phi_field(geometry, phi, spec, working_mode, length);
        let mut err = 0.0;
        for ((mode_number, weight), target) in GROUP_REPS.iter().zip(targets) {
            let select = ModeSelect::Mode(ActuatingMode::from_number(*mode_number).unwrap());
            match field.ratio(select, IndexKind::InvCondition, IndexKind::InvCondition.default_threshold()) {
                Ok(ratio) => err += weight * (ratio - target) * (ratio - target),
                Err(e) => {
                    scan_error = Some(e);
                    return f64::INFINITY;
                }
            }
        }
        err
    };

    let (length, value, flat) = sweep_argmin(
        &mut objective,
        SEARCH_RANGE.0,
        SEARCH_RANGE.1,
        COARSE_STEPS,
        GOLDEN_ITERS,
    );
    if let Some(e) = scan_error {
        return Err(e);
    }
    Ok(CalibrationResult {
        char_length: length,
        objective: value,
        flat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn argmin_finds_parabola_minimum() {
        let mut f = |x: f64| (x - 7.3) * (x - 7.3);
        let (x, val, flat) = sweep_argmin(&mut f, 0.5, 20.0, 40, 28);
        assert!(!flat);
        assert_abs_diff_eq!(x, 7.3, epsilon = 1e-3);
        assert!(val < 1e-6);
    }

    #[test]
    fn argmin_prefers_smaller_tie() {
        // Two exact minima at 3 and 13; the smaller one wins.
        let mut f = |x: f64| {
            let a = (x - 3.0).abs();
            let b = (x - 13.0).abs();
            a.min(b)
        };
        let (x, _, flat) = sweep_argmin(&mut f, 0.5, 20.0, 40, 40);
        assert!(!flat);
        assert!(x < 4.0, "argmin {x}");
        assert_abs_diff_eq!(x, 3.0, epsilon = 1e-2);
    }

    #[test]
    fn flat_objective_returns_midpoint() {
        let mut f = |_: f64| 0.42;
        let (x, val, flat) = sweep_argmin(&mut f, 0.5, 20.0, 40, 28);
        assert!(flat);
        assert_abs_diff_eq!(x, 10.25, epsilon = 1e-12);
        assert_abs_diff_eq!(val, 0.42, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_single_cell_grid_flags_flat() {
        let g = MechanismGeometry::default();
        // A single cell at the workspace center is reachable for every
        // normalizing length; its pass/fail state never changes over the
        // sweep, so the objective is flat.
        let spec = GridSpec::new((0.0, 0.0), (0.0, 0.0), 1, 1, (0.0, 1.0), 1).unwrap();
        let result = calibrate_char_length(
            &g,
            &spec,
            17.5_f64.to_radians(),
            &TABLE_COND_RATIO_TARGETS,
            &WorkingMode::default(),
        )
        .unwrap();
        assert!(result.flat);
        assert_abs_diff_eq!(result.char_length, 10.25, epsilon = 1e-12);
    }
}
