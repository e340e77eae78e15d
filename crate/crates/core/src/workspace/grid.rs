use std::fmt;

use thiserror::Error;

use crate::mech::ActuatingMode;

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("empty or non-finite range along {axis}")]
    BadRange { axis: &'static str },
    #[error("resolution along {axis} must be at least 1")]
    BadResolution { axis: &'static str },
}

/// Raster of platform positions and orientation samples.
///
/// Positions sample the closed `x`/`y` ranges inclusively; `phi` samples the
/// closed orientation interval. A resolution of 1 samples the interval
/// midpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub x_res: usize,
    pub y_res: usize,
    /// Orientation interval in radians.
    pub phi_range: (f64, f64),
    pub phi_res: usize,
}

fn sample(range: (f64, f64), res: usize, i: usize) -> f64 {
    if res <= 1 {
        0.5 * (range.0 + range.1)
    } else {
        range.0 + (range.1 - range.0) * i as f64 / (res - 1) as f64
    }
}

impl GridSpec {
    pub fn new(
        x_range: (f64, f64),
        y_range: (f64, f64),
        x_res: usize,
        y_res: usize,
        phi_range: (f64, f64),
        phi_res: usize,
    ) -> Result<GridSpec, GridError> {
        let spec = GridSpec {
            x_range,
            y_range,
            x_res,
            y_res,
            phi_range,
            phi_res,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        for (axis, range) in [
            ("x", self.x_range),
            ("y", self.y_range),
            ("phi", self.phi_range),
        ] {
            if !range.0.is_finite() || !range.1.is_finite() || range.0 > range.1 {
                return Err(GridError::BadRange { axis });
            }
        }
        for (axis, res) in [("x", self.x_res), ("y", self.y_res), ("phi", self.phi_res)] {
            if res == 0 {
                return Err(GridError::BadResolution { axis });
            }
        }
        Ok(())
    }

    pub fn x_at(&self, ix: usize) -> f64 {
        sample(self.x_range, self.x_res, ix)
    }

    pub fn y_at(&self, iy: usize) -> f64 {
        sample(self.y_range, self.y_res, iy)
    }

    pub fn phi_at(&self, k: usize) -> f64 {
        sample(self.phi_range, self.phi_res, k)
    }

    pub fn phi_samples(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.phi_res).map(|k| self.phi_at(k))
    }

    pub fn cell_count(&self) -> usize {
        self.x_res * self.y_res
    }

    /// Row-major cell index.
    pub fn cell_index(&self, ix: usize, iy: usize) -> usize {
        iy * self.x_res + ix
    }

    pub fn cell_coords(&self, index: usize) -> (usize, usize) {
        (index % self.x_res, index / self.x_res)
    }

    pub fn dx(&self) -> f64 {
        if self.x_res <= 1 {
            self.x_range.1 - self.x_range.0
        } else {
            (self.x_range.1 - self.x_range.0) / (self.x_res - 1) as f64
        }
    }

    pub fn dy(&self) -> f64 {
        if self.y_res <= 1 {
            self.y_range.1 - self.y_range.0
        } else {
            (self.y_range.1 - self.y_range.0) / (self.y_res - 1) as f64
        }
    }

    pub fn half_cell_diagonal(&self) -> f64 {
        0.5 * self.dx().hypot(self.dy())
    }

    /// Grid with doubled position and orientation resolution over the same
    /// ranges.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            x_res: self.x_res * 2,
            y_res: self.y_res * 2,
            phi_res: self.phi_res * 2,
            ..*self
        }
    }
}

/// Covers the full reachable annulus of the reference mechanism at 400x400
/// position samples, with 21 orientation samples over [5, 25] degrees.
impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_range: (-9.0, 9.0),
            y_range: (-9.0, 9.0),
            x_res: 400,
            y_res: 400,
            phi_range: (5.0_f64.to_radians(), 25.0_f64.to_radians()),
            phi_res: 21,
        }
    }
}

/// Zone class of an (x, y) cell over the orientation sweep.
///
/// `Dark`: the orientation cannot vary continuously over the interval (some
/// sample unreachable or serially singular). `DarkGray`: the full sweep is
/// reachable but the index threshold fails somewhere. `LightGray`: reachable
/// everywhere with the threshold satisfied at every sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellClass {
    Dark,
    DarkGray,
    LightGray,
}

impl CellClass {
    pub fn code(&self) -> u8 {
        match self {
            CellClass::Dark => 0,
            CellClass::DarkGray => 1,
            CellClass::LightGray => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<CellClass> {
        match code {
            0 => Some(CellClass::Dark),
            1 => Some(CellClass::DarkGray),
            2 => Some(CellClass::LightGray),
            _ => None,
        }
    }
}

/// Which performance index a scan thresholds on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexKind {
    /// Pass when the inverse Frobenius condition number exceeds the
    /// threshold.
    InvCondition,
    /// Pass when the transmission angle stays below the threshold
    /// (radians).
    TransmissionAngle,
}

impl IndexKind {
    pub fn default_threshold(&self) -> f64 {
        match self {
            IndexKind::InvCondition => 0.15,
            IndexKind::TransmissionAngle => 75.0_f64.to_radians(),
        }
    }

    pub fn passes(&self, threshold: f64, inv_condition: f64, psi: f64) -> bool {
        match self {
            IndexKind::InvCondition => inv_condition > threshold,
            IndexKind::TransmissionAngle => psi < threshold,
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::InvCondition => "cond",
            IndexKind::TransmissionAngle => "angle",
        })
    }
}

/// A single actuating mode, or the pointwise union over all eight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeSelect {
    Mode(ActuatingMode),
    Vam,
}

impl fmt::Display for ModeSelect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModeSelect::Mode(mode) => write!(f, "{}", mode.number()),
            ModeSelect::Vam => f.write_str("vam"),
        }
    }
}

/// Classified raster with the worst-case index value per cell.
#[derive(Clone, Debug)]
pub struct ScanResult {
    pub spec: GridSpec,
    pub mode: ModeSelect,
    pub index: IndexKind,
    pub threshold: f64,
    /// Row-major cell classes.
    pub classes: Vec<CellClass>,
    /// Worst-case index value over the orientation sweep (NaN for dark
    /// cells).
    pub values: Vec<f64>,
}
