//! Run configuration: built-in defaults, overlaid by a flat `key = value`
//! config file, overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::mech::{ActuatingMode, MechanismGeometry, WorkingMode};
use crate::workspace::{GridError, GridSpec, IndexKind, ModeSelect};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },
    #[error(transparent)]
    Grid(#[from] GridError),
}

fn invalid(field: &'static str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field,
        reason: reason.into(),
    }
}

/// Fixed normalizing length, or calibrate it against the reference ratio
/// targets before running.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CharLengthChoice {
    Fixed(f64),
    Calibrate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Kv,
}

/// Resolved run configuration. Angles are kept in degrees here (the CLI
/// boundary); conversion to radians happens when deriving the grid or
/// calling evaluation routines.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub base_side: f64,
    pub platform_side: f64,
    pub proximal_length: f64,
    pub distal_length: f64,
    pub mode: ModeSelect,
    pub index: IndexKind,
    /// Raw threshold as given: a fraction for the condition index, degrees
    /// for the transmission angle. None picks the index default.
    pub threshold: Option<f64>,
    /// Fixed orientation for constant-phi scans, degrees.
    pub phi_deg: f64,
    /// Orientation interval for sweeps, degrees.
    pub phi_range_deg: (f64, f64),
    pub phi_steps: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub x_res: usize,
    pub y_res: usize,
    pub working_mode: WorkingMode,
    pub char_length: CharLengthChoice,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            base_side: 10.0,
            platform_side: 5.0,
            proximal_length: 3.0,
            distal_length: 3.0,
            mode: ModeSelect::Mode(ActuatingMode::from_number(1).unwrap()),
            index: IndexKind::InvCondition,
            threshold: None,
            phi_deg: 17.5,
            phi_range_deg: (5.0, 25.0),
            phi_steps: 21,
            x_range: (-9.0, 9.0),
            y_range: (-9.0, 9.0),
            x_res: 400,
            y_res: 400,
            working_mode: WorkingMode::default(),
            char_length: CharLengthChoice::Fixed(3.0),
            out: None,
            format: OutputFormat::Csv,
            workers: None,
        }
    }
}

pub fn parse_mode(s: &str) -> Result<ModeSelect, String> {
    if s.eq_ignore_ascii_case("vam") {
        return Ok(ModeSelect::Vam);
    }
    s.parse::<u8>()
        .ok()
        .and_then(ActuatingMode::from_number)
        .map(ModeSelect::Mode)
        .ok_or_else(|| format!("mode must be 1..8 or \"vam\", got {s:?}"))
}

pub fn parse_index(s: &str) -> Result<IndexKind, String> {
    match s.to_ascii_lowercase().as_str() {
        "cond" => Ok(IndexKind::InvCondition),
        "angle" => Ok(IndexKind::TransmissionAngle),
        _ => Err(format!("index must be \"cond\" or \"angle\", got {s:?}")),
    }
}

pub fn parse_char_length(s: &str) -> Result<CharLengthChoice, String> {
    if s.eq_ignore_ascii_case("calibrate") {
        return Ok(CharLengthChoice::Calibrate);
    }
    let value: f64 = s
        .parse()
        .map_err(|_| format!("char-length must be a number or \"calibrate\", got {s:?}"))?;
    if !value.is_finite() || value <= 0.0 {
        return Err(format!("char-length must be positive, got {s}"));
    }
    Ok(CharLengthChoice::Fixed(value))
}

/// `lo:hi:steps`, angles in degrees.
pub fn parse_phi_range(s: &str) -> Result<((f64, f64), usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("phi-range must be lo:hi:steps, got {s:?}"));
    }
    let lo: f64 = parts[0].parse().map_err(|_| format!("bad phi lo {:?}", parts[0]))?;
    let hi: f64 = parts[1].parse().map_err(|_| format!("bad phi hi {:?}", parts[1]))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| format!("bad phi steps {:?}", parts[2]))?;
    if steps == 0 {
        return Err("phi steps must be at least 1".to_string());
    }
    Ok(((lo, hi), steps))
}

/// `xlo:xhi:n,ylo:yhi:n`.
pub type GridRanges = ((f64, f64), usize, (f64, f64), usize);

pub fn parse_grid(s: &str) -> Result<GridRanges, String> {
    let axes: Vec<&str> = s.split(',').collect();
    if axes.len() != 2 {
        return Err(format!("grid must be xlo:xhi:n,ylo:yhi:n, got {s:?}"));
    }
    let mut parsed = Vec::new();
    for axis in axes {
        let parts: Vec<&str> = axis.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid axis must be lo:hi:n, got {axis:?}"));
        }
        let lo: f64 = parts[0].parse().map_err(|_| format!("bad bound {:?}", parts[0]))?;
        let hi: f64 = parts[1].parse().map_err(|_| format!("bad bound {:?}", parts[1]))?;
        let n: usize = parts[2].parse().map_err(|_| format!("bad count {:?}", parts[2]))?;
        parsed.push((lo, hi, n));
    }
    Ok((
        (parsed[0].0, parsed[0].1),
        parsed[0].2,
        (parsed[1].0, parsed[1].1),
        parsed[1].2,
    ))
}

pub fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s.to_ascii_lowercase().as_str() {
        "csv" => Ok(OutputFormat::Csv),
        "kv" => Ok(OutputFormat::Kv),
        _ => Err(format!("format must be \"csv\" or \"kv\", got {s:?}")),
    }
}

impl RunConfig {
    /// Applies one `key = value` assignment (config-file syntax).
    pub fn set_key(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let num = |field: &'static str| -> Result<f64, ConfigError> {
            value
                .parse::<f64>()
                .map_err(|_| invalid(field, format!("not a number: {value:?}")))
        };
        match key {
            "base_side" => self.base_side = num("base_side")?,
            "platform_side" => self.platform_side = num("platform_side")?,
            "proximal_length" => self.proximal_length = num("proximal_length")?,
            "distal_length" => self.distal_length = num("distal_length")?,
            "mode" => self.mode = parse_mode(value).map_err(|e| invalid("mode", e))?,
            "index" => self.index = parse_index(value).map_err(|e| invalid("index", e))?,
            "threshold" => self.threshold = Some(num("threshold")?),
            "phi" => self.phi_deg = num("phi")?,
            "phi_range" => {
                let (range, steps) =
                    parse_phi_range(value).map_err(|e| invalid("phi_range", e))?;
                self.phi_range_deg = range;
                self.phi_steps = steps;
            }
            "grid" => {
                let (xr, xn, yr, yn) = parse_grid(value).map_err(|e| invalid("grid", e))?;
                self.x_range = xr;
                self.x_res = xn;
                self.y_range = yr;
                self.y_res = yn;
            }
            "working_mode" => {
                self.working_mode = value.parse().map_err(|e| invalid("working_mode", e))?
            }
            "char_length" => {
                self.char_length =
                    parse_char_length(value).map_err(|e| invalid("char_length", e))?
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = parse_format(value).map_err(|e| invalid("format", e))?,
            "workers" => {
                self.workers = Some(
                    value
                        .parse()
                        .map_err(|_| invalid("workers", format!("not a count: {value:?}")))?,
                )
            }
            _ => return Err(invalid("key", format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Overlays assignments from a flat UTF-8 `key = value` file;
    /// `#` starts a comment, blank lines are ignored.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        for (i, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Parse {
                    line: i + 1,
                    reason: format!("expected key = value, got {line:?}"),
                });
            };
            self.set_key(key.trim(), value.trim())
                .map_err(|e| ConfigError::Parse {
                    line: i + 1,
                    reason: e.to_string(),
                })?;
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<MechanismGeometry, ConfigError> {
        for (field, value) in [
            ("base_side", self.base_side),
            ("platform_side", self.platform_side),
            ("proximal_length", self.proximal_length),
            ("distal_length", self.distal_length),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(invalid(field, format!("must be positive, got {value}")));
            }
        }
        Ok(MechanismGeometry::with_sides(
            self.base_side,
            self.platform_side,
            self.proximal_length,
            self.distal_length,
        ))
    }

    /// Threshold in internal units: the raw fraction for the condition
    /// index, radians for the transmission angle.
    pub fn resolved_threshold(&self) -> Result<f64, ConfigError> {
        let raw = match self.threshold {
            Some(t) => {
                if !t.is_finite() || t <= 0.0 {
                    return Err(invalid("threshold", format!("must be positive, got {t}")));
                }
                t
            }
            None => {
                return Ok(self.index.default_threshold());
            }
        };
        Ok(match self.index {
            IndexKind::InvCondition => raw,
            IndexKind::TransmissionAngle => raw.to_radians(),
        })
    }

    pub fn grid_spec(&self) -> Result<GridSpec, ConfigError> {
        Ok(GridSpec::new(
            self.x_range,
            self.y_range,
            self.x_res,
            self.y_res,
            (
                self.phi_range_deg.0.to_radians(),
                self.phi_range_deg.1.to_radians(),
            ),
            self.phi_steps,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn defaults_match_reference_setup() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.phi_deg, 17.5);
        assert_eq!(cfg.x_res, 400);
        assert_eq!(cfg.phi_steps, 21);
        assert_eq!(cfg.char_length, CharLengthChoice::Fixed(3.0));
        assert_eq!(cfg.resolved_threshold().unwrap(), 0.15);
    }

    #[test]
    fn angle_threshold_converts_to_radians() {
        let mut cfg = RunConfig::default();
        cfg.index = IndexKind::TransmissionAngle;
        assert!((cfg.resolved_threshold().unwrap() - 75.0_f64.to_radians()).abs() < 1e-12);
        cfg.threshold = Some(60.0);
        assert!((cfg.resolved_threshold().unwrap() - 60.0_f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn file_overrides_defaults() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            file,
            "# scan setup\nmode = vam\nindex = angle\nphi = 12.0  # degrees\ngrid = -8:8:200,-8:8:200\nworking_mode = +-+\nchar_length = calibrate"
        )
        .unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_file(file.path()).unwrap();
        assert_eq!(cfg.mode, ModeSelect::Vam);
        assert_eq!(cfg.index, IndexKind::TransmissionAngle);
        assert_eq!(cfg.phi_deg, 12.0);
        assert_eq!(cfg.x_res, 200);
        assert_eq!(cfg.working_mode.to_string(), "+-+");
        assert_eq!(cfg.char_length, CharLengthChoice::Calibrate);
    }

    #[test]
    fn bad_lines_are_reported() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "mode = 9").unwrap();
        let mut cfg = RunConfig::default();
        let err = cfg.apply_file(file.path()).unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 1, .. }));
    }

    #[test]
    fn parse_helpers() {
        assert!(parse_mode("3").is_ok());
        assert!(parse_mode("0").is_err());
        assert_eq!(parse_phi_range("5:25:21").unwrap(), ((5.0, 25.0), 21));
        assert!(parse_phi_range("5:25").is_err());
        let (xr, xn, yr, yn) = parse_grid("-9:9:400,-8:8:300").unwrap();
        assert_eq!((xr, xn), ((-9.0, 9.0), 400));
        assert_eq!((yr, yn), ((-8.0, 8.0), 300));
        assert!(parse_char_length("-1").is_err());
    }
}
