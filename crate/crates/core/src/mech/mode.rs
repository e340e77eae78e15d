use std::fmt;
use std::str::FromStr;

/// Which joint of a leg is driven.
///
/// `Proximal` drives the proximal link angle alpha_i; `Distal` drives the
/// direction of the distal link through the base-mounted parallelogram,
/// equivalent to actuating the second revolute of the leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LegDrive {
    Proximal,
    Distal,
}

/// One of the eight actuating modes: a drive selector per leg.
///
/// The numbering fixes mode 1 as all-proximal and mode 8 as all-distal,
/// with the mixed modes ordered so that exactly one leg differs from the
/// surrounding uniform block (2: leg 3 distal, 3: leg 2 distal, 4: leg 1
/// distal, 5: legs 2+3 distal, 6: legs 1+2 distal, 7: legs 1+3 distal).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ActuatingMode {
    drives: [LegDrive; 3],
}

use LegDrive::{Distal, Proximal};

const MODE_TABLE: [[LegDrive; 3]; 8] = [
    [Proximal, Proximal, Proximal],
    [Proximal, Proximal, Distal],
    [Proximal, Distal, Proximal],
    [Distal, Proximal, Proximal],
    [Proximal, Distal, Distal],
    [Distal, Distal, Proximal],
    [Distal, Proximal, Distal],
    [Distal, Distal, Distal],
];

impl ActuatingMode {
    /// All eight modes in numbering order.
    pub fn all() -> [ActuatingMode; 8] {
        MODE_TABLE.map(|drives| ActuatingMode { drives })
    }

    /// Mode by its 1-based number.
    pub fn from_number(number: u8) -> Option<ActuatingMode> {
        if (1..=8).contains(&number) {
            Some(ActuatingMode {
                drives: MODE_TABLE[number as usize - 1],
            })
        } else {
            None
        }
    }

    pub fn from_drives(drives: [LegDrive; 3]) -> ActuatingMode {
        ActuatingMode { drives }
    }

    /// 1-based mode number.
    pub fn number(&self) -> u8 {
        MODE_TABLE
            .iter()
            .position(|row| *row == self.drives)
            .expect("drive table covers all combinations") as u8
            + 1
    }

    pub fn drive(&self, leg: usize) -> LegDrive {
        self.drives[leg]
    }

    pub fn drives(&self) -> [LegDrive; 3] {
        self.drives
    }
}

impl fmt::Display for ActuatingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Elbow branch sign of one leg's inverse-kinematics solution.
///
/// `Plus` picks the circle-circle intersection to the left of the ray from
/// the base anchor to the platform point, `Minus` the one to the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Elbow {
    Plus,
    Minus,
}

impl Elbow {
    pub fn sign(&self) -> f64 {
        match self {
            Elbow::Plus => 1.0,
            Elbow::Minus => -1.0,
        }
    }
}

/// Inverse-kinematics branch choice for the three legs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WorkingMode {
    pub elbows: [Elbow; 3],
}

impl WorkingMode {
    pub fn new(elbows: [Elbow; 3]) -> Self {
        WorkingMode { elbows }
    }

    pub fn elbow(&self, leg: usize) -> Elbow {
        self.elbows[leg]
    }
}

/// All elbows `Plus`.
impl Default for WorkingMode {
    fn default() -> Self {
        WorkingMode::new([Elbow::Plus; 3])
    }
}

impl fmt::Display for WorkingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for elbow in &self.elbows {
            f.write_str(match elbow {
                Elbow::Plus => "+",
                Elbow::Minus => "-",
            })?;
        }
        Ok(())
    }
}

impl FromStr for WorkingMode {
    type Err = String;

    /// Parses the three-character sign form, e.g. `+++` or `+-+`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 3 {
            return Err(format!("working mode must have 3 signs, got {s:?}"));
        }
        let mut elbows = [Elbow::Plus; 3];
        for (i, ch) in chars.iter().enumerate() {
            elbows[i] = match ch {
                '+' => Elbow::Plus,
                '-' => Elbow::Minus,
                _ => return Err(format!("invalid elbow sign {ch:?} in {s:?}")),
            };
        }
        Ok(WorkingMode::new(elbows))
    }
}
