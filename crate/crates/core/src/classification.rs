//! Circle classes: relative lower bounds `q_i` and lane widths `w_i` with
//! `w_{i+1} = 2 q_i w_i`, plus the optional large class of the unit square.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

/// Relative lower bound of medium circles.
pub const Q_MEDIUM: f64 = 0.25;
/// Default relative lower bound of small circles.
pub const Q_SMALL: f64 = 0.168261;
/// Small-class bound used when no tiny circles occur.
pub const Q_SMALL_NO_TINY: f64 = 0.191578;
/// `q_3 ..= q_13`.
pub const Q_TINY: [f64; 11] = [
    0.371446, 0.190657, 0.175592, 0.170699, 0.169078, 0.168354, 0.168293, 0.168272, 0.168265,
    0.168263, 0.168262,
];
/// Bound used for every class beyond 13.
pub const Q_LIMIT: f64 = 0.168262;
/// Maximal number of rows when no minimal radius is given.
pub const MAX_DEPTH: usize = 40;

/// Class index: 0 large, 1 medium, 2 small, 3-4 tiny, 5+ very tiny.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(pub u32);

impl ClassId {
    pub const LARGE: ClassId = ClassId(0);
    pub const MEDIUM: ClassId = ClassId(1);
    pub const SMALL: ClassId = ClassId(2);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn name(self) -> &'static str {
        match self.0 {
            0 => "large",
            1 => "medium",
            2 => "small",
            3 | 4 => "tiny",
            _ => "very tiny",
        }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub index: u32,
    pub q: f64,
    pub width: f64,
}

impl ClassRow {
    /// Absolute lower bound `q_i * w_i` (exclusive).
    pub fn lower_bound(&self) -> f64 {
        self.q * self.width
    }
}

/// Large circles of the unit square: `w/2 < r <= w0/2` with `w0 = 1 - w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LargeClass {
    /// Absolute lower bound, `w / 2`.
    pub q0: f64,
    /// Width of the large lane, `1 - w`.
    pub w0: f64,
}

/// Why a radius has no class.
#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("radius {r} exceeds the largest admissible radius {max}")]
    TooLarge { r: f64, max: f64 },
    #[error("radius {r} is not above the smallest class bound {min}")]
    TooSmall { r: f64, min: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassTable {
    pub base_width: f64,
    pub rows: Vec<ClassRow>,
    pub large: Option<LargeClass>,
}

/// Builds the class table for base lane width `w`.
///
/// Rows follow the recurrence until `q_i w_i < min_radius`, or for
/// [`MAX_DEPTH`] rows when no minimal radius is given.
pub fn build_class_table(
    w: f64,
    q2_override: Option<f64>,
    min_radius: Option<f64>,
    large: bool,
) -> Result<ClassTable, Error> {
    if !(w > 0.0 && w <= 1.0) {
        return Err(Error::Config(format!("base lane width {w} not in (0, 1]")));
    }
    if let Some(q2) = q2_override {
        if !(q2 > 0.0 && q2 < 0.5) {
            return Err(Error::Config(format!("q2 override {q2} not in (0, 0.5)")));
        }
    }
    if let Some(m) = min_radius {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Config(format!("minimal radius {m} must be positive")));
        }
    }

    let q_of = |i: usize| -> f64 {
        match i {
            1 => Q_MEDIUM,
            2 => q2_override.unwrap_or(Q_SMALL),
            3..=13 => Q_TINY[i - 3],
            _ => Q_LIMIT,
        }
    };

    let mut rows = Vec::new();
    let mut width = w;
    for i in 1..=MAX_DEPTH {
        let row = ClassRow {
            index: i as u32,
            q: q_of(i),
            width,
        };
        rows.push(row);
        if min_radius.is_some_and(|m| row.lower_bound() < m) {
            break;
        }
        width *= 2.0 * row.q;
    }

    Ok(ClassTable {
        base_width: w,
        rows,
        large: large.then(|| LargeClass {
            q0: w / 2.0,
            w0: 1.0 - w,
        }),
    })
}

impl ClassTable {
    /// Row of class `i >= 1`.
    pub fn row(&self, class: ClassId) -> Option<&ClassRow> {
        let i = class.0 as usize;
        if i == 0 {
            None
        } else {
            self.rows.get(i - 1)
        }
    }

    pub fn lane_width(&self, class: ClassId) -> Option<f64> {
        match class.0 {
            0 => self.large.map(|l| l.w0),
            _ => self.row(class).map(|r| r.width),
        }
    }

    pub fn max_radius(&self) -> f64 {
        match self.large {
            Some(l) => l.w0 / 2.0,
            None => self.base_width / 2.0,
        }
    }

    /// Exclusive lower bound of the deepest class.
    pub fn min_radius(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.lower_bound())
    }

    /// Classes are upper-inclusive and lower-exclusive.
    pub fn classify(&self, r: f64) -> Result<ClassId, ClassifyError> {
        let max = self.max_radius();
        if r.is_nan() || r > max {
            return Err(ClassifyError::TooLarge { r, max });
        }
        if let Some(large) = self.large {
            if r > large.q0 {
                return Ok(ClassId::LARGE);
            }
        }
        self.rows
            .iter()
            .find(|row| r > row.lower_bound())
            .map(|row| ClassId(row.index))
            .ok_or(ClassifyError::TooSmall {
                r,
                min: self.min_radius(),
            })
    }

    /// CSV dump: `i,q_i,w_i,lower_bound`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,q_i,w_i,lower_bound\n");
        if let Some(l) = self.large {
            out.push_str(&format!("0,{},{},{}\n", l.q0, l.w0, l.q0));
        }
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                row.index,
                row.q,
                row.width,
                row.lower_bound()
            ));
        }
        out
    }
}
