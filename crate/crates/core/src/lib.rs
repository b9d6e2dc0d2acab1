//! Online packing of circles into a unit square or a `1 x b` rectangle.
//!
//! Circles arrive one at a time and are placed irrevocably. Each radius is
//! assigned a class, each class is packed into lanes of matching width, and
//! density bounds for the resulting lanes can be evaluated and audited.

pub mod audit;
pub mod blocks;
pub mod bounds;
pub mod classification;
pub mod containers;
pub mod dslp;
pub mod genseq;
pub mod geometry;
pub mod lane;

pub use classification::{build_class_table, ClassId, ClassTable};
pub use containers::{pack_rect_online, pack_square_online, PackResult, SquareMode, Status};
pub use geometry::{CircleSpec, LaneId, PlacedCircle, Point, Rect, EPS};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid radius {r}{}", index.map(|i| format!(" at index {i}")).unwrap_or_default())]
    InvalidRadius { index: Option<usize>, r: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}
