//! Axis-aligned primitives, tolerance-aware predicates and the fixed-height
//! placement solver shared by every lane strategy.
//!
//! All lanes work in a *canonical* frame: the lane is the rectangle
//! `[0, length] x [0, width]`, circles are packed from `u = 0` towards
//! `u = length` and alternate between the sides `v = 0` ("bottom") and
//! `v = width` ("top"). A [`Frame`] is the isometry that maps this canonical
//! rectangle onto the container.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::classification::ClassId;
use crate::Error;

/// Global geometric tolerance in container units. Touching circles are legal,
/// penetration below this value is ignored by the predicates.
pub const EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// A radius as it arrives in the online sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleSpec {
    r: f64,
}

impl CircleSpec {
    pub fn new(r: f64) -> Result<Self, Error> {
        if r.is_finite() && r > 0.0 {
            Ok(Self { r })
        } else {
            Err(Error::InvalidRadius { index: None, r })
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// A bare disk: center plus radius.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Point,
    pub r: f64,
}

impl Disk {
    pub const fn new(x: f64, y: f64, r: f64) -> Self {
        Self {
            center: Point::new(x, y),
            r,
        }
    }

    pub fn area(&self) -> f64 {
        circle_area(self.r)
    }

    pub fn bbox(&self) -> Rect {
        Rect {
            x0: self.center.x - self.r,
            y0: self.center.y - self.r,
            x1: self.center.x + self.r,
            y1: self.center.y + self.r,
        }
    }
}

/// Area of a circle. Every area sum in the crate goes through this function
/// so that budget checks are reproducible bit for bit.
#[inline]
pub fn circle_area(r: f64) -> f64 {
    std::f64::consts::PI * r * r
}

/// A committed circle. Serialized as `{i, x, y, r, class, lane}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacedCircle {
    #[serde(rename = "i")]
    pub seq: usize,
    #[serde(flatten)]
    pub center: Point,
    pub r: f64,
    pub class: ClassId,
    pub lane: LaneId,
}

impl PlacedCircle {
    pub fn disk(&self) -> Disk {
        Disk {
            center: self.center,
            r: self.r,
        }
    }
}

/// Which container-level lane a sub-lane belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HostLane {
    /// The single lane of a `1 x b` rectangle.
    Rect,
    /// `L0` .. `L4` of the unit square.
    Square(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LanePart {
    /// The host lane itself (large lane `L0`, or the medium row of a DSLP lane).
    Main,
    SmallTop,
    SmallBottom,
    Vertical { class: u32, index: u32 },
}

/// Identifier of a lane, e.g. `L2`, `L2.top`, `R.v5-3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaneId {
    pub host: HostLane,
    pub part: LanePart,
}

impl LaneId {
    pub const fn new(host: HostLane, part: LanePart) -> Self {
        Self { host, part }
    }

    pub const fn main(host: HostLane) -> Self {
        Self {
            host,
            part: LanePart::Main,
        }
    }
}

impl fmt::Display for LaneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.host {
            HostLane::Rect => write!(f, "R")?,
            HostLane::Square(i) => write!(f, "L{i}")?,
        }
        match self.part {
            LanePart::Main => Ok(()),
            LanePart::SmallTop => write!(f, ".top"),
            LanePart::SmallBottom => write!(f, ".bottom"),
            LanePart::Vertical { class, index } => write!(f, ".v{class}-{index}"),
        }
    }
}

impl FromStr for LaneId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Parse(format!("invalid lane id `{s}`"));
        let (host, rest) = match s.split_once('.') {
            Some((h, p)) => (h, Some(p)),
            None => (s, None),
        };
        let host = if host == "R" {
            HostLane::Rect
        } else {
            let n: u8 = host
                .strip_prefix('L')
                .and_then(|n| n.parse().ok())
                .ok_or_else(bad)?;
            HostLane::Square(n)
        };
        let part = match rest {
            None => LanePart::Main,
            Some("top") => LanePart::SmallTop,
            Some("bottom") => LanePart::SmallBottom,
            Some(v) => {
                let (class, index) = v
                    .strip_prefix('v')
                    .and_then(|v| v.split_once('-'))
                    .ok_or_else(bad)?;
                LanePart::Vertical {
                    class: class.parse().map_err(|_| bad())?,
                    index: index.parse().map_err(|_| bad())?,
                }
            }
        };
        Ok(Self { host, part })
    }
}

impl Serialize for LaneId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LaneId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, Error> {
        if [x0, y0, x1, y1].iter().all(|v| v.is_finite()) && x0 < x1 && y0 < y1 {
            Ok(Self { x0, y0, x1, y1 })
        } else {
            Err(Error::Config(format!(
                "degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]"
            )))
        }
    }

    pub fn unit_square() -> Self {
        Self {
            x0: 0.0,
            y0: 0.0,
            x1: 1.0,
            y1: 1.0,
        }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    /// Closed-set intersection test.
    pub fn intersects(&self, other: &Rect) -> bool {
        self.x0 <= other.x1 && other.x0 <= self.x1 && self.y0 <= other.y1 && other.y0 <= self.y1
    }

    fn from_corners(a: Point, b: Point) -> Self {
        Self {
            x0: a.x.min(b.x),
            y0: a.y.min(b.y),
            x1: a.x.max(b.x),
            y1: a.y.max(b.y),
        }
    }
}

/// A closed interval on the canonical `u` axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    /// True if the open interiors intersect.
    pub fn overlaps_open(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Rightwards,
    Leftwards,
    Upwards,
    Downwards,
}

impl Orientation {
    pub fn is_horizontal(self) -> bool {
        matches!(self, Orientation::Rightwards | Orientation::Leftwards)
    }

    pub fn opposite(self) -> Self {
        match self {
            Orientation::Rightwards => Orientation::Leftwards,
            Orientation::Leftwards => Orientation::Rightwards,
            Orientation::Upwards => Orientation::Downwards,
            Orientation::Downwards => Orientation::Upwards,
        }
    }

    fn u_axis(self) -> Axis {
        match self {
            Orientation::Rightwards => Axis::PosX,
            Orientation::Leftwards => Axis::NegX,
            Orientation::Upwards => Axis::PosY,
            Orientation::Downwards => Axis::NegY,
        }
    }

    /// Where the canonical bottom (`v = 0`) lies by default: the bottom side
    /// for horizontal lanes, the left side for vertical ones.
    fn default_v_axis(self) -> Axis {
        if self.is_horizontal() {
            Axis::PosY
        } else {
            Axis::PosX
        }
    }

    fn from_u_axis(a: Axis) -> Self {
        match a {
            Axis::PosX => Orientation::Rightwards,
            Axis::NegX => Orientation::Leftwards,
            Axis::PosY => Orientation::Upwards,
            Axis::NegY => Orientation::Downwards,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Axis {
    PosX,
    NegX,
    PosY,
    NegY,
}

impl Axis {
    fn vec(self) -> (f64, f64) {
        match self {
            Axis::PosX => (1.0, 0.0),
            Axis::NegX => (-1.0, 0.0),
            Axis::PosY => (0.0, 1.0),
            Axis::NegY => (0.0, -1.0),
        }
    }

    fn neg(self) -> Self {
        match self {
            Axis::PosX => Axis::NegX,
            Axis::NegX => Axis::PosX,
            Axis::PosY => Axis::NegY,
            Axis::NegY => Axis::PosY,
        }
    }
}

/// Isometry between a lane's canonical frame and container coordinates.
///
/// `orientation` fixes the packing direction; `mirrored` flips which long
/// side is the canonical bottom (only needed for lanes nested in other lanes).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub rect: Rect,
    pub orientation: Orientation,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mirrored: bool,
}

impl Frame {
    pub fn new(rect: Rect, orientation: Orientation) -> Self {
        Self {
            rect,
            orientation,
            mirrored: false,
        }
    }

    fn u_axis(&self) -> Axis {
        self.orientation.u_axis()
    }

    fn v_axis(&self) -> Axis {
        let v = self.orientation.default_v_axis();
        if self.mirrored {
            v.neg()
        } else {
            v
        }
    }

    /// Extent along the packing direction.
    pub fn length(&self) -> f64 {
        if self.orientation.is_horizontal() {
            self.rect.width()
        } else {
            self.rect.height()
        }
    }

    /// Extent across the packing direction.
    pub fn width(&self) -> f64 {
        if self.orientation.is_horizontal() {
            self.rect.height()
        } else {
            self.rect.width()
        }
    }

    fn origin(&self) -> Point {
        let mut o = Point::new(self.rect.x0, self.rect.y0);
        for axis in [self.u_axis(), self.v_axis()] {
            match axis {
                Axis::NegX => o.x = self.rect.x1,
                Axis::NegY => o.y = self.rect.y1,
                Axis::PosX | Axis::PosY => {}
            }
        }
        o
    }

    pub fn to_container(&self, p: Point) -> Point {
        let o = self.origin();
        let (ux, uy) = self.u_axis().vec();
        let (vx, vy) = self.v_axis().vec();
        Point::new(o.x + p.x * ux + p.y * vx, o.y + p.x * uy + p.y * vy)
    }

    pub fn to_canonical(&self, p: Point) -> Point {
        let o = self.origin();
        let (dx, dy) = (p.x - o.x, p.y - o.y);
        let (ux, uy) = self.u_axis().vec();
        let (vx, vy) = self.v_axis().vec();
        Point::new(dx * ux + dy * uy, dx * vx + dy * vy)
    }

    pub fn disk_to_canonical(&self, d: &Disk) -> Disk {
        Disk {
            center: self.to_canonical(d.center),
            r: d.r,
        }
    }

    pub fn rect_to_container(&self, r: &Rect) -> Rect {
        Rect::from_corners(
            self.to_container(Point::new(r.x0, r.y0)),
            self.to_container(Point::new(r.x1, r.y1)),
        )
    }

    fn map_axis(&self, a: Axis) -> Axis {
        match a {
            Axis::PosX => self.u_axis(),
            Axis::NegX => self.u_axis().neg(),
            Axis::PosY => self.v_axis(),
            Axis::NegY => self.v_axis().neg(),
        }
    }

    /// Compose: `local` is a frame whose rectangle is given in this frame's
    /// canonical coordinates. Returns the equivalent container frame.
    pub fn compose(&self, local: &Frame) -> Frame {
        let u = self.map_axis(local.u_axis());
        let v = self.map_axis(local.v_axis());
        let orientation = Orientation::from_u_axis(u);
        Frame {
            rect: self.rect_to_container(&local.rect),
            orientation,
            mirrored: v != orientation.default_v_axis(),
        }
    }
}

/// True iff the disks intersect by more than `eps`. Tangency is not overlap.
pub fn circles_overlap(a: &Disk, b: &Disk, eps: f64) -> bool {
    a.center.distance(&b.center) < a.r + b.r - eps
}

/// True iff the disk lies inside `rect`, allowing `eps` slack on each side.
pub fn circle_in_rect(c: &Disk, rect: &Rect, eps: f64) -> bool {
    c.center.x - c.r >= rect.x0 - eps
        && c.center.x + c.r <= rect.x1 + eps
        && c.center.y - c.r >= rect.y0 - eps
        && c.center.y + c.r <= rect.y1 + eps
}

/// Open interval of centers `x` at height `y` for which a circle of radius
/// `r` would intersect `obstacle`.
pub fn forbidden_interval(obstacle: &Disk, y: f64, r: f64) -> Option<Interval> {
    let dy = (y - obstacle.center.y).abs();
    let reach = r + obstacle.r;
    if dy >= reach {
        return None;
    }
    let d = ((reach - dy) * (reach + dy)).sqrt();
    Some(Interval::new(obstacle.center.x - d, obstacle.center.x + d))
}

/// Smallest `x` in `[max(x_min, floor), x_max]` such that a circle of radius
/// `r` centered at `(x, y)` intersects no obstacle and whose extent
/// `[x - r, x + r]` meets no exclusion interval's interior.
pub fn leftmost_feasible(
    x_min: f64,
    x_max: f64,
    y: f64,
    r: f64,
    obstacles: &[Disk],
    exclusions: &[Interval],
    floor: f64,
) -> Option<f64> {
    let mut blocked: Vec<Interval> = obstacles
        .iter()
        .filter_map(|o| forbidden_interval(o, y, r))
        .chain(
            exclusions
                .iter()
                .map(|e| Interval::new(e.lo - r, e.hi + r)),
        )
        .collect();
    blocked.sort_unstable_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap_or(Ordering::Equal));

    let mut x = x_min.max(floor);
    for iv in &blocked {
        if iv.lo >= x {
            break;
        }
        if x < iv.hi {
            x = iv.hi;
        }
    }
    (x <= x_max).then_some(x)
}

const CELLS_PER_UNIT: f64 = 64.0;

/// Uniform-grid index over every committed circle of a packing run.
///
/// Lanes may overlap, so each placement query has to see the circles of all
/// lanes; the grid keeps those queries local.
#[derive(Clone, Debug)]
pub struct Obstacles {
    bounds: Rect,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<u32>>,
    disks: Vec<Disk>,
}

impl Obstacles {
    pub fn new(bounds: Rect) -> Self {
        let nx = ((bounds.width() * CELLS_PER_UNIT).ceil() as usize).max(1);
        let ny = ((bounds.height() * CELLS_PER_UNIT).ceil() as usize).max(1);
        Self {
            bounds,
            nx,
            ny,
            cells: vec![Vec::new(); nx * ny],
            disks: Vec::new(),
        }
    }

    pub fn bounds(&self) -> &Rect {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    fn cell_range(&self, r: &Rect) -> (usize, usize, usize, usize) {
        let cx = |x: f64| -> usize {
            let c = ((x - self.bounds.x0) * CELLS_PER_UNIT).floor();
            c.clamp(0.0, (self.nx - 1) as f64) as usize
        };
        let cy = |y: f64| -> usize {
            let c = ((y - self.bounds.y0) * CELLS_PER_UNIT).floor();
            c.clamp(0.0, (self.ny - 1) as f64) as usize
        };
        (cx(r.x0), cx(r.x1), cy(r.y0), cy(r.y1))
    }

    pub fn insert(&mut self, d: Disk) {
        let id = self.disks.len() as u32;
        let (ix0, ix1, iy0, iy1) = self.cell_range(&d.bbox());
        for iy in iy0..=iy1 {
            for ix in ix0..=ix1 {
                self.cells[iy * self.nx + ix].push(id);
            }
        }
        self.disks.push(d);
    }

    /// Appends every disk whose bounding box meets `region` to `out`.
    pub fn query(&self, region: &Rect, out: &mut Vec<Disk>) {
        let (ix0, ix1, iy0, iy1) = self.cell_range(region);
        let mut ids: Vec<u32> = Vec::new();
        for iy in iy0..=iy1 {
            for ix in ix0..=ix1 {
                ids.extend_from_slice(&self.cells[iy * self.nx + ix]);
            }
        }
        ids.sort_unstable();
        ids.dedup();
        out.extend(
            ids.into_iter()
                .map(|i| self.disks[i as usize])
                .filter(|d| d.bbox().intersects(region)),
        );
    }

    /// Obstacles relevant to a circle of radius `r` at canonical height `y`
    /// with center somewhere in `[lo, hi]`, returned in canonical coordinates.
    pub fn band(&self, frame: &Frame, lo: f64, hi: f64, y: f64, r: f64) -> Vec<Disk> {
        let region = frame.rect_to_container(&Rect {
            x0: lo - r,
            y0: y - r,
            x1: hi + r,
            y1: y + r,
        });
        let mut found = Vec::new();
        self.query(&region, &mut found);
        for d in &mut found {
            *d = frame.disk_to_canonical(d);
        }
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(
        x_min: f64,
        x_max: f64,
        y: f64,
        r: f64,
        obstacles: &[Disk],
        step: f64,
    ) -> Option<f64> {
        let n = ((x_max - x_min) / step).floor() as usize;
        (0..=n).map(|k| x_min + k as f64 * step).find(|&x| {
            let c = Disk::new(x, y, r);
            obstacles.iter().all(|o| !circles_overlap(&c, o, 0.0))
        })
    }

    #[test]
    fn overlap_examples() {
        let a = Disk::new(0.0, 0.0, 1.0);
        assert!(!circles_overlap(&a, &Disk::new(2.0, 0.0, 1.0), EPS));
        assert!(circles_overlap(&a, &Disk::new(1.9, 0.0, 1.0), EPS));
        assert!(!circles_overlap(&a, &Disk::new(2.0 - 1e-12, 0.0, 1.0), EPS));
    }

    #[test]
    fn containment_examples() {
        let unit = Rect::unit_square();
        assert!(circle_in_rect(&Disk::new(0.5, 0.5, 0.5), &unit, EPS));
        assert!(!circle_in_rect(&Disk::new(0.5, 0.5, 0.5 + 1e-6), &unit, EPS));
        let half = Rect::new(0.0, 0.0, 1.0, 0.5).unwrap();
        assert!(circle_in_rect(&Disk::new(0.25, 0.25, 0.25), &half, 0.0));
    }

    #[test]
    fn forbidden_interval_examples() {
        let iv = forbidden_interval(&Disk::new(1.0, 0.5, 0.5), 0.5, 0.5).unwrap();
        assert_eq!((iv.lo, iv.hi), (0.0, 2.0));
        assert!(forbidden_interval(&Disk::new(1.0, 0.9, 0.1), 0.1, 0.1).is_none());
        // chord half-length at the dense-block configuration equals sqrt(4q - 1)
        for q in [0.3, 0.4, 0.5_f64] {
            let iv = forbidden_interval(&Disk::new(0.0, 1.0 - q, q), q, q).unwrap();
            assert!((iv.hi - (4.0 * q - 1.0).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn leftmost_examples() {
        assert_eq!(leftmost_feasible(0.25, 10.0, 0.25, 0.25, &[], &[], 0.0), Some(0.25));
        let obs = [Disk::new(0.25, 0.25, 0.25)];
        assert_eq!(leftmost_feasible(0.25, 10.0, 0.25, 0.25, &obs, &[], 0.0), Some(0.75));
        // exclusion inflated by the radius
        let ex = [Interval::new(1.0, 1.5)];
        assert_eq!(leftmost_feasible(0.0, 10.0, 0.5, 0.5, &[], &ex, 0.6), Some(2.0));
        assert_eq!(leftmost_feasible(0.5, 10.0, 0.5, 0.5, &[], &ex, 0.4), Some(0.5));
        assert_eq!(leftmost_feasible(0.0, 1.0, 0.5, 0.5, &obs, &ex, 0.6), None);
    }

    #[test]
    fn leftmost_matches_grid_scan_in_gaps() {
        // obstacles at the same height leaving one gap of width 0.3 and one of 0.7
        let obs = [
            Disk::new(0.5, 0.2, 0.2),
            Disk::new(1.0, 0.2, 0.15),
            Disk::new(2.2, 0.2, 0.2),
        ];
        let r = 0.2;
        let got = leftmost_feasible(r, 5.0, 0.2, r, &obs, &[], 0.0).unwrap();
        let oracle = brute_force(r, 5.0, 0.2, r, &obs, 1e-6).unwrap();
        assert!((got - oracle).abs() <= 1e-6, "{got} vs {oracle}");
    }

    #[test]
    fn frames_round_trip_and_orient() {
        let rect = Rect::new(1.0, 2.0, 4.0, 3.0).unwrap();
        let right = Frame::new(rect, Orientation::Rightwards);
        assert_eq!(right.to_container(Point::new(0.0, 0.0)), Point::new(1.0, 2.0));
        let left = Frame::new(rect, Orientation::Leftwards);
        assert_eq!(left.to_container(Point::new(0.5, 0.25)), Point::new(3.5, 2.25));
        assert_eq!((left.length(), left.width()), (3.0, 1.0));

        let tall = Rect::new(0.0, 0.0, 1.0, 3.0).unwrap();
        let up = Frame::new(tall, Orientation::Upwards);
        assert_eq!(up.to_container(Point::new(0.5, 0.25)), Point::new(0.25, 0.5));
        let down = Frame::new(tall, Orientation::Downwards);
        assert_eq!(down.to_container(Point::new(0.5, 0.25)), Point::new(0.25, 2.5));
        for f in [right, left, up, down] {
            let p = Point::new(0.3, 0.7);
            let q = f.to_canonical(f.to_container(p));
            assert!((p.x - q.x).abs() < 1e-12 && (p.y - q.y).abs() < 1e-12);
        }
    }

    #[test]
    fn composed_frames_agree_with_pointwise_composition() {
        let host = Frame::new(
            Rect::new(0.7, 0.0, 1.0, 0.7).unwrap(),
            Orientation::Downwards,
        );
        let local = Frame::new(
            Rect::new(0.1, 0.0, 0.15, 0.3).unwrap(),
            Orientation::Downwards,
        );
        let composed = host.compose(&local);
        for p in [Point::new(0.0, 0.0), Point::new(0.2, 0.01), Point::new(0.3, 0.05)] {
            let a = composed.to_container(p);
            let b = host.to_container(local.to_container(p));
            assert!((a.x - b.x).abs() < 1e-12 && (a.y - b.y).abs() < 1e-12);
        }
        assert!((composed.length() - 0.3).abs() < 1e-12);
        assert!((composed.width() - 0.05).abs() < 1e-12);
    }

    #[test]
    fn lane_id_round_trip() {
        for s in ["R", "L0", "L3.top", "R.bottom", "L2.v7-12"] {
            assert_eq!(s.parse::<LaneId>().unwrap().to_string(), s);
        }
        assert!("X1".parse::<LaneId>().is_err());
        assert!("L1.v3".parse::<LaneId>().is_err());
    }

    #[test]
    fn grid_query_finds_overlapping_disks() {
        let mut idx = Obstacles::new(Rect::unit_square());
        idx.insert(Disk::new(0.5, 0.5, 0.3));
        idx.insert(Disk::new(0.05, 0.05, 0.01));
        let mut out = Vec::new();
        idx.query(&Rect::new(0.79, 0.4, 0.9, 0.6).unwrap(), &mut out);
        assert_eq!(out.len(), 1);
        out.clear();
        idx.query(&Rect::new(0.0, 0.0, 0.15, 0.15).unwrap(), &mut out);
        assert_eq!(out.len(), 1);
    }
}
