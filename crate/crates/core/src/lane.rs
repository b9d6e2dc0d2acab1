//! Per-lane packing state and the two base strategies.
//!
//! Structured lane packing (SLP) alternates circles between the canonical
//! bottom and top sides, advancing monotonically, and enforces two
//! restrictions: circles avoid the lane's exclusion intervals (vertical
//! sub-lanes), and consecutive circles are at least `min(r, r')` apart
//! along the lane. Tight lane packing (TLP) drops both restrictions.

use serde::{Deserialize, Serialize};

use crate::classification::ClassId;
use crate::geometry::{leftmost_feasible, Disk, Frame, Interval, LaneId, Obstacles, PlacedCircle, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Slp,
    Tlp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    NextBottom,
    NextTop,
}

impl Parity {
    fn flip(self) -> Self {
        match self {
            Parity::NextBottom => Parity::NextTop,
            Parity::NextTop => Parity::NextBottom,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LaneMetrics {
    pub packing_length: f64,
    pub circle_free_length: f64,
    pub occupied_area: f64,
}

/// Longitudinal extent of a set of canonical disks, 0 when empty.
pub fn packing_length<'a>(disks: impl IntoIterator<Item = &'a Disk>) -> f64 {
    let (lo, hi) = disks
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
            (lo.min(d.center.x - d.r), hi.max(d.center.x + d.r))
        });
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

#[derive(Clone, Debug)]
pub struct LaneState {
    id: LaneId,
    frame: Frame,
    strategy: Strategy,
    parity: Parity,
    /// Packed circles in canonical coordinates.
    packed: Vec<Disk>,
    /// The same circles as committed, in container coordinates.
    placed: Vec<PlacedCircle>,
    pub closed: bool,
    exclusions: Vec<Interval>,
}

impl LaneState {
    pub fn new(id: LaneId, frame: Frame, strategy: Strategy) -> Self {
        Self {
            id,
            frame,
            strategy,
            parity: Parity::NextBottom,
            packed: Vec::new(),
            placed: Vec::new(),
            closed: false,
            exclusions: Vec::new(),
        }
    }

    pub fn id(&self) -> LaneId {
        self.id
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn width(&self) -> f64 {
        self.frame.width()
    }

    pub fn length(&self) -> f64 {
        self.frame.length()
    }

    /// Canonical disks in packing order.
    pub fn canonical(&self) -> &[Disk] {
        &self.packed
    }

    /// Committed circles in container coordinates, in packing order.
    pub fn placed(&self) -> &[PlacedCircle] {
        &self.placed
    }

    pub fn is_empty(&self) -> bool {
        self.packed.is_empty()
    }

    pub fn last(&self) -> Option<&Disk> {
        self.packed.last()
    }

    pub fn exclusions(&self) -> &[Interval] {
        &self.exclusions
    }

    pub fn add_exclusion(&mut self, iv: Interval) {
        self.exclusions.push(iv);
    }

    fn floor(&self, r: f64) -> f64 {
        match (self.strategy, self.packed.last()) {
            (_, None) => 0.0,
            (Strategy::Slp, Some(last)) => last.center.x + r.min(last.r),
            (Strategy::Tlp, Some(last)) => last.center.x,
        }
    }

    /// Canonical center at which a circle of radius `r` would be packed next,
    /// without committing it.
    pub fn probe(&self, r: f64, obstacles: &Obstacles) -> Option<Point> {
        let w = self.width();
        if self.closed || r.is_nan() || r <= 0.0 || 2.0 * r > w {
            return None;
        }
        let y = match self.parity {
            Parity::NextBottom => r,
            Parity::NextTop => w - r,
        };
        let floor = self.floor(r);
        let lo = r.max(floor);
        let hi = self.length() - r;
        if lo > hi {
            return None;
        }
        let band = obstacles.band(&self.frame, lo, hi, y, r);
        let exclusions: &[Interval] = match self.strategy {
            Strategy::Slp => &self.exclusions,
            Strategy::Tlp => &[],
        };
        leftmost_feasible(r, hi, y, r, &band, exclusions, floor).map(|x| Point::new(x, y))
    }

    /// Records a circle at a probed canonical position and registers it as an
    /// obstacle. Returns it in container coordinates.
    pub fn commit(
        &mut self,
        at: Point,
        r: f64,
        seq: usize,
        class: ClassId,
        obstacles: &mut Obstacles,
    ) -> PlacedCircle {
        let placed = PlacedCircle {
            seq,
            center: self.frame.to_container(at),
            r,
            class,
            lane: self.id,
        };
        self.packed.push(Disk { center: at, r });
        self.placed.push(placed);
        self.parity = self.parity.flip();
        obstacles.insert(placed.disk());
        placed
    }

    /// Packs a circle with the lane's strategy. Nothing changes on failure.
    pub fn place(
        &mut self,
        r: f64,
        seq: usize,
        class: ClassId,
        obstacles: &mut Obstacles,
    ) -> Option<PlacedCircle> {
        let at = self.probe(r, obstacles)?;
        Some(self.commit(at, r, seq, class, obstacles))
    }

    /// Packing length after hypothetically adding `extra`.
    pub fn packing_length_with(&self, extra: &Disk) -> f64 {
        packing_length(self.packed.iter().chain(std::iter::once(extra)))
    }

    pub fn metrics(&self) -> LaneMetrics {
        let p = packing_length(&self.packed);
        LaneMetrics {
            packing_length: p,
            circle_free_length: self.length() - p,
            occupied_area: self.packed.iter().map(Disk::area).sum(),
        }
    }
}

/// Structured lane packing of one circle.
pub fn slp_place(
    lane: &mut LaneState,
    r: f64,
    seq: usize,
    class: ClassId,
    obstacles: &mut Obstacles,
) -> Option<PlacedCircle> {
    debug_assert_eq!(lane.strategy(), Strategy::Slp);
    lane.place(r, seq, class, obstacles)
}

/// Tight lane packing of one circle.
pub fn tlp_place(
    lane: &mut LaneState,
    r: f64,
    seq: usize,
    class: ClassId,
    obstacles: &mut Obstacles,
) -> Option<PlacedCircle> {
    debug_assert_eq!(lane.strategy(), Strategy::Tlp);
    lane.place(r, seq, class, obstacles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{HostLane, Orientation, Rect};

    fn lane(w: f64, len: f64, strategy: Strategy) -> (LaneState, Obstacles) {
        let rect = Rect::new(0.0, 0.0, len, w).unwrap();
        (
            LaneState::new(
                LaneId::main(HostLane::Rect),
                Frame::new(rect, Orientation::Rightwards),
                strategy,
            ),
            Obstacles::new(rect),
        )
    }

    #[test]
    fn slp_examples() {
        let (mut l, mut obs) = lane(1.0, 10.0, Strategy::Slp);
        let a = slp_place(&mut l, 0.5, 0, ClassId(1), &mut obs).unwrap();
        assert_eq!((a.center.x, a.center.y), (0.5, 0.5));
        let b = slp_place(&mut l, 0.5, 1, ClassId(1), &mut obs).unwrap();
        assert!((b.center.x - 1.5).abs() < 1e-12 && (b.center.y - 0.5).abs() < 1e-12);

        let (mut l, mut obs) = lane(1.0, 10.0, Strategy::Slp);
        let a = slp_place(&mut l, 0.1, 0, ClassId(2), &mut obs).unwrap();
        let b = slp_place(&mut l, 0.1, 1, ClassId(2), &mut obs).unwrap();
        assert_eq!((a.center.x, a.center.y), (0.1, 0.1));
        assert!((b.center.x - 0.2).abs() < 1e-12);
        assert!((b.center.y - 0.9).abs() < 1e-12);
    }

    #[test]
    fn tlp_examples() {
        let (mut l, mut obs) = lane(1.0, 10.0, Strategy::Tlp);
        let a = tlp_place(&mut l, 0.5, 0, ClassId(0), &mut obs).unwrap();
        assert_eq!((a.center.x, a.center.y), (0.5, 0.5));
        let b = tlp_place(&mut l, 0.5, 1, ClassId(0), &mut obs).unwrap();
        assert!((b.center.x - a.center.x - 1.0).abs() < 1e-12);

        // no minimum gap: two small circles stack at the same x
        let (mut l, mut obs) = lane(1.0, 10.0, Strategy::Tlp);
        tlp_place(&mut l, 0.1, 0, ClassId(0), &mut obs).unwrap();
        let b = tlp_place(&mut l, 0.1, 1, ClassId(0), &mut obs).unwrap();
        assert!((b.center.x - 0.1).abs() < 1e-12);
    }

    #[test]
    fn exclusions_only_bind_slp() {
        let (mut l, mut obs) = lane(1.0, 10.0, Strategy::Slp);
        l.add_exclusion(Interval::new(0.0, 0.3));
        let a = slp_place(&mut l, 0.2, 0, ClassId(1), &mut obs).unwrap();
        assert!((a.center.x - 0.5).abs() < 1e-12);

        let (mut l, mut obs) = lane(1.0, 10.0, Strategy::Tlp);
        l.add_exclusion(Interval::new(0.0, 0.3));
        let a = tlp_place(&mut l, 0.2, 0, ClassId(0), &mut obs).unwrap();
        assert!((a.center.x - 0.2).abs() < 1e-12);
    }

    #[test]
    fn failure_leaves_lane_untouched() {
        let (mut l, mut obs) = lane(1.0, 1.0, Strategy::Slp);
        slp_place(&mut l, 0.5, 0, ClassId(1), &mut obs).unwrap();
        let before = (l.parity(), l.canonical().len(), obs.len());
        assert!(slp_place(&mut l, 0.4, 1, ClassId(1), &mut obs).is_none());
        assert_eq!(before, (l.parity(), l.canonical().len(), obs.len()));
        // too wide for the lane
        assert!(l.probe(0.6, &obs).is_none());
    }

    #[test]
    fn metrics_examples() {
        let (mut l, mut obs) = lane(1.0, 10.0, Strategy::Slp);
        let m = l.metrics();
        assert_eq!((m.packing_length, m.circle_free_length), (0.0, 10.0));
        slp_place(&mut l, 0.3, 0, ClassId(1), &mut obs).unwrap();
        assert!((l.metrics().packing_length - 0.6).abs() < 1e-12);
        slp_place(&mut l, 0.4, 1, ClassId(1), &mut obs).unwrap();
        slp_place(&mut l, 0.25, 2, ClassId(1), &mut obs).unwrap();
        let c = l.canonical();
        let expect = c.iter().map(|d| d.center.x + d.r).fold(f64::MIN, f64::max)
            - c.iter().map(|d| d.center.x - d.r).fold(f64::MAX, f64::min);
        assert!((l.metrics().packing_length - expect).abs() < 1e-12);
    }

    #[test]
    fn other_lanes_are_obstacles() {
        // a leftwards lane sharing the rectangle sees circles of a rightwards one
        let rect = Rect::new(0.0, 0.0, 2.0, 1.0).unwrap();
        let mut obs = Obstacles::new(rect);
        let mut right = LaneState::new(
            LaneId::main(HostLane::Rect),
            Frame::new(rect, Orientation::Rightwards),
            Strategy::Slp,
        );
        let mut left = LaneState::new(
            LaneId::new(HostLane::Rect, crate::geometry::LanePart::SmallBottom),
            Frame::new(rect, Orientation::Leftwards),
            Strategy::Slp,
        );
        right.place(0.5, 0, ClassId(1), &mut obs).unwrap();
        right.place(0.5, 1, ClassId(1), &mut obs).unwrap();
        assert!(left.place(0.5, 2, ClassId(1), &mut obs).is_none());
        let c = left.place(0.4, 2, ClassId(1), &mut obs);
        assert!(c.is_none());
    }
}
