//! Double-sided structured lane packing: medium and (very) tiny circles go
//! into the host lane by extended SLP, small circles into one of two
//! half-width lanes packed in the opposite direction.

use serde::{Deserialize, Serialize};

use crate::blocks::{ExtendedLane, SmallClassOutcome};
use crate::classification::{ClassId, ClassTable};
use crate::geometry::{
    Disk, Frame, HostLane, LaneId, LanePart, Obstacles, Orientation, PlacedCircle, Rect,
};
use crate::lane::{LaneState, Strategy};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DslpMetrics {
    pub p_t: f64,
    pub p_b: f64,
    pub f_t: f64,
    pub f_b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DslpOutcome {
    Packed(PlacedCircle),
    /// No feasible position; the lane stays open.
    NoFit,
    /// The host was closed by the block engine, or was closed already.
    Closed,
}

#[derive(Clone, Debug)]
pub struct DslpLane {
    pub host: ExtendedLane,
    pub small_top: LaneState,
    pub small_bottom: LaneState,
}

impl DslpLane {
    /// `frame` is the host lane in container coordinates.
    /// Small lanes run leftwards in the host's canonical frame.
    pub fn new(host: HostLane, frame: Frame, table: ClassTable) -> Self {
        let (len, w) = (frame.length(), frame.width());
        let small = |part, y0, y1| {
            let local = Frame::new(
                Rect { x0: 0.0, y0, x1: len, y1 },
                Orientation::Leftwards,
            );
            LaneState::new(LaneId::new(host, part), frame.compose(&local), Strategy::Slp)
        };
        Self {
            small_top: small(LanePart::SmallTop, w / 2.0, w),
            small_bottom: small(LanePart::SmallBottom, 0.0, w / 2.0),
            host: ExtendedLane::new(LaneId::main(host), frame, table),
        }
    }

    pub fn id(&self) -> LaneId {
        self.host.host.id()
    }

    pub fn is_closed(&self) -> bool {
        self.host.is_closed()
    }

    pub fn width(&self) -> f64 {
        self.host.host.width()
    }

    pub fn length(&self) -> f64 {
        self.host.host.length()
    }

    pub fn pack(&mut self, r: f64, class: ClassId, seq: usize, obstacles: &mut Obstacles) -> DslpOutcome {
        if self.is_closed() {
            return DslpOutcome::Closed;
        }
        match class.0 {
            0 => DslpOutcome::NoFit,
            1 => self
                .host
                .pack_medium(r, seq, obstacles)
                .map_or(DslpOutcome::NoFit, DslpOutcome::Packed),
            2 => self.pack_small(r, seq, obstacles),
            _ => match self.host.pack_small_class(r, class, seq, obstacles) {
                SmallClassOutcome::Packed(p, _) => DslpOutcome::Packed(p),
                SmallClassOutcome::LaneClosed => DslpOutcome::Closed,
            },
        }
    }

    fn pack_small(&mut self, r: f64, seq: usize, obstacles: &mut Obstacles) -> DslpOutcome {
        let length_after = |lane: &LaneState| {
            lane.probe(r, obstacles)
                .map(|at| (at, lane.packing_length_with(&Disk { center: at, r })))
        };
        let top = length_after(&self.small_top);
        let bottom = length_after(&self.small_bottom);
        let (lane, at) = match (top, bottom) {
            (Some((t, pt)), Some((_, pb))) if pt < pb => (&mut self.small_top, t),
            (_, Some((b, _))) => (&mut self.small_bottom, b),
            (Some((t, _)), None) => (&mut self.small_top, t),
            (None, None) => return DslpOutcome::NoFit,
        };
        DslpOutcome::Packed(lane.commit(at, r, seq, ClassId::SMALL, obstacles))
    }

    pub fn metrics(&self) -> DslpMetrics {
        let host = self.host.metrics().packing_length;
        let p_t = host + self.small_top.metrics().packing_length;
        let p_b = host + self.small_bottom.metrics().packing_length;
        let len = self.length();
        DslpMetrics {
            p_t,
            p_b,
            f_t: len - p_t,
            f_b: len - p_b,
        }
    }

    /// Every committed circle of the lane, in container coordinates.
    pub fn placed(&self) -> impl Iterator<Item = &PlacedCircle> {
        self.host
            .placed()
            .chain(self.small_top.placed())
            .chain(self.small_bottom.placed())
    }

    /// Sub-lane states with their ids, host first.
    pub fn lanes(&self) -> impl Iterator<Item = &LaneState> {
        std::iter::once(&self.host.host)
            .chain([&self.small_top, &self.small_bottom])
            .chain(self.host.ledger.vlanes.iter().map(|v| &v.lane))
    }
}
