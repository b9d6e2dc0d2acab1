//! Extended structured lane packing: medium circles are packed into the host
//! lane by SLP, tiny and very tiny circles go into vertical sub-lanes placed
//! inside sparse blocks (next to a medium half circle) or into the free area
//! behind all content.
//!
//! All `x` values in this module are canonical `u` coordinates of the host.

use serde::Serialize;

use crate::classification::{ClassId, ClassTable};
use crate::geometry::{
    leftmost_feasible, Frame, Interval, LaneId, LanePart, Obstacles, Orientation, PlacedCircle,
    Point, Rect,
};
use crate::lane::{packing_length, LaneMetrics, LaneState, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockState {
    Free,
    Reserved3,
    Reserved4,
    ReservedGe5,
    Closed,
}

impl BlockState {
    pub fn is_open(self) -> bool {
        self != BlockState::Closed
    }

    /// Whether a lane of `class` may be packed into a block in this state.
    pub fn accepts(self, class: ClassId) -> bool {
        match self {
            BlockState::Free => true,
            BlockState::Reserved3 => class.0 == 3,
            BlockState::Reserved4 => class.0 == 4,
            BlockState::ReservedGe5 => class.0 >= 5,
            BlockState::Closed => false,
        }
    }

    fn reserve(self, class: ClassId) -> Self {
        match (self, class.0) {
            (BlockState::Free, 3) => BlockState::Reserved3,
            (BlockState::Free, 4) => BlockState::Reserved4,
            (BlockState::Free, c) if c >= 5 => BlockState::ReservedGe5,
            (s, _) => s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Bottom,
    Top,
}

/// The region right of a medium circle's center, up to its right tangent
/// (or the next medium circle's left tangent, whichever comes first).
#[derive(Clone, Debug, Serialize)]
pub struct SparseBlock {
    pub owner_seq: usize,
    pub owner_x: f64,
    pub owner_r: f64,
    pub x_left: f64,
    pub x_cap: f64,
    /// Right edge of the last vertical lane in the block, `x_left` initially.
    pub fill: f64,
    pub state: BlockState,
    pub vlanes: Vec<usize>,
    pub half_side: Side,
}

impl SparseBlock {
    pub fn room(&self) -> f64 {
        self.x_cap - self.fill
    }
}

/// Span between the centers of two consecutive medium circles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DenseBlock {
    pub x_left: f64,
    pub x_right: f64,
    pub mixed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerticalLane {
    pub class: ClassId,
    pub x0: f64,
    pub width: f64,
    #[serde(skip)]
    pub lane: LaneState,
    /// Index of the sparse block holding the lane, `None` for free-area lanes.
    pub block: Option<usize>,
}

impl VerticalLane {
    pub fn interval(&self) -> Interval {
        Interval::new(self.x0, self.x0 + self.width)
    }

    pub fn is_open(&self) -> bool {
        !self.lane.closed
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BlockLedger {
    pub dense: Vec<DenseBlock>,
    pub sparse: Vec<SparseBlock>,
    pub vlanes: Vec<VerticalLane>,
    pub free_vlanes: Vec<usize>,
    /// Right edge of all host content (medium circles and vertical lanes).
    pub frontier: f64,
    /// Sparse block owned by the most recent medium circle.
    #[serde(skip)]
    current: Option<usize>,
}

/// Which step packed a circle of class `>= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    OpenLane,
    SparseBlock,
    FreeArea,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SmallClassOutcome {
    Packed(PlacedCircle, Step),
    LaneClosed,
}

/// True iff a lane of width `lane_width` still fits behind the block's last
/// vertical lane.
pub fn fit_in_block(block: &SparseBlock, lane_width: f64) -> bool {
    block.fill + lane_width <= block.x_cap
}

impl BlockLedger {
    pub fn open_vlane(&self, class: ClassId) -> Option<usize> {
        self.vlanes
            .iter()
            .position(|v| v.class == class && v.is_open())
    }

    pub fn exclusions(&self) -> Vec<Interval> {
        self.vlanes.iter().map(VerticalLane::interval).collect()
    }

    /// Updates the block structure after `c` (host canonical coordinates)
    /// was packed into the medium row of a lane of width `w`.
    pub fn on_medium_packed(&mut self, c: &PlacedCircle, w: f64) {
        let (x, r) = (c.center.x, c.r);
        if let Some(idx) = self.current.take() {
            let x_left = self.sparse[idx].x_left;
            let mixed = self
                .vlanes
                .iter()
                .any(|v| v.x0 < x && v.x0 + v.width > x_left);
            if self.sparse[idx].vlanes.is_empty() {
                // always the most recent block, so no index shifts
                self.sparse.remove(idx);
            } else {
                let s = &mut self.sparse[idx];
                s.x_cap = s.x_cap.min(x - r);
            }
            self.dense.push(DenseBlock {
                x_left,
                x_right: x,
                mixed,
            });
        }
        self.sparse.push(SparseBlock {
            owner_seq: c.seq,
            owner_x: x,
            owner_r: r,
            x_left: x,
            x_cap: x + r,
            fill: x,
            state: BlockState::Free,
            vlanes: Vec::new(),
            half_side: if c.center.y <= w / 2.0 {
                Side::Bottom
            } else {
                Side::Top
            },
        });
        self.current = Some(self.sparse.len() - 1);
        self.frontier = self.frontier.max(x + r);
    }
}

/// A lane packed by extended SLP: medium row plus block ledger.
#[derive(Clone, Debug)]
pub struct ExtendedLane {
    pub host: LaneState,
    pub ledger: BlockLedger,
    pub table: ClassTable,
}

impl ExtendedLane {
    pub fn new(id: LaneId, frame: Frame, table: ClassTable) -> Self {
        Self {
            host: LaneState::new(id, frame, Strategy::Slp),
            ledger: BlockLedger::default(),
            table,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.host.closed
    }

    pub fn probe_medium(&self, r: f64, obstacles: &Obstacles) -> Option<Point> {
        self.host.probe(r, obstacles)
    }

    /// Packs a medium circle by SLP and updates the blocks.
    pub fn pack_medium(
        &mut self,
        r: f64,
        seq: usize,
        obstacles: &mut Obstacles,
    ) -> Option<PlacedCircle> {
        let at = self.host.probe(r, obstacles)?;
        let placed = self.host.commit(at, r, seq, ClassId::MEDIUM, obstacles);
        let canonical = PlacedCircle { center: at, ..placed };
        self.ledger.on_medium_packed(&canonical, self.host.width());
        Some(placed)
    }

    fn new_vlane(&mut self, class: ClassId, x0: f64, width: f64, orientation: Orientation) -> VerticalLane {
        let w = self.host.width();
        let local = Frame::new(
            Rect {
                x0,
                y0: 0.0,
                x1: x0 + width,
                y1: w,
            },
            orientation,
        );
        let id = LaneId::new(
            self.host.id().host,
            LanePart::Vertical {
                class: class.0,
                index: self.ledger.vlanes.len() as u32,
            },
        );
        VerticalLane {
            class,
            x0,
            width,
            lane: LaneState::new(id, self.host.frame().compose(&local), Strategy::Slp),
            block: None,
        }
    }

    fn register_vlane(&mut self, v: VerticalLane) -> usize {
        let iv = v.interval();
        self.host.add_exclusion(iv);
        self.ledger.frontier = self.ledger.frontier.max(iv.hi);
        self.ledger.vlanes.push(v);
        self.ledger.vlanes.len() - 1
    }

    /// Leftmost start of a class lane inside sparse block `idx` such that the
    /// circle fits at the lane's first position.
    fn sparse_slot(&self, idx: usize, r: f64, lane_width: f64, obstacles: &Obstacles) -> Option<f64> {
        let s = &self.ledger.sparse[idx];
        let w = self.host.width();
        let y = match s.half_side {
            Side::Bottom => w - r,
            Side::Top => r,
        };
        let lo = s.fill + r;
        let hi = s.x_cap - lane_width + r;
        if lo > hi {
            return None;
        }
        let band = obstacles.band(self.host.frame(), lo, hi, y, r);
        leftmost_feasible(lo, hi, y, r, &band, &[], 0.0).map(|x| x - r)
    }

    /// Packs a circle of class `>= 3` by steps (1) to (5).
    pub fn pack_small_class(
        &mut self,
        r: f64,
        class: ClassId,
        seq: usize,
        obstacles: &mut Obstacles,
    ) -> SmallClassOutcome {
        debug_assert!(class.0 >= 3);
        if self.host.closed {
            return SmallClassOutcome::LaneClosed;
        }
        let Some(lane_width) = self.table.lane_width(class) else {
            return SmallClassOutcome::LaneClosed;
        };

        // (1) the open lane of this class
        if let Some(idx) = self.ledger.open_vlane(class) {
            let v = &mut self.ledger.vlanes[idx];
            if let Some(p) = v.lane.place(r, seq, class, obstacles) {
                return SmallClassOutcome::Packed(p, Step::OpenLane);
            }
            v.lane.closed = true;
        }

        // (2) close blocks that cannot take another lane of this class
        for s in &mut self.ledger.sparse {
            if s.state.accepts(class) && !fit_in_block(s, lane_width) {
                s.state = BlockState::Closed;
            }
        }

        // (3) a new lane inside an open sparse block, left to right
        for idx in 0..self.ledger.sparse.len() {
            let s = &self.ledger.sparse[idx];
            if !s.state.accepts(class) || !fit_in_block(s, lane_width) {
                continue;
            }
            let Some(x0) = self.sparse_slot(idx, r, lane_width, obstacles) else {
                continue;
            };
            let orientation = match s.half_side {
                Side::Bottom => Orientation::Downwards,
                Side::Top => Orientation::Upwards,
            };
            let mut v = self.new_vlane(class, x0, lane_width, orientation);
            let Some(p) = v.lane.place(r, seq, class, obstacles) else {
                continue;
            };
            v.block = Some(idx);
            let vi = self.register_vlane(v);
            let s = &mut self.ledger.sparse[idx];
            s.vlanes.push(vi);
            s.fill = x0 + lane_width;
            s.state = s.state.reserve(class);
            return SmallClassOutcome::Packed(p, Step::SparseBlock);
        }

        // (4) a new lane in the free area behind all content
        let x0 = self.ledger.frontier;
        if x0 + lane_width <= self.host.length() {
            let mut v = self.new_vlane(class, x0, lane_width, Orientation::Upwards);
            if let Some(p) = v.lane.place(r, seq, class, obstacles) {
                let vi = self.register_vlane(v);
                self.ledger.free_vlanes.push(vi);
                return SmallClassOutcome::Packed(p, Step::FreeArea);
            }
        }

        // (5)
        self.host.closed = true;
        SmallClassOutcome::LaneClosed
    }

    /// Every circle of the medium row and the vertical lanes, in host
    /// canonical coordinates.
    pub fn canonical_disks(&self) -> Vec<crate::geometry::Disk> {
        let frame = self.host.frame();
        self.host
            .canonical()
            .iter()
            .copied()
            .chain(
                self.ledger
                    .vlanes
                    .iter()
                    .flat_map(|v| v.lane.placed().iter().map(|p| frame.disk_to_canonical(&p.disk()))),
            )
            .collect()
    }

    pub fn placed(&self) -> impl Iterator<Item = &PlacedCircle> {
        self.host
            .placed()
            .iter()
            .chain(self.ledger.vlanes.iter().flat_map(|v| v.lane.placed().iter()))
    }

    /// Metrics of the medium row together with its vertical lanes.
    pub fn metrics(&self) -> LaneMetrics {
        let disks = self.canonical_disks();
        let p = packing_length(&disks);
        LaneMetrics {
            packing_length: p,
            circle_free_length: self.host.length() - p,
            occupied_area: disks.iter().map(|d| d.area()).sum(),
        }
    }

    /// JSON dump of the block ledger.
    pub fn ledger_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.ledger).unwrap_or(serde_json::Value::Null)
    }
}
