//! The online drivers: a unit square split into one large lane and four
//! medium lanes, and a `1 x b` rectangle packed as a single DSLP lane.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{guarantee_rect, guarantee_square};
use crate::classification::{build_class_table, ClassId, ClassTable, ClassifyError, Q_SMALL_NO_TINY};
use crate::dslp::{DslpLane, DslpMetrics, DslpOutcome};
use crate::geometry::{
    circle_area, Frame, HostLane, LaneId, Obstacles, Orientation, PlacedCircle, Rect,
};
use crate::lane::{LaneMetrics, LaneState, Strategy};
use crate::Error;

/// Medium lane width of the unit square for arbitrary radii.
pub const W_GENERAL: f64 = 0.288480;
/// Medium lane width when no circle is tiny.
pub const W_NO_TINY: f64 = 0.277927;
/// Smallest radius admitted in no-tiny mode.
pub const MIN_RADIUS_NO_TINY: f64 = 0.026623;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareMode {
    General,
    NoTiny,
}

impl SquareMode {
    pub fn lane_width(self) -> f64 {
        match self {
            SquareMode::General => W_GENERAL,
            SquareMode::NoTiny => W_NO_TINY,
        }
    }

    pub fn class_table(self) -> ClassTable {
        let table = match self {
            SquareMode::General => build_class_table(W_GENERAL, None, None, true),
            SquareMode::NoTiny => build_class_table(
                W_NO_TINY,
                Some(Q_SMALL_NO_TINY),
                Some(MIN_RADIUS_NO_TINY),
                true,
            ),
        };
        table.expect("built-in constants are valid")
    }
}

impl fmt::Display for SquareMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareMode::General => "general",
            SquareMode::NoTiny => "no_tiny",
        })
    }
}

impl FromStr for SquareMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "general" => Ok(SquareMode::General),
            "no_tiny" | "no-tiny" => Ok(SquareMode::NoTiny),
            _ => Err(Error::Parse(format!("unknown square mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContainerSpec {
    Square,
    Rect { b: f64 },
}

impl ContainerSpec {
    pub fn bounds(&self) -> Rect {
        match *self {
            ContainerSpec::Square => Rect::unit_square(),
            ContainerSpec::Rect { b } => Rect {
                x0: 0.0,
                y0: 0.0,
                x1: b,
                y1: 1.0,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SquareLayout {
    pub w: f64,
    pub l0: Frame,
    /// `L1 ..= L4`.
    pub lanes: [Frame; 4],
}

pub fn square_layout(w: f64) -> Result<SquareLayout, Error> {
    if !(w > 0.0 && w < 0.5) {
        return Err(Error::Config(format!("lane width {w} not in (0, 0.5)")));
    }
    let h = 1.0 - w;
    let frame = |x0, y0, x1, y1, o| -> Result<Frame, Error> { Ok(Frame::new(Rect::new(x0, y0, x1, y1)?, o)) };
    Ok(SquareLayout {
        w,
        l0: frame(0.0, 0.0, 1.0, h, Orientation::Leftwards)?,
        lanes: [
            frame(0.0, h, 1.0, 1.0, Orientation::Rightwards)?,
            frame(h, 0.0, 1.0, h, Orientation::Downwards)?,
            frame(0.0, 0.0, h, w, Orientation::Rightwards)?,
            frame(0.0, w, w, h, Orientation::Upwards)?,
        ],
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    AllPacked,
    Rejected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// Larger than the widest lane can hold.
    TooLarge,
    /// A large circle that does not fit into `L0`.
    LargeLaneFull,
    /// No open lane has a feasible position.
    NoFit,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::TooLarge => "circle too large for every lane",
            RejectReason::LargeLaneFull => "large circle does not fit into the large lane",
            RejectReason::NoFit => "no open lane has room",
        })
    }
}

/// Accounting for one (sub-)lane at the end of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaneSnapshot {
    pub id: LaneId,
    pub frame: Frame,
    pub strategy: Strategy,
    pub closed: bool,
    pub circles: usize,
    #[serde(flatten)]
    pub metrics: LaneMetrics,
    /// Present on DSLP host lanes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dslp: Option<DslpMetrics>,
}

impl LaneSnapshot {
    fn of(lane: &LaneState, dslp: Option<DslpMetrics>) -> Self {
        Self {
            id: lane.id(),
            frame: *lane.frame(),
            strategy: lane.strategy(),
            closed: lane.closed,
            circles: lane.placed().len(),
            metrics: lane.metrics(),
            dslp,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackResult {
    pub status: Status,
    pub container: ContainerSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<SquareMode>,
    /// Base lane width of the medium lanes.
    pub w: f64,
    pub placements: Vec<PlacedCircle>,
    pub total_packed_area: f64,
    pub guarantee: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rejected_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rejected_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rejected_reason: Option<RejectReason>,
    pub lanes: Vec<LaneSnapshot>,
}

/// Result of offering one circle to an online packer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Offer {
    Packed(PlacedCircle),
    Rejected(RejectReason),
    /// The packer already stopped at an earlier rejection.
    Halted,
}

fn check_radius(index: usize, r: f64) -> Result<(), Error> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRadius { index: Some(index), r })
    }
}

/// Checks that `r` is an admissible input radius for `mode`.
pub fn check_square_input(mode: SquareMode, index: usize, r: f64) -> Result<(), Error> {
    check_radius(index, r)?;
    if mode == SquareMode::NoTiny && r < MIN_RADIUS_NO_TINY {
        return Err(Error::InvalidRadius { index: Some(index), r });
    }
    Ok(())
}

/// Shared bookkeeping of both packers.
#[derive(Clone, Debug)]
struct Run {
    obstacles: Obstacles,
    placements: Vec<PlacedCircle>,
    total: f64,
    rejected: Option<(usize, f64, RejectReason)>,
}

impl Run {
    fn new(bounds: Rect) -> Self {
        Self {
            obstacles: Obstacles::new(bounds),
            placements: Vec::new(),
            total: 0.0,
            rejected: None,
        }
    }

    fn next_seq(&self) -> usize {
        self.placements.len()
    }

    fn record(&mut self, out: Result<PlacedCircle, RejectReason>, r: f64) -> Offer {
        match out {
            Ok(p) => {
                self.total += circle_area(p.r);
                self.placements.push(p);
                Offer::Packed(p)
            }
            Err(reason) => {
                self.rejected = Some((self.next_seq(), r, reason));
                Offer::Rejected(reason)
            }
        }
    }

    fn result(
        &self,
        container: ContainerSpec,
        mode: Option<SquareMode>,
        w: f64,
        guarantee: f64,
        lanes: Vec<LaneSnapshot>,
    ) -> PackResult {
        PackResult {
            status: if self.rejected.is_some() {
                Status::Rejected
            } else {
                Status::AllPacked
            },
            container,
            mode,
            w,
            placements: self.placements.clone(),
            total_packed_area: self.total,
            guarantee,
            rejected_index: self.rejected.map(|r| r.0),
            rejected_radius: self.rejected.map(|r| r.1),
            rejected_reason: self.rejected.map(|r| r.2),
            lanes,
        }
    }
}

fn dslp_snapshots(d: &DslpLane) -> impl Iterator<Item = LaneSnapshot> + '_ {
    d.lanes().enumerate().map(|(i, l)| {
        let mut s = LaneSnapshot::of(l, (i == 0).then(|| d.metrics()));
        if i == 0 {
            s.metrics = d.host.metrics();
        }
        s
    })
}

/// Online packer for the unit square.
#[derive(Clone, Debug)]
pub struct SquarePacker {
    mode: SquareMode,
    layout: SquareLayout,
    table: ClassTable,
    l0: LaneState,
    lanes: Vec<DslpLane>,
    run: Run,
}

impl SquarePacker {
    pub fn new(mode: SquareMode) -> Self {
        let w = mode.lane_width();
        let layout = square_layout(w).expect("built-in lane width is valid");
        let table = mode.class_table();
        Self {
            mode,
            l0: LaneState::new(LaneId::main(HostLane::Square(0)), layout.l0, Strategy::Tlp),
            lanes: layout
                .lanes
                .iter()
                .enumerate()
                .map(|(i, f)| DslpLane::new(HostLane::Square(i as u8 + 1), *f, table.clone()))
                .collect(),
            layout,
            table,
            run: Run::new(Rect::unit_square()),
        }
    }

    pub fn mode(&self) -> SquareMode {
        self.mode
    }

    pub fn layout(&self) -> &SquareLayout {
        &self.layout
    }

    pub fn table(&self) -> &ClassTable {
        &self.table
    }

    pub fn large_lane(&self) -> &LaneState {
        &self.l0
    }

    pub fn dslp_lanes(&self) -> &[DslpLane] {
        &self.lanes
    }

    pub fn check_input(&self, index: usize, r: f64) -> Result<(), Error> {
        check_square_input(self.mode, index, r)
    }

    pub fn offer(&mut self, r: f64) -> Result<Offer, Error> {
        if self.run.rejected.is_some() {
            return Ok(Offer::Halted);
        }
        let seq = self.run.next_seq();
        self.check_input(seq, r)?;
        let out = match self.table.classify(r) {
            Err(ClassifyError::TooLarge { .. }) => Err(RejectReason::TooLarge),
            Err(ClassifyError::TooSmall { .. }) => {
                return Err(Error::InvalidRadius { index: Some(seq), r })
            }
            Ok(ClassId::LARGE) => self
                .l0
                .place(r, seq, ClassId::LARGE, &mut self.run.obstacles)
                .ok_or(RejectReason::LargeLaneFull),
            Ok(class) => self
                .lanes
                .iter_mut()
                .filter(|l| !l.is_closed())
                .find_map(|l| match l.pack(r, class, seq, &mut self.run.obstacles) {
                    DslpOutcome::Packed(p) => Some(p),
                    DslpOutcome::NoFit | DslpOutcome::Closed => None,
                })
                .ok_or(RejectReason::NoFit),
        };
        Ok(self.run.record(out, r))
    }

    pub fn result(&self) -> PackResult {
        let lanes = std::iter::once(LaneSnapshot::of(&self.l0, None))
            .chain(self.lanes.iter().flat_map(dslp_snapshots))
            .collect();
        self.run.result(
            ContainerSpec::Square,
            Some(self.mode),
            self.layout.w,
            guarantee_square(self.mode),
            lanes,
        )
    }
}

/// Online packer for the `1 x b` rectangle.
#[derive(Clone, Debug)]
pub struct RectPacker {
    b: f64,
    lane: DslpLane,
    run: Run,
}

impl RectPacker {
    pub fn new(b: f64) -> Result<Self, Error> {
        if !(b >= 1.0 && b.is_finite()) {
            return Err(Error::Config(format!("rectangle length {b} must be at least 1")));
        }
        let rect = Rect::new(0.0, 0.0, b, 1.0)?;
        let table = build_class_table(1.0, None, None, false)?;
        Ok(Self {
            b,
            lane: DslpLane::new(HostLane::Rect, Frame::new(rect, Orientation::Rightwards), table),
            run: Run::new(rect),
        })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn lane(&self) -> &DslpLane {
        &self.lane
    }

    pub fn check_input(&self, index: usize, r: f64) -> Result<(), Error> {
        check_radius(index, r)
    }

    pub fn offer(&mut self, r: f64) -> Result<Offer, Error> {
        if self.run.rejected.is_some() {
            return Ok(Offer::Halted);
        }
        let seq = self.run.next_seq();
        check_radius(seq, r)?;
        let out = match self.lane.host.table.classify(r) {
            Err(ClassifyError::TooLarge { .. }) => Err(RejectReason::TooLarge),
            Err(ClassifyError::TooSmall { .. }) => {
                return Err(Error::InvalidRadius { index: Some(seq), r })
            }
            Ok(class) => match self.lane.pack(r, class, seq, &mut self.run.obstacles) {
                DslpOutcome::Packed(p) => Ok(p),
                DslpOutcome::NoFit | DslpOutcome::Closed => Err(RejectReason::NoFit),
            },
        };
        Ok(self.run.record(out, r))
    }

    pub fn result(&self) -> PackResult {
        self.run.result(
            ContainerSpec::Rect { b: self.b },
            None,
            1.0,
            guarantee_rect(self.b),
            dslp_snapshots(&self.lane).collect(),
        )
    }
}

fn drive(
    radii: &[f64],
    check: impl Fn(usize, f64) -> Result<(), Error>,
    mut offer: impl FnMut(f64) -> Result<Offer, Error>,
) -> Result<(), Error> {
    // input errors are reported before anything is packed
    for (i, &r) in radii.iter().enumerate() {
        check(i, r)?;
    }
    for &r in radii {
        if !matches!(offer(r)?, Offer::Packed(_)) {
            break;
        }
    }
    Ok(())
}

/// Packs `radii` online into the unit square, stopping at the first rejection.
pub fn pack_square_online(mode: SquareMode, radii: &[f64]) -> Result<PackResult, Error> {
    let mut p = SquarePacker::new(mode);
    drive(radii, |i, r| check_square_input(mode, i, r), |r| p.offer(r))?;
    Ok(p.result())
}

/// Packs `radii` online into the `1 x b` rectangle, stopping at the first
/// rejection.
pub fn pack_rect_online(b: f64, radii: &[f64]) -> Result<PackResult, Error> {
    let mut p = RectPacker::new(b)?;
    drive(radii, check_radius, |r| p.offer(r))?;
    Ok(p.result())
}
