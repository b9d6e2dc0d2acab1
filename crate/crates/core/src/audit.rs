//! Independent checks of finished packings: validity, accounting, and the
//! lane-level density lower bounds.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::blocks::ExtendedLane;
use crate::bounds::{delta, min_dslp, min_slp, overhead_bound};
use crate::classification::{build_class_table, ClassId, ClassTable};
use crate::containers::{ContainerSpec, LaneSnapshot, PackResult, Status};
use crate::dslp::DslpLane;
use crate::geometry::{
    circle_area, circle_in_rect, circles_overlap, Disk, HostLane, LaneId, LanePart, PlacedCircle,
    Rect,
};
use crate::lane::{LaneState, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Overlap,
    OutOfContainer,
    ClassMismatch,
    Order,
    Bound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub density: f64,
    pub per_lane_occ: BTreeMap<String, f64>,
}

/// Class table the packer used for `result`.
pub fn table_for(result: &PackResult) -> ClassTable {
    match (result.container, result.mode) {
        (ContainerSpec::Square, Some(mode)) => mode.class_table(),
        _ => build_class_table(result.w, None, None, false)
            .unwrap_or_else(|_| build_class_table(1.0, None, None, false).expect("w = 1 is valid")),
    }
}

/// Class a lane accepts, `None` for small lanes of unknown host.
fn lane_class(id: LaneId) -> ClassId {
    match (id.host, id.part) {
        (HostLane::Square(0), LanePart::Main) => ClassId::LARGE,
        (_, LanePart::Main) => ClassId::MEDIUM,
        (_, LanePart::SmallTop | LanePart::SmallBottom) => ClassId::SMALL,
        (_, LanePart::Vertical { class, .. }) => ClassId(class),
    }
}

struct Audit<'a> {
    eps: f64,
    placements: &'a [PlacedCircle],
    violations: Vec<Violation>,
}

impl Audit<'_> {
    fn push(&mut self, kind: ViolationKind, detail: String, indices: Vec<usize>) {
        self.violations.push(Violation { kind, detail, indices });
    }

    fn order(&mut self, result: &PackResult) {
        for (k, p) in self.placements.iter().enumerate() {
            if p.seq != k {
                self.push(ViolationKind::Order, format!("placement {k} has index {}", p.seq), vec![p.seq]);
            }
        }
        let n = self.placements.len();
        match (result.status, result.rejected_index) {
            (Status::AllPacked, None) => {}
            (Status::Rejected, Some(i)) if i == n => {}
            (status, idx) => self.push(
                ViolationKind::Order,
                format!("status {status:?} with rejected index {idx:?} after {n} placements"),
                vec![],
            ),
        }
        let total: f64 = self.placements.iter().map(|p| circle_area(p.r)).sum();
        if (total - result.total_packed_area).abs() > 1e-12 * total.max(1.0) {
            self.push(
                ViolationKind::Bound,
                format!("total area {} recorded as {}", total, result.total_packed_area),
                vec![],
            );
        }
    }

    fn overlaps(&mut self) {
        let mut idx: Vec<usize> = (0..self.placements.len()).collect();
        let left = |i: usize| self.placements[i].center.x - self.placements[i].r;
        idx.sort_by(|&a, &b| left(a).total_cmp(&left(b)));
        let mut found = Vec::new();
        for (k, &i) in idx.iter().enumerate() {
            let a = self.placements[i].disk();
            let reach = a.center.x + a.r;
            for &j in &idx[k + 1..] {
                if left(j) > reach {
                    break;
                }
                let b = self.placements[j].disk();
                if circles_overlap(&a, &b, self.eps) {
                    found.push((self.placements[i].seq.min(self.placements[j].seq), self.placements[i].seq.max(self.placements[j].seq)));
                }
            }
        }
        found.sort_unstable();
        for (a, b) in found {
            self.push(ViolationKind::Overlap, format!("circles {a} and {b} intersect"), vec![a, b]);
        }
    }

    fn containment(&mut self, container: &Rect, lanes: &HashMap<LaneId, &LaneSnapshot>) {
        for p in self.placements {
            if !circle_in_rect(&p.disk(), container, self.eps) {
                self.push(ViolationKind::OutOfContainer, format!("circle {} leaves the container", p.seq), vec![p.seq]);
            }
            if let Some(l) = lanes.get(&p.lane) {
                if !circle_in_rect(&p.disk(), &l.frame.rect, self.eps) {
                    self.push(
                        ViolationKind::OutOfContainer,
                        format!("circle {} leaves lane {}", p.seq, p.lane),
                        vec![p.seq],
                    );
                }
            }
        }
    }

    fn classes(&mut self, table: &ClassTable, lanes: &HashMap<LaneId, &LaneSnapshot>) {
        for p in self.placements {
            match table.classify(p.r) {
                Ok(c) if c == p.class => {}
                got => self.push(
                    ViolationKind::ClassMismatch,
                    format!("circle {} recorded as class {}, classifies as {got:?}", p.seq, p.class),
                    vec![p.seq],
                ),
            }
            if lane_class(p.lane) != p.class {
                self.push(
                    ViolationKind::ClassMismatch,
                    format!("class {} circle {} in lane {}", p.class, p.seq, p.lane),
                    vec![p.seq],
                );
            }
            if !lanes.is_empty() && !lanes.contains_key(&p.lane) {
                self.push(ViolationKind::ClassMismatch, format!("circle {} names unknown lane {}", p.seq, p.lane), vec![p.seq]);
            }
        }
    }

    /// Alternation, monotone advance and the minimum gap, per lane.
    fn lane_structure(&mut self, lanes: &HashMap<LaneId, &LaneSnapshot>) {
        let mut by_lane: BTreeMap<LaneId, Vec<&PlacedCircle>> = BTreeMap::new();
        for p in self.placements {
            by_lane.entry(p.lane).or_default().push(p);
        }
        let tol = self.eps.max(1e-9);
        for (id, circles) in by_lane {
            let Some(snap) = lanes.get(&id) else { continue };
            let w = snap.frame.width();
            let mut prev: Option<Disk> = None;
            for (k, p) in circles.iter().enumerate() {
                let c = snap.frame.to_canonical(p.center);
                let want = if k % 2 == 0 { p.r } else { w - p.r };
                if (c.y - want).abs() > tol {
                    self.push(
                        ViolationKind::Order,
                        format!("circle {} in lane {id} breaks the side alternation", p.seq),
                        vec![p.seq],
                    );
                }
                if let Some(q) = prev {
                    if c.x < q.center.x - tol {
                        self.push(ViolationKind::Order, format!("circle {} in lane {id} moves backwards", p.seq), vec![p.seq]);
                    }
                    if snap.strategy == Strategy::Slp && c.x - q.center.x < p.r.min(q.r) - tol {
                        self.push(
                            ViolationKind::Order,
                            format!("circle {} in lane {id} is closer than the minimum gap", p.seq),
                            vec![p.seq],
                        );
                    }
                }
                prev = Some(Disk { center: c, r: p.r });
            }
        }
    }
}

/// Checks a packing result against the container, the class table and the
/// lane rules. Violations are collected, never thrown.
pub fn validate(result: &PackResult, eps: f64) -> AuditReport {
    let container = result.container.bounds();
    let lanes: HashMap<LaneId, &LaneSnapshot> = result.lanes.iter().map(|l| (l.id, l)).collect();
    let mut a = Audit {
        eps,
        placements: &result.placements,
        violations: Vec::new(),
    };
    a.order(result);
    a.overlaps();
    a.containment(&container, &lanes);
    a.classes(&table_for(result), &lanes);
    a.lane_structure(&lanes);

    let mut per_lane_occ = BTreeMap::new();
    for p in &result.placements {
        *per_lane_occ.entry(p.lane.to_string()).or_insert(0.0) += circle_area(p.r);
    }
    AuditReport {
        valid: a.violations.is_empty(),
        violations: a.violations,
        density: result.total_packed_area / container.area(),
        per_lane_occ,
    }
}

/// Area of `disk` inside `[0, a] x [0, b]` relative to its center, with
/// signed extents so that inclusion-exclusion works for any rectangle.
fn quadrant_area(r: f64, a: f64, b: f64) -> f64 {
    let sign = a.signum() * b.signum();
    let (a, b) = (a.abs().min(r), b.abs().min(r));
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if a * a + b * b <= r * r {
        return sign * a * b;
    }
    // antiderivative of sqrt(r^2 - t^2)
    let s = |t: f64| 0.5 * (t * (r * r - t * t).max(0.0).sqrt() + r * r * (t / r).clamp(-1.0, 1.0).asin());
    let t = (r * r - b * b).max(0.0).sqrt();
    sign * (b * t + s(a) - s(t))
}

/// Exact area of `disk` inside `region`.
pub fn disk_rect_area(d: &Disk, region: &Rect) -> f64 {
    let (cx, cy, r) = (d.center.x, d.center.y, d.r);
    let g = |x: f64, y: f64| quadrant_area(r, x - cx, y - cy);
    let v = g(region.x1, region.y1) - g(region.x0, region.y1) - g(region.x1, region.y0) + g(region.x0, region.y0);
    v.max(0.0)
}

/// Occupied area of `region`: total area of the circle parts inside it.
pub fn occupied<'a>(region: &Rect, placements: impl IntoIterator<Item = &'a PlacedCircle>) -> f64 {
    placements
        .into_iter()
        .map(|p| {
            let d = p.disk();
            if circle_in_rect(&d, region, 0.0) {
                d.area()
            } else if d.bbox().intersects(region) {
                disk_rect_area(&d, region)
            } else {
                0.0
            }
        })
        .sum()
}

/// Compares the occupied area of a plain single-class SLP lane with its
/// lower bound. `q` is the relative lower bound of the lane's class.
pub fn audit_slp_lane(lane: &LaneState, q: f64, w: f64) -> bool {
    let Ok(d) = delta(q) else { return false };
    let occ: f64 = lane.canonical().iter().map(Disk::area).sum();
    occ >= min_slp(lane.metrics().packing_length, w, q * w, d) - 1e-9
}

/// Lower bound of a DSLP lane after overhead. `None` when the medium row is
/// empty (the bound presumes at least one medium circle).
pub fn dslp_lower_bound(d: &DslpLane) -> Option<f64> {
    if d.host.host.is_empty() {
        return None;
    }
    let row = d.host.table.row(ClassId::SMALL)?;
    let w = d.width();
    let m = d.metrics();
    Some(min_dslp(m.p_t, m.p_b, w, row.lower_bound(), delta(row.q).ok()?) - overhead_bound(w))
}

/// Occupied area of the lane rectangle (counting every circle of the run
/// that lies in it) against the DSLP lower bound. Lanes whose medium row is
/// empty pass vacuously.
pub fn audit_dslp_lane(d: &DslpLane, placements: &[PlacedCircle]) -> bool {
    match dslp_lower_bound(d) {
        None => true,
        Some(bound) => occupied(&d.host.host.frame().rect, placements) >= bound - 1e-9,
    }
}

/// Dense blocks whose density is below `delta(q_2)`. Blocks that still hold
/// an open vertical lane are skipped.
pub fn dense_block_shortfalls(e: &ExtendedLane, placements: &[PlacedCircle]) -> Vec<(usize, f64)> {
    let Some(row) = e.table.row(ClassId::SMALL) else { return Vec::new() };
    let Ok(target) = delta(row.q) else { return Vec::new() };
    let frame = e.host.frame();
    let w = e.host.width();
    e.ledger
        .dense
        .iter()
        .enumerate()
        .filter(|(_, b)| {
            !e.ledger
                .vlanes
                .iter()
                .any(|v| v.is_open() && v.x0 < b.x_right && v.x0 + v.width > b.x_left)
        })
        .filter_map(|(i, b)| {
            let region = frame.rect_to_container(&Rect { x0: b.x_left, y0: 0.0, x1: b.x_right, y1: w });
            let den = occupied(&region, placements) / region.area();
            (den < target - 1e-9).then_some((i, den))
        })
        .collect()
}
