//! Commands behind the `circlepack` binary.

pub mod io;
pub mod svg;

use anyhow::{bail, Context, Result};
use circlepack::audit::{validate, AuditReport};
use circlepack::bounds::{delta, guarantee_rect, guarantee_square};
use circlepack::classification::build_class_table;
use circlepack::containers::{ContainerSpec, Offer, RectPacker, SquarePacker};
use circlepack::genseq::{derive_seed, generate, minimize, GenSpec};
use circlepack::{Error, PackResult, SquareMode, Status};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::io::Radii;

pub const DEFAULT_EPS: f64 = 1e-9;
pub const EPS_ENV: &str = "CIRCLEPACK_EPS";

/// Exit code of a finished run.
pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::AllPacked => 0,
        Status::Rejected => 2,
    }
}

/// Container and mode of a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub container: ContainerSpec,
    pub mode: Option<SquareMode>,
    pub eps: f64,
}

impl RunConfig {
    pub fn new(container: &str, b: Option<f64>, mode: Option<SquareMode>, eps: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            bail!("tolerance {eps} must be finite and non-negative");
        }
        let container = match container {
            "square" => {
                if b.is_some() {
                    bail!("--b only applies to the rectangle");
                }
                ContainerSpec::Square
            }
            "rect" => {
                let b = b.context("the rectangle needs --b")?;
                if !(b >= 1.0 && b.is_finite()) {
                    bail!("rectangle length b = {b} must be at least 1");
                }
                if mode.is_some_and(|m| m != SquareMode::General) {
                    bail!("mode {} only applies to the square", mode.unwrap());
                }
                ContainerSpec::Rect { b }
            }
            other => bail!("unknown container `{other}`, expected square or rect"),
        };
        let mode = match container {
            ContainerSpec::Square => Some(mode.unwrap_or(SquareMode::General)),
            ContainerSpec::Rect { .. } => None,
        };
        Ok(Self { container, mode, eps })
    }

    pub fn guarantee(&self) -> f64 {
        match self.container {
            ContainerSpec::Square => guarantee_square(self.mode.unwrap_or(SquareMode::General)),
            ContainerSpec::Rect { b } => guarantee_rect(b),
        }
    }

    /// Largest radius the container accepts.
    pub fn max_radius(&self) -> f64 {
        match self.container {
            ContainerSpec::Square => self.mode.unwrap_or(SquareMode::General).class_table().max_radius(),
            ContainerSpec::Rect { .. } => 0.5,
        }
    }

    pub fn min_radius(&self) -> f64 {
        match self.mode {
            Some(SquareMode::NoTiny) => circlepack::containers::MIN_RADIUS_NO_TINY,
            _ => 1e-3,
        }
    }
}

/// Tolerance from `CIRCLEPACK_EPS`, or the default.
pub fn eps_from_env() -> Result<f64> {
    match std::env::var(EPS_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{EPS_ENV}=`{v}` is not a number")),
        Err(_) => Ok(DEFAULT_EPS),
    }
}

enum Packer {
    Square(SquarePacker),
    Rect(RectPacker),
}

impl Packer {
    fn new(cfg: &RunConfig) -> Result<Self> {
        Ok(match cfg.container {
            ContainerSpec::Square => Packer::Square(SquarePacker::new(cfg.mode.unwrap_or(SquareMode::General))),
            ContainerSpec::Rect { b } => Packer::Rect(RectPacker::new(b)?),
        })
    }

    fn check_input(&self, i: usize, r: f64) -> Result<(), Error> {
        match self {
            Packer::Square(p) => p.check_input(i, r),
            Packer::Rect(p) => p.check_input(i, r),
        }
    }

    fn offer(&mut self, r: f64) -> Result<Offer, Error> {
        match self {
            Packer::Square(p) => p.offer(r),
            Packer::Rect(p) => p.offer(r),
        }
    }

    fn result(&self) -> PackResult {
        match self {
            Packer::Square(p) => p.result(),
            Packer::Rect(p) => p.result(),
        }
    }

    fn ledgers(&self) -> Value {
        let lanes: Vec<&circlepack::dslp::DslpLane> = match self {
            Packer::Square(p) => p.dslp_lanes().iter().collect(),
            Packer::Rect(p) => vec![p.lane()],
        };
        Value::Array(
            lanes
                .into_iter()
                .map(|d| json!({ "lane": d.id().to_string(), "ledger": d.host.ledger_json() }))
                .collect(),
        )
    }
}

/// Output of [`run_pack`].
#[derive(Clone, Debug)]
pub struct PackRun {
    pub result: PackResult,
    /// Block ledgers of the medium lanes.
    pub ledgers: Value,
}

/// Checks every radius, then offers them in order until the first rejection.
/// Input errors carry the source line number.
fn drive(cfg: &RunConfig, radii: &Radii) -> Result<Packer> {
    let mut packer = Packer::new(cfg)?;
    let line = |i: usize| radii.lines.get(i).copied().unwrap_or(i + 1);
    for (i, &r) in radii.values.iter().enumerate() {
        packer.check_input(i, r).map_err(|e| match e {
            Error::InvalidRadius { r, .. } => anyhow::anyhow!(
                "line {}: radius {r} is not admissible{}",
                line(i),
                match cfg.mode {
                    Some(SquareMode::NoTiny) => format!(" (no-tiny mode needs r >= {})", cfg.min_radius()),
                    _ => String::new(),
                }
            ),
            other => other.into(),
        })?;
    }
    for &r in &radii.values {
        if !matches!(packer.offer(r)?, Offer::Packed(_)) {
            break;
        }
    }
    Ok(packer)
}

/// Packs `radii` online and refuses to return a packing that fails
/// validation.
pub fn run_pack(cfg: &RunConfig, radii: &Radii) -> Result<PackRun> {
    let packer = drive(cfg, radii)?;
    let result = packer.result();
    let report = validate(&result, cfg.eps);
    if !report.valid {
        bail!("internal error: packing failed validation: {:?}", report.violations.first());
    }
    Ok(PackRun { result, ledgers: packer.ledgers() })
}

/// Validates a serialized [`PackResult`].
pub fn verify(json_text: &str, eps: f64) -> Result<AuditReport> {
    let result: PackResult = serde_json::from_str(json_text).context("input is not a packing result")?;
    Ok(validate(&result, eps))
}

/// Requested quantities of the `bounds` command.
#[derive(Clone, Copy, Debug, Default)]
pub struct BoundsQuery {
    pub delta: Option<f64>,
    pub rect: Option<f64>,
    pub square_mode: Option<SquareMode>,
    pub table: bool,
}

/// CSV class table when `table` is set, otherwise a JSON object with one
/// entry per requested quantity.
pub fn bounds(q: &BoundsQuery) -> Result<String> {
    if q.table {
        let table = match q.square_mode {
            Some(m) => m.class_table(),
            None => build_class_table(1.0, None, None, false)?,
        };
        return Ok(table.to_csv());
    }
    let mut out = serde_json::Map::new();
    if let Some(v) = q.delta {
        out.insert("delta".into(), json!({ "q": v, "value": delta(v)? }));
    }
    if let Some(b) = q.rect {
        if !(b >= 1.0 && b.is_finite()) {
            bail!("rectangle length b = {b} must be at least 1");
        }
        out.insert("rect".into(), json!({ "b": b, "guarantee": guarantee_rect(b) }));
    }
    if let Some(m) = q.square_mode {
        out.insert(
            "square".into(),
            json!({ "mode": m, "lane_width": m.lane_width(), "guarantee": guarantee_square(m) }),
        );
    }
    if out.is_empty() {
        bail!("nothing requested; pass --delta, --rect, --square-mode or --table");
    }
    Ok(io::to_json(&Value::Object(out))?)
}

/// One radius per line.
pub fn gen(spec: &GenSpec) -> Result<String> {
    let radii = generate(spec)?;
    Ok(radii.iter().map(|&r| io::fmt17(r) + "\n").collect())
}

/// Settings of the `batch` command.
#[derive(Clone, Copy, Debug)]
pub struct BatchConfig {
    pub run: RunConfig,
    pub gen: GenSpec,
    pub runs: u64,
    pub minimize: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchFailure {
    pub run: u64,
    pub seed: u64,
    pub circles: usize,
    pub total_area: f64,
    pub rejected_index: Option<usize>,
    pub invalid: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchSummary {
    pub runs: u64,
    pub all_packed: u64,
    pub rejected: u64,
    pub invalid: u64,
    pub failures: Vec<BatchFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<f64>>,
}

impl BatchSummary {
    pub fn exit_code(&self) -> i32 {
        if self.invalid > 0 {
            1
        } else if self.rejected > 0 {
            2
        } else {
            0
        }
    }
}

/// Packs `runs` generated sequences, seeds derived from `gen.seed`, in
/// parallel. Results are ordered by run index.
pub fn batch(cfg: &BatchConfig) -> Result<BatchSummary> {
    cfg.gen.validate()?;
    let pack = |radii: &[f64]| -> Result<PackResult> {
        let r = Radii { values: radii.to_vec(), lines: (1..=radii.len()).collect() };
        Ok(drive(&cfg.run, &r)?.result())
    };
    let outcomes: Vec<(u64, u64, Vec<f64>, PackResult, bool)> = (0..cfg.runs)
        .into_par_iter()
        .map(|k| -> Result<_> {
            let seed = derive_seed(cfg.gen.seed, k);
            let radii = generate(&GenSpec { seed, ..cfg.gen })?;
            let result = pack(&radii)?;
            let valid = validate(&result, cfg.run.eps).valid;
            Ok((k, seed, radii, result, valid))
        })
        .collect::<Result<_>>()?;

    let mut s = BatchSummary { runs: cfg.runs, all_packed: 0, rejected: 0, invalid: 0, failures: Vec::new(), counterexample: None };
    for (k, seed, radii, result, valid) in &outcomes {
        let rejected = result.status == Status::Rejected;
        s.all_packed += u64::from(!rejected);
        s.rejected += u64::from(rejected);
        s.invalid += u64::from(!valid);
        if rejected || !valid {
            s.failures.push(BatchFailure {
                run: *k,
                seed: *seed,
                circles: radii.len(),
                total_area: circlepack::genseq::total_area(radii),
                rejected_index: result.rejected_index,
                invalid: !valid,
            });
        }
    }
    if cfg.minimize {
        if let Some((_, _, radii, _, _)) = outcomes.iter().find(|o| o.3.status == Status::Rejected) {
            s.counterexample = Some(minimize(radii, |seq| pack(seq).is_ok_and(|r| r.status == Status::Rejected)));
        }
    }
    Ok(s)
}
