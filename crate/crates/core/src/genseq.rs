//! Seeded generators of online radius sequences, plus a greedy minimizer for
//! failing sequences.
//!
//! All randomness comes from ChaCha8 seeded with the [`GenSpec`] seed; the
//! packers never draw random numbers.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classification::build_class_table;
use crate::geometry::circle_area;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    /// Saturates the area budget with uniformly drawn radii.
    GreedyAdversary,
    /// `count` radii uniform in `[r_min, r_max]`, no budget.
    Uniform,
    /// The single radius `r_max`.
    SingleWorstcase,
    /// Radii `q_i w_i +- 1e-9` around every class bound.
    ClassBoundary,
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenKind::GreedyAdversary => "greedy_adversary",
            GenKind::Uniform => "uniform",
            GenKind::SingleWorstcase => "single_worstcase",
            GenKind::ClassBoundary => "class_boundary",
        })
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.replace('-', "_").as_str() {
            "greedy_adversary" => Ok(GenKind::GreedyAdversary),
            "uniform" => Ok(GenKind::Uniform),
            "single_worstcase" => Ok(GenKind::SingleWorstcase),
            "class_boundary" => Ok(GenKind::ClassBoundary),
            _ => Err(Error::Parse(format!("unknown generator kind `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub seed: u64,
    pub threshold: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Number of radii for [`GenKind::Uniform`].
    #[serde(default = "default_count")]
    pub count: usize,
    /// Base lane width for [`GenKind::ClassBoundary`].
    #[serde(default = "default_width")]
    pub width: f64,
}

fn default_count() -> usize {
    1000
}

fn default_width() -> f64 {
    1.0
}

impl GenSpec {
    pub fn new(kind: GenKind, seed: u64, threshold: f64, r_min: f64, r_max: f64) -> Self {
        Self {
            kind,
            seed,
            threshold,
            r_min,
            r_max,
            count: default_count(),
            width: default_width(),
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.r_min > 0.0 && self.r_min <= self.r_max && self.r_max.is_finite()) {
            return Err(Error::Config(format!(
                "need 0 < r_min <= r_max, got {} and {}",
                self.r_min, self.r_max
            )));
        }
        if self.threshold.is_nan() || self.threshold <= 0.0 {
            return Err(Error::Config(format!("threshold {} must be positive", self.threshold)));
        }
        Ok(())
    }
}

/// Seed of run `index` derived from a base seed, independent across indices.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index);
    rng.next_u64()
}

pub fn generate(spec: &GenSpec) -> Result<Vec<f64>, Error> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok(match spec.kind {
        GenKind::GreedyAdversary => greedy_adversary(spec, &mut rng),
        GenKind::Uniform => (0..spec.count)
            .map(|_| rng.gen_range(spec.r_min..=spec.r_max))
            .collect(),
        GenKind::SingleWorstcase => vec![spec.r_max],
        GenKind::ClassBoundary => class_boundary(spec, &mut rng)?,
    })
}

/// Draws radii until the budget cannot take a circle of radius `r_min`.
/// The running total is accumulated in output order and never exceeds the
/// threshold.
fn greedy_adversary(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = Vec::new();
    let mut total = 0.0;
    loop {
        let remaining = spec.threshold - total;
        if circle_area(spec.r_min) > remaining {
            break;
        }
        let hi = spec.r_max.min((remaining / std::f64::consts::PI).sqrt());
        let mut r = if hi > spec.r_min {
            rng.gen_range(spec.r_min..=hi)
        } else {
            spec.r_min
        };
        if total + circle_area(r) > spec.threshold {
            // rounding at the top of the range
            r = (r * (1.0 - 1e-12)).max(spec.r_min);
            if total + circle_area(r) > spec.threshold {
                break;
            }
        }
        total += circle_area(r);
        out.push(r);
    }
    out
}

fn class_boundary(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<Vec<f64>, Error> {
    let table = build_class_table(spec.width, None, Some(spec.r_min), false)?;
    let mut radii: Vec<f64> = table
        .rows
        .iter()
        .flat_map(|row| {
            let b = row.lower_bound();
            [b - 1e-9, b + 1e-9]
        })
        .filter(|&r| r >= spec.r_min && r <= spec.r_max)
        .collect();
    radii.shuffle(rng);
    let mut total = 0.0;
    Ok(radii
        .into_iter()
        .take_while(|&r| {
            total += circle_area(r);
            total <= spec.threshold
        })
        .collect())
}

/// Sum of circle areas, accumulated in sequence order.
pub fn total_area(radii: &[f64]) -> f64 {
    radii.iter().map(|&r| circle_area(r)).sum()
}

/// Removes circles one at a time while `fails` keeps holding, until no single
/// removal preserves the failure.
pub fn minimize(radii: &[f64], mut fails: impl FnMut(&[f64]) -> bool) -> Vec<f64> {
    let mut cur = radii.to_vec();
    if !fails(&cur) {
        return cur;
    }
    loop {
        let mut shrunk = false;
        let mut i = 0;
        while i < cur.len() {
            let mut cand = cur.clone();
            cand.remove(i);
            if fails(&cand) {
                cur = cand;
                shrunk = true;
            } else {
                i += 1;
            }
        }
        if !shrunk {
            return cur;
        }
    }
}
