//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

use circlepack::audit::{audit_dslp_lane, audit_slp_lane, validate};
use circlepack::bounds::{delta, delta_breakpoint, guarantee_rect, guarantee_square, rect_bound_expression};
use circlepack::classification::{build_class_table, ClassId, Q_SMALL};
use circlepack::containers::{Offer, RectPacker, SquarePacker, MIN_RADIUS_NO_TINY, W_NO_TINY};
use circlepack::genseq::{derive_seed, generate, minimize, total_area, GenKind, GenSpec};
use circlepack::geometry::{Frame, HostLane, LaneId, Obstacles, Orientation, Rect};
use circlepack::lane::{LaneState, Strategy};
use circlepack::{pack_rect_online, pack_square_online, SquareMode, Status, EPS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const BS: [f64; 6] = [1.0, 1.5, 2.0, 2.36, 3.0, 5.0];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn square_max_radius() -> f64 {
    SquareMode::General.class_table().max_radius()
}

fn greedy(seed: u64, threshold: f64, r_min: f64, r_max: f64) -> Vec<f64> {
    generate(&GenSpec::new(GenKind::GreedyAdversary, seed, threshold, r_min, r_max)).expect("valid generator spec")
}

fn validity() -> Outcome {
    let bad: Vec<String> = (0..1000u64)
        .into_par_iter()
        .filter_map(|k| {
            let seed = derive_seed(0x5eed, k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let count = rng.gen_range(1..=5000);
            let (r_min, r_max) = match k % 3 {
                0 => (0.001, 0.5),
                1 => (0.001, square_max_radius()),
                _ => (MIN_RADIUS_NO_TINY, (1.0 - W_NO_TINY) / 2.0),
            };
            // narrow bands push the runs to thousands of circles
            let hi = rng.gen_range(r_min..=r_max).max(r_min * 1.5).min(r_max);
            let mut spec = GenSpec::new(GenKind::Uniform, seed, 1.0, r_min, hi);
            spec.count = count;
            let radii = generate(&spec).expect("valid generator spec");
            let res = match k % 3 {
                0 => pack_rect_online(rng.gen_range(1.0..6.0), &radii),
                1 => pack_square_online(SquareMode::General, &radii),
                _ => pack_square_online(SquareMode::NoTiny, &radii),
            }
            .expect("inputs are in range");
            let rep = validate(&res, 1e-9);
            (!rep.valid).then(|| format!("run {k}: {:?}", rep.violations.first()))
        })
        .collect();
    outcome(bad.is_empty(), format!("1000 runs, {} invalid {}", bad.len(), bad.first().cloned().unwrap_or_default()))
}

fn rect_rejects(b: f64, radii: &[f64]) -> bool {
    pack_rect_online(b, radii).map(|r| r.status == Status::Rejected).unwrap_or(true)
}

fn rect_guarantee() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for b in BS {
        let g = guarantee_rect(b);
        let failures: Vec<Vec<f64>> = (0..200u64)
            .into_par_iter()
            .map(|k| greedy(derive_seed(0x7ec7 + (b * 100.0) as u64, k), g, 0.001, 0.5))
            .filter(|radii| {
                assert!(total_area(radii) <= g, "generator exceeded the budget");
                rect_rejects(b, radii)
            })
            .collect();
        if let Some(first) = failures.first() {
            pass = false;
            let min = minimize(first, |s| rect_rejects(b, s));
            details.push(format!("b={b}: {} rejected, minimized counterexample {min:?}", failures.len()));
        } else {
            details.push(format!("b={b}: 200/200"));
        }
    }
    outcome(pass, details.join(", "))
}

fn square_guarantee(mode: SquareMode, r_min: f64) -> Outcome {
    let g = guarantee_square(mode);
    let r_max = mode.class_table().max_radius();
    let rejects = |s: &[f64]| pack_square_online(mode, s).map(|r| r.status == Status::Rejected).unwrap_or(true);
    let failures: Vec<Vec<f64>> = (0..500u64)
        .into_par_iter()
        .map(|k| greedy(derive_seed(0x5a + mode as u64, k), g, r_min, r_max))
        .filter(|radii| {
            assert!(total_area(radii) <= g, "generator exceeded the budget");
            rejects(radii)
        })
        .collect();
    match failures.first() {
        None => outcome(true, format!("{mode}: 500/500 fully packed at budget {g}")),
        Some(first) => outcome(false, format!("{} rejected, minimized counterexample {:?}", failures.len(), minimize(first, rejects))),
    }
}

fn witnesses() -> Outcome {
    let mut bs: Vec<f64> = BS.to_vec();
    bs.extend([1.0 + 1e-9, 1.25, 2.35197, 7.0, 10.0, 100.0]);
    let fits = bs.iter().all(|&b| pack_rect_online(b, &[0.5]).is_ok_and(|r| r.status == Status::AllPacked && validate(&r, EPS).valid));
    let big = 0.5 + 1e-6;
    let rejected = bs.iter().all(|&b| pack_rect_online(b, &[big]).is_ok_and(|r| r.status == Status::Rejected && r.placements.is_empty()));
    let above = PI * big * big > FRAC_PI_4;
    let gen = generate(&GenSpec::new(GenKind::SingleWorstcase, 0, 1.0, big, big)).is_ok_and(|v| v == [big]);
    outcome(fits && rejected && above && gen, format!("r=0.5 packs: {fits}, r=0.5+1e-6 rejected: {rejected}, area > pi/4: {above}"))
}

fn golden_bounds() -> Outcome {
    let checks = [
        ("delta(0.15)", (delta(0.15).unwrap() - 0.47123).abs() <= 1e-5),
        ("delta(1/(3 sqrt 3))", (delta(delta_breakpoint()).unwrap() - 0.6046).abs() <= 1e-4),
        ("delta(0.4)", (delta(0.4).unwrap() - 0.6489).abs() <= 1e-4),
        ("square general", guarantee_square(SquareMode::General) == 0.350389),
        ("square no-tiny", guarantee_square(SquareMode::NoTiny) == 0.375898),
        (
            "linear form on [1, 10]",
            (0..=900).all(|k| {
                let b = 1.0 + k as f64 * 0.01;
                // dense-block density at its printed six decimals
                (rect_bound_expression(b, Q_SMALL, 0.528607) - (0.528607 * b - 0.457876)).abs() <= 5e-6
            }),
        ),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(failed.is_empty(), if failed.is_empty() { "all golden values".to_string() } else { format!("failed: {failed:?}") })
}

fn slp_audits() -> usize {
    let table = build_class_table(1.0, None, Some(1e-4), false).unwrap();
    (0..500u64)
        .into_par_iter()
        .filter(|&k| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(0x51b, k));
            let class = ClassId(rng.gen_range(1..=table.rows.len() as u32));
            let row = *table.row(class).unwrap();
            let w = row.width;
            let len = w * rng.gen_range(1.0..40.0);
            let rect = Rect::new(0.0, 0.0, len, w).unwrap();
            let mut lane = LaneState::new(LaneId::main(HostLane::Rect), Frame::new(rect, Orientation::Rightwards), Strategy::Slp);
            let mut obs = Obstacles::new(rect);
            let lo = row.lower_bound();
            for i in 0.. {
                let r = rng.gen_range(lo..=w / 2.0).max(lo * (1.0 + 1e-12));
                if lane.place(r, i, class, &mut obs).is_none() {
                    break;
                }
            }
            !audit_slp_lane(&lane, row.q, w)
        })
        .count()
}

fn dslp_audits() -> (usize, usize) {
    let rect: Vec<(usize, usize)> = BS
        .par_iter()
        .flat_map(|&b| {
            (0..200u64).into_par_iter().map(move |k| {
                let radii = greedy(derive_seed(0x7ec7 + (b * 100.0) as u64, k), guarantee_rect(b), 0.001, 0.5);
                let mut p = RectPacker::new(b).unwrap();
                for &r in &radii {
                    if !matches!(p.offer(r).unwrap(), Offer::Packed(_)) {
                        break;
                    }
                }
                let res = p.result();
                (1, usize::from(!audit_dslp_lane(p.lane(), &res.placements)))
            })
        })
        .collect();
    let square: Vec<(usize, usize)> = (0..500u64)
        .into_par_iter()
        .map(|k| {
            let mode = SquareMode::General;
            let radii = greedy(derive_seed(0x5a + mode as u64, k), guarantee_square(mode), 0.001, square_max_radius());
            let mut p = SquarePacker::new(mode);
            for &r in &radii {
                if !matches!(p.offer(r).unwrap(), Offer::Packed(_)) {
                    break;
                }
            }
            let res = p.result();
            let lanes = p.dslp_lanes();
            (lanes.len(), lanes.iter().filter(|d| !audit_dslp_lane(d, &res.placements)).count())
        })
        .collect();
    rect.iter().chain(&square).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

fn lemma_audits() -> Outcome {
    let slp_bad = slp_audits();
    let (lanes, dslp_bad) = dslp_audits();
    outcome(
        slp_bad == 0 && dslp_bad == 0,
        format!("SLP lanes failing: {slp_bad}/500, DSLP lanes failing: {dslp_bad}/{lanes}"),
    )
}

fn class_table() -> Outcome {
    let printed = [0.5, 0.168261, 0.125, 0.047664, 0.016739, 0.005715];
    let t = build_class_table(1.0, None, None, false).unwrap();
    let got: Vec<f64> = (2..=7).map(|i| t.row(ClassId(i)).unwrap().width).collect();
    let ok = got.iter().zip(printed).all(|(g, p)| (g - p).abs() <= 1e-6 * t.base_width);
    outcome(ok, format!("w2..w7 = {got:.8?}"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 validity", validity),
        ("2 rectangle guarantee", rect_guarantee),
        ("3 square guarantee", || square_guarantee(SquareMode::General, 0.001)),
        ("4 no-tiny guarantee", || square_guarantee(SquareMode::NoTiny, MIN_RADIUS_NO_TINY)),
        ("5 worst-case witnesses", witnesses),
        ("6 bound golden values", golden_bounds),
        ("7 lane audits", lemma_audits),
        ("8 class table", class_table),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
