//! Density lower bounds for lane packings and the resulting critical
//! densities of both containers.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::containers::SquareMode;
use crate::Error;

/// Overhead coefficient: lost area of a set of DSLP lanes is below `c w^2`.
pub const OVERHEAD_COEFF: f64 = 0.213297;
pub const RECT_SLOPE: f64 = 0.528607;
pub const RECT_INTERCEPT: f64 = 0.457876;
pub const GUARANTEE_GENERAL: f64 = 0.350389;
pub const GUARANTEE_NO_TINY: f64 = 0.375898;

/// `1 / (3 sqrt 3)`, first breakpoint of [`delta`].
pub fn delta_breakpoint() -> f64 {
    1.0 / (3.0 * 3f64.sqrt())
}

/// Rectangle area.
pub fn rect_area(a: f64, b: f64) -> f64 {
    a * b
}

/// Semicircle area.
pub fn semicircle(r: f64) -> f64 {
    0.5 * PI * r * r
}

/// Density lower bound of a dense block whose circles have relative radius
/// at least `q`.
pub fn delta(q: f64) -> Result<f64, Error> {
    if !(q > 0.0 && q <= 0.5) {
        return Err(Error::Config(format!("relative bound {q} not in (0, 1/2]")));
    }
    let knee = delta_breakpoint();
    Ok(if q < knee {
        PI * q
    } else if q <= 1.0 / 3.0 {
        PI * knee
    } else {
        PI * q * q / (4.0 * q - 1.0).sqrt()
    })
}

/// Lower bound on the occupied area of an SLP lane with packing length `p`.
/// The rectangle term is clamped at zero for `p < 2z`.
pub fn min_slp(p: f64, w: f64, z: f64, delta_min: f64) -> f64 {
    rect_area((p - 2.0 * z).max(0.0), w) * delta_min + 2.0 * semicircle(z)
}

/// Lower bound on the occupied area of a sparse block of length `len`.
pub fn sparse_lower(len: f64, w: f64, z: f64, delta_min: f64) -> Result<f64, Error> {
    if !(len >= z && z >= 0.0) {
        return Err(Error::Config(format!("sparse block length {len} below z = {z}")));
    }
    Ok(rect_area(len - z, w) * delta_min + semicircle(z))
}

/// Lower bound on the occupied area of a DSLP lane, before overhead.
pub fn min_dslp(p_t: f64, p_b: f64, w: f64, z: f64, delta_min: f64) -> f64 {
    rect_area((p_t + p_b - w - 4.0 * z).max(0.0), w / 2.0) * delta_min
        + 2.0 * semicircle(w / 4.0)
        + 4.0 * semicircle(z)
}

pub fn overhead_bound(w: f64) -> f64 {
    OVERHEAD_COEFF * w * w
}

/// Critical density of the `1 x b` rectangle.
pub fn guarantee_rect(b: f64) -> f64 {
    (RECT_SLOPE * b - RECT_INTERCEPT).min(FRAC_PI_4)
}

/// Critical density of the unit square.
pub fn guarantee_square(mode: SquareMode) -> f64 {
    match mode {
        SquareMode::General => GUARANTEE_GENERAL,
        SquareMode::NoTiny => GUARANTEE_NO_TINY,
    }
}

/// The rectangle bound rebuilt from its parts: `(b - 3/4 - q) d + pi/16 +
/// (pi/2) q^2 - c` with `q = q_2`, dense-block density `d` and overhead `c`.
pub fn rect_bound_expression(b: f64, q2: f64, d: f64) -> f64 {
    (b - 0.75 - q2) * d + PI / 16.0 + semicircle(q2) - overhead_bound(1.0)
}

/// Smallest `b` at which the rectangle bound reaches `pi/4`.
pub fn rect_crossover() -> f64 {
    (FRAC_PI_4 + RECT_INTERCEPT) / RECT_SLOPE
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_examples() {
        assert!((delta(0.15).unwrap() - 0.47123).abs() < 1e-5);
        assert!((delta(0.4).unwrap() - 0.6489).abs() < 1e-4);
        assert!((delta(0.5).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!((delta(delta_breakpoint()).unwrap() - 0.6046).abs() < 1e-4);
        assert!((delta(0.168261).unwrap() - RECT_SLOPE).abs() < 1e-6);
        assert!(delta(0.0).is_err() && delta(0.51).is_err() && delta(f64::NAN).is_err());
    }

    #[test]
    fn delta_is_continuous_at_breakpoints() {
        for b in [delta_breakpoint(), 1.0 / 3.0] {
            let lo = delta(b * (1.0 - 1e-13)).unwrap();
            let hi = delta(b * (1.0 + 1e-13)).unwrap();
            assert!((lo - hi).abs() <= 1e-12, "{b}: {lo} vs {hi}");
        }
    }

    #[test]
    fn min_slp_examples() {
        assert!((min_slp(0.2, 1.0, 0.1, 0.5) - 0.0314159).abs() < 1e-6);
        let q = 0.168261;
        let v = min_slp(1.0, 1.0, q, delta(q).unwrap());
        let oracle = (1.0 - 2.0 * q) * PI * q + PI * q * q;
        assert!((v - oracle).abs() < 1e-12);
        // hand value 0.663 * 0.528607 + 0.0889 rounds the rectangle length
        assert!((v - 0.43946).abs() < 5e-4);
        assert!(min_slp(1.0 + 1e-6, 1.0, q, 0.5) > min_slp(1.0, 1.0, q, 0.5));
        assert_eq!(min_slp(0.0, 1.0, q, 0.5), min_slp(2.0 * q, 1.0, q, 0.5));
    }

    #[test]
    fn sparse_lower_examples() {
        let z = 0.25;
        assert!((sparse_lower(z, 1.0, z, 0.6).unwrap() - semicircle(z)).abs() < 1e-15);
        assert!((sparse_lower(0.5, 1.0, z, 0.6).unwrap() - 0.2481748).abs() < 1e-6);
        assert!(sparse_lower(0.1, 1.0, z, 0.6).is_err());
        // a lane is two sparse halves glued at their common end
        for p in [0.6, 1.0, 3.0] {
            let d = 0.55;
            let halves = sparse_lower(p - z, 1.0, z, d).unwrap() + semicircle(z);
            assert!((halves - min_slp(p, 1.0, z, d)).abs() < 1e-12);
        }
    }

    #[test]
    fn min_dslp_examples() {
        let z = 0.0841305;
        let v = min_dslp(0.5 + 2.0 * z, 0.5 + 2.0 * z, 1.0, z, 0.5);
        let oracle = PI / 16.0 + 2.0 * PI * z * z;
        assert!((v - oracle).abs() < 1e-15);
        assert!((v - 0.240818).abs() < 1e-5);
        assert_eq!(min_dslp(2.0, 1.5, 1.0, z, 0.5), min_dslp(1.5, 2.0, 1.0, z, 0.5));
    }

    #[test]
    fn rect_bound_matches_its_derivation() {
        let q2 = 0.168261;
        let z = q2 / 2.0;
        for k in 0..=90 {
            let b = 1.0 + k as f64 * 0.1;
            let linear = RECT_SLOPE * b - RECT_INTERCEPT;
            // density at its printed precision
            assert!((rect_bound_expression(b, q2, RECT_SLOPE) - linear).abs() < 5e-6);
            // both small lanes packed to b - 1/4
            let via_dslp = min_dslp(b - 0.25, b - 0.25, 1.0, z, RECT_SLOPE) - overhead_bound(1.0);
            assert!((via_dslp - linear).abs() < 5e-6);
        }
        // with the unrounded density the gap grows like (pi q2 - 0.528607) b
        let d = delta(q2).unwrap();
        for b in [1.0, 2.0, 2.36, 5.0, 7.0] {
            assert!((rect_bound_expression(b, q2, d) - (RECT_SLOPE * b - RECT_INTERCEPT)).abs() < 5e-6);
        }
        let gap10 = rect_bound_expression(10.0, q2, d) - (RECT_SLOPE * 10.0 - RECT_INTERCEPT);
        assert!(gap10 > 5e-6 && gap10 < 7e-6);
    }

    #[test]
    fn guarantees() {
        assert!((guarantee_rect(3.0) - FRAC_PI_4).abs() < 1e-15);
        assert!((guarantee_rect(1.0) - 0.070731).abs() < 1e-12);
        assert!((rect_crossover() - 2.35197).abs() < 2e-5 && rect_crossover() <= 2.36);
        let offline = PI / (3.0 + 2.0 * 2f64.sqrt());
        for m in [SquareMode::General, SquareMode::NoTiny] {
            assert!(guarantee_square(m) < offline);
        }
        assert!((overhead_bound(0.5) - 0.05332425).abs() < 1e-15);
        assert_eq!(overhead_bound(0.0), 0.0);
    }
}
