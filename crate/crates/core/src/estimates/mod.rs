//! Resonance function, convexity and counting verifiers, and empirical
//! Strichartz constants.

mod strichartz;

pub use strichartz::{
    bilinear_quotient, concentration_check, l6_quotient, rescaling_transfer,
    sharp_bilinear_example, space_time_integral, strichartz_l4_quotient, ConcentrationReport,
    DataKind, ProbeBand, QuotientReport, StrichartzProbe, TransferReport, L6_EPSILON,
};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::par::{map_range, Exec};
use crate::spectral::{abs_pow, dispersion};

/// `ψ(k,k₁,k₂) = |k₁−k|^{2α} + |k₁|^{2α} − |k₂−k|^{2α} − |k₂|^{2α}`.
pub fn resonance_psi(k: f64, k1: f64, k2: f64, alpha: f64) -> f64 {
    dispersion(k1 - k, alpha) + dispersion(k1, alpha)
        - dispersion(k2 - k, alpha)
        - dispersion(k2, alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub alpha: f64,
    pub radius: i64,
    pub min_ratio: f64,
    pub argmin: [i64; 3],
    pub max_ratio: f64,
    pub admissible: u64,
}

/// The two sides of the convexity bound at `(k₁,k₂,k₃)`: the alternating sum
/// of `|kⱼ|^{2α}` and `|k₁+k₂||k₂+k₃| / (|k₁|+|k₂|+|k₃|)^{2−2α}`.
pub fn convexity_sides(k: [i64; 3], alpha: f64) -> (f64, f64) {
    let [k1, k2, k3] = k;
    let f = |x: i64| dispersion(x as f64, alpha);
    let lhs = (f(k1) - f(k2) + f(k3) - f(k1 + k2 + k3)).abs();
    let size = (k1.abs() + k2.abs() + k3.abs()) as f64;
    let rhs = ((k1 + k2).abs() * (k2 + k3).abs()) as f64 / abs_pow(size, 2.0 - 2.0 * alpha);
    (lhs, rhs)
}

/// Minimum of LHS/RHS of the convexity bound over all integer `(k₁,k₂,k₃)`
/// in the cube of the given radius with `(k₁+k₂)(k₂+k₃) ≠ 0`.
pub fn convexity_gap_check(radius: i64, alpha: f64, exec: Exec) -> Result<ConvexityReport> {
    if radius < 1 {
        return Err(invalid("radius must be >= 1"));
    }
    if !(alpha > 0.5 && alpha <= 1.0) {
        return Err(invalid(format!("alpha must lie in (1/2, 1], got {alpha}")));
    }
    let side = (2 * radius + 1) as usize;
    let rows = map_range(exec, side, |i| {
        let k1 = i as i64 - radius;
        let mut min = f64::INFINITY;
        let mut arg = [0; 3];
        let mut max: f64 = 0.0;
        let mut count = 0u64;
        for k2 in -radius..=radius {
            if k1 + k2 == 0 {
                continue;
            }
            for k3 in -radius..=radius {
                if k2 + k3 == 0 {
                    continue;
                }
                let (lhs, rhs) = convexity_sides([k1, k2, k3], alpha);
                let r = lhs / rhs;
                if r < min {
                    min = r;
                    arg = [k1, k2, k3];
                }
                max = max.max(r);
                count += 1;
            }
        }
        (min, arg, max, count)
    });
    let mut report = ConvexityReport {
        alpha,
        radius,
        min_ratio: f64::INFINITY,
        argmin: [0; 3],
        max_ratio: 0.0,
        admissible: 0,
    };
    for (min, arg, max, count) in rows {
        if min < report.min_ratio {
            report.min_ratio = min;
            report.argmin = arg;
        }
        report.max_ratio = report.max_ratio.max(max);
        report.admissible += count;
    }
    Ok(report)
}

/// `#{k₂ ∈ Z : |k₂ − k₁| ≤ bound}` by direct enumeration.
pub fn counting_oracle(k1: i64, bound: f64) -> Result<u64> {
    if !(bound >= 0.0) || !bound.is_finite() {
        return Err(invalid(format!(
            "bound must be finite and >= 0, got {bound}"
        )));
    }
    let reach = bound.ceil() as i64 + 1;
    Ok((k1 - reach..=k1 + reach)
        .filter(|&k2| ((k2 - k1).abs() as f64) <= bound)
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_examples() {
        assert_eq!(resonance_psi(1.7, 2.5, 2.5, 0.75), 0.0);
        assert!(resonance_psi(3.0, 2.0, 1.0, 0.75).abs() < 1e-15);
        let direct = 2f64.powf(1.5) + 2f64.powf(1.5) - 3f64.powf(1.5) - 1.0;
        assert!((resonance_psi(4.0, 2.0, 1.0, 0.75) - direct).abs() < 1e-14);
        for k in -6..=6 {
            for k1 in -6..=6 {
                for k2 in -6..=6 {
                    let (k, k1, k2) = (k as f64, k1 as f64, k2 as f64);
                    let classical = 2.0 * (k1 - k2) * (k1 + k2 - k);
                    assert_eq!(resonance_psi(k, k1, k2, 1.0), classical);
                }
            }
        }
    }

    #[test]
    fn convexity_ratio_is_two_in_the_classical_limit() {
        let rep = convexity_gap_check(12, 1.0, Exec::Sequential).unwrap();
        assert_eq!(rep.min_ratio, 2.0);
        assert_eq!(rep.max_ratio, 2.0);
    }

    #[test]
    fn convexity_excludes_degenerate_tuples() {
        // (k1+k2)(k2+k3) = 0 makes both sides vanish
        let (l, r) = convexity_sides([3, -3, 5], 0.75);
        assert_eq!((l, r), (0.0, 0.0));
        let rep = convexity_gap_check(3, 0.75, Exec::Sequential).unwrap();
        // 7³ tuples minus those with k1 = −k2 or k3 = −k2
        assert_eq!(rep.admissible, 343 - 49 - 49 + 7);
        assert!(rep.min_ratio > 0.0);
    }

    #[test]
    fn counting_examples() {
        assert_eq!(counting_oracle(5, 0.0).unwrap(), 1);
        assert_eq!(counting_oracle(-3, 2.5).unwrap(), 5);
        for i in 0..200 {
            let b = i as f64 * 0.173;
            let c = counting_oracle(7, b).unwrap();
            assert_eq!(c, 2 * b.floor() as u64 + 1);
            let factor = 2.0 + 1.0 / b.max(1e-300);
            assert!(c as f64 <= factor * (1.0 + b) && (c as f64) * factor >= 1.0 + b);
        }
        assert!(counting_oracle(0, -1.0).is_err());
    }
}
