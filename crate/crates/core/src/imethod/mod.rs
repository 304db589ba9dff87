//! The I-operator, the multipliers `m`, `M₄`, `M₆`, the functionals `Λₙ` and
//! the modified energies `E¹`, `E²`.

mod functional;
mod multiplier;
mod scan;

pub use functional::{
    e1, e1_dual, e2, e2_minus_e1, e2_time_derivative, lambda_n, LambdaOptions, DEFAULT_BUDGET,
    RESIDUE_TOL,
};
pub use multiplier::{m4, m6, FrequencyTuple, MultiplierTable, EPS_RES};
pub use scan::{m4_scan, write_m4_slice_csv, M4ScanOptions, M4ScanReport};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::SpectralField;

/// Interpolation used for `g₁` on `1 < |x| < 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum G1Variant {
    /// `exp(−h(ln|x|) ln|x|)` with the quintic smoothstep `h`; C².
    #[default]
    QuinticLogSmoothstep,
    /// Same construction with the cubic smoothstep; only C¹.
    CubicHermiteLog,
}

impl G1Variant {
    pub fn identifier(self) -> &'static str {
        match self {
            G1Variant::QuinticLogSmoothstep => "quintic-log-smoothstep",
            G1Variant::CubicHermiteLog => "cubic-hermite-log",
        }
    }

    pub fn from_identifier(id: &str) -> Option<Self> {
        match id {
            "quintic-log-smoothstep" => Some(G1Variant::QuinticLogSmoothstep),
            "cubic-hermite-log" => Some(G1Variant::CubicHermiteLog),
            _ => None,
        }
    }

    /// The blending function on `τ ∈ [0, 1]`.
    pub fn smoothstep(self, tau: f64) -> f64 {
        match self {
            G1Variant::QuinticLogSmoothstep => tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau)),
            G1Variant::CubicHermiteLog => tau * tau * (3.0 - 2.0 * tau),
        }
    }
}

/// `g₁` with the default interpolation.
pub fn g1(x: f64) -> f64 {
    g1_with(G1Variant::default(), x)
}

/// `g₁(x) = 1` on `|x| ≤ 1`, `|x|⁻¹` on `|x| ≥ 2`, monotone in between.
pub fn g1_with(variant: G1Variant, x: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 {
        1.0
    } else if a >= 2.0 {
        1.0 / a
    } else {
        let y = a.ln();
        let h = variant.smoothstep(y / std::f64::consts::LN_2);
        (-h * y).exp()
    }
}

/// The bundle `(α, s, N)` defining `m = g_N^{α−s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModifiedEnergyParams {
    pub alpha: f64,
    pub s: f64,
    pub n: f64,
    #[serde(default)]
    pub g1: G1Variant,
}

impl ModifiedEnergyParams {
    pub fn new(alpha: f64, s: f64, n: f64) -> Result<Self> {
        let p = Self {
            alpha,
            s,
            n,
            g1: G1Variant::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_g1(mut self, variant: G1Variant) -> Self {
        self.g1 = variant;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.5 && self.alpha <= 1.0) {
            return Err(invalid(format!(
                "alpha must lie in (1/2, 1], got {}",
                self.alpha
            )));
        }
        if !(self.s < self.alpha) || !self.s.is_finite() {
            return Err(invalid(format!("need s < alpha, got s = {}", self.s)));
        }
        if !(self.n >= 1.0) || !self.n.is_finite() {
            return Err(invalid(format!("N must be >= 1, got {}", self.n)));
        }
        Ok(())
    }

    /// Smoothing degree `β = α − s`.
    pub fn beta(&self) -> f64 {
        self.alpha - self.s
    }

    /// `g_N(k) = g₁(k/N)`.
    pub fn g_n(&self, k: f64) -> f64 {
        g1_with(self.g1, k / self.n)
    }

    /// `m(k) = g_N(k)^{α−s}`.
    pub fn m(&self, k: f64) -> f64 {
        let g = self.g_n(k);
        if g == 1.0 {
            1.0
        } else {
            g.powf(self.beta())
        }
    }
}

/// `(I_N^β f)^ = g_N^β f̂`, with `β = α − s` unless overridden.
pub fn apply_i(
    f: &SpectralField,
    params: &ModifiedEnergyParams,
    beta_override: Option<f64>,
) -> Result<SpectralField> {
    let beta = beta_override.unwrap_or_else(|| params.beta());
    if !(beta >= 0.0) {
        return Err(invalid(format!(
            "smoothing degree must be >= 0, got {beta}"
        )));
    }
    let spec = *f.spec();
    Ok(f.map_indexed(|m, c| {
        let g = params.g_n(spec.frequency(m));
        if g == 1.0 {
            c
        } else {
            c * g.powf(beta)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TorusSpec;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    #[test]
    fn g1_branches() {
        assert_eq!(g1(0.5), 1.0);
        assert_eq!(g1(-1.0), 1.0);
        assert_eq!(g1(4.0), 0.25);
        assert_eq!(g1(-4.0), 0.25);
        let mid = g1(1.5);
        assert!(mid > 0.5 && mid < 1.0);
        assert!(g1(1.4) >= g1(1.6));
        assert!((g1(2.0) - 0.5).abs() < 1e-15);
        assert!((g1_with(G1Variant::CubicHermiteLog, 2.0 - 1e-12) - 0.5).abs() < 1e-11);
    }

    #[test]
    fn g1_monotone_and_even() {
        for variant in [G1Variant::QuinticLogSmoothstep, G1Variant::CubicHermiteLog] {
            let xs: Vec<f64> = (0..=4000).map(|i| i as f64 * 1e-3).collect();
            for w in xs.windows(2) {
                assert!(g1_with(variant, w[1]) <= g1_with(variant, w[0]) + 1e-16);
            }
            for &x in &xs {
                assert_eq!(g1_with(variant, x), g1_with(variant, -x));
            }
        }
    }

    fn second_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
    }

    #[test]
    fn quintic_is_c2_at_the_junctions() {
        let g = |x| g1(x);
        let h = 1e-4;
        // one-sided second derivatives agree across x = 1 and x = 2
        for &x0 in &[1.0, 2.0] {
            let left = second_derivative(g, x0 - 3.0 * h, h);
            let right = second_derivative(g, x0 + 3.0 * h, h);
            assert!((left - right).abs() < 1e-2, "x0 = {x0}: {left} vs {right}");
        }
        // the cubic variant has a jump in g'' at x = 2
        let gc = |x| g1_with(G1Variant::CubicHermiteLog, x);
        let left = second_derivative(gc, 2.0 - 3.0 * h, h);
        let right = second_derivative(gc, 2.0 + 3.0 * h, h);
        assert!((left - right).abs() > 0.1);
    }

    #[test]
    fn curvature_bound() {
        let mut worst: f64 = 0.0;
        for i in 1..40_000 {
            let x = i as f64 * 1e-3;
            let h = 1e-4 * x.max(1.0);
            worst = worst.max((x * x * second_derivative(g1, x, h)).abs());
        }
        assert!(worst < 10.0, "sup |x² g''| = {worst}");
    }

    #[test]
    fn multiplier_branches() {
        let p = ModifiedEnergyParams::new(0.75, 0.25, 4.0).unwrap();
        assert_eq!(p.m(3.0), 1.0);
        assert_eq!(p.m(-4.0), 1.0);
        assert!((p.m(16.0) - 0.5).abs() < 1e-15);
        assert!((p.m(20.0) - (0.2f64).sqrt()).abs() < 1e-15);
        let ks: Vec<f64> = (0..2000).map(|i| i as f64 * 0.05).collect();
        assert!(ks.windows(2).all(|w| p.m(w[1]) <= p.m(w[0])));
    }

    #[test]
    fn params_validation() {
        assert!(ModifiedEnergyParams::new(0.75, 0.8, 4.0).is_err());
        assert!(ModifiedEnergyParams::new(0.75, 0.25, 0.5).is_err());
        assert!(ModifiedEnergyParams::new(0.4, 0.1, 4.0).is_err());
        assert_eq!(
            G1Variant::from_identifier("cubic-hermite-log"),
            Some(G1Variant::CubicHermiteLog)
        );
        assert_eq!(G1Variant::default().identifier(), "quintic-log-smoothstep");
    }

    #[test]
    fn apply_i_examples() {
        let p = ModifiedEnergyParams::new(0.75, 0.25, 4.0).unwrap();
        let spec = TorusSpec::unit(64).unwrap();
        let low = SpectralField::from_modes(
            spec,
            &[
                (-4, Complex64::new(1.0, 1.0)),
                (2, Complex64::new(0.5, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(apply_i(&low, &p, None).unwrap(), low);
        let high = SpectralField::from_modes(spec, &[(16, Complex64::new(2.0, 0.0))]).unwrap();
        let ih = apply_i(&high, &p, None).unwrap();
        assert!((ih.coeff(16).re - 2.0 * 0.25f64.powf(0.5)).abs() < 1e-15);
        assert!(apply_i(&high, &p, Some(-0.1)).is_err());
        assert_eq!(apply_i(&high, &p, Some(0.0)).unwrap(), high);
    }

    #[test]
    fn sandwich_bounds_uniform_in_n() {
        let spec = TorusSpec::unit(1024).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let (alpha, s) = (0.75, 0.25);
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for &n in &[4.0, 16.0, 64.0] {
            let p = ModifiedEnergyParams::new(alpha, s, n).unwrap();
            for _ in 0..8 {
                let modes: Vec<_> = (-511..=511)
                    .map(|m| {
                        let d = (1.0 + (m * m) as f64).powf(0.5 + rng.random::<f64>());
                        (
                            m,
                            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                                / d,
                        )
                    })
                    .collect();
                let u = SpectralField::from_modes(spec, &modes).unwrap();
                let iu = apply_i(&u, &p, None).unwrap();
                let (a, b) = (u.sobolev_norm(s), iu.sobolev_norm(s + p.beta()));
                lower.push(a / b);
                upper.push(b / (n.powf(p.beta()) * a));
            }
        }
        let max_l = lower.iter().cloned().fold(0.0, f64::max);
        let max_u = upper.iter().cloned().fold(0.0, f64::max);
        assert!(max_l <= 2.0, "lower constant {max_l}");
        assert!(max_u <= 4.0, "upper constant {max_u}");
    }
}
