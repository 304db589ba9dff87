//! Space-time Lebesgue norms of linear evolutions and the associated
//! Strichartz-constant quotients.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::par::{map_range, Exec, KahanSum};
use crate::spectral::{
    dispersion, inverse_in_place, next_pow2, unit_dilation, Band, SpectralField, TorusSpec,
};

/// The `ε` fixed in the normalization of the `L⁶` quotient.
pub const L6_EPSILON: f64 = 0.05;

/// Largest phase advance of any mode allowed between two time samples.
const MAX_PHASE_STEP: f64 = PI / 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    RandomUnimodularPhases,
    BlockExponentialSum,
    SingleMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeBand {
    Dyadic { n: f64 },
    Pair { n1: f64, n2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrichartzProbe {
    pub torus: TorusSpec,
    pub alpha: f64,
    pub band: ProbeBand,
    pub horizon: f64,
    pub time_samples: usize,
    pub data_kind: DataKind,
}

/// Number of trapezoid nodes on `[0, t]` so that modes up to `|k| ≤ k` advance
/// by less than `π/4` per sample in every product.
pub fn min_time_samples(t: f64, k: f64, alpha: f64) -> usize {
    let rate = dispersion(2.0 * k, alpha);
    (t * rate / MAX_PHASE_STEP).floor() as usize + 2
}

impl StrichartzProbe {
    /// Probe with the smallest admissible number of time samples.
    pub fn new(
        torus: TorusSpec,
        alpha: f64,
        band: ProbeBand,
        horizon: f64,
        data_kind: DataKind,
    ) -> Result<Self> {
        let mut p = Self {
            torus,
            alpha,
            band,
            horizon,
            time_samples: 2,
            data_kind,
        };
        p.time_samples = min_time_samples(horizon, p.max_frequency(), alpha);
        p.validate()?;
        Ok(p)
    }

    pub fn with_time_samples(mut self, n: usize) -> Self {
        self.time_samples = n;
        self
    }

    /// Largest `|k|` the probe's data can carry.
    pub fn max_frequency(&self) -> f64 {
        match self.band {
            ProbeBand::Dyadic { n } => n,
            ProbeBand::Pair { n1, n2 } => {
                if self.data_kind == DataKind::BlockExponentialSum {
                    let (m1, _) = sharp_block_lengths(n1, n2, self.alpha);
                    n1 + m1 as f64
                } else {
                    n1
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(invalid("horizon T must be positive"));
        }
        if !(self.alpha > 0.5 && self.alpha <= 1.0) {
            return Err(invalid(format!(
                "alpha must lie in (1/2, 1], got {}",
                self.alpha
            )));
        }
        if let ProbeBand::Pair { n1, n2 } = self.band {
            if n1 < 8.0 * n2 {
                return Err(invalid(format!(
                    "bilinear probes need N1 >= 8 N2, got {n1}, {n2}"
                )));
            }
        }
        if self.max_frequency() > self.torus.k_max() {
            return Err(Error::BeyondResolution {
                k: self.max_frequency(),
                k_max: self.torus.k_max(),
            });
        }
        let need = min_time_samples(self.horizon, self.max_frequency(), self.alpha);
        if self.time_samples < need {
            return Err(invalid(format!(
                "time_samples = {} cannot resolve the fastest phase; need at least {need}",
                self.time_samples
            )));
        }
        Ok(())
    }

    fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        rng
    }

    fn single_band_datum(&self, n: f64, rng: &mut ChaCha8Rng) -> Result<SpectralField> {
        let spec = self.torus;
        let vol = Complex64::new(spec.volume(), 0.0);
        match self.data_kind {
            DataKind::RandomUnimodularPhases => {
                Ok(SpectralField::random_phases(spec, &Band::Dyadic(n), rng).scale(vol))
            }
            DataKind::SingleMode => SpectralField::synthesize(spec, &[(n, vol)]),
            DataKind::BlockExponentialSum => {
                // a run of ⌊N^{2α−1}⌋ + 1 consecutive frequencies ending at N
                let m = (n.powf(2.0 * self.alpha - 1.0).floor() as i64)
                    .min((n / 2.0) as i64 - 1)
                    .max(0);
                let modes: Vec<(f64, Complex64)> = (0..=m).map(|j| (n - j as f64, vol)).collect();
                SpectralField::synthesize(spec, &modes)
            }
        }
    }

    /// The data of one trial: one field for dyadic bands, two for pairs.
    pub fn datum(&self, seed: u64, trial: usize) -> Result<Vec<SpectralField>> {
        let mut rng = Self::trial_rng(seed, trial);
        match self.band {
            ProbeBand::Dyadic { n } => Ok(vec![self.single_band_datum(n, &mut rng)?]),
            ProbeBand::Pair { n1, n2 } => {
                if self.data_kind == DataKind::BlockExponentialSum {
                    let (a, b) = sharp_bilinear_example(n1, n2, self.alpha, self.torus)?;
                    Ok(vec![a, b])
                } else {
                    let a = self.single_band_datum(n1, &mut rng)?;
                    let b = self.single_band_datum(n2, &mut rng)?;
                    Ok(vec![a, b])
                }
            }
        }
    }
}

/// `∫₀^T ∫_{T_λ} Π |S(t)φⱼ|^{pⱼ} dx dt`.
///
/// Space is integrated on a zero-padded grid large enough to be exact for the
/// band-limited integrand; time by the trapezoid rule on `samples` nodes.
pub fn space_time_integral(
    factors: &[(&SpectralField, u32)],
    alpha: f64,
    horizon: f64,
    samples: usize,
) -> Result<f64> {
    assert!(!factors.is_empty());
    let spec = *factors[0].0.spec();
    let k_data = factors
        .iter()
        .map(|(f, _)| spec.frequency(f.max_abs_index()))
        .fold(0.0, f64::max);
    let need = min_time_samples(horizon, k_data, alpha);
    if samples < need {
        return Err(invalid(format!(
            "{samples} time samples cannot resolve the fastest phase; need at least {need}"
        )));
    }
    let degree: i64 = factors
        .iter()
        .map(|(f, p)| f.max_abs_index() * *p as i64)
        .sum();
    let pts = next_pow2((degree + 1) as usize).max(spec.num_points());
    let h_x = spec.volume() / pts as f64;
    let dt = horizon / (samples - 1) as f64;

    struct Stream {
        slots: Vec<usize>,
        coeffs: Vec<Complex64>,
        step: Vec<Complex64>,
        power: u32,
    }
    let mut streams: Vec<Stream> = factors
        .iter()
        .map(|(f, p)| {
            let mut s = Stream {
                slots: Vec::new(),
                coeffs: Vec::new(),
                step: Vec::new(),
                power: *p,
            };
            for m in f.support() {
                s.slots.push(if m >= 0 {
                    m as usize
                } else {
                    (m + pts as i64) as usize
                });
                s.coeffs.push(f.coeff(m));
                s.step.push(Complex64::from_polar(
                    1.0,
                    dispersion(spec.frequency(m), alpha) * dt,
                ));
            }
            s
        })
        .collect();

    let mut total = KahanSum::default();
    let mut buf = vec![Complex64::new(0.0, 0.0); pts];
    let mut prod = vec![0.0; pts];
    for j in 0..samples {
        prod.iter_mut().for_each(|v| *v = 1.0);
        for s in &mut streams {
            buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for (slot, c) in s.slots.iter().zip(&s.coeffs) {
                buf[*slot] = *c;
            }
            inverse_in_place(&mut buf, spec.volume());
            for (v, z) in prod.iter_mut().zip(&buf) {
                let a2 = z.norm_sqr();
                *v *= match s.power {
                    2 => a2,
                    4 => a2 * a2,
                    6 => a2 * a2 * a2,
                    p => z.norm().powi(p as i32),
                };
            }
            for (c, st) in s.coeffs.iter_mut().zip(&s.step) {
                *c *= st;
            }
        }
        let spatial: f64 = prod.iter().sum::<f64>() * h_x;
        let w = if j == 0 || j == samples - 1 { 0.5 } else { 1.0 };
        total.add(w * spatial);
    }
    Ok(total.value() * dt)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub estimate: String,
    pub probe: StrichartzProbe,
    pub trials: usize,
    pub seed: u64,
    /// Space-time quantity over the data norms, before the `(T, N)` normalization.
    pub per_trial_raw: Vec<f64>,
    pub per_trial: Vec<f64>,
    pub normalization: f64,
    pub max_quotient: f64,
    pub max_raw: f64,
}

impl QuotientReport {
    fn from_raw(
        estimate: &str,
        probe: &StrichartzProbe,
        trials: usize,
        seed: u64,
        raw: Vec<f64>,
        normalization: f64,
    ) -> Self {
        let per_trial: Vec<f64> = raw.iter().map(|r| r / normalization).collect();
        Self {
            estimate: estimate.to_string(),
            probe: *probe,
            trials,
            seed,
            max_quotient: per_trial.iter().cloned().fold(0.0, f64::max),
            max_raw: raw.iter().cloned().fold(0.0, f64::max),
            per_trial,
            per_trial_raw: raw,
            normalization,
        }
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "trial,raw,quotient")?;
        for (i, (r, q)) in self.per_trial_raw.iter().zip(&self.per_trial).enumerate() {
            writeln!(out, "{i},{r:?},{q:?}")?;
        }
        Ok(())
    }
}

fn effective_trials(probe: &StrichartzProbe, trials: usize) -> Result<usize> {
    if trials == 0 {
        return Err(invalid("need at least one trial"));
    }
    Ok(if probe.data_kind == DataKind::RandomUnimodularPhases {
        trials
    } else {
        1
    })
}

/// `‖S(t)φ‖⁴_{L⁴([0,T]×T_λ)} / ((T/λ + T^{1/2}N^{1−α}) ‖φ‖⁴₂)`, max over trials.
pub fn strichartz_l4_quotient(
    probe: &StrichartzProbe,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<QuotientReport> {
    probe.validate()?;
    let n = match probe.band {
        ProbeBand::Dyadic { n } => n,
        ProbeBand::Pair { .. } => return Err(invalid("the L4 probe takes a single dyadic band")),
    };
    let trials = effective_trials(probe, trials)?;
    let raw = map_range(exec, trials, |i| -> Result<f64> {
        let phi = probe.datum(seed, i)?.remove(0);
        let num =
            space_time_integral(&[(&phi, 4)], probe.alpha, probe.horizon, probe.time_samples)?;
        Ok(num / phi.l2_norm().powi(4))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let t = probe.horizon;
    let norm = t / probe.torus.lambda() + t.sqrt() * n.powf(1.0 - probe.alpha);
    Ok(QuotientReport::from_raw(
        "l4", probe, trials, seed, raw, norm,
    ))
}

/// `‖Sφ₁ Sφ₂‖²_{L²} / ((T/λ + N₁^{1−2α}) ‖φ₁‖²₂ ‖φ₂‖²₂)`, max over trials.
pub fn bilinear_quotient(
    probe: &StrichartzProbe,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<QuotientReport> {
    probe.validate()?;
    let n1 = match probe.band {
        ProbeBand::Pair { n1, .. } => n1,
        ProbeBand::Dyadic { .. } => return Err(invalid("the bilinear probe takes a band pair")),
    };
    let trials = effective_trials(probe, trials)?;
    let raw = map_range(exec, trials, |i| -> Result<f64> {
        let d = probe.datum(seed, i)?;
        let num = space_time_integral(
            &[(&d[0], 2), (&d[1], 2)],
            probe.alpha,
            probe.horizon,
            probe.time_samples,
        )?;
        Ok(num / (d[0].l2_norm().powi(2) * d[1].l2_norm().powi(2)))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let norm = probe.horizon / probe.torus.lambda() + n1.powf(1.0 - 2.0 * probe.alpha);
    Ok(QuotientReport::from_raw(
        "bilinear", probe, trials, seed, raw, norm,
    ))
}

/// `‖Sφ‖_{L⁶} / (λ^ε (T/λ^{2α})^{1/6} N^{(1−α)/3+ε} ‖φ‖₂)` with `ε = 0.05`.
pub fn l6_quotient(
    probe: &StrichartzProbe,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<QuotientReport> {
    probe.validate()?;
    let n = match probe.band {
        ProbeBand::Dyadic { n } => n,
        ProbeBand::Pair { .. } => return Err(invalid("the L6 probe takes a single dyadic band")),
    };
    let lambda = probe.torus.lambda();
    let floor = lambda.powf(2.0 * probe.alpha);
    if probe.horizon < floor {
        return Err(Error::Precondition(format!(
            "the L6 estimate needs T >= lambda^(2 alpha) = {floor}, got {}",
            probe.horizon
        )));
    }
    let trials = effective_trials(probe, trials)?;
    let raw = map_range(exec, trials, |i| -> Result<f64> {
        let phi = probe.datum(seed, i)?.remove(0);
        let num =
            space_time_integral(&[(&phi, 6)], probe.alpha, probe.horizon, probe.time_samples)?;
        Ok(num.powf(1.0 / 6.0) / phi.l2_norm())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let eps = L6_EPSILON;
    let norm = lambda.powf(eps)
        * (probe.horizon / floor).powf(1.0 / 6.0)
        * n.powf((1.0 - probe.alpha) / 3.0 + eps);
    Ok(QuotientReport::from_raw(
        "l6", probe, trials, seed, raw, norm,
    ))
}

fn sharp_block_lengths(n1: f64, n2: f64, alpha: f64) -> (i64, i64) {
    let m1 = (n1 * n2).powf((2.0 * alpha - 1.0) / 2.0).floor() as i64;
    let m2 = n2.powf(2.0 * alpha - 1.0).floor() as i64;
    (m1, m2)
}

/// `φⱼ = Σ_{k=Nⱼ}^{Nⱼ+Mⱼ} e^{ikx}` with `M₁ = ⌊(N₁N₂)^{(2α−1)/2}⌋`, `M₂ = ⌊N₂^{2α−1}⌋`.
pub fn sharp_bilinear_example(
    n1: f64,
    n2: f64,
    alpha: f64,
    spec: TorusSpec,
) -> Result<(SpectralField, SpectralField)> {
    if n1 < 8.0 * n2 {
        return Err(invalid(format!(
            "the sharp example needs N1 >= 8 N2, got {n1}, {n2}"
        )));
    }
    let (m1, m2) = sharp_block_lengths(n1, n2, alpha);
    let vol = Complex64::new(spec.volume(), 0.0);
    let block = |n: f64, m: i64| -> Result<SpectralField> {
        let modes: Vec<(f64, Complex64)> = (0..=m).map(|j| (n + j as f64, vol)).collect();
        SpectralField::synthesize(spec, &modes)
    };
    Ok((block(n1, m1)?, block(n2, m2)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub n: f64,
    pub block_length: i64,
    /// `min |S(t)φ(x)| / M` over the sampled box.
    pub min_ratio: f64,
    pub points: usize,
}

/// Evaluates `|S(t)φ(x)|` on the box `0 ≤ t ≤ c/M²`,
/// `|x + 2αN^{2α−1}t| ≤ c/M` for the block `φ = Σ_{k=N}^{N+M} e^{ikx}`.
pub fn concentration_check(
    phi: &SpectralField,
    n: f64,
    block_length: i64,
    alpha: f64,
    c: f64,
) -> ConcentrationReport {
    let spec = *phi.spec();
    let m = block_length.max(1) as f64;
    let speed = 2.0 * alpha * n.powf(2.0 * alpha - 1.0);
    let modes: Vec<(f64, Complex64, f64)> = phi
        .support()
        .into_iter()
        .map(|j| {
            let k = spec.frequency(j);
            (k, phi.coeff(j), dispersion(k, alpha))
        })
        .collect();
    let mut min = f64::INFINITY;
    let mut points = 0;
    for it in 0..=8 {
        let t = c / (m * m) * it as f64 / 8.0;
        for ix in -8..=8 {
            let x = -speed * t + c / m * ix as f64 / 8.0;
            let u: Complex64 = modes
                .iter()
                .map(|&(k, a, w)| a * Complex64::from_polar(1.0, k * x + w * t))
                .sum::<Complex64>()
                * spec.weight();
            min = min.min(u.norm() / block_length.max(1) as f64);
            points += 1;
        }
    }
    ConcentrationReport {
        n,
        block_length,
        min_ratio: min,
        points,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    pub lambda: f64,
    pub alpha: f64,
    pub horizon: f64,
    pub n: f64,
    /// `∫∫|S_λφ|⁴ / ‖φ‖⁴` on `T_λ` over `[0, T]`.
    pub per_trial_lambda: Vec<f64>,
    /// `λ^{2α−1} ∫∫|Sf|⁴ / ‖f‖⁴` on `T` over `[0, λ^{−2α}T]`, `f(x) = φ(λx)`.
    pub per_trial_predicted: Vec<f64>,
    pub c_lambda: f64,
    pub c_lambda_predicted: f64,
    pub max_rel_err: f64,
}

/// Runs an `L⁴` probe on `T_λ` and, datum by datum, the dilated probe on the
/// standard circle, comparing through `C_λ(T, N) = λ^{2α−1} C₁(λ^{−2α}T, λN)`.
pub fn rescaling_transfer(
    probe: &StrichartzProbe,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<TransferReport> {
    probe.validate()?;
    let n = match probe.band {
        ProbeBand::Dyadic { n } => n,
        ProbeBand::Pair { .. } => return Err(invalid("the transfer check takes a single band")),
    };
    let lambda = probe.torus.lambda();
    let alpha = probe.alpha;
    let unit = TorusSpec::unit(probe.torus.num_points())?;
    let t1 = lambda.powf(-2.0 * alpha) * probe.horizon;
    let trials = effective_trials(probe, trials)?;
    let pairs = map_range(exec, trials, |i| -> Result<(f64, f64)> {
        let phi = probe.datum(seed, i)?.remove(0);
        let q_l = space_time_integral(&[(&phi, 4)], alpha, probe.horizon, probe.time_samples)?
            / phi.l2_norm().powi(4);
        let f = unit_dilation(&phi, unit)?;
        let q_1 =
            space_time_integral(&[(&f, 4)], alpha, t1, probe.time_samples)? / f.l2_norm().powi(4);
        Ok((q_l, lambda.powf(2.0 * alpha - 1.0) * q_1))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let (ql, qp): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let max_rel_err = ql
        .iter()
        .zip(&qp)
        .map(|(a, b)| (a - b).abs() / b.abs())
        .fold(0.0, f64::max);
    Ok(TransferReport {
        lambda,
        alpha,
        horizon: probe.horizon,
        n,
        c_lambda: ql.iter().cloned().fold(0.0, f64::max),
        c_lambda_predicted: qp.iter().cloned().fold(0.0, f64::max),
        per_trial_lambda: ql,
        per_trial_predicted: qp,
        max_rel_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    /// Exact space-time integral of `|Sφ|⁴` by closed-form time integration
    /// of every frequency quadruple.
    fn exact_l4(phi: &SpectralField, alpha: f64, t: f64) -> f64 {
        let spec = *phi.spec();
        let s = phi.support();
        let w = |m: i64| dispersion(spec.frequency(m), alpha);
        let mut total = Complex64::new(0.0, 0.0);
        for &a in &s {
            for &b in &s {
                for &c in &s {
                    let d = a + c - b;
                    let cd = phi.coeff(d);
                    if cd == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let psi = w(a) - w(b) + w(c) - w(d);
                    let time = if psi.abs() < 1e-300 {
                        Complex64::new(t, 0.0)
                    } else {
                        (Complex64::new(0.0, t * psi).exp() - 1.0) / Complex64::new(0.0, psi)
                    };
                    total += phi.coeff(a) * phi.coeff(b).conj() * phi.coeff(c) * cd.conj() * time;
                }
            }
        }
        total.re * spec.weight().powi(3)
    }

    #[test]
    fn trapezoid_matches_exact_time_integration() {
        let spec = TorusSpec::new(2.0, 64).unwrap();
        let probe = StrichartzProbe::new(
            spec,
            0.75,
            ProbeBand::Dyadic { n: 8.0 },
            1.0,
            DataKind::RandomUnimodularPhases,
        )
        .unwrap();
        let phi = probe.datum(3, 0).unwrap().remove(0);
        let exact = exact_l4(&phi, 0.75, 1.0);
        let coarse = space_time_integral(&[(&phi, 4)], 0.75, 1.0, probe.time_samples).unwrap();
        let fine = space_time_integral(&[(&phi, 4)], 0.75, 1.0, 8 * probe.time_samples).unwrap();
        assert!((fine - exact).abs() < 1e-3 * exact);
        assert!((coarse - exact).abs() < 5e-2 * exact);
    }

    #[test]
    fn single_mode_l4() {
        for &lambda in &[1.0, 2.0] {
            let spec = TorusSpec::new(lambda, 128).unwrap();
            let (t, n, alpha) = (0.7, 16.0, 0.75);
            let probe = StrichartzProbe::new(
                spec,
                alpha,
                ProbeBand::Dyadic { n },
                t,
                DataKind::SingleMode,
            )
            .unwrap();
            let rep = strichartz_l4_quotient(&probe, 5, 0, Exec::Sequential).unwrap();
            assert_eq!(rep.trials, 1);
            let vol = spec.volume();
            let exact = vol * t / ((t / lambda + t.sqrt() * n.powf(1.0 - alpha)) * vol * vol);
            assert!((rep.max_quotient - exact).abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn single_mode_bilinear_numerator() {
        let spec = TorusSpec::unit(128).unwrap();
        let probe = StrichartzProbe::new(
            spec,
            0.75,
            ProbeBand::Pair { n1: 32.0, n2: 4.0 },
            1.0,
            DataKind::SingleMode,
        )
        .unwrap();
        let d = probe.datum(0, 0).unwrap();
        let num =
            space_time_integral(&[(&d[0], 2), (&d[1], 2)], 0.75, 1.0, probe.time_samples).unwrap();
        assert!((num - TAU).abs() < 1e-12 * TAU);
    }

    #[test]
    fn single_mode_l6() {
        let spec = TorusSpec::unit(128).unwrap();
        let (t, n, alpha) = (1.0, 16.0, 0.6);
        let probe = StrichartzProbe::new(
            spec,
            alpha,
            ProbeBand::Dyadic { n },
            t,
            DataKind::SingleMode,
        )
        .unwrap();
        let rep = l6_quotient(&probe, 1, 0, Exec::Sequential).unwrap();
        // |Sφ| ≡ 1: ‖Sφ‖_{L⁶} = (2πT)^{1/6}, ‖φ‖₂ = (2π)^{1/2}
        let raw = (TAU * t).powf(1.0 / 6.0) / TAU.sqrt();
        let norm = t.powf(1.0 / 6.0) * n.powf((1.0 - alpha) / 3.0 + L6_EPSILON);
        assert!((rep.max_quotient - raw / norm).abs() < 1e-12 * raw / norm);
    }

    #[test]
    fn rejections() {
        let spec = TorusSpec::new(2.0, 128).unwrap();
        let p = StrichartzProbe::new(
            spec,
            0.75,
            ProbeBand::Dyadic { n: 8.0 },
            1.0,
            DataKind::SingleMode,
        )
        .unwrap();
        assert!(strichartz_l4_quotient(&p.with_time_samples(10), 1, 0, Exec::Sequential).is_err());
        assert!(matches!(
            l6_quotient(&p, 1, 0, Exec::Sequential),
            Err(Error::Precondition(_))
        ));
        assert!(StrichartzProbe::new(
            spec,
            0.75,
            ProbeBand::Pair { n1: 16.0, n2: 4.0 },
            1.0,
            DataKind::SingleMode
        )
        .is_err());
        assert!(StrichartzProbe::new(
            spec,
            0.75,
            ProbeBand::Dyadic { n: 64.0 },
            1.0,
            DataKind::SingleMode
        )
        .is_err());
    }

    #[test]
    fn sharp_example_blocks() {
        let spec = TorusSpec::unit(1024).unwrap();
        let (a, b) = sharp_bilinear_example(256.0, 16.0, 0.75, spec).unwrap();
        assert_eq!(a.support(), (256..=264).collect::<Vec<_>>());
        assert_eq!(b.support(), (16..=20).collect::<Vec<_>>());
        assert!((a.l2_norm().powi(2) - TAU * 9.0).abs() < 1e-10);
        assert!((b.l2_norm().powi(2) - TAU * 5.0).abs() < 1e-10);
        assert!(sharp_bilinear_example(256.0, 16.0, 0.75, TorusSpec::unit(512).unwrap()).is_err());
    }

    #[test]
    fn block_concentrates_along_its_ray() {
        let spec = TorusSpec::unit(2048).unwrap();
        let (a, b) = sharp_bilinear_example(512.0, 16.0, 0.75, spec).unwrap();
        let ra = concentration_check(&a, 512.0, 9, 0.75, 0.25);
        let rb = concentration_check(&b, 16.0, 4, 0.75, 0.25);
        assert!(ra.min_ratio > 0.5, "{ra:?}");
        assert!(rb.min_ratio > 0.5, "{rb:?}");
    }

    #[test]
    fn quotients_ignore_phase_and_translation() {
        let spec = TorusSpec::unit(256).unwrap();
        let (a, b) = sharp_bilinear_example(64.0, 8.0, 0.75, spec).unwrap();
        let samples = min_time_samples(1.0, 80.0, 0.75);
        let base = space_time_integral(&[(&a, 2), (&b, 2)], 0.75, 1.0, samples).unwrap();
        let shift = |f: &SpectralField, phase: f64| {
            f.map_indexed(|m, c| c * Complex64::from_polar(1.0, -0.37 * m as f64 + phase))
        };
        let (a2, b2) = (shift(&a, 2.1), shift(&b, -0.4));
        let other = space_time_integral(&[(&a2, 2), (&b2, 2)], 0.75, 1.0, samples).unwrap();
        assert!((base - other).abs() < 1e-12 * base, "{base} {other}");
    }

    #[test]
    fn transfer_is_exact_for_matched_samples() {
        let spec = TorusSpec::new(4.0, 128).unwrap();
        let probe = StrichartzProbe::new(
            spec,
            0.75,
            ProbeBand::Dyadic { n: 4.0 },
            1.0,
            DataKind::RandomUnimodularPhases,
        )
        .unwrap();
        let rep = rescaling_transfer(&probe, 4, 11, Exec::Sequential).unwrap();
        assert!(rep.max_rel_err < 1e-10, "{rep:?}");
    }

    #[test]
    fn deterministic_trials() {
        let spec = TorusSpec::unit(64).unwrap();
        let probe = StrichartzProbe::new(
            spec,
            0.75,
            ProbeBand::Dyadic { n: 8.0 },
            0.5,
            DataKind::RandomUnimodularPhases,
        )
        .unwrap();
        let a = strichartz_l4_quotient(&probe, 6, 5, Exec::Parallel).unwrap();
        let b = strichartz_l4_quotient(&probe, 6, 5, Exec::Sequential).unwrap();
        assert_eq!(a, b);
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 7);
    }
}
