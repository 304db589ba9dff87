//! Modified-energy bookkeeping along trajectories and the choice of the
//! rescaling parameter.

use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{dealias_cutoff, evolve, mass, EvolutionConfig, StrangStepper};
use crate::error::{invalid, Error, Result};
use crate::fit::{fit_loglog, LineFit};
use crate::imethod::{
    apply_i, e1, e2, e2_minus_e1, e2_time_derivative, LambdaOptions, ModifiedEnergyParams,
};
use crate::spectral::{rescale_down, Band, SpectralField, TorusSpec};

/// `|E²(u) − E¹(u)| / ‖Iu‖⁴_{H^α}`.
pub fn e2_gap_ratio(
    u: &SpectralField,
    params: &ModifiedEnergyParams,
    opts: &LambdaOptions,
) -> Result<f64> {
    let d = e2_minus_e1(u, params, opts)?;
    let iu = apply_i(u, params, None)?.sobolev_norm(params.alpha);
    if iu == 0.0 {
        return Ok(0.0);
    }
    Ok(d.abs() / iu.powi(4))
}

/// `λ = N^{(α−s)/s} ‖u₀‖_{H^s}^{1/s}`.
pub fn choose_lambda(u0: &SpectralField, n: f64, s: f64, alpha: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(invalid(format!("the rescaling needs s > 0, got {s}")));
    }
    if !(n >= 1.0) {
        return Err(invalid(format!("N must be >= 1, got {n}")));
    }
    Ok(n.powf((alpha - s) / s) * u0.sobolev_norm(s).powf(1.0 / s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaSelection {
    pub n: f64,
    pub lambda: f64,
    pub hs_norm: f64,
    /// `E¹(u₀^λ)` on `T_λ`.
    pub e1: f64,
    /// `E¹(u₀^λ) λ^{2α−1}`.
    pub scaled: f64,
}

/// Picks `λ` for a datum on the unit circle, rescales it onto `T_λ` with the
/// same grid, and evaluates the first modified energy there.
pub fn lambda_selection(
    u0: &SpectralField,
    params: &ModifiedEnergyParams,
) -> Result<LambdaSelection> {
    if u0.spec().lambda() != 1.0 {
        return Err(invalid("the datum must live on the unit circle"));
    }
    let (alpha, s, n) = (params.alpha, params.s, params.n);
    let lambda = choose_lambda(u0, n, s, alpha)?;
    let target = TorusSpec::new(lambda.max(1.0), u0.spec().num_points())?;
    let v = rescale_down(u0, target, alpha)?;
    let e = e1(&v, params)?;
    Ok(LambdaSelection {
        n,
        lambda,
        hs_norm: u0.sobolev_norm(s),
        e1: e,
        scaled: e * lambda.powf(2.0 * alpha - 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityRow {
    pub t: f64,
    /// `(E²(t+h) − E²(t−h)) / 2h` along the discrete flow.
    pub centered_difference: f64,
    /// `Re (i/4)Λ₆(M₆; u(t))`.
    pub identity: f64,
    pub rel_err: f64,
}

/// Compares the centered difference of `E²` along a dealiased Strang
/// trajectory with the sextilinear expression for `dE²/dt`.
///
/// Times are given in steps: the difference uses states `h_steps` on either
/// side of each entry of `sample_steps`.
pub fn energy_derivative_check(
    u0: &SpectralField,
    params: &ModifiedEnergyParams,
    dt: f64,
    h_steps: usize,
    sample_steps: &[usize],
    opts: &LambdaOptions,
) -> Result<Vec<IdentityRow>> {
    let spec = *u0.spec();
    if h_steps == 0 || sample_steps.iter().any(|&s| s < h_steps) {
        return Err(invalid("every sample needs h_steps >= 1 steps of history"));
    }
    if sample_steps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("sample_steps must be strictly increasing"));
    }
    if u0.max_abs_index() > dealias_cutoff(spec.num_points()) {
        return Err(Error::Precondition(
            "datum exceeds the dealiased range".into(),
        ));
    }
    let last = sample_steps.last().map_or(0, |s| s + h_steps);
    let mut wanted: Vec<usize> = sample_steps
        .iter()
        .flat_map(|&s| [s - h_steps, s, s + h_steps])
        .collect();
    wanted.sort_unstable();
    wanted.dedup();
    let mut states = std::collections::BTreeMap::new();
    let mut stepper = StrangStepper::new(spec, params.alpha, dt, true);
    let mut coeffs = u0.coeffs().to_vec();
    if wanted.first() == Some(&0) {
        states.insert(0, u0.clone());
    }
    for step in 1..=last {
        stepper.step(&mut coeffs);
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite { step });
        }
        if wanted.binary_search(&step).is_ok() {
            states.insert(step, SpectralField::from_coeffs(spec, coeffs.clone())?);
        }
    }
    let h = h_steps as f64 * dt;
    sample_steps
        .iter()
        .map(|&s| {
            let ep = e2(&states[&(s + h_steps)], params, opts)?;
            let em = e2(&states[&(s - h_steps)], params, opts)?;
            let fd = (ep - em) / (2.0 * h);
            let id = e2_time_derivative(&states[&s], params, opts)?;
            Ok(IdentityRow {
                t: s as f64 * dt,
                centered_difference: fd,
                identity: id,
                rel_err: (fd - id).abs() / id.abs(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackRow {
    pub n: f64,
    pub t: f64,
    pub mass: f64,
    pub e1: f64,
    pub e2: f64,
    pub hs_norm: f64,
    pub iu_h_alpha: f64,
    pub e2_gap_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackSummary {
    pub n: f64,
    pub e1_drift: f64,
    pub e2_drift: f64,
    /// `|E²(T) − E²(0)| / max_t ‖Iu(t)‖⁶_{H^α}`.
    pub e2_drift_normalized: f64,
    pub max_gap_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrackReport {
    pub rows: Vec<TrackRow>,
    pub summaries: Vec<TrackSummary>,
    pub drift_fit: Option<LineFit>,
    pub gap_fit: Option<LineFit>,
}

impl TrackReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,t,mass,e1,e2,hs_norm,iu_h_alpha,e2_gap_ratio")?;
        for r in &self.rows {
            writeln!(
                out,
                "{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                r.n, r.t, r.mass, r.e1, r.e2, r.hs_norm, r.iu_h_alpha, r.e2_gap_ratio
            )?;
        }
        Ok(())
    }
}

fn max_abs_dev(xs: &[f64]) -> f64 {
    xs.iter().map(|x| (x - xs[0]).abs()).fold(0.0, f64::max)
}

/// Evolves one random-phase shell datum per `N` and samples `E¹`, `E²`, mass
/// and `H^s` along the way.
#[allow(clippy::too_many_arguments)]
pub fn energy_track(
    spec: TorusSpec,
    params_for: &dyn Fn(f64) -> Result<ModifiedEnergyParams>,
    n_values: &[f64],
    band: (f64, f64),
    amplitude: f64,
    evolution: &EvolutionConfig,
    opts: &LambdaOptions,
    seed: u64,
) -> Result<TrackReport> {
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    for (i, &n) in n_values.iter().enumerate() {
        let params = params_for(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let shell = Band::Shell {
            lo: band.0 * n,
            hi: band.1 * n,
        };
        let u0 = SpectralField::random_phases(spec, &shell, &mut rng)
            .scale(Complex64::new(amplitude * spec.volume(), 0.0));
        let traj = evolve(&u0, evolution)?;
        let mut e1s = Vec::new();
        let mut e2s = Vec::new();
        let mut ratios = Vec::new();
        let mut iu_max: f64 = 0.0;
        for (t, u) in traj.times.iter().zip(&traj.snapshots) {
            let a = e1(u, &params)?;
            let b = e2(u, &params, opts)?;
            let iu = apply_i(u, &params, None)?.sobolev_norm(params.alpha);
            let ratio = e2_gap_ratio(u, &params, opts)?;
            iu_max = iu_max.max(iu);
            rows.push(TrackRow {
                n,
                t: *t,
                mass: mass(u),
                e1: a,
                e2: b,
                hs_norm: u.sobolev_norm(params.s),
                iu_h_alpha: iu,
                e2_gap_ratio: ratio,
            });
            e1s.push(a);
            e2s.push(b);
            ratios.push(ratio);
        }
        let end = *e2s.last().expect("trajectory is never empty");
        summaries.push(TrackSummary {
            n,
            e1_drift: max_abs_dev(&e1s),
            e2_drift: max_abs_dev(&e2s),
            e2_drift_normalized: (end - e2s[0]).abs() / iu_max.powi(6),
            max_gap_ratio: ratios.iter().cloned().fold(0.0, f64::max),
        });
    }
    let ns: Vec<f64> = summaries.iter().map(|s| s.n).collect();
    let drift: Vec<f64> = summaries.iter().map(|s| s.e2_drift_normalized).collect();
    let gaps: Vec<f64> = summaries.iter().map(|s| s.max_gap_ratio).collect();
    Ok(TrackReport {
        drift_fit: fit_loglog(&ns, &drift),
        gap_fit: fit_loglog(&ns, &gaps),
        rows,
        summaries,
    })
}
