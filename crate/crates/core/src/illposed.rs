//! Frequency-shifted block data and the growth of the first Picard iterate
//! below the pseudo-Galilean threshold `s_g = (1−α)/2`.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dd::DD;
use crate::dynamics::{duhamel_nonlinear, DEFAULT_QUAD_NODES};
use crate::error::{invalid, Error, Result};
use crate::fit::{fit_loglog, LineFit};
use crate::par::{map_range, Exec};
use crate::spectral::{dispersion, next_pow2, Factor, SpectralField, TorusSpec};

/// `⌊n^{1−α}⌋`, robust to `n^{1−α}` landing a hair below an integer.
pub fn block_length(n: u64, alpha: f64) -> i64 {
    ((n as f64).powf(1.0 - alpha) * (1.0 + 1e-12)).floor() as i64
}

#[derive(Debug, Clone, PartialEq)]
pub struct IllposedDatum {
    pub n: u64,
    pub s: f64,
    pub alpha: f64,
    pub l_n: i64,
    pub amplitude: f64,
    /// `u₀ = M_n f`, modes `n..=n+l_n`.
    pub field: SpectralField,
}

impl IllposedDatum {
    /// The unmodulated block `f` with modes `0..=l_n`, on the same torus.
    pub fn envelope(&self) -> SpectralField {
        let spec = *self.field.spec();
        let c = Complex64::new(self.amplitude * spec.volume(), 0.0);
        let modes: Vec<(i64, Complex64)> = (0..=self.l_n).map(|k| (k, c)).collect();
        SpectralField::from_modes(spec, &modes).expect("envelope fits wherever the datum does")
    }
}

/// Smallest power-of-two grid holding both the datum and its cubic image.
pub fn illposed_spec(n: u64, alpha: f64) -> TorusSpec {
    let top = n as i64 + 2 * block_length(n, alpha);
    TorusSpec::unit(next_pow2(2 * top as usize + 4)).expect("power of two grid")
}

/// `u₀ = n^{(α−1)/2−s} Σ_{k=0}^{l_n} e^{i(n+k)x}`.
pub fn build_illposed_data(n: u64, s: f64, alpha: f64, spec: TorusSpec) -> Result<IllposedDatum> {
    if n == 0 {
        return Err(invalid("carrier frequency n must be positive"));
    }
    if !(alpha > 0.5 && alpha <= 1.0) {
        return Err(invalid(format!("alpha must lie in (1/2, 1], got {alpha}")));
    }
    let l_n = block_length(n, alpha);
    let amplitude = (n as f64).powf((alpha - 1.0) / 2.0 - s);
    let c = Complex64::new(amplitude * spec.volume(), 0.0);
    let modes: Vec<(f64, Complex64)> = (0..=l_n).map(|k| ((n as i64 + k) as f64, c)).collect();
    let field = SpectralField::synthesize(spec, &modes)?;
    Ok(IllposedDatum {
        n,
        s,
        alpha,
        l_n,
        amplitude,
        field,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GalileanReport {
    /// `w = S(t)M_n f − e^{in^{2α}t} M_n G_{bt} f`.
    pub w: SpectralField,
    /// `max_k |ŵ(n+k)| / (|t| l² n^{2α−2} |f̂(k)|)`.
    pub max_ratio: f64,
    pub argmax: i64,
}

/// `|n+k|^{2α} − n^{2α} − 2αn^{2α−1}k`, evaluated in double-double since the
/// leading terms cancel to about `n^{2α−2}k²`.
fn galilean_phase_remainder(n: f64, k: f64, alpha: f64) -> f64 {
    let e = DD::from_f64(2.0 * alpha);
    let nd = DD::from_f64(n);
    let kd = DD::from_f64(k);
    let lead = nd.powf(e);
    let full = (nd + kd).abs().powf(e);
    let slope = e * nd.powf(e - DD::ONE);
    (full - lead - slope * kd).to_f64()
}

/// Splits `S(t)M_n f` into its Galilean approximation and the remainder `w`,
/// and reports the remainder against the bound `|t| l² n^{2α−2} |f̂(k)|`.
///
/// `f` lives on the unit circle and must be supported in `[−l, l]`;
/// the torus must also resolve `n + l`.
pub fn galilean_error(
    f: &SpectralField,
    n: i64,
    l: i64,
    t: f64,
    alpha: f64,
) -> Result<GalileanReport> {
    let spec = *f.spec();
    if spec.lambda() != 1.0 {
        return Err(invalid("the Galilean check runs on the unit circle"));
    }
    if l < 0 || n < l {
        return Err(invalid(format!("need 0 <= l <= n, got l = {l}, n = {n}")));
    }
    let support = f.support();
    if let Some(&k) = support.iter().find(|k| k.abs() > l) {
        return Err(Error::Precondition(format!(
            "f has a nonzero coefficient at k = {k}, outside [-{l}, {l}]"
        )));
    }
    if n + l > spec.max_index() {
        return Err(Error::BeyondResolution {
            k: (n + l) as f64,
            k_max: spec.k_max(),
        });
    }
    let nf = n as f64;
    let bound_scale = t.abs() * (l * l) as f64 * nf.powf(2.0 * alpha - 2.0);
    let mut w = SpectralField::zeros(spec);
    let mut max_ratio: f64 = 0.0;
    let mut argmax = 0;
    for k in support {
        let c = f.coeff(k);
        let theta = galilean_phase_remainder(nf, k as f64, alpha) * t;
        // e^{i|n+k|^{2α}t} − e^{in^{2α}t}e^{ikbt} = e^{i(n^{2α}+kb)t}(e^{iθ} − 1)
        let base =
            (dispersion(nf, alpha) + 2.0 * alpha * nf.powf(2.0 * alpha - 1.0) * k as f64) * t;
        let diff =
            Complex64::from_polar(1.0, base) * Complex64::new((theta).cos() - 1.0, theta.sin());
        let val = c * diff;
        w.set_coeff(n + k, val);
        if val.norm() > 0.0 {
            // |e^{iθ} − 1| = 2|sin(θ/2)|, free of the cancellation in cos θ − 1
            let ratio = 2.0 * (theta / 2.0).sin().abs() / bound_scale;
            if ratio > max_ratio {
                max_ratio = ratio;
                argmax = k;
            }
        }
    }
    Ok(GalileanReport {
        w,
        max_ratio,
        argmax,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub p: u32,
    pub q: u32,
    /// `‖f^p g^q‖₂`.
    pub lhs: f64,
    /// `‖f^{p+q}‖₂`.
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Re-embeds `f` on a grid whose products of order `order` are exact.
fn widen(f: &SpectralField, order: u32, reach: i64) -> SpectralField {
    let spec = *f.spec();
    let pts = next_pow2(2 * (order as usize * reach as usize + 2));
    let wide = spec
        .with_points(pts.max(spec.num_points()))
        .expect("even grid");
    let modes: Vec<(i64, Complex64)> = f.support().into_iter().map(|m| (m, f.coeff(m))).collect();
    SpectralField::from_modes(wide, &modes).expect("wide grid holds every mode")
}

/// Checks `‖f^p g^q‖₂ ≤ ‖f^{p+q}‖₂` for `f̂ ≥ 0` and `|ĝ| ≤ f̂`.
pub fn convolution_dominance_check(
    f: &SpectralField,
    g: &SpectralField,
    p: u32,
    q: u32,
) -> Result<DominanceReport> {
    if p == 0 || q == 0 {
        return Err(invalid("p and q must be positive"));
    }
    if f.spec() != g.spec() {
        return Err(invalid("f and g must live on the same torus"));
    }
    let scale = f.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let tol = 1e-14 * scale;
    for (m, c) in f.indexed() {
        if c.re < -tol || c.im.abs() > tol {
            return Err(Error::Precondition(format!(
                "f has coefficient {c} at k = {m}, not >= 0"
            )));
        }
        let gm = g.coeff(m).norm();
        if gm > c.re + tol {
            return Err(Error::Precondition(format!(
                "|g(k)| = {gm} exceeds f(k) = {} at k = {m}",
                c.re
            )));
        }
    }
    let reach = f.max_abs_index().max(g.max_abs_index());
    let (fw, gw) = (widen(f, p + q, reach), widen(g, p + q, reach));
    let mut lhs_factors: Vec<Factor> = (0..p).map(|_| Factor::plain(&fw)).collect();
    lhs_factors.extend((0..q).map(|_| Factor::plain(&gw)));
    let rhs_factors: Vec<Factor> = (0..p + q).map(|_| Factor::plain(&fw)).collect();
    let lhs = SpectralField::product(&lhs_factors).l2_norm();
    let rhs = SpectralField::product(&rhs_factors).l2_norm();
    Ok(DominanceReport {
        p,
        q,
        lhs,
        rhs,
        slack: rhs - lhs,
        holds: lhs <= rhs * (1.0 + 1e-12),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceSummary {
    pub instances: usize,
    pub violations: usize,
    /// Smallest `rhs/lhs` seen.
    pub min_margin: f64,
    pub reports: Vec<DominanceReport>,
}

/// Random instances `f̂ ∈ [0,1)`, `ĝ = f̂·ρ·e^{iθ}` with `ρ ∈ [0,1]`, cycling
/// `(p, q)` through `(1,1), (2,1), (1,2)`.
pub fn random_dominance_trials(
    instances: usize,
    modes: i64,
    seed: u64,
    exec: Exec,
) -> Result<DominanceSummary> {
    if modes < 1 {
        return Err(invalid("need at least one mode"));
    }
    const PAIRS: [(u32, u32); 3] = [(1, 1), (2, 1), (1, 2)];
    let spec = TorusSpec::unit(next_pow2(2 * modes as usize + 2))?;
    let reports = map_range(exec, instances, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let mut fm = Vec::new();
        let mut gm = Vec::new();
        for m in -modes..=modes {
            let a: f64 = rng.random();
            let rho: f64 = if i % 2 == 0 { 1.0 } else { rng.random() };
            let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            fm.push((m, Complex64::new(a, 0.0)));
            gm.push((m, Complex64::from_polar(a * rho, th)));
        }
        let f = SpectralField::from_modes(spec, &fm)?;
        let g = SpectralField::from_modes(spec, &gm)?;
        let (p, q) = PAIRS[i % 3];
        convolution_dominance_check(&f, &g, p, q)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(DominanceSummary {
        instances,
        violations: reports.iter().filter(|r| !r.holds).count(),
        min_margin: reports
            .iter()
            .filter(|r| r.lhs > 0.0)
            .map(|r| r.rhs / r.lhs)
            .fold(f64::INFINITY, f64::min),
        reports,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardConfig {
    pub s: f64,
    pub alpha: f64,
    pub n_list: Vec<u64>,
    pub t: f64,
    #[serde(default = "default_quad_nodes")]
    pub quad_nodes: usize,
}

fn default_quad_nodes() -> usize {
    DEFAULT_QUAD_NODES
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardRow {
    pub n: u64,
    pub l_n: i64,
    pub t: f64,
    pub hs_norm: f64,
    pub datum_hs_norm: f64,
    /// `t n^s ‖|f|²f‖₂`, the leading-order size of the iterate.
    pub model_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PicardReport {
    pub config: PicardConfig,
    pub rows: Vec<PicardRow>,
    /// `1 − α − 2s`.
    pub predicted_exponent: f64,
    pub raw_fit: LineFit,
    /// Slope of the model norm minus the predicted exponent: the part of the
    /// raw slope explained by the staircase `l_n = ⌊n^{1−α}⌋`.
    pub finite_size_correction: f64,
    pub corrected_exponent: f64,
}

impl PicardReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n,l_n,t,hs_norm,predicted_exponent,fitted_exponent")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{:?},{:?},{:?},{:?}",
                r.n, r.l_n, r.t, r.hs_norm, self.predicted_exponent, self.corrected_exponent
            )?;
        }
        Ok(())
    }
}

fn picard_row(n: u64, s: f64, alpha: f64, t: f64, nodes: usize) -> Result<PicardRow> {
    let spec = illposed_spec(n, alpha);
    let datum = build_illposed_data(n, s, alpha, spec)?;
    let iterate = duhamel_nonlinear(&datum.field, t, alpha, nodes)?;
    let env = datum.envelope();
    let model = t * (n as f64).powf(s) * env.cubic().l2_norm();
    Ok(PicardRow {
        n,
        l_n: datum.l_n,
        t,
        hs_norm: iterate.sobolev_norm(s),
        datum_hs_norm: datum.field.sobolev_norm(s),
        model_norm: model,
    })
}

fn check_picard(cfg: &PicardConfig) -> Result<()> {
    if !(cfg.t > 0.0 && cfg.t <= 0.1) {
        return Err(invalid(format!("t must lie in (0, 0.1], got {}", cfg.t)));
    }
    if cfg.n_list.len() < 2 {
        return Err(invalid("n_list needs at least two entries"));
    }
    if cfg.n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("n_list must be strictly increasing"));
    }
    if cfg.quad_nodes < 2 {
        return Err(invalid("quad_nodes must be at least 2"));
    }
    Ok(())
}

/// `‖∫₀^t S(t−t′)|S(t′)u₀|²S(t′)u₀ dt′‖_{H^s}` across `n`, with fitted exponent.
pub fn picard_growth_experiment(cfg: &PicardConfig, exec: Exec) -> Result<PicardReport> {
    check_picard(cfg)?;
    let rows = map_range(exec, cfg.n_list.len(), |i| {
        picard_row(cfg.n_list[i], cfg.s, cfg.alpha, cfg.t, cfg.quad_nodes)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let hs: Vec<f64> = rows.iter().map(|r| r.hs_norm).collect();
    let model: Vec<f64> = rows.iter().map(|r| r.model_norm).collect();
    let raw_fit = fit_loglog(&ns, &hs).ok_or(Error::NonFinite { step: 0 })?;
    let model_fit = fit_loglog(&ns, &model).ok_or(Error::NonFinite { step: 0 })?;
    let predicted = 1.0 - cfg.alpha - 2.0 * cfg.s;
    let correction = model_fit.slope - predicted;
    Ok(PicardReport {
        config: cfg.clone(),
        rows,
        predicted_exponent: predicted,
        raw_fit,
        finite_size_correction: correction,
        corrected_exponent: raw_fit.slope - correction,
    })
}

/// Slope of `log ‖iterate‖_{H^s}` against `log t` at a fixed carrier `n`.
pub fn picard_time_linearity(
    n: u64,
    s: f64,
    alpha: f64,
    ts: &[f64],
    exec: Exec,
) -> Result<LineFit> {
    if ts.iter().any(|&t| !(t > 0.0 && t <= 0.1)) {
        return Err(invalid("every t must lie in (0, 0.1]"));
    }
    let norms = map_range(exec, ts.len(), |i| {
        picard_row(n, s, alpha, ts[i], DEFAULT_QUAD_NODES).map(|r| r.hs_norm)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    fit_loglog(ts, &norms).ok_or_else(|| invalid("need at least two distinct times"))
}
