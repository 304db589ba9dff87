//! Typed parameter blocks, one per experiment kind.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::DataKind;
use crate::imethod::{G1Variant, ModifiedEnergyParams};
use crate::spectral::TorusSpec;

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn default_snapshots() -> usize {
    32
}
fn default_trials() -> usize {
    64
}
fn default_g1() -> String {
    G1Variant::default().identifier().to_string()
}
fn default_dd_stride() -> u64 {
    100
}
fn default_data() -> DataKind {
    DataKind::RandomUnimodularPhases
}
fn default_n_list() -> Vec<u64> {
    vec![64, 128, 256, 512, 1024, 2048]
}
fn default_t_list() -> Vec<f64> {
    vec![0.01, 0.02, 0.04, 0.07, 0.1]
}
fn default_galilean_t() -> Vec<f64> {
    vec![0.01, 0.1]
}
fn default_picard_t() -> f64 {
    0.1
}
fn default_quad_nodes() -> usize {
    crate::dynamics::DEFAULT_QUAD_NODES
}
fn default_linearity_n() -> u64 {
    256
}
fn default_instances() -> usize {
    1000
}
fn default_modes() -> i64 {
    8
}
fn default_budget() -> f64 {
    crate::imethod::DEFAULT_BUDGET
}
fn default_band_hi() -> f64 {
    2.0
}
fn default_amplitude() -> f64 {
    0.05
}
fn default_track_snapshots() -> usize {
    16
}
fn default_concentration_c() -> f64 {
    0.25
}

pub(crate) fn from_table<T: DeserializeOwned>(table: &toml::Table) -> Result<T> {
    T::deserialize(toml::Value::Table(table.clone()))
        .map_err(|e| Error::Config(e.to_string().trim().to_string()))
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.5 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(cfg_err(format!("alpha must lie in (1/2, 1], got {alpha}")))
    }
}

fn check_torus(lambda: f64, num_points: usize) -> Result<TorusSpec> {
    TorusSpec::new(lambda, num_points).map_err(|e| cfg_err(e.to_string()))
}

pub(crate) fn g1_variant(id: &str) -> Result<G1Variant> {
    G1Variant::from_identifier(id).ok_or_else(|| {
        cfg_err(format!(
            "unknown g1 '{id}'; expected '{}' or '{}'",
            G1Variant::QuinticLogSmoothstep.identifier(),
            G1Variant::CubicHermiteLog.identifier()
        ))
    })
}

fn check_increasing(xs: &[f64], what: &str) -> Result<()> {
    if xs.len() < 2 {
        return Err(cfg_err(format!("{what} needs at least two entries")));
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) || xs[0] <= 0.0 {
        return Err(cfg_err(format!(
            "{what} must be positive and strictly increasing"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveParams {
    pub alpha: f64,
    #[serde(default = "one")]
    pub lambda: f64,
    pub num_points: usize,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_snapshots")]
    pub snapshots: usize,
    #[serde(default = "yes")]
    pub dealias: bool,
    #[serde(default)]
    pub s_values: Vec<f64>,
}

impl EvolveParams {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        check_torus(self.lambda, self.num_points)?;
        self.evolution()
            .validate()
            .map_err(|e| cfg_err(e.to_string()))
    }

    pub fn torus(&self) -> TorusSpec {
        TorusSpec::new(self.lambda, self.num_points).expect("validated")
    }

    pub fn evolution(&self) -> crate::dynamics::EvolutionConfig {
        crate::dynamics::EvolutionConfig::new(self.alpha, self.dt, self.t_end)
            .with_dealias(self.dealias)
            .with_snapshots(self.snapshots)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyTrackParams {
    pub alpha: f64,
    pub s: f64,
    pub n_values: Vec<f64>,
    #[serde(default = "one")]
    pub lambda: f64,
    pub num_points: usize,
    pub dt: f64,
    /// Length of the tracked window in rescaled time.
    #[serde(default = "one")]
    pub window: f64,
    #[serde(default = "default_track_snapshots")]
    pub snapshots: usize,
    /// The datum is a random-phase shell `band_lo·N ≤ |k| ≤ band_hi·N`.
    #[serde(default = "one")]
    pub band_lo: f64,
    #[serde(default = "default_band_hi")]
    pub band_hi: f64,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_g1")]
    pub g1: String,
    #[serde(default = "default_budget")]
    pub budget: f64,
}

impl EnergyTrackParams {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        let spec = check_torus(self.lambda, self.num_points)?;
        check_increasing(&self.n_values, "n_values")?;
        g1_variant(&self.g1)?;
        for &n in &self.n_values {
            self.imethod(n)?;
        }
        if !(self.window > self.dt && self.dt > 0.0) {
            return Err(cfg_err("need 0 < dt < window"));
        }
        if !(self.band_lo >= 0.0 && self.band_hi >= self.band_lo) {
            return Err(cfg_err("need 0 <= band_lo <= band_hi"));
        }
        let top = self.band_hi * self.n_values.last().copied().unwrap_or(0.0);
        let cut = crate::dynamics::dealias_cutoff(self.num_points) as f64 / self.lambda;
        if top > cut {
            return Err(cfg_err(format!(
                "the largest datum frequency {top} exceeds the dealiased range {cut}; raise num_points"
            )));
        }
        if self.budget <= 0.0 {
            return Err(cfg_err("budget must be positive"));
        }
        let _ = spec;
        Ok(())
    }

    pub fn imethod(&self, n: f64) -> Result<ModifiedEnergyParams> {
        Ok(ModifiedEnergyParams::new(self.alpha, self.s, n)
            .map_err(|e| cfg_err(e.to_string()))?
            .with_g1(g1_variant(&self.g1)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct M4ScanParams {
    pub alpha: f64,
    pub s: f64,
    pub n: f64,
    pub radius: i64,
    #[serde(default = "default_g1")]
    pub g1: String,
    #[serde(default = "default_dd_stride")]
    pub dd_stride: u64,
    /// Stride of the exported `k₁ = argmax` slice; defaults to `max(1, radius/64)`.
    #[serde(default)]
    pub slice_stride: Option<i64>,
}

impl M4ScanParams {
    pub fn validate(&self) -> Result<()> {
        self.imethod()?;
        if self.radius < 1 {
            return Err(cfg_err("radius must be >= 1"));
        }
        if self.dd_stride == 0 || self.slice_stride.is_some_and(|s| s < 1) {
            return Err(cfg_err("strides must be >= 1"));
        }
        Ok(())
    }

    pub fn imethod(&self) -> Result<ModifiedEnergyParams> {
        Ok(ModifiedEnergyParams::new(self.alpha, self.s, self.n)
            .map_err(|e| cfg_err(e.to_string()))?
            .with_g1(g1_variant(&self.g1)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexityParams {
    pub alpha: f64,
    pub radius: i64,
}

impl ConvexityParams {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.radius < 1 {
            return Err(cfg_err("radius must be >= 1"));
        }
        Ok(())
    }
}

/// Shared by the three Strichartz kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzParams {
    pub alpha: f64,
    #[serde(default = "one")]
    pub lambda: f64,
    pub num_points: usize,
    /// Dyadic scales `N` (or `N₁` for the bilinear kind).
    pub n_values: Vec<f64>,
    /// Low scale `N₂` of the bilinear kind.
    #[serde(default)]
    pub n2: Option<f64>,
    #[serde(default = "one")]
    pub horizon: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_data")]
    pub data: DataKind,
    #[serde(default)]
    pub time_samples: Option<usize>,
    /// Also run the `T_λ → T` transfer comparison (L⁴ kind only).
    #[serde(default)]
    pub transfer: bool,
}

impl StrichartzParams {
    pub fn validate(&self, bilinear: bool) -> Result<()> {
        check_alpha(self.alpha)?;
        check_torus(self.lambda, self.num_points)?;
        if self.n_values.is_empty() || self.n_values.iter().any(|n| !(*n > 0.0)) {
            return Err(cfg_err(
                "n_values must be a non-empty list of positive scales",
            ));
        }
        if self.n_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(cfg_err("n_values must be strictly increasing"));
        }
        if bilinear != self.n2.is_some() {
            return Err(cfg_err(if bilinear {
                "the bilinear kind needs n2"
            } else {
                "n2 only applies to the bilinear kind"
            }));
        }
        if self.trials == 0 {
            return Err(cfg_err("trials must be >= 1"));
        }
        if !(self.horizon > 0.0) {
            return Err(cfg_err("horizon must be positive"));
        }
        for &n in &self.n_values {
            self.probe(n).map_err(|e| cfg_err(e.to_string()))?;
        }
        Ok(())
    }

    pub fn probe(&self, n: f64) -> Result<crate::estimates::StrichartzProbe> {
        use crate::estimates::{ProbeBand, StrichartzProbe};
        let torus = TorusSpec::new(self.lambda, self.num_points)?;
        let band = match self.n2 {
            Some(n2) => ProbeBand::Pair { n1: n, n2 },
            None => ProbeBand::Dyadic { n },
        };
        let p = StrichartzProbe::new(torus, self.alpha, band, self.horizon, self.data)?;
        match self.time_samples {
            Some(k) => {
                let p = p.with_time_samples(k);
                p.validate()?;
                Ok(p)
            }
            None => Ok(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpExampleParams {
    pub alpha: f64,
    pub num_points: usize,
    pub n1_values: Vec<f64>,
    pub n2: f64,
    #[serde(default = "one")]
    pub horizon: f64,
    #[serde(default = "default_concentration_c")]
    pub concentration_c: f64,
}

impl SharpExampleParams {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        let spec = check_torus(1.0, self.num_points)?;
        check_increasing(&self.n1_values, "n1_values")?;
        for &n1 in &self.n1_values {
            crate::estimates::sharp_bilinear_example(n1, self.n2, self.alpha, spec)
                .map_err(|e| cfg_err(e.to_string()))?;
        }
        if !(self.horizon > 0.0 && self.concentration_c > 0.0) {
            return Err(cfg_err("horizon and concentration_c must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardParams {
    pub alpha: f64,
    pub s: f64,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<u64>,
    #[serde(default = "default_picard_t")]
    pub t: f64,
    #[serde(default = "default_quad_nodes")]
    pub quad_nodes: usize,
    #[serde(default = "default_t_list")]
    pub t_list: Vec<f64>,
    #[serde(default = "default_linearity_n")]
    pub linearity_n: u64,
}

impl PicardParams {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.n_list.len() < 2
            || self.n_list.windows(2).any(|w| w[1] <= w[0])
            || self.n_list[0] == 0
        {
            return Err(cfg_err(
                "n_list must hold at least two strictly increasing positive integers",
            ));
        }
        if !(self.t > 0.0 && self.t <= 0.1) {
            return Err(cfg_err(format!("t must lie in (0, 0.1], got {}", self.t)));
        }
        check_increasing(&self.t_list, "t_list")?;
        if self.t_list.iter().any(|&t| t > 0.1) {
            return Err(cfg_err("t_list entries must not exceed 0.1"));
        }
        if self.quad_nodes < 2 || self.linearity_n == 0 {
            return Err(cfg_err("need quad_nodes >= 2 and linearity_n >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalileanParams {
    pub alpha: f64,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<u64>,
    #[serde(default = "default_galilean_t")]
    pub t_list: Vec<f64>,
}

impl GalileanParams {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return Err(cfg_err("n_list must hold positive integers"));
        }
        if self.t_list.is_empty() || self.t_list.iter().any(|t| !t.is_finite()) {
            return Err(cfg_err("t_list must hold finite times"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominanceParams {
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default = "default_modes")]
    pub modes: i64,
}

impl DominanceParams {
    pub fn validate(&self) -> Result<()> {
        if self.instances == 0 || self.modes < 1 {
            return Err(cfg_err("need instances >= 1 and modes >= 1"));
        }
        Ok(())
    }
}
