//! Declarative experiment runner: parse a config, validate it completely,
//! compute, and persist a report plus CSV and field artifacts.

mod energy;
mod params;

pub use energy::{
    choose_lambda, e2_gap_ratio, energy_derivative_check, energy_track, lambda_selection,
    IdentityRow, LambdaSelection, TrackReport, TrackRow, TrackSummary,
};
pub use params::{
    ConvexityParams, DominanceParams, EnergyTrackParams, EvolveParams, GalileanParams,
    M4ScanParams, PicardParams, SharpExampleParams, StrichartzParams,
};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::datum::DatumSpec;
use crate::error::{Error, Result};
use crate::imethod::{G1Variant, LambdaOptions};
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Evolve,
    EnergyTrack,
    M4Scan,
    ConvexityScan,
    StrichartzL4,
    StrichartzBilinear,
    StrichartzL6,
    SharpExample,
    PicardGrowth,
    Galilean,
    Dominance,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 11] = [
        ExperimentKind::Evolve,
        ExperimentKind::EnergyTrack,
        ExperimentKind::M4Scan,
        ExperimentKind::ConvexityScan,
        ExperimentKind::StrichartzL4,
        ExperimentKind::StrichartzBilinear,
        ExperimentKind::StrichartzL6,
        ExperimentKind::SharpExample,
        ExperimentKind::PicardGrowth,
        ExperimentKind::Galilean,
        ExperimentKind::Dominance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Evolve => "evolve",
            ExperimentKind::EnergyTrack => "energy_track",
            ExperimentKind::M4Scan => "m4_scan",
            ExperimentKind::ConvexityScan => "convexity_scan",
            ExperimentKind::StrichartzL4 => "strichartz_l4",
            ExperimentKind::StrichartzBilinear => "strichartz_bilinear",
            ExperimentKind::StrichartzL6 => "strichartz_l6",
            ExperimentKind::SharpExample => "sharp_example",
            ExperimentKind::PicardGrowth => "picard_growth",
            ExperimentKind::Galilean => "galilean",
            ExperimentKind::Dominance => "dominance",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            ExperimentKind::Evolve => {
                "Strang evolution of a datum; mass/energy drift and H^s norms"
            }
            ExperimentKind::EnergyTrack => {
                "E1/E2 along trajectories for several N; E2-E1 ratio scaling"
            }
            ExperimentKind::M4Scan => "exhaustive sup of |M4|/m(k3*)^2 over a frequency cube",
            ExperimentKind::ConvexityScan => {
                "resonance-function convexity ratio over a frequency cube"
            }
            ExperimentKind::StrichartzL4 => {
                "L4 space-time quotients over random or structured data"
            }
            ExperimentKind::StrichartzBilinear => {
                "bilinear L2 quotients for separated frequency bands"
            }
            ExperimentKind::StrichartzL6 => "L6 quotients with the epsilon-loss normalization",
            ExperimentKind::SharpExample => {
                "block exponential sums: quotients at T and T_w, concentration"
            }
            ExperimentKind::PicardGrowth => "H^s growth exponent of the first Picard iterate",
            ExperimentKind::Galilean => "certified remainder of the approximate Galilean identity",
            ExperimentKind::Dominance => "random checks of the convolution dominance inequality",
        }
    }

    /// Only `evolve` reads a `[datum]` section; every other kind rejects one.
    fn takes_datum(self) -> bool {
        self == ExperimentKind::Evolve
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub parameters: toml::Table,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datum: Option<DatumSpec>,
}

/// A config whose parameters have been parsed into the kind's typed block.
#[derive(Debug, Clone, PartialEq)]
pub enum Validated {
    Evolve(EvolveParams, DatumSpec),
    EnergyTrack(EnergyTrackParams),
    M4Scan(M4ScanParams),
    ConvexityScan(ConvexityParams),
    StrichartzL4(StrichartzParams),
    StrichartzBilinear(StrichartzParams),
    StrichartzL6(StrichartzParams),
    SharpExample(SharpExampleParams),
    PicardGrowth(PicardParams),
    Galilean(GalileanParams),
    Dominance(DominanceParams),
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim().to_string()))
    }

    /// Reads a config file; relative `output_dir` and datum paths are taken
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        if let Some(DatumSpec::File { path: p }) = &mut cfg.datum {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Checks every key of the kind before anything is computed.
    pub fn validate(&self) -> Result<Validated> {
        use params::from_table;
        let t = &self.parameters;
        if self.kind.takes_datum() != self.datum.is_some() {
            return Err(Error::Config(if self.kind.takes_datum() {
                format!("kind '{}' needs a [datum] section", self.kind.name())
            } else {
                format!("kind '{}' takes no [datum] section", self.kind.name())
            }));
        }
        let v = match self.kind {
            ExperimentKind::Evolve => {
                let p: EvolveParams = from_table(t)?;
                p.validate()?;
                let d = self.datum.clone().expect("checked above");
                d.validate().map_err(|e| Error::Config(e.to_string()))?;
                Validated::Evolve(p, d)
            }
            ExperimentKind::EnergyTrack => {
                let p: EnergyTrackParams = from_table(t)?;
                p.validate()?;
                Validated::EnergyTrack(p)
            }
            ExperimentKind::M4Scan => {
                let p: M4ScanParams = from_table(t)?;
                p.validate()?;
                Validated::M4Scan(p)
            }
            ExperimentKind::ConvexityScan => {
                let p: ConvexityParams = from_table(t)?;
                p.validate()?;
                Validated::ConvexityScan(p)
            }
            ExperimentKind::StrichartzL4
            | ExperimentKind::StrichartzL6
            | ExperimentKind::StrichartzBilinear => {
                let p: StrichartzParams = from_table(t)?;
                let bilinear = self.kind == ExperimentKind::StrichartzBilinear;
                p.validate(bilinear)?;
                if p.transfer && self.kind != ExperimentKind::StrichartzL4 {
                    return Err(Error::Config(
                        "transfer only applies to strichartz_l4".into(),
                    ));
                }
                if self.kind == ExperimentKind::StrichartzL6 {
                    let floor = p.lambda.powf(2.0 * p.alpha);
                    if p.horizon < floor {
                        return Err(Error::Config(format!(
                            "the L6 probe needs horizon >= lambda^(2 alpha) = {floor}"
                        )));
                    }
                }
                match self.kind {
                    ExperimentKind::StrichartzL4 => Validated::StrichartzL4(p),
                    ExperimentKind::StrichartzL6 => Validated::StrichartzL6(p),
                    _ => Validated::StrichartzBilinear(p),
                }
            }
            ExperimentKind::SharpExample => {
                let p: SharpExampleParams = from_table(t)?;
                p.validate()?;
                Validated::SharpExample(p)
            }
            ExperimentKind::PicardGrowth => {
                let p: PicardParams = from_table(t)?;
                p.validate()?;
                Validated::PicardGrowth(p)
            }
            ExperimentKind::Galilean => {
                let p: GalileanParams = from_table(t)?;
                p.validate()?;
                Validated::Galilean(p)
            }
            ExperimentKind::Dominance => {
                let p: DominanceParams = from_table(t)?;
                p.validate()?;
                Validated::Dominance(p)
            }
        };
        Ok(v)
    }

    /// Canonical serialization: JSON with sorted keys.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Git-style content address: `sha256("config <len>\0<canonical>")`.
    pub fn content_hash(&self) -> String {
        let body = self.canonical_json();
        let mut h = Sha256::new();
        h.update(format!("config {}\0", body.len()).as_bytes());
        h.update(body.as_bytes());
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub config: ExperimentConfig,
    pub input_hash: String,
    pub seed: u64,
    /// Identifier of the `g₁` interpolation in effect.
    pub g1: String,
    pub scalars: BTreeMap<String, f64>,
    pub details: serde_json::Value,
    pub artifacts: Vec<String>,
    pub duration_seconds: f64,
    pub version: String,
}

struct Outcome {
    g1: String,
    scalars: BTreeMap<String, f64>,
    details: serde_json::Value,
    artifacts: Vec<(String, Vec<u8>)>,
}

impl Outcome {
    fn new(details: impl Serialize) -> Result<Self> {
        Ok(Self {
            g1: G1Variant::default().identifier().to_string(),
            scalars: BTreeMap::new(),
            details: serde_json::to_value(details).map_err(|e| Error::Parse(e.to_string()))?,
            artifacts: Vec::new(),
        })
    }

    fn scalar(&mut self, key: &str, v: f64) -> &mut Self {
        self.scalars.insert(key.to_string(), v);
        self
    }

    fn artifact(&mut self, name: &str, bytes: Vec<u8>) -> &mut Self {
        self.artifacts.push((name.to_string(), bytes));
        self
    }
}

fn field_bytes(f: &crate::spectral::SpectralField, alpha: Option<f64>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    crate::spectral::write_field_text(f, alpha, &mut buf)?;
    Ok(buf)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    crate::fit::fit_loglog(xs, ys).map_or(f64::NAN, |f| f.slope)
}

fn compute(v: &Validated, seed: u64, exec: Exec) -> Result<Outcome> {
    use crate::estimates as est;
    use crate::illposed as ill;
    match v {
        Validated::Evolve(p, datum) => {
            let spec = p.torus();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u0 = datum.build(spec, &mut rng)?;
            let traj = crate::dynamics::evolve(&u0, &p.evolution())?;
            let mut csv = Vec::new();
            traj.write_csv(&p.s_values, &mut csv)?;
            let mut o = Outcome::new(serde_json::json!({
                "times": traj.times,
                "mass": traj.mass,
                "energy": traj.energy,
            }))?;
            o.scalar("steps", p.evolution().num_steps() as f64)
                .scalar("effective_dt", traj.dt)
                .scalar("stiffness", traj.stiffness)
                .scalar("max_mass_drift", traj.max_mass_drift())
                .scalar("max_energy_drift", traj.max_energy_drift())
                .scalar("final_time", *traj.times.last().expect("nonempty"))
                .artifact("trajectory.csv", csv)
                .artifact("initial_field.txt", field_bytes(&u0, Some(p.alpha))?)
                .artifact(
                    "final_field.txt",
                    field_bytes(traj.final_state(), Some(p.alpha))?,
                );
            Ok(o)
        }
        Validated::EnergyTrack(p) => {
            let spec = crate::spectral::TorusSpec::new(p.lambda, p.num_points)?;
            let evo = crate::dynamics::EvolutionConfig::new(p.alpha, p.dt, p.window)
                .with_snapshots(p.snapshots);
            let opts = LambdaOptions {
                budget: p.budget,
                exec,
            };
            let rep = energy_track(
                spec,
                &|n| p.imethod(n),
                &p.n_values,
                (p.band_lo, p.band_hi),
                p.amplitude,
                &evo,
                &opts,
                seed,
            )?;
            let mut csv = Vec::new();
            rep.write_csv(&mut csv)?;
            let mut o = Outcome::new(&rep)?;
            o.g1 = p.g1.clone();
            o.scalar("gap_slope", rep.gap_fit.map_or(f64::NAN, |f| f.slope))
                .scalar(
                    "e2_drift_slope",
                    rep.drift_fit.map_or(f64::NAN, |f| f.slope),
                );
            for s in &rep.summaries {
                o.scalar(&format!("e1_drift[N={}]", s.n), s.e1_drift)
                    .scalar(&format!("e2_drift[N={}]", s.n), s.e2_drift)
                    .scalar(&format!("max_gap_ratio[N={}]", s.n), s.max_gap_ratio);
            }
            o.artifact("energy_track.csv", csv);
            Ok(o)
        }
        Validated::M4Scan(p) => {
            let params = p.imethod()?;
            let mut opts = crate::imethod::M4ScanOptions::new(p.radius);
            opts.exec = exec;
            opts.dd_stride = p.dd_stride;
            let rep = crate::imethod::m4_scan(&params, &opts)?;
            let stride = p.slice_stride.unwrap_or((p.radius / 64).max(1));
            let mut csv = Vec::new();
            crate::imethod::write_m4_slice_csv(
                &params,
                rep.argmax[0],
                p.radius,
                stride as usize,
                &mut csv,
            )?;
            let mut o = Outcome::new(&rep)?;
            o.g1 = p.g1.clone();
            o.scalar("sup_ratio", rep.sup_ratio)
                .scalar("evaluations", rep.evaluations as f64)
                .scalar("resonant", rep.resonant as f64)
                .scalar("dd_checked", rep.dd_checked as f64)
                .scalar("dd_max_ratio_error", rep.dd_max_ratio_error)
                .artifact("m4_slice.csv", csv);
            for (i, k) in rep.argmax.iter().enumerate() {
                o.scalar(&format!("argmax_k{}", i + 1), *k as f64);
            }
            Ok(o)
        }
        Validated::ConvexityScan(p) => {
            let rep = est::convexity_gap_check(p.radius, p.alpha, exec)?;
            let mut o = Outcome::new(&rep)?;
            o.scalar("min_ratio", rep.min_ratio)
                .scalar("max_ratio", rep.max_ratio)
                .scalar("admissible", rep.admissible as f64);
            Ok(o)
        }
        Validated::StrichartzL4(p)
        | Validated::StrichartzL6(p)
        | Validated::StrichartzBilinear(p) => {
            let mut reports = Vec::new();
            for &n in &p.n_values {
                let probe = p.probe(n)?;
                let rep = match v {
                    Validated::StrichartzL4(_) => {
                        est::strichartz_l4_quotient(&probe, p.trials, seed, exec)?
                    }
                    Validated::StrichartzL6(_) => est::l6_quotient(&probe, p.trials, seed, exec)?,
                    _ => est::bilinear_quotient(&probe, p.trials, seed, exec)?,
                };
                reports.push(rep);
            }
            let mut csv = String::from("n,trial,raw,quotient\n");
            for (n, r) in p.n_values.iter().zip(&reports) {
                for (i, (a, b)) in r.per_trial_raw.iter().zip(&r.per_trial).enumerate() {
                    writeln!(csv, "{n:?},{i},{a:?},{b:?}").expect("string write");
                }
            }
            let maxq: Vec<f64> = reports.iter().map(|r| r.max_quotient).collect();
            let maxr: Vec<f64> = reports.iter().map(|r| r.max_raw).collect();
            let transfer = if p.transfer {
                Some(est::rescaling_transfer(
                    &p.probe(p.n_values[0])?,
                    p.trials,
                    seed,
                    exec,
                )?)
            } else {
                None
            };
            let mut o =
                Outcome::new(serde_json::json!({ "reports": reports, "transfer": transfer }))?;
            o.scalar("max_quotient", maxq.iter().cloned().fold(0.0, f64::max))
                .artifact("quotients.csv", csv.into_bytes());
            if p.n_values.len() >= 2 {
                o.scalar("quotient_slope", slope(&p.n_values, &maxq))
                    .scalar("raw_slope", slope(&p.n_values, &maxr));
            }
            if let Some(t) = transfer {
                o.scalar("transfer_c_lambda", t.c_lambda)
                    .scalar("transfer_c_lambda_predicted", t.c_lambda_predicted)
                    .scalar("transfer_max_rel_err", t.max_rel_err);
            }
            Ok(o)
        }
        Validated::SharpExample(p) => {
            let spec = crate::spectral::TorusSpec::unit(p.num_points)?;
            let mut rows = Vec::new();
            let mut o_art = Vec::new();
            let mut csv =
                String::from("n1,n2,m1,m2,quotient_T,raw_Tw,concentration_1,concentration_2\n");
            for &n1 in &p.n1_values {
                let (a, b) = est::sharp_bilinear_example(n1, p.n2, p.alpha, spec)?;
                let m1 = a.support().len() as i64 - 1;
                let m2 = b.support().len() as i64 - 1;
                let band = est::ProbeBand::Pair { n1, n2: p.n2 };
                let kind = est::DataKind::BlockExponentialSum;
                let at_t = est::bilinear_quotient(
                    &est::StrichartzProbe::new(spec, p.alpha, band, p.horizon, kind)?,
                    1,
                    0,
                    exec,
                )?;
                let tw = (n1 * p.n2).powf(1.0 - 2.0 * p.alpha);
                let at_tw = est::bilinear_quotient(
                    &est::StrichartzProbe::new(spec, p.alpha, band, tw, kind)?,
                    1,
                    0,
                    exec,
                )?;
                let c1 = est::concentration_check(&a, n1, m1, p.alpha, p.concentration_c);
                let c2 = est::concentration_check(&b, p.n2, m2, p.alpha, p.concentration_c);
                writeln!(
                    csv,
                    "{n1:?},{:?},{m1},{m2},{:?},{:?},{:?},{:?}",
                    p.n2, at_t.max_quotient, at_tw.max_raw, c1.min_ratio, c2.min_ratio
                )
                .expect("string write");
                o_art.push((format!("phi1_n1_{n1}.txt"), field_bytes(&a, Some(p.alpha))?));
                if rows.is_empty() {
                    o_art.push(("phi2.txt".to_string(), field_bytes(&b, Some(p.alpha))?));
                }
                rows.push(serde_json::json!({
                    "n1": n1, "m1": m1, "m2": m2, "t_w": tw,
                    "quotient_t": at_t.max_quotient, "raw_t_w": at_tw.max_raw,
                    "concentration_1": c1, "concentration_2": c2,
                }));
            }
            let raws: Vec<f64> = rows
                .iter()
                .map(|r| r["raw_t_w"].as_f64().unwrap_or(f64::NAN))
                .collect();
            let mut o = Outcome::new(&rows)?;
            o.scalar("t_w_slope", slope(&p.n1_values, &raws))
                .scalar("predicted_t_w_slope", 1.0 - 2.0 * p.alpha)
                .artifact("sharp_example.csv", csv.into_bytes());
            for (name, bytes) in o_art {
                o.artifact(&name, bytes);
            }
            Ok(o)
        }
        Validated::PicardGrowth(p) => {
            let cfg = ill::PicardConfig {
                s: p.s,
                alpha: p.alpha,
                n_list: p.n_list.clone(),
                t: p.t,
                quad_nodes: p.quad_nodes,
            };
            let rep = ill::picard_growth_experiment(&cfg, exec)?;
            let lin = ill::picard_time_linearity(p.linearity_n, p.s, p.alpha, &p.t_list, exec)?;
            let mut csv = Vec::new();
            rep.write_csv(&mut csv)?;
            let mut o = Outcome::new(serde_json::json!({ "growth": rep, "t_linearity": lin }))?;
            o.scalar("predicted_exponent", rep.predicted_exponent)
                .scalar("raw_exponent", rep.raw_fit.slope)
                .scalar("raw_exponent_ci95", rep.raw_fit.slope_ci95())
                .scalar("finite_size_correction", rep.finite_size_correction)
                .scalar("corrected_exponent", rep.corrected_exponent)
                .scalar("t_linearity_slope", lin.slope)
                .scalar("t_linearity_ci95", lin.slope_ci95())
                .artifact("picard.csv", csv);
            Ok(o)
        }
        Validated::Galilean(p) => {
            let mut csv = String::from("n,l_n,t,max_ratio\n");
            let mut worst: f64 = 0.0;
            let mut rows = Vec::new();
            for &n in &p.n_list {
                let spec = ill::illposed_spec(n, p.alpha);
                let d = ill::build_illposed_data(n, 0.0, p.alpha, spec)?;
                for &t in &p.t_list {
                    let r = ill::galilean_error(&d.envelope(), n as i64, d.l_n, t, p.alpha)?;
                    writeln!(csv, "{n},{},{t:?},{:?}", d.l_n, r.max_ratio).expect("string write");
                    worst = worst.max(r.max_ratio);
                    rows.push(serde_json::json!({ "n": n, "l_n": d.l_n, "t": t, "max_ratio": r.max_ratio }));
                }
            }
            let mut o = Outcome::new(&rows)?;
            o.scalar("max_ratio", worst)
                .artifact("galilean.csv", csv.into_bytes());
            Ok(o)
        }
        Validated::Dominance(p) => {
            let s = ill::random_dominance_trials(p.instances, p.modes, seed, exec)?;
            let mut csv = String::from("instance,p,q,lhs,rhs\n");
            for (i, r) in s.reports.iter().enumerate() {
                writeln!(csv, "{i},{},{},{:?},{:?}", r.p, r.q, r.lhs, r.rhs).expect("string write");
            }
            let mut o = Outcome::new(serde_json::json!({
                "instances": s.instances, "violations": s.violations, "min_margin": s.min_margin,
            }))?;
            o.scalar("instances", s.instances as f64)
                .scalar("violations", s.violations as f64)
                .scalar("min_margin", s.min_margin)
                .artifact("dominance.csv", csv.into_bytes());
            Ok(o)
        }
    }
}

/// Writes `bytes` to `dir/name` through a temporary file and a rename.
fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name))
        .map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Validates, computes and persists. Nothing is written unless the whole
/// computation succeeds; `report.json` is written last.
pub fn run_config(cfg: &ExperimentConfig, exec: Exec) -> Result<ExperimentReport> {
    let v = cfg.validate()?;
    let start = Instant::now();
    let outcome = compute(&v, cfg.seed, exec)?;
    let duration = start.elapsed().as_secs_f64();

    std::fs::create_dir_all(&cfg.output_dir)?;
    let mut artifacts = Vec::new();
    let echo = toml::to_string(cfg).map_err(|e| Error::Config(e.to_string()))?;
    let mut all = outcome.artifacts;
    all.push(("config.toml".to_string(), echo.into_bytes()));
    for (name, bytes) in &all {
        write_atomic(&cfg.output_dir, name, bytes)?;
        artifacts.push(name.clone());
    }
    let report = ExperimentReport {
        kind: cfg.kind,
        config: cfg.clone(),
        input_hash: cfg.content_hash(),
        seed: cfg.seed,
        g1: outcome.g1,
        scalars: outcome.scalars,
        details: outcome.details,
        artifacts,
        duration_seconds: duration,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let json = serde_json::to_vec_pretty(&report).map_err(|e| Error::Parse(e.to_string()))?;
    write_atomic(&cfg.output_dir, "report.json", &json)?;
    Ok(report)
}

/// [`ExperimentConfig::load`] followed by [`run_config`].
pub fn run(path: &Path, exec: Exec) -> Result<ExperimentReport> {
    run_config(&ExperimentConfig::load(path)?, exec)
}

/// Default location of the report for a config.
pub fn report_path(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_dir.join("report.json")
}
