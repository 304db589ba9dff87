//! Time integration of `∂ₜu = i(−Δ)^α u + i|u|²u` on `T_λ` and its Duhamel form.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quad::gauss_legendre_on;
use crate::spectral::{dispersion, forward_in_place, inverse_in_place, SpectralField, TorusSpec};

/// Mass `‖u‖_{L²}`.
pub fn mass(f: &SpectralField) -> f64 {
    f.l2_norm()
}

/// Quadratic part `½‖(−Δ)^{α/2}u‖²`.
pub fn kinetic_energy(f: &SpectralField, alpha: f64) -> f64 {
    let spec = f.spec();
    let sum: f64 = f
        .indexed()
        .map(|(m, c)| dispersion(spec.frequency(m), alpha) * c.norm_sqr())
        .sum();
    0.5 * spec.weight() * sum
}

/// Hamiltonian `E(u) = ½‖(−Δ)^{α/2}u‖² + ¼‖u‖⁴_{L⁴}`; the quartic term is
/// integrated exactly on a padded grid.
pub fn energy(f: &SpectralField, alpha: f64) -> f64 {
    kinetic_energy(f, alpha) + 0.25 * f.integral_abs_pow(4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    #[default]
    Strang,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub alpha: f64,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_true")]
    pub dealias: bool,
    #[serde(default = "default_snapshots")]
    pub snapshots: usize,
    #[serde(default)]
    pub scheme: Scheme,
}

fn default_true() -> bool {
    true
}

fn default_snapshots() -> usize {
    32
}

impl EvolutionConfig {
    pub fn new(alpha: f64, dt: f64, t_end: f64) -> Self {
        Self {
            alpha,
            dt,
            t_end,
            dealias: true,
            snapshots: default_snapshots(),
            scheme: Scheme::Strang,
        }
    }

    pub fn with_dealias(mut self, on: bool) -> Self {
        self.dealias = on;
        self
    }

    pub fn with_snapshots(mut self, n: usize) -> Self {
        self.snapshots = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.5 && self.alpha <= 1.0) {
            return Err(invalid(format!(
                "alpha must lie in (1/2, 1], got {}",
                self.alpha
            )));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid("dt must be positive"));
        }
        if !(self.t_end > self.dt) || !self.t_end.is_finite() {
            return Err(invalid("t_end must exceed dt"));
        }
        if self.snapshots == 0 {
            return Err(invalid("need at least one snapshot"));
        }
        Ok(())
    }

    /// Number of steps; the step is shrunk slightly so they tile `[0, t_end]`.
    pub fn num_steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize
    }

    pub fn effective_dt(&self) -> f64 {
        self.t_end / self.num_steps() as f64
    }

    /// `dt · K_max^{2α}`, the phase advance of the fastest stored mode per step.
    pub fn stiffness(&self, spec: &TorusSpec) -> f64 {
        self.effective_dt() * dispersion(spec.k_max(), self.alpha)
    }
}

/// Largest index kept by the 2/3 rule on a grid of `p` points.
pub fn dealias_cutoff(p: usize) -> i64 {
    // keep |m| < P/3
    ((p as i64) - 1) / 3
}

/// One Strang step `L(dt/2) N(dt) L(dt/2)` with exact sub-flows.
pub struct StrangStepper {
    spec: TorusSpec,
    half_phase: Vec<Complex64>,
    keep: Vec<bool>,
    buf: Vec<Complex64>,
    dt: f64,
}

impl StrangStepper {
    pub fn new(spec: TorusSpec, alpha: f64, dt: f64, dealias: bool) -> Self {
        let cut = dealias_cutoff(spec.num_points());
        let mut half_phase = Vec::with_capacity(spec.num_points());
        let mut keep = Vec::with_capacity(spec.num_points());
        for slot in 0..spec.num_points() {
            let m = spec.index_of_slot(slot);
            let w = dispersion(spec.frequency(m), alpha);
            half_phase.push(Complex64::from_polar(1.0, 0.5 * w * dt));
            keep.push(!dealias || m.abs() <= cut);
        }
        Self {
            spec,
            half_phase,
            keep,
            buf: vec![Complex64::new(0.0, 0.0); spec.num_points()],
            dt,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&mut self, coeffs: &mut [Complex64]) {
        for (c, p) in coeffs.iter_mut().zip(&self.half_phase) {
            *c *= p;
        }
        self.buf.copy_from_slice(coeffs);
        inverse_in_place(&mut self.buf, self.spec.volume());
        for z in self.buf.iter_mut() {
            *z *= Complex64::from_polar(1.0, z.norm_sqr() * self.dt);
        }
        forward_in_place(&mut self.buf, self.spec.volume());
        for ((c, z), (p, keep)) in coeffs
            .iter_mut()
            .zip(&self.buf)
            .zip(self.half_phase.iter().zip(&self.keep))
        {
            *c = if *keep {
                z * p
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
    }
}

/// Saved states of one run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub alpha: f64,
    pub dt: f64,
    pub times: Vec<f64>,
    pub snapshots: Vec<SpectralField>,
    pub mass: Vec<f64>,
    pub energy: Vec<f64>,
    pub stiffness: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &SpectralField {
        self.snapshots.last().expect("trajectory is never empty")
    }

    /// `max_j |M(t_j) − M(0)| / M(0)`.
    pub fn max_mass_drift(&self) -> f64 {
        max_relative_drift(&self.mass)
    }

    /// `max_j |E(t_j) − E(0)| / E(0)`.
    pub fn max_energy_drift(&self) -> f64 {
        max_relative_drift(&self.energy)
    }

    /// CSV with columns `t,mass,energy,h_s_norm(s)` for each requested `s`.
    pub fn write_csv<W: Write>(&self, s_values: &[f64], mut out: W) -> Result<()> {
        write!(out, "t,mass,energy")?;
        for s in s_values {
            write!(out, ",h_s_norm({s})")?;
        }
        writeln!(out)?;
        for (j, t) in self.times.iter().enumerate() {
            write!(out, "{t:?},{:?},{:?}", self.mass[j], self.energy[j])?;
            for &s in s_values {
                write!(out, ",{:?}", self.snapshots[j].sobolev_norm(s))?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn max_relative_drift(xs: &[f64]) -> f64 {
    let x0 = xs[0];
    let scale = if x0 == 0.0 { 1.0 } else { x0.abs() };
    xs.iter()
        .map(|x| (x - x0).abs() / scale)
        .fold(0.0, f64::max)
}

/// Integrates the flow with Strang splitting.
///
/// Snapshots are taken at `t = 0` and at `cfg.snapshots` evenly spaced step
/// indices ending at `t_end`.
pub fn evolve(u0: &SpectralField, cfg: &EvolutionConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let spec = *u0.spec();
    if cfg.dealias && u0.max_abs_index() > dealias_cutoff(spec.num_points()) {
        return Err(Error::Precondition(format!(
            "initial datum reaches index {} but the 2/3 rule keeps |m| <= {}",
            u0.max_abs_index(),
            dealias_cutoff(spec.num_points())
        )));
    }
    let steps = cfg.num_steps();
    let dt = cfg.effective_dt();
    let n_snap = cfg.snapshots.min(steps);
    let marks: Vec<usize> = (1..=n_snap)
        .map(|j| ((j as f64 * steps as f64) / n_snap as f64).round() as usize)
        .collect();

    let mut stepper = StrangStepper::new(spec, cfg.alpha, dt, cfg.dealias);
    let mut coeffs = u0.coeffs().to_vec();
    let mut traj = Trajectory {
        alpha: cfg.alpha,
        dt,
        times: vec![0.0],
        snapshots: vec![u0.clone()],
        mass: vec![mass(u0)],
        energy: vec![energy(u0, cfg.alpha)],
        stiffness: cfg.stiffness(&spec),
    };
    let mut next = 0;
    for step in 1..=steps {
        stepper.step(&mut coeffs);
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite { step });
        }
        if next < marks.len() && step == marks[next] {
            let f = SpectralField::from_coeffs(spec, coeffs.clone())?;
            traj.times.push(step as f64 * dt);
            traj.mass.push(mass(&f));
            traj.energy.push(energy(&f, cfg.alpha));
            traj.snapshots.push(f);
            next += 1;
        }
    }
    Ok(traj)
}

/// `i∫₀^t S(t−t′) |S(t′)u₀|² S(t′)u₀ dt′` by Gauss–Legendre quadrature in `t′`,
/// each cubic product evaluated without aliasing.
pub fn duhamel_nonlinear(
    u0: &SpectralField,
    t: f64,
    alpha: f64,
    quad_nodes: usize,
) -> Result<SpectralField> {
    duhamel_nonlinear_panels(u0, t, alpha, quad_nodes, 1)
}

/// Composite version of [`duhamel_nonlinear`] with `panels` equal sub-intervals.
pub fn duhamel_nonlinear_panels(
    u0: &SpectralField,
    t: f64,
    alpha: f64,
    quad_nodes: usize,
    panels: usize,
) -> Result<SpectralField> {
    if quad_nodes < 2 {
        return Err(invalid("duhamel quadrature needs at least 2 nodes"));
    }
    if panels == 0 {
        return Err(invalid("need at least one panel"));
    }
    let spec = *u0.spec();
    let mut acc = SpectralField::zeros(spec);
    if t == 0.0 || u0.support().is_empty() {
        return Ok(acc);
    }
    let h = t / panels as f64;
    for p in 0..panels {
        for (tp, w) in gauss_legendre_on(quad_nodes, p as f64 * h, (p + 1) as f64 * h) {
            let v = u0.propagate(tp, alpha);
            let term = v.cubic().propagate(t - tp, alpha);
            for (a, b) in acc.coeffs_mut().iter_mut().zip(term.coeffs()) {
                *a += b * w;
            }
        }
    }
    Ok(acc.scale(Complex64::new(0.0, 1.0)))
}

/// Default node count of [`duhamel_nonlinear`].
pub const DEFAULT_QUAD_NODES: usize = 64;
