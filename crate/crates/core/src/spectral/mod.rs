//! Fourier analysis on the rescaled torus `T_λ = R / 2πλZ`.
//!
//! Coefficients follow the un-normalized convention
//! `û(k) = ∫_0^{2πλ} e^{-ikx} f(x) dx` on the lattice `Z_λ = Z/λ`, and every
//! norm inserts the counting weight `1/(2πλ)` explicitly. Lattice points are
//! addressed by their integer index `m = λk`.

mod band;
mod field;
mod io;
mod rescale;

pub use band::{Band, Interval};
pub use field::{Factor, SpectralField};
pub use io::{read_field_text, write_field_text};
pub use rescale::{rescale_down, rescale_up, unit_dilation};

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Tolerance used when snapping a real frequency onto the lattice.
const LATTICE_TOL: f64 = 1e-9;

/// The discretized rescaled torus and its truncated frequency lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusSpec {
    lambda: f64,
    num_points: usize,
}

impl TorusSpec {
    pub fn new(lambda: f64, num_points: usize) -> Result<Self> {
        if !(lambda >= 1.0) || !lambda.is_finite() {
            return Err(invalid(format!("lambda must be >= 1, got {lambda}")));
        }
        if num_points < 4 || !num_points.is_multiple_of(2) {
            return Err(invalid(format!(
                "num_points must be even and >= 4, got {num_points}"
            )));
        }
        Ok(Self { lambda, num_points })
    }

    /// The standard circle `T = R / 2πZ`.
    pub fn unit(num_points: usize) -> Result<Self> {
        Self::new(1.0, num_points)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    /// Circumference `2πλ`.
    pub fn volume(&self) -> f64 {
        2.0 * PI * self.lambda
    }

    /// Weight `1/(2πλ)` of the normalized counting measure `(dk)_λ`.
    pub fn weight(&self) -> f64 {
        1.0 / self.volume()
    }

    /// Spatial step `2πλ/P`.
    pub fn step(&self) -> f64 {
        self.volume() / self.num_points as f64
    }

    /// Largest index `P/2 - 1` accepted by synthesis.
    pub fn max_index(&self) -> i64 {
        (self.num_points / 2) as i64 - 1
    }

    /// Largest resolvable frequency `(P/2 - 1)/λ`.
    pub fn k_max(&self) -> f64 {
        self.max_index() as f64 / self.lambda
    }

    pub fn frequency(&self, m: i64) -> f64 {
        m as f64 / self.lambda
    }

    /// Lattice index stored in FFT slot `slot`.
    pub fn index_of_slot(&self, slot: usize) -> i64 {
        let p = self.num_points;
        if slot < p / 2 {
            slot as i64
        } else {
            slot as i64 - p as i64
        }
    }

    /// FFT slot of lattice index `m`, if it is stored at all (`-P/2 ≤ m < P/2`).
    pub fn slot_of_index(&self, m: i64) -> Option<usize> {
        let half = (self.num_points / 2) as i64;
        if m < -half || m >= half {
            None
        } else if m >= 0 {
            Some(m as usize)
        } else {
            Some((m + self.num_points as i64) as usize)
        }
    }

    /// Snaps a real frequency onto the lattice and checks it is resolvable.
    pub fn index_of_frequency(&self, k: f64) -> Result<i64> {
        let scaled = k * self.lambda;
        let m = scaled.round();
        if (scaled - m).abs() > LATTICE_TOL * scaled.abs().max(1.0) {
            return Err(Error::OffLattice {
                k,
                lambda: self.lambda,
            });
        }
        let m = m as i64;
        if m.abs() > self.max_index() {
            return Err(Error::BeyondResolution {
                k,
                k_max: self.k_max(),
            });
        }
        Ok(m)
    }

    /// Same torus with a different number of collocation points.
    pub fn with_points(&self, num_points: usize) -> Result<Self> {
        Self::new(self.lambda, num_points)
    }

    /// Collocation points `x_j = j 2πλ/P`.
    pub fn grid(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.num_points).map(|j| j as f64 * h).collect()
    }
}

/// The dispersion symbol `|k|^{2α}`, with value 0 at `k = 0`.
///
/// Integer exponents are evaluated with exact integer powers so that the
/// classical limit `α = 1` reproduces polynomial identities bit-for-bit.
pub fn dispersion(k: f64, alpha: f64) -> f64 {
    let a = k.abs();
    if a == 0.0 {
        return 0.0;
    }
    let e = 2.0 * alpha;
    if e.fract() == 0.0 && e.abs() <= 8.0 {
        a.powi(e as i32)
    } else {
        (e * a.ln()).exp()
    }
}

/// `|k|^p` with the convention `0^p = 0`.
pub fn abs_pow(k: f64, p: f64) -> f64 {
    let a = k.abs();
    if a == 0.0 {
        0.0
    } else if p.fract() == 0.0 && p.abs() <= 8.0 {
        a.powi(p as i32)
    } else {
        a.powf(p)
    }
}

/// `⟨k⟩ = (1 + k²)^{1/2}`.
pub fn japanese(k: f64) -> f64 {
    (1.0 + k * k).sqrt()
}

/// Smallest power of two that is `>= n` (and at least 4).
pub fn next_pow2(n: usize) -> usize {
    n.max(4).next_power_of_two()
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn fft_forward(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

pub(crate) fn fft_inverse(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(len))
}

/// Physical samples → coefficients: `û(m) = h · Σ_j e^{-2πi mj/P} f_j`.
pub(crate) fn forward_in_place(buf: &mut [Complex64], volume: f64) {
    let n = buf.len();
    fft_forward(n).process(buf);
    let h = volume / n as f64;
    for c in buf.iter_mut() {
        *c *= h;
    }
}

/// Coefficients → physical samples: `f_j = (1/(2πλ)) Σ_m e^{2πi mj/P} û(m)`.
pub(crate) fn inverse_in_place(buf: &mut [Complex64], volume: f64) {
    let n = buf.len();
    fft_inverse(n).process(buf);
    let w = 1.0 / volume;
    for c in buf.iter_mut() {
        *c *= w;
    }
}
