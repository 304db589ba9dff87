use num_complex::Complex64;
use rand::Rng;

use super::{
    abs_pow, dispersion, forward_in_place, inverse_in_place, japanese, next_pow2, Band, TorusSpec,
};
use crate::error::{invalid, Error, Result};

/// A complex field on `T_λ`, stored as its Fourier coefficients in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    spec: TorusSpec,
    coeffs: Vec<Complex64>,
}

/// One factor of a pointwise product, optionally complex-conjugated.
#[derive(Debug, Clone, Copy)]
pub struct Factor<'a> {
    pub field: &'a SpectralField,
    pub conjugate: bool,
}

impl<'a> Factor<'a> {
    pub fn plain(field: &'a SpectralField) -> Self {
        Self {
            field,
            conjugate: false,
        }
    }

    pub fn conj(field: &'a SpectralField) -> Self {
        Self {
            field,
            conjugate: true,
        }
    }
}

impl SpectralField {
    pub fn zeros(spec: TorusSpec) -> Self {
        Self {
            spec,
            coeffs: vec![Complex64::new(0.0, 0.0); spec.num_points()],
        }
    }

    /// Wraps coefficients already laid out in FFT order.
    pub fn from_coeffs(spec: TorusSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != spec.num_points() {
            return Err(invalid(format!(
                "expected {} coefficients, got {}",
                spec.num_points(),
                coeffs.len()
            )));
        }
        Ok(Self { spec, coeffs })
    }

    /// Field with the given coefficients at the given lattice frequencies.
    ///
    /// Repeated frequencies accumulate.
    pub fn synthesize(spec: TorusSpec, modes: &[(f64, Complex64)]) -> Result<Self> {
        let mut out = Self::zeros(spec);
        for &(k, c) in modes {
            let m = spec.index_of_frequency(k)?;
            out.add_to_index(m, c);
        }
        Ok(out)
    }

    /// Like [`SpectralField::synthesize`] but addressed by lattice index `m = λk`.
    pub fn from_modes(spec: TorusSpec, modes: &[(i64, Complex64)]) -> Result<Self> {
        let mut out = Self::zeros(spec);
        for &(m, c) in modes {
            if m.abs() > spec.max_index() {
                return Err(Error::BeyondResolution {
                    k: spec.frequency(m),
                    k_max: spec.k_max(),
                });
            }
            out.add_to_index(m, c);
        }
        Ok(out)
    }

    /// Coefficients `û = h · FFT(samples)` of physical samples on the grid.
    pub fn from_physical(spec: TorusSpec, samples: &[Complex64]) -> Result<Self> {
        if samples.len() != spec.num_points() {
            return Err(invalid("sample count does not match the torus"));
        }
        let mut buf = samples.to_vec();
        forward_in_place(&mut buf, spec.volume());
        Ok(Self { spec, coeffs: buf })
    }

    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `û(m/λ)`, zero for indices outside storage.
    pub fn coeff(&self, m: i64) -> Complex64 {
        self.spec
            .slot_of_index(m)
            .map_or(Complex64::new(0.0, 0.0), |s| self.coeffs[s])
    }

    pub fn set_coeff(&mut self, m: i64, c: Complex64) {
        let slot = self
            .spec
            .slot_of_index(m)
            .expect("lattice index outside storage");
        self.coeffs[slot] = c;
    }

    fn add_to_index(&mut self, m: i64, c: Complex64) {
        let slot = self.spec.slot_of_index(m).expect("checked by caller");
        self.coeffs[slot] += c;
    }

    /// `(m, û)` pairs in FFT slot order.
    pub fn indexed(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(slot, &c)| (self.spec.index_of_slot(slot), c))
    }

    /// Sorted lattice indices carrying a non-zero coefficient.
    pub fn support(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self
            .indexed()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(m, _)| m)
            .collect();
        s.sort_unstable();
        s
    }

    /// Largest `|m|` with a non-zero coefficient (0 for the zero field).
    pub fn max_abs_index(&self) -> i64 {
        self.indexed()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(m, _)| m.abs())
            .max()
            .unwrap_or(0)
    }

    pub fn map_indexed(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        let coeffs = self.indexed().map(|(m, c)| f(m, c)).collect();
        Self {
            spec: self.spec,
            coeffs,
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map_indexed(|_, c| c * a)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.spec, other.spec, "fields live on different tori");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            spec: self.spec,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.spec, other.spec, "fields live on different tori");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            spec: self.spec,
            coeffs,
        }
    }

    /// Complex conjugate in physical space: `\hat{\bar f}(k) = \overline{\hat f(-k)}`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zeros(self.spec);
        for (m, c) in self.indexed() {
            if let Some(slot) = self.spec.slot_of_index(-m) {
                out.coeffs[slot] = c.conj();
            }
        }
        out
    }

    /// Samples on the native collocation grid.
    pub fn to_physical(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        inverse_in_place(&mut buf, self.spec.volume());
        buf
    }

    /// Samples on a refined grid of `points ≥ P` (even) points, by zero padding.
    pub fn to_physical_padded(&self, points: usize) -> Vec<Complex64> {
        assert!(points >= self.spec.num_points() && points.is_multiple_of(2));
        let mut buf = vec![Complex64::new(0.0, 0.0); points];
        for (m, c) in self.indexed() {
            let slot = if m >= 0 {
                m as usize
            } else {
                (m + points as i64) as usize
            };
            buf[slot] = c;
        }
        inverse_in_place(&mut buf, self.spec.volume());
        buf
    }

    /// Padded grid size on which `∫|f|^p` is computed exactly for even integer `p`.
    pub fn exact_power_points(&self, p: usize) -> usize {
        next_pow2((p as i64 * self.max_abs_index() + 1) as usize).max(self.spec.num_points())
    }

    /// `‖f‖_{L^p(T_λ)}` by the trapezoid rule on the collocation grid;
    /// `p = ∞` gives the maximum modulus over the samples.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_of_samples(&self.to_physical(), self.spec.step(), p)
    }

    /// `‖f‖_{L^p}` on a grid refined by zero padding to `points`.
    pub fn lp_norm_oversampled(&self, p: f64, points: usize) -> Result<f64> {
        let h = self.spec.volume() / points as f64;
        lp_of_samples(&self.to_physical_padded(points), h, p)
    }

    /// `∫|f|^p dx` for even integer `p`, exact for band-limited fields.
    pub fn integral_abs_pow(&self, p: usize) -> f64 {
        let pts = self.exact_power_points(p);
        let h = self.spec.volume() / pts as f64;
        let samples = self.to_physical_padded(pts);
        h * samples
            .iter()
            .map(|z| z.norm_sqr().powi(p as i32 / 2))
            .sum::<f64>()
    }

    /// `‖f‖_{L²}` through Plancherel.
    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// `‖⟨k⟩^s f̂‖_{L²((dk)_λ)}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.weighted_norm(|k| japanese(k).powf(s))
    }

    /// `‖|k|^s f̂‖_{L²((dk)_λ)}`, the homogeneous variant.
    pub fn homogeneous_sobolev_norm(&self, s: f64) -> f64 {
        if s == 0.0 {
            return self.l2_norm();
        }
        self.weighted_norm(|k| abs_pow(k, s))
    }

    fn weighted_norm(&self, weight: impl Fn(f64) -> f64) -> f64 {
        let sum: f64 = self
            .indexed()
            .map(|(m, c)| {
                let w = weight(self.spec.frequency(m));
                w * w * c.norm_sqr()
            })
            .sum();
        (self.spec.weight() * sum).sqrt()
    }

    /// Parseval pairing `∫ f̂ \bar{ĝ} (dk)_λ`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.spec, other.spec);
        let s: Complex64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum();
        s * self.spec.weight()
    }

    /// Sharp Fourier cutoff onto `band`.
    pub fn project(&self, band: &Band) -> Self {
        let spec = self.spec;
        self.map_indexed(|m, c| {
            if band.contains(spec.frequency(m)) {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Linear propagator: `û(k) ↦ e^{i|k|^{2α}t} û(k)`.
    pub fn propagate(&self, t: f64, alpha: f64) -> Self {
        if t == 0.0 {
            return self.clone();
        }
        let spec = self.spec;
        self.map_indexed(|m, c| {
            let phase = dispersion(spec.frequency(m), alpha) * t;
            c * Complex64::from_polar(1.0, phase)
        })
    }

    /// Evaluates the product of `factors` exactly (no aliasing) and truncates
    /// it to this field's lattice storage.
    pub fn product(factors: &[Factor<'_>]) -> Self {
        assert!(!factors.is_empty());
        let spec = *factors[0].field.spec();
        let degree: i64 = factors.iter().map(|f| f.field.max_abs_index()).sum();
        // aliases of |q| ≤ degree must miss every stored index |m| ≤ P/2
        let pts =
            next_pow2((degree + spec.num_points() as i64 / 2 + 1) as usize).max(spec.num_points());
        let mut acc = vec![Complex64::new(1.0, 0.0); pts];
        for f in factors {
            assert_eq!(*f.field.spec(), spec, "factors live on different tori");
            let samples = f.field.to_physical_padded(pts);
            for (a, s) in acc.iter_mut().zip(samples) {
                *a *= if f.conjugate { s.conj() } else { s };
            }
        }
        forward_in_place(&mut acc, spec.volume());
        let mut out = Self::zeros(spec);
        for slot in 0..spec.num_points() {
            let m = spec.index_of_slot(slot);
            let src = if m >= 0 {
                m as usize
            } else {
                (m + pts as i64) as usize
            };
            out.coeffs[slot] = acc[src];
        }
        out
    }

    /// The cubic nonlinearity `|u|²u`, computed without aliasing.
    pub fn cubic(&self) -> Self {
        Self::product(&[Factor::plain(self), Factor::plain(self), Factor::conj(self)])
    }

    /// Relative coefficient distance `‖f̂ - ĝ‖_{ℓ²} / ‖ĝ‖_{ℓ²}`.
    pub fn relative_distance(&self, reference: &Self) -> f64 {
        let num: f64 = self
            .coeffs
            .iter()
            .zip(&reference.coeffs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = reference.coeffs.iter().map(|b| b.norm_sqr()).sum();
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }

    /// Random unimodular phases `|û| = 1` on every lattice point in `band`.
    pub fn random_phases<R: Rng + ?Sized>(spec: TorusSpec, band: &Band, rng: &mut R) -> Self {
        let mut out = Self::zeros(spec);
        for slot in 0..spec.num_points() {
            let m = spec.index_of_slot(slot);
            if m.abs() <= spec.max_index() && band.contains(spec.frequency(m)) {
                let theta = rng.random::<f64>() * std::f64::consts::TAU;
                out.coeffs[slot] = Complex64::from_polar(1.0, theta);
            }
        }
        out
    }
}

fn lp_of_samples(samples: &[Complex64], h: f64, p: f64) -> Result<f64> {
    if p.is_infinite() && p > 0.0 {
        return Ok(samples.iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    if !(p >= 1.0) {
        return Err(invalid(format!("L^p norm needs p >= 1, got {p}")));
    }
    let sum: f64 = if p == 2.0 {
        samples.iter().map(|z| z.norm_sqr()).sum()
    } else {
        samples.iter().map(|z| z.norm().powf(p)).sum()
    };
    Ok((h * sum).powf(1.0 / p))
}
