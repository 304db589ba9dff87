//! Seeded initial data described by a small declarative table.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::spectral::{japanese, read_field_text, Band, SpectralField, TorusSpec};

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatumSpec {
    /// `modes` consecutive indices `−modes/2 ..< modes/2`, each with a random
    /// coefficient in the unit disc damped by `(1+|m|)^{−decay}`, rescaled to
    /// the given `L²` norm.
    RandomModes {
        modes: usize,
        #[serde(default = "one")]
        decay: f64,
        #[serde(default = "one")]
        l2_norm: f64,
    },
    /// Random phases on `|m| ≤ radius` with modulus `⟨m⟩^{−decay}`, rescaled to
    /// unit `H^s` norm.
    PowerLaw { radius: i64, decay: f64, s: f64 },
    /// Unimodular random phases on the shell `lo ≤ |k| ≤ hi`, times `amplitude·2πλ`.
    RandomBand {
        lo: f64,
        hi: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `a·e^{ikx}`.
    SingleMode { k: f64, amplitude: f64 },
    /// A field dump in the text format.
    File { path: PathBuf },
}

impl DatumSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DatumSpec::RandomModes { modes, l2_norm, .. } => {
                if *modes == 0 || !(*l2_norm > 0.0) {
                    return Err(invalid("random_modes needs modes >= 1 and l2_norm > 0"));
                }
            }
            DatumSpec::PowerLaw { radius, .. } => {
                if *radius < 0 {
                    return Err(invalid("power_law needs radius >= 0"));
                }
            }
            DatumSpec::RandomBand { lo, hi, .. } => {
                if !(lo <= hi) || *lo < 0.0 {
                    return Err(invalid("random_band needs 0 <= lo <= hi"));
                }
            }
            DatumSpec::SingleMode { amplitude, .. } => {
                if !amplitude.is_finite() {
                    return Err(invalid("single_mode amplitude must be finite"));
                }
            }
            DatumSpec::File { .. } => {}
        }
        Ok(())
    }

    pub fn build<R: Rng + ?Sized>(&self, spec: TorusSpec, rng: &mut R) -> Result<SpectralField> {
        self.validate()?;
        let vol = spec.volume();
        match self {
            DatumSpec::RandomModes {
                modes,
                decay,
                l2_norm,
            } => {
                let half = (*modes / 2) as i64;
                let lo = -half;
                let list: Vec<(i64, Complex64)> = (lo..lo + *modes as i64)
                    .map(|m| {
                        let r: f64 = rng.random::<f64>().sqrt();
                        let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                        (
                            m,
                            Complex64::from_polar(r * (1.0 + m.abs() as f64).powf(-decay), th),
                        )
                    })
                    .collect();
                let f = SpectralField::from_modes(spec, &list)?;
                let n = f.l2_norm();
                Ok(f.scale(Complex64::new(l2_norm / n, 0.0)))
            }
            DatumSpec::PowerLaw { radius, decay, s } => {
                let list: Vec<(i64, Complex64)> = (-radius..=*radius)
                    .map(|m| {
                        let th: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                        (
                            m,
                            Complex64::from_polar(japanese(m as f64).powf(-decay), th),
                        )
                    })
                    .collect();
                let f = SpectralField::from_modes(spec, &list)?;
                let n = f.sobolev_norm(*s);
                Ok(f.scale(Complex64::new(1.0 / n, 0.0)))
            }
            DatumSpec::RandomBand { lo, hi, amplitude } => {
                if *hi > spec.k_max() {
                    return Err(crate::Error::BeyondResolution {
                        k: *hi,
                        k_max: spec.k_max(),
                    });
                }
                let band = Band::Shell { lo: *lo, hi: *hi };
                Ok(SpectralField::random_phases(spec, &band, rng)
                    .scale(Complex64::new(amplitude * vol, 0.0)))
            }
            DatumSpec::SingleMode { k, amplitude } => {
                SpectralField::synthesize(spec, &[(*k, Complex64::new(amplitude * vol, 0.0))])
            }
            DatumSpec::File { path } => {
                let (f, _) = read_field_text(BufReader::new(File::open(path)?))?;
                if f.spec() != &spec {
                    return Err(invalid(format!(
                        "field in {} has lambda = {}, num_points = {}; the experiment expects {}, {}",
                        path.display(),
                        f.spec().lambda(),
                        f.spec().num_points(),
                        spec.lambda(),
                        spec.num_points()
                    )));
                }
                Ok(f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_modes_shape() {
        let spec = TorusSpec::unit(128).unwrap();
        let d = DatumSpec::RandomModes {
            modes: 32,
            decay: 1.0,
            l2_norm: 2.0,
        };
        let f = d.build(spec, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(f.support().first(), Some(&-16));
        assert_eq!(f.support().last(), Some(&15));
        assert!((f.l2_norm() - 2.0).abs() < 1e-12);
        let g = d.build(spec, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn power_law_unit_norm() {
        let spec = TorusSpec::unit(64).unwrap();
        let d = DatumSpec::PowerLaw {
            radius: 20,
            decay: 1.1,
            s: 0.5,
        };
        let f = d.build(spec, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!((f.sobolev_norm(0.5) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parses_from_table() {
        let d: DatumSpec =
            toml::from_str("kind = \"single_mode\"\nk = 3.0\namplitude = 0.5\n").unwrap();
        assert_eq!(
            d,
            DatumSpec::SingleMode {
                k: 3.0,
                amplitude: 0.5
            }
        );
        assert!(toml::from_str::<DatumSpec>(
            "kind = \"single_mode\"\nk = 3.0\namplitude = 0.5\nbogus = 1\n"
        )
        .is_err());
        assert!(toml::from_str::<DatumSpec>("kind = \"nope\"\n").is_err());
    }

    #[test]
    fn file_datum_round_trip() {
        let spec = TorusSpec::new(2.0, 16).unwrap();
        let f = SpectralField::synthesize(spec, &[(1.5, Complex64::new(1.0, -2.0))]).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u0.txt");
        crate::spectral::write_field_text(&f, None, File::create(&path).unwrap()).unwrap();
        let d = DatumSpec::File { path: path.clone() };
        let g = d.build(spec, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert_eq!(f, g);
        assert!(d
            .build(
                TorusSpec::unit(16).unwrap(),
                &mut ChaCha8Rng::seed_from_u64(0)
            )
            .is_err());
    }
}
