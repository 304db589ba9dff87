//! Maps between the standard circle and the rescaled torus.

use num_complex::Complex64;

use super::{SpectralField, TorusSpec};
use crate::error::{invalid, Error, Result};

fn check_resolution(u: &SpectralField, target: &TorusSpec) -> Result<()> {
    let m = u.max_abs_index();
    if m > target.max_index() {
        return Err(Error::BeyondResolution {
            k: target.frequency(m),
            k_max: target.k_max(),
        });
    }
    Ok(())
}

fn copy_scaled(u: &SpectralField, target: TorusSpec, factor: f64) -> SpectralField {
    let mut out = SpectralField::zeros(target);
    for (m, c) in u.indexed() {
        if c != Complex64::new(0.0, 0.0) {
            out.set_coeff(m, c * factor);
        }
    }
    out
}

/// `u₀^λ(x) = λ^{-α} u₀(x/λ)` on `target = T_λ`.
///
/// The lattice index is preserved: `û₀^λ(m/λ) = λ^{1-α} û₀(m)`.
pub fn rescale_down(u0: &SpectralField, target: TorusSpec, alpha: f64) -> Result<SpectralField> {
    if u0.spec().lambda() != 1.0 {
        return Err(invalid("rescale_down expects data on the standard circle"));
    }
    check_resolution(u0, &target)?;
    let lambda = target.lambda();
    Ok(copy_scaled(u0, target, lambda.powf(1.0 - alpha)))
}

/// Inverse of [`rescale_down`]: `u₀(x) = λ^α u^λ(λx)` on the circle `target`.
pub fn rescale_up(u: &SpectralField, target: TorusSpec, alpha: f64) -> Result<SpectralField> {
    if target.lambda() != 1.0 {
        return Err(invalid("rescale_up targets the standard circle"));
    }
    check_resolution(u, &target)?;
    let lambda = u.spec().lambda();
    Ok(copy_scaled(u, target, lambda.powf(alpha - 1.0)))
}

/// `f(x) = φ(λx)` on the circle for `φ` on `T_λ`: `f̂(m) = λ^{-1} φ̂(m/λ)`.
pub fn unit_dilation(phi: &SpectralField, target: TorusSpec) -> Result<SpectralField> {
    if target.lambda() != 1.0 {
        return Err(invalid("unit_dilation targets the standard circle"));
    }
    check_resolution(phi, &target)?;
    Ok(copy_scaled(phi, target, 1.0 / phi.spec().lambda()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_unit(p: usize, max_m: i64, seed: u64) -> SpectralField {
        let spec = TorusSpec::unit(p).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<_> = (-max_m..=max_m)
            .map(|m| {
                (
                    m,
                    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
                )
            })
            .collect();
        SpectralField::from_modes(spec, &modes).unwrap()
    }

    #[test]
    fn lambda_one_is_identity() {
        let u = random_unit(32, 10, 1);
        assert_eq!(rescale_down(&u, *u.spec(), 0.75).unwrap(), u);
    }

    #[test]
    fn single_mode_moves_to_rescaled_frequency() {
        let spec = TorusSpec::unit(16).unwrap();
        let u = SpectralField::synthesize(spec, &[(2.0, Complex64::new(1.0, 0.0))]).unwrap();
        let target = TorusSpec::new(4.0, 16).unwrap();
        let v = rescale_down(&u, target, 0.75).unwrap();
        let m = target.index_of_frequency(0.5).unwrap();
        assert!((v.coeff(m).re - 4f64.powf(0.25)).abs() < 1e-15);
        assert_eq!(v.support(), vec![m]);
        // physical check: v(x) = λ^{-α} u(x/λ)
        let (ux, vx) = (u.to_physical_padded(64), v.to_physical());
        for j in 0..16 {
            assert!((vx[j] - ux[4 * j] * 4f64.powf(-0.75)).norm() < 1e-14);
        }
    }

    #[test]
    fn mass_scaling_and_inverse() {
        let alpha = 0.6;
        let u = random_unit(64, 20, 2);
        let target = TorusSpec::new(3.0, 64).unwrap();
        let v = rescale_down(&u, target, alpha).unwrap();
        let expect = 3f64.powf(1.0 - 2.0 * alpha) * u.l2_norm().powi(2);
        assert!((v.l2_norm().powi(2) - expect).abs() < 1e-10 * expect);
        let back = rescale_up(&v, *u.spec(), alpha).unwrap();
        assert!(back.relative_distance(&u) < 1e-12);
    }

    #[test]
    fn insufficient_resolution_is_rejected() {
        let u = random_unit(64, 20, 3);
        let small = TorusSpec::new(2.0, 16).unwrap();
        assert!(matches!(
            rescale_down(&u, small, 0.75),
            Err(Error::BeyondResolution { .. })
        ));
    }

    #[test]
    fn dilation_norm() {
        let phi = random_unit(64, 20, 5);
        let phi = copy_scaled(&phi, TorusSpec::new(4.0, 64).unwrap(), 1.0);
        let f = unit_dilation(&phi, TorusSpec::unit(64).unwrap()).unwrap();
        let lhs = f.l2_norm().powi(2);
        let rhs = phi.l2_norm().powi(2) / 4.0;
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
    }
}
