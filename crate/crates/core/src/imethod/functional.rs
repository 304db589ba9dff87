use num_complex::Complex64;

use super::{apply_i, ModifiedEnergyParams, MultiplierTable};
use crate::dynamics::energy;
use crate::error::{invalid, Error, Result};
use crate::par::{map_slice, Exec, KahanComplex, KahanSum};
use crate::spectral::SpectralField;

/// Default cap on multiplier evaluations in a direct `Λₙ` sum.
pub const DEFAULT_BUDGET: f64 = 1e9;

/// Largest admissible imaginary residue of a real-valued `Λₙ` combination,
/// relative to the sum of the moduli of its terms.
pub const RESIDUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct LambdaOptions {
    pub budget: f64,
    pub exec: Exec,
}

impl Default for LambdaOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            exec: Exec::default(),
        }
    }
}

/// Result of a direct sum: the value and `Σ |term|` (used to judge residues).
#[derive(Debug, Clone, Copy)]
struct Summed {
    value: Complex64,
    scale: f64,
}

/// `Λₙ(Mₙ; u) = ∫_{Γₙ} Mₙ(k₁,…,kₙ) Π ĝⱼ(kⱼ)` with `ĝⱼ = û` for odd `j` and
/// `ĝⱼ(k) = conj(û(−k))` for even `j`, weighted by `(2πλ)^{1−n}`.
///
/// The multiplier receives the tuple as lattice indices `mⱼ = λkⱼ`.
pub fn lambda_n<F>(u: &SpectralField, n: usize, opts: &LambdaOptions, mult: F) -> Result<Complex64>
where
    F: Fn(&[i64]) -> f64 + Sync,
{
    Ok(lambda_n_summed(u, n, opts, mult)?.value)
}

fn lambda_n_summed<F>(u: &SpectralField, n: usize, opts: &LambdaOptions, mult: F) -> Result<Summed>
where
    F: Fn(&[i64]) -> f64 + Sync,
{
    if ![2, 4, 6].contains(&n) {
        return Err(invalid(format!(
            "Lambda_n is implemented for n in {{2, 4, 6}}, got {n}"
        )));
    }
    let support: Vec<(i64, Complex64)> = u.support().into_iter().map(|m| (m, u.coeff(m))).collect();
    let estimated = (support.len() as f64).powi(n as i32 - 1);
    if estimated > opts.budget {
        return Err(Error::BudgetExceeded {
            estimated,
            budget: opts.budget,
        });
    }
    let weight = u.spec().weight().powi(n as i32 - 1);
    let partials = map_slice(opts.exec, &support, |&(a1, c1)| {
        let mut acc = KahanComplex::default();
        let mut scale = KahanSum::default();
        let mut push = |k: &[i64], prod: Complex64| {
            let term = prod * mult(k);
            scale.add(term.norm());
            acc.add(term);
        };
        match n {
            2 => {
                // k₂ = −a₁
                push(&[a1, -a1], c1 * c1.conj());
            }
            4 => {
                for &(b2, c2) in &support {
                    let p12 = c1 * c2.conj();
                    for &(a3, c3) in &support {
                        let b4 = a1 + a3 - b2;
                        let c4 = u.coeff(b4);
                        if c4.re == 0.0 && c4.im == 0.0 {
                            continue;
                        }
                        push(&[a1, -b2, a3, -b4], p12 * c3 * c4.conj());
                    }
                }
            }
            _ => {
                for &(b2, c2) in &support {
                    let p12 = c1 * c2.conj();
                    for &(a3, c3) in &support {
                        let p123 = p12 * c3;
                        for &(b4, c4) in &support {
                            let p1234 = p123 * c4.conj();
                            for &(a5, c5) in &support {
                                let b6 = a1 + a3 + a5 - b2 - b4;
                                let c6 = u.coeff(b6);
                                if c6.re == 0.0 && c6.im == 0.0 {
                                    continue;
                                }
                                push(&[a1, -b2, a3, -b4, a5, -b6], p1234 * c5 * c6.conj());
                            }
                        }
                    }
                }
            }
        }
        (acc.value(), scale.value())
    });
    let mut total = KahanComplex::default();
    let mut scale = KahanSum::default();
    for (v, s) in partials {
        total.add(v);
        scale.add(s);
    }
    Ok(Summed {
        value: total.value() * weight,
        scale: scale.value() * weight,
    })
}

fn check_real(s: Summed) -> Result<f64> {
    let residue = if s.scale > 0.0 {
        s.value.im.abs() / s.scale
    } else {
        0.0
    };
    if residue > RESIDUE_TOL {
        return Err(Error::ImaginaryResidue {
            residue,
            tolerance: RESIDUE_TOL,
        });
    }
    Ok(s.value.re)
}

fn table_for(u: &SpectralField, params: &ModifiedEnergyParams, reach: i64) -> MultiplierTable {
    MultiplierTable::new(params, u.spec().lambda(), reach * u.max_abs_index().max(1))
}

/// `E¹(u) = E(Iu)`, evaluated in physical space.
pub fn e1(u: &SpectralField, params: &ModifiedEnergyParams) -> Result<f64> {
    Ok(energy(&apply_i(u, params, None)?, params.alpha))
}

/// `E¹` through `½Λ₂(m₁|k₁|^α m₂|k₂|^α) + ¼Λ₄(m₁m₂m₃m₄)`, summed directly.
pub fn e1_dual(
    u: &SpectralField,
    params: &ModifiedEnergyParams,
    opts: &LambdaOptions,
) -> Result<f64> {
    let t = table_for(u, params, 1);
    let quad = lambda_n_summed(u, 2, opts, |k| t.f(k[0]))?;
    let quart = lambda_n_summed(u, 4, opts, |k| {
        t.m(k[0]) * t.m(k[1]) * t.m(k[2]) * t.m(k[3])
    })?;
    Ok(0.5 * check_real(quad)? + 0.25 * check_real(quart)?)
}

/// `E²(u) = ½Λ₂(m₁|k₁|^α m₂|k₂|^α; u) + ¼Λ₄(M₄; u)`.
pub fn e2(u: &SpectralField, params: &ModifiedEnergyParams, opts: &LambdaOptions) -> Result<f64> {
    let t = table_for(u, params, 1);
    let quad = lambda_n_summed(u, 2, opts, |k| t.f(k[0]))?;
    let quart = lambda_n_summed(u, 4, opts, |k| t.m4([k[0], k[1], k[2], k[3]]))?;
    Ok(0.5 * check_real(quad)? + 0.25 * check_real(quart)?)
}

/// `E² − E¹ = ¼Λ₄(M₄ − m₁m₂m₃m₄; u)` as a single sum, free of the
/// cancellation in subtracting the two energies.
pub fn e2_minus_e1(
    u: &SpectralField,
    params: &ModifiedEnergyParams,
    opts: &LambdaOptions,
) -> Result<f64> {
    let t = table_for(u, params, 1);
    let quart = lambda_n_summed(u, 4, opts, |k| {
        let k = [k[0], k[1], k[2], k[3]];
        t.m4(k) - t.m(k[0]) * t.m(k[1]) * t.m(k[2]) * t.m(k[3])
    })?;
    Ok(0.25 * check_real(quart)?)
}

/// `dE²/dt` along the flow, `(i/4)Λ₆(M₆; u)`.
///
/// The factor `¼` is inherited from the quartic term of `E²` under the
/// normalization of `Λₙ` used here.
pub fn e2_time_derivative(
    u: &SpectralField,
    params: &ModifiedEnergyParams,
    opts: &LambdaOptions,
) -> Result<f64> {
    let t = table_for(u, params, 3);
    let s = lambda_n_summed(u, 6, opts, |k| t.m6([k[0], k[1], k[2], k[3], k[4], k[5]]))?;
    let i_quarter = Complex64::new(0.0, 0.25);
    check_real(Summed {
        value: s.value * i_quarter,
        scale: 0.25 * s.scale,
    })
}
