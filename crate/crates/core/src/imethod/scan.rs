//! Exhaustive scan of `|M₄| / m(k₃*)²` over integer zero-sum tuples.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::multiplier::{m4_from_parts, EPS_RES};
use super::{G1Variant, ModifiedEnergyParams, MultiplierTable};
use crate::dd::DD;
use crate::error::{invalid, Result};
use crate::par::{map_range, Exec};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct M4ScanOptions {
    pub radius: i64,
    pub exec: Exec,
    /// Every `dd_stride`-th evaluation is repeated in double-double.
    pub dd_stride: u64,
    /// Upper bound on double-double re-checks.
    pub dd_cap: u64,
}

impl M4ScanOptions {
    pub fn new(radius: i64) -> Self {
        Self {
            radius,
            exec: Exec::default(),
            dd_stride: 100,
            dd_cap: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct M4ScanReport {
    pub alpha: f64,
    pub s: f64,
    pub n: f64,
    pub radius: i64,
    pub g1: String,
    pub sup_ratio: f64,
    pub argmax: [i64; 4],
    pub argmax_m4: f64,
    pub argmax_resonant: bool,
    /// Tuples visited after symmetry reduction.
    pub evaluations: u64,
    pub resonant: u64,
    pub dd_checked: u64,
    /// Largest gap between the double and double-double values of the
    /// scanned ratio `|M₄| / m(k₃*)²` over the re-checked tuples.
    pub dd_max_ratio_error: f64,
    pub dd_branch_mismatches: u64,
    /// The supremum ratio recomputed in double-double at the argmax tuple.
    pub dd_argmax_ratio: f64,
}

struct Partial {
    best: f64,
    arg: [i64; 4],
    val: f64,
    res: bool,
    evals: u64,
    resonant: u64,
    dd_checked: u64,
    dd_max: f64,
    dd_mismatch: u64,
}

/// Double-double copies of the multiplier tables.
struct DdTable {
    w: Vec<DD>,
    m: Vec<DD>,
    f: Vec<DD>,
}

fn dd_m(params: &ModifiedEnergyParams, j: i64) -> DD {
    let x = DD::from_f64(j as f64) / DD::from_f64(params.n);
    let beta = DD::from_f64(params.beta());
    if x.hi <= 1.0 {
        return DD::ONE;
    }
    if x.hi >= 2.0 {
        return (DD::ONE / x).powf(beta);
    }
    let y = x.ln();
    let ln2 = DD::from_f64(2.0).ln();
    let tau = y / ln2;
    let c = DD::from_f64;
    let h = match params.g1 {
        G1Variant::QuinticLogSmoothstep => {
            tau * tau * tau * (c(10.0) + tau * (c(-15.0) + c(6.0) * tau))
        }
        G1Variant::CubicHermiteLog => tau * tau * (c(3.0) - c(2.0) * tau),
    };
    (-(h * y * beta)).exp()
}

impl DdTable {
    fn new(params: &ModifiedEnergyParams, radius: i64) -> Self {
        let two_alpha = DD::from_f64(2.0 * params.alpha);
        let mut w = Vec::new();
        let mut m = Vec::new();
        let mut f = Vec::new();
        for j in 0..=radius {
            let wj = if j == 0 {
                DD::ZERO
            } else {
                DD::from_f64(j as f64).powf(two_alpha)
            };
            let mj = dd_m(params, j);
            w.push(wj);
            m.push(mj);
            f.push(wj * mj * mj);
        }
        Self { w, m, f }
    }

    fn m4(&self, k: [i64; 4]) -> (DD, bool) {
        let a = k.map(|x| x.unsigned_abs() as usize);
        let den = self.w[a[0]] - self.w[a[1]] + self.w[a[2]] - self.w[a[3]];
        let wmax = a.iter().map(|&i| self.w[i].to_f64()).fold(0.0, f64::max);
        if den.abs().to_f64() < EPS_RES * (wmax + 1.0) {
            (
                self.m[a[0]] * self.m[a[1]] * self.m[a[2]] * self.m[a[3]],
                true,
            )
        } else {
            (
                (self.f[a[0]] - self.f[a[1]] + self.f[a[2]] - self.f[a[3]]) / den,
                false,
            )
        }
    }
}

fn third_largest(k: [i64; 4]) -> usize {
    let mut a = k.map(|x| x.unsigned_abs());
    a.sort_unstable();
    a[1] as usize
}

/// Scans every zero-sum integer tuple with `|kⱼ| ≤ radius`.
///
/// `M₄` is invariant under `k ↦ −k`, under `k₁ ↔ k₃`, `k₂ ↔ k₄`, and under
/// exchanging the pairs `(k₁,k₃) ↔ (k₂,k₄)`; so the scan only visits tuples
/// with `k₁ = max |kⱼ| ≥ 0` and `k₂ ≤ k₄`.
pub fn m4_scan(params: &ModifiedEnergyParams, opts: &M4ScanOptions) -> Result<M4ScanReport> {
    params.validate()?;
    if opts.radius < 1 {
        return Err(invalid("scan radius must be >= 1"));
    }
    if opts.dd_stride == 0 {
        return Err(invalid("dd_stride must be positive"));
    }
    let r = opts.radius;
    let table = MultiplierTable::new(params, 1.0, r);
    let dd = DdTable::new(params, r);
    let w: Vec<f64> = (0..=r).map(|j| table.w(j)).collect();
    let f: Vec<f64> = (0..=r).map(|j| table.f(j)).collect();
    let m: Vec<f64> = (0..=r).map(|j| table.m(j)).collect();
    let inv_m2: Vec<f64> = m.iter().map(|x| 1.0 / (x * x)).collect();

    // share the double-double budget evenly over the expected evaluation count
    let expected = (r as f64).powi(3) / 3.0;
    let per_k1_cap = |k1: i64| -> u64 {
        let share = (k1 as f64 + 1.0).powi(2) / expected;
        ((opts.dd_cap as f64) * share).ceil() as u64 + 1
    };

    let partials = map_range(opts.exec, (r + 1) as usize, |k1| {
        let k1 = k1 as i64;
        let (w1, f1, m1) = (w[k1 as usize], f[k1 as usize], m[k1 as usize]);
        let mut p = Partial {
            best: -1.0,
            arg: [0; 4],
            val: 0.0,
            res: false,
            evals: 0,
            resonant: 0,
            dd_checked: 0,
            dd_max: 0.0,
            dd_mismatch: 0,
        };
        let cap = per_k1_cap(k1);
        let tol = EPS_RES * (w1 + 1.0);
        let mut countdown = 1u64;
        for k2 in -k1..=k1 {
            let a2 = k2.unsigned_abs() as usize;
            let (w2, f2, m2) = (w[a2], f[a2], m[a2]);
            let lo = (-k1).max(-2 * k1 - k2);
            let hi = k1.min(-k2).min(-k1 - 2 * k2);
            for k3 in lo..=hi {
                let k4 = -(k1 + k2 + k3);
                let a3 = k3.unsigned_abs() as usize;
                let a4 = k4.unsigned_abs() as usize;
                let den = w1 - w2 + w[a3] - w[a4];
                let mid = a2.max(a3).min(a2.min(a3).max(a4));
                if den.abs() < tol {
                    let val = m1 * m2 * m[a3] * m[a4];
                    let ratio = val.abs() * inv_m2[mid];
                    if ratio > p.best {
                        p.best = ratio;
                        p.arg = [k1, k2, k3, k4];
                        p.val = val;
                        p.res = true;
                    }
                    p.resonant += 1;
                } else {
                    let num = f1 - f2 + f[a3] - f[a4];
                    // compare without dividing; the quotient is formed only on improvement
                    if num.abs() * inv_m2[mid] > p.best * den.abs() {
                        let val = num / den;
                        p.best = val.abs() * inv_m2[mid];
                        p.arg = [k1, k2, k3, k4];
                        p.val = val;
                        p.res = false;
                    }
                }
                countdown -= 1;
                if countdown == 0 {
                    countdown = opts.dd_stride;
                    if p.dd_checked < cap {
                        let k = [k1, k2, k3, k4];
                        let (val, res) = m4_from_parts(
                            [w1, w2, w[a3], w[a4]],
                            [f1, f2, f[a3], f[a4]],
                            [m1, m2, m[a3], m[a4]],
                        );
                        let (v_dd, res_dd) = dd.m4(k);
                        let m3 = dd.m[mid];
                        let ratio_dd = (v_dd.abs() / (m3 * m3)).to_f64();
                        p.dd_max = p.dd_max.max((val.abs() * inv_m2[mid] - ratio_dd).abs());
                        if res_dd != res {
                            p.dd_mismatch += 1;
                        }
                        p.dd_checked += 1;
                    }
                }
            }
            p.evals += (hi - lo + 1).max(0) as u64;
        }
        p
    });

    let mut best = partials[0].best;
    let mut arg = partials[0].arg;
    let mut val = partials[0].val;
    let mut res = partials[0].res;
    let (mut evals, mut resonant, mut dd_checked, mut dd_mismatch) = (0u64, 0u64, 0u64, 0u64);
    let mut dd_max: f64 = 0.0;
    for p in &partials {
        if p.best > best {
            best = p.best;
            arg = p.arg;
            val = p.val;
            res = p.res;
        }
        evals += p.evals;
        resonant += p.resonant;
        dd_checked += p.dd_checked;
        dd_mismatch += p.dd_mismatch;
        dd_max = dd_max.max(p.dd_max);
    }
    let (v_dd, _) = dd.m4(arg);
    let m3 = dd.m[third_largest(arg)];
    let dd_argmax_ratio = (v_dd.abs() / (m3 * m3)).to_f64();

    Ok(M4ScanReport {
        alpha: params.alpha,
        s: params.s,
        n: params.n,
        radius: r,
        g1: params.g1.identifier().to_string(),
        sup_ratio: best,
        argmax: arg,
        argmax_m4: val,
        argmax_resonant: res,
        evaluations: evals,
        resonant,
        dd_checked,
        dd_max_ratio_error: dd_max,
        dd_branch_mismatches: dd_mismatch,
        dd_argmax_ratio,
    })
}

/// Writes the slice `k₁ = fixed` of `M₄` as `k1,k2,k3,k4,M4,resonant_flag`,
/// with `k₂, k₃` stepping through `[−radius, radius]` by `stride`.
pub fn write_m4_slice_csv<W: Write>(
    params: &ModifiedEnergyParams,
    k1: i64,
    radius: i64,
    stride: usize,
    mut out: W,
) -> Result<()> {
    let reach = radius.abs() * 2 + k1.abs();
    let table = MultiplierTable::new(params, 1.0, reach);
    writeln!(out, "k1,k2,k3,k4,M4,resonant_flag")?;
    for k2 in (-radius..=radius).step_by(stride.max(1)) {
        for k3 in (-radius..=radius).step_by(stride.max(1)) {
            let k4 = -(k1 + k2 + k3);
            let k = [k1, k2, k3, k4];
            let (v, res) = m4_from_parts(
                k.map(|x| table.w(x)),
                k.map(|x| table.f(x)),
                k.map(|x| table.m(x)),
            );
            writeln!(out, "{k1},{k2},{k3},{k4},{v:?},{}", res as u8)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Naive scan over the full cube, no symmetry reduction.
    fn brute(params: &ModifiedEnergyParams, r: i64) -> f64 {
        let table = MultiplierTable::new(params, 1.0, 3 * r);
        let mut best: f64 = 0.0;
        for k1 in -r..=r {
            for k2 in -r..=r {
                for k3 in -r..=r {
                    let k4 = -(k1 + k2 + k3);
                    if k4.abs() > r {
                        continue;
                    }
                    let k = [k1, k2, k3, k4];
                    let m3 = table.m(third_largest(k) as i64);
                    best = best.max(table.m4(k).abs() / (m3 * m3));
                }
            }
        }
        best
    }

    #[test]
    fn reduced_scan_matches_brute_force() {
        for &(n, s) in &[(1.0, 0.25), (2.0, 0.25), (3.0, 0.4)] {
            let p = ModifiedEnergyParams::new(0.75, s, n).unwrap();
            let rep = m4_scan(&p, &M4ScanOptions::new(24)).unwrap();
            let b = brute(&p, 24);
            assert!(
                (rep.sup_ratio - b).abs() < 1e-13 * b,
                "N = {n}: {} vs {b}",
                rep.sup_ratio
            );
        }
    }

    #[test]
    fn low_frequency_cube_has_ratio_one() {
        let p = ModifiedEnergyParams::new(0.75, 0.25, 100.0).unwrap();
        let rep = m4_scan(&p, &M4ScanOptions::new(20)).unwrap();
        assert!((rep.sup_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let p = ModifiedEnergyParams::new(0.75, 0.25, 4.0).unwrap();
        let mut o = M4ScanOptions::new(64);
        let a = m4_scan(&p, &o).unwrap();
        o.exec = Exec::Sequential;
        let b = m4_scan(&p, &o).unwrap();
        assert_eq!(a, b);
        assert!(a.dd_checked > 0 && a.dd_max_ratio_error < 1e-8);
        assert_eq!(a.dd_branch_mismatches, 0);
        assert!((a.dd_argmax_ratio - a.sup_ratio).abs() < 1e-9 * a.sup_ratio);
    }

    #[test]
    fn slice_csv_shape() {
        let p = ModifiedEnergyParams::new(0.75, 0.25, 4.0).unwrap();
        let mut buf = Vec::new();
        write_m4_slice_csv(&p, 10, 4, 2, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k1,k2,k3,k4,M4,resonant_flag");
        assert_eq!(lines.len(), 1 + 25);
        assert!(lines[1].starts_with("10,-4,-4,-2,"));
    }
}
