use super::ModifiedEnergyParams;
use crate::error::{invalid, Result};
use crate::spectral::dispersion;

/// Relative tolerance selecting the resonant branch of `M₄`.
pub const EPS_RES: f64 = 1e-9;

/// A zero-sum tuple `(k₁, …, kₙ) ∈ Γₙ`, stored as lattice indices `mⱼ = λkⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTuple {
    lambda: f64,
    idx: Vec<i64>,
}

impl FrequencyTuple {
    pub fn new(lambda: f64, idx: &[i64]) -> Result<Self> {
        if ![2, 4, 6].contains(&idx.len()) {
            return Err(invalid(format!(
                "tuple order must be 2, 4 or 6, got {}",
                idx.len()
            )));
        }
        if idx.iter().sum::<i64>() != 0 {
            return Err(invalid(format!("tuple {idx:?} does not sum to zero")));
        }
        Ok(Self {
            lambda,
            idx: idx.to_vec(),
        })
    }

    /// Integer tuple on the standard lattice `λ = 1`.
    pub fn integer(idx: &[i64]) -> Result<Self> {
        Self::new(1.0, idx)
    }

    pub fn order(&self) -> usize {
        self.idx.len()
    }

    pub fn indices(&self) -> &[i64] {
        &self.idx
    }

    pub fn frequency(&self, j: usize) -> f64 {
        self.idx[j] as f64 / self.lambda
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Moduli `|k₁*| ≥ … ≥ |kₙ*|` in decreasing order.
    pub fn ordered_moduli(&self) -> Vec<f64> {
        let mut v: Vec<f64> = (0..self.order()).map(|j| self.frequency(j).abs()).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

/// `M₄` together with a flag telling whether the resonant branch was taken.
#[inline]
pub(crate) fn m4_from_parts(w: [f64; 4], f: [f64; 4], m: [f64; 4]) -> (f64, bool) {
    let den = w[0] - w[1] + w[2] - w[3];
    let wmax = w[0].max(w[1]).max(w[2]).max(w[3]);
    if den.abs() < EPS_RES * (wmax + 1.0) {
        (m[0] * m[1] * m[2] * m[3], true)
    } else {
        ((f[0] - f[1] + f[2] - f[3]) / den, false)
    }
}

/// `M₄(k₁,k₂,k₃,k₄)` for `k ∈ Γ₄`.
pub fn m4(k: &FrequencyTuple, params: &ModifiedEnergyParams) -> f64 {
    assert_eq!(k.order(), 4, "M4 needs a 4-tuple");
    m4_with_flag(k, params).0
}

pub(crate) fn m4_with_flag(k: &FrequencyTuple, params: &ModifiedEnergyParams) -> (f64, bool) {
    let mut w = [0.0; 4];
    let mut f = [0.0; 4];
    let mut m = [0.0; 4];
    for j in 0..4 {
        let kj = k.frequency(j);
        w[j] = dispersion(kj, params.alpha);
        m[j] = params.m(kj);
        f[j] = w[j] * m[j] * m[j];
    }
    m4_from_parts(w, f, m)
}

/// `M₆` as the alternating sum of `M₄` at merged frequencies.
pub fn m6(k: &FrequencyTuple, params: &ModifiedEnergyParams) -> f64 {
    assert_eq!(k.order(), 6, "M6 needs a 6-tuple");
    let i = k.indices();
    let l = k.lambda();
    let t = |a: [i64; 4]| {
        m4(
            &FrequencyTuple {
                lambda: l,
                idx: a.to_vec(),
            },
            params,
        )
    };
    t([i[0] + i[1] + i[2], i[3], i[4], i[5]]) - t([i[0], i[1] + i[2] + i[3], i[4], i[5]])
        + t([i[0], i[1], i[2] + i[3] + i[4], i[5]])
        - t([i[0], i[1], i[2], i[3] + i[4] + i[5]])
}

/// Cached `|k|^{2α}`, `m(k)` and `|k|^{2α} m(k)²` over lattice indices `|j| ≤ radius`.
#[derive(Debug, Clone)]
pub struct MultiplierTable {
    radius: i64,
    w: Vec<f64>,
    m: Vec<f64>,
    f: Vec<f64>,
}

impl MultiplierTable {
    pub fn new(params: &ModifiedEnergyParams, lambda: f64, radius: i64) -> Self {
        let len = (radius + 1) as usize;
        let mut w = Vec::with_capacity(len);
        let mut m = Vec::with_capacity(len);
        let mut f = Vec::with_capacity(len);
        for j in 0..=radius {
            let k = j as f64 / lambda;
            let wj = dispersion(k, params.alpha);
            let mj = params.m(k);
            w.push(wj);
            m.push(mj);
            f.push(wj * mj * mj);
        }
        Self { radius, w, m, f }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    #[inline]
    pub fn w(&self, j: i64) -> f64 {
        self.w[j.unsigned_abs() as usize]
    }

    #[inline]
    pub fn m(&self, j: i64) -> f64 {
        self.m[j.unsigned_abs() as usize]
    }

    #[inline]
    pub fn f(&self, j: i64) -> f64 {
        self.f[j.unsigned_abs() as usize]
    }

    #[inline]
    pub fn m4_flag(&self, k: [i64; 4]) -> (f64, bool) {
        m4_from_parts(
            [self.w(k[0]), self.w(k[1]), self.w(k[2]), self.w(k[3])],
            [self.f(k[0]), self.f(k[1]), self.f(k[2]), self.f(k[3])],
            [self.m(k[0]), self.m(k[1]), self.m(k[2]), self.m(k[3])],
        )
    }

    #[inline]
    pub fn m4(&self, k: [i64; 4]) -> f64 {
        self.m4_flag(k).0
    }

    #[inline]
    pub fn m6(&self, k: [i64; 6]) -> f64 {
        self.m4([k[0] + k[1] + k[2], k[3], k[4], k[5]])
            - self.m4([k[0], k[1] + k[2] + k[3], k[4], k[5]])
            + self.m4([k[0], k[1], k[2] + k[3] + k[4], k[5]])
            - self.m4([k[0], k[1], k[2], k[3] + k[4] + k[5]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModifiedEnergyParams {
        ModifiedEnergyParams::new(0.75, 0.25, 4.0).unwrap()
    }

    #[test]
    fn tuple_validation() {
        assert!(FrequencyTuple::integer(&[1, 2, -3]).is_err());
        assert!(FrequencyTuple::integer(&[1, 2, -3, 1]).is_err());
        let t = FrequencyTuple::new(2.0, &[3, -1, -5, 3]).unwrap();
        assert_eq!(t.frequency(2), -2.5);
        assert_eq!(t.ordered_moduli(), vec![2.5, 1.5, 1.5, 0.5]);
    }

    #[test]
    fn resonant_tuple_takes_product() {
        let p = params();
        for k in [1, 5, 9, 40] {
            let t = FrequencyTuple::integer(&[k, -k, -k, k]).unwrap();
            let (v, res) = m4_with_flag(&t, &p);
            assert!(res);
            assert!((v - p.m(k as f64).powi(4)).abs() < 1e-15);
        }
    }

    #[test]
    fn low_frequencies_give_one() {
        let p = params();
        let t = FrequencyTuple::integer(&[3, -1, 2, -4]).unwrap();
        let (v, res) = m4_with_flag(&t, &p);
        assert!(!res);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn branch_value_oracle() {
        // (8N, -8N-1, 1, 0) at N = 4: outer branch m(k)² = N/|k|
        let p = params();
        let t = FrequencyTuple::integer(&[32, -33, 1, 0]).unwrap();
        let pow15 = |k: f64| k * k.sqrt();
        let num = 4.0 * 32f64.sqrt() - 4.0 * 33f64.sqrt() + 1.0;
        let den = pow15(32.0) - pow15(33.0) + 1.0;
        assert!((m4(&t, &p) - num / den).abs() < 1e-14);
    }

    #[test]
    fn m6_vanishes_at_low_frequency() {
        let p = ModifiedEnergyParams::new(0.75, 0.25, 16.0).unwrap();
        let t = FrequencyTuple::integer(&[2, -1, 1, -2, 1, -1]).unwrap();
        assert!(m6(&t, &p).abs() < 1e-14);
    }

    #[test]
    fn m6_is_composition_of_m4() {
        let p = params();
        let k = [20, -3, 1, -2, 5, -21];
        let t = FrequencyTuple::integer(&k).unwrap();
        let q = |a: [i64; 4]| m4(&FrequencyTuple::integer(&a).unwrap(), &p);
        let hand =
            q([18, -2, 5, -21]) - q([20, -4, 5, -21]) + q([20, -3, 4, -21]) - q([20, -3, 1, -18]);
        assert!((m6(&t, &p) - hand).abs() < 1e-15);
        let table = MultiplierTable::new(&p, 1.0, 80);
        assert!((table.m6(k) - hand).abs() < 1e-15);
    }

    #[test]
    fn table_agrees_with_direct_evaluation() {
        let p = ModifiedEnergyParams::new(0.6, 0.2, 3.0).unwrap();
        let table = MultiplierTable::new(&p, 2.0, 60);
        for k in [
            [10, -7, 3, -6],
            [40, -41, 1, 0],
            [5, -5, 5, -5],
            [13, 2, -9, -6],
        ] {
            let t = FrequencyTuple::new(2.0, &k).unwrap();
            assert_eq!(table.m4(k), m4(&t, &p));
        }
    }
}
