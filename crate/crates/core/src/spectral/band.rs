use serde::{Deserialize, Serialize};

/// Closed frequency interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, k: f64) -> bool {
        self.lo <= k && k <= self.hi
    }
}

/// Frequency set selected by a sharp Fourier cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Band {
    /// Littlewood–Paley piece `P_N`: `N/2 < |k| ≤ N` for `N > 1`, `|k| ≤ 1` otherwise.
    Dyadic(f64),
    /// Symmetric shell `lo ≤ |k| ≤ hi`.
    Shell { lo: f64, hi: f64 },
    /// Union of closed intervals.
    Intervals(Vec<Interval>),
}

impl Band {
    pub fn contains(&self, k: f64) -> bool {
        match self {
            Band::Dyadic(n) => {
                let a = k.abs();
                if *n <= 1.0 {
                    a <= 1.0
                } else {
                    *n / 2.0 < a && a <= *n
                }
            }
            Band::Shell { lo, hi } => {
                let a = k.abs();
                *lo <= a && a <= *hi
            }
            Band::Intervals(list) => list.iter().any(|i| i.contains(k)),
        }
    }

    /// `P_1, P_2, P_4, …` up to the first piece containing `k_max`.
    pub fn dyadic_family(k_max: f64) -> Vec<Band> {
        let mut out = vec![Band::Dyadic(1.0)];
        let mut n = 1.0;
        while n < k_max {
            n *= 2.0;
            out.push(Band::Dyadic(n));
        }
        out
    }
}
