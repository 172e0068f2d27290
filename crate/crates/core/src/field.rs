//! Cavity photon-number amplitude vectors {c_n}, truncated at n_max.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::C64;

/// Pure cavity state Σ c_n |n⟩, n = 0…n_max, with unit norm.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CavityFieldState {
    amplitudes: Vec<C64>,
}

impl CavityFieldState {
    /// Vacuum |0⟩.
    pub fn vacuum() -> Self {
        Self {
            amplitudes: vec![C64::new(1.0, 0.0)],
        }
    }

    /// Fock state |n⟩ embedded in a ladder truncated at `n_max`.
    pub fn fock(n: usize, n_max: usize) -> Result<Self> {
        if n > n_max {
            return Err(Error::param(
                "n",
                format!("photon number {n} exceeds n_max {n_max}"),
            ));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); n_max + 1];
        amplitudes[n] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Coherent state |α_c⟩, truncated at the smallest n_max whose
    /// discarded Poisson tail is below `tail_tol`, then renormalized.
    pub fn coherent(alpha_c: C64, tail_tol: f64) -> Result<Self> {
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(Error::param(
                "tail_tol",
                format!("must lie in (0, 1), got {tail_tol}"),
            ));
        }
        if !(alpha_c.re.is_finite() && alpha_c.im.is_finite()) {
            return Err(Error::param("alpha_c", "must be finite"));
        }
        let r = alpha_c.norm();
        if r == 0.0 {
            return Ok(Self::vacuum());
        }
        let mean = r * r;
        let theta = alpha_c.arg();
        let ln_r = r.ln();

        // ln|c_n| built recursively; factorials never formed explicitly
        let mut ln_c = -0.5 * mean;
        let mut ln_mags = vec![ln_c];
        let mut n = 0usize;
        loop {
            n += 1;
            ln_c += ln_r - 0.5 * (n as f64).ln();
            ln_mags.push(ln_c);
            let p = (2.0 * ln_c).exp();
            if n as f64 > mean && p < tail_tol * 1e-8 {
                break;
            }
        }
        let probs: Vec<f64> = ln_mags.iter().map(|l| (2.0 * l).exp()).collect();

        // tail[k] = Σ_{m > k} p_m, summed from the small end
        let mut tail = vec![0.0; probs.len()];
        let mut acc = 0.0;
        for k in (0..probs.len()).rev() {
            tail[k] = acc;
            acc += probs[k];
        }
        let n_max = tail
            .iter()
            .position(|&t| t < tail_tol)
            .unwrap_or(probs.len() - 1);

        let amplitudes = (0..=n_max)
            .map(|k| C64::from_polar(ln_mags[k].exp(), k as f64 * theta))
            .collect();
        Self::custom(amplitudes)
    }

    /// Arbitrary amplitudes, renormalized.
    pub fn custom(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::param("amplitudes", "empty amplitude list"));
        }
        if amplitudes
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::param("amplitudes", "non-finite amplitude"));
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::param("amplitudes", "all amplitudes are zero"));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|c| c / norm).collect(),
        })
    }

    pub fn n_max(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// c_n, zero above the truncation.
    pub fn c(&self, n: usize) -> C64 {
        self.amplitudes.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }
}
