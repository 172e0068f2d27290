use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform position grid in units of 1/k; x_max is excluded when periodic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    periodic: bool,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize, periodic: bool) -> Result<Self> {
        if n_points < 64 || !n_points.is_power_of_two() {
            return Err(Error::Grid(format!(
                "spatial grid needs a power-of-two point count >= 64, got {n_points}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::Grid(format!(
                "invalid spatial extent [{x_min}, {x_max}]"
            )));
        }
        if periodic {
            let periods = (x_max - x_min) / TAU;
            if (periods - periods.round()).abs() > 1e-9 * periods.max(1.0) || periods.round() < 1.0
            {
                return Err(Error::Grid(format!(
                    "periodic domain length {} is not an integer multiple of 2π",
                    x_max - x_min
                )));
            }
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
            periodic,
        })
    }

    /// Periodic grid [−πP, πP) spanning `periods` wavelengths of sin(kx).
    pub fn periodic(periods: u32, n_points: usize) -> Result<Self> {
        let half = PI * periods as f64;
        Self::new(-half, half, n_points, true)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        if self.periodic {
            self.length() / self.n_points as f64
        } else {
            self.length() / (self.n_points - 1) as f64
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Largest representable wavenumber π/dx.
    pub fn k_max(&self) -> f64 {
        PI / self.dx()
    }

    /// Wavenumbers in FFT order: 0, Δk, …, (N/2−1)Δk, −(N/2)Δk, …, −Δk.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points;
        let dk = TAU / (n as f64 * self.dx());
        (0..n)
            .map(|j| {
                if j < n / 2 {
                    j as f64 * dk
                } else {
                    (j as f64 - n as f64) * dk
                }
            })
            .collect()
    }
}

impl Default for SpatialGrid {
    /// Four wavelengths on 2048 points: k_max ≈ 256 ħk.
    fn default() -> Self {
        Self::periodic(4, 2048).expect("valid default grid")
    }
}
