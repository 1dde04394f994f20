//! Uniform space-time grids for the finite-difference oracle.

use crate::oracle::OracleError;
use serde::Serialize;

/// A uniform cell-centered grid over [x_min, x_max] with nt time steps
/// up to t_max.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_max: f64,
    pub nt: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, nx: usize, t_max: f64, nt: usize) -> Result<Self, OracleError> {
        let g = Self {
            x_min,
            x_max,
            nx,
            t_max,
            nt,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if !(self.x_min < self.x_max) {
            return Err(OracleError::GridRejected {
                reason: format!("x_min {} must be below x_max {}", self.x_min, self.x_max),
            });
        }
        if self.nx < 16 {
            return Err(OracleError::GridRejected {
                reason: format!("nx = {} below the minimum of 16", self.nx),
            });
        }
        if self.nt < 8 {
            return Err(OracleError::GridRejected {
                reason: format!("nt = {} below the minimum of 8", self.nt),
            });
        }
        if !(self.t_max > 0.0) {
            return Err(OracleError::GridRejected {
                reason: "t_max must be positive".into(),
            });
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_max / self.nt as f64
    }

    /// Cell centers x_i = x_min + (i + 1/2) dx.
    pub fn cell_centers(&self) -> Vec<f64> {
        let h = self.dx();
        (0..self.nx).map(|i| self.x_min + (i as f64 + 0.5) * h).collect()
    }
}
