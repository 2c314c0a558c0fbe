//! Gridded 2D velocity fields.

use crate::error::{Error, Result};

/// `nz × nx` velocity grid with equal spacing `h` in both directions.
/// Node `(i, j)` sits at `x = i·h`, `z = j·h`; storage is row-major in `z`
/// (i.e. `velocity[j][i]` flattened as `j·nx + i`).
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityModel {
    pub nx: usize,
    pub nz: usize,
    pub h: f64,
    velocity: Vec<f64>,
}

impl VelocityModel {
    pub fn new(nx: usize, nz: usize, h: f64, velocity: Vec<f64>) -> Result<Self> {
        if nx == 0 || nz == 0 || !(h > 0.0) {
            return Err(Error::validation("VelocityModel requires nx, nz >= 1 and h > 0"));
        }
        if velocity.len() != nx * nz {
            return Err(Error::validation("VelocityModel: grid size mismatch"));
        }
        if velocity.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::validation("VelocityModel: all velocities must be positive"));
        }
        Ok(VelocityModel { nx, nz, h, velocity })
    }

    /// Constant velocity everywhere.
    pub fn homogeneous(nx: usize, nz: usize, h: f64, v: f64) -> Result<Self> {
        Self::new(nx, nz, h, vec![v; nx * nz])
    }

    /// Three horizontal layers: `v1` above `z_top`, `v2` between the
    /// interfaces, `v3` below `z_bottom` (depths in meters).
    pub fn three_layer(
        nx: usize,
        nz: usize,
        h: f64,
        z_top: f64,
        z_bottom: f64,
        v1: f64,
        v2: f64,
        v3: f64,
    ) -> Result<Self> {
        if !(0.0 < z_top && z_top < z_bottom) {
            return Err(Error::validation("three_layer requires 0 < z_top < z_bottom"));
        }
        let mut velocity = Vec::with_capacity(nx * nz);
        for j in 0..nz {
            let z = j as f64 * h;
            let v = if z < z_top {
                v1
            } else if z < z_bottom {
                v2
            } else {
                v3
            };
            velocity.extend(std::iter::repeat(v).take(nx));
        }
        Self::new(nx, nz, h, velocity)
    }

    pub fn at(&self, ix: usize, jz: usize) -> f64 {
        self.velocity[jz * self.nx + ix]
    }

    pub fn min_velocity(&self) -> f64 {
        self.velocity.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_velocity(&self) -> f64 {
        self.velocity.iter().cloned().fold(0.0, f64::max)
    }

    pub fn values(&self) -> &[f64] {
        &self.velocity
    }

    /// Nearest grid node to a physical position (meters).
    pub fn nearest_node(&self, x: f64, z: f64) -> Result<(usize, usize)> {
        let i = (x / self.h).round();
        let j = (z / self.h).round();
        if i < 0.0 || j < 0.0 || i as usize >= self.nx || j as usize >= self.nz {
            return Err(Error::validation(format!(
                "position ({x}, {z}) outside the {}x{} m model",
                (self.nx - 1) as f64 * self.h,
                (self.nz - 1) as f64 * self.h
            )));
        }
        Ok((i as usize, j as usize))
    }
}
