//! Uniform time/frequency grid of the recording.

use crate::error::{Error, Result};

/// `M` samples over `[0, T)` with spacing `λ = T/M` and frequency step
/// `Δf = 1/T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_total: f64,
    pub m: usize,
}

impl TimeGrid {
    pub fn new(t_total: f64, m: usize) -> Result<Self> {
        if !(t_total > 0.0) || m == 0 {
            return Err(Error::validation("TimeGrid requires T > 0 and M >= 1"));
        }
        Ok(TimeGrid { t_total, m })
    }

    /// Sample spacing `λ = T/M`.
    pub fn lambda(&self) -> f64 {
        self.t_total / self.m as f64
    }

    /// Frequency step `Δf = 1/T`.
    pub fn delta_f(&self) -> f64 {
        1.0 / self.t_total
    }

    /// Sample time `t_n = λ·n`.
    pub fn time(&self, n: usize) -> f64 {
        self.lambda() * n as f64
    }

    /// Grid frequency `f_m = m/T`.
    pub fn frequency(&self, m: usize) -> f64 {
        m as f64 / self.t_total
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.m).map(|n| self.time(n)).collect()
    }
}
