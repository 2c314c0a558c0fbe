//! Conjugate-closed row selection.
//!
//! A sampling plan lists the 1-based DFT rows that are observed.  For a real
//! time signal, row `m` (with `2 ≤ m ≤ M`) and row `M−m+2` carry conjugate
//! spectral values, so plans are closed under that pairing: this is what makes
//! `K*K` real and lets measurement vectors stay Hermitian-consistent.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Ordered, conjugate-closed set of observed DFT rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    m: usize,
    rows: Vec<usize>,
    /// Frequency in Hz for low-half rows, when the plan was built from a time
    /// grid: `f = (row − 1)/T`.
    freq_meta: BTreeMap<usize, f64>,
}

impl SamplingPlan {
    /// Build a plan from explicit 1-based rows; closes the set under
    /// conjugation and sorts it.
    pub fn from_rows(m: usize, rows: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::from_rows_with_freqs(m, rows, BTreeMap::new())
    }

    fn from_rows_with_freqs(
        m: usize,
        rows: impl IntoIterator<Item = usize>,
        freq_meta: BTreeMap<usize, f64>,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::validation("SamplingPlan requires M >= 1"));
        }
        let mut set = std::collections::BTreeSet::new();
        for row in rows {
            if row == 0 || row > m {
                return Err(Error::validation(format!(
                    "row {row} outside 1..={m}"
                )));
            }
            set.insert(row);
            if row >= 2 {
                set.insert(m - row + 2);
            }
        }
        if set.is_empty() {
            return Err(Error::validation("empty sampling plan"));
        }
        Ok(SamplingPlan {
            m,
            rows: set.into_iter().collect(),
            freq_meta,
        })
    }

    pub fn signal_len(&self) -> usize {
        self.m
    }

    /// Number of observed rows `d`.
    pub fn d(&self) -> usize {
        self.rows.len()
    }

    /// Observed rows, 1-based, strictly increasing.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Frequency metadata for low-half rows (Hz), when available.
    pub fn freq_of(&self, row: usize) -> Option<f64> {
        self.freq_meta.get(&row).copied()
    }

    /// Low-half rows of the plan: row 1 (DC), rows `2..=⌊M/2⌋+1`.  Every other
    /// plan row is the conjugate partner of one of these.
    pub fn low_half_rows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .copied()
            .filter(|&row| row == 1 || row <= self.m / 2 + 1)
            .collect()
    }

    /// Conjugate partner of a 1-based row (row 1 pairs with itself).
    pub fn conjugate_row(&self, row: usize) -> usize {
        if row == 1 {
            1
        } else {
            self.m - row + 2
        }
    }

    /// Position of `row` within the ordered plan.
    pub fn position_of(&self, row: usize) -> Option<usize> {
        self.rows.binary_search(&row).ok()
    }

    /// Whether a measurement vector respects the conjugate pairing:
    /// entries at paired rows are conjugates, self-paired entries are real.
    pub fn hermitian_residual(&self, w: &[Complex64]) -> f64 {
        let mut residual: f64 = 0.0;
        for (pos, &row) in self.rows.iter().enumerate() {
            let partner = self.conjugate_row(row);
            if let Some(ppos) = self.position_of(partner) {
                residual += (w[pos] - w[ppos].conj()).norm_sqr();
            }
        }
        (residual / 2.0).sqrt()
    }

    /// Build a Hermitian-consistent measurement vector from values given at
    /// the low-half rows; conjugate rows are mirrored automatically.
    pub fn hermitian_fill(&self, low_half: &[(usize, Complex64)]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.d()];
        let mut seen = vec![false; self.d()];
        for &(row, value) in low_half {
            let pos = self.position_of(row).ok_or_else(|| {
                Error::validation(format!("row {row} not in sampling plan"))
            })?;
            let partner = self.conjugate_row(row);
            if partner == row {
                out[pos] = Complex64::new(value.re, 0.0);
                seen[pos] = true;
            } else {
                let ppos = self
                    .position_of(partner)
                    .expect("plan is conjugate-closed");
                out[pos] = value;
                out[ppos] = value.conj();
                seen[pos] = true;
                seen[ppos] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            let missing: Vec<usize> = self
                .rows
                .iter()
                .zip(&seen)
                .filter(|(_, &s)| !s)
                .map(|(&row, _)| row)
                .collect();
            return Err(Error::validation(format!(
                "no value provided for plan rows {missing:?}"
            )));
        }
        Ok(out)
    }
}

/// Select the rows `m+1` for every integer `m` with `f_min ≤ m/T ≤ f_max`,
/// closed under conjugation, with frequency metadata `f = (row−1)/T`.
pub fn build_band_plan(m: usize, t: f64, f_min: f64, f_max: f64) -> Result<SamplingPlan> {
    if !(t > 0.0) {
        return Err(Error::validation("record length T must be positive"));
    }
    if !(0.0 < f_min && f_min <= f_max && f_max < m as f64 / t) {
        return Err(Error::validation(format!(
            "band [{f_min}, {f_max}] outside representable range (0, {})",
            m as f64 / t
        )));
    }
    for f in [f_min, f_max] {
        let cycles = f * t;
        if (cycles - cycles.round()).abs() > 1e-9 * cycles.max(1.0) {
            return Err(Error::validation(format!(
                "frequency {f} Hz is not on the Δf = 1/T = {} Hz grid",
                1.0 / t
            )));
        }
    }
    let m_lo = (f_min * t).round() as usize;
    let m_hi = (f_max * t).round() as usize;
    let mut freq_meta = BTreeMap::new();
    let mut rows = Vec::new();
    for k in m_lo..=m_hi {
        let row = k + 1;
        rows.push(row);
        freq_meta.insert(row, k as f64 / t);
    }
    SamplingPlan::from_rows_with_freqs(m, rows, freq_meta)
}

/// Like [`build_band_plan`], but snaps an off-grid band inward to the
/// `Δf = 1/T` grid: the selected rows are `m+1` for integers
/// `⌈f_min·T⌉ ≤ m ≤ ⌊f_max·T⌋`.  Used by the seismic experiments whose
/// nominal bands (e.g. `[1, 42]` Hz at `T = 1.344 s`) do not land on grid
/// frequencies.
pub fn build_band_plan_snapped(m: usize, t: f64, f_min: f64, f_max: f64) -> Result<SamplingPlan> {
    if !(t > 0.0) {
        return Err(Error::validation("record length T must be positive"));
    }
    if !(0.0 < f_min && f_min <= f_max && f_max < m as f64 / t) {
        return Err(Error::validation(format!(
            "band [{f_min}, {f_max}] outside representable range (0, {})",
            m as f64 / t
        )));
    }
    let m_lo = ((f_min * t) - 1e-9).ceil().max(1.0) as usize;
    let m_hi = ((f_max * t) + 1e-9).floor() as usize;
    if m_lo > m_hi {
        return Err(Error::validation(format!(
            "band [{f_min}, {f_max}] contains no Δf = {} Hz grid frequency",
            1.0 / t
        )));
    }
    build_band_plan(m, t, m_lo as f64 / t, m_hi as f64 / t)
}

/// Draw `round(fraction·|candidates|)` low-half rows without replacement with
/// a seeded generator, then close under conjugation.  Deterministic in
/// `(m, candidates, fraction, seed)`.
pub fn build_random_plan(
    m: usize,
    candidate_rows: &[usize],
    fraction: f64,
    seed: u64,
) -> Result<SamplingPlan> {
    if !(0.0 < fraction && fraction <= 1.0) {
        return Err(Error::validation("fraction must lie in (0, 1]"));
    }
    for &row in candidate_rows {
        if row < 2 || row > m / 2 + 1 {
            return Err(Error::validation(format!(
                "candidate row {row} outside the low half 2..={}",
                m / 2 + 1
            )));
        }
    }
    // Round half up so 50% of 30 candidates selects 15.
    let count = (fraction * candidate_rows.len() as f64 + 0.5).floor() as usize;
    if count == 0 {
        return Err(Error::validation("fraction rounds to an empty selection"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, candidate_rows.len(), count);
    SamplingPlan::from_rows(m, picked.iter().map(|i| candidate_rows[i]))
}

/// `R z`: entries of `z` at the plan rows, in plan order.
pub fn select(plan: &SamplingPlan, z: &[Complex64]) -> Result<Vec<Complex64>> {
    if z.len() != plan.m {
        return Err(Error::validation(format!(
            "select: vector length {} != M = {}",
            z.len(),
            plan.m
        )));
    }
    Ok(plan.rows.iter().map(|&row| z[row - 1]).collect())
}

/// `R* w`: scatter into an `M`-vector at the plan rows, zeros elsewhere.
pub fn select_adjoint(plan: &SamplingPlan, w: &[Complex64]) -> Result<Vec<Complex64>> {
    if w.len() != plan.d() {
        return Err(Error::validation(format!(
            "select_adjoint: vector length {} != d = {}",
            w.len(),
            plan.d()
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); plan.m];
    for (&row, &value) in plan.rows.iter().zip(w) {
        out[row - 1] = value;
    }
    Ok(out)
}
