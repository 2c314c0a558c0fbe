//! Experiment result plumbing: per-run rows, aggregates, and the report CSV.

use std::path::Path;

use crate::error::{Error, Result};
use crate::io::{fmt_f64, write_text};

/// One (case, trial, method) result.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub case: String,
    pub trial: usize,
    pub method: String,
    pub snr_db: f64,
    pub iterations: usize,
    pub wall_ms: f64,
    pub beta: f64,
    pub gamma: f64,
    pub seed: u64,
}

/// Mean SNR over trials for one (case, method).
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub case: String,
    pub method: String,
    pub mean_snr_db: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentReport {
    pub experiment: String,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            rows: Vec::new(),
        }
    }

    /// Mean SNR per (case, method), preserving first-appearance order.
    pub fn aggregates(&self) -> Vec<AggregateRow> {
        let mut order: Vec<(String, String)> = Vec::new();
        for row in &self.rows {
            let key = (row.case.clone(), row.method.clone());
            if !order.contains(&key) {
                order.push(key);
            }
        }
        order
            .into_iter()
            .map(|(case, method)| {
                let snrs: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|r| r.case == case && r.method == method)
                    .map(|r| r.snr_db)
                    .collect();
                AggregateRow {
                    mean_snr_db: snrs.iter().sum::<f64>() / snrs.len() as f64,
                    trials: snrs.len(),
                    case,
                    method,
                }
            })
            .collect()
    }

    pub fn mean_snr(&self, case: &str, method: &str) -> Result<f64> {
        self.aggregates()
            .into_iter()
            .find(|a| a.case == case && a.method == method)
            .map(|a| a.mean_snr_db)
            .ok_or_else(|| {
                Error::validation(format!("no rows for case {case:?}, method {method:?}"))
            })
    }

    /// The report CSV body (deterministic except for the wall_ms column).
    pub fn to_csv(&self) -> String {
        let mut s =
            String::from("experiment,case,trial,method,snr_db,iterations,wall_ms,beta,gamma,seed\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                r.experiment,
                r.case,
                r.trial,
                r.method,
                fmt_f64(r.snr_db),
                r.iterations,
                fmt_f64(r.wall_ms),
                fmt_f64(r.beta),
                fmt_f64(r.gamma),
                r.seed
            ));
        }
        s
    }

    /// The CSV with the wall_ms column blanked — the byte-stable view used
    /// for determinism comparisons (wall time is the one nondeterministic
    /// field).
    pub fn to_csv_masked(&self) -> String {
        self.to_csv()
            .lines()
            .map(|line| {
                // Case names may themselves contain commas, so locate the
                // wall_ms column from the right: ...,wall_ms,beta,gamma,seed.
                let mut fields: Vec<String> = line.split(',').map(|s| s.to_string()).collect();
                if fields.len() >= 10 {
                    let i = fields.len() - 4;
                    if fields[i] != "wall_ms" {
                        fields[i] = String::new();
                    }
                }
                fields.join(",") + "\n"
            })
            .collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_csv())
    }

    /// Plain-text aggregate table (echoed to stdout by the CLI).
    pub fn format_table(&self) -> String {
        let mut s = format!("experiment: {}\n", self.experiment);
        s.push_str(&format!(
            "{:<24} {:<8} {:>10} {:>7}\n",
            "case", "method", "mean SNR", "trials"
        ));
        for a in self.aggregates() {
            s.push_str(&format!(
                "{:<24} {:<8} {:>10.4} {:>7}\n",
                a.case, a.method, a.mean_snr_db, a.trials
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(case: &str, trial: usize, method: &str, snr: f64) -> ReportRow {
        ReportRow {
            experiment: "test".into(),
            case: case.into(),
            trial,
            method: method.into(),
            snr_db: snr,
            iterations: 10,
            wall_ms: 1.5,
            beta: 0.1,
            gamma: 0.2,
            seed: 7,
        }
    }

    #[test]
    fn aggregates_mean_over_trials() {
        let mut rep = ExperimentReport::new("test");
        rep.rows.push(row("a", 0, "el0m", 10.0));
        rep.rows.push(row("a", 1, "el0m", 14.0));
        rep.rows.push(row("a", 0, "l1m", 8.0));
        let agg = rep.aggregates();
        assert_eq!(agg.len(), 2);
        assert_eq!(agg[0].mean_snr_db, 12.0);
        assert_eq!(agg[0].trials, 2);
        assert_eq!(rep.mean_snr("a", "l1m").unwrap(), 8.0);
        assert!(rep.mean_snr("b", "el0m").is_err());
    }

    #[test]
    fn csv_shape_and_masking() {
        let mut rep = ExperimentReport::new("test");
        rep.rows.push(row("a", 0, "el0m", 10.0));
        let csv = rep.to_csv();
        assert!(csv.starts_with(
            "experiment,case,trial,method,snr_db,iterations,wall_ms,beta,gamma,seed\n"
        ));
        assert!(csv.contains("test,a,0,el0m,10,10,1.5,0.1,0.2,7"));
        let masked = rep.to_csv_masked();
        assert!(masked.contains("test,a,0,el0m,10,10,,0.1,0.2,7"));
        assert!(masked.contains("wall_ms"));
    }
}
