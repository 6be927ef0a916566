//! Plain-text rendering of simulation results.
//!
//! Reports carry their provenance (tool, version, master seed, config
//! digest) as leading comment lines so a result file can always be traced
//! back to the exact run that produced it. Numbers are written with
//! Rust's shortest round-trip float formatting, making files byte-stable
//! across runs and machines.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::calibrate::AidReport;
use super::sweep::SweepPoint;
use crate::energy::AnchoredEnergyModel;

/// Identifies the run that produced a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub master_seed: u64,
    /// Hex digest of the exact configuration the run used, when known.
    pub config_sha256: Option<String>,
}

impl Provenance {
    pub fn new(master_seed: u64) -> Self {
        Self {
            tool: "aidsim".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            master_seed,
            config_sha256: None,
        }
    }

    #[must_use]
    pub fn with_config_digest(mut self, sha256_hex: impl Into<String>) -> Self {
        self.config_sha256 = Some(sha256_hex.into());
        self
    }

    /// The `#`-prefixed header stamped at the top of every text output.
    pub fn comment_block(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# tool: {} v{}", self.tool, self.version);
        let _ = writeln!(out, "# master_seed: {}", self.master_seed);
        if let Some(digest) = &self.config_sha256 {
            let _ = writeln!(out, "# config_sha256: {digest}");
        }
        out
    }
}

/// CSV for a BER sweep, provenance comments first, then a header row and
/// one line per grid point.
pub fn sweep_csv(points: &[SweepPoint], provenance: &Provenance) -> String {
    let mut out = provenance.comment_block();
    out.push_str("ebno_db,bits,bit_errors,ber,ci_low,ci_high,mean_iters,frames\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.ebno_db, p.bits, p.bit_errors, p.ber, p.ci_low, p.ci_high, p.mean_iterations, p.frames
        );
    }
    out
}

/// Whitespace-separated two-column series for plotting tools, with a
/// `# columns:` comment naming the axes.
pub fn two_column_series(
    rows: &[(f64, f64)],
    x_label: &str,
    y_label: &str,
    provenance: &Provenance,
) -> String {
    let mut out = provenance.comment_block();
    let _ = writeln!(out, "# columns: {x_label} {y_label}");
    for (x, y) in rows {
        let _ = writeln!(out, "{x} {y}");
    }
    out
}

/// (iterations, BER) pairs from a calibration run, one per depth.
pub fn ber_vs_iterations(report: &AidReport) -> Vec<(f64, f64)> {
    report
        .levels
        .iter()
        .map(|l| (l.iterations as f64, l.ber))
        .collect()
}

/// (iterations, joules) pairs over the calibration depths under the
/// anchored consumption model.
pub fn energy_vs_iterations(
    report: &AidReport,
    model: &AnchoredEnergyModel,
) -> Vec<(f64, f64)> {
    report
        .levels
        .iter()
        .map(|l| (l.iterations as f64, model.energy_j(l.iterations as f64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoder::DecodeConfig;
    use crate::gf2::{example_4x8, ParityCheckMatrix};
    use crate::montecarlo::{aid_calibrate, ber_sweep, AidPlan, CodeContext, SweepPlan};

    fn toy_points() -> Vec<SweepPoint> {
        let code =
            CodeContext::new(ParityCheckMatrix::from_dense(&example_4x8()).unwrap()).unwrap();
        let plan = SweepPlan {
            ebno_db_grid: vec![2.0, 6.0],
            max_bits: 4_096,
            min_bit_errors: 10,
            master_seed: 1,
            ..SweepPlan::default()
        };
        ber_sweep(&code, &plan, &DecodeConfig::default(), None).unwrap()
    }

    #[test]
    fn csv_layout_is_stable() {
        let points = toy_points();
        let prov = Provenance::new(1).with_config_digest("c0ffee");
        let csv = sweep_csv(&points, &prov);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            format!("# tool: aidsim v{}", env!("CARGO_PKG_VERSION"))
        );
        assert_eq!(lines.next().unwrap(), "# master_seed: 1");
        assert_eq!(lines.next().unwrap(), "# config_sha256: c0ffee");
        assert_eq!(
            lines.next().unwrap(),
            "ebno_db,bits,bit_errors,ber,ci_low,ci_high,mean_iters,frames"
        );
        assert_eq!(lines.count(), points.len());
        // byte-stable across repeated rendering
        assert_eq!(csv, sweep_csv(&points, &prov));
    }

    #[test]
    fn empty_sweep_renders_header_only() {
        let csv = sweep_csv(&[], &Provenance::new(1));
        assert_eq!(
            csv.lines().last().unwrap(),
            "ebno_db,bits,bit_errors,ber,ci_low,ci_high,mean_iters,frames"
        );
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn series_layout_is_stable() {
        let prov = Provenance::new(9);
        let text = two_column_series(&[(1.0, 0.5), (2.0, 0.25)], "ebno_db", "ber", &prov);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# tool: aidsim v{}", env!("CARGO_PKG_VERSION")));
        assert_eq!(lines[1], "# master_seed: 9");
        assert_eq!(lines[2], "# columns: ebno_db ber");
        assert_eq!(lines[3], "1 0.5");
        assert_eq!(lines[4], "2 0.25");
    }

    #[test]
    fn calibration_series_share_the_level_axis() {
        let code =
            CodeContext::new(ParityCheckMatrix::from_dense(&example_4x8()).unwrap()).unwrap();
        let plan = AidPlan {
            ebno_db: 6.0,
            frames: 32,
            ..AidPlan::default()
        };
        let report = aid_calibrate(&code, &plan, &DecodeConfig::default(), None).unwrap();
        let ber = ber_vs_iterations(&report);
        let energy = energy_vs_iterations(&report, &AnchoredEnergyModel::default());
        assert_eq!(ber.len(), report.max_iterations);
        assert_eq!(energy.len(), ber.len());
        assert_eq!(ber[0].0, 1.0);
        assert!((energy[0].1 - 0.939705882352941).abs() < 1e-12);
        // model is affine in the level index
        let step = energy[1].1 - energy[0].1;
        assert!((step - 0.007352941176470588).abs() < 1e-12);
    }

    #[test]
    fn provenance_round_trips_through_json() {
        let prov = Provenance::new(42).with_config_digest("abc123");
        let text = serde_json::to_string(&prov).unwrap();
        let back: Provenance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, prov);
    }
}
