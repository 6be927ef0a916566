//! Calibration of the early-stopping iteration budget.
//!
//! The sweep answers "how good is the code"; this module answers "how few
//! iterations buy a target quality". Every frame records the bit errors
//! its hard decision would have produced had decoding been cut off after
//! 1, 2, ... iterations. A frame that stops early (syndrome clear) holds
//! its final count for all deeper levels, which is exactly how a
//! truncated adaptive decoder would behave. The calibrated budget l_star
//! is the shallowest depth whose measured BER meets the target; when even
//! full depth misses it, the curve is still returned and l_star is
//! absent.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{frame_rng, run_in_pool, simulate_llrs, CodeContext};
use crate::channel::ebno_to_sigma;
use crate::decoder::{decode_with_observer, DecodeConfig};
use crate::energy::AnchoredEnergyModel;
use crate::error::{Error, Result};

/// Operating point and budget for one calibration run. The frame count is
/// fixed rather than error-driven so every iteration depth is measured on
/// the same sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AidPlan {
    pub ebno_db: f64,
    pub frames: u64,
    /// BER a truncation depth must reach to qualify as l_star.
    pub target_ber: f64,
    pub master_seed: u64,
}

impl Default for AidPlan {
    fn default() -> Self {
        Self {
            ebno_db: 3.25,
            frames: 2000,
            target_ber: 1e-4,
            master_seed: 1,
        }
    }
}

impl AidPlan {
    /// # Errors
    ///
    /// `InvalidConfig` for a zero frame budget or a target outside
    /// (0, 0.5), `NotFinite` for a bad operating point.
    pub fn validate(&self) -> Result<()> {
        if self.frames == 0 {
            return Err(Error::InvalidConfig("frames must be at least 1".into()));
        }
        if !self.ebno_db.is_finite() {
            return Err(Error::NotFinite {
                name: "ebno_db",
                value: self.ebno_db,
            });
        }
        if !(self.target_ber > 0.0 && self.target_ber < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "target_ber must lie in (0, 0.5), got {}",
                self.target_ber
            )));
        }
        Ok(())
    }
}

/// Truncated-decoder quality at one iteration depth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationLevel {
    pub iterations: usize,
    pub bit_errors: u64,
    pub ber: f64,
}

/// Everything a calibration run learned at its operating point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AidReport {
    pub ebno_db: f64,
    pub target_ber: f64,
    pub frames: u64,
    pub bits: u64,
    /// One entry per depth 1..=max_iterations.
    pub levels: Vec<IterationLevel>,
    /// Shallowest depth meeting the target; absent when full depth still
    /// misses it. When present, depth l_star - 1 does not meet the target.
    pub l_star: Option<usize>,
    pub full_ber: f64,
    /// Mean iterations actually spent with syndrome-based early stopping.
    pub mean_iterations_adaptive: f64,
    pub max_iterations: usize,
    /// `iteration_histogram[i]` frames stopped after exactly i + 1
    /// iterations.
    pub iteration_histogram: Vec<u64>,
}

struct FrameLevels {
    errors_per_level: Vec<u64>,
    iterations_used: u32,
}

struct Acc {
    frames: u64,
    errors_per_level: Vec<u64>,
    iteration_sum: u64,
    histogram: Vec<u64>,
}

impl Acc {
    fn zero(levels: usize) -> Self {
        Self {
            frames: 0,
            errors_per_level: vec![0; levels],
            iteration_sum: 0,
            histogram: vec![0; levels],
        }
    }

    fn add(mut self, fr: FrameLevels) -> Self {
        self.frames += 1;
        for (a, b) in self.errors_per_level.iter_mut().zip(&fr.errors_per_level) {
            *a += b;
        }
        self.iteration_sum += u64::from(fr.iterations_used);
        self.histogram[fr.iterations_used as usize - 1] += 1;
        self
    }

    fn merge(mut self, other: Self) -> Self {
        self.frames += other.frames;
        for (a, b) in self.errors_per_level.iter_mut().zip(&other.errors_per_level) {
            *a += b;
        }
        self.iteration_sum += other.iteration_sum;
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
        self
    }
}

/// Measures truncated-decoder BER at every iteration depth up to
/// `cfg.max_iterations` and finds the shallowest depth meeting the
/// target.
///
/// Early stopping in `cfg` governs the adaptive decoder being profiled;
/// depths beyond a frame's stopping point repeat its settled error count
/// either way.
///
/// # Errors
///
/// Plan, decoder-config, channel, and worker validation.
pub fn aid_calibrate(
    code: &CodeContext,
    plan: &AidPlan,
    cfg: &DecodeConfig,
    workers: Option<usize>,
) -> Result<AidReport> {
    plan.validate()?;
    cfg.validate()?;
    let sigma = ebno_to_sigma(plan.ebno_db, code.actual_rate(), 1.0)?;
    let levels = cfg.max_iterations;
    let acc = run_in_pool(workers, || {
        (0..plan.frames)
            .into_par_iter()
            .map(|frame| run_frame(code, cfg, plan.master_seed, frame, sigma))
            .fold(|| Acc::zero(levels), Acc::add)
            .reduce(|| Acc::zero(levels), Acc::merge)
    })?;

    let bits = acc.frames * code.n_bits() as u64;
    let level_reports: Vec<IterationLevel> = acc
        .errors_per_level
        .iter()
        .enumerate()
        .map(|(i, &bit_errors)| IterationLevel {
            iterations: i + 1,
            bit_errors,
            ber: bit_errors as f64 / bits as f64,
        })
        .collect();
    let full_ber = level_reports.last().expect("max_iterations >= 1").ber;
    let l_star = level_reports
        .iter()
        .position(|level| level.ber <= plan.target_ber)
        .map(|i| i + 1);

    Ok(AidReport {
        ebno_db: plan.ebno_db,
        target_ber: plan.target_ber,
        frames: acc.frames,
        bits,
        levels: level_reports,
        l_star,
        full_ber,
        mean_iterations_adaptive: acc.iteration_sum as f64 / acc.frames as f64,
        max_iterations: cfg.max_iterations,
        iteration_histogram: acc.histogram,
    })
}

fn run_frame(
    code: &CodeContext,
    cfg: &DecodeConfig,
    master_seed: u64,
    frame: u64,
    sigma: f64,
) -> FrameLevels {
    let mut rng = frame_rng(master_seed, 0, frame);
    let (tx, llr) = simulate_llrs(code, sigma, &mut rng, false);
    let mut errors_per_level = vec![0u64; cfg.max_iterations];
    let mut deepest = 0usize;
    let out = decode_with_observer(code.graph(), &llr, cfg, |iteration, posteriors| {
        let errors = posteriors
            .iter()
            .zip(&tx)
            .filter(|(&s, &b)| u8::from(s < 0.0) != b)
            .count() as u64;
        errors_per_level[iteration - 1] = errors;
        deepest = iteration;
    })
    .expect("inputs validated upfront");
    // a frame that stopped early keeps its settled count at deeper levels
    let settled = errors_per_level[deepest - 1];
    for slot in errors_per_level.iter_mut().skip(deepest) {
        *slot = settled;
    }
    FrameLevels {
        errors_per_level,
        iterations_used: out.iterations_used as u32,
    }
}

/// Energy saved by stopping at the calibrated depth instead of running a
/// fixed budget of `fixed_iterations`: 1 - E(l_star) / E(fixed).
///
/// # Errors
///
/// `FixedBelowLStar` when the fixed budget undercuts l_star, so the
/// comparison would credit a decoder that misses the BER target.
pub fn aid_savings(
    l_star: usize,
    fixed_iterations: usize,
    model: &AnchoredEnergyModel,
) -> Result<f64> {
    if fixed_iterations < l_star {
        return Err(Error::FixedBelowLStar {
            fixed_l: fixed_iterations,
            l_star,
        });
    }
    Ok(1.0 - model.energy_j(l_star as f64) / model.energy_j(fixed_iterations as f64))
}

/// Fitted per-frame energy over every iteration budget up to a fixed cap,
/// with the savings the calibrated depth buys against that cap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationEnergy {
    pub fixed_iterations: usize,
    pub l_star: Option<usize>,
    /// `energy_j_per_level[i]` is the fitted energy at i + 1 iterations.
    pub energy_j_per_level: Vec<f64>,
    /// Absent when the calibration never met its target.
    pub savings: Option<f64>,
}

/// Joins a calibration with the fitted energy model: the per-level energy
/// series for l = 1..=fixed_iterations and [`aid_savings`] at the
/// calibrated depth.
///
/// # Errors
///
/// `InvalidConfig` for a zero cap, `FixedBelowLStar` when the cap
/// undercuts the calibrated depth.
pub fn calibration_energy(
    report: &AidReport,
    fixed_iterations: usize,
    model: &AnchoredEnergyModel,
) -> Result<CalibrationEnergy> {
    if fixed_iterations == 0 {
        return Err(Error::InvalidConfig(
            "fixed_iterations must be at least 1".into(),
        ));
    }
    let savings = report
        .l_star
        .map(|l| aid_savings(l, fixed_iterations, model))
        .transpose()?;
    let energy_j_per_level = (1..=fixed_iterations)
        .map(|l| model.energy_j(l as f64))
        .collect();
    Ok(CalibrationEnergy {
        fixed_iterations,
        l_star: report.l_star,
        energy_j_per_level,
        savings,
    })
}
