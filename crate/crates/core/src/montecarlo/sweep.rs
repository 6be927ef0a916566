//! BER-versus-Eb/N0 measurement for a coded BPSK link.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{frame_rng, run_in_pool, simulate_llrs, CodeContext, BATCH_FRAMES};
use crate::channel::{awgn, bpsk_modulate, ebno_to_sigma, uncoded_ber_bpsk};
use crate::decoder::{decode, DecodeConfig};
use crate::error::{Error, Result};

/// Two-sided 95% normal quantile for [`wilson_interval`].
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Bits per simulated block in [`uncoded_ber_mc`], where no code frames
/// the channel.
const UNCODED_BLOCK_BITS: u64 = 1024;

/// What to measure: the Eb/N0 grid and the per-point stopping rules.
/// Points stop at the first batch boundary where `min_bit_errors` have
/// accumulated, or unconditionally once `max_bits` coded bits are in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepPlan {
    pub ebno_db_grid: Vec<f64>,
    pub max_bits: u64,
    pub min_bit_errors: u64,
    pub master_seed: u64,
    /// Transmit the all-zero codeword instead of encoding random
    /// messages. Sound for BER because the code is linear and BPSK+AWGN
    /// is symmetric, and it skips the encoder in hot loops.
    pub all_zero_codeword: bool,
}

impl Default for SweepPlan {
    fn default() -> Self {
        Self {
            ebno_db_grid: vec![1.0, 2.0, 3.0, 4.0],
            max_bits: 2_000_000,
            min_bit_errors: 100,
            master_seed: 1,
            all_zero_codeword: false,
        }
    }
}

impl SweepPlan {
    /// # Errors
    ///
    /// `InvalidConfig` for an empty or unordered grid, a zero bit budget,
    /// or a zero error floor; `NotFinite` for a bad grid value.
    pub fn validate(&self) -> Result<()> {
        if self.ebno_db_grid.is_empty() {
            return Err(Error::InvalidConfig("ebno_db_grid must not be empty".into()));
        }
        if let Some(&bad) = self.ebno_db_grid.iter().find(|v| !v.is_finite()) {
            return Err(Error::NotFinite {
                name: "ebno_db_grid",
                value: bad,
            });
        }
        if self.ebno_db_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "ebno_db_grid must be strictly ascending".into(),
            ));
        }
        if self.max_bits == 0 {
            return Err(Error::InvalidConfig("max_bits must be at least 1".into()));
        }
        if self.min_bit_errors == 0 {
            return Err(Error::InvalidConfig("min_bit_errors must be at least 1".into()));
        }
        Ok(())
    }
}

/// Measured statistics at one grid point. `ber` counts coded-bit errors
/// over all transmitted coded bits; `iteration_histogram[i]` is the number
/// of frames whose decode used exactly i + 1 iterations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub ebno_db: f64,
    pub frames: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub mean_iterations: f64,
    pub iteration_histogram: Vec<u64>,
    /// Set when the point exhausted `max_bits` before reaching
    /// `min_bit_errors`.
    pub low_confidence: bool,
}

/// Measured statistics at one grid point of a raw, decoder-free BPSK
/// link.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncodedPoint {
    pub ebno_db: f64,
    pub bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub low_confidence: bool,
}

struct FrameStat {
    bit_errors: u32,
    iterations: u32,
}

struct Acc {
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    iteration_sum: u64,
    histogram: Vec<u64>,
}

impl Acc {
    fn zero(levels: usize) -> Self {
        Self {
            frames: 0,
            bit_errors: 0,
            frame_errors: 0,
            iteration_sum: 0,
            histogram: vec![0; levels],
        }
    }

    fn add(mut self, st: FrameStat) -> Self {
        self.frames += 1;
        self.bit_errors += u64::from(st.bit_errors);
        self.frame_errors += u64::from(st.bit_errors > 0);
        self.iteration_sum += u64::from(st.iterations);
        self.histogram[st.iterations as usize - 1] += 1;
        self
    }

    fn merge(mut self, other: Self) -> Self {
        self.frames += other.frames;
        self.bit_errors += other.bit_errors;
        self.frame_errors += other.frame_errors;
        self.iteration_sum += other.iteration_sum;
        for (a, b) in self.histogram.iter_mut().zip(&other.histogram) {
            *a += b;
        }
        self
    }
}

/// Simulates every grid point of `plan` for `code` and returns one
/// [`SweepPoint`] per grid entry, in grid order.
///
/// `workers` sizes a dedicated thread pool; `None` uses the global one.
/// The outcome is identical either way, frame for frame.
///
/// # Errors
///
/// Plan, decoder-config, and worker validation, plus `InvalidConfig`
/// when `max_bits` cannot fit a single frame of this code.
pub fn ber_sweep(
    code: &CodeContext,
    plan: &SweepPlan,
    cfg: &DecodeConfig,
    workers: Option<usize>,
) -> Result<Vec<SweepPoint>> {
    plan.validate()?;
    cfg.validate()?;
    if plan.max_bits < code.n_bits() as u64 {
        return Err(Error::InvalidConfig(format!(
            "max_bits {} cannot fit one frame of {} coded bits",
            plan.max_bits,
            code.n_bits()
        )));
    }
    let mut sigmas = Vec::with_capacity(plan.ebno_db_grid.len());
    for &ebno_db in &plan.ebno_db_grid {
        sigmas.push(ebno_to_sigma(ebno_db, code.actual_rate(), 1.0)?);
    }
    run_in_pool(workers, || {
        plan.ebno_db_grid
            .iter()
            .zip(&sigmas)
            .enumerate()
            .map(|(point, (&ebno_db, &sigma))| sweep_point(code, plan, cfg, point, ebno_db, sigma))
            .collect()
    })
}

fn sweep_point(
    code: &CodeContext,
    plan: &SweepPlan,
    cfg: &DecodeConfig,
    point: usize,
    ebno_db: f64,
    sigma: f64,
) -> SweepPoint {
    let n = code.n_bits() as u64;
    let mut acc = Acc::zero(cfg.max_iterations);
    while acc.bit_errors < plan.min_bit_errors && acc.frames * n < plan.max_bits {
        let remaining_bits = plan.max_bits - acc.frames * n;
        let batch = BATCH_FRAMES.min(remaining_bits.div_ceil(n));
        let start = acc.frames;
        let batch_acc = (start..start + batch)
            .into_par_iter()
            .map(|frame| {
                run_frame(
                    code,
                    cfg,
                    plan.master_seed,
                    point,
                    frame,
                    sigma,
                    plan.all_zero_codeword,
                )
            })
            .fold(|| Acc::zero(cfg.max_iterations), Acc::add)
            .reduce(|| Acc::zero(cfg.max_iterations), Acc::merge);
        acc = acc.merge(batch_acc);
    }
    let bits = acc.frames * n;
    let (ci_low, ci_high) = wilson_interval(acc.bit_errors, bits, Z_95);
    SweepPoint {
        ebno_db,
        frames: acc.frames,
        bits,
        bit_errors: acc.bit_errors,
        frame_errors: acc.frame_errors,
        ber: acc.bit_errors as f64 / bits as f64,
        fer: acc.frame_errors as f64 / acc.frames as f64,
        ci_low,
        ci_high,
        mean_iterations: acc.iteration_sum as f64 / acc.frames as f64,
        iteration_histogram: acc.histogram,
        low_confidence: acc.bit_errors < plan.min_bit_errors,
    }
}

fn run_frame(
    code: &CodeContext,
    cfg: &DecodeConfig,
    master_seed: u64,
    point: usize,
    frame: u64,
    sigma: f64,
    all_zero: bool,
) -> FrameStat {
    let mut rng = frame_rng(master_seed, point, frame);
    let (tx, llr) = simulate_llrs(code, sigma, &mut rng, all_zero);
    let out = decode(code.graph(), &llr, cfg).expect("inputs validated upfront");
    let bit_errors = out
        .bits
        .iter()
        .zip(&tx)
        .filter(|(a, b)| a != b)
        .count() as u32;
    FrameStat {
        bit_errors,
        iterations: out.iterations_used as u32,
    }
}

/// Monte Carlo BER of the raw BPSK link, decoder bypassed: random bits
/// straight through the channel, recovered by the sign of each sample.
/// Grid, stopping rules, seed, and confidence flags follow `plan`
/// exactly as in [`ber_sweep`]; `all_zero_codeword` has no effect here.
///
/// # Errors
///
/// Plan and worker validation.
pub fn uncoded_ber_mc(plan: &SweepPlan, workers: Option<usize>) -> Result<Vec<UncodedPoint>> {
    plan.validate()?;
    let mut sigmas = Vec::with_capacity(plan.ebno_db_grid.len());
    for &ebno_db in &plan.ebno_db_grid {
        sigmas.push(ebno_to_sigma(ebno_db, 1.0, 1.0)?);
    }
    run_in_pool(workers, || {
        plan.ebno_db_grid
            .iter()
            .zip(&sigmas)
            .enumerate()
            .map(|(point, (&ebno_db, &sigma))| uncoded_point(plan, point, ebno_db, sigma))
            .collect()
    })
}

fn uncoded_point(plan: &SweepPlan, point: usize, ebno_db: f64, sigma: f64) -> UncodedPoint {
    let n = UNCODED_BLOCK_BITS;
    let mut blocks = 0u64;
    let mut bit_errors = 0u64;
    while bit_errors < plan.min_bit_errors && blocks * n < plan.max_bits {
        let remaining_bits = plan.max_bits - blocks * n;
        let batch = BATCH_FRAMES.min(remaining_bits.div_ceil(n));
        let errs: u64 = (blocks..blocks + batch)
            .into_par_iter()
            .map(|block| uncoded_block(plan.master_seed, point, block, sigma))
            .sum();
        blocks += batch;
        bit_errors += errs;
    }
    let bits = blocks * n;
    let (ci_low, ci_high) = wilson_interval(bit_errors, bits, Z_95);
    UncodedPoint {
        ebno_db,
        bits,
        bit_errors,
        ber: bit_errors as f64 / bits as f64,
        ci_low,
        ci_high,
        low_confidence: bit_errors < plan.min_bit_errors,
    }
}

fn uncoded_block(master_seed: u64, point: usize, block: u64, sigma: f64) -> u64 {
    use rand::Rng;
    let mut rng = frame_rng(master_seed, point, block);
    let bits: Vec<u8> = (0..UNCODED_BLOCK_BITS)
        .map(|_| u8::from(rng.random::<bool>()))
        .collect();
    let symbols = bpsk_modulate(&bits).expect("bits are binary");
    let received = awgn(&symbols, sigma, &mut rng).expect("sigma validated by caller");
    received
        .iter()
        .zip(&bits)
        .filter(|(&y, &b)| u8::from(y < 0.0) != b)
        .count() as u64
}

/// Analytic uncoded BPSK reference, one (Eb/N0 dB, BER) pair per grid
/// entry.
///
/// # Errors
///
/// `NotFinite` for a bad grid value.
pub fn uncoded_ber_curve(ebno_db_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    ebno_db_grid
        .iter()
        .map(|&db| Ok((db, uncoded_ber_bpsk(10f64.powf(db / 10.0))?)))
        .collect()
}

/// Wilson score interval for an error proportion at normal quantile `z`.
/// Exact edge cases pin the bounds: zero errors give a zero lower bound,
/// all-error trials give an upper bound of one, and zero trials span the
/// whole unit interval.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = (z / denom) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if errors == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (low, high)
}
