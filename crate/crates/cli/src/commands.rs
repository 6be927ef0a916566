//! The five subcommands. Each one loads everything it needs from the
//! effective [`RunConfig`], writes its outputs under the configured
//! directory with a provenance stamp, and reports through its exit code:
//! 0 ok, 2 usage, 3 low confidence, 4 target unreachable.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use aidsim_core::decoder::decode;
use aidsim_core::energy::{build_report, EnergyReport};
use aidsim_core::montecarlo::{
    aid_calibrate, ber_sweep, calibration_energy, sweep_csv, two_column_series,
    uncoded_ber_curve, AidReport, CalibrationEnergy, CodeContext, Provenance, SweepPoint,
};

use crate::config::RunConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_LOW_CONFIDENCE: u8 = 3;
pub const EXIT_TARGET_UNREACHABLE: u8 = 4;

/// Effective configuration plus everything derived from it that commands
/// share: worker count, output directory, and the provenance stamp.
pub struct Ctx {
    pub cfg: RunConfig,
    pub workers: Option<usize>,
    pub provenance: Provenance,
}

impl Ctx {
    /// Validates the merged config and prepares the output directory.
    ///
    /// # Errors
    ///
    /// Invalid config sections, missing referenced files, or an
    /// unwritable output directory.
    pub fn new(cfg: RunConfig, workers: Option<usize>) -> Result<Self> {
        cfg.validate()?;
        fs::create_dir_all(&cfg.output_dir).with_context(|| {
            format!("creating output directory {}", cfg.output_dir.display())
        })?;
        let provenance = Provenance::new(cfg.master_seed).with_config_digest(cfg.digest()?);
        Ok(Self {
            cfg,
            workers,
            provenance,
        })
    }

    fn write_text(&self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.cfg.output_dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text =
            serde_json::to_string_pretty(value).with_context(|| format!("serializing {name}"))?;
        text.push('\n');
        self.write_text(name, &text)
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim_start().starts_with('#'))
}

fn parse_bits(text: &str, source: &Path) -> Result<Vec<u8>> {
    let mut bits = Vec::new();
    for (lineno, line) in data_lines(text) {
        for ch in line.chars() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_whitespace() => {}
                other => bail!(
                    "{}:{}: unexpected character {other:?}; expected 0, 1, or whitespace",
                    source.display(),
                    lineno + 1
                ),
            }
        }
    }
    Ok(bits)
}

fn parse_llrs(text: &str, source: &Path) -> Result<Vec<f64>> {
    let mut llrs = Vec::new();
    for (lineno, line) in data_lines(text) {
        for tok in line.split_whitespace() {
            llrs.push(tok.parse::<f64>().with_context(|| {
                format!("{}:{}: invalid LLR value {tok:?}", source.display(), lineno + 1)
            })?);
        }
    }
    Ok(llrs)
}

fn bits_line(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// Encodes an ASCII 0/1 message file, one codeword line per k-bit block.
///
/// # Errors
///
/// Unreadable input, non-bit characters, or a length that is not a
/// multiple of k.
pub fn cmd_encode(ctx: &Ctx, message_path: &Path, out_name: &str) -> Result<u8> {
    let code = ctx.cfg.code.load()?;
    let text = fs::read_to_string(message_path)
        .with_context(|| format!("reading message file {}", message_path.display()))?;
    let bits = parse_bits(&text, message_path)?;
    let k = code.k();
    if bits.is_empty() || bits.len() % k != 0 {
        bail!(
            "message length {} is not a positive multiple of k = {k}",
            bits.len()
        );
    }
    let mut out = ctx.provenance.comment_block();
    for frame in bits.chunks(k) {
        let cw = code.generator().encode(frame)?;
        if !code.parity().syndrome_is_zero(cw.bits())? {
            bail!("encoder produced a word failing its own parity checks");
        }
        out.push_str(&bits_line(cw.bits()));
        out.push('\n');
    }
    let path = ctx.write_text(out_name, &out)?;
    println!(
        "encoded {} frame(s) of k = {k} into n = {} bit codewords: {}",
        bits.len() / k,
        code.n_bits(),
        path.display()
    );
    Ok(EXIT_OK)
}

/// Decodes a whitespace-separated LLR file, one recovered k-bit message
/// line per n-value block.
///
/// # Errors
///
/// Unreadable input, malformed numbers, or a length that is not a
/// multiple of n.
pub fn cmd_decode(ctx: &Ctx, llr_path: &Path, out_name: &str) -> Result<u8> {
    let code = ctx.cfg.code.load()?;
    let text = fs::read_to_string(llr_path)
        .with_context(|| format!("reading LLR file {}", llr_path.display()))?;
    let llrs = parse_llrs(&text, llr_path)?;
    let n = code.n_bits();
    if llrs.is_empty() || llrs.len() % n != 0 {
        bail!(
            "LLR count {} is not a positive multiple of n = {n}",
            llrs.len()
        );
    }
    let mut out = ctx.provenance.comment_block();
    let mut successes = 0u64;
    let mut iteration_sum = 0u64;
    let frames = (llrs.len() / n) as u64;
    for frame in llrs.chunks(n) {
        let result = decode(code.graph(), frame, &ctx.cfg.decoder)?;
        successes += u64::from(result.success);
        iteration_sum += result.iterations_used as u64;
        out.push_str(&bits_line(&code.generator().extract_message(&result.bits)?));
        out.push('\n');
    }
    let path = ctx.write_text(out_name, &out)?;
    println!(
        "decoded {frames} frame(s): {successes} converged, mean iterations {:.2}: {}",
        iteration_sum as f64 / frames as f64,
        path.display()
    );
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CurveReport {
    design_rate: f64,
    actual_rate: f64,
    n_bits: usize,
    points: Vec<SweepPoint>,
}

#[derive(Serialize)]
struct SweepReport<'a> {
    provenance: &'a Provenance,
    config: &'a RunConfig,
    curves: Vec<CurveReport>,
    /// Analytic uncoded BPSK reference on the same grid.
    uncoded_reference: Vec<(f64, f64)>,
    /// With two curves: lower-rate BER at or below higher-rate BER at
    /// every grid point.
    rate_ordering_holds: Option<bool>,
}

fn rate_label(rate: f64) -> String {
    format!("{rate:.2}")
}

fn run_curve(ctx: &Ctx, code: &CodeContext) -> Result<CurveReport> {
    let plan = ctx.cfg.sweep.plan(ctx.cfg.master_seed);
    let points = ber_sweep(code, &plan, &ctx.cfg.decoder, ctx.workers)?;
    Ok(CurveReport {
        design_rate: code.design_rate(),
        actual_rate: code.actual_rate(),
        n_bits: code.n_bits(),
        points,
    })
}

/// Measures BER over the configured grid for the primary code and, when
/// configured, the comparison code. Writes CSV, JSON, and per-rate plot
/// series; exits 3 when any point missed its error budget.
///
/// # Errors
///
/// Config, simulation, and I/O failures.
pub fn cmd_ber_sweep(ctx: &Ctx) -> Result<u8> {
    let code = ctx.cfg.code.load()?;
    let mut curves = vec![run_curve(ctx, &code)?];
    if let Some(compare) = &ctx.cfg.compare_code {
        curves.push(run_curve(ctx, &compare.load()?)?);
    }

    let grid = &ctx.cfg.sweep.ebno_db_grid;
    let uncoded = uncoded_ber_curve(grid)?;
    let rate_ordering_holds = (curves.len() == 2).then(|| {
        let (low, high) = if curves[0].design_rate <= curves[1].design_rate {
            (&curves[0], &curves[1])
        } else {
            (&curves[1], &curves[0])
        };
        low.points
            .iter()
            .zip(&high.points)
            .all(|(l, h)| l.ber <= h.ber)
    });

    ctx.write_text("ber_sweep.csv", &sweep_csv(&curves[0].points, &ctx.provenance))?;
    if let Some(compare) = curves.get(1) {
        ctx.write_text(
            "ber_sweep_compare.csv",
            &sweep_csv(&compare.points, &ctx.provenance),
        )?;
    }
    for curve in &curves {
        let rows: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.ebno_db, p.ber)).collect();
        ctx.write_text(
            &format!("ber_vs_ebno_rate{}.dat", rate_label(curve.design_rate)),
            &two_column_series(&rows, "ebno_db", "ber", &ctx.provenance),
        )?;
    }
    let report = SweepReport {
        provenance: &ctx.provenance,
        config: &ctx.cfg,
        curves,
        uncoded_reference: uncoded,
        rate_ordering_holds,
    };
    ctx.write_json("ber_sweep.json", &report)?;

    let mut low_confidence = false;
    for curve in &report.curves {
        println!(
            "rate {} (n = {}):",
            rate_label(curve.design_rate),
            curve.n_bits
        );
        for p in &curve.points {
            low_confidence |= p.low_confidence;
            println!(
                "  {:>5} dB: ber {:.3e} (95% CI {:.3e}..{:.3e}), fer {:.3e}, mean iterations {:.2}, {} bits{}",
                p.ebno_db,
                p.ber,
                p.ci_low,
                p.ci_high,
                p.fer,
                p.mean_iterations,
                p.bits,
                if p.low_confidence { ", LOW CONFIDENCE" } else { "" }
            );
        }
    }
    if let Some(holds) = report.rate_ordering_holds {
        println!(
            "rate ordering (lower rate at or below higher rate at every point): {}",
            if holds { "holds" } else { "violated" }
        );
    }
    println!("reports written to {}", ctx.cfg.output_dir.display());
    Ok(if low_confidence {
        EXIT_LOW_CONFIDENCE
    } else {
        EXIT_OK
    })
}

#[derive(Serialize)]
struct AidOutput<'a> {
    provenance: &'a Provenance,
    config: &'a RunConfig,
    calibration: &'a AidReport,
    energy: &'a CalibrationEnergy,
}

/// Calibrates the early-stopping budget at the configured operating point
/// and joins it with the fitted energy model. Always writes the full
/// per-iteration curve; exits 4 when the BER target is unreachable.
///
/// # Errors
///
/// Config, simulation, and I/O failures, or a fixed budget below the
/// calibrated depth.
pub fn cmd_aid(ctx: &Ctx) -> Result<u8> {
    let code = ctx.cfg.code.load()?;
    let plan = ctx.cfg.aid.plan(ctx.cfg.master_seed);
    let calibration = aid_calibrate(&code, &plan, &ctx.cfg.decoder, ctx.workers)?;
    let model = ctx.cfg.energy_anchors.model()?;
    let energy = calibration_energy(&calibration, ctx.cfg.aid.fixed_iterations, &model)?;

    let ber_rows: Vec<(f64, f64)> = calibration
        .levels
        .iter()
        .map(|l| (l.iterations as f64, l.ber))
        .collect();
    ctx.write_text(
        "ber_vs_iterations.dat",
        &two_column_series(&ber_rows, "iterations", "ber", &ctx.provenance),
    )?;
    let energy_rows: Vec<(f64, f64)> = energy
        .energy_j_per_level
        .iter()
        .enumerate()
        .map(|(i, &e)| ((i + 1) as f64, e))
        .collect();
    ctx.write_text(
        "energy_vs_iterations.dat",
        &two_column_series(&energy_rows, "iterations", "energy_j", &ctx.provenance),
    )?;
    let output = AidOutput {
        provenance: &ctx.provenance,
        config: &ctx.cfg,
        calibration: &calibration,
        energy: &energy,
    };
    ctx.write_json("aid.json", &output)?;

    println!(
        "operating point {} dB, target BER {:.1e}, {} frames, adaptive mean {:.2} iterations",
        calibration.ebno_db,
        calibration.target_ber,
        calibration.frames,
        calibration.mean_iterations_adaptive
    );
    match (calibration.l_star, energy.savings) {
        (Some(l_star), Some(savings)) => {
            println!(
                "l_star = {l_star} (smallest depth meeting the target; full-depth BER {:.3e})",
                calibration.full_ber
            );
            println!(
                "energy savings vs fixed {} iterations: {:.4} ({:.1}%)",
                energy.fixed_iterations,
                savings,
                100.0 * savings
            );
            println!("reports written to {}", ctx.cfg.output_dir.display());
            Ok(EXIT_OK)
        }
        _ => {
            println!(
                "target BER {:.1e} unreachable within {} iterations (full-depth BER {:.3e}); curve written",
                calibration.target_ber, calibration.max_iterations, calibration.full_ber
            );
            println!("reports written to {}", ctx.cfg.output_dir.display());
            Ok(EXIT_TARGET_UNREACHABLE)
        }
    }
}

#[derive(Serialize)]
struct EnergyOutput<'a> {
    provenance: &'a Provenance,
    config: &'a RunConfig,
    early_iterations: f64,
    report: &'a EnergyReport,
}

/// Prints and writes the full energy report at a mean iteration count.
///
/// # Errors
///
/// Iterations below 1, invalid energy parameters, or I/O failures.
pub fn cmd_energy(ctx: &Ctx, iterations: f64) -> Result<u8> {
    if !(iterations.is_finite() && iterations >= 1.0) {
        bail!("iterations must be a finite value of at least 1, got {iterations}");
    }
    let model = ctx.cfg.energy_anchors.model()?;
    let report = build_report(&ctx.cfg.energy, &model, iterations)?;
    let output = EnergyOutput {
        provenance: &ctx.provenance,
        config: &ctx.cfg,
        early_iterations: iterations,
        report: &report,
    };
    ctx.write_json("energy.json", &output)?;

    println!("link budget:");
    println!("  minimum receive SNR      {:.6}", report.min_receive_snr);
    println!("  receive sensitivity      {:.6e} W", report.received_power_w);
    println!("  path loss factor         {:.6e}", report.path_loss_factor);
    println!("  transmit power           {:.6e} W", report.transmit_power_w);
    println!("decoder:");
    println!(
        "  decode power slope       {:.6e} W/iteration",
        report.decode_power_per_iteration_w
    );
    println!(
        "  total power at l = {:<4}  {:.6e} W",
        report.early_iterations, report.total_power_early_w
    );
    println!(
        "  total power at l = {:<4}  {:.6e} W",
        report.reference_iterations, report.total_power_reference_w
    );
    println!(
        "  frame energy at l = {:<4} {:.6e} J",
        report.early_iterations, report.total_energy_early_j
    );
    println!(
        "  frame energy at l = {:<4} {:.6e} J",
        report.reference_iterations, report.total_energy_reference_j
    );
    println!("fitted consumption:");
    let early_label = format!("E({})", report.early_iterations);
    let reference_label = format!("E({})", report.reference_iterations);
    println!("  {early_label:<24} {:.6} J", report.anchored_energy_early_j);
    println!(
        "  {reference_label:<24} {:.6} J",
        report.anchored_energy_reference_j
    );
    println!(
        "  savings                  {:.4} ({:.1}%)",
        report.energy_savings_fraction,
        100.0 * report.energy_savings_fraction
    );
    println!(
        "report written to {}",
        ctx.cfg.output_dir.join("energy.json").display()
    );
    Ok(EXIT_OK)
}
