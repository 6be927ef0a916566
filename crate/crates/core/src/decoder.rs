//! Layered belief-propagation decoding in the log domain.
//!
//! Checks are processed one at a time in ascending order (a row layer per
//! update). For check m with incident bits N(m), each update reads the
//! extrinsic input Q_mj = S_j - R_mj, recombines the neighbors through the
//! involution psi(x) = -ln(tanh(x/2)), and writes the posterior back as
//! S_j = Q_mj + R_mj_new. One iteration sweeps every check once; the
//! decoder then takes hard decisions and, when early stopping is enabled,
//! halts as soon as the syndrome clears.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{Codeword, GeneratorSpec, TannerGraph};

/// Knobs for [`decode`]. The clamps bound what reaches `psi`: channel LLRs
/// are saturated to [-llr_clamp, llr_clamp] on entry, and inside a layer
/// update |Q| is confined to [psi_floor, llr_clamp] before evaluating psi.
/// Because psi maps [psi_floor, llr_clamp] onto itself under composition,
/// check messages stay bounded by llr_clamp and posteriors stay finite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecodeConfig {
    pub max_iterations: usize,
    pub early_stop_on_syndrome: bool,
    pub llr_clamp: f64,
    pub psi_floor: f64,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            early_stop_on_syndrome: true,
            llr_clamp: 30.0,
            psi_floor: 1e-9,
        }
    }
}

impl DecodeConfig {
    /// # Errors
    ///
    /// `InvalidConfig` unless `max_iterations >= 1` and
    /// `0 < psi_floor < llr_clamp < inf`.
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if !(self.psi_floor > 0.0 && self.psi_floor < self.llr_clamp) || !self.llr_clamp.is_finite()
        {
            return Err(Error::InvalidConfig(format!(
                "need 0 < psi_floor < llr_clamp < inf, got psi_floor = {}, llr_clamp = {}",
                self.psi_floor, self.llr_clamp
            )));
        }
        Ok(())
    }
}

/// Why [`decode`] returned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// All checks satisfied before the iteration cap.
    SyndromeZero,
    /// Iteration cap reached.
    IterationCap,
}

/// Outcome of one decode. `success` holds exactly when the returned bits
/// satisfy every parity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    pub bits: Vec<u8>,
    pub iterations_used: usize,
    pub success: bool,
    pub stop_reason: StopReason,
}

/// The involution kernel psi(x) = -ln(tanh(x/2)) for x > 0.
///
/// Two evaluation branches keep the relative error near machine precision
/// at both ends, so psi(psi(x)) returns x to well under 1e-9 across
/// [1e-6, 30]. Below 1 the expm1 form resolves the near-unity tanh; at 1
/// and above, 2 atanh(e^-x) avoids the cancellation that costs the expm1
/// form twelve digits by x = 30.
///
/// # Panics
///
/// For non-positive or NaN input.
pub fn psi(x: f64) -> f64 {
    assert!(x > 0.0, "psi requires positive input, got {x}");
    if x < 1.0 {
        let e = (-x).exp();
        e.ln_1p() - (-(-x).exp_m1()).ln()
    } else {
        2.0 * (-x).exp().atanh()
    }
}

/// Per-decode working memory: posteriors S per bit, messages R per edge,
/// plus scratch sized to the widest check.
#[derive(Clone, Debug)]
pub struct DecoderState {
    s: Vec<f64>,
    r: Vec<f64>,
    scratch_q: Vec<f64>,
    scratch_psi: Vec<f64>,
    scratch_neg: Vec<bool>,
}

impl DecoderState {
    /// Initializes S to the clamped channel LLRs and every R to zero.
    ///
    /// # Errors
    ///
    /// `LengthMismatch` when `llr` is not N long, `NotFinite` for NaN or
    /// infinite entries, `InvalidConfig` from config validation.
    pub fn from_llrs(graph: &TannerGraph, llr: &[f64], cfg: &DecodeConfig) -> Result<Self> {
        cfg.validate()?;
        if llr.len() != graph.n_bits() {
            return Err(Error::LengthMismatch {
                what: "llr",
                expected: graph.n_bits(),
                got: llr.len(),
            });
        }
        if let Some(&bad) = llr.iter().find(|v| !v.is_finite()) {
            return Err(Error::NotFinite {
                name: "llr",
                value: bad,
            });
        }
        let s = llr
            .iter()
            .map(|&l| l.clamp(-cfg.llr_clamp, cfg.llr_clamp))
            .collect();
        let width = graph.max_check_degree();
        Ok(Self {
            s,
            r: vec![0.0; graph.n_edges()],
            scratch_q: vec![0.0; width],
            scratch_psi: vec![0.0; width],
            scratch_neg: vec![false; width],
        })
    }

    /// Posterior LLR per bit.
    pub fn posteriors(&self) -> &[f64] {
        &self.s
    }

    /// Check-to-bit message per edge (row-major edge numbering).
    pub fn edge_messages(&self) -> &[f64] {
        &self.r
    }
}

/// Updates one check layer in place.
///
/// For every incident bit j: Q_mj = S_j - R_mj; the outgoing magnitude is
/// psi applied to the sum of psi(|Q|) over the other neighbors, the sign
/// is the product of their signs (so in a degree-2 check the message to
/// one bit mirrors the other bit's Q, agreement reinforcing); finally
/// S_j = Q_mj + R_mj_new. The posterior therefore moves by exactly the
/// message change: S_new - S_old = R_new - R_old, an identity that holds
/// bit-exactly when both sides are recomputed through the shared
/// intermediate Q.
///
/// # Panics
///
/// When `check` is out of range (debug builds assert scratch sizing too).
pub fn layer_update(
    graph: &TannerGraph,
    cfg: &DecodeConfig,
    state: &mut DecoderState,
    check: usize,
) {
    assert!(check < graph.n_checks(), "check {check} out of range");
    let bits = graph.check_bits(check);
    let edges = graph.check_edges(check);
    let deg = bits.len();
    debug_assert!(deg <= state.scratch_q.len());

    for (t, (&j, e)) in bits.iter().zip(edges.clone()).enumerate() {
        let q = state.s[j] - state.r[e];
        state.scratch_q[t] = q;
        // zero Q counts as positive: an erased bit leans toward 0
        state.scratch_neg[t] = q < 0.0;
        let mag = q.abs().clamp(cfg.psi_floor, cfg.llr_clamp);
        state.scratch_psi[t] = psi(mag);
    }

    for (t, (&j, e)) in bits.iter().zip(edges).enumerate() {
        let mut a = 0.0;
        let mut neg = false;
        for u in 0..deg {
            if u != t {
                a += state.scratch_psi[u];
                neg ^= state.scratch_neg[u];
            }
        }
        // a == 0 only for a degree-1 check: an empty product is a fully
        // confident even parity, so pin the bit at the clamp
        let mag = if a > 0.0 { psi(a) } else { cfg.llr_clamp };
        let r_new = if neg { -mag } else { mag };
        state.r[e] = r_new;
        state.s[j] = state.scratch_q[t] + r_new;
    }
}

/// Hard decisions from posteriors: negative LLR decides 1, zero ties
/// break toward 0.
pub fn hard_decision(posteriors: &[f64]) -> Vec<u8> {
    posteriors.iter().map(|&s| u8::from(s < 0.0)).collect()
}

/// Runs layered decoding until the syndrome clears or the iteration cap.
///
/// # Errors
///
/// Propagates [`DecoderState::from_llrs`] validation.
pub fn decode(graph: &TannerGraph, llr: &[f64], cfg: &DecodeConfig) -> Result<DecodeResult> {
    decode_with_observer(graph, llr, cfg, |_, _| {})
}

/// [`decode`] with a per-iteration hook.
///
/// The observer runs after every completed sweep with the 1-based
/// iteration index and the current posteriors; it sees the same sequence
/// the decoder acts on, which is what iteration-truncation studies sample.
///
/// # Errors
///
/// Propagates [`DecoderState::from_llrs`] validation.
pub fn decode_with_observer(
    graph: &TannerGraph,
    llr: &[f64],
    cfg: &DecodeConfig,
    mut observer: impl FnMut(usize, &[f64]),
) -> Result<DecodeResult> {
    let mut state = DecoderState::from_llrs(graph, llr, cfg)?;
    let mut bits = vec![0u8; graph.n_bits()];
    for iteration in 1..=cfg.max_iterations {
        for m in 0..graph.n_checks() {
            layer_update(graph, cfg, &mut state, m);
        }
        observer(iteration, state.posteriors());
        write_hard_decision(state.posteriors(), &mut bits);
        if cfg.early_stop_on_syndrome && graph.syndrome_is_zero(&bits) {
            return Ok(DecodeResult {
                bits,
                iterations_used: iteration,
                success: true,
                stop_reason: StopReason::SyndromeZero,
            });
        }
    }
    let success = graph.syndrome_is_zero(&bits);
    Ok(DecodeResult {
        bits,
        iterations_used: cfg.max_iterations,
        success,
        stop_reason: StopReason::IterationCap,
    })
}

fn write_hard_decision(posteriors: &[f64], out: &mut [u8]) {
    for (b, &s) in out.iter_mut().zip(posteriors) {
        *b = u8::from(s < 0.0);
    }
}

/// All 2^k codewords of a small code, message values in counting order.
///
/// # Errors
///
/// `InvalidConfig` for k > 20; enumeration is exponential in k.
pub fn enumerate_codewords(gen: &GeneratorSpec) -> Result<Vec<Codeword>> {
    let k = gen.k();
    if k > 20 {
        return Err(Error::InvalidConfig(format!(
            "codeword enumeration needs k <= 20, got {k}"
        )));
    }
    let mut msg = vec![0u8; k];
    (0u64..1 << k)
        .map(|v| {
            for (i, bit) in msg.iter_mut().enumerate() {
                *bit = (v >> i & 1) as u8;
            }
            gen.encode(&msg)
        })
        .collect()
}

/// Exhaustive maximum-likelihood decoding over an enumerated codebook:
/// picks the codeword with the highest BPSK correlation to `received`.
/// Ties resolve to the earliest codeword, so the result is deterministic.
///
/// # Errors
///
/// `InvalidConfig` for an empty codebook, `LengthMismatch` when lengths
/// disagree.
pub fn ml_decode_bpsk<'a>(codewords: &'a [Codeword], received: &[f64]) -> Result<&'a Codeword> {
    let Some(first) = codewords.first() else {
        return Err(Error::InvalidConfig("empty codebook".into()));
    };
    if first.len() != received.len() {
        return Err(Error::LengthMismatch {
            what: "received",
            expected: first.len(),
            got: received.len(),
        });
    }
    let correlation = |cw: &Codeword| -> f64 {
        cw.bits()
            .iter()
            .zip(received)
            .map(|(&b, &y)| if b == 0 { y } else { -y })
            .sum()
    };
    let mut best = first;
    let mut best_metric = correlation(first);
    for cw in &codewords[1..] {
        let metric = correlation(cw);
        if metric > best_metric {
            best = cw;
            best_metric = metric;
        }
    }
    Ok(best)
}
