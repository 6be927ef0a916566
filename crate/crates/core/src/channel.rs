//! BPSK over AWGN: modulation, noise, LLR initialization, and the analytic
//! uncoded error rate.
//!
//! Conventions: bit 0 maps to +1.0, bit 1 to -1.0, so a positive LLR favors
//! bit 0. Symbol energy is 1; for information-bit energy Eb and one-sided
//! noise density N0, sigma^2 = 1 / (2 * rate * bits_per_symbol * Eb/N0).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One operating point of the binary-input AWGN channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub ebno_db: f64,
    pub code_rate: f64,
    pub bits_per_symbol: f64,
    /// Noise standard deviation implied by the three fields above.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl ChannelParams {
    /// # Errors
    ///
    /// Propagates [`ebno_to_sigma`] validation.
    pub fn new(ebno_db: f64, code_rate: f64, bits_per_symbol: f64, seed: u64) -> Result<Self> {
        let noise_sigma = ebno_to_sigma(ebno_db, code_rate, bits_per_symbol)?;
        Ok(Self {
            ebno_db,
            code_rate,
            bits_per_symbol,
            noise_sigma,
            seed,
        })
    }
}

/// Analytic uncoded BPSK bit error rate Q(sqrt(2 * Eb/N0)) for a linear
/// (not dB) Eb/N0.
///
/// # Errors
///
/// `Negative` for a negative argument; 0 is allowed and gives 0.5.
pub fn uncoded_ber_bpsk(ebno_linear: f64) -> Result<f64> {
    if !ebno_linear.is_finite() {
        return Err(Error::NotFinite {
            name: "ebno_linear",
            value: ebno_linear,
        });
    }
    if ebno_linear < 0.0 {
        return Err(Error::Negative {
            name: "ebno_linear",
            value: ebno_linear,
        });
    }
    // Q(sqrt(2x)) = erfc(sqrt(x)) / 2
    Ok(0.5 * libm::erfc(ebno_linear.sqrt()))
}

/// Noise standard deviation for an Eb/N0 given in dB.
///
/// # Errors
///
/// `NonPositive`/`InvalidConfig` when the rate is outside (0, 1] or
/// bits_per_symbol is not positive.
pub fn ebno_to_sigma(ebno_db: f64, code_rate: f64, bits_per_symbol: f64) -> Result<f64> {
    if !ebno_db.is_finite() {
        return Err(Error::NotFinite {
            name: "ebno_db",
            value: ebno_db,
        });
    }
    if !(code_rate > 0.0 && code_rate <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "code_rate must lie in (0, 1], got {code_rate}"
        )));
    }
    if bits_per_symbol <= 0.0 {
        return Err(Error::NonPositive {
            name: "bits_per_symbol",
            value: bits_per_symbol,
        });
    }
    let ebno = 10f64.powf(ebno_db / 10.0);
    Ok((1.0 / (2.0 * code_rate * bits_per_symbol * ebno)).sqrt())
}

/// Maps bits to antipodal symbols: 0 -> +1.0, 1 -> -1.0.
///
/// # Errors
///
/// `InvalidBit` for entries other than 0 or 1.
pub fn bpsk_modulate(bits: &[u8]) -> Result<Vec<f64>> {
    bits.iter()
        .enumerate()
        .map(|(pos, &b)| match b {
            0 => Ok(1.0),
            1 => Ok(-1.0),
            value => Err(Error::InvalidBit { pos, value }),
        })
        .collect()
}

/// Adds white Gaussian noise of standard deviation `sigma`.
///
/// # Errors
///
/// `Negative` for a negative sigma; 0 passes the symbols through.
pub fn awgn<R: Rng + ?Sized>(symbols: &[f64], sigma: f64, rng: &mut R) -> Result<Vec<f64>> {
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(Error::Negative {
            name: "sigma",
            value: sigma,
        });
    }
    Ok(symbols
        .iter()
        .map(|&x| {
            let z: f64 = rng.sample(StandardNormal);
            x + sigma * z
        })
        .collect())
}

/// Channel LLRs for received samples: L = 2 * y / sigma^2.
///
/// # Errors
///
/// `NonPositive` for sigma <= 0.
pub fn llr_init(received: &[f64], sigma: f64) -> Result<Vec<f64>> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::NonPositive {
            name: "sigma",
            value: sigma,
        });
    }
    let scale = 2.0 / (sigma * sigma);
    Ok(received.iter().map(|&y| scale * y).collect())
}

/// Deterministic per-stream generator.
///
/// Stream-split rule: every independent unit of work (one simulated frame)
/// owns the ChaCha stream numbered by `stream` under the key derived from
/// `master_seed`. Draw order inside a frame is fixed, so results depend
/// only on (master_seed, stream), never on scheduling or worker count.
pub fn stream_rng(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}
