//! Energy accounting for a short-range radio link feeding an iterative
//! decoder.
//!
//! The physical side works forward from a Shannon-limit receive
//! sensitivity: the minimum SNR for the configured code rate sets the
//! required received power over thermal noise, a free-space path-loss
//! factor inflates that to transmit power, and decoder work is charged per
//! message-node update. On top of that sits [`AnchoredEnergyModel`], an
//! affine per-frame consumption fitted to two measured (iterations,
//! joules) anchor points, which is what iteration-savings claims are
//! evaluated against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT_M_PER_S: f64 = 299_792_458.0;

/// Physical and architectural constants for the link.
///
/// Defaults describe a 3 m, 60 GHz indoor hop at 3 GHz bandwidth feeding a
/// rate-1/2 decoder with 1024-bit frames: the regime where transmit power
/// lands at a few milliwatts and decoding at a few milliwatts per
/// iteration, so the two budgets genuinely compete.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnergyParams {
    pub distance_m: f64,
    pub path_loss_exponent: f64,
    pub carrier_hz: f64,
    pub temperature_k: f64,
    pub boltzmann_j_per_k: f64,
    pub noise_figure_linear: f64,
    pub bandwidth_hz: f64,
    /// Modulation load on the receive sensitivity; 1 for BPSK.
    pub bits_per_symbol: f64,
    pub tx_antenna_gain: f64,
    pub rx_antenna_gain: f64,
    /// Transceiver electronics draw while sending, on top of radiated power.
    pub electronics_power_w: f64,
    /// Energy for one message-node update, J.
    pub e_node_j: f64,
    /// Decoder throughput, information bits per second.
    pub r_dec_bits_per_s: f64,
    /// Link payload rate, information bits per second.
    pub r_data_bits_per_s: f64,
    pub code_rate: f64,
    /// Coded bits per frame.
    pub frame_bits: usize,
    /// Information bits per frame.
    pub info_bits: usize,
    /// Message nodes touched per decoder iteration.
    pub message_nodes: usize,
    /// Overrides the free-space factor derived from geometry when set.
    pub path_loss_factor: Option<f64>,
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self {
            distance_m: 3.0,
            path_loss_exponent: 3.0,
            carrier_hz: 60e9,
            temperature_k: 300.0,
            boltzmann_j_per_k: 1.38065e-23,
            noise_figure_linear: 2.0,
            bandwidth_hz: 3e9,
            bits_per_symbol: 1.0,
            tx_antenna_gain: 1.0,
            rx_antenna_gain: 1.0,
            electronics_power_w: 0.144,
            e_node_j: 1e-12,
            r_dec_bits_per_s: 1.5e9,
            r_data_bits_per_s: 1.5e9,
            code_rate: 0.5,
            frame_bits: 1024,
            info_bits: 512,
            message_nodes: 1024,
            path_loss_factor: None,
        }
    }
}

impl EnergyParams {
    /// # Errors
    ///
    /// `NonPositive`/`NotFinite` for out-of-domain scalars,
    /// `InvalidConfig` for a code rate outside (0, 1], a zero-bit frame,
    /// more information bits than frame bits, or a non-positive path-loss
    /// override.
    pub fn validate(&self) -> Result<()> {
        let positives = [
            ("distance_m", self.distance_m),
            ("carrier_hz", self.carrier_hz),
            ("temperature_k", self.temperature_k),
            ("boltzmann_j_per_k", self.boltzmann_j_per_k),
            ("noise_figure_linear", self.noise_figure_linear),
            ("bandwidth_hz", self.bandwidth_hz),
            ("bits_per_symbol", self.bits_per_symbol),
            ("tx_antenna_gain", self.tx_antenna_gain),
            ("rx_antenna_gain", self.rx_antenna_gain),
            ("e_node_j", self.e_node_j),
            ("r_dec_bits_per_s", self.r_dec_bits_per_s),
            ("r_data_bits_per_s", self.r_data_bits_per_s),
        ];
        for (name, value) in positives {
            if !value.is_finite() {
                return Err(Error::NotFinite { name, value });
            }
            if value <= 0.0 {
                return Err(Error::NonPositive { name, value });
            }
        }
        if !self.path_loss_exponent.is_finite() {
            return Err(Error::NotFinite {
                name: "path_loss_exponent",
                value: self.path_loss_exponent,
            });
        }
        if self.path_loss_exponent < 0.0 {
            return Err(Error::Negative {
                name: "path_loss_exponent",
                value: self.path_loss_exponent,
            });
        }
        if !self.electronics_power_w.is_finite() {
            return Err(Error::NotFinite {
                name: "electronics_power_w",
                value: self.electronics_power_w,
            });
        }
        if self.electronics_power_w < 0.0 {
            return Err(Error::Negative {
                name: "electronics_power_w",
                value: self.electronics_power_w,
            });
        }
        if !(self.code_rate > 0.0 && self.code_rate <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "code_rate must lie in (0, 1], got {}",
                self.code_rate
            )));
        }
        if self.frame_bits == 0 || self.info_bits == 0 || self.message_nodes == 0 {
            return Err(Error::InvalidConfig(
                "frame_bits, info_bits, and message_nodes must be nonzero".into(),
            ));
        }
        if self.info_bits > self.frame_bits {
            return Err(Error::InvalidConfig(format!(
                "info_bits {} exceeds frame_bits {}",
                self.info_bits, self.frame_bits
            )));
        }
        if let Some(f) = self.path_loss_factor {
            if !f.is_finite() || f <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "path_loss_factor override must be positive and finite, got {f}"
                )));
            }
        }
        Ok(())
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT_M_PER_S / self.carrier_hz
    }

    /// Thermal noise floor over the receive bandwidth, W.
    pub fn noise_power_w(&self) -> f64 {
        self.boltzmann_j_per_k * self.temperature_k * self.bandwidth_hz
    }

    /// Capacity-limit SNR for this code rate at 2 coded bits per symbol
    /// per hertz: 2^(2 rate) - 1. Rate 1/2 needs SNR 1; uncoded needs 3.
    pub fn min_receive_snr(&self) -> f64 {
        shannon_min_snr(self.code_rate)
    }

    /// Receive sensitivity: the weakest power that still supports the
    /// rate, noise figure and modulation load included.
    pub fn received_power_w(&self) -> f64 {
        self.min_receive_snr()
            * self.bits_per_symbol
            * self.noise_figure_linear
            * self.noise_power_w()
    }

    /// Free-space attenuation (4 pi / lambda)^2 d^n / (Gt Gr), or the
    /// configured override.
    pub fn path_loss(&self) -> f64 {
        self.path_loss_factor.unwrap_or_else(|| {
            let aperture = 4.0 * std::f64::consts::PI / self.wavelength_m();
            aperture * aperture * self.distance_m.powf(self.path_loss_exponent)
                / (self.tx_antenna_gain * self.rx_antenna_gain)
        })
    }

    /// Radiated power needed to hit the receive sensitivity, W.
    pub fn transmit_power_w(&self) -> f64 {
        self.path_loss() * self.received_power_w()
    }

    /// Radiated energy per information bit, J.
    pub fn radio_energy_per_bit_j(&self) -> f64 {
        self.transmit_power_w() / self.r_data_bits_per_s
    }

    /// Transmit-mode energy per information bit with electronics
    /// overhead, J.
    pub fn on_mode_energy_per_bit_j(&self) -> f64 {
        (self.electronics_power_w + self.transmit_power_w()) / self.r_data_bits_per_s
    }

    /// Decoder power when every frame runs `iterations` sweeps, expressed
    /// through the coded-bit throughput r_dec / rate.
    pub fn decode_power_w(&self, iterations: f64) -> f64 {
        self.e_node_j * iterations * self.r_dec_bits_per_s / self.code_rate
    }

    /// Same quantity derived per frame: node count times frame rate.
    /// Agrees with [`Self::decode_power_w`] whenever message_nodes /
    /// info_bits equals 1 / rate.
    pub fn decode_power_node_form_w(&self, iterations: f64) -> f64 {
        self.e_node_j * self.message_nodes as f64 * iterations * self.r_data_bits_per_s
            / self.info_bits as f64
    }

    /// Radiated plus decoding power for a link running flat out, W.
    pub fn total_power_w(&self, iterations: f64) -> f64 {
        self.transmit_power_w() + self.decode_power_w(iterations)
    }

    /// Least decode energy for one frame at `iterations` sweeps, J.
    pub fn decoding_energy_lower_bound_j(&self, iterations: f64) -> f64 {
        self.e_node_j * self.message_nodes as f64 * iterations
    }

    /// Decode energy amortized over the coded bits of a frame, J per bit.
    pub fn decode_energy_per_bit_j(&self, iterations: f64) -> f64 {
        self.decoding_energy_lower_bound_j(iterations) / self.frame_bits as f64
    }

    /// Wall-clock budget to decode one frame at the decoder rate, s.
    pub fn decode_time_s(&self) -> f64 {
        self.info_bits as f64 / self.r_dec_bits_per_s
    }

    /// Total power integrated over one frame's decode window, J.
    pub fn total_energy_per_frame_j(&self, iterations: f64) -> f64 {
        self.total_power_w(iterations) * self.decode_time_s()
    }

    /// Energy to push one frame's coded bits through the radio, J. The
    /// basis picks the per-bit cost every coded bit is charged at.
    pub fn frame_transmission_energy_j(
        &self,
        e_trans_bit_j: f64,
        e_dec_bit_j: f64,
        basis: TransmitChargeBasis,
    ) -> f64 {
        let per_bit = match basis {
            TransmitChargeBasis::TransmitBitEnergy => e_trans_bit_j,
            TransmitChargeBasis::DecodeBitEnergy => e_dec_bit_j,
        };
        self.frame_bits as f64 * per_bit
    }

    /// Energy to decode one frame: the decoder's per-bit cost over the
    /// frame's information payload frame_bits * rate, J.
    pub fn frame_decode_energy_j(&self, e_dec_bit_j: f64) -> f64 {
        e_dec_bit_j * self.frame_bits as f64 * self.code_rate
    }
}

/// Per-bit cost the coded bits are charged at in
/// [`EnergyParams::frame_transmission_energy_j`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransmitChargeBasis {
    /// Each coded bit costs the radio's per-bit transmit energy.
    TransmitBitEnergy,
    /// Each coded bit costs the decoder's per-bit energy instead.
    DecodeBitEnergy,
}

/// Per-bit radio energy of a duty-cycled burst that sends `n_bits` in one
/// on window: (p_sleep t_on + p_transient t_transient + p_on t_on) / n.
/// The sleep draw is charged over the on window.
///
/// # Errors
///
/// `Negative`/`NotFinite` for bad powers or times, `InvalidConfig` for an
/// empty burst.
pub fn duty_cycled_radio_energy_per_bit_j(
    p_sleep_w: f64,
    p_transient_w: f64,
    p_on_w: f64,
    t_on_s: f64,
    t_transient_s: f64,
    n_bits: u64,
) -> Result<f64> {
    for (name, value) in [
        ("p_sleep_w", p_sleep_w),
        ("p_transient_w", p_transient_w),
        ("p_on_w", p_on_w),
        ("t_on_s", t_on_s),
        ("t_transient_s", t_transient_s),
    ] {
        if !value.is_finite() {
            return Err(Error::NotFinite { name, value });
        }
        if value < 0.0 {
            return Err(Error::Negative { name, value });
        }
    }
    if n_bits == 0 {
        return Err(Error::InvalidConfig("burst must carry at least one bit".into()));
    }
    Ok((p_sleep_w * t_on_s + p_transient_w * t_transient_s + p_on_w * t_on_s) / n_bits as f64)
}

/// Capacity-limit SNR 2^(2 rate) - 1 for BPSK-like signalling at two
/// coded bits per second per hertz.
pub fn shannon_min_snr(code_rate: f64) -> f64 {
    (2.0f64).powf(2.0 * code_rate) - 1.0
}

/// Eb/N0 in decibels to plain linear SNR at the given spectral load.
pub fn ebno_db_to_snr_linear(ebno_db: f64, code_rate: f64, bits_per_symbol: f64) -> f64 {
    10f64.powf(ebno_db / 10.0) * code_rate * bits_per_symbol
}

/// Affine per-frame consumption E(l) = intercept + slope * l fitted to two
/// measured anchors, with the larger anchor as the full-effort reference
/// that savings are quoted against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchoredEnergyModel {
    intercept_j: f64,
    slope_j_per_iteration: f64,
    reference_iterations: f64,
}

impl Default for AnchoredEnergyModel {
    /// Fit through the measured pair (50 iterations, 1.3 J) and
    /// (16 iterations, 1.05 J).
    fn default() -> Self {
        Self::from_anchors((50.0, 1.3), (16.0, 1.05)).expect("reference anchors are valid")
    }
}

impl AnchoredEnergyModel {
    /// Fits the line through two (iterations, joules) measurements.
    ///
    /// # Errors
    ///
    /// `InvalidConfig` when the iteration counts coincide, when either
    /// coordinate is non-positive or non-finite, or when the fitted line
    /// fails to be increasing with a positive zero-iteration intercept.
    pub fn from_anchors(a: (f64, f64), b: (f64, f64)) -> Result<Self> {
        for (name, v) in [("iterations", a.0), ("iterations", b.0), ("energy", a.1), ("energy", b.1)]
        {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "anchor {name} must be positive and finite, got {v}"
                )));
            }
        }
        if a.0 == b.0 {
            return Err(Error::InvalidConfig(
                "anchors need distinct iteration counts".into(),
            ));
        }
        let slope = (a.1 - b.1) / (a.0 - b.0);
        let intercept = a.1 - slope * a.0;
        if slope <= 0.0 || intercept <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "anchors fit a non-physical line: intercept {intercept} J, slope {slope} J/iteration"
            )));
        }
        Ok(Self {
            intercept_j: intercept,
            slope_j_per_iteration: slope,
            reference_iterations: a.0.max(b.0),
        })
    }

    pub fn intercept_j(&self) -> f64 {
        self.intercept_j
    }

    pub fn slope_j_per_iteration(&self) -> f64 {
        self.slope_j_per_iteration
    }

    pub fn reference_iterations(&self) -> f64 {
        self.reference_iterations
    }

    /// Fitted consumption at an average of `iterations` sweeps per frame, J.
    pub fn energy_j(&self, iterations: f64) -> f64 {
        self.intercept_j + self.slope_j_per_iteration * iterations
    }

    /// Fraction of the full-effort energy saved by stopping at
    /// `iterations` instead of the reference count.
    pub fn savings(&self, iterations: f64) -> f64 {
        1.0 - self.energy_j(iterations) / self.energy_j(self.reference_iterations)
    }
}

/// Physical and fitted energy figures at one early-stopping operating
/// point, ready for serialization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub transmit_power_w: f64,
    pub received_power_w: f64,
    pub path_loss_factor: f64,
    pub min_receive_snr: f64,
    pub decode_power_per_iteration_w: f64,
    pub reference_iterations: f64,
    pub early_iterations: f64,
    pub total_power_reference_w: f64,
    pub total_power_early_w: f64,
    /// Total power integrated over one frame's decode window.
    pub total_energy_reference_j: f64,
    pub total_energy_early_j: f64,
    pub anchored_energy_reference_j: f64,
    pub anchored_energy_early_j: f64,
    pub energy_savings_fraction: f64,
}

/// Evaluates both the physical link model and the anchored fit at an
/// early-stopping iteration count.
///
/// # Errors
///
/// Propagates parameter validation; `NonPositive` for a bad
/// `early_iterations`.
pub fn build_report(
    params: &EnergyParams,
    anchored: &AnchoredEnergyModel,
    early_iterations: f64,
) -> Result<EnergyReport> {
    params.validate()?;
    if !early_iterations.is_finite() {
        return Err(Error::NotFinite {
            name: "early_iterations",
            value: early_iterations,
        });
    }
    if early_iterations <= 0.0 {
        return Err(Error::NonPositive {
            name: "early_iterations",
            value: early_iterations,
        });
    }
    let reference = anchored.reference_iterations();
    Ok(EnergyReport {
        transmit_power_w: params.transmit_power_w(),
        received_power_w: params.received_power_w(),
        path_loss_factor: params.path_loss(),
        min_receive_snr: params.min_receive_snr(),
        decode_power_per_iteration_w: params.decode_power_w(1.0),
        reference_iterations: reference,
        early_iterations,
        total_power_reference_w: params.total_power_w(reference),
        total_power_early_w: params.total_power_w(early_iterations),
        total_energy_reference_j: params.total_energy_per_frame_j(reference),
        total_energy_early_j: params.total_energy_per_frame_j(early_iterations),
        anchored_energy_reference_j: anchored.energy_j(reference),
        anchored_energy_early_j: anchored.energy_j(early_iterations),
        energy_savings_fraction: anchored.savings(early_iterations),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(got: f64, want: f64, rel: f64) -> bool {
        (got - want).abs() <= rel * want.abs().max(1e-300)
    }

    #[test]
    fn shannon_limits() {
        assert_eq!(shannon_min_snr(0.5), 1.0);
        assert_eq!(shannon_min_snr(1.0), 3.0);
        let p = EnergyParams::default();
        assert_eq!(p.min_receive_snr(), 1.0);
    }

    #[test]
    fn ebno_to_snr() {
        assert!(close(ebno_db_to_snr_linear(0.0, 0.5, 1.0), 0.5, 1e-15));
        assert!(close(ebno_db_to_snr_linear(10.0, 0.5, 2.0), 10.0, 1e-15));
    }

    #[test]
    fn receive_sensitivity_at_defaults() {
        let p = EnergyParams::default();
        assert!(close(p.noise_power_w(), 1.242585e-11, 1e-14));
        assert!(close(p.received_power_w(), 2.48517e-11, 1e-14));
    }

    #[test]
    fn transmit_power_lands_at_a_few_milliwatts() {
        let p = EnergyParams::default();
        let pt = p.transmit_power_w();
        assert!(close(pt, 4.24424738214798e-3, 1e-12), "got {pt}");
        assert!(pt > 1e-3 && pt < 1e-2);

        let gentle = EnergyParams {
            path_loss_exponent: 1.0,
            ..EnergyParams::default()
        };
        assert!(close(gentle.transmit_power_w(), 4.7158304246088667e-4, 1e-12));
    }

    #[test]
    fn path_loss_override_short_circuits_geometry() {
        let p = EnergyParams {
            path_loss_factor: Some(2.0),
            ..EnergyParams::default()
        };
        assert_eq!(p.path_loss(), 2.0);
        assert!(close(p.transmit_power_w(), 2.0 * p.received_power_w(), 1e-15));
    }

    #[test]
    fn decode_power_slope_is_three_milliwatts_per_iteration() {
        let p = EnergyParams::default();
        assert!(close(p.decode_power_w(1.0), 3e-3, 1e-15));
        for l in [1.0, 7.0, 16.0, 50.0] {
            assert!(close(p.decode_power_node_form_w(l), p.decode_power_w(l), 1e-12));
            assert!(close(
                p.total_power_w(l),
                p.path_loss() * p.received_power_w() + 3e-3 * l,
                1e-12
            ));
        }
    }

    #[test]
    fn total_power_is_monotone_in_iterations() {
        let p = EnergyParams::default();
        let mut prev = p.total_power_w(0.0);
        for l in 1..=60 {
            let cur = p.total_power_w(l as f64);
            assert!(cur > prev);
            prev = cur;
        }
    }

    #[test]
    fn path_loss_scales_with_distance_cubed() {
        let near = EnergyParams::default();
        let far = EnergyParams {
            distance_m: 6.0,
            ..EnergyParams::default()
        };
        assert!(close(far.transmit_power_w(), 8.0 * near.transmit_power_w(), 1e-12));
        let noisy = EnergyParams {
            noise_figure_linear: 4.0,
            ..EnergyParams::default()
        };
        assert!(close(noisy.received_power_w(), 2.0 * near.received_power_w(), 1e-15));
    }

    #[test]
    fn per_frame_and_per_bit_decode_costs() {
        let p = EnergyParams::default();
        assert!(close(p.decoding_energy_lower_bound_j(16.0), 1.6384e-8, 1e-15));
        assert!(close(p.decode_energy_per_bit_j(16.0), 1.6e-11, 1e-15));
        assert!(close(p.decode_time_s(), 3.413333333333333e-7, 1e-15));
        assert!(close(p.radio_energy_per_bit_j(), 2.8294982547653203e-12, 1e-12));
        assert!(close(p.on_mode_energy_per_bit_j(), 9.882949825476531e-11, 1e-12));
        assert!(close(p.total_energy_per_frame_j(16.0), 1.7832703106439844e-8, 1e-12));
        assert!(close(
            p.total_energy_per_frame_j(16.0),
            p.total_power_w(16.0) * p.decode_time_s(),
            1e-15
        ));
    }

    #[test]
    fn frame_energies_under_both_charge_bases() {
        let p = EnergyParams::default();
        let tx = p.frame_transmission_energy_j(
            450e-12,
            50e-12,
            TransmitChargeBasis::TransmitBitEnergy,
        );
        assert!(close(tx, 4.608e-7, 1e-15));
        let tx_at_decode_cost =
            p.frame_transmission_energy_j(450e-12, 50e-12, TransmitChargeBasis::DecodeBitEnergy);
        assert!(close(tx_at_decode_cost, 5.12e-8, 1e-15));
        assert!(close(p.frame_decode_energy_j(50e-12), 2.56e-8, 1e-15));
    }

    #[test]
    fn duty_cycled_burst_energy() {
        // hand sum: (1e-3*2e-6 + 0.1*1e-6 + 0.2*2e-6) / 1024
        let e = duty_cycled_radio_energy_per_bit_j(1e-3, 0.1, 0.2, 2e-6, 1e-6, 1024).unwrap();
        assert!(close(e, 4.90234375e-10, 1e-15));
        // transient time only enters through the transient term
        let base = duty_cycled_radio_energy_per_bit_j(1e-3, 0.0, 0.2, 2e-6, 1e-6, 1024).unwrap();
        let longer = duty_cycled_radio_energy_per_bit_j(1e-3, 0.0, 0.2, 2e-6, 9e-6, 1024).unwrap();
        assert_eq!(base, longer);
        assert!(duty_cycled_radio_energy_per_bit_j(-1e-3, 0.1, 0.2, 2e-6, 1e-6, 1024).is_err());
        assert!(duty_cycled_radio_energy_per_bit_j(1e-3, 0.1, 0.2, 2e-6, 1e-6, 0).is_err());
    }

    #[test]
    fn sensitivity_scales_with_modulation_load() {
        let p = EnergyParams {
            bits_per_symbol: 2.0,
            ..EnergyParams::default()
        };
        assert!(close(
            p.received_power_w(),
            2.0 * EnergyParams::default().received_power_w(),
            1e-15
        ));
        let bad = EnergyParams {
            bits_per_symbol: 0.0,
            ..EnergyParams::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn anchored_fit_reproduces_the_measurements() {
        let m = AnchoredEnergyModel::default();
        assert!(close(m.intercept_j(), 0.9323529411764706, 1e-15));
        assert!(close(m.slope_j_per_iteration(), 0.007352941176470588, 1e-15));
        assert_eq!(m.reference_iterations(), 50.0);
        assert!(close(m.energy_j(50.0), 1.3, 1e-14));
        assert!(close(m.energy_j(16.0), 1.05, 1e-14));
        assert!(close(m.savings(16.0), 0.1923076923076923, 1e-13));
        // the savings band [0.15, 0.30] is exactly the stop counts <= 23
        assert!(m.savings(23.0) >= 0.15);
        assert!(m.savings(24.0) < 0.15);
        assert!(m.savings(0.0) < 0.30);
        // anchor order must not matter
        let swapped = AnchoredEnergyModel::from_anchors((16.0, 1.05), (50.0, 1.3)).unwrap();
        assert_eq!(swapped, m);
    }

    #[test]
    fn anchored_fit_rejects_degenerate_inputs() {
        assert!(AnchoredEnergyModel::from_anchors((16.0, 1.0), (16.0, 1.3)).is_err());
        assert!(AnchoredEnergyModel::from_anchors((16.0, 1.3), (50.0, 1.05)).is_err());
        assert!(AnchoredEnergyModel::from_anchors((16.0, -1.0), (50.0, 1.3)).is_err());
    }

    #[test]
    fn report_collects_both_models() {
        let p = EnergyParams::default();
        let m = AnchoredEnergyModel::default();
        let r = build_report(&p, &m, 16.0).unwrap();
        assert!(close(r.transmit_power_w, 4.24424738214798e-3, 1e-12));
        assert!(close(r.energy_savings_fraction, 0.1923076923076923, 1e-13));
        assert!(close(r.total_power_early_w, r.transmit_power_w + 0.048, 1e-12));
        assert!(close(r.total_energy_early_j, 1.7832703106439844e-8, 1e-12));
        assert!(r.total_energy_reference_j > r.total_energy_early_j);
        assert!(r.total_power_reference_w > r.total_power_early_w);
        assert!(build_report(&p, &m, 0.0).is_err());
        assert!(build_report(&p, &m, f64::NAN).is_err());
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        let rejects = |p: EnergyParams| p.validate().is_err();
        assert!(rejects(EnergyParams {
            bandwidth_hz: 0.0,
            ..EnergyParams::default()
        }));
        assert!(rejects(EnergyParams {
            code_rate: 1.5,
            ..EnergyParams::default()
        }));
        assert!(rejects(EnergyParams {
            info_bits: 4096,
            ..EnergyParams::default()
        }));
        assert!(rejects(EnergyParams {
            path_loss_factor: Some(-1.0),
            ..EnergyParams::default()
        }));
        assert!(EnergyParams::default().validate().is_ok());
    }
}
