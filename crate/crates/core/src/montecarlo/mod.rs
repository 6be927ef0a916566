//! Monte Carlo link simulation: BER sweeps over an Eb/N0 grid,
//! iteration-count calibration for early-terminated decoding, and plain-
//! text report rendering.
//!
//! Every frame draws its randomness from a dedicated counter-mode stream
//! keyed by (master seed, grid point, frame index), and all accumulation
//! is integer arithmetic, so results are bit-identical no matter how many
//! worker threads run the frames or how the scheduler interleaves them.

pub mod calibrate;
pub mod report;
pub mod sweep;

pub use calibrate::{
    aid_calibrate, aid_savings, calibration_energy, AidPlan, AidReport, CalibrationEnergy,
    IterationLevel,
};
pub use report::{sweep_csv, two_column_series, Provenance};
pub use sweep::{
    ber_sweep, uncoded_ber_curve, uncoded_ber_mc, wilson_interval, SweepPlan, SweepPoint,
    UncodedPoint, Z_95,
};

use rand_chacha::ChaCha8Rng;

use crate::channel::{awgn, bpsk_modulate, llr_init, stream_rng};
use crate::error::{Error, Result};
use crate::gf2::{derive_generator, GeneratorSpec, ParityCheckMatrix, TannerGraph};

/// Frames simulated per scheduling quantum. Stopping rules are evaluated
/// only at batch boundaries, which keeps the set of simulated frames a
/// pure function of the plan.
pub(crate) const BATCH_FRAMES: u64 = 256;

/// A parity-check matrix with its derived decoding graph and encoder,
/// bundled so simulations agree on one consistent view of the code.
#[derive(Clone, Debug)]
pub struct CodeContext {
    h: ParityCheckMatrix,
    graph: TannerGraph,
    gen: GeneratorSpec,
}

impl CodeContext {
    /// # Errors
    ///
    /// `ZeroRate` when the checks leave no message freedom.
    pub fn new(h: ParityCheckMatrix) -> Result<Self> {
        let graph = TannerGraph::new(&h);
        let gen = derive_generator(&h)?;
        Ok(Self { h, graph, gen })
    }

    pub fn parity(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    pub fn generator(&self) -> &GeneratorSpec {
        &self.gen
    }

    pub fn n_bits(&self) -> usize {
        self.h.n_bits()
    }

    pub fn k(&self) -> usize {
        self.gen.k()
    }

    /// (N - M) / N from the matrix shape.
    pub fn design_rate(&self) -> f64 {
        self.h.design_rate()
    }

    /// k / N from the actual rank; equals the design rate for full-rank
    /// checks. Channel scaling uses this one.
    pub fn actual_rate(&self) -> f64 {
        self.gen.rate()
    }
}

/// Stream id for one frame: grid point in the high bits, frame counter in
/// the low 40. Keeps every frame's noise independent of worker count and
/// of every other grid point.
pub(crate) fn frame_stream(point: usize, frame: u64) -> u64 {
    debug_assert!(frame < 1 << 40, "frame counter overflows its stream field");
    ((point as u64) << 40) | frame
}

pub(crate) fn frame_rng(master_seed: u64, point: usize, frame: u64) -> ChaCha8Rng {
    stream_rng(master_seed, frame_stream(point, frame))
}

/// Draws a message, encodes it, and passes it through BPSK + AWGN.
/// Returns the transmitted codeword bits and the receiver's initial LLRs.
/// With `all_zero` set the message is fixed to zeros, skipping the encode;
/// valid as a BER shortcut because the code is linear and the channel
/// symmetric. Callers validate sigma and the code up front; the channel
/// invariants hold by construction here.
pub(crate) fn simulate_llrs(
    code: &CodeContext,
    sigma: f64,
    rng: &mut ChaCha8Rng,
    all_zero: bool,
) -> (Vec<u8>, Vec<f64>) {
    use rand::Rng;
    let tx = if all_zero {
        vec![0u8; code.n_bits()]
    } else {
        let msg: Vec<u8> = (0..code.k()).map(|_| u8::from(rng.random::<bool>())).collect();
        code.generator()
            .encode(&msg)
            .expect("message length matches k")
            .into_bits()
    };
    let symbols = bpsk_modulate(&tx).expect("codeword bits are binary");
    let received = awgn(&symbols, sigma, rng).expect("sigma validated by caller");
    let llr = llr_init(&received, sigma).expect("sigma validated by caller");
    (tx, llr)
}

/// Runs `f` on a dedicated pool of `workers` threads, or inline on the
/// global pool when no count is given.
pub(crate) fn run_in_pool<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidConfig("workers must be at least 1".into())),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
