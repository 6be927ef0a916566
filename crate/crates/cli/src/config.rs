//! Run configuration: one JSON document describing the code, the channel
//! grid, the decoder, the calibration, and the energy model.
//!
//! A run is fully specified by the effective configuration (file merged
//! with flag overrides) and nothing else; its SHA-256 digest is stamped
//! into every output so results can be traced back to their inputs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use aidsim_core::decoder::DecodeConfig;
use aidsim_core::energy::{AnchoredEnergyModel, EnergyParams};
use aidsim_core::gf2::{from_alist, gallager_regular, ParityCheckMatrix};
use aidsim_core::montecarlo::{AidPlan, CodeContext, SweepPlan};

/// Where a parity-check matrix comes from. Exactly one source per code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodeSpec {
    /// Regular Gallager construction with a fixed permutation seed.
    Gallager {
        n: usize,
        col_weight: usize,
        row_weight: usize,
        seed: u64,
    },
    /// Sparse matrix read from a file in alist format.
    Alist { path: PathBuf },
}

impl CodeSpec {
    /// Builds the matrix and derives its decoding graph and encoder.
    ///
    /// # Errors
    ///
    /// Construction or parse failures, unreadable files, or a code with
    /// no message freedom.
    pub fn load(&self) -> Result<CodeContext> {
        let h = self.matrix()?;
        CodeContext::new(h).context("deriving the code's encoder")
    }

    fn matrix(&self) -> Result<ParityCheckMatrix> {
        match self {
            Self::Gallager {
                n,
                col_weight,
                row_weight,
                seed,
            } => gallager_regular(*n, *col_weight, *row_weight, *seed)
                .context("constructing the Gallager code"),
            Self::Alist { path } => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading alist file {}", path.display()))?;
                from_alist(&text)
                    .with_context(|| format!("parsing alist file {}", path.display()))
            }
        }
    }

    /// # Errors
    ///
    /// Missing referenced file.
    pub fn check_references(&self) -> Result<()> {
        if let Self::Alist { path } = self {
            if !path.is_file() {
                bail!("alist file {} does not exist", path.display());
            }
        }
        Ok(())
    }
}

/// Sweep section of the config; the run's master seed completes it into a
/// [`SweepPlan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSettings {
    pub ebno_db_grid: Vec<f64>,
    pub max_bits: u64,
    pub min_bit_errors: u64,
    pub all_zero_codeword: bool,
}

impl Default for SweepSettings {
    fn default() -> Self {
        let plan = SweepPlan::default();
        Self {
            ebno_db_grid: plan.ebno_db_grid,
            max_bits: plan.max_bits,
            min_bit_errors: plan.min_bit_errors,
            all_zero_codeword: plan.all_zero_codeword,
        }
    }
}

impl SweepSettings {
    pub fn plan(&self, master_seed: u64) -> SweepPlan {
        SweepPlan {
            ebno_db_grid: self.ebno_db_grid.clone(),
            max_bits: self.max_bits,
            min_bit_errors: self.min_bit_errors,
            master_seed,
            all_zero_codeword: self.all_zero_codeword,
        }
    }
}

/// Calibration section; the master seed completes it into an [`AidPlan`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AidSettings {
    pub ebno_db: f64,
    pub frames: u64,
    pub target_ber: f64,
    /// Fixed iteration budget the savings comparison runs against.
    pub fixed_iterations: usize,
}

impl Default for AidSettings {
    fn default() -> Self {
        let plan = AidPlan::default();
        Self {
            ebno_db: plan.ebno_db,
            frames: plan.frames,
            target_ber: plan.target_ber,
            fixed_iterations: 50,
        }
    }
}

impl AidSettings {
    pub fn plan(&self, master_seed: u64) -> AidPlan {
        AidPlan {
            ebno_db: self.ebno_db,
            frames: self.frames,
            target_ber: self.target_ber,
            master_seed,
        }
    }
}

/// Two measured (iterations, joules) points pinning the affine per-frame
/// consumption model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnergyAnchors {
    pub a: (f64, f64),
    pub b: (f64, f64),
}

impl Default for EnergyAnchors {
    fn default() -> Self {
        Self {
            a: (50.0, 1.3),
            b: (16.0, 1.05),
        }
    }
}

impl EnergyAnchors {
    /// # Errors
    ///
    /// Degenerate or non-physical anchor pairs.
    pub fn model(&self) -> Result<AnchoredEnergyModel> {
        AnchoredEnergyModel::from_anchors(self.a, self.b)
            .context("fitting the anchored energy model")
    }
}

/// Everything one run needs. Flag overrides (seed, output directory) are
/// applied before any command executes, so the serialized form of this
/// struct is the run's complete record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub master_seed: u64,
    pub output_dir: PathBuf,
    pub code: CodeSpec,
    /// Second code for rate-comparison curves in the sweep command.
    pub compare_code: Option<CodeSpec>,
    pub decoder: DecodeConfig,
    pub sweep: SweepSettings,
    pub aid: AidSettings,
    pub energy: EnergyParams,
    pub energy_anchors: EnergyAnchors,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            master_seed: 1,
            output_dir: PathBuf::from("out"),
            code: CodeSpec::Gallager {
                n: 1024,
                col_weight: 3,
                row_weight: 6,
                seed: 7,
            },
            compare_code: Some(CodeSpec::Gallager {
                n: 1024,
                col_weight: 3,
                row_weight: 12,
                seed: 7,
            }),
            decoder: DecodeConfig::default(),
            sweep: SweepSettings::default(),
            aid: AidSettings::default(),
            energy: EnergyParams::default(),
            energy_anchors: EnergyAnchors::default(),
        }
    }
}

impl RunConfig {
    /// Reads a config file, or returns the builtin defaults when no path
    /// is given.
    ///
    /// # Errors
    ///
    /// Unreadable file or invalid JSON.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = fs::read_to_string(p)
                    .with_context(|| format!("reading config file {}", p.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config file {}", p.display()))
            }
        }
    }

    /// Checks every section and referenced file before any work starts.
    ///
    /// # Errors
    ///
    /// The first invalid section, with its name in the context chain.
    pub fn validate(&self) -> Result<()> {
        self.code.check_references().context("code")?;
        if let Some(code) = &self.compare_code {
            code.check_references().context("compare_code")?;
        }
        self.decoder.validate().context("decoder section")?;
        self.sweep
            .plan(self.master_seed)
            .validate()
            .context("sweep section")?;
        self.aid
            .plan(self.master_seed)
            .validate()
            .context("aid section")?;
        if self.aid.fixed_iterations == 0 {
            bail!("aid section: fixed_iterations must be at least 1");
        }
        self.energy.validate().context("energy section")?;
        self.energy_anchors.model().context("energy_anchors section")?;
        Ok(())
    }

    /// Canonical serialized form, newline-terminated.
    ///
    /// # Errors
    ///
    /// Serialization failures only.
    pub fn canonical_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self).context("serializing config")?;
        text.push('\n');
        Ok(text)
    }

    /// Hex SHA-256 of [`Self::canonical_json`], the digest stamped into
    /// every output.
    ///
    /// # Errors
    ///
    /// Serialization failures only.
    pub fn digest(&self) -> Result<String> {
        let json = self.canonical_json()?;
        let mut hasher = Sha256::new();
        hasher.update(json.as_bytes());
        Ok(hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect())
    }
}
