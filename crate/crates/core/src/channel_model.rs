//! Scenario configuration, random channels, the intermittent primary-radio
//! signal and received sample blocks.
//!
//! Channels are i.i.d. CSCG with unit variance per complex entry. Reverse
//! links are the transposes of the stored matrices and are never stored.

use rand::Rng;

use crate::linalg::orthonormality_error;
use crate::rng::{cscg, cscg_matrix};
use crate::{CMatrix, Error, Result};

/// Tolerance on `‖UᴴU − I‖_F` for a beamformer to count as orthonormal.
pub const ORTHONORMAL_TOL: f64 = 1e-8;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// How the interference-temperature limit is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InterferenceLimit {
    /// Threshold `ζ` on the interference power at the primary receiver.
    Zeta(f64),
    /// The power-cap coefficient `χ₁ = ζ α σ_s² / β₁` given directly.
    Chi1(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Primary-radio antennas.
    pub mp: usize,
    /// Antennas at the cognitive transmitter (CR-T1).
    pub m1: usize,
    /// Antennas at the cognitive receiver (CR-T2).
    pub m2: usize,
    /// Fraction of symbols in which the primary transmits.
    pub alpha: f64,
    pub sigma_s2: f64,
    pub sigma_n1_2: f64,
    pub sigma_n2_2: f64,
    /// Frame length in symbols.
    pub n_frame: usize,
    /// Per-frame power budget of the cognitive transmitter.
    pub power_total: f64,
    pub limit: InterferenceLimit,
}

impl Default for SystemConfig {
    /// Two-antenna primary, four-antenna cognitive terminals, 20 dB primary
    /// power, unit noise, `N = 1000`, `P = 20000`, `χ₁ = 0.16`.
    fn default() -> Self {
        SystemConfig {
            mp: 2,
            m1: 4,
            m2: 4,
            alpha: 0.5,
            sigma_s2: db_to_linear(20.0),
            sigma_n1_2: 1.0,
            sigma_n2_2: 1.0,
            n_frame: 1000,
            power_total: 20_000.0,
            limit: InterferenceLimit::Chi1(0.16),
        }
    }
}

impl SystemConfig {
    /// Effective dimension at the transmitter, `M₁ − M_p`.
    pub fn k1(&self) -> usize {
        self.m1 - self.mp
    }

    /// Effective dimension at the receiver, `M₂ − M_p`.
    pub fn k2(&self) -> usize {
        self.m2 - self.mp
    }

    pub fn validate(&self) -> Result<()> {
        if self.mp < 1 {
            return Err(Error::config("mp", "need at least one primary antenna"));
        }
        if self.m1 <= self.mp {
            return Err(Error::config("m1", format!("must exceed mp = {}", self.mp)));
        }
        if self.m2 <= self.mp {
            return Err(Error::config("m2", format!("must exceed mp = {}", self.mp)));
        }
        if self.m1 > self.m2 {
            return Err(Error::config("m1", "the transmitter must not have more antennas than the receiver (K1 <= K2)"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::config("alpha", "must lie in (0, 1]"));
        }
        for (key, v) in [
            ("sigma_s_db", self.sigma_s2),
            ("sigma_n1_db", self.sigma_n1_2),
            ("sigma_n2_db", self.sigma_n2_2),
            ("power_total", self.power_total),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(key, "power must be finite and positive"));
            }
        }
        if self.n_frame < self.k1() + 2 {
            return Err(Error::config(
                "n_frame",
                format!("must be at least K1 + 2 = {}", self.k1() + 2),
            ));
        }
        match self.limit {
            InterferenceLimit::Zeta(z) if !(z.is_finite() && z > 0.0) => {
                Err(Error::config("zeta", "must be finite and positive"))
            }
            InterferenceLimit::Chi1(c) if !(c.is_finite() && c > 0.0) => {
                Err(Error::config("chi1", "must be finite and positive"))
            }
            _ => Ok(()),
        }
    }

    /// `χ₁` for the given transmitter-side interference constant `β₁`.
    pub fn chi1(&self, beta1: f64) -> f64 {
        match self.limit {
            InterferenceLimit::Chi1(c) => c,
            InterferenceLimit::Zeta(z) => crate::learning::compute_chi(z, self.alpha, self.sigma_s2, beta1),
        }
    }
}

/// One realization of the three channel matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    /// Primary → CR-T1, `M₁ × M_p`.
    pub g1: CMatrix,
    /// Primary → CR-T2, `M₂ × M_p`.
    pub g2: CMatrix,
    /// CR-T1 → CR-T2, `M₂ × M₁`.
    pub h: CMatrix,
}

pub fn draw_channels<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> ChannelSet {
    let g1 = cscg_matrix(cfg.m1, cfg.mp, 1.0, rng);
    let g2 = cscg_matrix(cfg.m2, cfg.mp, 1.0, rng);
    let h = cscg_matrix(cfg.m2, cfg.m1, 1.0, rng);
    ChannelSet { g1, g2, h }
}

/// Primary-radio symbols over a block; silent columns are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PrSignalBlock {
    pub symbols: CMatrix,
    pub activity: Vec<bool>,
}

impl PrSignalBlock {
    /// Each symbol is active independently with probability `alpha`; active
    /// symbols are CSCG with covariance `sigma_s2 · I`.
    ///
    /// A Gaussian vector is drawn for every column, active or not, so two
    /// blocks drawn from the same generator with different `alpha` share
    /// their symbol values.
    pub fn draw<R: Rng + ?Sized>(mp: usize, alpha: f64, sigma_s2: f64, length: usize, rng: &mut R) -> Self {
        let alpha = alpha.clamp(0.0, 1.0);
        let mut symbols = CMatrix::zeros(mp, length);
        let mut activity = Vec::with_capacity(length);
        for n in 0..length {
            let on = rng.random::<f64>() < alpha;
            for r in 0..mp {
                let s = cscg(rng, sigma_s2);
                if on {
                    symbols[(r, n)] = s;
                }
            }
            activity.push(on);
        }
        PrSignalBlock { symbols, activity }
    }

    pub fn len(&self) -> usize {
        self.activity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.activity.is_empty()
    }

    pub fn active_fraction(&self) -> f64 {
        if self.activity.is_empty() {
            return 0.0;
        }
        self.activity.iter().filter(|&&a| a).count() as f64 / self.activity.len() as f64
    }
}

pub fn draw_pr_block<R: Rng + ?Sized>(cfg: &SystemConfig, length: usize, rng: &mut R) -> PrSignalBlock {
    PrSignalBlock::draw(cfg.mp, cfg.alpha, cfg.sigma_s2, length, rng)
}

/// Samples at one terminal, one column per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedBlock {
    pub samples: CMatrix,
}

impl ReceivedBlock {
    pub fn len(&self) -> usize {
        self.samples.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.ncols() == 0
    }
}

/// `channel · symbols` plus CSCG noise of per-entry variance `noise_power`.
pub fn receive<R: Rng + ?Sized>(
    channel: &CMatrix,
    pr_block: &PrSignalBlock,
    noise_power: f64,
    rng: &mut R,
) -> Result<ReceivedBlock> {
    if channel.ncols() != pr_block.symbols.nrows() {
        return Err(Error::Shape(format!(
            "channel has {} columns but the primary block has {} antennas",
            channel.ncols(),
            pr_block.symbols.nrows()
        )));
    }
    let mut samples = channel * &pr_block.symbols;
    if noise_power > 0.0 {
        for c in 0..samples.ncols() {
            for r in 0..samples.nrows() {
                samples[(r, c)] += cscg(rng, noise_power);
            }
        }
    }
    Ok(ReceivedBlock { samples })
}

/// Combines a received block with the learned noise-subspace basis: `Ûᴴ Y`.
pub fn apply_receive_beamforming(u_hat: &CMatrix, block: &ReceivedBlock) -> Result<ReceivedBlock> {
    if u_hat.nrows() != block.samples.nrows() {
        return Err(Error::Shape(format!(
            "beamformer has {} rows but the block has {} antennas",
            u_hat.nrows(),
            block.samples.nrows()
        )));
    }
    let err = orthonormality_error(u_hat);
    if err > ORTHONORMAL_TOL {
        return Err(Error::Precondition(format!(
            "beamformer columns are not orthonormal (‖UᴴU − I‖ = {err:.3e})"
        )));
    }
    Ok(ReceivedBlock {
        samples: u_hat.adjoint() * &block.samples,
    })
}
