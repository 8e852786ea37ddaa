//! Channel training through the learned beamformers and LMMSE estimation of
//! the effective channel `F = Û₂ᴴ H Û₁*`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::channel_model::{receive, ChannelSet, PrSignalBlock, SystemConfig};
use crate::learning::LearningOutcome;
use crate::{CMatrix, Error, Result};

/// Training block with `T₁T₁ᴴ = (ρ_t N_t / K₁) I`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingMatrix {
    /// `K₁ × N_t`.
    pub t1: CMatrix,
    /// Average power per training symbol.
    pub rho_t: f64,
    pub n_t: usize,
}

impl TrainingMatrix {
    pub fn k1(&self) -> usize {
        self.t1.nrows()
    }

    /// `tr(T₁T₁ᴴ) = ρ_t N_t`.
    pub fn energy(&self) -> f64 {
        self.rho_t * self.n_t as f64
    }
}

/// First `k1` rows of the `n_t`-point unitary DFT, scaled so each row
/// carries energy `ρ_t N_t / K₁`.
pub fn build_training_matrix(k1: usize, rho_t: f64, n_t: usize) -> Result<TrainingMatrix> {
    if k1 == 0 {
        return Err(Error::Precondition("training needs K1 >= 1".into()));
    }
    if n_t < k1 {
        return Err(Error::Precondition(format!(
            "training length {n_t} is shorter than K1 = {k1}"
        )));
    }
    if !(rho_t >= 0.0 && rho_t.is_finite()) {
        return Err(Error::Precondition("training power must be finite and non-negative".into()));
    }
    let amp = (rho_t / k1 as f64).sqrt();
    let t1 = CMatrix::from_fn(k1, n_t, |r, n| {
        let phase = -2.0 * PI * ((r * n) % n_t) as f64 / n_t as f64;
        Complex64::from_polar(amp, phase)
    });
    Ok(TrainingMatrix { t1, rho_t, n_t })
}

/// `γ₂ = β₂ / N_l + σ²_{n2}`: residue interference plus noise per entry.
pub fn gamma2(beta2: f64, n_l: usize, sigma_n2_2: f64) -> f64 {
    beta2 / n_l as f64 + sigma_n2_2
}

/// Per-row error variance of the LMMSE estimate under optimal training,
/// `η₂ = γ₂K₁ / (γ₂K₁ + ρ_t N_t)`.
pub fn eta2(gamma2: f64, k1: usize, training_energy: f64) -> f64 {
    let g = gamma2 * k1 as f64;
    g / (g + training_energy)
}

/// `Û₂ᴴ H Û₁*`.
pub fn effective_channel(channels: &ChannelSet, learn: &LearningOutcome) -> CMatrix {
    effective_channel_from(&channels.h, &learn.u1_hat, &learn.u2_hat)
}

pub fn effective_channel_from(h: &CMatrix, u1_hat: &CMatrix, u2_hat: &CMatrix) -> CMatrix {
    u2_hat.adjoint() * h * u1_hat.conjugate()
}

/// Received training block at CR-T2 after receive beamforming:
/// `F T₁ + Û₂ᴴ (G₂ S_p + Z₂)` with a fresh primary block.
pub fn simulate_training_block<R: Rng + ?Sized>(
    f: &CMatrix,
    t1: &TrainingMatrix,
    channels: &ChannelSet,
    learn: &LearningOutcome,
    cfg: &SystemConfig,
    rng: &mut R,
) -> Result<CMatrix> {
    if f.ncols() != t1.k1() || f.nrows() != learn.u2_hat.ncols() {
        return Err(Error::Shape(format!(
            "effective channel is {}x{}, expected {}x{}",
            f.nrows(),
            f.ncols(),
            learn.u2_hat.ncols(),
            t1.k1()
        )));
    }
    let pr = PrSignalBlock::draw(cfg.mp, cfg.alpha, cfg.sigma_s2, t1.n_t, rng);
    let y = receive(&channels.g2, &pr, cfg.sigma_n2_2, rng)?;
    Ok(f * &t1.t1 + learn.u2_hat.adjoint() * y.samples)
}

/// `F̂ = Ỹ₂ (T₁ᴴT₁ + γ₂ I)⁻¹ T₁ᴴ`, evaluated as `Ỹ₂ T₁ᴴ (T₁T₁ᴴ + γ₂ I)⁻¹`
/// so only a `K₁ × K₁` system is factored.
pub fn lmmse_estimate(y2: &CMatrix, t1: &TrainingMatrix, gamma2: f64) -> Result<CMatrix> {
    if !(gamma2 > 0.0) {
        return Err(Error::Precondition("effective noise power must be positive".into()));
    }
    if y2.ncols() != t1.n_t {
        return Err(Error::Shape(format!(
            "received block has {} columns, training has {}",
            y2.ncols(),
            t1.n_t
        )));
    }
    let k1 = t1.k1();
    let gram = &t1.t1 * t1.t1.adjoint() + CMatrix::identity(k1, k1).scale(gamma2);
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::Numeric("training Gram matrix is not positive definite".into()))?;
    Ok(y2 * t1.t1.adjoint() * chol.inverse())
}

#[derive(Debug, Clone)]
pub struct ChannelEstimate {
    pub f_hat: CMatrix,
    pub gamma2: f64,
    pub eta2: f64,
}

impl ChannelEstimate {
    /// Per-row covariance of the estimate, `(1 − η₂) I`.
    pub fn estimate_row_variance(&self) -> f64 {
        1.0 - self.eta2
    }
}

pub fn estimate_channel(y2: &CMatrix, t1: &TrainingMatrix, gamma2: f64) -> Result<ChannelEstimate> {
    let f_hat = lmmse_estimate(y2, t1, gamma2)?;
    Ok(ChannelEstimate {
        f_hat,
        gamma2,
        eta2: eta2(gamma2, t1.k1(), t1.energy()),
    })
}

/// Average interference at the primary during training,
/// `β₁ tr(T₁T₁ᴴ) / (α σ_s² N_l N_t)`.
pub fn training_it_avg(t1: &TrainingMatrix, beta1: f64, alpha: f64, sigma_s2: f64, n_l: usize) -> f64 {
    let energy: f64 = t1.t1.iter().map(|z| z.norm_sqr()).sum();
    beta1 * energy / (alpha * sigma_s2 * n_l as f64 * t1.n_t as f64)
}
