//! Environment learning: blind noise-subspace estimation from the primary
//! radio's transmissions, and the interference constants derived from it.
//!
//! With `R = Q + σ² I` and `Q = α σ_s² G Gᴴ` of rank `M_p`, the eigenvectors
//! of the `M − M_p` smallest eigenvalues span the noise subspace `U`, and
//! `Uᴴ G = 0`. From `L` samples the estimate `Û` leaks a residue whose power
//! per antenna is `β / L` with `β = σ² (M_p + σ² tr(Q†))`.

use rand::Rng;

use crate::channel_model::{draw_pr_block, receive, ChannelSet, ReceivedBlock, SystemConfig};
use crate::linalg::{frobenius, hermitian_eigen, hermitize, pinv_hermitian, pinv_trace};
use crate::rng::cscg_matrix;
use crate::{CMatrix, Error, Result};

/// Eigenvalue gap under which the signal/noise split is reported as degenerate.
pub const DEGENERATE_GAP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceEstimate {
    pub r_hat: CMatrix,
    pub n_samples: usize,
}

/// Running `Σ y yᴴ` for growing learning windows.
#[derive(Debug, Clone)]
pub struct CovarianceAccumulator {
    sum: CMatrix,
    n: usize,
}

impl CovarianceAccumulator {
    pub fn new(dim: usize) -> Self {
        CovarianceAccumulator {
            sum: CMatrix::zeros(dim, dim),
            n: 0,
        }
    }

    pub fn push(&mut self, samples: &CMatrix) -> Result<()> {
        if samples.nrows() != self.sum.nrows() {
            return Err(Error::Shape(format!(
                "accumulator is {}-dimensional, samples have {} rows",
                self.sum.nrows(),
                samples.nrows()
            )));
        }
        self.sum += samples * samples.adjoint();
        self.n += samples.ncols();
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn estimate(&self) -> Result<CovarianceEstimate> {
        if self.n == 0 {
            return Err(Error::Precondition("sample covariance of an empty block".into()));
        }
        Ok(CovarianceEstimate {
            r_hat: hermitize(&self.sum.unscale(self.n as f64)),
            n_samples: self.n,
        })
    }
}

pub fn sample_covariance(block: &ReceivedBlock) -> Result<CovarianceEstimate> {
    let mut acc = CovarianceAccumulator::new(block.samples.nrows());
    acc.push(&block.samples)?;
    acc.estimate()
}

/// Signal/noise split of a covariance matrix.
#[derive(Debug, Clone)]
pub struct SubspaceDecomposition {
    /// Signal subspace basis, `M × M_p`.
    pub v_hat: CMatrix,
    /// Noise subspace basis, `M × (M − M_p)`.
    pub u_hat: CMatrix,
    /// The `M_p` largest eigenvalues, descending.
    pub sigma_hat: Vec<f64>,
    /// Mean of the `M − M_p` smallest eigenvalues.
    pub noise_power_hat: f64,
    /// All eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Set when the gap between eigenvalues `M_p` and `M_p + 1` is below
    /// [`DEGENERATE_GAP`]; the split then follows index order.
    pub degenerate_split: bool,
}

pub fn subspace_decompose(cov: &CovarianceEstimate, mp: usize) -> Result<SubspaceDecomposition> {
    let m = cov.r_hat.nrows();
    if mp == 0 || mp >= m {
        return Err(Error::Precondition(format!(
            "signal dimension {mp} must lie in 1..{m}"
        )));
    }
    let eig = hermitian_eigen(&cov.r_hat)?;
    let scale = eig.values[0].abs().max(1.0);
    let degenerate_split = eig.values[mp - 1] - eig.values[mp] < DEGENERATE_GAP * scale;
    if degenerate_split {
        log::warn!(
            "degenerate signal/noise split: eigenvalues {} and {} coincide",
            eig.values[mp - 1],
            eig.values[mp]
        );
    }
    let v_hat = eig.vectors.columns(0, mp).into_owned();
    let u_hat = eig.vectors.columns(mp, m - mp).into_owned();
    let sigma_hat = eig.values[..mp].to_vec();
    let noise_power_hat = eig.values[mp..].iter().sum::<f64>() / (m - mp) as f64;
    Ok(SubspaceDecomposition {
        v_hat,
        u_hat,
        sigma_hat,
        noise_power_hat,
        eigenvalues: eig.values,
        degenerate_split,
    })
}

/// Truncated-EVD estimate `V̂ (Σ̂ − σ̂² I)⁺ V̂ᴴ` of the interference
/// covariance `Q`.
pub fn estimate_q(dec: &SubspaceDecomposition) -> CMatrix {
    let m = dec.v_hat.nrows();
    let mut q = CMatrix::zeros(m, m);
    for (i, &s) in dec.sigma_hat.iter().enumerate() {
        let w = (s - dec.noise_power_hat).max(0.0);
        if w > 0.0 {
            let col = dec.v_hat.column(i);
            q += (col * col.adjoint()).scale(w);
        }
    }
    q
}

/// `β = σ² (M_p + σ² tr(Q†))`.
pub fn compute_beta(q_hat: &CMatrix, noise_power: f64, mp: usize) -> Result<f64> {
    let tr = pinv_trace(q_hat)?.ok_or_else(|| {
        Error::Degenerate("interference covariance is zero; the primary was never observed".into())
    })?;
    Ok(noise_power * (mp as f64 + noise_power * tr))
}

/// `χ₁ = ζ α σ_s² / β₁`.
pub fn compute_chi(zeta: f64, alpha: f64, sigma_s2: f64, beta1: f64) -> f64 {
    zeta * alpha * sigma_s2 / beta1
}

/// Per-antenna residue interference power `β / N_l` after receive
/// beamforming.
pub fn predicted_residue_power(beta: f64, n_l: usize) -> f64 {
    beta / n_l as f64
}

/// Interference at the primary from data transmission with
/// `tr(R_d) = trace_rd`: `tr(R_d) β₁ / (α σ_s² N_l)`.
pub fn predicted_data_it(trace_rd: f64, beta1: f64, alpha: f64, sigma_s2: f64, n_l: usize) -> f64 {
    trace_rd * beta1 / (alpha * sigma_s2 * n_l as f64)
}

fn check_transmit_shapes(g: &CMatrix, u_hat: &CMatrix) -> Result<()> {
    if g.nrows() != u_hat.nrows() {
        return Err(Error::Shape(format!(
            "channel has {} rows, beamformer has {}",
            g.nrows(),
            u_hat.nrows()
        )));
    }
    if u_hat.ncols() == 0 {
        return Err(Error::Shape("beamformer has no columns".into()));
    }
    Ok(())
}

/// Monte Carlo estimate of `E‖Gᵀ Û* d‖²` with `d` isotropic CSCG and
/// `tr E[d dᴴ] = rd_trace`.
pub fn measured_it_mc<R: Rng + ?Sized>(
    g: &CMatrix,
    u_hat: &CMatrix,
    rd_trace: f64,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    check_transmit_shapes(g, u_hat)?;
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let k = u_hat.ncols();
    let leak = g.transpose() * u_hat.conjugate();
    let d = cscg_matrix(k, trials, rd_trace / k as f64, rng);
    let x = leak * d;
    Ok(x.iter().map(|z| z.norm_sqr()).sum::<f64>() / trials as f64)
}

/// The same expectation in closed form given `Û`:
/// `(rd_trace / K) ‖Gᵀ Û*‖²_F`.
pub fn conditional_it(g: &CMatrix, u_hat: &CMatrix, rd_trace: f64) -> Result<f64> {
    check_transmit_shapes(g, u_hat)?;
    let leak = g.transpose() * u_hat.conjugate();
    Ok(rd_trace / u_hat.ncols() as f64 * frobenius(&leak).powi(2))
}

/// First-order noise-subspace perturbation `ΔU ≈ −Q† ΔR U`.
pub fn first_order_perturbation(q: &CMatrix, delta_r: &CMatrix, u: &CMatrix) -> Result<CMatrix> {
    let m = q.nrows();
    if q.ncols() != m || delta_r.shape() != (m, m) || u.nrows() != m {
        return Err(Error::Shape("perturbation operands disagree in dimension".into()));
    }
    let q_pinv = pinv_hermitian(q)?;
    Ok(-(q_pinv * delta_r * u))
}

/// Basis-invariant distance `‖A Aᴴ − B Bᴴ‖_F` between two subspaces.
pub fn subspace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::Shape(format!(
            "bases have shapes {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(frobenius(&(a * a.adjoint() - b * b.adjoint())))
}

/// `R = α σ_s² G Gᴴ + σ² I`.
pub fn exact_covariance(g: &CMatrix, alpha: f64, sigma_s2: f64, noise_power: f64) -> CMatrix {
    let m = g.nrows();
    (g * g.adjoint()).scale(alpha * sigma_s2) + CMatrix::identity(m, m).scale(noise_power)
}

/// `Q = α σ_s² G Gᴴ`.
pub fn exact_q(g: &CMatrix, alpha: f64, sigma_s2: f64) -> CMatrix {
    (g * g.adjoint()).scale(alpha * sigma_s2)
}

/// Noise subspace of the exact covariance.
pub fn exact_noise_subspace(g: &CMatrix) -> Result<CMatrix> {
    let m = g.nrows();
    let mp = g.ncols();
    let cov = CovarianceEstimate {
        r_hat: exact_covariance(g, 1.0, 1.0, 1.0),
        n_samples: 0,
    };
    if mp >= m {
        return Err(Error::Precondition("channel has no noise subspace".into()));
    }
    Ok(subspace_decompose(&cov, mp)?.u_hat)
}

/// `β` from the true channel.
pub fn true_beta(g: &CMatrix, alpha: f64, sigma_s2: f64, noise_power: f64) -> Result<f64> {
    compute_beta(&exact_q(g, alpha, sigma_s2), noise_power, g.ncols())
}

/// Mean of `β` over i.i.d. CSCG channels with `M > M_p` rows.
///
/// Uses `E[(GᴴG)⁻¹] = I / (M − M_p)` for a complex Wishart matrix, so
/// `E tr(Q†) = M_p / ((M − M_p) α σ_s²)`.
pub fn expected_beta(mp: usize, m: usize, alpha: f64, sigma_s2: f64, noise_power: f64) -> f64 {
    let tr = mp as f64 / ((m - mp) as f64 * alpha * sigma_s2);
    noise_power * (mp as f64 + noise_power * tr)
}

/// Output of the learning stage at both cognitive terminals.
#[derive(Debug, Clone)]
pub struct LearningOutcome {
    pub u1_hat: CMatrix,
    pub u2_hat: CMatrix,
    pub q1_hat: CMatrix,
    pub q2_hat: CMatrix,
    pub beta1: f64,
    pub beta2: f64,
    pub chi1: f64,
    pub n_l: usize,
}

/// Both terminals listen to the same `n_l` primary symbols and estimate
/// their noise subspaces and interference constants.
pub fn learn<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    channels: &ChannelSet,
    n_l: usize,
    rng: &mut R,
) -> Result<LearningOutcome> {
    if n_l == 0 {
        return Err(Error::Precondition("learning needs at least one symbol".into()));
    }
    let pr = draw_pr_block(cfg, n_l, rng);
    let y1 = receive(&channels.g1, &pr, cfg.sigma_n1_2, rng)?;
    let y2 = receive(&channels.g2, &pr, cfg.sigma_n2_2, rng)?;
    let d1 = subspace_decompose(&sample_covariance(&y1)?, cfg.mp)?;
    let d2 = subspace_decompose(&sample_covariance(&y2)?, cfg.mp)?;
    let q1_hat = estimate_q(&d1);
    let q2_hat = estimate_q(&d2);
    let beta1 = compute_beta(&q1_hat, cfg.sigma_n1_2, cfg.mp)?;
    let beta2 = compute_beta(&q2_hat, cfg.sigma_n2_2, cfg.mp)?;
    Ok(LearningOutcome {
        u1_hat: d1.u_hat,
        u2_hat: d2.u_hat,
        q1_hat,
        q2_hat,
        beta1,
        beta2,
        chi1: cfg.chi1(beta1),
        n_l,
    })
}
