//! Ergodic-capacity lower bound of the data stage.
//!
//! After whitening, the estimated channel's Gram matrix has eigenvalues
//! `λ₁ ≥ … ≥ λ_{K₁}` whose law depends only on `(K₁, K₂)`. The bound is
//! `E[g(ρ_eff, λ)]` where `g` is the water-filled value of
//! `log₂|I + X Λ|` over `X ⪰ 0` diagonal with `tr X = ρ_eff`. Capacities are
//! in bits per symbol.

use rand::Rng;

use crate::exec::{map_trials, Execution};
use crate::linalg::hermitian_eigen;
use crate::rng::cscg_matrix;
use crate::{Error, Result};

/// `ρ_eff = ρ_d ρ_t N_t / (γ₂ (ρ_d K₁ + γ₂ K₁ + ρ_t N_t))`.
pub fn effective_snr(rho_d: f64, rho_t: f64, n_t: f64, gamma2: f64, k1: usize) -> f64 {
    let k1 = k1 as f64;
    let energy = rho_t * n_t;
    let num = rho_d * energy;
    if num == 0.0 {
        return 0.0;
    }
    num / (gamma2 * (rho_d * k1 + gamma2 * k1 + energy))
}

/// Eigenvalues of one whitened channel-estimate Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSample {
    /// Non-negative, non-increasing.
    pub lambdas: Vec<f64>,
}

impl EigenSample {
    /// Sorts descending and clamps rounding-level negatives to zero.
    pub fn new(mut lambdas: Vec<f64>) -> Self {
        for l in lambdas.iter_mut() {
            if *l < 0.0 {
                *l = 0.0;
            }
        }
        lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());
        EigenSample { lambdas }
    }

    fn positive(&self) -> &[f64] {
        let r = self.lambdas.iter().take_while(|&&l| l > 0.0).count();
        &self.lambdas[..r]
    }

    /// Segment breakpoints `q_k = k/λ_{k+1} − Σ_{j≤k} 1/λ_j` for
    /// `k = 1..r−1` over the `r` positive eigenvalues.
    pub fn breakpoints(&self) -> Vec<f64> {
        let lam = self.positive();
        let mut s = 0.0;
        let mut out = Vec::with_capacity(lam.len().saturating_sub(1));
        for k in 1..lam.len() {
            s += 1.0 / lam[k - 1];
            out.push(k as f64 / lam[k] - s);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaterfillResult {
    pub x: Vec<f64>,
    /// Water level.
    pub mu: f64,
    /// `Σ log₂(1 + x_i λ_i)`.
    pub value: f64,
}

impl WaterfillResult {
    /// Largest violation of the KKT conditions, relative to `max(1, μ)`.
    pub fn kkt_violation(&self, lambdas: &EigenSample, rho_eff: f64) -> f64 {
        let scale = self.mu.abs().max(1.0);
        let mut worst = (self.x.iter().sum::<f64>() - rho_eff).abs() / rho_eff.max(1.0);
        for (&x, &l) in self.x.iter().zip(&lambdas.lambdas) {
            if x < 0.0 {
                worst = worst.max(-x);
            } else if x > 0.0 {
                worst = worst.max((self.mu - x - 1.0 / l).abs() / scale);
            } else if l > 0.0 {
                worst = worst.max((self.mu - 1.0 / l).max(0.0) / scale);
            }
        }
        worst
    }
}

/// Water-filling `x_i = (μ − 1/λ_i)⁺` with `Σ x_i = ρ_eff`.
pub fn waterfill(lambdas: &EigenSample, rho_eff: f64) -> Result<WaterfillResult> {
    if !(rho_eff >= 0.0) {
        return Err(Error::Precondition("effective SNR must be non-negative".into()));
    }
    let lam = lambdas.positive();
    if lam.is_empty() {
        return Err(Error::Degenerate("all eigenvalues are zero".into()));
    }
    // largest active set whose weakest mode still sits below the water level
    let mut active = lam.len();
    let mut mu;
    loop {
        let inv_sum: f64 = lam[..active].iter().map(|l| 1.0 / l).sum();
        mu = (rho_eff + inv_sum) / active as f64;
        if active == 1 || mu > 1.0 / lam[active - 1] {
            break;
        }
        active -= 1;
    }
    let mut x = vec![0.0; lambdas.lambdas.len()];
    for i in 0..active {
        x[i] = (mu - 1.0 / lam[i]).max(0.0);
    }
    let value = x
        .iter()
        .zip(&lambdas.lambdas)
        .map(|(&xi, &li)| (xi * li).ln_1p())
        .sum::<f64>()
        / std::f64::consts::LN_2;
    Ok(WaterfillResult { x, mu, value })
}

/// Closed-form segment evaluation of the water-filled capacity
/// `g(ρ_eff, λ) = Σ_{i≤k} log₂(λ_i (ρ_eff + Σ_{j≤k} 1/λ_j) / k)` on
/// `ρ_eff ∈ (q_{k−1}, q_k]`.
pub fn g_eval(rho_eff: f64, lambdas: &EigenSample) -> f64 {
    if rho_eff <= 0.0 {
        return 0.0;
    }
    let lam = lambdas.positive();
    let r = lam.len();
    let mut inv_sum = 0.0;
    let mut log_sum = 0.0;
    for k in 1..=r {
        inv_sum += 1.0 / lam[k - 1];
        log_sum += lam[k - 1].log2();
        // final segment is unbounded
        if k == r || rho_eff <= k as f64 / lam[k] - inv_sum {
            return log_sum + k as f64 * ((rho_eff + inv_sum) / k as f64).log2();
        }
    }
    0.0
}

/// Eigenvalues of `WᴴW` for a `k2 × k1` standard CSCG matrix `W`.
pub fn sample_eigenvalues<R: Rng + ?Sized>(k1: usize, k2: usize, rng: &mut R) -> Result<EigenSample> {
    if k1 == 0 || k1 > k2 {
        return Err(Error::Precondition(format!(
            "need 1 <= K1 <= K2, got K1 = {k1}, K2 = {k2}"
        )));
    }
    let w = cscg_matrix(k2, k1, 1.0, rng);
    let eig = hermitian_eigen(&(w.adjoint() * w))?;
    Ok(EigenSample::new(eig.values))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_trials: usize,
}

impl CapacityEstimate {
    fn from_values(values: impl Iterator<Item = f64>) -> Self {
        let (mut n, mut sum, mut sq) = (0usize, 0.0, 0.0);
        for v in values {
            n += 1;
            sum += v;
            sq += v * v;
        }
        let mean = sum / n as f64;
        let var = if n > 1 {
            ((sq - n as f64 * mean * mean) / (n as f64 - 1.0)).max(0.0)
        } else {
            0.0
        };
        CapacityEstimate {
            mean,
            stderr: (var / n as f64).sqrt(),
            n_trials: n,
        }
    }
}

/// Fresh-sample Monte Carlo estimate of `C_L2(ρ_eff)`.
pub fn c_l2<R: Rng + ?Sized>(
    rho_eff: f64,
    k1: usize,
    k2: usize,
    trials: usize,
    rng: &mut R,
) -> Result<CapacityEstimate> {
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    let mut values = Vec::with_capacity(trials);
    for _ in 0..trials {
        values.push(g_eval(rho_eff, &sample_eigenvalues(k1, k2, rng)?));
    }
    Ok(CapacityEstimate::from_values(values.into_iter()))
}

/// Per-sample prefix sums for fast repeated segment evaluation.
#[derive(Debug, Clone)]
struct SegmentTable {
    inv_prefix: Vec<f64>,
    log_prefix: Vec<f64>,
    breaks: Vec<f64>,
}

impl SegmentTable {
    fn new(sample: &EigenSample) -> Self {
        let lam = sample.positive();
        let mut inv_prefix = Vec::with_capacity(lam.len());
        let mut log_prefix = Vec::with_capacity(lam.len());
        let (mut s, mut l) = (0.0, 0.0);
        for &x in lam {
            s += 1.0 / x;
            l += x.log2();
            inv_prefix.push(s);
            log_prefix.push(l);
        }
        SegmentTable {
            inv_prefix,
            log_prefix,
            breaks: sample.breakpoints(),
        }
    }

    #[inline]
    fn eval(&self, rho: f64) -> f64 {
        if rho <= 0.0 || self.inv_prefix.is_empty() {
            return 0.0;
        }
        let k = self.breaks.iter().take_while(|&&q| rho > q).count();
        let kf = (k + 1) as f64;
        self.log_prefix[k] + kf * ((rho + self.inv_prefix[k]) / kf).log2()
    }
}

/// An immutable batch of eigenvalue draws reused across many `ρ_eff`
/// values, making `C_L2` a deterministic function of `ρ_eff`.
#[derive(Debug, Clone)]
pub struct EigenBatch {
    k1: usize,
    k2: usize,
    samples: Vec<EigenSample>,
    tables: Vec<SegmentTable>,
}

impl EigenBatch {
    pub fn draw(k1: usize, k2: usize, trials: usize, seed: u64) -> Result<Self> {
        Self::draw_with(Execution::default(), k1, k2, trials, seed)
    }

    pub fn draw_with(exec: Execution, k1: usize, k2: usize, trials: usize, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Precondition("need at least one trial".into()));
        }
        let samples = map_trials(exec, seed, trials, |_, rng| sample_eigenvalues(k1, k2, rng))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_samples(k1, k2, samples))
    }

    pub fn from_samples(k1: usize, k2: usize, samples: Vec<EigenSample>) -> Self {
        let tables = samples.iter().map(SegmentTable::new).collect();
        EigenBatch { k1, k2, samples, tables }
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[EigenSample] {
        &self.samples
    }

    /// Sample mean of `g(ρ_eff, λ)` over the batch.
    pub fn mean_g(&self, rho_eff: f64) -> f64 {
        if rho_eff <= 0.0 {
            return 0.0;
        }
        self.tables.iter().map(|t| t.eval(rho_eff)).sum::<f64>() / self.tables.len() as f64
    }

    pub fn c_l2(&self, rho_eff: f64) -> CapacityEstimate {
        CapacityEstimate::from_values(self.tables.iter().map(|t| t.eval(rho_eff)))
    }
}

/// `C_AL = (N_d / N) · C_L2`.
pub fn frame_average(c_l2_val: f64, n_d: f64, n: usize) -> f64 {
    n_d / n as f64 * c_l2_val
}

/// Rate of a practical modulation with SNR gap `gap_db` and bit granularity
/// `granularity`: water-fill on `λ_i / Γ`, then floor each mode's rate to the
/// granularity grid.
pub fn bit_loading_rate(lambdas: &EigenSample, rho_eff: f64, gap_db: f64, granularity: f64) -> Result<f64> {
    if !(gap_db >= 0.0) {
        return Err(Error::Precondition("SNR gap must be non-negative".into()));
    }
    if !(granularity > 0.0) {
        return Err(Error::Precondition("bit granularity must be positive".into()));
    }
    let gap = 10f64.powf(gap_db / 10.0);
    let scaled = EigenSample::new(lambdas.lambdas.iter().map(|l| l / gap).collect());
    if scaled.positive().is_empty() {
        return Ok(0.0);
    }
    let wf = waterfill(&scaled, rho_eff)?;
    Ok(wf
        .x
        .iter()
        .zip(&scaled.lambdas)
        .map(|(&x, &l)| granularity * ((x * l).ln_1p() / std::f64::consts::LN_2 / granularity).floor())
        .sum())
}
