//! Power and time allocation across the training and data stages.
//!
//! For a fixed schedule `(N_l, N_t, N_d = N − N_l − N_t)` the training and
//! data powers `(ρ_t, ρ_d)` maximizing the effective SNR are found in closed
//! form. Four subcases arise:
//!
//! * `S1`: `N_l ∈ T_l`, the interference caps alone keep the budget; both
//!   powers sit at `χ₁N_l`;
//! * `S2`: the budget-optimal training power exceeds the cap, so training is
//!   capped and data takes the remainder;
//! * `S3`: the same with the roles of training and data swapped;
//! * `S4`: neither cap binds.
//!
//! The schedule is then chosen by a one-dimensional search over `N_l` with
//! an inner search over `N_t`, maximizing the frame-averaged capacity bound
//! evaluated on a shared eigenvalue batch.

use std::cmp::Ordering;

use crate::capacity::{effective_snr, frame_average, EigenBatch};
use crate::channel_model::SystemConfig;
use crate::exec::{map_indexed, Execution};
use crate::learning::expected_beta;
use crate::{Error, Result};

/// Absolute slack when comparing a power against its cap `χ₁N_l`.
pub const CAP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationProblem {
    /// Frame length `N`.
    pub n: usize,
    /// Power budget `P` per frame.
    pub p: f64,
    pub chi1: f64,
    /// Receiver-side interference constant, held fixed during the search.
    pub beta2: f64,
    pub sigma_n2_2: f64,
    pub k1: usize,
    pub k2: usize,
    /// Size of the eigenvalue batch used to evaluate `C_L2`.
    pub trials: usize,
    pub seed: u64,
}

impl AllocationProblem {
    /// Builds the problem for a system configuration.
    ///
    /// When `beta2` is `None` it defaults to its mean over i.i.d. channels;
    /// a `ζ`-specified limit is turned into `χ₁` the same way.
    pub fn from_config(cfg: &SystemConfig, beta2: Option<f64>, trials: usize, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let beta1 = expected_beta(cfg.mp, cfg.m1, cfg.alpha, cfg.sigma_s2, cfg.sigma_n1_2);
        let beta2 = beta2.unwrap_or_else(|| expected_beta(cfg.mp, cfg.m2, cfg.alpha, cfg.sigma_s2, cfg.sigma_n2_2));
        let prob = AllocationProblem {
            n: cfg.n_frame,
            p: cfg.power_total,
            chi1: cfg.chi1(beta1),
            beta2,
            sigma_n2_2: cfg.sigma_n2_2,
            k1: cfg.k1(),
            k2: cfg.k2(),
            trials,
            seed,
        };
        prob.validate()?;
        Ok(prob)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k1 == 0 || self.k1 > self.k2 {
            return Err(Error::config("m1", "need 1 <= K1 <= K2"));
        }
        if self.n < self.k1 + 2 {
            return Err(Error::config("n_frame", format!("must be at least K1 + 2 = {}", self.k1 + 2)));
        }
        if !(self.p.is_finite() && self.p > 0.0) {
            return Err(Error::config("power_total", "must be finite and positive"));
        }
        if !(self.chi1 > 0.0) {
            return Err(Error::config("chi1", "must be positive"));
        }
        if !(self.beta2.is_finite() && self.beta2 >= 0.0) {
            return Err(Error::config("beta2", "must be finite and non-negative"));
        }
        if !(self.sigma_n2_2.is_finite() && self.sigma_n2_2 > 0.0) {
            return Err(Error::config("sigma_n2_db", "noise power must be finite and positive"));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        Ok(())
    }

    /// `γ₂(N_l) = β₂ / N_l + σ²_{n2}`.
    pub fn gamma2(&self, n_l: f64) -> f64 {
        self.beta2 / n_l + self.sigma_n2_2
    }

    /// The per-symbol power cap `χ₁N_l` imposed by the interference limit.
    pub fn cap(&self, n_l: f64) -> f64 {
        self.chi1 * n_l
    }

    /// Eigenvalue batch determined by `(k1, k2, trials, seed)`.
    pub fn eigen_batch(&self, exec: Execution) -> Result<EigenBatch> {
        EigenBatch::draw_with(exec, self.k1, self.k2, self.trials, self.seed)
    }

    fn same_with_chi(&self, chi1: f64) -> Self {
        AllocationProblem { chi1, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subcase {
    S1,
    S2,
    S3,
    S4,
}

impl std::fmt::Display for Subcase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Subcase::S1 => "S1",
            Subcase::S2 => "S2",
            Subcase::S3 => "S3",
            Subcase::S4 => "S4",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSolution {
    pub rho_t: f64,
    pub rho_d: f64,
    pub subcase: Subcase,
    pub rho_eff: f64,
}

impl PowerSolution {
    /// Largest violation of the cap and budget constraints at `(n_l, n_t)`;
    /// zero for a feasible allocation.
    pub fn constraint_violation(&self, n_l: f64, n_t: f64, prob: &AllocationProblem) -> f64 {
        let cap = prob.cap(n_l);
        let n_d = prob.n as f64 - n_l - n_t;
        let used = self.rho_t * n_t + self.rho_d * n_d;
        [
            self.rho_t - cap,
            self.rho_d - cap,
            (used - prob.p) / prob.p.max(1.0),
            -self.rho_t,
            -self.rho_d,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSolution {
    pub n_l: usize,
    pub n_t: usize,
    pub n_d: usize,
    pub power: PowerSolution,
    pub c_al: f64,
}

/// Budget-optimal powers when the interference caps are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primes {
    pub rho_d: f64,
    pub rho_t: f64,
    pub rho_eff: f64,
}

/// `χ₁N_l(N − N_l) ≤ P`: spending the cap on every non-learning symbol
/// stays within the budget.
pub fn in_tl(n_l: f64, prob: &AllocationProblem) -> bool {
    prob.cap(n_l) * (prob.n as f64 - n_l) <= prob.p
}

fn check_schedule(n_l: f64, n_t: f64, prob: &AllocationProblem) -> Result<f64> {
    let n_d = prob.n as f64 - n_l - n_t;
    if !(n_l > 0.0) {
        return Err(Error::Precondition(format!("learning time must be positive, got {n_l}")));
    }
    if n_t < prob.k1 as f64 {
        return Err(Error::Precondition(format!(
            "training time {n_t} is below K1 = {}",
            prob.k1
        )));
    }
    if n_d < 1.0 {
        return Err(Error::Precondition(format!(
            "schedule N_l = {n_l}, N_t = {n_t} leaves no data symbol"
        )));
    }
    Ok(n_d)
}

/// Both powers at the cap; valid only inside `T_l`.
pub fn power_case1(n_l: f64, n_t: f64, prob: &AllocationProblem) -> Result<PowerSolution> {
    check_schedule(n_l, n_t, prob)?;
    if !in_tl(n_l, prob) {
        return Err(Error::Precondition(format!("N_l = {n_l} is outside T_l")));
    }
    let rho = prob.cap(n_l);
    Ok(PowerSolution {
        rho_t: rho,
        rho_d: rho,
        subcase: Subcase::S1,
        rho_eff: effective_snr(rho, rho, n_t, prob.gamma2(n_l), prob.k1),
    })
}

/// Maximizer of `ρ_eff` over the budget line `ρ_t N_t + ρ_d N_d = P`.
///
/// With `c = (P + γ₂K₁)N_d / ((N_d − K₁)P)` the root is
/// `ρ'_d = (P/N_d)(c ∓ √(c(c−1)))`; it is evaluated here as
/// `(P/N_d) / (1 + √(1 − 1/c))`, which is the same number on every branch
/// and does not cancel when `N_d ≈ K₁`.
fn primes_unchecked(n_l: f64, n_t: f64, prob: &AllocationProblem) -> Primes {
    let n_d = prob.n as f64 - n_l - n_t;
    let k1 = prob.k1 as f64;
    let gamma = prob.gamma2(n_l);
    let inv_c = (n_d - k1) * prob.p / ((prob.p + gamma * k1) * n_d);
    let rho_d = prob.p / n_d / (1.0 + (1.0 - inv_c).sqrt());
    let rho_t = (prob.p - rho_d * n_d) / n_t;
    Primes {
        rho_d,
        rho_t,
        rho_eff: effective_snr(rho_d, rho_t, n_t, gamma, prob.k1),
    }
}

pub fn rho_primes(n_l: f64, n_t: f64, prob: &AllocationProblem) -> Result<Primes> {
    check_schedule(n_l, n_t, prob)?;
    Ok(primes_unchecked(n_l, n_t, prob))
}

/// Closed-form power allocation for the schedule `(n_l, n_t)`.
pub fn optimize_power(n_l: f64, n_t: f64, prob: &AllocationProblem) -> Result<PowerSolution> {
    let n_d = check_schedule(n_l, n_t, prob)?;
    if in_tl(n_l, prob) {
        return power_case1(n_l, n_t, prob);
    }
    let cap = prob.cap(n_l);
    let gamma = prob.gamma2(n_l);
    let primes = primes_unchecked(n_l, n_t, prob);
    let (rho_t, rho_d, subcase) = if primes.rho_t >= cap - CAP_SLACK {
        (cap, (prob.p - cap * n_t) / n_d, Subcase::S2)
    } else if primes.rho_d >= cap - CAP_SLACK {
        (( prob.p - cap * n_d) / n_t, cap, Subcase::S3)
    } else {
        return Ok(PowerSolution {
            rho_t: primes.rho_t,
            rho_d: primes.rho_d,
            subcase: Subcase::S4,
            rho_eff: primes.rho_eff,
        });
    };
    if rho_t < -CAP_SLACK || rho_d < -CAP_SLACK {
        return Err(Error::Infeasible(format!(
            "capped stage exhausts the budget at N_l = {n_l}, N_t = {n_t}"
        )));
    }
    let (rho_t, rho_d) = (rho_t.max(0.0), rho_d.max(0.0));
    Ok(PowerSolution {
        rho_t,
        rho_d,
        subcase,
        rho_eff: effective_snr(rho_d, rho_t, n_t, gamma, prob.k1),
    })
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    // f(lo) ≥ 0 > f(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn learning_range_check(n_l: f64, prob: &AllocationProblem) -> Result<f64> {
    let span = prob.n as f64 - n_l - prob.k1 as f64 - 1.0;
    if !(n_l > 0.0) || span < 0.0 {
        return Err(Error::Precondition(format!(
            "N_l = {n_l} leaves no room for K1 training and one data symbol"
        )));
    }
    Ok(span)
}

/// Training length `N₁` at which `ρ'_t = χ₁N_l`, searched over
/// `[K₁, N − N_l − 1]` and clamped to its ends when no interior root exists.
pub fn boundary_n1(n_l: f64, prob: &AllocationProblem) -> Result<f64> {
    learning_range_check(n_l, prob)?;
    let cap = prob.cap(n_l);
    let lo = prob.k1 as f64;
    let hi = prob.n as f64 - n_l - 1.0;
    // ρ'_t decreases in N_t
    let f = |nt: f64| primes_unchecked(n_l, nt, prob).rho_t - cap;
    if f(lo) < 0.0 {
        return Ok(lo);
    }
    if f(hi) >= 0.0 {
        return Ok(hi);
    }
    Ok(bisect(f, lo, hi))
}

/// Data length `N₂` at which `ρ'_d = χ₁N_l`, searched over
/// `[1, N − N_l − K₁]` and clamped to its ends when no interior root exists.
pub fn boundary_n2(n_l: f64, prob: &AllocationProblem) -> Result<f64> {
    learning_range_check(n_l, prob)?;
    let cap = prob.cap(n_l);
    let rest = prob.n as f64 - n_l;
    let lo = 1.0;
    let hi = rest - prob.k1 as f64;
    // ρ'_d decreases in N_d
    let f = |nd: f64| primes_unchecked(n_l, rest - nd, prob).rho_d - cap;
    if f(lo) < 0.0 {
        return Ok(lo);
    }
    if f(hi) >= 0.0 {
        return Ok(hi);
    }
    Ok(bisect(f, lo, hi))
}

/// Frame-averaged capacity bound of the schedule under optimal power.
pub fn c_al(n_l: usize, n_t: usize, prob: &AllocationProblem, batch: &EigenBatch) -> Result<TimeSolution> {
    let power = optimize_power(n_l as f64, n_t as f64, prob)?;
    Ok(evaluate(n_l, n_t, power, prob, batch))
}

fn evaluate(n_l: usize, n_t: usize, power: PowerSolution, prob: &AllocationProblem, batch: &EigenBatch) -> TimeSolution {
    let n_d = prob.n - n_l - n_t;
    TimeSolution {
        n_l,
        n_t,
        n_d,
        power,
        c_al: frame_average(batch.mean_g(power.rho_eff), n_d as f64, prob.n),
    }
}

/// Larger `c_al` wins; ties go to the smaller `N_l`, then the smaller `N_t`.
pub fn better(a: &TimeSolution, b: &TimeSolution) -> Ordering {
    a.c_al
        .partial_cmp(&b.c_al)
        .unwrap_or(Ordering::Equal)
        .then(b.n_l.cmp(&a.n_l))
        .then(b.n_t.cmp(&a.n_t))
}

fn pick(best: Option<TimeSolution>, cand: TimeSolution) -> Option<TimeSolution> {
    match best {
        Some(b) if better(&b, &cand) != Ordering::Less => Some(b),
        _ => Some(cand),
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Evaluate every feasible `N_t` instead of the structured inner search.
    pub exhaustive: bool,
    pub exec: Execution,
}

/// Largest feasible training length for a given learning length.
fn max_nt(n_l: usize, prob: &AllocationProblem) -> usize {
    prob.n - n_l - 1
}

fn best_over<I: IntoIterator<Item = usize>>(
    n_l: usize,
    nts: I,
    prob: &AllocationProblem,
    batch: &EigenBatch,
) -> Result<Option<TimeSolution>> {
    let mut best = None;
    for n_t in nts {
        best = pick(best, c_al(n_l, n_t, prob, batch)?);
    }
    Ok(best)
}

/// Integer unimodal search over `[lo, hi]` followed by an exhaustive
/// sweep of the final bracket widened by two on each side.
fn unimodal_inner(
    n_l: usize,
    lo: usize,
    hi: usize,
    prob: &AllocationProblem,
    batch: &EigenBatch,
) -> Result<Option<TimeSolution>> {
    let f = |n_t: usize| c_al(n_l, n_t, prob, batch).map(|s| s.c_al);
    let (mut a, mut b) = (lo, hi);
    while b - a > 4 {
        let m1 = a + (b - a) / 3;
        let m2 = b - (b - a) / 3;
        if f(m1)? < f(m2)? {
            a = m1 + 1;
        } else {
            b = m2;
        }
    }
    best_over(n_l, a.saturating_sub(2).max(lo)..=(b + 2).min(hi), prob, batch)
}

fn best_for_learning(
    n_l: usize,
    prob: &AllocationProblem,
    batch: &EigenBatch,
    opts: SearchOptions,
) -> Result<Option<TimeSolution>> {
    let lo = prob.k1;
    let hi = max_nt(n_l, prob);
    if opts.exhaustive {
        return best_over(n_l, lo..=hi, prob, batch);
    }
    if in_tl(n_l as f64, prob) {
        return unimodal_inner(n_l, lo, hi, prob, batch);
    }
    // training-capped region, plus its right edge where the uncapped
    // region's optimum sits
    let edge = (boundary_n1(n_l as f64, prob)?.ceil() as usize).clamp(lo, hi);
    best_over(n_l, lo..=edge, prob, batch)
}

/// Two-level search for the schedule maximizing `C_AL`.
pub fn optimize_time(prob: &AllocationProblem) -> Result<TimeSolution> {
    let batch = prob.eigen_batch(Execution::default())?;
    optimize_time_on(prob, &batch, SearchOptions::default())
}

/// [`optimize_time`] on a caller-supplied eigenvalue batch.
pub fn optimize_time_on(prob: &AllocationProblem, batch: &EigenBatch, opts: SearchOptions) -> Result<TimeSolution> {
    prob.validate()?;
    let outer = prob.n - prob.k1 - 1;
    let per_nl = map_indexed(opts.exec, outer, |i| best_for_learning(i + 1, prob, batch, opts));
    let mut best = None;
    for r in per_nl {
        if let Some(s) = r? {
            best = pick(best, s);
        }
    }
    best.ok_or_else(|| Error::Infeasible("no feasible (N_l, N_t) schedule".into()))
}

/// Equal training and data power `min{χ₁N_l, P/(N − N_l)}`, best schedule
/// found exhaustively.
///
/// The returned power is labelled `S1` inside `T_l` (where it coincides with
/// the optimal allocation) and `S4` elsewhere, since neither cap binds there.
pub fn equal_power_baseline(prob: &AllocationProblem, batch: &EigenBatch, exec: Execution) -> Result<TimeSolution> {
    prob.validate()?;
    let outer = prob.n - prob.k1 - 1;
    let per_nl = map_indexed(exec, outer, |i| {
        let n_l = i + 1;
        let nl = n_l as f64;
        let rho = prob.cap(nl).min(prob.p / (prob.n - n_l) as f64);
        let subcase = if in_tl(nl, prob) { Subcase::S1 } else { Subcase::S4 };
        let gamma = prob.gamma2(nl);
        let mut best = None;
        for n_t in prob.k1..=max_nt(n_l, prob) {
            let power = PowerSolution {
                rho_t: rho,
                rho_d: rho,
                subcase,
                rho_eff: effective_snr(rho, rho, n_t as f64, gamma, prob.k1),
            };
            best = pick(best, evaluate(n_l, n_t, power, prob, batch));
        }
        best
    });
    per_nl
        .into_iter()
        .flatten()
        .reduce(|a, b| if better(&a, &b) == Ordering::Less { b } else { a })
        .ok_or_else(|| Error::Infeasible("no feasible (N_l, N_t) schedule".into()))
}

/// `C_AL` on the grid `N_l = 1, 1 + nl_step, …` × `N_t = K₁, K₁ + nt_step, …`
/// restricted to feasible schedules.
pub fn surface(
    prob: &AllocationProblem,
    batch: &EigenBatch,
    nl_step: usize,
    nt_step: usize,
    exec: Execution,
) -> Result<Vec<TimeSolution>> {
    if nl_step == 0 || nt_step == 0 {
        return Err(Error::Precondition("grid steps must be positive".into()));
    }
    let nls: Vec<usize> = (1..prob.n - prob.k1).step_by(nl_step).collect();
    let rows = map_indexed(exec, nls.len(), |i| {
        let n_l = nls[i];
        (prob.k1..=max_nt(n_l, prob))
            .step_by(nt_step)
            .map(|n_t| c_al(n_l, n_t, prob, batch))
            .collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

/// Optimal and equal-power schedules at one value of `χ₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiPoint {
    pub chi1: f64,
    pub optimal: TimeSolution,
    pub equal_power: TimeSolution,
}

/// Runs both optimizers for each `χ₁` on one shared batch.
pub fn chi_sweep(prob: &AllocationProblem, chis: &[f64], batch: &EigenBatch, exec: Execution) -> Result<Vec<ChiPoint>> {
    chis.iter()
        .map(|&chi1| {
            let p = prob.same_with_chi(chi1);
            Ok(ChiPoint {
                chi1,
                optimal: optimize_time_on(&p, batch, SearchOptions { exhaustive: false, exec })?,
                equal_power: equal_power_baseline(&p, batch, exec)?,
            })
        })
        .collect()
}
