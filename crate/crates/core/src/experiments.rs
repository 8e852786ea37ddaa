//! Named experiments, plain-text configuration and CSV output.
//!
//! Configuration files are `key = value` lines; `#` starts a comment.
//! Results are [`ResultTable`]s written as CSV with a block of `# key=value`
//! metadata lines ahead of the header row, plus a gnuplot script that plots
//! the CSV.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::allocation::{
    chi_sweep, optimize_power, optimize_time_on, surface, AllocationProblem, SearchOptions, Subcase,
};
use crate::capacity::{bit_loading_rate, frame_average, EigenBatch};
use crate::channel_model::{db_to_linear, linear_to_db, receive, InterferenceLimit, PrSignalBlock, SystemConfig};
use crate::exec::{map_trials, Execution};
use crate::learning::{
    compute_beta, conditional_it, estimate_q, predicted_data_it, sample_covariance, subspace_decompose, true_beta,
    CovarianceAccumulator, CovarianceEstimate,
};
use crate::rng::{cscg_matrix, sub_seed};
use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// SNR gap and bit granularity of the practical modulation curve.
pub const BITLOAD_GAP_DB: f64 = 3.0;
pub const BITLOAD_GRANULARITY: f64 = 0.5;

/// Primary-power levels compared by the learning experiments, in dB.
pub const LEARNING_LEVELS_DB: [f64; 2] = [0.0, 20.0];

pub const SMOKE_TRIALS: usize = 500;
pub const FULL_TRIALS: usize = 10_000;

/// System parameters plus the experiment-level knobs of a config file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub system: SystemConfig,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    /// Overrides the channel-averaged `β₂` used by the allocation search.
    pub beta2: Option<f64>,
    /// Learning length for `power-vs-nt`.
    pub n_l: usize,
    pub nl_step: usize,
    pub nt_step: usize,
    pub chi_min: f64,
    pub chi_max: f64,
    pub chi_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: SystemConfig::default(),
            trials: None,
            seed: None,
            beta2: None,
            n_l: 200,
            nl_step: 10,
            nt_step: 5,
            chi_min: 0.01,
            chi_max: 100.0,
            chi_points: 20,
        }
    }
}

const REQUIRED_KEYS: [&str; 9] = [
    "mp",
    "m1",
    "m2",
    "alpha",
    "sigma_s_db",
    "sigma_n1_db",
    "sigma_n2_db",
    "n_frame",
    "power_total",
];

const OPTIONAL_KEYS: [&str; 11] = [
    "chi1",
    "zeta",
    "trials",
    "seed",
    "beta2",
    "n_l",
    "nl_step",
    "nt_step",
    "chi_min",
    "chi_max",
    "chi_points",
];

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::config(key, format!("malformed value `{raw}`")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}", i + 1), "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if !REQUIRED_KEYS.contains(&key) && !OPTIONAL_KEYS.contains(&key) {
                return Err(Error::config(key, "unknown key"));
            }
            if map.insert(key, value).is_some() {
                return Err(Error::config(key, "given more than once"));
            }
        }
        for key in REQUIRED_KEYS {
            if !map.contains_key(key) {
                return Err(Error::config(key, "missing required key"));
            }
        }
        let limit = match (map.get("chi1"), map.get("zeta")) {
            (Some(c), None) => InterferenceLimit::Chi1(parse_value("chi1", c)?),
            (None, Some(z)) => InterferenceLimit::Zeta(parse_value("zeta", z)?),
            (Some(_), Some(_)) => return Err(Error::config("chi1", "give exactly one of `chi1` and `zeta`")),
            (None, None) => return Err(Error::config("chi1", "missing: give one of `chi1` and `zeta`")),
        };
        let get = |k: &str| map[k];
        let system = SystemConfig {
            mp: parse_value("mp", get("mp"))?,
            m1: parse_value("m1", get("m1"))?,
            m2: parse_value("m2", get("m2"))?,
            alpha: parse_value("alpha", get("alpha"))?,
            sigma_s2: db_to_linear(parse_value("sigma_s_db", get("sigma_s_db"))?),
            sigma_n1_2: db_to_linear(parse_value("sigma_n1_db", get("sigma_n1_db"))?),
            sigma_n2_2: db_to_linear(parse_value("sigma_n2_db", get("sigma_n2_db"))?),
            n_frame: parse_value("n_frame", get("n_frame"))?,
            power_total: parse_value("power_total", get("power_total"))?,
            limit,
        };
        let d = RunConfig::default();
        let opt = |k: &str| map.get(k).copied();
        let cfg = RunConfig {
            system,
            trials: opt("trials").map(|v| parse_value("trials", v)).transpose()?,
            seed: opt("seed").map(|v| parse_value("seed", v)).transpose()?,
            beta2: opt("beta2").map(|v| parse_value("beta2", v)).transpose()?,
            n_l: opt("n_l").map_or(Ok(d.n_l), |v| parse_value("n_l", v))?,
            nl_step: opt("nl_step").map_or(Ok(d.nl_step), |v| parse_value("nl_step", v))?,
            nt_step: opt("nt_step").map_or(Ok(d.nt_step), |v| parse_value("nt_step", v))?,
            chi_min: opt("chi_min").map_or(Ok(d.chi_min), |v| parse_value("chi_min", v))?,
            chi_max: opt("chi_max").map_or(Ok(d.chi_max), |v| parse_value("chi_max", v))?,
            chi_points: opt("chi_points").map_or(Ok(d.chi_points), |v| parse_value("chi_points", v))?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        let s = &self.system;
        if self.trials == Some(0) {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if let Some(b) = self.beta2 {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::config("beta2", "must be finite and non-negative"));
            }
        }
        if self.n_l == 0 || self.n_l + s.k1() + 1 > s.n_frame {
            return Err(Error::config(
                "n_l",
                format!("must lie in 1..={}", s.n_frame - s.k1() - 1),
            ));
        }
        if self.nl_step == 0 {
            return Err(Error::config("nl_step", "must be positive"));
        }
        if self.nt_step == 0 {
            return Err(Error::config("nt_step", "must be positive"));
        }
        if !(self.chi_min > 0.0 && self.chi_min.is_finite()) {
            return Err(Error::config("chi_min", "must be finite and positive"));
        }
        if !(self.chi_max > self.chi_min && self.chi_max.is_finite()) {
            return Err(Error::config("chi_max", "must be finite and exceed chi_min"));
        }
        if self.chi_points < 2 {
            return Err(Error::config("chi_points", "must be at least 2"));
        }
        Ok(())
    }

    /// Config-file form of every key, in file order; the metadata echo of
    /// each output table.
    pub fn entries(&self) -> Vec<(String, String)> {
        let s = &self.system;
        let mut out: Vec<(String, String)> = vec![
            ("mp".into(), s.mp.to_string()),
            ("m1".into(), s.m1.to_string()),
            ("m2".into(), s.m2.to_string()),
            ("alpha".into(), s.alpha.to_string()),
            ("sigma_s_db".into(), linear_to_db(s.sigma_s2).to_string()),
            ("sigma_n1_db".into(), linear_to_db(s.sigma_n1_2).to_string()),
            ("sigma_n2_db".into(), linear_to_db(s.sigma_n2_2).to_string()),
            ("n_frame".into(), s.n_frame.to_string()),
            ("power_total".into(), s.power_total.to_string()),
        ];
        match s.limit {
            InterferenceLimit::Chi1(c) => out.push(("chi1".into(), c.to_string())),
            InterferenceLimit::Zeta(z) => out.push(("zeta".into(), z.to_string())),
        }
        if let Some(t) = self.trials {
            out.push(("trials".into(), t.to_string()));
        }
        if let Some(v) = self.seed {
            out.push(("seed".into(), v.to_string()));
        }
        if let Some(b) = self.beta2 {
            out.push(("beta2".into(), b.to_string()));
        }
        out.extend([
            ("n_l".into(), self.n_l.to_string()),
            ("nl_step".into(), self.nl_step.to_string()),
            ("nt_step".into(), self.nt_step.to_string()),
            ("chi_min".into(), self.chi_min.to_string()),
            ("chi_max".into(), self.chi_max.to_string()),
            ("chi_points".into(), self.chi_points.to_string()),
        ]);
        out
    }

    pub fn to_text(&self) -> String {
        self.entries().iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn problem(&self, trials: usize, seed: u64) -> Result<AllocationProblem> {
        AllocationProblem::from_config(&self.system, self.beta2, trials, seed)
    }

    /// `chi_points` values spaced evenly in `log χ₁` over `[chi_min, chi_max]`.
    pub fn chi_grid(&self) -> Vec<f64> {
        log_grid(self.chi_min, self.chi_max, self.chi_points)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    RunConfig::parse(&fs::read_to_string(path)?)
}

pub fn log_grid(min: f64, max: f64, points: usize) -> Vec<f64> {
    let (a, b) = (min.ln(), max.ln());
    (0..points)
        .map(|i| {
            if i == 0 {
                min
            } else if i + 1 == points {
                max
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    ItVsLearning,
    BetaVsLearning,
    PowerVsNt,
    CalSurface,
    OptimalTimeVsChi,
    CapacityVsChi,
    Optimize,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::ItVsLearning,
        Experiment::BetaVsLearning,
        Experiment::PowerVsNt,
        Experiment::CalSurface,
        Experiment::OptimalTimeVsChi,
        Experiment::CapacityVsChi,
        Experiment::Optimize,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ItVsLearning => "it-vs-learning",
            Experiment::BetaVsLearning => "beta-vs-learning",
            Experiment::PowerVsNt => "power-vs-nt",
            Experiment::CalSurface => "cal-surface",
            Experiment::OptimalTimeVsChi => "optimal-time-vs-chi",
            Experiment::CapacityVsChi => "capacity-vs-chi",
            Experiment::Optimize => "optimize",
        }
    }

    /// Default grid of the swept variable, if the experiment sweeps one.
    pub fn default_sweep(self, cfg: &RunConfig) -> Option<Vec<f64>> {
        match self {
            Experiment::ItVsLearning => Some(vec![50.0, 100.0, 200.0, 400.0, 800.0]),
            Experiment::BetaVsLearning => {
                let top = (cfg.system.n_frame - cfg.system.k1() - 1).min(1000);
                Some((1..=top / 10).map(|i| (10 * i) as f64).collect())
            }
            Experiment::OptimalTimeVsChi | Experiment::CapacityVsChi => Some(cfg.chi_grid()),
            _ => None,
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
                Error::Usage(format!("unknown experiment `{s}`; expected one of {}", names.join(", ")))
            })
    }
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub config: RunConfig,
    /// Values of the swept variable; `None` takes the experiment default.
    pub sweep: Option<Vec<f64>>,
    pub trials: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub exec: Execution,
}

impl ExperimentSpec {
    pub fn new(experiment: Experiment, config: RunConfig, trials: usize, seed: u64) -> Self {
        ExperimentSpec {
            experiment,
            config,
            sweep: None,
            trials,
            seed,
            out_dir: PathBuf::from("."),
            exec: Execution::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if let Some(sweep) = &self.sweep {
            if sweep.is_empty() || sweep.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::config("sweep", "values must be non-empty and strictly increasing"));
            }
        }
        Ok(())
    }

    fn sweep_values(&self) -> Vec<f64> {
        self.sweep
            .clone()
            .or_else(|| self.experiment.default_sweep(&self.config))
            .unwrap_or_default()
    }

    /// Sweep values interpreted as symbol counts.
    fn sweep_lengths(&self) -> Result<Vec<usize>> {
        let max = self.config.system.n_frame - self.config.system.k1() - 1;
        self.sweep_values()
            .into_iter()
            .map(|v| {
                if v.fract() != 0.0 || v < 1.0 || v > max as f64 {
                    Err(Error::config("sweep", format!("learning length {v} must be an integer in 1..={max}")))
                } else {
                    Ok(v as usize)
                }
            })
            .collect()
    }
}

/// Named real-valued columns stored row-wise, with metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        ResultTable {
            metadata: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Shape(format!(
                "row has {} values, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        let key = key.into();
        let value = value.to_string();
        match self.metadata.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.metadata.push((key, value)),
        }
    }
}

/// Writes `# key=value` metadata lines, the header row, then the rows.
///
/// Numbers use Rust's shortest round-trip formatting, so [`read_csv`]
/// recovers every value bit for bit.
pub fn write_csv(table: &ResultTable, path: &Path) -> Result<()> {
    let mut head = String::new();
    for (k, v) in &table.metadata {
        writeln!(head, "# {k}={v}").unwrap();
    }
    let mut w = csv::WriterBuilder::new().from_writer(head.into_bytes());
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|x| x.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    fs::write(path, bytes)?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<ResultTable> {
    let text = fs::read_to_string(path)?;
    let mut metadata = Vec::new();
    let mut body_start = 0;
    for line in text.split_inclusive('\n') {
        let Some(rest) = line.strip_prefix("# ") else { break };
        let rest = rest.trim_end_matches(['\n', '\r']);
        let (k, v) = rest
            .split_once('=')
            .ok_or_else(|| Error::Numeric(format!("malformed metadata line `{rest}`")))?;
        metadata.push((k.to_string(), v.to_string()));
        body_start += line.len();
    }
    let mut r = csv::Reader::from_reader(text[body_start..].as_bytes());
    let columns = r.headers()?.iter().map(String::from).collect();
    let mut table = ResultTable { metadata, columns, rows: Vec::new() };
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| Error::Numeric(format!("bad number `{f}` in CSV"))))
            .collect::<Result<Vec<_>>>()?;
        table.push_row(row)?;
    }
    Ok(table)
}

/// A gnuplot script plotting `csv_name` for this experiment's table.
pub fn plot_script(experiment: Experiment, table: &ResultTable, csv_name: &str) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\nset grid\n");
    writeln!(s, "set title '{}'", experiment.name()).unwrap();
    let n = table.columns.len();
    match experiment {
        Experiment::CalSurface => {
            s.push_str("set xlabel 'N_l'\nset ylabel 'N_t'\nset zlabel 'C_AL'\n");
            writeln!(s, "splot '{csv_name}' using 1:2:3 with points pointtype 7 pointsize 0.3").unwrap();
        }
        _ => {
            let x = &table.columns[0];
            writeln!(s, "set xlabel '{x}'").unwrap();
            if matches!(experiment, Experiment::OptimalTimeVsChi | Experiment::CapacityVsChi) {
                s.push_str("set logscale x\n");
            }
            let parts: Vec<String> = (2..=n)
                .map(|j| {
                    let file = if j == 2 { format!("'{csv_name}'") } else { "''".to_string() };
                    format!("{file} using 1:{j} with linespoints")
                })
                .collect();
            writeln!(s, "plot {}", parts.join(", \\\n     ")).unwrap();
        }
    }
    s
}

/// Writes `<experiment>.csv` and `<experiment>.gp` under `out_dir`.
pub fn write_outputs(spec: &ExperimentSpec, table: &ResultTable) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(&spec.out_dir)?;
    let name = spec.experiment.name();
    let csv_path = spec.out_dir.join(format!("{name}.csv"));
    let gp_path = spec.out_dir.join(format!("{name}.gp"));
    write_csv(table, &csv_path)?;
    fs::write(&gp_path, plot_script(spec.experiment, table, &format!("{name}.csv")))?;
    Ok((csv_path, gp_path))
}

/// Runs the experiment; the table is a pure function of the spec.
pub fn run(spec: &ExperimentSpec) -> Result<ResultTable> {
    spec.validate()?;
    let mut table = match spec.experiment {
        Experiment::ItVsLearning => run_it_vs_learning(spec)?,
        Experiment::BetaVsLearning => run_beta_vs_learning(spec)?,
        Experiment::PowerVsNt => run_power_vs_nt(spec)?,
        Experiment::CalSurface => run_surface(spec)?,
        Experiment::OptimalTimeVsChi | Experiment::CapacityVsChi => run_chi_sweeps(spec)?,
        Experiment::Optimize => run_optimize(spec)?,
    };
    let mut meta = vec![("experiment".to_string(), spec.experiment.name().to_string())];
    meta.extend(spec.config.entries().into_iter().filter(|(k, _)| k != "trials" && k != "seed"));
    meta.push(("trials".into(), spec.trials.to_string()));
    meta.push(("seed".into(), spec.seed.to_string()));
    if let Some(sweep) = &spec.sweep {
        let v: Vec<String> = sweep.iter().map(|x| x.to_string()).collect();
        meta.push(("sweep".into(), v.join(" ")));
    }
    meta.push(("version".into(), VERSION.into()));
    meta.append(&mut table.metadata);
    table.metadata = meta;
    Ok(table)
}

/// Mean interference at the primary from unit-trace data transmission after
/// learning for `n_l` symbols, predicted (from `β̂₁`) and realized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ItPoint {
    pub n_l: usize,
    pub predicted: f64,
    pub measured: f64,
}

/// Fresh transmitter-side channel per trial; returns one point per `n_l`.
pub fn it_vs_learning(
    system: &SystemConfig,
    n_ls: &[usize],
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<ItPoint>> {
    n_ls.iter()
        .enumerate()
        .map(|(idx, &n_l)| {
            let per_trial = map_trials(exec, sub_seed(seed, idx as u64), trials, |_, rng| -> Result<(f64, f64)> {
                let g = cscg_matrix(system.m1, system.mp, 1.0, rng);
                let pr = PrSignalBlock::draw(system.mp, system.alpha, system.sigma_s2, n_l, rng);
                let y = receive(&g, &pr, system.sigma_n1_2, rng)?;
                let dec = subspace_decompose(&sample_covariance(&y)?, system.mp)?;
                let beta_hat = compute_beta(&estimate_q(&dec), system.sigma_n1_2, system.mp)?;
                Ok((
                    predicted_data_it(1.0, beta_hat, system.alpha, system.sigma_s2, n_l),
                    conditional_it(&g, &dec.u_hat, 1.0)?,
                ))
            });
            let (mut p, mut m) = (0.0, 0.0);
            for r in per_trial {
                let (a, b) = r?;
                p += a;
                m += b;
            }
            Ok(ItPoint {
                n_l,
                predicted: p / trials as f64,
                measured: m / trials as f64,
            })
        })
        .collect()
}

/// One learning path: a fixed channel observed over a growing window.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaPath {
    pub beta_true: f64,
    /// `β̂₁` at each grid length.
    pub beta_hat: Vec<f64>,
}

/// `paths` independent learning paths at the transmitter, each with a fresh
/// channel, estimating `β₁` from the first `n` samples for every `n` in the
/// increasing `grid`.
pub fn beta_paths(
    system: &SystemConfig,
    grid: &[usize],
    paths: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<BetaPath>> {
    if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("learning grid must be positive and strictly increasing".into()));
    }
    map_trials(exec, seed, paths, |_, rng| {
        let g = cscg_matrix(system.m1, system.mp, 1.0, rng);
        let beta_true = true_beta(&g, system.alpha, system.sigma_s2, system.sigma_n1_2)?;
        let mut acc = CovarianceAccumulator::new(system.m1);
        let mut beta_hat = Vec::with_capacity(grid.len());
        for &n in grid {
            let pr = PrSignalBlock::draw(system.mp, system.alpha, system.sigma_s2, n - acc.len(), rng);
            acc.push(&receive(&g, &pr, system.sigma_n1_2, rng)?.samples)?;
            let cov: CovarianceEstimate = acc.estimate()?;
            let dec = subspace_decompose(&cov, system.mp)?;
            beta_hat.push(compute_beta(&estimate_q(&dec), system.sigma_n1_2, system.mp)?);
        }
        Ok(BetaPath { beta_true, beta_hat })
    })
    .into_iter()
    .collect()
}

fn with_sigma_s(system: &SystemConfig, db: f64) -> SystemConfig {
    SystemConfig {
        sigma_s2: db_to_linear(db),
        ..system.clone()
    }
}

fn db_label(db: f64) -> String {
    format!("{db}db")
}

fn run_it_vs_learning(spec: &ExperimentSpec) -> Result<ResultTable> {
    let n_ls = spec.sweep_lengths()?;
    let mut cols = vec!["n_l".to_string()];
    let mut curves = Vec::new();
    for (i, &db) in LEARNING_LEVELS_DB.iter().enumerate() {
        let sys = with_sigma_s(&spec.config.system, db);
        let pts = it_vs_learning(&sys, &n_ls, spec.trials, sub_seed(spec.seed, i as u64), spec.exec)?;
        cols.push(format!("theory_{}", db_label(db)));
        cols.push(format!("mc_{}", db_label(db)));
        curves.push((sys.sigma_s2, pts));
    }
    let mut table = ResultTable::new(cols);
    for (j, &n_l) in n_ls.iter().enumerate() {
        let mut row = vec![n_l as f64];
        for (s2, pts) in &curves {
            // reported as 1 / (σ_s² I_d1)
            row.push(1.0 / (s2 * pts[j].predicted));
            row.push(1.0 / (s2 * pts[j].measured));
        }
        table.push_row(row)?;
    }
    Ok(table)
}

fn run_beta_vs_learning(spec: &ExperimentSpec) -> Result<ResultTable> {
    let grid = spec.sweep_lengths()?;
    let mut cols = vec!["n_l".to_string()];
    let mut curves = Vec::new();
    for (i, &db) in LEARNING_LEVELS_DB.iter().enumerate() {
        let sys = with_sigma_s(&spec.config.system, db);
        curves.push(beta_paths(&sys, &grid, spec.trials, sub_seed(spec.seed, i as u64), spec.exec)?);
        let l = db_label(db);
        cols.extend([format!("beta_true_{l}"), format!("beta_hat_{l}"), format!("within10_{l}")]);
    }
    let mut table = ResultTable::new(cols);
    for j in 0..grid.len() {
        let mut row = vec![grid[j] as f64];
        for paths in &curves {
            let n = paths.len() as f64;
            row.push(paths.iter().map(|p| p.beta_true).sum::<f64>() / n);
            row.push(paths.iter().map(|p| p.beta_hat[j]).sum::<f64>() / n);
            let ok = paths
                .iter()
                .filter(|p| ((p.beta_hat[j] - p.beta_true) / p.beta_true).abs() < 0.10)
                .count();
            row.push(ok as f64 / n);
        }
        table.push_row(row)?;
    }
    Ok(table)
}

fn subcase_code(s: Subcase) -> f64 {
    match s {
        Subcase::S1 => 1.0,
        Subcase::S2 => 2.0,
        Subcase::S3 => 3.0,
        Subcase::S4 => 4.0,
    }
}

fn problem_meta(table: &mut ResultTable, prob: &AllocationProblem) {
    table.set_meta("chi1_effective", prob.chi1);
    table.set_meta("beta2_effective", prob.beta2);
}

fn run_power_vs_nt(spec: &ExperimentSpec) -> Result<ResultTable> {
    let cfg = &spec.config;
    let prob = cfg.problem(spec.trials, spec.seed)?;
    let n_l = cfg.n_l;
    let mut table = ResultTable::new(["n_t", "rho_t", "rho_d", "p_t", "p_d", "rho_eff", "subcase"]);
    for n_t in prob.k1..=prob.n - n_l - 1 {
        let n_d = (prob.n - n_l - n_t) as f64;
        let s = optimize_power(n_l as f64, n_t as f64, &prob)?;
        table.push_row(vec![
            n_t as f64,
            s.rho_t,
            s.rho_d,
            s.rho_t * n_t as f64,
            s.rho_d * n_d,
            s.rho_eff,
            subcase_code(s.subcase),
        ])?;
    }
    problem_meta(&mut table, &prob);
    Ok(table)
}

fn shared_batch(spec: &ExperimentSpec, prob: &AllocationProblem) -> Result<EigenBatch> {
    prob.eigen_batch(spec.exec)
}

fn run_surface(spec: &ExperimentSpec) -> Result<ResultTable> {
    let prob = spec.config.problem(spec.trials, spec.seed)?;
    let batch = shared_batch(spec, &prob)?;
    let cells = surface(&prob, &batch, spec.config.nl_step, spec.config.nt_step, spec.exec)?;
    let mut table = ResultTable::new(["n_l", "n_t", "c_al", "subcase"]);
    for c in &cells {
        table.push_row(vec![c.n_l as f64, c.n_t as f64, c.c_al, subcase_code(c.power.subcase)])?;
    }
    if let Some(best) = cells.iter().copied().reduce(|a, b| {
        if crate::allocation::better(&a, &b) == std::cmp::Ordering::Less {
            b
        } else {
            a
        }
    }) {
        table.set_meta("argmax_n_l", best.n_l);
        table.set_meta("argmax_n_t", best.n_t);
        table.set_meta("argmax_c_al", best.c_al);
    }
    problem_meta(&mut table, &prob);
    Ok(table)
}

/// Frame-averaged practical-modulation rate at a schedule and `ρ_eff`.
pub fn bitloaded_c_al(batch: &EigenBatch, rho_eff: f64, n_d: usize, n: usize) -> Result<f64> {
    let mut sum = 0.0;
    for s in batch.samples() {
        sum += bit_loading_rate(s, rho_eff, BITLOAD_GAP_DB, BITLOAD_GRANULARITY)?;
    }
    Ok(frame_average(sum / batch.len() as f64, n_d as f64, n))
}

fn run_chi_sweeps(spec: &ExperimentSpec) -> Result<ResultTable> {
    let chis = spec.sweep_values();
    if chis.iter().any(|&c| !(c > 0.0)) {
        return Err(Error::config("sweep", "chi1 values must be positive"));
    }
    let prob = spec.config.problem(spec.trials, spec.seed)?;
    let batch = shared_batch(spec, &prob)?;
    let points = chi_sweep(&prob, &chis, &batch, spec.exec)?;
    let full = spec.experiment == Experiment::CapacityVsChi;
    let mut table = if full {
        ResultTable::new([
            "chi1",
            "n_l",
            "n_t",
            "n_d",
            "c_al",
            "c_al_equal_power",
            "c_al_bitloaded",
        ])
    } else {
        ResultTable::new(["chi1", "n_l", "n_t", "n_d", "c_al"])
    };
    for p in &points {
        let o = &p.optimal;
        let mut row = vec![p.chi1, o.n_l as f64, o.n_t as f64, o.n_d as f64, o.c_al];
        if full {
            let e = &p.equal_power;
            row.push(e.c_al);
            row.push(bitloaded_c_al(&batch, e.power.rho_eff, e.n_d, prob.n)?);
        }
        table.push_row(row)?;
    }
    table.set_meta("beta2_effective", prob.beta2);
    Ok(table)
}

fn run_optimize(spec: &ExperimentSpec) -> Result<ResultTable> {
    let prob = spec.config.problem(spec.trials, spec.seed)?;
    let batch = shared_batch(spec, &prob)?;
    let s = optimize_time_on(&prob, &batch, SearchOptions { exhaustive: false, exec: spec.exec })?;
    let mut table = ResultTable::new(["n_l", "n_t", "n_d", "rho_t", "rho_d", "rho_eff", "subcase", "c_al"]);
    table.push_row(vec![
        s.n_l as f64,
        s.n_t as f64,
        s.n_d as f64,
        s.power.rho_t,
        s.power.rho_d,
        s.power.rho_eff,
        subcase_code(s.power.subcase),
        s.c_al,
    ])?;
    problem_meta(&mut table, &prob);
    table.set_meta("subcase", s.power.subcase);
    Ok(table)
}
