//! Reproducible Monte-Carlo experiments.
//!
//! Every trial draws from its own generator, seeded from
//! `(master_seed, kind, size index, rep index)` by a counter-based mixer, so
//! results do not depend on scheduling. Per-trial outputs are integers and
//! are summed exactly before anything becomes floating point; reports are
//! therefore byte-identical across thread counts.

mod patterns;
mod stats;

pub use patterns::{exact_pattern_law, factorial, pattern_at_index, pattern_index};
pub use stats::{chi_square_gof, chi_square_two_sample, loglog_regression, moments, ChiSquare, Regression};

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::excursion::{cartesian_tree_with, kill_length_with, sample_excursion};
use crate::exponents::exponent_table;
use crate::signed_trees::{lis_tree, to_permutation, RemySampler, Sign};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    LisScaling,
    Survival,
    TwoPoint,
    CrossValidate,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::LisScaling => "lis_scaling",
            ExperimentKind::Survival => "survival",
            ExperimentKind::TwoPoint => "two_point",
            ExperimentKind::CrossValidate => "cross_validate",
        }
    }

    fn tag(self) -> u64 {
        match self {
            ExperimentKind::LisScaling => 1,
            ExperimentKind::Survival => 2,
            ExperimentKind::TwoPoint => 3,
            ExperimentKind::CrossValidate => 4,
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lis_scaling" => Ok(ExperimentKind::LisScaling),
            "survival" => Ok(ExperimentKind::Survival),
            "two_point" => Ok(ExperimentKind::TwoPoint),
            "cross_validate" | "crossval" => Ok(ExperimentKind::CrossValidate),
            _ => Err(Error::param("kind", format!("unknown experiment kind `{s}`"))),
        }
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `sizes` are leaf counts `n` for [`ExperimentKind::LisScaling`] and
/// excursion half-lengths `N` otherwise.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub p: f64,
    pub sizes: Vec<usize>,
    pub eps_grid: Vec<f64>,
    pub reps: usize,
    pub master_seed: u64,
    /// Worker threads; `None` uses rayon's default. Not part of the report.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    /// Desk-scale defaults for each kind.
    pub fn desk_default(kind: ExperimentKind, p: f64) -> Self {
        let (sizes, reps) = match kind {
            ExperimentKind::LisScaling => ((10..=15).map(|k| 1usize << k).collect(), 2000),
            ExperimentKind::Survival | ExperimentKind::TwoPoint => (vec![1 << 16], 10_000),
            ExperimentKind::CrossValidate => (vec![1 << 16], 100_000),
        };
        ExperimentConfig {
            kind,
            p,
            sizes,
            eps_grid: (4..=10).map(|k| (0.5f64).powi(k)).collect(),
            reps,
            master_seed: 0,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.reps == 0 {
            return Err(Error::param("reps", "need at least one repetition"));
        }
        if self.sizes.is_empty() {
            return Err(Error::param("sizes", "need at least one size"));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("sizes", "must be strictly increasing"));
        }
        if self.sizes[0] == 0 {
            return Err(Error::param("sizes", "sizes must be positive"));
        }
        if self.threads == Some(0) {
            return Err(Error::param("threads", "need at least one thread"));
        }
        match self.kind {
            ExperimentKind::Survival | ExperimentKind::TwoPoint => {
                if self.eps_grid.is_empty() {
                    return Err(Error::param("eps_grid", "need at least one eps"));
                }
                if let Some(e) = self.eps_grid.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
                    return Err(Error::param("eps_grid", format!("{e} is outside (0, 1]")));
                }
                if self.kind == ExperimentKind::TwoPoint && self.sizes[0] < 2 {
                    return Err(Error::param("sizes", "two tagged points need N >= 2"));
                }
            }
            ExperimentKind::CrossValidate => {
                if self.sizes.len() != 1 || self.sizes[0] < 3 {
                    return Err(Error::param("sizes", "cross validation takes one half-length N >= 3"));
                }
            }
            ExperimentKind::LisScaling => {}
        }
        Ok(())
    }

    /// File stem embedding kind, `p` and seed, e.g. `survival_p0.5_seed7`.
    pub fn file_stem(&self) -> String {
        format!("{}_p{}_seed{}", self.kind, self.p, self.master_seed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeRecord {
    /// `n` or `N`.
    pub size: usize,
    /// Set for survival records.
    pub eps: Option<f64>,
    pub mean: f64,
    pub sd: f64,
    pub count: u64,
}

impl SizeRecord {
    pub fn n_or_eps(&self) -> f64 {
        self.eps.unwrap_or(self.size as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RegressionOutcome {
    Fitted(Regression),
    Undefined { reason: String },
}

impl RegressionOutcome {
    pub fn slope(&self) -> Option<f64> {
        match self {
            RegressionOutcome::Fitted(r) => Some(r.slope),
            RegressionOutcome::Undefined { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReferenceExponents {
    pub alpha_star: f64,
    pub beta_star: f64,
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    /// What the regression slope is compared with for this kind.
    pub expected_slope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternComparison {
    pub size: usize,
    /// Cells in lexicographic order of the patterns.
    pub patterns: Vec<String>,
    pub exact: Vec<f64>,
    pub tree_counts: Vec<u64>,
    pub excursion_counts: Vec<u64>,
    pub tree_vs_exact: ChiSquare,
    pub excursion_vs_exact: ChiSquare,
    pub tree_vs_excursion: ChiSquare,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub records: Vec<SizeRecord>,
    pub regression: RegressionOutcome,
    pub reference: Option<ReferenceExponents>,
    pub patterns: Vec<PatternComparison>,
    /// False when the run was interrupted; records then cover only the
    /// trials that finished.
    pub complete: bool,
    #[serde(skip)]
    pub wall_clock: Duration,
    #[serde(skip)]
    pub threads: usize,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Rows `kind,p,n_or_eps,mean,sd,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,p,n_or_eps,mean,sd,count\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.config.kind,
                self.config.p,
                r.n_or_eps(),
                r.mean,
                r.sd,
                r.count
            ));
        }
        out
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial; a pure function of its coordinates.
pub fn trial_seed(master_seed: u64, kind: ExperimentKind, size_index: usize, rep: usize) -> u64 {
    let mut h = splitmix64(master_seed);
    h = splitmix64(h ^ kind.tag());
    h = splitmix64(h ^ size_index as u64);
    splitmix64(h ^ rep as u64)
}

pub fn trial_rng(master_seed: u64, kind: ExperimentKind, size_index: usize, rep: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(master_seed, kind, size_index, rep))
}

/// Runs `trial` for reps `0..reps` in parallel, keeping rep order. Returns
/// `None` if `cancel` was raised before every trial finished.
fn par_trials<T, S, I, F>(reps: usize, cancel: &AtomicBool, init: I, trial: F) -> Result<Option<Vec<T>>>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> Result<T> + Sync + Send,
{
    let out: Vec<Option<Result<T>>> = (0..reps)
        .into_par_iter()
        .map_init(init, |state, rep| {
            if cancel.load(Ordering::Relaxed) {
                None
            } else {
                Some(trial(state, rep))
            }
        })
        .collect();
    if out.iter().any(Option::is_none) {
        return Ok(None);
    }
    out.into_iter()
        .map(|o| o.expect("checked above"))
        .collect::<Result<Vec<T>>>()
        .map(Some)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with_cancel(config, &AtomicBool::new(false))
}

/// Like [`run_experiment`]; raising `cancel` stops the run early and
/// returns a report marked incomplete.
pub fn run_experiment_with_cancel(config: &ExperimentConfig, cancel: &AtomicBool) -> Result<ExperimentReport> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = config.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let mut report = pool.install(|| match config.kind {
        ExperimentKind::LisScaling => lis_scaling(config, cancel),
        ExperimentKind::Survival | ExperimentKind::TwoPoint => survival(config, cancel),
        ExperimentKind::CrossValidate => cross_validate(config, cancel),
    })?;
    report.threads = pool.current_num_threads();
    report.reference = reference(config)?;
    report.wall_clock = start.elapsed();
    Ok(report)
}

pub fn run_lis_scaling(config: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(config, &[ExperimentKind::LisScaling])?;
    run_experiment(config)
}

pub fn run_survival_scaling(config: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(config, &[ExperimentKind::Survival])?;
    run_experiment(config)
}

pub fn run_two_point(config: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(config, &[ExperimentKind::TwoPoint])?;
    run_experiment(config)
}

pub fn run_cross_validate(config: &ExperimentConfig) -> Result<ExperimentReport> {
    expect_kind(config, &[ExperimentKind::CrossValidate])?;
    run_experiment(config)
}

fn expect_kind(config: &ExperimentConfig, kinds: &[ExperimentKind]) -> Result<()> {
    if kinds.contains(&config.kind) {
        Ok(())
    } else {
        Err(Error::param(
            "kind",
            format!("`{}` does not fit this runner", config.kind),
        ))
    }
}

fn empty_report(config: &ExperimentConfig) -> ExperimentReport {
    ExperimentReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        records: Vec::new(),
        regression: RegressionOutcome::Undefined {
            reason: "not computed".into(),
        },
        reference: None,
        patterns: Vec::new(),
        complete: true,
        wall_clock: Duration::ZERO,
        threads: 0,
    }
}

fn fit(points: &[(f64, f64)]) -> RegressionOutcome {
    match loglog_regression(points) {
        Ok(r) => RegressionOutcome::Fitted(r),
        Err(e) => RegressionOutcome::Undefined { reason: e.to_string() },
    }
}

fn reference(config: &ExperimentConfig) -> Result<Option<ReferenceExponents>> {
    let p = config.p;
    if !(p > 0.0 && p < 1.0) {
        return Ok(None);
    }
    let row = exponent_table(&[p])?.remove(0);
    let expected_slope = match config.kind {
        ExperimentKind::LisScaling | ExperimentKind::CrossValidate => row.alpha_star,
        ExperimentKind::Survival => row.lambda_lower,
        ExperimentKind::TwoPoint => 2.0 * row.lambda_lower,
    };
    Ok(Some(ReferenceExponents {
        alpha_star: row.alpha_star,
        beta_star: row.beta_star,
        lambda_lower: row.lambda_lower,
        lambda_upper: row.lambda_upper,
        expected_slope,
    }))
}

/// Mean LIS of `Perm(mu_p, n)` for each `n`, then OLS of log mean on log n.
fn lis_scaling(config: &ExperimentConfig, cancel: &AtomicBool) -> Result<ExperimentReport> {
    let mut report = empty_report(config);
    for (size_index, &n) in config.sizes.iter().enumerate() {
        let lengths = par_trials(config.reps, cancel, RemySampler::default, |sampler, rep| {
            let mut rng = trial_rng(config.master_seed, config.kind, size_index, rep);
            let tree = sampler.sample(n, config.p, &mut rng)?;
            Ok(lis_tree(&tree) as u64)
        })?;
        let Some(lengths) = lengths else {
            report.complete = false;
            break;
        };
        let (mean, sd, count) = moments(lengths);
        report.records.push(SizeRecord {
            size: n,
            eps: None,
            mean,
            sd,
            count,
        });
    }
    let points: Vec<(f64, f64)> = report
        .records
        .iter()
        .map(|r| ((r.size as f64).ln(), r.mean.ln()))
        .collect();
    report.regression = fit(&points);
    Ok(report)
}

/// Survival frequencies per `eps`: one fresh excursion and one (or two)
/// fresh uniform tagged positions per trial. The regression is on the
/// records of the largest `N`, over the `eps` with a positive frequency.
fn survival(config: &ExperimentConfig, cancel: &AtomicBool) -> Result<ExperimentReport> {
    let mut report = empty_report(config);
    let two = config.kind == ExperimentKind::TwoPoint;
    for (size_index, &n) in config.sizes.iter().enumerate() {
        let kills = par_trials(config.reps, cancel, HashMap::new, |memo, rep| {
            let mut rng = trial_rng(config.master_seed, config.kind, size_index, rep);
            let heights = sample_excursion(n, &mut rng)?;
            let interior = 2 * n - 1;
            let tags = index::sample(&mut rng, interior, if two { 2 } else { 1 });
            // valley signs are drawn on first use; the two tags share them
            memo.clear();
            let mut sign_of = |m: usize| {
                *memo.entry(m).or_insert_with(|| {
                    if rng.random_bool(config.p) {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })
            };
            let mut worst = 0;
            for tag in tags.iter() {
                worst = worst.max(kill_length_with(&heights, tag + 1, &mut sign_of)?);
            }
            Ok(worst)
        })?;
        let Some(kills) = kills else {
            report.complete = false;
            break;
        };
        for &eps in &config.eps_grid {
            let total = (2 * n) as f64;
            let survived = kills.iter().map(|&k| u64::from(!(f64::from(k) > eps * total)));
            let (mean, sd, count) = moments(survived);
            report.records.push(SizeRecord {
                size: n,
                eps: Some(eps),
                mean,
                sd,
                count,
            });
        }
    }
    let last = *config.sizes.last().expect("validated");
    let points: Vec<(f64, f64)> = report
        .records
        .iter()
        .filter(|r| r.size == last && r.mean > 0.0)
        .map(|r| (r.eps.expect("survival record").ln(), r.mean.ln()))
        .collect();
    report.regression = fit(&points);
    Ok(report)
}

/// Pattern counts of sizes 3 and 4 from the tree sampler and from sample
/// points on a discrete excursion, compared with each other and with the
/// exact law. Each excursion trial feeds one point set of each size, so the
/// two sizes are correlated but every cell count is a sum of independent
/// trials.
fn cross_validate(config: &ExperimentConfig, cancel: &AtomicBool) -> Result<ExperimentReport> {
    const SIZES: [usize; 2] = [3, 4];
    let mut report = empty_report(config);
    let n = config.sizes[0];
    let p = config.p;
    let tree_idx = par_trials(config.reps, cancel, RemySampler::default, |sampler, rep| {
        let mut rng = trial_rng(config.master_seed, config.kind, 0, rep);
        let mut out = [0usize; 2];
        for (slot, &k) in SIZES.iter().enumerate() {
            let tree = sampler.sample(k, p, &mut rng)?;
            out[slot] = pattern_index(to_permutation(&tree).values());
        }
        Ok(out)
    })?;
    let exc_idx = par_trials(
        config.reps,
        cancel,
        || (),
        |_, rep| {
            let mut rng = trial_rng(config.master_seed, config.kind, 1, rep);
            let heights = sample_excursion(n, &mut rng)?;
            let mut out = [0usize; 2];
            for (slot, &k) in SIZES.iter().enumerate() {
                let mut points: Vec<usize> = index::sample(&mut rng, 2 * n - 1, k)
                    .into_iter()
                    .map(|i| i + 1)
                    .collect();
                points.sort_unstable();
                // each gap has its own separating minimum, so every sign is a fresh draw
                let tree = cartesian_tree_with(&heights, &points, |_| {
                    if rng.random_bool(p) {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                })?;
                out[slot] = pattern_index(to_permutation(&tree).values());
            }
            Ok(out)
        },
    )?;
    let (Some(tree_idx), Some(exc_idx)) = (tree_idx, exc_idx) else {
        report.complete = false;
        return Ok(report);
    };
    for (slot, &k) in SIZES.iter().enumerate() {
        let cells = factorial(k);
        let mut tree_counts = vec![0u64; cells];
        let mut excursion_counts = vec![0u64; cells];
        tree_idx.iter().for_each(|idx| tree_counts[idx[slot]] += 1);
        exc_idx.iter().for_each(|idx| excursion_counts[idx[slot]] += 1);
        let exact = exact_pattern_law(k, p);
        report.patterns.push(PatternComparison {
            size: k,
            patterns: (0..cells)
                .map(|i| pattern_at_index(k, i).values().iter().map(u32::to_string).collect())
                .collect(),
            tree_vs_exact: chi_square_gof(&tree_counts, &exact),
            excursion_vs_exact: chi_square_gof(&excursion_counts, &exact),
            tree_vs_excursion: chi_square_two_sample(&tree_counts, &excursion_counts),
            exact,
            tree_counts,
            excursion_counts,
        });
    }
    report.regression = RegressionOutcome::Undefined {
        reason: "no regression for cross validation".into(),
    };
    Ok(report)
}
