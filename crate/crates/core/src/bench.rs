//! Error-versus-cost benchmark of amplitude estimation against classical
//! sampling on a single Bernoulli amplitude.

use std::fmt;
use std::io::Write;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{QampError, Result};
use crate::estimation::{estimate, AeConfig, EstimationProblem};
use crate::gate::Gate;
use crate::rng::RngSeed;
use crate::statevector::BasisPredicate;
use crate::stats::normal_critical;

/// Smallest accepted ratio between the largest and smallest ε.
pub const MIN_EPSILON_SPAN: f64 = 8.0;

pub const CSV_HEADER: &str = "method,target,epsilon_target,queries,abs_error,p_true,seed,wall_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMethod {
    Qae,
    ClassicalMc,
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchMethod::Qae => "qae",
            BenchMethod::ClassicalMc => "classical-mc",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub method: BenchMethod,
    pub target: String,
    pub epsilon_target: f64,
    pub queries: u64,
    pub abs_error: f64,
    pub p_true: f64,
    pub seed: u64,
    pub wall_ms: u64,
}

impl BenchRecord {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{:.14e},{},{:.14e},{:.14e},{},{}",
            self.method,
            self.target,
            self.epsilon_target,
            self.queries,
            self.abs_error,
            self.p_true,
            self.seed,
            self.wall_ms
        )
    }
}

/// Ordinary least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n_points: usize,
}

pub fn ols(xs: &[f64], ys: &[f64]) -> Result<RegressionFit> {
    let n = xs.len();
    if n != ys.len() {
        return Err(QampError::DimensionMismatch {
            expected: n,
            actual: ys.len(),
        });
    }
    if n < 3 {
        return Err(QampError::InvalidArgument(format!(
            "need at least 3 points for a fit, got {n}"
        )));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(QampError::InvalidArgument(
            "non-finite regression input".into(),
        ));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(QampError::InvalidArgument("all x values coincide".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(RegressionFit {
        slope,
        intercept: my - slope * mx,
        r2,
        n_points: n,
    })
}

/// Per-ε averages of one method, in increasing ε order:
/// `(ε, mean queries, mean |error|)`.
pub fn aggregate(records: &[BenchRecord], method: BenchMethod) -> Vec<(f64, f64, f64)> {
    let mut groups: Vec<(f64, u128, f64, usize)> = Vec::new();
    for r in records.iter().filter(|r| r.method == method) {
        match groups.iter_mut().find(|g| g.0 == r.epsilon_target) {
            Some(g) => {
                g.1 += r.queries as u128;
                g.2 += r.abs_error;
                g.3 += 1;
            }
            None => groups.push((r.epsilon_target, r.queries as u128, r.abs_error, 1)),
        }
    }
    groups.sort_by(|a, b| a.0.total_cmp(&b.0));
    groups
        .into_iter()
        .map(|(eps, q, e, n)| (eps, q as f64 / n as f64, e / n as f64))
        .collect()
}

/// Fits `log(mean |error|)` against `log(mean queries)` across ε values.
pub fn fit_error_vs_cost(records: &[BenchRecord], method: BenchMethod) -> Result<RegressionFit> {
    let points = aggregate(records, method);
    if points.iter().any(|p| p.2 <= 0.0) {
        return Err(QampError::InvalidArgument(format!(
            "{method}: zero mean error at some ε, log-log fit undefined"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.2.ln()).collect();
    ols(&xs, &ys)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchOptions {
    /// Significance used by both methods; classical runs take
    /// `⌈z²/(4ε²)⌉` samples with `z` the two-sided critical value.
    pub alpha: f64,
    pub shots_per_round: u64,
    /// Record wall-clock time; off by default so output is reproducible.
    pub timing: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            alpha: 0.05,
            shots_per_round: AeConfig::default().shots_per_round,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub qae: RegressionFit,
    pub classical: RegressionFit,
}

impl BenchReport {
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        write_csv(&self.records, out)
    }
}

pub fn write_csv<W: Write>(records: &[BenchRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}

/// One-qubit problem `RY(2·arcsin √p)|0⟩` with good state `|1⟩`.
pub fn bernoulli_problem(p: f64) -> Result<EstimationProblem> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QampError::InvalidArgument(format!(
            "p = {p} outside [0, 1]"
        )));
    }
    let mut prep = Circuit::new(1)?;
    prep.gate(Gate::RotY(2.0 * p.sqrt().asin()), 0)?;
    Ok(EstimationProblem::new(prep, BasisPredicate::qubit_is_one(0)).with_true_p(p))
}

/// Classical sample count for half-width `ε` at significance `alpha`.
pub fn classical_samples(epsilon: f64, alpha: f64) -> u64 {
    let z = normal_critical(alpha);
    (z * z / (4.0 * epsilon * epsilon)).ceil() as u64
}

pub fn run_speedup_benchmark(p_true: f64, epsilons: &[f64], seeds: &[u64]) -> Result<BenchReport> {
    run_speedup_benchmark_with(p_true, epsilons, seeds, &BenchOptions::default())
}

/// Runs both methods for every `(ε, seed)` pair.
///
/// Records are ordered by method (amplitude estimation first), then by `ε`
/// as given, then by seed as given. Amplitude estimation uses `seed` as its
/// root seed; classical sampling uses an independent stream derived from it.
pub fn run_speedup_benchmark_with(
    p_true: f64,
    epsilons: &[f64],
    seeds: &[u64],
    options: &BenchOptions,
) -> Result<BenchReport> {
    if epsilons.len() < 4 {
        return Err(QampError::InvalidArgument(format!(
            "need at least 4 ε values, got {}",
            epsilons.len()
        )));
    }
    if epsilons.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(QampError::InvalidArgument(
            "every ε must lie in (0, 1)".into(),
        ));
    }
    let (lo, hi) = epsilons
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &e| {
            (lo.min(e), hi.max(e))
        });
    if hi / lo < MIN_EPSILON_SPAN * (1.0 - 1e-12) {
        return Err(QampError::InvalidArgument(format!(
            "ε values must span a factor of at least {MIN_EPSILON_SPAN}, got [{lo}, {hi}]"
        )));
    }
    let mut distinct = epsilons.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() != epsilons.len() {
        return Err(QampError::InvalidArgument("duplicate ε values".into()));
    }
    if seeds.len() < 10 {
        return Err(QampError::InvalidArgument(format!(
            "need at least 10 seeds, got {}",
            seeds.len()
        )));
    }

    let problem = bernoulli_problem(p_true)?;
    let target = format!("bernoulli-p{p_true}");
    let elapsed = |start: Instant| {
        if options.timing {
            start.elapsed().as_millis() as u64
        } else {
            0
        }
    };
    let mut records = Vec::with_capacity(2 * epsilons.len() * seeds.len());

    for &eps in epsilons {
        for &seed in seeds {
            let start = Instant::now();
            let config = AeConfig {
                epsilon: eps,
                alpha: options.alpha,
                shots_per_round: options.shots_per_round,
                seed: RngSeed(seed),
                ..AeConfig::default()
            };
            let r = estimate(&problem, &config)?;
            records.push(BenchRecord {
                method: BenchMethod::Qae,
                target: target.clone(),
                epsilon_target: eps,
                queries: r.queries.max(1),
                abs_error: (r.p_hat - p_true).abs(),
                p_true,
                seed,
                wall_ms: elapsed(start),
            });
        }
    }
    for &eps in epsilons {
        let samples = classical_samples(eps, options.alpha);
        for &seed in seeds {
            let start = Instant::now();
            let mut rng = RngSeed(seed).derive(0xC1A5).rng();
            let hits = (0..samples)
                .filter(|_| rng.random::<f64>() < p_true)
                .count();
            records.push(BenchRecord {
                method: BenchMethod::ClassicalMc,
                target: target.clone(),
                epsilon_target: eps,
                queries: samples,
                abs_error: (hits as f64 / samples as f64 - p_true).abs(),
                p_true,
                seed,
                wall_ms: elapsed(start),
            });
        }
    }

    Ok(BenchReport {
        qae: fit_error_vs_cost(&records, BenchMethod::Qae)?,
        classical: fit_error_vs_cost(&records, BenchMethod::ClassicalMc)?,
        records,
    })
}
