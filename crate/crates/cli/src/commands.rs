use std::fs;

use serde::Deserialize;
use serde_json::{json, Value};

use qamp_core::bench::{self, BenchMethod, BenchOptions};
use qamp_core::credit::{self, GCIParams, GridWeights};
use qamp_core::estimation::{estimate, estimate_count, AeConfig};
use qamp_core::grover::{run_search, GroverSetup};
use qamp_core::qmc::{self, DiscreteDistribution, McResult, Payoff, PowerOptionParams};
use qamp_core::{BasisPredicate, RngSeed};

use crate::args::{
    BenchArgs, CountArgs, CreditArgs, EstimationArgs, GroverArgs, MethodChoice, PayoffKind,
    QaeArgs, QmcArgs,
};
use crate::output::{KeyValueCsv, Report, Summary};
use crate::CliError;

fn ae_config(args: &EstimationArgs, seed: u64) -> AeConfig {
    AeConfig {
        epsilon: args.epsilon,
        alpha: args.alpha,
        shots_per_round: args.shots_per_round,
        seed: RngSeed(seed),
        ..AeConfig::default()
    }
}

fn estimation_params(args: &EstimationArgs) -> Value {
    json!({
        "epsilon": args.epsilon,
        "alpha": args.alpha,
        "shots_per_round": args.shots_per_round,
    })
}

fn marked_set(qubits: usize, marked: &[usize]) -> Result<BasisPredicate, CliError> {
    if qubits == 0 || qubits > qamp_core::statevector::MAX_QUBITS {
        return Err(CliError::Usage(format!(
            "--qubits must be in 1..={}",
            qamp_core::statevector::MAX_QUBITS
        )));
    }
    if let Some(i) = marked.iter().find(|&&i| i >> qubits != 0) {
        return Err(CliError::Usage(format!(
            "marked index {i} does not fit in {qubits} qubits"
        )));
    }
    Ok(BasisPredicate::from_indices(marked.iter().copied()))
}

pub fn grover(args: &GroverArgs, seed: u64) -> Result<Report, CliError> {
    let setup = GroverSetup::new(args.qubits, marked_set(args.qubits, &args.marked)?)?;
    let out = run_search(&setup, args.shots, RngSeed(seed))?;
    let mut csv = KeyValueCsv::default();
    csv.int("iterations", out.iterations)
        .int("marked_count", setup.marked_count() as u64)
        .int("shots", out.shots as u64)
        .int("successes", out.successes as u64)
        .float("success_frequency", out.success_frequency)
        .float("theoretical", out.theoretical)
        .int("first_outcome", out.measured as u64);
    Ok(Report {
        line: format!(
            "grover: m = {}, success frequency {:.4} ({} / {}), theoretical sin²((2m+1)φ) = {:.6}",
            out.iterations, out.success_frequency, out.successes, out.shots, out.theoretical
        ),
        csv: csv.render(),
        summary: Summary {
            command: "grover",
            params: json!({
                "qubits": args.qubits,
                "marked": args.marked,
                "shots": args.shots,
                "seed": seed,
            }),
            results: json!({
                "iterations": out.iterations,
                "successes": out.successes,
                "success_frequency": out.success_frequency,
                "theoretical": out.theoretical,
                "first_outcome": out.measured,
            }),
            fits: Value::Null,
        },
    })
}

pub fn count(args: &CountArgs, seed: u64) -> Result<Report, CliError> {
    let marked = marked_set(args.qubits, &args.marked)?;
    let k = marked.count(1 << args.qubits);
    let c = estimate_count(args.qubits, marked, &ae_config(&args.estimation, seed))?;
    let mut csv = KeyValueCsv::default();
    csv.float("k_hat", c.k_hat)
        .int("k_true", k as u64)
        .text("exact", if c.exact { "true" } else { "false" })
        .float("p_hat", c.result.p_hat)
        .float("ci_lo", c.result.ci.0)
        .float("ci_hi", c.result.ci.1)
        .int("queries", c.result.queries);
    Ok(Report {
        line: format!(
            "count: k̂ = {} (true {k}){}, {} queries",
            c.k_hat,
            if c.exact { ", rounded" } else { "" },
            c.result.queries
        ),
        csv: csv.render(),
        summary: Summary {
            command: "count",
            params: json!({
                "qubits": args.qubits,
                "marked": args.marked,
                "estimation": estimation_params(&args.estimation),
                "seed": seed,
            }),
            results: json!({
                "k_hat": c.k_hat,
                "k_true": k,
                "exact": c.exact,
                "p_hat": c.result.p_hat,
                "ci": [c.result.ci.0, c.result.ci.1],
                "queries": c.result.queries,
            }),
            fits: Value::Null,
        },
    })
}

pub fn qae(args: &QaeArgs, seed: u64) -> Result<Report, CliError> {
    let problem = bench::bernoulli_problem(args.p)?;
    let r = estimate(&problem, &ae_config(&args.estimation, seed))?;
    let mut csv = KeyValueCsv::default();
    csv.float("p_hat", r.p_hat)
        .float("ci_lo", r.ci.0)
        .float("ci_hi", r.ci.1)
        .int("queries", r.queries)
        .int("rounds", r.rounds.len() as u64)
        .float("abs_error", (r.p_hat - args.p).abs());
    let rounds: Vec<Value> = r
        .rounds
        .iter()
        .map(|x| json!({"m": x.m, "shots": x.shots, "hits": x.hits}))
        .collect();
    Ok(Report {
        line: format!(
            "qae: p̂ = {:.6}, CI [{:.6}, {:.6}], |error| {:.2e}, {} queries",
            r.p_hat,
            r.ci.0,
            r.ci.1,
            (r.p_hat - args.p).abs(),
            r.queries
        ),
        csv: csv.render(),
        summary: Summary {
            command: "qae",
            params: json!({
                "p": args.p,
                "estimation": estimation_params(&args.estimation),
                "seed": seed,
            }),
            results: json!({
                "p_hat": r.p_hat,
                "ci": [r.ci.0, r.ci.1],
                "queries": r.queries,
                "degenerate": r.degenerate,
                "below_target": r.below_target,
                "rounds": rounds,
            }),
            fits: Value::Null,
        },
    })
}

fn mc_json(r: &McResult) -> Value {
    serde_json::to_value(r).expect("result serializes")
}

pub fn qmc(args: &QmcArgs, seed: u64) -> Result<Report, CliError> {
    let config = ae_config(&args.estimation, seed);
    if args.bits == 0 || args.bits > 20 {
        return Err(CliError::Usage("--bits must be in 1..=20".into()));
    }
    let n = 1usize << args.bits;
    // (distribution, payoff, factor mapping payoff units back)
    let (dist, payoff, factor) = match args.payoff {
        PayoffKind::Linear => {
            let top = (n - 1).max(1) as f64;
            (
                DiscreteDistribution::uniform(args.bits)?,
                Payoff::unit((0..n).map(|x| x as f64 / top).collect()),
                1.0,
            )
        }
        PayoffKind::Identity => {
            let dist = DiscreteDistribution::uniform(args.bits)?;
            let values: Vec<f64> = (0..n).map(|x| x as f64).collect();
            let second: f64 = dist.expectation(&values.iter().map(|v| v * v).collect::<Vec<_>>());
            (dist, Payoff::nonnegative(values, second.sqrt()), 1.0)
        }
        PayoffKind::PowerOption => {
            let grid = qmc::discretize_lognormal_power_option(&PowerOptionParams {
                spot: args.spot,
                rate: args.rate,
                sigma: args.sigma,
                maturity: args.maturity,
                exponent: args.exponent,
                strike: args.strike,
                n_bits: args.bits,
                z_max: args.z_max,
            })?;
            (grid.dist, grid.payoff, grid.scale)
        }
    };
    let exact = factor * dist.expectation(payoff.values());
    let scaled = |r: McResult| McResult {
        mean_hat: factor * r.mean_hat,
        ci: (factor * r.ci.0, factor * r.ci.1),
        ..r
    };

    let quantum = match args.method {
        MethodChoice::Classical => None,
        _ => Some(scaled(match args.payoff {
            PayoffKind::Identity => qmc::estimate_mean_dyadic(&dist, &payoff, &config)?,
            _ => qmc::estimate_mean_bounded(&dist, &payoff, &config)?,
        })),
    };
    let classical = match args.method {
        MethodChoice::Quantum => None,
        _ => {
            let samples = args.samples.unwrap_or_else(|| {
                bench::classical_samples(args.estimation.epsilon, args.estimation.alpha)
            });
            Some(scaled(qmc::classical_mc_mean_with_alpha(
                &dist,
                &payoff,
                samples,
                RngSeed(seed).derive(1),
                args.estimation.alpha,
            )?))
        }
    };

    let mut csv = KeyValueCsv::default();
    csv.float("exact", exact).float("scale", factor);
    let mut parts = vec![format!("qmc: exact {exact:.6}")];
    for (name, r) in [("quantum", &quantum), ("classical", &classical)] {
        if let Some(r) = r {
            csv.float(&format!("{name}_mean"), r.mean_hat)
                .float(&format!("{name}_ci_lo"), r.ci.0)
                .float(&format!("{name}_ci_hi"), r.ci.1)
                .int(&format!("{name}_cost"), r.samples_or_queries);
            parts.push(format!(
                "{name} {:.6} [{:.6}, {:.6}] cost {}",
                r.mean_hat, r.ci.0, r.ci.1, r.samples_or_queries
            ));
        }
    }
    Ok(Report {
        line: parts.join(", "),
        csv: csv.render(),
        summary: Summary {
            command: "qmc",
            params: json!({
                "payoff": format!("{:?}", args.payoff).to_lowercase(),
                "bits": args.bits,
                "estimation": estimation_params(&args.estimation),
                "seed": seed,
                "option": if args.payoff == PayoffKind::PowerOption {
                    json!({
                        "spot": args.spot, "rate": args.rate, "sigma": args.sigma,
                        "maturity": args.maturity, "exponent": args.exponent,
                        "strike": args.strike, "z_max": args.z_max,
                    })
                } else {
                    Value::Null
                },
            }),
            results: json!({
                "exact": exact,
                "scale": factor,
                "quantum": quantum.as_ref().map(mc_json),
                "classical": classical.as_ref().map(mc_json),
            }),
            fits: Value::Null,
        },
    })
}

/// Credit model file; key names follow the usual tutorial listing.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreditFile {
    pub n_z: Option<usize>,
    pub z_max: Option<f64>,
    pub p_zeros: Option<Vec<f64>>,
    pub rhos: Option<Vec<f64>>,
    pub lgd: Option<Vec<u64>>,
    pub alpha: Option<f64>,
}

pub fn credit_risk(args: &CreditArgs, seed: u64) -> Result<Report, CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            toml::from_str::<CreditFile>(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => CreditFile::default(),
    };
    let defaults = GCIParams::two_obligor_example();
    let params = GCIParams {
        p0: args.p_zeros.clone().or(file.p_zeros).unwrap_or(defaults.p0),
        rho: args.rhos.clone().or(file.rhos).unwrap_or(defaults.rho),
        lgd: args.lgd.clone().or(file.lgd).unwrap_or(defaults.lgd),
        n_z: args.n_z.or(file.n_z).unwrap_or(defaults.n_z),
        z_max: args.z_max.or(file.z_max).unwrap_or(defaults.z_max),
        weights: if args.bin_weights {
            GridWeights::BinIntegrated
        } else {
            GridWeights::PdfAtPoint
        },
    };
    let alpha = args.alpha.or(file.alpha).unwrap_or(0.05);
    let config = AeConfig {
        epsilon: args.epsilon,
        alpha,
        shots_per_round: args.shots_per_round,
        seed: RngSeed(seed),
        ..AeConfig::default()
    };
    let exact = credit::expected_loss_exact(&params)?;
    let spec = credit::LossRegisterSpec::for_params(&params);
    let r = credit::estimate_expected_loss(&params, &config)?;

    let mut csv = KeyValueCsv::default();
    csv.float("estimate", r.mean_hat)
        .float("ci_lo", r.ci.0)
        .float("ci_hi", r.ci.1)
        .float("exact", exact)
        .int("queries", r.samples_or_queries)
        .int("loss_qubits", spec.n_s as u64)
        .int("normalizer", spec.normalizer);
    Ok(Report {
        line: format!(
            "credit-risk: estimate {:.4}, CI [{:.4}, {:.4}], exact {:.4}, {} queries",
            r.mean_hat, r.ci.0, r.ci.1, exact, r.samples_or_queries
        ),
        csv: csv.render(),
        summary: Summary {
            command: "credit-risk",
            params: json!({
                "n_z": params.n_z,
                "z_max": params.z_max,
                "p_zeros": params.p0,
                "rhos": params.rho,
                "lgd": params.lgd,
                "alpha": alpha,
                "epsilon": args.epsilon,
                "shots_per_round": args.shots_per_round,
                "weights": params.weights,
                "seed": seed,
            }),
            results: json!({
                "estimate": r.mean_hat,
                "ci": [r.ci.0, r.ci.1],
                "exact": exact,
                "queries": r.samples_or_queries,
                "loss_qubits": spec.n_s,
                "normalizer": spec.normalizer,
            }),
            fits: Value::Null,
        },
    })
}

pub fn bench(args: &BenchArgs, seed: u64) -> Result<Report, CliError> {
    let seeds: Vec<u64> = (0..args.seeds).map(|i| seed.wrapping_add(i)).collect();
    let options = BenchOptions {
        alpha: args.alpha,
        shots_per_round: args.shots_per_round,
        timing: args.timing,
    };
    let report = bench::run_speedup_benchmark_with(args.p, &args.eps, &seeds, &options)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv).expect("writing to memory");
    let per_eps = |m| {
        bench::aggregate(&report.records, m)
            .into_iter()
            .map(|(e, q, err)| json!({"epsilon": e, "mean_queries": q, "mean_abs_error": err}))
            .collect::<Vec<_>>()
    };
    Ok(Report {
        line: format!(
            "bench: qae slope {:.3} (r² {:.3}), classical slope {:.3} (r² {:.3}), {} records",
            report.qae.slope,
            report.qae.r2,
            report.classical.slope,
            report.classical.r2,
            report.records.len()
        ),
        csv: String::from_utf8(csv).expect("ascii csv"),
        summary: Summary {
            command: "bench",
            params: json!({
                "p": args.p,
                "eps": args.eps,
                "seeds": seeds,
                "alpha": args.alpha,
                "shots_per_round": args.shots_per_round,
                "classical_samples": args.eps.iter()
                    .map(|&e| bench::classical_samples(e, args.alpha))
                    .collect::<Vec<_>>(),
            }),
            results: json!({
                "qae": per_eps(BenchMethod::Qae),
                "classical-mc": per_eps(BenchMethod::ClassicalMc),
            }),
            fits: json!({
                "qae": report.qae,
                "classical-mc": report.classical,
            }),
        },
    })
}
