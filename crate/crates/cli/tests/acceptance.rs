//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Every tolerance and seed is fixed below.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use qamp_core::bench::run_speedup_benchmark;
use qamp_core::circuit::Op;
use qamp_core::credit::{
    build_expected_loss_problem, estimate_expected_loss, expected_loss_exact, GCIParams,
};
use qamp_core::estimation::{estimate, AeConfig, EstimationProblem};
use qamp_core::grover::{optimal_iterations, GroverSetup};
use qamp_core::qmc::{build_payoff_state_prep, estimate_mean_dyadic, DiscreteDistribution, Payoff};
use qamp_core::statevector::NORM_TOL;
use qamp_core::{BasisPredicate, Circuit, Gate, Permutation, RngSeed, Statevector};

const GROVER_TOL: f64 = 1e-9;
const GROVER_MIN_SUCCESS: f64 = 0.999;
const QAE_MIN_HITS: usize = 95;
const QAE_RUNS: u64 = 100;
const QAE_QUERY_CONSTANT: f64 = 100.0;
const QAE_SLOPE: (f64, f64) = (-1.15, -0.85);
const CLASSICAL_SLOPE: (f64, f64) = (-0.6, -0.4);
const BENCH_SEEDS: u64 = 20;
const ENCODING_TOL: f64 = 1e-12;
const ENCODING_INSTANCES: usize = 200;
const DYADIC_EPSILON: f64 = 0.05;
const LOSS_REFERENCE: f64 = 0.6446;
const LOSS_TOL: f64 = 0.01;
const COMPOSED_TOL: f64 = 1e-10;
const LOSS_CI_MIN_COVERED: usize = 90;
const LOSS_EPSILON: f64 = 0.01;
const UNITARITY_TOL: f64 = 1e-12;
const CHI_SQUARE_SHOTS: usize = 20_000;
const CHI_SQUARE_QUANTILE: f64 = 0.999;

struct Outcome {
    pass: bool,
    detail: String,
}

fn bernoulli(p: f64) -> EstimationProblem {
    let mut prep = Circuit::new(1).unwrap();
    prep.gate(Gate::RotY(2.0 * p.sqrt().asin()), 0).unwrap();
    EstimationProblem::new(prep, BasisPredicate::qubit_is_one(0)).with_true_p(p)
}

fn grover_exactness() -> Outcome {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in 2..=10usize {
        let size = 1usize << n;
        let mut ks = vec![1, 2, size / 4];
        ks.dedup();
        for k in ks {
            let marked = BasisPredicate::from_indices((0..k).map(|i| (i * 37 + 5) % size));
            let setup = GroverSetup::new(n, marked).unwrap();
            let g = setup.iterate().unwrap();
            let mut s = Statevector::uniform(n).unwrap();
            for m in 0..=50u64 {
                let err = (s.probability_of(setup.marked()) - setup.success_probability(m)).abs();
                worst = worst.max(err);
                cases += 1;
                g.apply_power(&mut s, 1).unwrap();
            }
        }
    }
    Outcome {
        pass: worst <= GROVER_TOL,
        detail: format!(
            "{cases} (n, k, m) cases, max |P − sin²((2m+1)φ)| = {worst:.2e} (tol {GROVER_TOL:.0e})"
        ),
    }
}

fn grover_optimality() -> Outcome {
    let n = 1u64 << 20;
    let m = optimal_iterations(n, 1).unwrap();
    let phi = (1.0 / n as f64).sqrt().asin();
    let p = ((2 * m + 1) as f64 * phi).sin().powi(2);
    Outcome {
        pass: m == 804 && p >= GROVER_MIN_SUCCESS,
        detail: format!("m* = {m} (want 804), success {p:.9} (want ≥ {GROVER_MIN_SUCCESS})"),
    }
}

fn qae_accuracy() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut worst_c = 0.0f64;
    for p in [0.1, 0.25, 0.5] {
        for eps in [1e-2, 1e-3] {
            let problem = bernoulli(p);
            let mut hits = 0;
            let mut max_q = 0u64;
            for seed in 0..QAE_RUNS {
                let r = estimate(&problem, &AeConfig::new(eps, RngSeed(seed))).unwrap();
                if (r.p_hat - p).abs() <= eps {
                    hits += 1;
                }
                max_q = max_q.max(r.queries);
            }
            let c = max_q as f64 * eps;
            worst_c = worst_c.max(c);
            pass &= hits >= QAE_MIN_HITS && c <= QAE_QUERY_CONSTANT;
            parts.push(format!("p={p} ε={eps}: {hits}/{QAE_RUNS}, C={c:.1}"));
        }
    }
    Outcome {
        pass,
        detail: format!(
            "{}; max C = {worst_c:.1} (limit {QAE_QUERY_CONSTANT})",
            parts.join("; ")
        ),
    }
}

fn speedup() -> Outcome {
    let seeds: Vec<u64> = (0..BENCH_SEEDS).collect();
    let r = run_speedup_benchmark(0.25, &[0.04, 0.02, 0.01, 0.005], &seeds).unwrap();
    let inside = |v: f64, (lo, hi): (f64, f64)| lo <= v && v <= hi;
    Outcome {
        pass: inside(r.qae.slope, QAE_SLOPE) && inside(r.classical.slope, CLASSICAL_SLOPE),
        detail: format!(
            "qae slope {:.3} in {QAE_SLOPE:?}, classical slope {:.3} in {CLASSICAL_SLOPE:?}",
            r.qae.slope, r.classical.slope
        ),
    }
}

fn encoding_exactness() -> Outcome {
    let mut rng = RngSeed(5).rng();
    let mut worst = 0.0f64;
    for _ in 0..ENCODING_INSTANCES {
        let bits = rng.random_range(1..=8usize);
        let n = 1usize << bits;
        let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let dist = DiscreteDistribution::new(bits, w.iter().map(|x| x / total).collect()).unwrap();
        let f: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let exact = dist.expectation(&f);
        let p = build_payoff_state_prep(&dist, &Payoff::unit(f))
            .unwrap()
            .exact_probability()
            .unwrap();
        worst = worst.max((p - exact).abs());
    }
    Outcome {
        pass: worst <= ENCODING_TOL,
        detail: format!("{ENCODING_INSTANCES} instances, max |P(ancilla=1) − Σqf| = {worst:.2e} (tol {ENCODING_TOL:.0e})"),
    }
}

fn dyadic_reconstruction() -> Outcome {
    let dist = DiscreteDistribution::uniform(3).unwrap();
    let values: Vec<f64> = (0..8).map(|x| x as f64).collect();
    let bound = (values.iter().map(|v| v * v).sum::<f64>() / 8.0).sqrt();
    let payoff = Payoff::nonnegative(values, bound);
    let mut worst = 0.0f64;
    let mut queries = 0;
    for seed in 0..20 {
        let r = estimate_mean_dyadic(
            &dist,
            &payoff,
            &AeConfig::new(DYADIC_EPSILON, RngSeed(seed)),
        )
        .unwrap();
        worst = worst.max((r.mean_hat - 3.5).abs());
        queries = queries.max(r.samples_or_queries);
    }
    Outcome {
        pass: worst <= DYADIC_EPSILON,
        detail: format!(
            "20 seeds, max |Ê − 3.5| = {worst:.4} (ε = {DYADIC_EPSILON}), max queries {queries}"
        ),
    }
}

fn credit_ground_truth() -> Outcome {
    let params = GCIParams::two_obligor_example();
    let exact = expected_loss_exact(&params).unwrap();
    let (problem, spec) = build_expected_loss_problem(&params).unwrap();
    let composed = problem.exact_probability().unwrap() * spec.normalizer as f64;
    let mut covered = 0;
    for seed in 0..100 {
        let r = estimate_expected_loss(
            &params,
            &AeConfig {
                alpha: 0.05,
                ..AeConfig::new(LOSS_EPSILON, RngSeed(seed))
            },
        )
        .unwrap();
        if r.ci.0 <= exact && exact <= r.ci.1 {
            covered += 1;
        }
    }
    Outcome {
        pass: (exact - LOSS_REFERENCE).abs() <= LOSS_TOL
            && (composed - exact).abs() <= COMPOSED_TOL
            && covered >= LOSS_CI_MIN_COVERED,
        detail: format!(
            "E[L] = {exact:.6} (reference {LOSS_REFERENCE} ± {LOSS_TOL}), circuit·{} − oracle = {:.1e}, 95% CI covers in {covered}/100 (want ≥ {LOSS_CI_MIN_COVERED})",
            spec.normalizer,
            composed - exact
        ),
    }
}

fn random_circuit(rng: &mut impl Rng, n: usize, len: usize) -> Circuit {
    let mut c = Circuit::new(n).unwrap();
    for _ in 0..len {
        let t = rng.random_range(0..n);
        let theta = rng.random_range(-6.0..6.0);
        let gate = match rng.random_range(0..7) {
            0 => Gate::PauliX,
            1 => Gate::PauliY,
            2 => Gate::PauliZ,
            3 => Gate::Hadamard,
            4 => Gate::RotY(theta),
            5 => Gate::RotZ(theta),
            _ => Gate::Phase(theta),
        };
        let ctrl = rng.random_range(0..n);
        if ctrl != t && rng.random::<bool>() {
            c.controlled(gate, &[ctrl], t).unwrap();
        } else {
            c.gate(gate, t).unwrap();
        }
    }
    c
}

fn statevector_properties() -> Outcome {
    let mut rng = RngSeed(8).rng();
    let mut norm_drift = 0.0f64;
    let mut unitarity = 0.0f64;
    let mut perm_exact = true;
    let mut chi_failures = 0;
    let trials = 50;
    for trial in 0..trials {
        let n = rng.random_range(1..=6usize);
        let c = random_circuit(&mut rng, n, 30);
        let mut s = Statevector::zero(n).unwrap();
        for op in c.ops() {
            if let Op::Gate { gate, .. } | Op::Controlled { gate, .. } = op {
                unitarity = unitarity.max(gate.unitarity_error());
            }
            op.apply(&mut s).unwrap();
            norm_drift = norm_drift.max((s.norm_sqr() - 1.0).abs());
        }

        let dim = 1usize << n;
        let mut images: Vec<usize> = (0..dim).collect();
        for i in (1..dim).rev() {
            images.swap(i, rng.random_range(0..=i));
        }
        let perm = Permutation::new(images).unwrap();
        let mut t = s.clone();
        t.apply_permutation(&perm).unwrap();
        t.apply_permutation(&perm.inverse()).unwrap();
        perm_exact &= t == s;

        let probs = s.probabilities();
        let mut counts = vec![0usize; dim];
        for i in s
            .sample_measurement(CHI_SQUARE_SHOTS, RngSeed(1000 + trial))
            .unwrap()
        {
            counts[i] += 1;
        }
        // merge outcomes with small expected counts so the χ² law applies
        let (mut stat, mut cells, mut pool_e, mut pool_k) = (0.0, 0usize, 0.0, 0usize);
        for (p, k) in probs.iter().zip(counts) {
            let e = p * CHI_SQUARE_SHOTS as f64;
            if e >= 5.0 {
                stat += (k as f64 - e).powi(2) / e;
                cells += 1;
            } else {
                pool_e += e;
                pool_k += k;
            }
        }
        if pool_e >= 5.0 {
            stat += (pool_k as f64 - pool_e).powi(2) / pool_e;
            cells += 1;
        }
        if cells >= 2 {
            let critical = ChiSquared::new((cells - 1) as f64)
                .unwrap()
                .inverse_cdf(CHI_SQUARE_QUANTILE);
            if stat >= critical {
                chi_failures += 1;
            }
        }
    }
    // at the 0.999 quantile, one rejection in 50 trials is within chance
    let pass =
        norm_drift <= NORM_TOL && unitarity <= UNITARITY_TOL && perm_exact && chi_failures <= 1;
    Outcome {
        pass,
        detail: format!(
            "{trials} random circuits: norm drift {norm_drift:.1e} (tol {NORM_TOL:.0e}), unitarity {unitarity:.1e} (tol {UNITARITY_TOL:.0e}), permutation round trip exact: {perm_exact}, χ² rejections at q={CHI_SQUARE_QUANTILE}: {chi_failures}/{trials}"
        ),
    }
}

fn run_cli(args: &[&str], dir: &Path, name: &str) -> Result<Vec<u8>, String> {
    let out = dir.join(name);
    let status = Command::new(env!("CARGO_BIN_EXE_qamp"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .env_remove("QAMP_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!("{args:?} exited with {}", status.status));
    }
    std::fs::read(&out).map_err(|e| e.to_string())
}

fn reproducibility() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("params.toml");
    std::fs::write(
        &config,
        "n_z = 4\nz_max = 3\np_zeros = [0.15, 0.25]\nrhos = [0.1, 0.05]\nlgd = [1, 2]\nalpha = 0.05\n",
    )
    .unwrap();
    let config = config.to_str().unwrap().to_string();
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "grover", "--qubits", "8", "--marked", "5", "--shots", "1000", "--seed", "1",
        ],
        vec![
            "count",
            "--qubits",
            "6",
            "--marked",
            "3,17,40",
            "--epsilon",
            "0.001",
            "--seed",
            "2",
        ],
        vec!["qae", "--p", "0.3", "--epsilon", "0.001", "--seed", "3"],
        vec![
            "qmc",
            "--payoff",
            "power-option",
            "--bits",
            "6",
            "--seed",
            "4",
        ],
        vec![
            "qmc",
            "--payoff",
            "identity",
            "--epsilon",
            "0.05",
            "--seed",
            "5",
        ],
        vec![
            "credit-risk",
            "--config",
            &config,
            "--epsilon",
            "0.01",
            "--seed",
            "7",
        ],
        vec![
            "bench",
            "--p",
            "0.25",
            "--eps",
            "0.04,0.02,0.01,0.005",
            "--seeds",
            "20",
            "--seed",
            "0",
        ],
    ];
    let mut identical = 0;
    let mut problems = Vec::new();
    for (i, args) in invocations.iter().enumerate() {
        let a = run_cli(args, dir.path(), &format!("a{i}.csv"));
        let b = run_cli(args, dir.path(), &format!("b{i}.csv"));
        match (a, b) {
            (Ok(a), Ok(b)) if a == b && !a.is_empty() => identical += 1,
            (Ok(_), Ok(_)) => problems.push(format!("{} differs", args[0])),
            (Err(e), _) | (_, Err(e)) => problems.push(e),
        }
    }
    Outcome {
        pass: problems.is_empty(),
        detail: format!(
            "{identical}/{} invocations byte-identical across two runs{}",
            invocations.len(),
            if problems.is_empty() {
                String::new()
            } else {
                format!("; {}", problems.join("; "))
            }
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Grover exactness", grover_exactness),
        ("Grover optimality", grover_optimality),
        ("QAE accuracy", qae_accuracy),
        ("quadratic speedup", speedup),
        ("QMC encoding exactness", encoding_exactness),
        ("dyadic reconstruction", dyadic_reconstruction),
        ("credit-risk ground truth", credit_ground_truth),
        ("statevector properties", statevector_properties),
        ("CLI reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {} {verdict} {name}: {} [{:.1}s]",
            i + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
