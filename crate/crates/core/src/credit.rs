//! Gaussian conditional independence (GCI) credit-risk model.
//!
//! Obligor `k` defaults (`X_k = 1`) with probability
//!
//! ```text
//! p_k(z) = F((F⁻¹(p0_k) − √ρ_k · z) / √(1 − ρ_k))
//! ```
//!
//! given a standard normal systematic factor `Z = z`, independently across
//! obligors. The portfolio loss is `L = Σ λ_k X_k` with integer `λ_k`.
//!
//! Register layout of the composed circuit, low qubits first:
//! `n_z` factor qubits, `K` obligor qubits, `n_S` loss qubits, one objective
//! qubit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{QampError, Result};
use crate::estimation::{estimate, AeConfig, EstimationProblem};
use crate::permutation::Permutation;
use crate::qmc::{DiscreteDistribution, GaussianGrid, McMethod, McResult};
use crate::rng::RngSeed;
use crate::statevector::BasisPredicate;
use crate::stats::{normal_cdf, normal_quantile};

pub use crate::qmc::discretize_gaussian;

/// How grid points are weighted when discretizing the factor.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridWeights {
    /// Normal density at each grid point, renormalized.
    #[default]
    PdfAtPoint,
    /// Normal mass of the cell of width `Δz` around each point, renormalized.
    BinIntegrated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GCIParams {
    pub p0: Vec<f64>,
    pub rho: Vec<f64>,
    pub lgd: Vec<u64>,
    pub n_z: usize,
    pub z_max: f64,
    #[serde(default)]
    pub weights: GridWeights,
}

impl GCIParams {
    /// Two obligors with `p0 = (0.15, 0.25)`, `ρ = (0.1, 0.05)`,
    /// `λ = (1, 2)` on a 4-qubit factor grid over `[−3, 3]`.
    pub fn two_obligor_example() -> Self {
        GCIParams {
            p0: vec![0.15, 0.25],
            rho: vec![0.1, 0.05],
            lgd: vec![1, 2],
            n_z: 4,
            z_max: 3.0,
            weights: GridWeights::PdfAtPoint,
        }
    }

    pub fn num_obligors(&self) -> usize {
        self.p0.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.p0.len();
        if self.rho.len() != k || self.lgd.len() != k {
            return Err(QampError::InvalidArgument(format!(
                "parameter lengths differ: p0 {k}, rho {}, lgd {}",
                self.rho.len(),
                self.lgd.len()
            )));
        }
        if let Some(p) = self.p0.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(QampError::InvalidArgument(format!(
                "p0 = {p} outside [0, 1]"
            )));
        }
        if let Some(r) = self.rho.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(QampError::InvalidArgument(format!(
                "rho = {r} outside (0, 1)"
            )));
        }
        if self.n_z == 0 {
            return Err(QampError::InvalidArgument("n_z must be ≥ 1".into()));
        }
        if !(self.z_max > 0.0 && self.z_max.is_finite()) {
            return Err(QampError::InvalidArgument(format!(
                "z_max must be positive, got {}",
                self.z_max
            )));
        }
        if self
            .lgd
            .iter()
            .try_fold(0u64, |acc, &l| acc.checked_add(l))
            .is_none()
        {
            return Err(QampError::InvalidArgument("total loss overflows".into()));
        }
        Ok(())
    }

    pub fn total_lgd(&self) -> u64 {
        self.lgd.iter().sum()
    }
}

/// Width of the loss register and its full-scale value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LossRegisterSpec {
    pub n_s: usize,
    /// `2^n_s − 1`.
    pub normalizer: u64,
}

impl LossRegisterSpec {
    /// `n_S = ⌈log₂ Σλ⌉ + 1`, and one qubit when the total loss is 0.
    pub fn for_params(params: &GCIParams) -> Self {
        let total = params.total_lgd();
        let n_s = if total <= 1 {
            1
        } else {
            (u64::BITS - (total - 1).leading_zeros()) as usize + 1
        };
        LossRegisterSpec {
            n_s,
            normalizer: (1u64 << n_s) - 1,
        }
    }
}

/// `p_k(z)` for obligor `k` (zero-based).
pub fn conditional_default_prob(params: &GCIParams, k: usize, z: f64) -> Result<f64> {
    let (p0, rho) = match (params.p0.get(k), params.rho.get(k)) {
        (Some(&p), Some(&r)) => (p, r),
        _ => {
            return Err(QampError::InvalidArgument(format!(
                "obligor {k} out of range for {} obligors",
                params.p0.len()
            )))
        }
    };
    if p0 == 0.0 || p0 == 1.0 {
        return Ok(p0);
    }
    Ok(normal_cdf(
        (normal_quantile(p0) - rho.sqrt() * z) / (1.0 - rho).sqrt(),
    ))
}

/// Factor grid under the weighting selected in `params`.
pub fn factor_grid(params: &GCIParams) -> Result<GaussianGrid> {
    let grid = discretize_gaussian(params.n_z, params.z_max)?;
    match params.weights {
        GridWeights::PdfAtPoint => Ok(grid),
        GridWeights::BinIntegrated => {
            let half = if grid.points.len() > 1 {
                (grid.points[1] - grid.points[0]) / 2.0
            } else {
                params.z_max
            };
            let mass: Vec<f64> = grid
                .points
                .iter()
                .map(|&z| normal_cdf(z + half) - normal_cdf(z - half))
                .collect();
            let total: f64 = mass.iter().sum();
            let dist =
                DiscreteDistribution::new(params.n_z, mass.iter().map(|m| m / total).collect())?;
            Ok(GaussianGrid {
                points: grid.points,
                dist,
            })
        }
    }
}

/// `p_k(z_i)` for every grid point, indexed `[k][i]`.
fn default_table(params: &GCIParams, points: &[f64]) -> Result<Vec<Vec<f64>>> {
    (0..params.num_obligors())
        .map(|k| {
            points
                .iter()
                .map(|&z| conditional_default_prob(params, k, z))
                .collect()
        })
        .collect()
}

fn append_gci(circuit: &mut Circuit, params: &GCIParams) -> Result<()> {
    let grid = factor_grid(params)?;
    let z_qubits: Vec<usize> = (0..params.n_z).collect();
    circuit.load_distribution(&z_qubits, grid.dist.probs())?;
    for (k, probs) in default_table(params, &grid.points)?.into_iter().enumerate() {
        let angles = probs.iter().map(|p| 2.0 * p.sqrt().asin()).collect();
        circuit.multiplexed_ry(&z_qubits, params.n_z + k, angles)?;
    }
    Ok(())
}

/// Prepares `Σ_i √w(z_i) |z_i⟩ ⊗_k (√p_k(z_i) |1⟩ + √(1−p_k(z_i)) |0⟩)`
/// on `n_z + K` qubits.
pub fn build_gci_state_prep(params: &GCIParams) -> Result<Circuit> {
    params.validate()?;
    let mut circuit = Circuit::new(params.n_z + params.num_obligors())?;
    append_gci(&mut circuit, params)?;
    Ok(circuit)
}

/// `L(x)` for the obligor bits of a basis index.
fn loss_of(params: &GCIParams, index: usize) -> u64 {
    params
        .lgd
        .iter()
        .enumerate()
        .filter(|(k, _)| index >> (params.n_z + k) & 1 == 1)
        .map(|(_, l)| l)
        .sum()
}

fn loss_adder_on(params: &GCIParams, num_qubits: usize) -> Result<Permutation> {
    let shift = params.n_z + params.num_obligors();
    Permutation::from_fn(1usize << num_qubits, |i| {
        i ^ ((loss_of(params, i) as usize) << shift)
    })
}

/// `(z, x, s) ↦ (z, x, s ⊕ L(x))` on `n_z + K + n_S` qubits.
pub fn build_loss_adder(params: &GCIParams, spec: &LossRegisterSpec) -> Result<Permutation> {
    params.validate()?;
    if params.total_lgd() > spec.normalizer {
        return Err(QampError::InvalidArgument(format!(
            "total loss {} does not fit in {} qubits",
            params.total_lgd(),
            spec.n_s
        )));
    }
    loss_adder_on(params, params.n_z + params.num_obligors() + spec.n_s)
}

fn append_encoder(circuit: &mut Circuit, spec: &LossRegisterSpec, first: usize) -> Result<()> {
    let loss_qubits: Vec<usize> = (first..first + spec.n_s).collect();
    let angles = (0..=spec.normalizer)
        .map(|v| 2.0 * (v as f64 / spec.normalizer as f64).sqrt().asin())
        .collect();
    circuit.multiplexed_ry(&loss_qubits, first + spec.n_s, angles)?;
    Ok(())
}

/// `|v⟩|0⟩ ↦ |v⟩(√(v/(2^n_S−1)) |1⟩ + √(1 − v/(2^n_S−1)) |0⟩)` on
/// `n_S + 1` qubits, objective qubit on top.
pub fn build_amplitude_encoder(spec: &LossRegisterSpec) -> Result<Circuit> {
    let mut circuit = Circuit::new(spec.n_s + 1)?;
    append_encoder(&mut circuit, spec, 0)?;
    Ok(circuit)
}

/// The full model, loss adder and encoder as one estimation problem; the
/// good set is "objective qubit = 1" and its probability is
/// `E[L]/(2^n_S − 1)`.
pub fn build_expected_loss_problem(
    params: &GCIParams,
) -> Result<(EstimationProblem, LossRegisterSpec)> {
    params.validate()?;
    let spec = LossRegisterSpec::for_params(params);
    let base = params.n_z + params.num_obligors();
    let total = base + spec.n_s + 1;
    let mut circuit = Circuit::new(total)?;
    append_gci(&mut circuit, params)?;
    circuit.permutation(loss_adder_on(params, total)?)?;
    append_encoder(&mut circuit, &spec, base)?;
    let exact = expected_loss_exact(params)?;
    let problem = EstimationProblem::new(circuit, BasisPredicate::qubit_is_one(total - 1))
        .with_true_p(exact / spec.normalizer as f64);
    Ok((problem, spec))
}

/// `E[L] = Σ_i w(z_i) Σ_k λ_k p_k(z_i)` by enumeration.
pub fn expected_loss_exact(params: &GCIParams) -> Result<f64> {
    params.validate()?;
    let grid = factor_grid(params)?;
    let table = default_table(params, &grid.points)?;
    Ok(grid
        .dist
        .probs()
        .iter()
        .enumerate()
        .map(|(i, w)| {
            w * params
                .lgd
                .iter()
                .zip(&table)
                .map(|(&l, p)| l as f64 * p[i])
                .sum::<f64>()
        })
        .sum())
}

/// Expected loss by amplitude estimation, rescaled to loss units.
pub fn estimate_expected_loss(params: &GCIParams, config: &AeConfig) -> Result<McResult> {
    let (problem, spec) = build_expected_loss_problem(params)?;
    let r = estimate(&problem, config)?;
    let scale = spec.normalizer as f64;
    Ok(McResult {
        mean_hat: scale * r.p_hat,
        ci: (scale * r.ci.0, scale * r.ci.1),
        samples_or_queries: r.queries,
        method: McMethod::QuantumBounded,
        layers: Vec::new(),
        truncation_bound: 0.0,
    })
}

/// One measured outcome of the model circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModelSample {
    /// Index of the factor grid point.
    pub z_index: usize,
    /// Default indicators, bit `k` for obligor `k`.
    pub defaults: u64,
}

/// Histogram of `shots` measurements of the model state.
pub fn sample_model(
    params: &GCIParams,
    shots: usize,
    seed: RngSeed,
) -> Result<BTreeMap<ModelSample, usize>> {
    if params.num_obligors() > 63 {
        return Err(QampError::InvalidArgument("at most 63 obligors".into()));
    }
    let state = build_gci_state_prep(params)?.prepare()?;
    let z_mask = (1usize << params.n_z) - 1;
    let mut hist = BTreeMap::new();
    for index in state.sample_measurement(shots, seed)? {
        let key = ModelSample {
            z_index: index & z_mask,
            defaults: (index >> params.n_z) as u64,
        };
        *hist.entry(key).or_insert(0) += 1;
    }
    Ok(hist)
}
