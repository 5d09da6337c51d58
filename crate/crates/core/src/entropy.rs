//! Entropic functionals, all in bits.

use crate::error::{Error, Result};
use crate::mub::OrthonormalBasis;
use crate::state::{QuantumState, STATE_TOL};

/// Entries within this distance below zero are rounding noise.
pub const PROB_NEG_TOL: f64 = 1e-12;
pub const PROB_SUM_TOL: f64 = 1e-9;

/// A normalized outcome distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Clamps entries in `[-1e-12, 0)` to zero; rejects anything worse or a
    /// sum off by more than `1e-9`.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -PROB_NEG_TOL {
                return Err(Error::InvalidProbabilities(format!("entry {p}")));
            }
            *p = p.max(0.0);
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbabilities(format!("sum {sum}")));
        }
        Ok(Self(probs))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `-Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    plogp_sum(p.as_slice())
}

fn plogp_sum(p: &[f64]) -> f64 {
    let h: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum();
    // -0.0 and tiny negative sums from a single p = 1 entry
    h.max(0.0)
}

/// Entropy of a density-matrix spectrum; eigenvalues in `[-1e-10, 0)` count as zero.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    if let Some(&bad) = eigenvalues.iter().find(|&&l| l < -STATE_TOL) {
        return Err(Error::InvalidState {
            invariant: "positive semidefinite",
            detail: format!("eigenvalue {bad:e}"),
        });
    }
    let clamped: Vec<f64> = eigenvalues.iter().map(|l| l.max(0.0)).collect();
    Ok(plogp_sum(&clamped))
}

/// `S(ρ) = -tr ρ log₂ ρ`.
pub fn von_neumann_entropy(state: &QuantumState) -> Result<f64> {
    spectrum_entropy(&state.eigenvalues())
}

/// Entropy of the marginal on `labels` (zero for the empty set).
pub fn marginal_entropy(state: &QuantumState, labels: &[&str]) -> Result<f64> {
    if labels.is_empty() {
        return Ok(0.0);
    }
    von_neumann_entropy(&state.partial_trace(labels)?)
}

fn ensure_disjoint(x: &[&str], y: &[&str]) -> Result<()> {
    match x.iter().find(|l| y.contains(l)) {
        Some(l) => Err(Error::OverlappingLabels(l.to_string())),
        None => Ok(()),
    }
}

fn union<'a>(x: &[&'a str], y: &[&'a str]) -> Vec<&'a str> {
    x.iter().chain(y).copied().collect()
}

/// `S(target | memory) = S(target ∪ memory) − S(memory)`.
pub fn conditional_entropy(state: &QuantumState, target: &[&str], memory: &[&str]) -> Result<f64> {
    ensure_disjoint(target, memory)?;
    let joint = state.partial_trace(&union(target, memory))?;
    Ok(von_neumann_entropy(&joint)? - marginal_entropy(&joint, memory)?)
}

/// `I(x : y) = S(x) + S(y) − S(xy)`.
pub fn mutual_information(state: &QuantumState, x: &[&str], y: &[&str]) -> Result<f64> {
    ensure_disjoint(x, y)?;
    let joint = state.partial_trace(&union(x, y))?;
    Ok(marginal_entropy(&joint, x)? + marginal_entropy(&joint, y)? - von_neumann_entropy(&joint)?)
}

/// Outcome distribution `p_i = <ψ_i|ρ^A|ψ_i>` of measuring `basis` on `measured`.
pub fn measurement_probs(state: &QuantumState, basis: &OrthonormalBasis, measured: &str) -> Result<ProbabilityVector> {
    let reduced = state.partial_trace(&[measured])?;
    if basis.dim() != reduced.dim() {
        return Err(Error::Dimension(format!(
            "basis of dimension {} measured on `{measured}` of dimension {}",
            basis.dim(),
            reduced.dim()
        )));
    }
    let probs = basis.vectors().iter().map(|v| reduced.rho().expectation(v).re).collect();
    ProbabilityVector::new(probs)
}

/// Holevo quantity `I(M : memory)`: mutual information of the dephased
/// state on `measured ∪ memory`.
pub fn holevo_quantity(
    state: &QuantumState,
    basis: &OrthonormalBasis,
    measured: &str,
    memory: &[&str],
) -> Result<f64> {
    if memory.contains(&measured) {
        return Err(Error::OverlappingLabels(measured.to_string()));
    }
    let local = state.partial_trace(&union(&[measured], memory))?;
    let cq = local.post_measurement_state(basis, measured)?;
    mutual_information(&cq, &[measured], memory)
}

/// `tr ρ²`.
pub fn purity(state: &QuantumState) -> f64 {
    // tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ
    state.rho().as_slice().iter().map(|z| z.norm_sqr()).sum()
}
