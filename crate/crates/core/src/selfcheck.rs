//! Built-in numerical self-checks run by `cmub-eur verify`.

use serde::Serialize;

use crate::bounds::{l_cmubs, outcome_conditional_entropy, u_cmubs};
use crate::entropy::{holevo_quantity, measurement_probs, purity, shannon_entropy};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::mub::{pauli_mubs, prime_mubs, ququart_mubs, qutrit_mubs, verify_mub, MubFile, OrthonormalBasis, MUB_TOL};
use crate::scenario::{random_mixed_state, random_pure_state, RandomStateSpec, StateKind};

const SEED: u64 = 20_240_601;
const STATES_PER_CHECK: u64 = 50;
const ENTROPY_TOL: f64 = 1e-9;

/// A set of bases to be checked; unlike [`crate::mub::MubSet`] it is not
/// verified on construction.
#[derive(Debug, Clone)]
pub struct CandidateSet {
    pub name: String,
    pub bases: Vec<OrthonormalBasis>,
}

impl CandidateSet {
    /// Reads a set in the [`MubFile`] layout; each basis must be orthonormal,
    /// but mutual unbiasedness is left to [`run_battery`].
    pub fn from_json(name: impl Into<String>, text: &str) -> Result<Self> {
        let file: MubFile = serde_json::from_str(text)?;
        let bases = file
            .bases
            .iter()
            .map(|b| {
                let rows = ComplexMatrix::from_parts(&b.re, &b.im)?;
                OrthonormalBasis::new((0..rows.rows()).map(|i| rows.row(i)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        if bases.is_empty() || bases.iter().any(|b| b.dim() != file.dim) {
            return Err(Error::InvalidBases(format!("bases do not all have the declared dimension {}", file.dim)));
        }
        Ok(Self { name: name.into(), bases })
    }

    pub fn dim(&self) -> usize {
        self.bases.first().map(OrthonormalBasis::dim).unwrap_or(0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The d = 2, 3, 4 tables and the d = 5 quadratic-phase set.
pub fn default_sets() -> Vec<CandidateSet> {
    let named = [
        ("pauli", pauli_mubs()),
        ("qutrit", qutrit_mubs()),
        ("ququart", ququart_mubs()),
        ("prime5", prime_mubs(5).expect("5 is an odd prime")),
    ];
    named
        .into_iter()
        .map(|(name, set)| CandidateSet {
            name: name.to_string(),
            bases: set.bases().to_vec(),
        })
        .collect()
}

/// Runs every check on every set; returns one result per (check, set).
pub fn run_battery(sets: &[CandidateSet]) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for set in sets {
        out.push(check_unbiased(set));
        out.push(check_two_design(set)?);
        out.push(check_entropy_sandwich(set)?);
        out.push(check_cq_identity(set)?);
    }
    Ok(out)
}

fn check_unbiased(set: &CandidateSet) -> CheckResult {
    let r = verify_mub(&set.bases, MUB_TOL);
    let complete = r.count == r.dim + 1;
    CheckResult {
        name: format!("unbiasedness[{}]", set.name),
        passed: r.passed && complete,
        detail: format!(
            "{} bases in d = {}, overlap deviation {:.2e}, Gram deviation {:.2e}",
            r.count, r.dim, r.max_overlap_deviation, r.max_gram_deviation
        ),
    }
}

fn check_two_design(set: &CandidateSet) -> Result<CheckResult> {
    let spec = RandomStateSpec::new(set.dim(), StateKind::Mixed, SEED, STATES_PER_CHECK)?;
    let mut worst = 0.0f64;
    for i in 0..spec.count {
        let s = random_mixed_state(&spec, i)?;
        let sum: f64 = set
            .bases
            .iter()
            .flat_map(|b| b.vectors())
            .map(|v| s.rho().expectation(v).re.powi(2))
            .sum();
        worst = worst.max((sum - purity(&s) - 1.0).abs());
    }
    Ok(CheckResult {
        name: format!("two-design[{}]", set.name),
        passed: worst <= ENTROPY_TOL,
        detail: format!("max |Σp² − tr ρ² − 1| = {worst:.2e}"),
    })
}

fn check_entropy_sandwich(set: &CandidateSet) -> Result<CheckResult> {
    let d = set.dim();
    let mut worst = f64::INFINITY;
    for kind in [StateKind::Mixed, StateKind::Pure] {
        let spec = RandomStateSpec::new(d, kind, SEED, STATES_PER_CHECK)?;
        for i in 0..spec.count {
            let s = match kind {
                StateKind::Mixed => random_mixed_state(&spec, i)?,
                StateKind::Pure => random_pure_state(&spec, i)?,
            };
            let p = purity(&s);
            let mut total = 0.0;
            for b in &set.bases {
                total += shannon_entropy(&measurement_probs(&s, b, "A")?);
            }
            let margin = (total - l_cmubs(d, p)?).min(u_cmubs(d, p)? - total);
            worst = worst.min(margin);
        }
    }
    Ok(CheckResult {
        name: format!("entropy-sandwich[{}]", set.name),
        passed: worst >= -ENTROPY_TOL,
        detail: format!("smallest margin L ≤ ΣH ≤ U: {worst:.3e}"),
    })
}

fn check_cq_identity(set: &CandidateSet) -> Result<CheckResult> {
    let d = set.dim();
    let spec = RandomStateSpec::new(d * d, StateKind::Mixed, SEED + 1, STATES_PER_CHECK / 5)?;
    let mut worst = 0.0f64;
    for i in 0..spec.count {
        let s = random_mixed_state(&spec, i)?.refactored(["A", "B"], vec![d, d])?;
        for b in &set.bases {
            let h = shannon_entropy(&measurement_probs(&s, b, "A")?);
            let info = holevo_quantity(&s, b, "A", &["B"])?;
            let direct = outcome_conditional_entropy(&s, b, "A", &["B"])?;
            worst = worst.max((h - info - direct).abs());
        }
    }
    Ok(CheckResult {
        name: format!("cq-identity[{}]", set.name),
        passed: worst <= ENTROPY_TOL,
        detail: format!("max |H − I − S(M|B)| = {worst:.2e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_tables_pass() {
        let results = run_battery(&default_sets()).unwrap();
        assert_eq!(results.len(), 16);
        for r in &results {
            assert!(r.passed, "{} failed: {}", r.name, r.detail);
        }
    }

    #[test]
    fn tampered_table_fails_unbiasedness() {
        let mut sets = default_sets();
        let ququart = &mut sets[2];
        ququart.bases[3] = ququart.bases[2].clone();
        let results = run_battery(&sets[2..3]).unwrap();
        let unbiased = results.iter().find(|r| r.name == "unbiasedness[ququart]").unwrap();
        assert!(!unbiased.passed);
    }

    #[test]
    fn candidate_round_trips_through_json() {
        let text = ququart_mubs().to_json();
        let set = CandidateSet::from_json("file", &text).unwrap();
        assert_eq!(set.dim(), 4);
        assert_eq!(set.bases.len(), 5);
        assert!(run_battery(&[set]).unwrap().iter().all(|r| r.passed));
    }
}
