//! Entropic uncertainty bounds with and without quantum memory.
//!
//! Baselines: Maassen–Uffink, the bipartite memory bound, the tripartite
//! bound with its two Holevo-corrected refinements, and the multi-memory
//! bound for an m-tuple of measurements. On top of those, the purity-based
//! lower and upper bounds for a complete MUB set shared with `n` memories.
//!
//! For a complete set in dimension `d`, with `m_t` bases announced to memory
//! `B_t`, `c_t = m_t(m_t − 1)/(2d)` and `κ = ((d+1)/2)·log₂ d`:
//!
//! ```text
//! lower = κ + Σ_t c_t S(A|B_t) + max{0, δ}
//! δ     = L(d, Π) − κ − Σ_t c_t S(A) + Σ_t c_t I(A:B_t) − Σ_i I(M_i:B_t(i))
//! upper = U(d, Π) − Σ_i I(M_i:B_t(i))
//! ```
//!
//! where `Π = tr (ρ^A)²` and `L`, `U` are the purity-dependent bounds on
//! `Σ_i H(M_i)` without memory.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::entropy::{
    conditional_entropy, holevo_quantity, marginal_entropy, measurement_probs, mutual_information, purity,
    shannon_entropy,
};
use crate::error::{Error, Result};
use crate::mub::{inner, OrthonormalBasis};
use crate::scenario::{GameScenario, Partition};
use crate::state::QuantumState;

/// Slack allowed when checking `lower ≤ uncertainty ≤ upper`.
pub const VALIDITY_TOL: f64 = 1e-7;

/// Agreement required between the two routes to the uncertainty.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// Distance from an integer below which `v` is snapped to it.
pub const INTEGER_SNAP: f64 = 1e-12;

const PURITY_TOL: f64 = 1e-10;

/// `c = max_{jk} |<ψ_j|φ_k>|²`.
pub fn max_overlap(b1: &OrthonormalBasis, b2: &OrthonormalBasis) -> Result<f64> {
    if b1.dim() != b2.dim() {
        return Err(Error::Dimension(format!("bases of dimension {} and {}", b1.dim(), b2.dim())));
    }
    Ok(b1
        .vectors()
        .iter()
        .flat_map(|u| b2.vectors().iter().map(move |v| inner(u, v).norm_sqr()))
        .fold(0.0, f64::max))
}

/// Maassen–Uffink complementarity `−log₂ c`.
pub fn q_mu(b1: &OrthonormalBasis, b2: &OrthonormalBasis) -> Result<f64> {
    Ok((-max_overlap(b1, b2)?.log2()).max(0.0))
}

/// `S(M | memory)` computed directly from the dephased state.
pub fn outcome_conditional_entropy(
    state: &QuantumState,
    basis: &OrthonormalBasis,
    measured: &str,
    memory: &[&str],
) -> Result<f64> {
    let mut keep = vec![measured];
    keep.extend_from_slice(memory);
    let cq = state.partial_trace(&keep)?.post_measurement_state(basis, measured)?;
    conditional_entropy(&cq, &[measured], memory)
}

/// Bipartite memory bound `q_MU + S(A|B)` on `S(M₁|B) + S(M₂|B)`.
pub fn berta_bound(
    state: &QuantumState,
    measured: &str,
    memory: &[&str],
    b1: &OrthonormalBasis,
    b2: &OrthonormalBasis,
) -> Result<f64> {
    Ok(q_mu(b1, b2)? + conditional_entropy(state, &[measured], memory)?)
}

/// Two measurements on A, guessed by B (first) and C (second).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TripartiteBounds {
    /// `S(M₁|B) + S(M₂|C)`
    pub lhs: f64,
    pub q_mu: f64,
    pub renes: f64,
    pub ming: f64,
    pub wu: f64,
    pub delta1: f64,
    pub delta2: f64,
}

pub fn tripartite_bounds(
    state: &QuantumState,
    measured: &str,
    mem_b: &str,
    mem_c: &str,
    b1: &OrthonormalBasis,
    b2: &OrthonormalBasis,
) -> Result<TripartiteBounds> {
    let q = q_mu(b1, b2)?;
    let s_a = marginal_entropy(state, &[measured])?;
    let h1 = shannon_entropy(&measurement_probs(state, b1, measured)?);
    let h2 = shannon_entropy(&measurement_probs(state, b2, measured)?);
    let i_ab = mutual_information(state, &[measured], &[mem_b])?;
    let i_ac = mutual_information(state, &[measured], &[mem_c])?;
    let i_m1_b = holevo_quantity(state, b1, measured, &[mem_b])?;
    let i_m2_b = holevo_quantity(state, b2, measured, &[mem_b])?;
    let i_m1_c = holevo_quantity(state, b1, measured, &[mem_c])?;
    let i_m2_c = holevo_quantity(state, b2, measured, &[mem_c])?;

    let delta1 = 2.0 * s_a + q - i_ab - i_ac + i_m2_b + i_m1_c - h1 - h2;
    let delta2 = 2.0 * s_a + q - i_m1_b - i_m2_c - h1 - h2;
    let lhs = outcome_conditional_entropy(state, b1, measured, &[mem_b])?
        + outcome_conditional_entropy(state, b2, measured, &[mem_c])?;
    Ok(TripartiteBounds {
        lhs,
        q_mu: q,
        renes: q,
        ming: q + delta1.max(0.0),
        wu: q + delta2.max(0.0),
        delta1,
        delta2,
    })
}

fn check_purity(d: usize, purity_a: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d, "need d ≥ 2".into()));
    }
    let lo = 1.0 / d as f64;
    if !(lo - PURITY_TOL..=1.0 + PURITY_TOL).contains(&purity_a) {
        return Err(Error::PurityOutOfRange(purity_a, d));
    }
    Ok(purity_a.clamp(lo, 1.0))
}

/// `v = (d + 1)/(Π + 1)`.
pub fn v_parameter(d: usize, purity_a: f64) -> f64 {
    (d as f64 + 1.0) / (purity_a + 1.0)
}

/// Integer part of `v`, snapping to the nearest integer within [`INTEGER_SNAP`].
fn floor_snapped(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < INTEGER_SNAP {
        r
    } else {
        v.floor()
    }
}

/// Purity-based lower bound on `Σ_i H(M_i)` over a complete set:
/// `(d+1)[log₂(1+k) − (k/v)(1+k−v) log₂(1+1/k)]`, `k = ⌊v⌋`.
pub fn l_cmubs(d: usize, purity_a: f64) -> Result<f64> {
    let p = check_purity(d, purity_a)?;
    let v = v_parameter(d, p);
    let k = floor_snapped(v);
    Ok((d as f64 + 1.0) * ((1.0 + k).log2() - (k / v) * (1.0 + k - v) * (1.0 + 1.0 / k).log2()))
}

/// Purity-based upper bound on `Σ_i H(M_i)` over a complete set.
pub fn u_cmubs(d: usize, purity_a: f64) -> Result<f64> {
    let p = check_purity(d, purity_a)?;
    let df = d as f64;
    let head = (df + 1.0) * df.log2();
    if d == 2 {
        Ok(head - (df - 1.0) * (df * p - 1.0) / (df * LN_2))
    } else {
        Ok(head - (df - 1.0) / (df * (df - 2.0)) * (df - 1.0).log2() * (df * p - 1.0))
    }
}

/// Per-basis terms of the uncertainty.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementTerms {
    /// 1-based basis index
    pub basis: usize,
    pub memory: String,
    pub h_m: f64,
    pub s_m_given_b: f64,
    pub i_m_b: f64,
}

/// Per-memory terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemoryTerms {
    pub memory: String,
    pub s_a_given_b: f64,
    pub i_a_b: f64,
    pub m_t: usize,
}

/// The uncertainty, every bound, and the quantities they are built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub lhs_uncertainty: f64,
    pub thm1_lower: f64,
    pub thm2_upper: f64,
    /// multi-memory baseline for the same bases and partition
    pub zhang_lower: f64,
    pub base_cmub_lower: f64,
    /// before `max{0, ·}`
    pub delta_cmub: f64,
    /// before `max{0, ·}`
    pub delta_zhang: f64,
    pub l_cmubs: f64,
    pub u_cmubs: f64,
    pub purity_a: f64,
    pub v: f64,
    pub per_measurement: Vec<MeasurementTerms>,
    pub per_memory: Vec<MemoryTerms>,
    pub s_a: f64,
}

impl BoundReport {
    /// Checks `lower ≤ uncertainty ≤ upper` and `lower ≥ base`, naming the
    /// first violated relation.
    pub fn check_invariants(&self) -> Result<()> {
        if self.thm1_lower > self.lhs_uncertainty + VALIDITY_TOL {
            return Err(Error::InvariantViolation(format!(
                "lower bound {} exceeds uncertainty {}",
                self.thm1_lower, self.lhs_uncertainty
            )));
        }
        if self.lhs_uncertainty > self.thm2_upper + VALIDITY_TOL {
            return Err(Error::InvariantViolation(format!(
                "uncertainty {} exceeds upper bound {}",
                self.lhs_uncertainty, self.thm2_upper
            )));
        }
        if self.thm1_lower < self.base_cmub_lower - 1e-12 {
            return Err(Error::InvariantViolation(format!(
                "lower bound {} below its base term {}",
                self.thm1_lower, self.base_cmub_lower
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Entropic ingredients shared by every bound.
struct Ingredients {
    purity_a: f64,
    s_a: f64,
    per_memory: Vec<MemoryTerms>,
    per_measurement: Vec<MeasurementTerms>,
}

fn ingredients(
    state: &QuantumState,
    measured: &str,
    memories: &[String],
    bases: &[OrthonormalBasis],
    partition: &Partition,
) -> Result<Ingredients> {
    let rho_a = state.partial_trace(&[measured])?;
    let purity_a = purity(&rho_a);
    let s_a = marginal_entropy(&rho_a, &[measured])?;

    let mut per_memory = Vec::with_capacity(memories.len());
    for (t, mem) in memories.iter().enumerate() {
        let local = state.partial_trace(&[measured, mem.as_str()])?;
        per_memory.push(MemoryTerms {
            memory: mem.clone(),
            s_a_given_b: conditional_entropy(&local, &[measured], &[mem])?,
            i_a_b: mutual_information(&local, &[measured], &[mem])?,
            m_t: partition.groups()[t].len(),
        });
    }

    let mut per_measurement = Vec::with_capacity(bases.len());
    for (i, basis) in bases.iter().enumerate() {
        let mem = &memories[partition.memory_of(i)];
        let local = state.partial_trace(&[measured, mem.as_str()])?;
        let h_m = shannon_entropy(&measurement_probs(&local, basis, measured)?);
        let i_m_b = holevo_quantity(&local, basis, measured, &[mem])?;
        let s_m_given_b = h_m - i_m_b;
        let direct = outcome_conditional_entropy(&local, basis, measured, &[mem])?;
        if (direct - s_m_given_b).abs() > CROSS_CHECK_TOL {
            return Err(Error::InvariantViolation(format!(
                "S(M{}|{mem}) = {direct} disagrees with H − I = {s_m_given_b}",
                i + 1
            )));
        }
        per_measurement.push(MeasurementTerms {
            basis: i + 1,
            memory: mem.clone(),
            h_m,
            s_m_given_b,
            i_m_b,
        });
    }
    Ok(Ingredients {
        purity_a,
        s_a,
        per_memory,
        per_measurement,
    })
}

fn pair_coefficient(m_t: usize, denom: f64) -> f64 {
    (m_t * m_t.saturating_sub(1)) as f64 / (2.0 * denom)
}

/// `(lower bound, δ_mn)` of the multi-memory bound for an arbitrary m-tuple.
fn multi_memory_terms(ing: &Ingredients, bases: &[OrthonormalBasis]) -> Result<(f64, f64)> {
    let m = bases.len();
    if m < 2 {
        return Err(Error::InvalidBases("need at least two measurements".into()));
    }
    let denom = (m - 1) as f64;
    let mut log_c = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            log_c += max_overlap(&bases[i], &bases[j])?.log2();
        }
    }
    let complementarity = -log_c / denom;

    let mut cond = 0.0;
    let mut info = 0.0;
    let mut pairs = 0.0;
    for mem in &ing.per_memory {
        let c = pair_coefficient(mem.m_t, denom);
        cond += c * mem.s_a_given_b;
        info += c * mem.i_a_b;
        pairs += (mem.m_t * (mem.m_t - 1)) as f64;
    }
    let holevo: f64 = ing.per_measurement.iter().map(|t| t.i_m_b).sum();
    let delta = ((m * (m - 1)) as f64 - pairs) / (2.0 * denom) * ing.s_a + info - holevo;
    Ok((complementarity + cond + delta.max(0.0), delta))
}

/// Multi-memory lower bound for the scenario's bases, with overlaps computed
/// from the basis vectors.
pub fn multi_memory_bound(scenario: &GameScenario) -> Result<f64> {
    let ing = scenario_ingredients(scenario)?;
    Ok(multi_memory_terms(&ing, scenario.mubs.bases())?.0)
}

fn scenario_ingredients(s: &GameScenario) -> Result<Ingredients> {
    ingredients(&s.state, &s.measured, &s.memories, s.mubs.bases(), &s.partition)
}

/// Builds the full report without checking its invariants.
pub fn compute_report(scenario: &GameScenario) -> Result<BoundReport> {
    let ing = scenario_ingredients(scenario)?;
    let d = scenario.dim();
    let df = d as f64;
    let kappa = (df + 1.0) / 2.0 * df.log2();

    let l = l_cmubs(d, ing.purity_a)?;
    let u = u_cmubs(d, ing.purity_a)?;

    let mut cond = 0.0;
    let mut info = 0.0;
    let mut coeff_sum = 0.0;
    for mem in &ing.per_memory {
        let c = pair_coefficient(mem.m_t, df);
        cond += c * mem.s_a_given_b;
        info += c * mem.i_a_b;
        coeff_sum += c;
    }
    let holevo: f64 = ing.per_measurement.iter().map(|t| t.i_m_b).sum();
    let lhs: f64 = ing.per_measurement.iter().map(|t| t.s_m_given_b).sum();

    let base = kappa + cond;
    let delta = l - kappa - coeff_sum * ing.s_a + info - holevo;
    let (baseline, delta_zhang) = multi_memory_terms(&ing, scenario.mubs.bases())?;

    Ok(BoundReport {
        lhs_uncertainty: lhs,
        thm1_lower: base + delta.max(0.0),
        thm2_upper: u - holevo,
        zhang_lower: baseline,
        base_cmub_lower: base,
        delta_cmub: delta,
        delta_zhang,
        l_cmubs: l,
        u_cmubs: u,
        purity_a: ing.purity_a,
        v: v_parameter(d, ing.purity_a),
        per_measurement: ing.per_measurement,
        per_memory: ing.per_memory,
        s_a: ing.s_a,
    })
}

/// Full report, rejected if any invariant fails.
pub fn evaluate_all(scenario: &GameScenario) -> Result<BoundReport> {
    let report = compute_report(scenario)?;
    report.check_invariants()?;
    Ok(report)
}

/// Purity-based multi-memory lower bound on the uncertainty.
pub fn thm1_lower(scenario: &GameScenario) -> Result<f64> {
    Ok(compute_report(scenario)?.thm1_lower)
}

/// Purity-and-Holevo upper bound on the uncertainty.
pub fn thm2_upper(scenario: &GameScenario) -> Result<f64> {
    Ok(compute_report(scenario)?.thm2_upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::{pauli_mubs, ququart_mubs, qutrit_mubs};
    use crate::scenario::{
        build_scenario, example1_state, example4_w_state, random_mixed_state, Family, RandomStateSpec, StateKind,
    };
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn q_mu_values() {
        let p = pauli_mubs();
        close(q_mu(&p.bases()[0], &p.bases()[0]).unwrap(), 0.0, 0.0);
        for set in [pauli_mubs(), qutrit_mubs(), ququart_mubs()] {
            let d = set.dim() as f64;
            close(q_mu(&set.bases()[0], &set.bases()[1]).unwrap(), d.log2(), 1e-12);
        }
        let a = FRAC_PI_8;
        let rotated = OrthonormalBasis::new(vec![
            vec![Complex64::new(a.cos(), 0.0), Complex64::new(a.sin(), 0.0)],
            vec![Complex64::new(-a.sin(), 0.0), Complex64::new(a.cos(), 0.0)],
        ])
        .unwrap();
        let q = q_mu(&p.bases()[0], &rotated).unwrap();
        close(q, -(a.cos().powi(2)).log2(), 1e-12);
        close(q, 0.2284, 1e-3);
        assert!(q_mu(&p.bases()[0], &qutrit_mubs().bases()[0]).is_err());
    }

    #[test]
    fn berta_values() {
        let p = pauli_mubs();
        let (z, x) = (&p.bases()[0], &p.bases()[1]);
        let bell = example1_state(FRAC_PI_4).unwrap();
        close(berta_bound(&bell, "A", &["B"], x, z).unwrap(), 0.0, 1e-12);
        let ket00 = example1_state(0.0).unwrap();
        close(berta_bound(&ket00, "A", &["B"], x, z).unwrap(), 1.0, 1e-12);
        let mixed = QuantumState::maximally_mixed(["A", "B"], vec![2, 2]).unwrap();
        close(berta_bound(&mixed, "A", &["B"], x, z).unwrap(), 2.0, 1e-12);
    }

    #[test]
    fn tripartite_uncorrelated_closed_form() {
        let p = pauli_mubs();
        let (x, z) = (&p.bases()[1], &p.bases()[0]);
        let theta: f64 = 0.3;
        let a = QuantumState::from_pure(["A"], vec![2], &[theta.cos().into(), theta.sin().into()]).unwrap();
        let bc = QuantumState::maximally_mixed(["B", "C"], vec![2, 2]).unwrap();
        let s = a.tensor(&bc).unwrap();
        let t = tripartite_bounds(&s, "A", "B", "C", x, z).unwrap();
        let hx = {
            let px = (theta.cos() + theta.sin()).powi(2) / 2.0;
            -px * px.log2() - (1.0 - px) * (1.0 - px).log2()
        };
        let hz = {
            let pz = theta.cos().powi(2);
            -pz * pz.log2() - (1.0 - pz) * (1.0 - pz).log2()
        };
        let delta = 1.0 - hx - hz;
        close(t.delta1, delta, 1e-9);
        close(t.delta2, delta, 1e-9);
        close(t.ming, 1.0 + delta.max(0.0), 1e-9);
        close(t.wu, 1.0 + delta.max(0.0), 1e-9);
        close(t.renes, 1.0, 1e-12);
    }

    #[test]
    fn tripartite_w_and_ghz() {
        let p = pauli_mubs();
        let (x, z) = (&p.bases()[1], &p.bases()[0]);
        let w = example4_w_state(2.0 * PI / 3.0, 2.0 * PI / 3.0).unwrap();
        let t = tripartite_bounds(&w, "A", "B1", "B2", x, z).unwrap();
        assert!(t.ming <= t.wu + 1e-9);
        assert!(t.wu <= t.lhs + 1e-7);
        let s = 0.5f64.sqrt();
        let mut amps = vec![Complex64::new(0.0, 0.0); 8];
        amps[0] = s.into();
        amps[7] = s.into();
        let ghz = QuantumState::from_pure(["A", "B", "C"], vec![2, 2, 2], &amps).unwrap();
        let t = tripartite_bounds(&ghz, "A", "B", "C", z, x).unwrap();
        close(t.renes, 1.0, 1e-12);
        assert!(t.renes <= t.lhs + 1e-7);
        // Z is copied into B, X outcome is uniform and hidden from C
        close(t.lhs, 1.0, 1e-9);
    }

    #[test]
    fn l_cmubs_hand_values() {
        close(l_cmubs(2, 1.0).unwrap(), 2.0, 1e-12);
        close(l_cmubs(2, 0.5).unwrap(), 3.0, 1e-12);
        close(l_cmubs(3, 1.0).unwrap(), 4.0, 1e-12);
        assert!(matches!(l_cmubs(2, 0.3), Err(Error::PurityOutOfRange(..))));
        assert!(l_cmubs(2, 1.2).is_err());
        assert!(l_cmubs(1, 1.0).is_err());
    }

    #[test]
    fn l_cmubs_continuous_at_integer_v() {
        // d = 3, Π = 1 sits exactly on v = 2
        for d in [2usize, 3, 4, 5] {
            for k in 2..=d {
                let p = (d as f64 + 1.0) / k as f64 - 1.0;
                if p < 1.0 / d as f64 || p > 1.0 {
                    continue;
                }
                let at = l_cmubs(d, p).unwrap();
                let below = l_cmubs(d, (p - 1e-9).max(1.0 / d as f64)).unwrap();
                let above = l_cmubs(d, (p + 1e-9).min(1.0)).unwrap();
                close(at, below, 1e-6);
                close(at, above, 1e-6);
                close(at, (d as f64 + 1.0) * (k as f64).log2(), 1e-12);
            }
        }
    }

    #[test]
    fn u_cmubs_hand_values() {
        close(u_cmubs(2, 1.0).unwrap(), 3.0 - 1.0 / (2.0 * LN_2), 1e-12);
        close(u_cmubs(2, 1.0).unwrap(), 2.278652, 1e-5);
        close(u_cmubs(2, 0.5).unwrap(), 3.0, 1e-12);
        close(u_cmubs(3, 1.0).unwrap(), 4.0 * 3f64.log2() - 4.0 / 3.0, 1e-12);
        close(u_cmubs(3, 1.0).unwrap(), 5.006517, 1e-5);
        // d = 3 closed form 4log₂3 + 2/3 − 2Π, d = 4 closed form 10 − (3log₂3/8)(4Π − 1)
        close(u_cmubs(3, 0.6).unwrap(), 4.0 * 3f64.log2() + 2.0 / 3.0 - 1.2, 1e-12);
        close(u_cmubs(4, 0.7).unwrap(), 10.0 - 3.0 * 3f64.log2() / 8.0 * 1.8, 1e-12);
        assert!(u_cmubs(4, 0.1).is_err());
    }

    #[test]
    fn multi_memory_values() {
        let ket00 = build_scenario(Family::Example1 { theta: 0.0 }, None).unwrap();
        close(multi_memory_bound(&ket00).unwrap(), 1.5, 1e-12);
        let bell = build_scenario(Family::Example1 { theta: FRAC_PI_4 }, None).unwrap();
        close(multi_memory_bound(&bell).unwrap(), 0.0, 1e-12);
    }

    #[test]
    fn multi_memory_complementarity_for_ququarts() {
        let set = ququart_mubs();
        let mut log_c = 0.0;
        for i in 0..5 {
            for j in i + 1..5 {
                let c = max_overlap(&set.bases()[i], &set.bases()[j]).unwrap();
                close(c, 0.25, 1e-9);
                log_c += c.log2();
            }
        }
        close(-log_c / 4.0, 5.0, 1e-12);
    }

    #[test]
    fn example1_tight_points() {
        let r = evaluate_all(&build_scenario(Family::Example1 { theta: 0.0 }, None).unwrap()).unwrap();
        close(r.lhs_uncertainty, 2.0, 1e-9);
        close(r.thm1_lower, 2.0, 1e-9);
        close(r.thm2_upper, 3.0 - 1.0 / (2.0 * LN_2), 1e-9);
        close(r.l_cmubs, 2.0, 1e-12);
        let r = evaluate_all(&build_scenario(Family::Example1 { theta: FRAC_PI_4 }, None).unwrap()).unwrap();
        close(r.lhs_uncertainty, 0.0, 1e-9);
        close(r.thm1_lower, 0.0, 1e-9);
        close(r.thm2_upper, 0.0, 1e-9);
        close(thm1_lower(&build_scenario(Family::Example1 { theta: FRAC_PI_4 }, None).unwrap()).unwrap(), 0.0, 1e-9);
        close(thm2_upper(&build_scenario(Family::Example1 { theta: 0.0 }, None).unwrap()).unwrap(), 2.2787, 1e-4);
    }

    #[test]
    fn example1_sweep_points_hold_invariants() {
        for theta in [0.0, FRAC_PI_8, FRAC_PI_4] {
            let s = build_scenario(Family::Example1 { theta }, None).unwrap();
            evaluate_all(&s).unwrap();
        }
    }

    #[test]
    fn bipartite_reduction_formula() {
        let spec = RandomStateSpec::new(16, StateKind::Mixed, 31, 10).unwrap();
        for i in 0..10 {
            let st = random_mixed_state(&spec, i).unwrap();
            let s = build_scenario(Family::from_random(crate::scenario::ExampleId::Example3, st).unwrap(), None).unwrap();
            let r = compute_report(&s).unwrap();
            let m = &r.per_memory[0];
            let holevo: f64 = r.per_measurement.iter().map(|t| t.i_m_b).sum();
            let delta1 = r.l_cmubs - 2.5 * 2.0 - 2.5 * r.s_a + 2.5 * m.i_a_b - holevo;
            let printed = 2.5 * (2.0 + m.s_a_given_b) + delta1.max(0.0);
            close(r.thm1_lower, printed, 1e-12);
        }
    }

    #[test]
    fn all_singleton_reduction() {
        let s = build_scenario(Family::Example5 { theta: 0.4 }, None).unwrap();
        let r = compute_report(&s).unwrap();
        let holevo: f64 = r.per_measurement.iter().map(|t| t.i_m_b).sum();
        close(r.thm1_lower, 1.5 + (r.l_cmubs - 1.5 - holevo).max(0.0), 1e-12);
        close(r.base_cmub_lower, 1.5, 1e-15);
    }

    #[test]
    fn two_memory_reduction() {
        let s = build_scenario(
            Family::Example4 {
                phi: 2.0 * PI / 3.0,
                theta: 2.0 * PI / 3.0,
            },
            None,
        )
        .unwrap();
        let r = evaluate_all(&s).unwrap();
        let b2 = &r.per_memory[1];
        assert_eq!((r.per_memory[0].m_t, b2.m_t), (1, 2));
        let holevo: f64 = r.per_measurement.iter().map(|t| t.i_m_b).sum();
        let delta2 = r.l_cmubs - 1.5 - 0.5 * r.s_a + 0.5 * b2.i_a_b - holevo;
        close(r.delta_cmub, delta2, 1e-12);
        close(r.thm1_lower, 1.5 + 0.5 * b2.s_a_given_b + delta2.max(0.0), 1e-12);
        close(r.thm2_upper, 3.0 - (2.0 * r.purity_a - 1.0) / (2.0 * LN_2) - holevo, 1e-12);
        assert_eq!(r.per_measurement[0].memory, "B1");
        assert_eq!(r.per_measurement[2].memory, "B2");
    }

    #[test]
    fn product_state_upper_is_memoryless_bound() {
        let spec = RandomStateSpec::new(3, StateKind::Mixed, 8, 1).unwrap();
        let a = random_mixed_state(&spec, 0).unwrap();
        let b = QuantumState::maximally_mixed(["B"], vec![2]).unwrap();
        let s = GameScenario::new(a.tensor(&b).unwrap(), "A", vec!["B".into()], qutrit_mubs(), Partition::single(4))
            .unwrap();
        let r = evaluate_all(&s).unwrap();
        let sum_h: f64 = r.per_measurement.iter().map(|t| t.h_m).sum();
        close(r.thm2_upper, r.u_cmubs, 1e-9);
        close(r.lhs_uncertainty, sum_h, 1e-9);
    }

    #[test]
    fn delta_max_structure() {
        let spec = RandomStateSpec::new(16, StateKind::Mixed, 12, 20).unwrap();
        for i in 0..20 {
            let st = random_mixed_state(&spec, i).unwrap();
            for id in [crate::scenario::ExampleId::Example3, crate::scenario::ExampleId::Example6] {
                let s = build_scenario(Family::from_random(id, st.clone()).unwrap(), None).unwrap();
                let r = evaluate_all(&s).unwrap();
                close(r.thm1_lower - r.base_cmub_lower, r.delta_cmub.max(0.0), 1e-12);
                let direct: f64 = r.per_measurement.iter().map(|t| t.h_m - t.i_m_b).sum();
                close(r.lhs_uncertainty, direct, 1e-12);
            }
        }
    }

    #[test]
    fn invariant_check_names_violation() {
        let s = build_scenario(Family::Example1 { theta: 0.2 }, None).unwrap();
        let mut r = compute_report(&s).unwrap();
        r.thm1_lower = r.lhs_uncertainty + 1.0;
        let e = r.check_invariants().unwrap_err();
        assert!(e.to_string().contains("lower bound"), "{e}");
    }

    #[test]
    fn report_json_field_names() {
        let s = build_scenario(Family::Example1 { theta: 0.2 }, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&evaluate_all(&s).unwrap().to_json()).unwrap();
        for key in [
            "lhs_uncertainty",
            "thm1_lower",
            "thm2_upper",
            "zhang_lower",
            "base_cmub_lower",
            "delta_cmub",
            "delta_zhang",
            "l_cmubs",
            "u_cmubs",
            "purity_a",
            "v",
            "per_measurement",
            "per_memory",
            "s_a",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["per_measurement"].as_array().unwrap().len(), 3);
    }
}
