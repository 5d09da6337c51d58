//! The work behind each subcommand, independent of argument parsing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use cmub_eur::bounds::compute_report;
use cmub_eur::mub::{mubs_by_name, mubs_for_dim};
use cmub_eur::scenario::random_state;
use cmub_eur::selfcheck::{default_sets, run_battery, CandidateSet, CheckResult};
use cmub_eur::{
    build_scenario, evaluate_all, BoundReport, ExampleId, Family, GameScenario, Partition, QuantumState,
    RandomStateSpec,
};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::format::fmt_num;

pub const SWEEP_HEADER: &str = "param,lhs,zhang_lower,thm1_lower,thm2_upper,delta_cmub,delta_zhang,purity_a";
pub const RANDOM_HEADER: &str = "index,lhs,zhang_lower,thm1_lower,thm2_upper";

/// Dimension of the random states consumed by the random-state examples.
pub const RANDOM_DIM: usize = 16;

/// A one-parameter grid over a parametric example.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub example: ExampleId,
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub fixed: BTreeMap<String, f64>,
    pub partition: Option<String>,
}

impl SweepConfig {
    /// Fills unspecified pieces from the example's defaults and checks the
    /// combination. `param`, `lo`, `hi` default to the example's first
    /// parameter and its natural range.
    pub fn new(
        example: ExampleId,
        param: Option<String>,
        lo: Option<f64>,
        hi: Option<f64>,
        steps: usize,
        fixed: Vec<(String, f64)>,
        partition: Option<String>,
    ) -> CliResult<Self> {
        let params = example.parameters();
        if params.is_empty() {
            return Err(CliError::Usage(format!(
                "{example} has no sweepable parameter; use `random` instead"
            )));
        }
        let param = param.unwrap_or_else(|| params[0].0.to_string());
        let &(_, _, def_lo, def_hi) = params
            .iter()
            .find(|(p, ..)| *p == param)
            .ok_or_else(|| CliError::Usage(unknown_param(example, &param)))?;
        let lo = lo.unwrap_or(def_lo);
        let hi = hi.unwrap_or(def_hi);
        if steps < 2 {
            return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
        }
        if !(lo < hi) {
            return Err(CliError::Usage(format!("empty range: --from {lo} is not below --to {hi}")));
        }
        let mut map = BTreeMap::new();
        for (name, value) in fixed {
            if !params.iter().any(|(p, ..)| *p == name) {
                return Err(CliError::Usage(unknown_param(example, &name)));
            }
            if name == param {
                return Err(CliError::Usage(format!("`{name}` is swept and cannot also be fixed")));
            }
            map.insert(name, value);
        }
        Ok(Self {
            example,
            param,
            lo,
            hi,
            steps,
            fixed: map,
            partition,
        })
    }

    /// Evenly spaced points from `lo` to `hi` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / n
                }
            })
            .collect()
    }
}

fn unknown_param(example: ExampleId, name: &str) -> String {
    let names: Vec<&str> = example.parameters().iter().map(|p| p.0).collect();
    format!("{example} has no parameter `{name}` (expected one of: {})", names.join(", "))
}

fn partition_for(text: Option<&str>, num_bases: usize) -> CliResult<Option<Partition>> {
    text.map(|t| Partition::parse(t, num_bases)).transpose().map_err(Into::into)
}

fn bases_for(example: ExampleId) -> usize {
    match example {
        ExampleId::Example2 => 4,
        ExampleId::Example3 => 5,
        _ => 3,
    }
}

/// Evaluates every grid point; each report has passed its invariants.
pub fn sweep_reports(cfg: &SweepConfig) -> CliResult<Vec<(f64, BoundReport)>> {
    let partition = partition_for(cfg.partition.as_deref(), bases_for(cfg.example))?;
    cfg.grid()
        .into_par_iter()
        .map(|x| {
            let mut params = cfg.fixed.clone();
            params.insert(cfg.param.clone(), x);
            let family = Family::from_params(cfg.example, &params)?;
            let report = evaluate_all(&build_scenario(family, partition.clone())?)?;
            Ok((x, report))
        })
        .collect()
}

pub fn sweep_csv(cfg: &SweepConfig) -> CliResult<String> {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for (x, r) in sweep_reports(cfg)? {
        let cells = [
            x,
            r.lhs_uncertainty,
            r.zhang_lower,
            r.thm1_lower,
            r.thm2_upper,
            r.delta_cmub,
            r.delta_zhang,
            r.purity_a,
        ];
        push_row(&mut out, cells.iter().map(|&v| fmt_num(v)));
    }
    Ok(out)
}

fn push_row(out: &mut String, cells: impl Iterator<Item = String>) {
    let row: Vec<String> = cells.collect();
    writeln!(out, "{}", row.join(",")).expect("writing to a String");
}

/// A random batch evaluated under example 3 or 6.
#[derive(Debug, Clone)]
pub struct RandomConfig {
    pub example: ExampleId,
    pub spec: RandomStateSpec,
    pub partition: Option<String>,
}

impl RandomConfig {
    pub fn new(example: ExampleId, spec: RandomStateSpec, partition: Option<String>) -> CliResult<Self> {
        if !example.is_random() {
            return Err(CliError::Usage(format!(
                "{example} is parametric; `random` accepts example3 or example6"
            )));
        }
        if spec.dim != RANDOM_DIM {
            return Err(CliError::Usage(format!(
                "{example} uses {RANDOM_DIM}-dimensional states, not {}",
                spec.dim
            )));
        }
        Ok(Self {
            example,
            spec,
            partition,
        })
    }

    /// Batch manifest: the generator settings plus the example.
    pub fn manifest(&self) -> String {
        let value = json!({
            "example": self.example.to_string(),
            "seed": self.spec.seed,
            "kind": self.spec.kind.to_string(),
            "dim": self.spec.dim,
            "count": self.spec.count,
        });
        serde_json::to_string_pretty(&value).expect("manifest serializes")
    }
}

/// Evaluates the batch in index order.
pub fn random_reports(cfg: &RandomConfig) -> CliResult<Vec<(u64, BoundReport)>> {
    let partition = partition_for(cfg.partition.as_deref(), bases_for(cfg.example))?;
    (0..cfg.spec.count)
        .into_par_iter()
        .map(|i| {
            let state = random_state(&cfg.spec, i)?;
            let family = Family::from_random(cfg.example, state)?;
            let report = evaluate_all(&build_scenario(family, partition.clone())?)?;
            Ok((i, report))
        })
        .collect()
}

/// CSV rows sorted by uncertainty, ties broken by index.
pub fn random_csv(cfg: &RandomConfig) -> CliResult<String> {
    let mut rows = random_reports(cfg)?;
    rows.sort_by(|a, b| a.1.lhs_uncertainty.total_cmp(&b.1.lhs_uncertainty).then(a.0.cmp(&b.0)));
    let mut out = String::from(RANDOM_HEADER);
    out.push('\n');
    for (i, r) in rows {
        let nums = [r.lhs_uncertainty, r.zhang_lower, r.thm1_lower, r.thm2_upper];
        push_row(&mut out, std::iter::once(i.to_string()).chain(nums.iter().map(|&v| fmt_num(v))));
    }
    Ok(out)
}

/// Inputs to a single report built from a state file.
#[derive(Debug, Clone, Default)]
pub struct BoundsRequest {
    pub mub: Option<String>,
    pub partition: Option<String>,
    pub measured: Option<String>,
    pub memories: Option<Vec<String>>,
}

/// Builds the scenario for a state file.
///
/// The measured system defaults to the first label. The basis set defaults to
/// the one for its dimension, the partition to a single memory, and the
/// memories to the remaining labels in order, one per partition group.
pub fn bounds_scenario(state_json: &str, req: &BoundsRequest) -> CliResult<GameScenario> {
    let state = QuantumState::from_json(state_json)?;
    let measured = req.measured.clone().unwrap_or_else(|| state.labels()[0].clone());
    let d = state.subsystem_dim(&measured)?;
    let mubs = match &req.mub {
        Some(name) => mubs_by_name(name)?,
        None => mubs_for_dim(d)?,
    };
    let partition = match &req.partition {
        Some(text) => Partition::parse(text, mubs.len())?,
        None => Partition::single(mubs.len()),
    };
    let memories = match &req.memories {
        Some(m) => m.clone(),
        None => {
            let others: Vec<String> = state.labels().iter().filter(|l| **l != measured).cloned().collect();
            if others.len() < partition.n() {
                return Err(CliError::Usage(format!(
                    "partition `{partition}` needs {} memories but the state has only {} other subsystem(s)",
                    partition.n(),
                    others.len()
                )));
            }
            others.into_iter().take(partition.n()).collect()
        }
    };
    Ok(GameScenario::new(state, measured, memories, mubs, partition)?)
}

/// The report plus the outcome of its invariant check.
pub fn bounds_report(state_json: &str, req: &BoundsRequest) -> CliResult<(BoundReport, CliResult<()>)> {
    let report = compute_report(&bounds_scenario(state_json, req)?)?;
    let check = report.check_invariants().map_err(CliError::from);
    Ok((report, check))
}

/// Runs the self-check battery over the built-in tables plus any extra sets.
pub fn verify(extra: Vec<CandidateSet>) -> CliResult<Vec<CheckResult>> {
    let mut sets = default_sets();
    sets.extend(extra);
    Ok(run_battery(&sets)?)
}

pub fn format_checks(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{tag} {}: {}", r.name, r.detail).expect("writing to a String");
    }
    out
}
