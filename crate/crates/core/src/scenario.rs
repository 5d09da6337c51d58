//! The uncertainty game: who holds which subsystem, which bases are
//! announced to which memory, and the example state families.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::mub::{pauli_mubs, ququart_mubs, qutrit_mubs, MubSet};
use crate::state::QuantumState;

/// Assignment of each basis of a [`MubSet`] to exactly one memory.
///
/// `groups[t]` lists the (0-based) basis indices announced to memory `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<usize>>,
    num_bases: usize,
}

impl Partition {
    pub fn new(groups: Vec<Vec<usize>>, num_bases: usize) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::InvalidPartition("no memories".into()));
        }
        let mut owner: Vec<Option<usize>> = vec![None; num_bases];
        for (t, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::InvalidPartition(format!("memory {} receives no basis", t + 1)));
            }
            for &i in group {
                let slot = owner.get_mut(i).ok_or_else(|| {
                    Error::InvalidPartition(format!("basis {} does not exist (set has {num_bases})", i + 1))
                })?;
                if slot.is_some() {
                    return Err(Error::InvalidPartition(format!("basis {} assigned twice", i + 1)));
                }
                *slot = Some(t);
            }
        }
        if let Some(missing) = owner.iter().position(Option::is_none) {
            return Err(Error::InvalidPartition(format!("basis {} is not assigned", missing + 1)));
        }
        Ok(Self { groups, num_bases })
    }

    /// Every basis announced to a single memory.
    pub fn single(num_bases: usize) -> Self {
        Self {
            groups: vec![(0..num_bases).collect()],
            num_bases,
        }
    }

    /// Basis `i` announced to memory `i`.
    pub fn singletons(num_bases: usize) -> Self {
        Self {
            groups: (0..num_bases).map(|i| vec![i]).collect(),
            num_bases,
        }
    }

    /// Parses `"1|2,3"`: memories separated by `|`, 1-based basis indices by `,`.
    pub fn parse(text: &str, num_bases: usize) -> Result<Self> {
        let groups = text
            .split('|')
            .map(|g| {
                g.split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| match s.trim().parse::<usize>() {
                        Ok(i) if i >= 1 => Ok(i - 1),
                        _ => Err(Error::InvalidPartition(format!("bad basis index `{s}`"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(groups, num_bases)
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Number of memories `n`.
    pub fn n(&self) -> usize {
        self.groups.len()
    }

    pub fn num_bases(&self) -> usize {
        self.num_bases
    }

    /// Cardinalities `m_t`.
    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// Memory index owning basis `i`.
    pub fn memory_of(&self, basis: usize) -> usize {
        self.groups
            .iter()
            .position(|g| g.contains(&basis))
            .expect("partition covers every basis")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .groups
            .iter()
            .map(|g| g.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Full input to every bound: state, measured subsystem, memories, bases, partition.
#[derive(Debug, Clone)]
pub struct GameScenario {
    pub state: QuantumState,
    pub measured: String,
    pub memories: Vec<String>,
    pub mubs: MubSet,
    pub partition: Partition,
}

impl GameScenario {
    pub fn new(
        state: QuantumState,
        measured: impl Into<String>,
        memories: Vec<String>,
        mubs: MubSet,
        partition: Partition,
    ) -> Result<Self> {
        let measured = measured.into();
        let d = state.subsystem_dim(&measured)?;
        if d != mubs.dim() {
            return Err(Error::InvalidScenario(format!(
                "`{measured}` has dimension {d} but the bases have dimension {}",
                mubs.dim()
            )));
        }
        for (i, m) in memories.iter().enumerate() {
            state.position(m)?;
            if *m == measured {
                return Err(Error::InvalidScenario(format!("`{m}` is both measured and a memory")));
            }
            if memories[..i].contains(m) {
                return Err(Error::InvalidScenario(format!("memory `{m}` listed twice")));
            }
        }
        if partition.n() != memories.len() {
            return Err(Error::InvalidScenario(format!(
                "partition has {} groups for {} memories",
                partition.n(),
                memories.len()
            )));
        }
        if partition.num_bases() != mubs.len() {
            return Err(Error::InvalidScenario(format!(
                "partition covers {} bases, set has {}",
                partition.num_bases(),
                mubs.len()
            )));
        }
        Ok(Self {
            state,
            measured,
            memories,
            mubs,
            partition,
        })
    }

    pub fn dim(&self) -> usize {
        self.mubs.dim()
    }
}

// ---------------------------------------------------------------------------
// example state families

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pure_from_support(labels: &[&str], dims: Vec<usize>, support: &[(usize, f64)]) -> Result<QuantumState> {
    let mut amps = vec![re(0.0); dims.iter().product()];
    for &(idx, a) in support {
        amps[idx] = re(a);
    }
    QuantumState::from_pure(labels.iter().copied(), dims, &amps)
}

/// `cos θ|00> + sin θ|11>` on qubits A, B.
pub fn example1_state(theta: f64) -> Result<QuantumState> {
    pure_from_support(&["A", "B"], vec![2, 2], &[(0, theta.cos()), (3, theta.sin())])
}

/// `sinφ cosθ|00> + sinφ sinθ|11> + cosφ|22>` on qutrits A, B.
pub fn example2_state(phi: f64, theta: f64) -> Result<QuantumState> {
    pure_from_support(
        &["A", "B"],
        vec![3, 3],
        &[(0, phi.sin() * theta.cos()), (4, phi.sin() * theta.sin()), (8, phi.cos())],
    )
}

/// `sinφ cosθ|001> + sinφ sinθ|010> + cosφ|100>` on qubits A, B1, B2.
pub fn example4_w_state(phi: f64, theta: f64) -> Result<QuantumState> {
    pure_from_support(
        &["A", "B1", "B2"],
        vec![2, 2, 2],
        &[(1, phi.sin() * theta.cos()), (2, phi.sin() * theta.sin()), (4, phi.cos())],
    )
}

/// `cos θ|0000> + sin θ|1111>` on qubits A, B1, B2, B3.
pub fn example5_ghz_state(theta: f64) -> Result<QuantumState> {
    pure_from_support(&["A", "B1", "B2", "B3"], vec![2; 4], &[(0, theta.cos()), (15, theta.sin())])
}

// ---------------------------------------------------------------------------
// random states

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pure" => Ok(Self::Pure),
            "mixed" => Ok(Self::Mixed),
            other => Err(Error::InvalidParameter(format!("state kind `{other}` (pure|mixed)"))),
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pure => "pure",
            Self::Mixed => "mixed",
        })
    }
}

/// A reproducible batch of random states; also serves as the batch manifest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RandomStateSpec {
    pub dim: usize,
    pub kind: StateKind,
    pub seed: u64,
    pub count: u64,
}

impl RandomStateSpec {
    pub fn new(dim: usize, kind: StateKind, seed: u64, count: u64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("random state dimension {dim} < 2")));
        }
        if count < 1 {
            return Err(Error::InvalidParameter("random batch count must be ≥ 1".into()));
        }
        Ok(Self { dim, kind, seed, count })
    }
}

/// Generator for item `index` of a batch: ChaCha20 keyed by the batch seed,
/// with the item index as the stream id. Items are independent of each other
/// and of generation order.
pub fn item_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random mixed state `Σ p_k |ψ_k><ψ_k|` on a single `dim`-level system labeled `A`.
///
/// Draw order: `dim` cascade factors from (0, 1) giving `q_1 = f`,
/// `q_{k+1} = f·q_k`, `p = q / Σq`; then the `dim²` entries of `R` in
/// row-major order, each `2u − 1` with `u ∈ [0, 1)`. The eigenvectors are
/// those of the Hermitian matrix `diag(R) + (Uᵀ + U) + i(L − Lᵀ)` built from
/// the diagonal, strict upper and strict lower parts of `R`, taken in
/// ascending eigenvalue order and paired with `p_1, p_2, ...`.
pub fn random_mixed_state(spec: &RandomStateSpec, index: u64) -> Result<QuantumState> {
    let n = spec.dim;
    let mut rng = item_rng(spec.seed, index);

    let mut q = Vec::with_capacity(n);
    let mut last = 1.0;
    for _ in 0..n {
        let f: f64 = rng.sample(Open01);
        last *= f;
        q.push(last);
    }
    let total: f64 = q.iter().sum();
    let p: Vec<f64> = q.iter().map(|x| x / total).collect();

    let r: Vec<f64> = (0..n * n).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect();
    let r_tilde = ComplexMatrix::from_fn(n, n, |j, k| match j.cmp(&k) {
        std::cmp::Ordering::Equal => re(r[j * n + j]),
        // U + i(-Lᵀ)
        std::cmp::Ordering::Less => Complex64::new(r[j * n + k], -r[k * n + j]),
        // Uᵀ + iL
        std::cmp::Ordering::Greater => Complex64::new(r[k * n + j], r[j * n + k]),
    });
    let eig = r_tilde.hermitian_eig()?;

    let mut rho = ComplexMatrix::zeros(n, n);
    for (k, &pk) in p.iter().enumerate() {
        rho = &rho + &ComplexMatrix::outer(&eig.eigenvector(k)).scale_real(pk);
    }
    QuantumState::new(["A"], vec![n], rho.hermitian_part())
}

/// Haar-random pure state: normalized vector of independent standard complex
/// Gaussians (real then imaginary part per component).
pub fn random_pure_state(spec: &RandomStateSpec, index: u64) -> Result<QuantumState> {
    let mut rng = item_rng(spec.seed, index);
    let raw: Vec<Complex64> = (0..spec.dim)
        .map(|_| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            Complex64::new(a, b)
        })
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let psi: Vec<Complex64> = raw.iter().map(|z| z / norm).collect();
    QuantumState::from_pure(["A"], vec![spec.dim], &psi)
}

pub fn random_state(spec: &RandomStateSpec, index: u64) -> Result<QuantumState> {
    match spec.kind {
        StateKind::Pure => random_pure_state(spec, index),
        StateKind::Mixed => random_mixed_state(spec, index),
    }
}

/// All `count` states of a batch, in index order.
pub fn random_batch(spec: &RandomStateSpec) -> Result<Vec<QuantumState>> {
    (0..spec.count).map(|i| random_state(spec, i)).collect()
}

// ---------------------------------------------------------------------------
// scenario builders

/// The six example studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ExampleId {
    Example1,
    Example2,
    Example3,
    Example4,
    Example5,
    Example6,
}

impl ExampleId {
    /// Sweepable parameters with their default fixed values and natural ranges.
    pub fn parameters(self) -> &'static [(&'static str, f64, f64, f64)] {
        // (name, default, lo, hi)
        match self {
            Self::Example1 | Self::Example5 => &[("theta", 0.0, 0.0, 2.0 * PI)],
            Self::Example2 => &[("phi", PI / 4.0, 0.0, PI), ("theta", PI / 4.0, 0.0, 2.0 * PI)],
            Self::Example4 => &[("phi", 2.0 * PI / 3.0, 0.0, PI), ("theta", 2.0 * PI / 3.0, 0.0, 2.0 * PI)],
            Self::Example3 | Self::Example6 => &[],
        }
    }

    pub fn is_random(self) -> bool {
        matches!(self, Self::Example3 | Self::Example6)
    }

    /// Dimension of the random states an example consumes.
    pub fn random_dim(self) -> Option<usize> {
        self.is_random().then_some(16)
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.strip_prefix("example").unwrap_or(s);
        match n {
            "1" => Ok(Self::Example1),
            "2" => Ok(Self::Example2),
            "3" => Ok(Self::Example3),
            "4" => Ok(Self::Example4),
            "5" => Ok(Self::Example5),
            "6" => Ok(Self::Example6),
            _ => Err(Error::InvalidParameter(format!("unknown example `{s}`"))),
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = *self as u8 + 1;
        write!(f, "example{n}")
    }
}

/// An example plus the parameters that pin down its state.
#[derive(Debug, Clone)]
pub enum Family {
    Example1 { theta: f64 },
    Example2 { phi: f64, theta: f64 },
    /// A 4⊗4 state (A, B) measured with the ququart set, one memory.
    Example3 { state: QuantumState },
    Example4 { phi: f64, theta: f64 },
    Example5 { theta: f64 },
    /// A 16-dimensional state read as four qubits A, B1, B2, B3.
    Example6 { state: QuantumState },
}

impl Family {
    /// Builds a parametric family, filling missing parameters with the defaults
    /// of [`ExampleId::parameters`].
    pub fn from_params(id: ExampleId, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed = id.parameters();
        if id.is_random() {
            return Err(Error::InvalidParameter(format!("{id} is built from random states, not parameters")));
        }
        for name in params.keys() {
            if !allowed.iter().any(|(p, ..)| p == name) {
                return Err(Error::InvalidParameter(format!("{id} has no parameter `{name}`")));
            }
        }
        let get = |name: &str| {
            let default = allowed.iter().find(|(p, ..)| *p == name).map(|t| t.1).unwrap_or(0.0);
            params.get(name).copied().unwrap_or(default)
        };
        Ok(match id {
            ExampleId::Example1 => Self::Example1 { theta: get("theta") },
            ExampleId::Example2 => Self::Example2 {
                phi: get("phi"),
                theta: get("theta"),
            },
            ExampleId::Example4 => Self::Example4 {
                phi: get("phi"),
                theta: get("theta"),
            },
            ExampleId::Example5 => Self::Example5 { theta: get("theta") },
            ExampleId::Example3 | ExampleId::Example6 => unreachable!(),
        })
    }

    /// Wraps a random 16-dimensional state for example 3 or 6.
    pub fn from_random(id: ExampleId, state: QuantumState) -> Result<Self> {
        if state.dim() != 16 {
            return Err(Error::InvalidParameter(format!("{id} needs a 16-dimensional state, got {}", state.dim())));
        }
        match id {
            ExampleId::Example3 => Ok(Self::Example3 {
                state: state.refactored(["A", "B"], vec![4, 4])?,
            }),
            ExampleId::Example6 => Ok(Self::Example6 {
                state: state.refactored(["A", "B1", "B2", "B3"], vec![2; 4])?,
            }),
            other => Err(Error::InvalidParameter(format!("{other} is not a random-state example"))),
        }
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Builds the scenario for a family with its default partition, or `partition`
/// when given.
pub fn build_scenario(family: Family, partition: Option<Partition>) -> Result<GameScenario> {
    let (state, memories, mubs, default) = match family {
        Family::Example1 { theta } => (example1_state(theta)?, labels(&["B"]), pauli_mubs(), Partition::single(3)),
        Family::Example2 { phi, theta } => (
            example2_state(phi, theta)?,
            labels(&["B"]),
            qutrit_mubs(),
            Partition::single(4),
        ),
        Family::Example3 { state } => (state, labels(&["B"]), ququart_mubs(), Partition::single(5)),
        Family::Example4 { phi, theta } => (
            example4_w_state(phi, theta)?,
            labels(&["B1", "B2"]),
            pauli_mubs(),
            Partition::new(vec![vec![0], vec![1, 2]], 3)?,
        ),
        Family::Example5 { theta } => (
            example5_ghz_state(theta)?,
            labels(&["B1", "B2", "B3"]),
            pauli_mubs(),
            Partition::singletons(3),
        ),
        Family::Example6 { state } => (
            state,
            labels(&["B1", "B2", "B3"]),
            pauli_mubs(),
            Partition::singletons(3),
        ),
    };
    GameScenario::new(state, "A", memories, mubs, partition.unwrap_or(default))
}
