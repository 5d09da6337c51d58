//! Entropic uncertainty with quantum memories for complete sets of mutually
//! unbiased bases.
//!
//! A party A measures one of the `d + 1` bases of a complete MUB set; the
//! bases are split among `n` memory holders, and the memory told which basis
//! was used tries to predict the outcome. The total uncertainty
//! `Σ_t Σ_{i ∈ S_t} S(M_i|B_t)` is compared against several lower bounds and a
//! purity-based upper bound.
//!
//! Modules, bottom up:
//!
//! - [`matrix`]: dense complex matrices, Kronecker products, Hermitian eigensolver.
//! - [`state`]: labeled multipartite density matrices, partial trace, dephasing.
//! - [`entropy`]: Shannon/von Neumann entropies, conditional entropy, mutual
//!   information, Holevo quantity, purity.
//! - [`mub`]: MUB tables for d = 2, 3, 4 and odd primes, plus verification.
//! - [`scenario`]: partitions, the example state families, seeded random states.
//! - [`bounds`]: every bound and the aggregated [`bounds::BoundReport`].
//! - [`selfcheck`]: the numerical self-check battery.

pub mod bounds;
pub mod entropy;
pub mod error;
pub mod matrix;
pub mod mub;
pub mod scenario;
pub mod selfcheck;
pub mod state;

pub use bounds::{evaluate_all, BoundReport};
pub use error::{Error, Result};
pub use matrix::{kron, ComplexMatrix, SpectralDecomposition};
pub use mub::{MubSet, OrthonormalBasis};
pub use scenario::{build_scenario, ExampleId, Family, GameScenario, Partition, RandomStateSpec, StateKind};
pub use state::QuantumState;

pub use num_complex::Complex64;
