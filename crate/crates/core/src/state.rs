//! Multipartite density matrices over labeled subsystems.
//!
//! Subsystems are ordered; the first label is the most significant factor of
//! the composite index (`|a b c>` has index `a·d_b·d_c + b·d_c + c`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{kron, ComplexMatrix};
use crate::mub::OrthonormalBasis;

/// Tolerance for the Hermiticity, trace and positivity checks.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    dims: Vec<usize>,
    labels: Vec<String>,
    rho: ComplexMatrix,
}

impl QuantumState {
    /// Validates and wraps a density matrix.
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        dims: Vec<usize>,
        rho: ComplexMatrix,
    ) -> Result<Self> {
        let state = Self::assemble(labels, dims, rho)?;
        state.validate()?;
        Ok(state)
    }

    /// `|ψ><ψ|` for a normalized amplitude vector.
    pub fn from_pure<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        dims: Vec<usize>,
        amplitudes: &[Complex64],
    ) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "trace",
                detail: format!("amplitude norm² = {norm}"),
            });
        }
        Self::assemble(labels, dims, ComplexMatrix::outer(amplitudes))
    }

    /// `I/D` on the given subsystems.
    pub fn maximally_mixed<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        dims: Vec<usize>,
    ) -> Result<Self> {
        let total: usize = dims.iter().product();
        Self::assemble(labels, dims, ComplexMatrix::identity(total).scale_real(1.0 / total as f64))
    }

    /// Shape and label checks only; used where positivity holds by construction.
    pub(crate) fn assemble<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        dims: Vec<usize>,
        rho: ComplexMatrix,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != dims.len() {
            return Err(Error::InvalidState {
                invariant: "labels",
                detail: format!("{} labels for {} subsystems", labels.len(), dims.len()),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidState {
                    invariant: "labels",
                    detail: format!("duplicate label `{l}`"),
                });
            }
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidState {
                invariant: "dims",
                detail: format!("subsystem dimension {d} < 2"),
            });
        }
        let total: usize = dims.iter().product();
        if rho.rows() != total || rho.cols() != total {
            return Err(Error::InvalidState {
                invariant: "shape",
                detail: format!("matrix is {}x{}, dims imply {total}x{total}", rho.rows(), rho.cols()),
            });
        }
        Ok(Self { dims, labels, rho })
    }

    /// Checks Hermiticity, unit trace and positivity within [`STATE_TOL`].
    pub fn validate(&self) -> Result<()> {
        let herm = self.rho.hermiticity_error();
        if herm > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "hermitian",
                detail: format!("max |rho - rho†| = {herm:e}"),
            });
        }
        let tr = self.rho.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "trace",
                detail: format!("trace = {tr}"),
            });
        }
        let min = self.eigenvalues()[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidState {
                invariant: "positive semidefinite",
                detail: format!("smallest eigenvalue {min:e}"),
            });
        }
        Ok(())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn subsystem_dim(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    /// Eigenvalues of `rho`, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.rho
            .hermitian_eigenvalues()
            .expect("density matrices are square")
    }

    /// Tensor product `self ⊗ other`; labels are concatenated.
    pub fn tensor(&self, other: &QuantumState) -> Result<Self> {
        let labels = self.labels.iter().chain(&other.labels).cloned();
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        Self::assemble(labels, dims, kron(&self.rho, &other.rho))
    }

    /// Reduced state on `keep`, in the original relative order.
    ///
    /// Keeping nothing yields the 1x1 state `[1]` with no subsystems.
    pub fn partial_trace(&self, keep: &[&str]) -> Result<Self> {
        let mut kept = vec![false; self.dims.len()];
        for label in keep {
            kept[self.position(label)?] = true;
        }
        if kept.iter().all(|&k| k) {
            return Ok(self.clone());
        }

        let kept_pos: Vec<usize> = (0..self.dims.len()).filter(|&i| kept[i]).collect();
        let traced_pos: Vec<usize> = (0..self.dims.len()).filter(|&i| !kept[i]).collect();
        let kept_dims: Vec<usize> = kept_pos.iter().map(|&i| self.dims[i]).collect();
        let traced_dims: Vec<usize> = traced_pos.iter().map(|&i| self.dims[i]).collect();
        let dk: usize = kept_dims.iter().product();
        let dt: usize = traced_dims.iter().product();

        let strides = strides(&self.dims);
        let offsets = |positions: &[usize], sub_dims: &[usize], n: usize| -> Vec<usize> {
            (0..n)
                .map(|idx| {
                    digits(idx, sub_dims)
                        .iter()
                        .zip(positions)
                        .map(|(d, &p)| d * strides[p])
                        .sum()
                })
                .collect()
        };
        let kept_off = offsets(&kept_pos, &kept_dims, dk);
        let traced_off = offsets(&traced_pos, &traced_dims, dt);

        let reduced = ComplexMatrix::from_fn(dk, dk, |i, j| {
            traced_off
                .iter()
                .map(|t| self.rho[(kept_off[i] + t, kept_off[j] + t)])
                .sum()
        });
        let labels: Vec<String> = kept_pos.iter().map(|&i| self.labels[i].clone()).collect();
        if labels.is_empty() {
            return Ok(Self {
                dims: vec![],
                labels: vec![],
                rho: reduced,
            });
        }
        Self::assemble(labels, kept_dims, reduced)
    }

    /// Dephased state `Σ_i (P_i ⊗ I) ρ (P_i ⊗ I)` for the projectors of `basis`
    /// acting on subsystem `measured`.
    pub fn post_measurement_state(&self, basis: &OrthonormalBasis, measured: &str) -> Result<Self> {
        let pos = self.position(measured)?;
        if basis.dim() != self.dims[pos] {
            return Err(Error::Dimension(format!(
                "basis of dimension {} measured on `{measured}` of dimension {}",
                basis.dim(),
                self.dims[pos]
            )));
        }
        let before = ComplexMatrix::identity(self.dims[..pos].iter().product());
        let after = ComplexMatrix::identity(self.dims[pos + 1..].iter().product());

        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for v in basis.vectors() {
            let proj = kron(&kron(&before, &ComplexMatrix::outer(v)), &after);
            out = &out + &(&(&proj * &self.rho) * &proj);
        }
        Self::assemble(self.labels.clone(), self.dims.clone(), out)
    }

    /// Same state with subsystems listed in `order`.
    pub fn permuted(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.labels.len() {
            return Err(Error::InvalidParameter(format!(
                "permutation lists {} of {} labels",
                order.len(),
                self.labels.len()
            )));
        }
        let perm: Vec<usize> = order.iter().map(|l| self.position(l)).collect::<Result<_>>()?;
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let old_strides = strides(&self.dims);
        let n = self.dim();
        let map: Vec<usize> = (0..n)
            .map(|idx| {
                digits(idx, &new_dims)
                    .iter()
                    .zip(&perm)
                    .map(|(d, &p)| d * old_strides[p])
                    .sum()
            })
            .collect();
        let rho = ComplexMatrix::from_fn(n, n, |i, j| self.rho[(map[i], map[j])]);
        Self::assemble(order.iter().map(|s| s.to_string()), new_dims, rho)
    }

    /// Reinterprets the same matrix under a different factorization of its
    /// dimension, e.g. a 4⊗4 state as four qubits.
    pub fn refactored<S: Into<String>>(
        &self,
        labels: impl IntoIterator<Item = S>,
        dims: Vec<usize>,
    ) -> Result<Self> {
        Self::assemble(labels, dims, self.rho.clone())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        let rho = ComplexMatrix::from_parts(&file.re, &file.im).map_err(|e| Error::InvalidState {
            invariant: "shape",
            detail: e.to_string(),
        })?;
        Self::new(file.labels, file.dims, rho)
    }

    pub fn to_json(&self) -> String {
        let (re, im) = self.rho.to_parts();
        let file = StateFile {
            labels: self.labels.clone(),
            dims: self.dims.clone(),
            re,
            im,
        };
        serde_json::to_string(&file).expect("state serializes")
    }
}

/// On-disk state format: row-major real and imaginary parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Mixed-radix digits of `idx`, most significant first.
fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = idx % dims[i];
        idx /= dims[i];
    }
    out
}
