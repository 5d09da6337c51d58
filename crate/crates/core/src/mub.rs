//! Complete sets of mutually unbiased bases.
//!
//! The d = 2, 3, 4 tables are written out verbatim so that results can be
//! compared line by line with published numbers; [`prime_mubs`] covers every
//! odd prime with the quadratic-phase construction.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Default tolerance for unbiasedness checks.
pub const MUB_TOL: f64 = 1e-9;

/// Gram-matrix tolerance accepted by [`OrthonormalBasis::new`].
pub const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    vectors: Vec<Vec<Complex64>>,
}

impl OrthonormalBasis {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = vectors.len();
        if d < 2 {
            return Err(Error::InvalidBases(format!("basis with {d} vectors")));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::InvalidBases(format!(
                "vector of length {} in a {d}-element basis",
                v.len()
            )));
        }
        let dev = gram_deviation(&vectors);
        if dev > ORTHONORMAL_TOL {
            return Err(Error::InvalidBases(format!("Gram matrix deviates from identity by {dev:e}")));
        }
        Ok(Self { vectors })
    }

    /// `{|0>, ..., |d-1>}`.
    pub fn computational(d: usize) -> Self {
        let vectors = (0..d)
            .map(|k| (0..d).map(|j| if j == k { ONE } else { ZERO }).collect())
            .collect();
        Self { vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    /// Matrix whose rows are the basis vectors.
    pub fn as_rows(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |i, j| self.vectors[i][j])
    }
}

impl AsRef<[Vec<Complex64>]> for OrthonormalBasis {
    fn as_ref(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }
}

/// A complete set of `d + 1` pairwise unbiased bases.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    dim: usize,
    bases: Vec<OrthonormalBasis>,
}

impl MubSet {
    pub fn new(bases: Vec<OrthonormalBasis>) -> Result<Self> {
        let dim = bases.first().map(|b| b.dim()).unwrap_or(0);
        if bases.len() != dim + 1 {
            return Err(Error::InvalidBases(format!(
                "{} bases in dimension {dim}; a complete set has {}",
                bases.len(),
                dim + 1
            )));
        }
        let report = verify_mub(&bases, MUB_TOL);
        if !report.passed {
            return Err(Error::InvalidBases(format!(
                "not mutually unbiased: overlap deviation {:e}, Gram deviation {:e}",
                report.max_overlap_deviation, report.max_gram_deviation
            )));
        }
        Ok(Self { dim, bases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[OrthonormalBasis] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// `Σ_bases Σ_j <ψ_j|ρ|ψ_j>²`; equals `tr ρ² + 1` for a complete set.
    pub fn collision_sum(&self, rho: &ComplexMatrix) -> f64 {
        self.bases
            .iter()
            .flat_map(|b| b.vectors())
            .map(|v| rho.expectation(v).re.powi(2))
            .sum()
    }

    pub fn to_json(&self) -> String {
        let bases = self
            .bases
            .iter()
            .map(|b| {
                let (re, im) = b.as_rows().to_parts();
                BasisFile { re, im }
            })
            .collect();
        serde_json::to_string_pretty(&MubFile { dim: self.dim, bases }).expect("mub set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MubFile = serde_json::from_str(text)?;
        let bases = file
            .bases
            .iter()
            .map(|b| {
                let rows = ComplexMatrix::from_parts(&b.re, &b.im)?;
                OrthonormalBasis::new((0..rows.rows()).map(|i| rows.row(i)).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let set = Self::new(bases)?;
        if set.dim != file.dim {
            return Err(Error::InvalidBases(format!("declared dim {} but bases have dim {}", file.dim, set.dim)));
        }
        Ok(set)
    }
}

/// JSON layout of an exported set: one row-major matrix per basis, one row per vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MubFile {
    pub dim: usize,
    pub bases: Vec<BasisFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisFile {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Eigenbases of σz, σx, σy.
pub fn pauli_mubs() -> MubSet {
    let s = FRAC_1_SQRT_2;
    let v = |a: Complex64, b: Complex64| vec![a * s, b * s];
    let bases = vec![
        OrthonormalBasis::computational(2),
        OrthonormalBasis {
            vectors: vec![v(ONE, ONE), v(ONE, -ONE)],
        },
        OrthonormalBasis {
            vectors: vec![v(ONE, I), v(ONE, -I)],
        },
    ];
    MubSet { dim: 2, bases }
}

/// Primitive cube root of unity `(-1 + i√3)/2`.
pub fn omega3() -> Complex64 {
    Complex64::new(-0.5, 3f64.sqrt() / 2.0)
}

/// Computational basis plus the three Fourier-type qutrit bases.
pub fn qutrit_mubs() -> MubSet {
    let w1 = omega3();
    let w2 = w1 * w1;
    let s = 1.0 / 3f64.sqrt();
    let v = |b: Complex64, c: Complex64| vec![ONE * s, b * s, c * s];
    let bases = vec![
        OrthonormalBasis::computational(3),
        OrthonormalBasis {
            vectors: vec![v(ONE, ONE), v(w1, w2), v(w2, w1)],
        },
        OrthonormalBasis {
            vectors: vec![v(w1, w1), v(w2, ONE), v(ONE, w2)],
        },
        OrthonormalBasis {
            vectors: vec![v(w2, w2), v(w1, ONE), v(ONE, w1)],
        },
    ];
    MubSet { dim: 3, bases }
}

/// The five ququart bases with entries in `{±1, ±i}/2`.
pub fn ququart_mubs() -> MubSet {
    let v = |e: [Complex64; 4]| e.iter().map(|z| z * 0.5).collect::<Vec<_>>();
    let (p, m, pi, mi) = (ONE, -ONE, I, -I);
    let bases = vec![
        OrthonormalBasis::computational(4),
        OrthonormalBasis {
            vectors: vec![v([p, p, p, p]), v([p, p, m, m]), v([p, m, m, p]), v([p, m, p, m])],
        },
        OrthonormalBasis {
            vectors: vec![v([p, m, mi, mi]), v([p, m, pi, pi]), v([p, p, pi, mi]), v([p, p, mi, pi])],
        },
        OrthonormalBasis {
            vectors: vec![v([p, mi, mi, m]), v([p, mi, pi, p]), v([p, pi, pi, m]), v([p, pi, mi, p])],
        },
        OrthonormalBasis {
            vectors: vec![v([p, mi, m, mi]), v([p, mi, p, pi]), v([p, pi, m, pi]), v([p, pi, p, mi])],
        },
    ];
    MubSet { dim: 4, bases }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

/// Largest odd prime accepted by [`prime_mubs`].
pub const MAX_PRIME: usize = 31;

/// Computational basis plus `d` bases with components `ω^{a j² + k j}/√d`,
/// `ω = e^{2πi/d}`, for an odd prime `d ≤ 31`.
pub fn prime_mubs(d: usize) -> Result<MubSet> {
    if d == 2 || !is_prime(d) || d > MAX_PRIME {
        return Err(Error::UnsupportedDimension(d, format!("need an odd prime ≤ {MAX_PRIME}")));
    }
    let norm = 1.0 / (d as f64).sqrt();
    // reduce exponents mod d before evaluating so equal phases are bit-identical
    let root = |e: usize| Complex64::from_polar(norm, 2.0 * PI * (e % d) as f64 / d as f64);
    let mut bases = vec![OrthonormalBasis::computational(d)];
    for a in 0..d {
        let vectors = (0..d)
            .map(|k| (0..d).map(|j| root(a * j * j + k * j)).collect())
            .collect();
        bases.push(OrthonormalBasis { vectors });
    }
    Ok(MubSet { dim: d, bases })
}

/// The fixed tables for d = 2, 3, 4, the quadratic-phase set for odd primes.
pub fn mubs_for_dim(d: usize) -> Result<MubSet> {
    match d {
        2 => Ok(pauli_mubs()),
        3 => Ok(qutrit_mubs()),
        4 => Ok(ququart_mubs()),
        _ => prime_mubs(d),
    }
}

/// Looks up a set by name: `pauli`, `qutrit`, `ququart`, or `prime<d>`.
pub fn mubs_by_name(name: &str) -> Result<MubSet> {
    match name {
        "pauli" | "d2" => Ok(pauli_mubs()),
        "qutrit" | "d3" => Ok(qutrit_mubs()),
        "ququart" | "d4" => Ok(ququart_mubs()),
        other => {
            let d = other
                .strip_prefix("prime")
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| Error::InvalidParameter(format!("unknown MUB set `{other}`")))?;
            prime_mubs(d)
        }
    }
}

/// Outcome of [`verify_mub`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MubReport {
    pub dim: usize,
    pub count: usize,
    /// max over cross-basis pairs of `||<u|v>|² − 1/d|`
    pub max_overlap_deviation: f64,
    /// max over bases of the entrywise Gram deviation from the identity
    pub max_gram_deviation: f64,
    pub passed: bool,
}

/// Checks orthonormality within each basis and unbiasedness across bases.
pub fn verify_mub<B: AsRef<[Vec<Complex64>]>>(bases: &[B], tol: f64) -> MubReport {
    let dim = bases.first().map(|b| b.as_ref().len()).unwrap_or(0);
    let count = bases.len();
    let shape_ok = dim >= 2
        && bases
            .iter()
            .all(|b| b.as_ref().len() == dim && b.as_ref().iter().all(|v| v.len() == dim));
    if !shape_ok {
        return MubReport {
            dim,
            count,
            max_overlap_deviation: f64::INFINITY,
            max_gram_deviation: f64::INFINITY,
            passed: false,
        };
    }
    let target = 1.0 / dim as f64;
    let max_gram_deviation = bases.iter().map(|b| gram_deviation(b.as_ref())).fold(0.0, f64::max);
    let mut max_overlap_deviation = 0.0f64;
    for (a, ba) in bases.iter().enumerate() {
        for bb in &bases[a + 1..] {
            for u in ba.as_ref() {
                for v in bb.as_ref() {
                    max_overlap_deviation = max_overlap_deviation.max((inner(u, v).norm_sqr() - target).abs());
                }
            }
        }
    }
    MubReport {
        dim,
        count,
        max_overlap_deviation,
        max_gram_deviation,
        passed: max_overlap_deviation <= tol && max_gram_deviation <= tol,
    }
}

/// `<u|v>`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn gram_deviation(vectors: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let want = if i == j { ONE } else { ZERO };
            worst = worst.max((inner(u, v) - want).norm());
        }
    }
    worst
}
