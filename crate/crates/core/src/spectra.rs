//! Numerical extraction of the spectral-and-nilpotent representation:
//! eigenvalues, clustering into distinct eigenvalues, and Jordan partitions
//! recovered from the kernel dimensions of shifted powers.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_tolerance, Result, SnoError};
use crate::matrix::{singular_values, DenseMatrix};
use crate::order::{sort_desc_by, Partition, DEFAULT_LEX_TOL};

pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Relative factor of the default clustering radius, `1e-7 · (1 + ‖A‖)`.
pub const DEFAULT_CLUSTER_SCALE: f64 = 1e-7;

/// Numerical tolerances shared by the spectral, certificate and stability
/// routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Tie tolerance for lexicographic comparisons.
    pub lex_tol: f64,
    /// Absolute clustering radius; `None` picks `1e-7 · (1 + ‖A‖₂)` per matrix.
    pub cluster_tol: Option<f64>,
    /// Relative singular-value threshold for numerical rank.
    pub rank_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            lex_tol: DEFAULT_LEX_TOL,
            cluster_tol: None,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        check_tolerance("lex_tol", self.lex_tol)?;
        check_tolerance("rank_tol", self.rank_tol)?;
        if let Some(c) = self.cluster_tol {
            check_tolerance("cluster_tol", c)?;
        }
        Ok(())
    }

    pub fn cluster_tol_for(&self, a: &DenseMatrix) -> f64 {
        self.cluster_tol.unwrap_or_else(|| default_cluster_tol(a))
    }
}

pub fn default_cluster_tol(a: &DenseMatrix) -> f64 {
    DEFAULT_CLUSTER_SCALE * (1.0 + a.norm2())
}

/// A distinct eigenvalue and its algebraic multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub alg_mult: usize,
}

/// Distinct eigenvalues in descending lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub distinct: Vec<Eigenvalue>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.distinct.iter().map(|e| e.alg_mult).sum()
    }

    /// Every eigenvalue repeated by its multiplicity, in descending order.
    pub fn eigenvalue_vector(&self) -> Vec<Complex64> {
        self.distinct
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.alg_mult))
            .collect()
    }
}

/// Distinct eigenvalues with the Jordan block partition of each, aligned by
/// index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnoRepresentation {
    pub spectrum: Spectrum,
    pub partitions: Vec<Partition>,
}

impl SnoRepresentation {
    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    /// Number of Jordan blocks per distinct eigenvalue.
    pub fn geometric_multiplicities(&self) -> Vec<usize> {
        self.partitions.iter().map(Partition::len).collect()
    }
}

/// All `n` eigenvalues of `a`, unordered, from a complex Schur form.
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<Complex64>> {
    let n = a.dim();
    let max_iter = 200 * n.max(10);
    // The QR iteration can stall when the matrix is a multiple of the
    // identity up to rounding; a looser deflation test then converges.
    for eps in SCHUR_DEFLATION_EPS {
        if let Some(values) = Schur::try_new(a.as_matrix().clone(), eps, max_iter)
            .and_then(|s| s.eigenvalues())
        {
            return Ok(values.iter().copied().collect());
        }
    }
    Err(SnoError::EigenSolverFailed { n })
}

const SCHUR_DEFLATION_EPS: [f64; 3] = [f64::EPSILON, 64.0 * f64::EPSILON, 4096.0 * f64::EPSILON];

/// Groups eigenvalues by single linkage within `cluster_tol` (absolute
/// distance). Each cluster is represented by its mean.
pub fn cluster_spectrum(raw: &[Complex64], cluster_tol: f64) -> Result<Spectrum> {
    check_tolerance("cluster_tol", cluster_tol)?;
    if raw.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SnoError::NonFinite {
            context: "eigenvalue list",
        });
    }

    let n = raw.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (raw[i] - raw[j]).norm() <= cluster_tol {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }

    let mut sums: Vec<(Complex64, usize)> = vec![(Complex64::new(0.0, 0.0), 0); n];
    for (i, z) in raw.iter().enumerate() {
        let r = root(&mut parent, i);
        sums[r].0 += z;
        sums[r].1 += 1;
    }
    let mut distinct: Vec<Eigenvalue> = sums
        .into_iter()
        .filter(|(_, count)| *count > 0)
        .map(|(sum, count)| Eigenvalue {
            value: sum / count as f64,
            alg_mult: count,
        })
        .collect();
    sort_desc_by(&mut distinct, |e| e.value, cluster_tol);
    Ok(Spectrum { distinct })
}

/// Kernel increments `d_ℓ = dim ker (A-λI)^ℓ - dim ker (A-λI)^(ℓ-1)` for
/// `ℓ = 1..`, stopping at the first zero increment or after `max_steps`.
///
/// Orthogonal staircase deflation: after removing the numerical kernel of the
/// current block `C` (right singular vectors `V = [V_null, V_range]`), the
/// next block is `V_range* C V_range`, whose kernel dimension is the next
/// increment. Powers are never formed, so the rank threshold
/// `rank_tol · n · max(‖A‖₂, ‖A-λI‖₂)` applies on every level. Including
/// `‖A‖₂` keeps the threshold meaningful when `A - λI` is rounding noise.
pub fn kernel_staircase(
    a: &DenseMatrix,
    lambda: Complex64,
    max_steps: usize,
    rank_tol: f64,
) -> Vec<usize> {
    let n = a.dim();
    let shifted = a.shifted(lambda);
    let scale = singular_values(&shifted)
        .into_iter()
        .fold(a.norm2(), f64::max);
    let threshold = rank_tol * n as f64 * scale;

    let mut increments = Vec::new();
    let mut block = shifted;
    while increments.len() < max_steps && block.nrows() > 0 {
        let svd = block.clone().svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors were requested");
        let range: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > threshold)
            .collect();
        let nullity = block.nrows() - range.len();
        if nullity == 0 {
            break;
        }
        increments.push(nullity);
        if range.is_empty() {
            break;
        }
        let v_range: DMatrix<Complex64> =
            DMatrix::from_fn(block.nrows(), range.len(), |i, k| v_t[(range[k], i)].conj());
        block = v_range.adjoint() * &block * &v_range;
    }
    increments
}

/// Numerical rank of `(A - λI)^ℓ`; `ℓ = 0` gives `n`.
pub fn rank_of_shifted_power(
    a: &DenseMatrix,
    lambda: Complex64,
    ell: usize,
    rank_tol: f64,
) -> Result<usize> {
    check_tolerance("rank_tol", rank_tol)?;
    let kernel: usize = kernel_staircase(a, lambda, ell, rank_tol).iter().sum();
    Ok(a.dim() - kernel)
}

/// Ranks of `(A - λI)^ℓ` for `ℓ = 1, 2, …` up to and including the first
/// power at which the rank stops changing, capped at `max_power` powers.
pub fn rank_sequence(
    a: &DenseMatrix,
    lambda: Complex64,
    max_power: usize,
    rank_tol: f64,
) -> Result<Vec<usize>> {
    check_tolerance("rank_tol", rank_tol)?;
    let n = a.dim();
    let increments = kernel_staircase(a, lambda, max_power.max(1), rank_tol);
    if increments.is_empty() {
        return Ok(vec![n]);
    }
    Ok(increments
        .iter()
        .scan(n, |rank, d| {
            *rank -= d;
            Some(*rank)
        })
        .collect())
}

/// Jordan block sizes of `a` at the eigenvalue `lambda`.
///
/// The kernel increments form the conjugate partition; their total must match
/// `alg_mult`, otherwise the tolerances did not resolve the structure.
pub fn jordan_partition(
    a: &DenseMatrix,
    lambda: Complex64,
    alg_mult: usize,
    rank_tol: f64,
) -> Result<Partition> {
    check_tolerance("rank_tol", rank_tol)?;
    let increments = kernel_staircase(a, lambda, alg_mult, rank_tol);
    let weight: usize = increments.iter().sum();
    let inconsistent = || SnoError::InconsistentJordanStructure {
        lambda_re: lambda.re,
        lambda_im: lambda.im,
        expected: alg_mult,
        found: weight,
    };
    if weight != alg_mult {
        return Err(inconsistent());
    }
    let conjugate = Partition::new(increments).map_err(|_| inconsistent())?;
    Ok(conjugate.conjugate())
}

/// Eigenvalues, their clustering, and the Jordan partition of every cluster.
pub fn sno_representation(a: &DenseMatrix, tol: &Tolerances) -> Result<SnoRepresentation> {
    tol.validate()?;
    let spectrum = cluster_spectrum(&eigenvalues(a)?, tol.cluster_tol_for(a))?;
    let partitions = spectrum
        .distinct
        .iter()
        .map(|e| {
            if a.dim() == 1 {
                Partition::new(vec![1])
            } else {
                jordan_partition(a, e.value, e.alg_mult, tol.rank_tol)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SnoRepresentation {
        spectrum,
        partitions,
    })
}

/// Square root with the lexicographically non-negative branch:
/// `Re > 0`, or `Re = 0` and `Im ≥ 0`.
fn lex_positive_sqrt(z: Complex64) -> Complex64 {
    let r = z.sqrt();
    if r.re < 0.0 || (r.re == 0.0 && r.im < 0.0) {
        -r
    } else {
        r
    }
}

/// Closed-form eigenvalues of a 2×2 matrix as `(λ_max, λ_min)` with
/// `λ_max ≥_lex λ_min`.
pub fn eig2x2_closed_form(x: &DenseMatrix) -> Result<(Complex64, Complex64)> {
    if x.dim() != 2 {
        return Err(SnoError::DimensionMismatch {
            left: x.dim(),
            right: 2,
        });
    }
    let (a, b, c, d) = (x.get(0, 0), x.get(0, 1), x.get(1, 0), x.get(1, 1));
    let trace = a + d;
    let det = a * d - b * c;
    let disc = lex_positive_sqrt(trace * trace - 4.0 * det);
    Ok(((trace + disc) / 2.0, (trace - disc) / 2.0))
}
