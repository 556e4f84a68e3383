//! Certificates for the spectral-and-nilpotent order that avoid computing the
//! eigenvalues being ordered.
//!
//! The spectral certificates separate generalized Gershgorin disks index by
//! index after sorting the disk centers; the robust variant inflates radii
//! (and, in nominal mode, centers) to cover entrywise perturbations. The
//! nilpotent certificate compares ranks of shifted powers when both matrices
//! share a spectrum.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_tolerance, Result, SnoError};
use crate::matrix::DenseMatrix;
use crate::order::{lex_cmp, Relation};
use crate::spectra::{cluster_spectrum, eigenvalues, rank_sequence, Spectrum, Tolerances};

pub const DEFAULT_GAMMA: f64 = 0.5;

/// A generalized Gershgorin region `{z : |z - center| ≤ radius}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
    pub gamma: f64,
    /// Row/column of the diagonal entry the disk belongs to (0-based).
    pub source_index: usize,
}

impl Disk {
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        (z - self.center).norm() <= self.radius + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    Certified,
    NotCertified,
}

impl CertificateStatus {
    pub fn is_certified(self) -> bool {
        self == CertificateStatus::Certified
    }
}

impl fmt::Display for CertificateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateStatus::Certified => "certified",
            CertificateStatus::NotCertified => "not certified",
        })
    }
}

/// How the disk centers and radii of a spectral certificate were formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    /// Radii and centers of the matrices as given.
    Exact,
    /// Matrices are nominal; radii use the perturbation bound and centers are
    /// shifted by the worst case, covering every admissible perturbation.
    RobustNominal,
    /// Matrices are the perturbed ones; radii use the perturbation bound.
    RobustGiven,
}

/// Separation check at sorted position `k` (1-based): the lex-largest point
/// of the left disk against the lex-smallest point of the right disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexCheck {
    pub k: usize,
    pub upper_left: Complex64,
    pub lower_right: Complex64,
    pub left_disk: Disk,
    pub right_disk: Disk,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateResult {
    pub status: CertificateStatus,
    pub mode: CertificateMode,
    pub gamma: f64,
    pub eps_a: f64,
    pub eps_b: f64,
    pub checks: Vec<IndexCheck>,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(SnoError::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "must lie in [0, 1]",
        });
    }
    Ok(())
}

fn check_same_dim(a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(SnoError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// `|a_ij|^γ |a_ji|^(1-γ)` with `0^0 = 1`: at `γ = 1` this is `|a_ij|`, at
/// `γ = 0` it is `|a_ji|`.
fn radius_term(row_entry: f64, col_entry: f64, gamma: f64) -> f64 {
    if (gamma > 0.0 && row_entry == 0.0) || (gamma < 1.0 && col_entry == 0.0) {
        return 0.0;
    }
    row_entry.powf(gamma) * col_entry.powf(1.0 - gamma)
}

fn radii_with_offset(a: &DenseMatrix, gamma: f64, eps: f64) -> Vec<f64> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| radius_term(a.get(i, j).norm() + eps, a.get(j, i).norm() + eps, gamma))
                .sum()
        })
        .collect()
}

/// One generalized Gershgorin disk per diagonal entry, with radius
/// `Σ_{j≠i} |a_ij|^γ |a_ji|^(1-γ)`.
///
/// `γ = 1` gives the classical row-sum disks and `γ = 0` the column-sum disks.
/// For `0 < γ < 1` the union is not an inclusion region for every matrix (a
/// cyclic permutation has all radii zero); see the unit tests.
pub fn gershgorin_disks(a: &DenseMatrix, gamma: f64) -> Result<Vec<Disk>> {
    check_gamma(gamma)?;
    Ok(disks_from(a, &radii_with_offset(a, gamma, 0.0), gamma))
}

fn disks_from(a: &DenseMatrix, radii: &[f64], gamma: f64) -> Vec<Disk> {
    radii
        .iter()
        .enumerate()
        .map(|(i, &radius)| Disk {
            center: a.get(i, i),
            radius,
            gamma,
            source_index: i,
        })
        .collect()
}

/// Worst-case radius over entrywise perturbations of modulus at most `eps`:
/// `Σ_{j≠i} (|a_ij| + ε)^γ (|a_ji| + ε)^(1-γ)`.
pub fn perturbed_radius_bound(a: &DenseMatrix, gamma: f64, eps: f64) -> Result<Vec<f64>> {
    check_gamma(gamma)?;
    check_tolerance("eps", eps)?;
    Ok(radii_with_offset(a, gamma, eps))
}

/// Descending lex order of centers; equal centers put the smaller radius first.
fn sort_disks(disks: &mut [Disk]) {
    disks.sort_by(|x, y| {
        lex_cmp(y.center, x.center, 0.0).then_with(|| x.radius.total_cmp(&y.radius))
    });
}

fn lex_le(x: Complex64, y: Complex64) -> bool {
    lex_cmp(x, y, 0.0) != Ordering::Greater
}

fn separation(
    mut left: Vec<Disk>,
    mut right: Vec<Disk>,
    shift_left: f64,
    shift_right: f64,
) -> Vec<IndexCheck> {
    sort_disks(&mut left);
    sort_disks(&mut right);
    left.into_iter()
        .zip(right)
        .enumerate()
        .map(|(i, (l, r))| {
            let up = l.radius + shift_left;
            let down = r.radius + shift_right;
            let upper_left = Complex64::new(l.center.re + up, l.center.im + up);
            let lower_right = Complex64::new(r.center.re - down, r.center.im - down);
            IndexCheck {
                k: i + 1,
                upper_left,
                lower_right,
                left_disk: l,
                right_disk: r,
                pass: lex_le(upper_left, lower_right),
            }
        })
        .collect()
}

fn status_of(checks: &[IndexCheck]) -> CertificateStatus {
    if checks.iter().all(|c| c.pass) {
        CertificateStatus::Certified
    } else {
        CertificateStatus::NotCertified
    }
}

/// Disk-separation certificate that the `k`-th lex-largest eigenvalue of `a`
/// is lex-below the `k`-th of `b` for every `k`, which implies weak
/// majorization of the spectra.
pub fn spectral_cert(a: &DenseMatrix, b: &DenseMatrix, gamma: f64) -> Result<CertificateResult> {
    check_same_dim(a, b)?;
    let checks = separation(gershgorin_disks(a, gamma)?, gershgorin_disks(b, gamma)?, 0.0, 0.0);
    Ok(CertificateResult {
        status: status_of(&checks),
        mode: CertificateMode::Exact,
        gamma,
        eps_a: 0.0,
        eps_b: 0.0,
        checks,
    })
}

/// Spectral certificate that survives entrywise perturbations of size
/// `eps_a` on `a` and `eps_b` on `b`.
pub fn robust_spectral_cert(
    a: &DenseMatrix,
    b: &DenseMatrix,
    gamma: f64,
    eps_a: f64,
    eps_b: f64,
    mode: CertificateMode,
) -> Result<CertificateResult> {
    check_same_dim(a, b)?;
    check_tolerance("eps_a", eps_a)?;
    check_tolerance("eps_b", eps_b)?;
    let left = disks_from(a, &perturbed_radius_bound(a, gamma, eps_a)?, gamma);
    let right = disks_from(b, &perturbed_radius_bound(b, gamma, eps_b)?, gamma);
    let (shift_left, shift_right) = match mode {
        CertificateMode::RobustNominal => (eps_a, eps_b),
        CertificateMode::RobustGiven | CertificateMode::Exact => (0.0, 0.0),
    };
    let checks = separation(left, right, shift_left, shift_right);
    Ok(CertificateResult {
        status: status_of(&checks),
        mode,
        gamma,
        eps_a,
        eps_b,
        checks,
    })
}

/// Ranks of `(A-λI)^ℓ` and `(B-λI)^ℓ` at one shared eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub eigenvalue: Complex64,
    pub alg_mult: usize,
    pub ranks_a: Vec<usize>,
    pub ranks_b: Vec<usize>,
    /// Comparison of the rank sequences: `LessOrEqual` when every rank of
    /// `A` is at most the matching rank of `B` and some differ.
    pub relation: Relation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NilpotentCertificate {
    pub status: CertificateStatus,
    /// 1-based index of the eigenvalue where the rank sequences first differ.
    pub witness: Option<usize>,
    /// Largest distance between matched distinct eigenvalues.
    pub spectral_distance: f64,
    pub rows: Vec<RankRow>,
}

fn compare_ranks(ra: &[usize], rb: &[usize]) -> Relation {
    let len = ra.len().max(rb.len());
    let at = |r: &[usize], l: usize| r.get(l).copied().unwrap_or(*r.last().unwrap_or(&0));
    let (mut le, mut ge, mut equal) = (true, true, true);
    for l in 0..len {
        let (x, y) = (at(ra, l), at(rb, l));
        le &= x <= y;
        ge &= x >= y;
        equal &= x == y;
    }
    match (equal, le, ge) {
        (true, _, _) => Relation::Equal,
        (_, true, _) => Relation::LessOrEqual,
        (_, _, true) => Relation::GreaterOrEqual,
        _ => Relation::Incomparable,
    }
}

/// Pairs distinct eigenvalues of two spectra and returns the largest
/// mismatch, or `None` when counts or multiplicities differ.
fn matched_distance(sa: &Spectrum, sb: &Spectrum) -> Option<f64> {
    if sa.distinct.len() != sb.distinct.len() {
        return None;
    }
    let mut worst: f64 = 0.0;
    for (x, y) in sa.distinct.iter().zip(&sb.distinct) {
        if x.alg_mult != y.alg_mult {
            return None;
        }
        worst = worst.max((x.value - y.value).norm());
    }
    Some(worst)
}

fn full_vector_distance(sa: &Spectrum, sb: &Spectrum) -> f64 {
    let (va, vb) = (sa.eigenvalue_vector(), sb.eigenvalue_vector());
    va.iter()
        .zip(&vb)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Rank-power certificate for the nilpotent order of two matrices with the
/// same spectrum.
///
/// Walking the shared eigenvalues in descending lex order, the first one at
/// which the rank sequences differ decides: the certificate holds when every
/// rank of `A` there is at most the matching rank of `B`. Identical rank
/// sequences everywhere also certify (equal nilpotent structure).
pub fn nilpotent_rank_cert(
    a: &DenseMatrix,
    b: &DenseMatrix,
    tol: &Tolerances,
) -> Result<NilpotentCertificate> {
    check_same_dim(a, b)?;
    tol.validate()?;
    let cluster_tol = tol.cluster_tol_for(a).max(tol.cluster_tol_for(b));
    let sa = cluster_spectrum(&eigenvalues(a)?, cluster_tol)?;
    let sb = cluster_spectrum(&eigenvalues(b)?, cluster_tol)?;

    let distance = match matched_distance(&sa, &sb) {
        Some(d) if d <= cluster_tol => d,
        Some(d) => {
            return Err(SnoError::SpectraMismatch {
                distance: d,
                cluster_tol,
            })
        }
        None => {
            return Err(SnoError::SpectraMismatch {
                distance: full_vector_distance(&sa, &sb),
                cluster_tol,
            })
        }
    };

    let mut rows = Vec::with_capacity(sa.distinct.len());
    let mut decision: Option<(usize, CertificateStatus)> = None;
    for (k, (ea, eb)) in sa.distinct.iter().zip(&sb.distinct).enumerate() {
        let ranks_a = rank_sequence(a, ea.value, ea.alg_mult, tol.rank_tol)?;
        let ranks_b = rank_sequence(b, eb.value, eb.alg_mult, tol.rank_tol)?;
        let relation = compare_ranks(&ranks_a, &ranks_b);
        if decision.is_none() && relation != Relation::Equal {
            let status = if relation.holds_le() {
                CertificateStatus::Certified
            } else {
                CertificateStatus::NotCertified
            };
            decision = Some((k + 1, status));
        }
        rows.push(RankRow {
            eigenvalue: (ea.value + eb.value) / 2.0,
            alg_mult: ea.alg_mult,
            ranks_a,
            ranks_b,
            relation,
        });
    }

    let (witness, status) = match decision {
        Some((k, s)) => (Some(k), s),
        None => (None, CertificateStatus::Certified),
    };
    Ok(NilpotentCertificate {
        status,
        witness,
        spectral_distance: distance,
        rows,
    })
}
