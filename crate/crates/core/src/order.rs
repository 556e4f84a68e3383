//! Order-theoretic kernel: lexicographic order on ℂ, dominance order on
//! integer partitions, weak majorization of complex vectors, and the
//! spectral-and-nilpotent comparison built from them.
//!
//! Every comparison returns a [`Verdict`] that names the relation and the
//! first position that decided it.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_tolerance, Result, SnoError};
use crate::spectra::SnoRepresentation;

/// Default tolerance for lexicographic ties between computed eigenvalues.
pub const DEFAULT_LEX_TOL: f64 = 1e-9;

/// Compares `a` and `b` lexicographically: real parts first, imaginary parts
/// on a tie. Components closer than `tol` count as equal.
pub fn lex_compare(a: Complex64, b: Complex64, tol: f64) -> Result<Ordering> {
    check_tolerance("lex_tol", tol)?;
    check_finite(&[a, b], "lexicographic comparison")?;
    Ok(lex_cmp(a, b, tol))
}

pub(crate) fn lex_cmp(a: Complex64, b: Complex64, tol: f64) -> Ordering {
    let by_component = |x: f64, y: f64| {
        if (x - y).abs() <= tol {
            Ordering::Equal
        } else if x < y {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    };
    by_component(a.re, b.re).then_with(|| by_component(a.im, b.im))
}

/// Stable sort into descending lexicographic order.
pub fn sort_desc_lex(values: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    check_tolerance("lex_tol", tol)?;
    check_finite(values, "eigenvalue list")?;
    let mut sorted = values.to_vec();
    sort_desc_by(&mut sorted, |x| *x, tol);
    Ok(sorted)
}

/// Insertion sort: with `tol > 0` the comparator is not transitive, which
/// the standard library sorts are allowed to reject.
pub(crate) fn sort_desc_by<T>(items: &mut [T], key: impl Fn(&T) -> Complex64, tol: f64) {
    for i in 1..items.len() {
        let mut j = i;
        while j > 0 && lex_cmp(key(&items[j]), key(&items[j - 1]), tol) == Ordering::Greater {
            items.swap(j, j - 1);
            j -= 1;
        }
    }
}

fn check_finite(values: &[Complex64], context: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(SnoError::NonFinite { context })
    }
}

/// An integer partition: positive parts in non-increasing order.
///
/// For a Jordan structure, the parts are the block sizes attached to one
/// eigenvalue and the weight is its algebraic multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(SnoError::InvalidPartition {
                parts,
                reason: "parts must be positive",
            });
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(SnoError::InvalidPartition {
                parts,
                reason: "parts must be non-increasing",
            });
        }
        Ok(Self(parts))
    }

    /// The empty partition of zero, used to pad shorter lists.
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Conjugate partition: entry ℓ counts the parts of size at least ℓ.
    pub fn conjugate(&self) -> Partition {
        let largest = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=largest)
                .map(|l| self.0.iter().take_while(|&&p| p >= l).count())
                .collect(),
        )
    }

    /// Part `i` (0-based), with parts beyond the length read as zero.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Outcome of comparing a left operand with a right operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    StrictlyLess,
    LessOrEqual,
    Equal,
    GreaterOrEqual,
    StrictlyGreater,
    Incomparable,
}

impl Relation {
    /// True when the left operand is below or equal to the right one.
    pub fn holds_le(self) -> bool {
        matches!(
            self,
            Relation::StrictlyLess | Relation::LessOrEqual | Relation::Equal
        )
    }

    pub fn holds_ge(self) -> bool {
        self.reversed().holds_le()
    }

    /// The relation seen with the operands swapped.
    pub fn reversed(self) -> Relation {
        match self {
            Relation::StrictlyLess => Relation::StrictlyGreater,
            Relation::LessOrEqual => Relation::GreaterOrEqual,
            Relation::Equal => Relation::Equal,
            Relation::GreaterOrEqual => Relation::LessOrEqual,
            Relation::StrictlyGreater => Relation::StrictlyLess,
            Relation::Incomparable => Relation::Incomparable,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::StrictlyLess => "≺",
            Relation::LessOrEqual => "≼",
            Relation::Equal => "=",
            Relation::GreaterOrEqual => "≽",
            Relation::StrictlyGreater => "≻",
            Relation::Incomparable => "∥",
        }
    }

    fn classify(equal: bool, le: bool, strict_le: bool, ge: bool, strict_ge: bool) -> Relation {
        if equal {
            Relation::Equal
        } else if strict_le {
            Relation::StrictlyLess
        } else if le {
            Relation::LessOrEqual
        } else if strict_ge {
            Relation::StrictlyGreater
        } else if ge {
            Relation::GreaterOrEqual
        } else {
            Relation::Incomparable
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Relation::StrictlyLess => "strictly less",
            Relation::LessOrEqual => "less or equal",
            Relation::Equal => "equal",
            Relation::GreaterOrEqual => "greater or equal",
            Relation::StrictlyGreater => "strictly greater",
            Relation::Incomparable => "incomparable",
        };
        f.write_str(name)
    }
}

/// A relation together with the first (1-based) position that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub relation: Relation,
    pub witness: Option<usize>,
}

impl Verdict {
    pub fn equal() -> Self {
        Verdict {
            relation: Relation::Equal,
            witness: None,
        }
    }
}

/// Dominance order on partitions: compares prefix sums, padding the shorter
/// partition with zeros.
///
/// `StrictlyLess` requires every prefix inequality to be strict.
pub fn dominance_compare(p: &Partition, q: &Partition) -> Verdict {
    if p == q {
        return Verdict::equal();
    }
    let len = p.len().max(q.len());
    let (mut sp, mut sq) = (0usize, 0usize);
    let (mut le, mut ge, mut strict_le, mut strict_ge) = (true, true, true, true);
    let mut witness = None;
    for j in 0..len {
        sp += p.part(j);
        sq += q.part(j);
        le &= sp <= sq;
        ge &= sp >= sq;
        strict_le &= sp < sq;
        strict_ge &= sp > sq;
        if witness.is_none() && sp != sq {
            witness = Some(j + 1);
        }
    }
    Verdict {
        relation: Relation::classify(false, le, strict_le, ge, strict_ge),
        witness,
    }
}

/// Weak majorization of eigenvalue vectors under the lexicographic order.
///
/// Both vectors are re-sorted descending; the verdict compares every prefix
/// sum. `StrictlyLess` means every prefix sum is strictly lex-smaller.
pub fn weak_majorize(x: &[Complex64], y: &[Complex64], tol: f64) -> Result<Verdict> {
    if x.len() != y.len() {
        return Err(SnoError::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let xs = sort_desc_lex(x, tol)?;
    let ys = sort_desc_lex(y, tol)?;

    let equal = xs
        .iter()
        .zip(&ys)
        .all(|(a, b)| lex_cmp(*a, *b, tol) == Ordering::Equal);
    if equal {
        return Ok(Verdict::equal());
    }

    let (mut sx, mut sy) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let (mut le, mut ge, mut strict_le, mut strict_ge) = (true, true, true, true);
    let mut witness = None;
    for (k, (a, b)) in xs.iter().zip(&ys).enumerate() {
        sx += a;
        sy += b;
        let ord = lex_cmp(sx, sy, tol);
        le &= ord != Ordering::Greater;
        ge &= ord != Ordering::Less;
        strict_le &= ord == Ordering::Less;
        strict_ge &= ord == Ordering::Greater;
        if witness.is_none() && ord != Ordering::Equal {
            witness = Some(k + 1);
        }
    }
    Ok(Verdict {
        relation: Relation::classify(false, le, strict_le, ge, strict_ge),
        witness,
    })
}

/// Nilpotent ordering of partition lists aligned by descending eigenvalue.
///
/// The shorter list is padded with empty partitions. The first index at
/// which the lists differ decides; there the dominance order of the two
/// partitions gives the direction. Because the deciding partitions always
/// differ, a decided comparison is strict.
pub fn nilpotent_compare(left: &[Partition], right: &[Partition]) -> Verdict {
    let empty = Partition::empty();
    let len = left.len().max(right.len());
    for k in 0..len {
        let p = left.get(k).unwrap_or(&empty);
        let q = right.get(k).unwrap_or(&empty);
        if p == q {
            continue;
        }
        let relation = match dominance_compare(p, q).relation {
            Relation::StrictlyLess | Relation::LessOrEqual => Relation::StrictlyLess,
            Relation::StrictlyGreater | Relation::GreaterOrEqual => Relation::StrictlyGreater,
            _ => Relation::Incomparable,
        };
        return Verdict {
            relation,
            witness: Some(k + 1),
        };
    }
    Verdict::equal()
}

/// Which half of the spectral-and-nilpotent order decided a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Spectral,
    Nilpotent,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Spectral => "spectral",
            Branch::Nilpotent => "nilpotent",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SnoVerdict {
    pub relation: Relation,
    pub branch: Branch,
    pub witness: Option<usize>,
}

/// Spectral-and-nilpotent comparison of two matrix representations.
///
/// Weak majorization of the full eigenvalue vectors decides unless the
/// spectra coincide, in which case the nilpotent order of the Jordan
/// partitions decides.
pub fn sno_compare(
    left: &SnoRepresentation,
    right: &SnoRepresentation,
    tol: f64,
) -> Result<SnoVerdict> {
    let (n1, n2) = (left.dim(), right.dim());
    if n1 != n2 {
        return Err(SnoError::DimensionMismatch {
            left: n1,
            right: n2,
        });
    }
    let spectral = weak_majorize(
        &left.spectrum.eigenvalue_vector(),
        &right.spectrum.eigenvalue_vector(),
        tol,
    )?;
    if spectral.relation != Relation::Equal {
        return Ok(SnoVerdict {
            relation: spectral.relation,
            branch: Branch::Spectral,
            witness: spectral.witness,
        });
    }
    let nilpotent = nilpotent_compare(&left.partitions, &right.partitions);
    Ok(SnoVerdict {
        relation: nilpotent.relation,
        branch: Branch::Nilpotent,
        witness: nilpotent.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn part(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn lex_compare_examples() {
        assert_eq!(lex_compare(c(1., 2.), c(2., 0.), 0.).unwrap(), Ordering::Less);
        assert_eq!(lex_compare(c(3., 1.), c(3., 1.), 0.).unwrap(), Ordering::Equal);
        assert_eq!(lex_compare(c(0., 1.), c(0., 2.), 0.).unwrap(), Ordering::Less);
    }

    #[test]
    fn lex_compare_tolerance_ties_real_then_imag() {
        assert_eq!(
            lex_compare(c(1.0, 5.0), c(1.0 + 1e-12, 4.0), 1e-9).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            lex_compare(c(1.0, 4.0), c(1.0 + 1e-12, 4.0 + 1e-12), 1e-9).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn lex_compare_rejects_non_finite_and_negative_tol() {
        assert!(matches!(
            lex_compare(c(f64::NAN, 0.), c(0., 0.), 0.),
            Err(SnoError::NonFinite { .. })
        ));
        assert!(lex_compare(c(f64::INFINITY, 0.), c(0., 0.), 0.).is_err());
        assert!(matches!(
            lex_compare(c(0., 0.), c(0., 0.), -1.0),
            Err(SnoError::InvalidParameter { .. })
        ));
    }

    #[test]
    fn sort_desc_lex_examples() {
        let s = sort_desc_lex(&[c(-1., 0.), c(0., 0.), c(-2., 0.)], 0.).unwrap();
        assert_eq!(s, vec![c(0., 0.), c(-1., 0.), c(-2., 0.)]);
        let s = sort_desc_lex(&[c(1., -1.), c(1., 1.)], 0.).unwrap();
        assert_eq!(s, vec![c(1., 1.), c(1., -1.)]);
        assert!(sort_desc_lex(&[], 0.).unwrap().is_empty());
    }

    #[test]
    fn sort_desc_lex_is_stable_on_ties() {
        let a = c(1.0, 0.0);
        let b = c(1.0 + 1e-12, 0.0);
        let s = sort_desc_lex(&[a, b], 1e-9).unwrap();
        assert_eq!(s, vec![a, b]);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(vec![3, 1]).is_ok());
        assert!(Partition::new(vec![]).is_ok());
        assert!(matches!(
            Partition::new(vec![1, 2]),
            Err(SnoError::InvalidPartition { .. })
        ));
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn conjugate_partition() {
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
        assert_eq!(part(&[2, 2]).conjugate(), part(&[2, 2]));
        assert_eq!(part(&[4, 2, 1]).conjugate().conjugate(), part(&[4, 2, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(part(&[3, 1]).to_string(), "(3,1)");
    }

    #[test]
    fn dominance_examples() {
        let v = dominance_compare(&part(&[2, 2]), &part(&[3, 1]));
        assert_eq!(v.relation, Relation::LessOrEqual);
        assert_eq!(v.witness, Some(1));
        assert_eq!(
            dominance_compare(&part(&[3, 1]), &part(&[3, 1])).relation,
            Relation::Equal
        );
        // prefix sums (2,4,4) vs (2,3,4)
        let v = dominance_compare(&part(&[2, 2]), &part(&[2, 1, 1]));
        assert_eq!(v.relation, Relation::GreaterOrEqual);
        assert!(!v.relation.holds_le());
        assert_eq!(v.witness, Some(2));
        assert_eq!(
            dominance_compare(&part(&[2, 1, 1]), &part(&[2, 2])).relation,
            Relation::LessOrEqual
        );
    }

    #[test]
    fn dominance_all_strict_needs_unequal_weights() {
        // equal weights always tie at the last prefix
        assert_eq!(
            dominance_compare(&part(&[1, 1]), &part(&[2])).relation,
            Relation::LessOrEqual
        );
        assert_eq!(
            dominance_compare(&Partition::empty(), &part(&[1])).relation,
            Relation::StrictlyLess
        );
        assert_eq!(
            dominance_compare(&part(&[2, 1]), &part(&[1])).relation,
            Relation::StrictlyGreater
        );
    }

    #[test]
    fn dominance_incomparable_pair() {
        // (3,1,1,1) vs (2,2,2): prefix sums (3,4,5,6) vs (2,4,6,6)
        let v = dominance_compare(&part(&[3, 1, 1, 1]), &part(&[2, 2, 2]));
        assert_eq!(v.relation, Relation::Incomparable);
    }

    #[test]
    fn weak_majorize_examples() {
        let v = weak_majorize(&[c(-1., 0.), c(-2., 0.)], &[c(0., 0.), c(-1., 0.)], 1e-9).unwrap();
        assert_eq!(v.relation, Relation::StrictlyLess);
        let x = [c(0.5, 1.0), c(-3.0, 0.0)];
        assert_eq!(weak_majorize(&x, &x, 1e-9).unwrap().relation, Relation::Equal);
        // prefix sums 1+i vs 1+2i at both k: the imaginary tiebreak is strict
        let v = weak_majorize(&[c(1., 1.), c(0., 0.)], &[c(1., 2.), c(0., 0.)], 1e-9).unwrap();
        assert_eq!(v.relation, Relation::StrictlyLess);
        assert!(v.relation.holds_le());
        assert_eq!(v.witness, Some(1));
    }

    #[test]
    fn weak_majorize_non_strict_and_incomparable() {
        // top entries tie, second prefix is strictly less
        let v = weak_majorize(&[c(0., 0.), c(-2., 0.)], &[c(0., 0.), c(-1., 0.)], 0.).unwrap();
        assert_eq!(v.relation, Relation::LessOrEqual);
        assert_eq!(v.witness, Some(2));
        // larger top, smaller total
        let v = weak_majorize(&[c(1., 0.), c(-5., 0.)], &[c(0., 0.), c(0., 0.)], 0.).unwrap();
        assert_eq!(v.relation, Relation::Incomparable);
        assert!(matches!(
            weak_majorize(&[c(0., 0.)], &[], 0.),
            Err(SnoError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn weak_majorize_resorts_input() {
        let v = weak_majorize(&[c(-2., 0.), c(-1., 0.)], &[c(-1., 0.), c(0., 0.)], 0.).unwrap();
        assert_eq!(v.relation, Relation::StrictlyLess);
    }

    #[test]
    fn nilpotent_examples() {
        let v = nilpotent_compare(&[part(&[2, 2])], &[part(&[3, 1])]);
        assert!(v.relation.holds_le());
        assert_eq!(v.witness, Some(1));
        let m = [part(&[1]), part(&[2])];
        assert_eq!(nilpotent_compare(&m, &m), Verdict::equal());
        let v = nilpotent_compare(&[part(&[1, 1]), part(&[3])], &[part(&[2]), part(&[3])]);
        assert_eq!(v.relation, Relation::StrictlyLess);
        assert_eq!(v.witness, Some(1));
    }

    #[test]
    fn nilpotent_first_difference_decides() {
        let left = [part(&[2]), part(&[1, 1])];
        let right = [part(&[2]), part(&[2])];
        let v = nilpotent_compare(&left, &right);
        assert_eq!(v.relation, Relation::StrictlyLess);
        assert_eq!(v.witness, Some(2));
        assert_eq!(nilpotent_compare(&right, &left).relation, Relation::StrictlyGreater);
    }

    #[test]
    fn nilpotent_pads_shorter_list() {
        let v = nilpotent_compare(&[part(&[1])], &[part(&[1]), part(&[1])]);
        assert_eq!(v.relation, Relation::StrictlyLess);
        assert_eq!(v.witness, Some(2));
    }

    #[test]
    fn relation_reversal_round_trips() {
        for r in [
            Relation::StrictlyLess,
            Relation::LessOrEqual,
            Relation::Equal,
            Relation::GreaterOrEqual,
            Relation::StrictlyGreater,
            Relation::Incomparable,
        ] {
            assert_eq!(r.reversed().reversed(), r);
            assert_eq!(r.holds_le(), r.reversed().holds_ge());
        }
    }
}
