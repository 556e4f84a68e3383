//! Stability ranking of linear time-invariant systems `ẋ = Ax`.
//!
//! A matrix is in the stable class when its spectral abscissa is strictly
//! negative. Two stable matrices are ranked by the spectral-and-nilpotent
//! order; the report backs the verdict with sampled norm envelopes
//! `t ↦ ‖e^{tA}‖₂`, an empirical crossing time and the transient peaks.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SnoError};
use crate::matrix::{spectral_norm, DenseMatrix};
use crate::order::{sno_compare, Relation, SnoVerdict};
use crate::spectra::{eigenvalues, sno_representation, SnoRepresentation, Tolerances};

pub const DEFAULT_SAMPLES: usize = 400;

/// Decay horizon factor: the default grid ends at `50 / |α|`.
pub const DEFAULT_DECAY_FACTOR: f64 = 50.0;

/// Horizon used when neither matrix has a usable negative abscissa.
pub const FALLBACK_T_END: f64 = 20.0;

const PEAK_T_TOL: f64 = 1e-6;

pub fn spectral_abscissa(a: &DenseMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `α(A) < 0`, with no tolerance applied to the computed abscissa.
pub fn is_stable(a: &DenseMatrix) -> Result<bool> {
    Ok(spectral_abscissa(a)? < 0.0)
}

/// `e^{tA}` by scaling and squaring with a Padé approximant.
pub fn matrix_exponential(a: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    Ok(DenseMatrix::new(exp_scaled(a, t)?).expect("exponential of a square matrix is square"))
}

fn exp_scaled(a: &DenseMatrix, t: f64) -> Result<DMatrix<Complex64>> {
    if !t.is_finite() || t < 0.0 {
        return Err(SnoError::InvalidParameter {
            name: "t",
            value: t,
            reason: "must be finite and non-negative",
        });
    }
    let n = a.dim();
    if t == 0.0 {
        return Ok(DMatrix::identity(n, n));
    }
    let scaled = a.as_matrix() * Complex64::new(t, 0.0);
    let e = scaled.exp();
    if e.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SnoError::ExponentialOverflow {
            t,
            scaled_norm: t * a.norm2(),
        });
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    /// A geometrically spaced head over the first tenth of the span, then
    /// linear spacing to the end.
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
    pub spacing: Spacing,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, samples: usize, spacing: Spacing) -> Result<Self> {
        let g = TimeGrid {
            t_start,
            t_end,
            samples,
            spacing,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn linear(t_end: f64, samples: usize) -> Result<Self> {
        Self::new(0.0, t_end, samples, Spacing::Linear)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.t_start.is_finite() || !self.t_end.is_finite() {
            return Err(SnoError::InvalidGrid {
                reason: "endpoints must be finite",
            });
        }
        if self.t_start < 0.0 {
            return Err(SnoError::InvalidGrid {
                reason: "t_start must be non-negative",
            });
        }
        if self.t_start >= self.t_end {
            return Err(SnoError::InvalidGrid {
                reason: "t_start must be below t_end",
            });
        }
        if self.samples < 2 {
            return Err(SnoError::InvalidGrid {
                reason: "at least two samples are needed",
            });
        }
        Ok(())
    }

    /// Strictly increasing sample times from `t_start` to `t_end` inclusive.
    pub fn points(&self) -> Vec<f64> {
        let (a, b, n) = (self.t_start, self.t_end, self.samples);
        let span = b - a;
        let linear = |lo: f64, count: usize| -> Vec<f64> {
            (0..count)
                .map(|i| lo + (b - lo) * i as f64 / (count - 1) as f64)
                .collect()
        };
        let head = n / 4;
        if self.spacing == Spacing::Linear || head < 3 {
            let mut pts = linear(a, n);
            pts[n - 1] = b;
            return pts;
        }
        // t_start, then head-1 geometric points in [1e-4, 1e-1]·span, then
        // the linear tail starting past the head.
        let mut pts = Vec::with_capacity(n);
        pts.push(a);
        let (lo, hi) = (1e-4f64, 1e-1f64);
        for i in 0..head - 1 {
            let frac = lo * (hi / lo).powf(i as f64 / (head - 2) as f64);
            pts.push(a + span * frac);
        }
        let tail_start = a + span * hi;
        let tail = linear(tail_start, n - head + 1);
        pts.extend_from_slice(&tail[1..]);
        pts[n - 1] = b;
        pts
    }

    /// Default grid for a pair: `samples` linear points from 0 to
    /// `50 / |α|`, where `α` is the negative abscissa closest to zero.
    pub fn default_for(abscissae: &[f64], samples: usize) -> Result<Self> {
        let slowest = abscissae
            .iter()
            .copied()
            .filter(|&x| x < 0.0 && x.abs() >= 1e-8)
            .fold(f64::NEG_INFINITY, f64::max);
        let t_end = if slowest.is_finite() {
            DEFAULT_DECAY_FACTOR / slowest.abs()
        } else {
            FALLBACK_T_END
        };
        Self::linear(t_end, samples)
    }
}

/// Sampled curve `t ↦ ‖e^{tA}‖₂`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope {
    pub t: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl Envelope {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Grid index and value of the largest sample (first one on ties).
    pub fn argmax(&self) -> (usize, f64) {
        self.gamma
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
    }

    /// Two-column `t,gamma` CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,gamma\n");
        for (t, g) in self.t.iter().zip(&self.gamma) {
            out.push_str(&format!("{t:e},{g:e}\n"));
        }
        out
    }
}

fn norm_at(a: &DenseMatrix, t: f64) -> Result<f64> {
    Ok(spectral_norm(&exp_scaled(a, t)?))
}

/// Samples `‖e^{tA}‖₂` on the grid. Each sample is an independent
/// exponential, so errors do not accumulate along the grid.
pub fn envelope(a: &DenseMatrix, grid: &TimeGrid) -> Result<Envelope> {
    grid.validate()?;
    let t = grid.points();
    let gamma = t.iter().map(|&s| norm_at(a, s)).collect::<Result<Vec<_>>>()?;
    Ok(Envelope { t, gamma })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub t: f64,
    pub value: f64,
}

fn golden_max(f: impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, tol: f64) -> Result<Peak> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 {
        Peak { t: x1, value: f1 }
    } else {
        Peak { t: x2, value: f2 }
    })
}

/// Grid maximum of the envelope refined by golden-section search between
/// the neighbours of the best grid point.
fn refined_peak(a: &DenseMatrix, env: &Envelope) -> Result<Peak> {
    let (i, value) = env.argmax();
    let grid_best = Peak { t: env.t[i], value };
    let lo = env.t[i.saturating_sub(1)];
    let hi = env.t[(i + 1).min(env.len() - 1)];
    if hi - lo <= PEAK_T_TOL {
        return Ok(grid_best);
    }
    let refined = golden_max(|s| norm_at(a, s), lo, hi, PEAK_T_TOL)?;
    Ok(if refined.value > grid_best.value {
        refined
    } else {
        grid_best
    })
}

/// Largest value of `‖e^{tA}‖₂` over the grid span and where it occurs.
pub fn transient_peak(a: &DenseMatrix, grid: &TimeGrid) -> Result<Peak> {
    let abscissa = spectral_abscissa(a)?;
    if abscissa >= 0.0 {
        return Err(SnoError::NotStable { abscissa });
    }
    refined_peak(a, &envelope(a, grid)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityVerdict {
    A1StrictlyMoreStable,
    A2StrictlyMoreStable,
    Equal,
    Incomparable,
    NotApplicable,
}

impl StabilityVerdict {
    fn from_relation(r: Relation) -> Self {
        match r {
            Relation::StrictlyLess => StabilityVerdict::A1StrictlyMoreStable,
            Relation::StrictlyGreater => StabilityVerdict::A2StrictlyMoreStable,
            Relation::Equal => StabilityVerdict::Equal,
            _ => StabilityVerdict::Incomparable,
        }
    }
}

impl fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityVerdict::A1StrictlyMoreStable => "A1 strictly more stable",
            StabilityVerdict::A2StrictlyMoreStable => "A2 strictly more stable",
            StabilityVerdict::Equal => "equally stable",
            StabilityVerdict::Incomparable => "incomparable",
            StabilityVerdict::NotApplicable => "not applicable (a matrix is not stable)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub in_class_1: bool,
    pub in_class_2: bool,
    pub abscissa_1: f64,
    pub abscissa_2: f64,
    pub representation_1: SnoRepresentation,
    pub representation_2: SnoRepresentation,
    pub sno_verdict: SnoVerdict,
    pub stab_verdict: StabilityVerdict,
    pub grid: TimeGrid,
    pub envelope_1: Envelope,
    pub envelope_2: Envelope,
    /// Grid time after which the envelope of the more stable matrix (`A1`
    /// unless the verdict favours `A2`) stays strictly below the other at
    /// every remaining grid point.
    pub crossing_time: Option<f64>,
    pub peak_1: Peak,
    pub peak_2: Peak,
}

/// First grid time after which the first curve stays strictly below the
/// second; `None` when the last sample is not strictly below.
pub fn crossing_time(lower: &Envelope, upper: &Envelope) -> Option<f64> {
    let n = lower.len().min(upper.len());
    let mut start = n;
    while start > 0 && lower.gamma[start - 1] < upper.gamma[start - 1] {
        start -= 1;
    }
    if start == n {
        return None;
    }
    Some(lower.t[start.saturating_sub(1)])
}

/// The stability verdict alone, without sampling envelopes.
pub fn stability_order(
    a1: &DenseMatrix,
    a2: &DenseMatrix,
    tol: &Tolerances,
) -> Result<(StabilityVerdict, SnoVerdict)> {
    let r1 = sno_representation(a1, tol)?;
    let r2 = sno_representation(a2, tol)?;
    let verdict = sno_compare(&r1, &r2, tol.lex_tol)?;
    let stable = spectral_abscissa(a1)? < 0.0 && spectral_abscissa(a2)? < 0.0;
    let stab = if stable {
        StabilityVerdict::from_relation(verdict.relation)
    } else {
        StabilityVerdict::NotApplicable
    };
    Ok((stab, verdict))
}

/// Ranks `a1` against `a2`; `grid = None` uses [`TimeGrid::default_for`].
pub fn stability_compare(
    a1: &DenseMatrix,
    a2: &DenseMatrix,
    grid: Option<TimeGrid>,
    tol: &Tolerances,
) -> Result<StabilityReport> {
    if a1.dim() != a2.dim() {
        return Err(SnoError::DimensionMismatch {
            left: a1.dim(),
            right: a2.dim(),
        });
    }
    tol.validate()?;
    let abscissa_1 = spectral_abscissa(a1)?;
    let abscissa_2 = spectral_abscissa(a2)?;
    let (in_class_1, in_class_2) = (abscissa_1 < 0.0, abscissa_2 < 0.0);

    let representation_1 = sno_representation(a1, tol)?;
    let representation_2 = sno_representation(a2, tol)?;
    let sno_verdict = sno_compare(&representation_1, &representation_2, tol.lex_tol)?;
    let stab_verdict = if in_class_1 && in_class_2 {
        StabilityVerdict::from_relation(sno_verdict.relation)
    } else {
        StabilityVerdict::NotApplicable
    };

    let grid = match grid {
        Some(g) => g,
        None => TimeGrid::default_for(&[abscissa_1, abscissa_2], DEFAULT_SAMPLES)?,
    };
    let envelope_1 = envelope(a1, &grid)?;
    let envelope_2 = envelope(a2, &grid)?;
    let crossing = match stab_verdict {
        StabilityVerdict::A2StrictlyMoreStable => crossing_time(&envelope_2, &envelope_1),
        _ => crossing_time(&envelope_1, &envelope_2),
    };
    let peak_1 = refined_peak(a1, &envelope_1)?;
    let peak_2 = refined_peak(a2, &envelope_2)?;

    Ok(StabilityReport {
        in_class_1,
        in_class_2,
        abscissa_1,
        abscissa_2,
        representation_1,
        representation_2,
        sno_verdict,
        stab_verdict,
        grid,
        envelope_1,
        envelope_2,
        crossing_time: crossing,
        peak_1,
        peak_2,
    })
}
