//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sno_core::{Complex64, DenseMatrix, Partition};

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the closed disk of the given radius.
pub fn in_disk(rng: &mut impl Rng, radius: f64) -> C {
    let r = radius * rng.random::<f64>().sqrt();
    let phi = rng.random_range(0.0..std::f64::consts::TAU);
    C::from_polar(r, phi)
}

pub fn gaussian(rng: &mut impl Rng) -> C {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Entries uniform in the disk of radius `scale`.
pub fn random_matrix(rng: &mut impl Rng, n: usize, scale: f64) -> DMatrix<C> {
    DMatrix::from_fn(n, n, |_, _| in_disk(rng, scale))
}

pub fn dense(m: DMatrix<C>) -> DenseMatrix {
    DenseMatrix::new(m).unwrap()
}

pub fn real_diag(v: &[f64]) -> DenseMatrix {
    DenseMatrix::diagonal(&v.iter().map(|&x| c(x, 0.)).collect::<Vec<_>>()).unwrap()
}

/// Haar-like unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> DMatrix<C> {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    g.qr().q()
}

/// `P = U Σ V*` with singular values spread geometrically over
/// `[1, cond]`, together with the exact inverse `V Σ⁻¹ U*`.
pub fn similarity(rng: &mut impl Rng, n: usize, max_cond: f64) -> (DMatrix<C>, DMatrix<C>, f64) {
    let cond = rng.random_range(1.0..=max_cond);
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let sigma: Vec<f64> = (0..n)
        .map(|i| if n == 1 { 1.0 } else { cond.powf(i as f64 / (n - 1) as f64) })
        .collect();
    let s = DMatrix::from_fn(n, n, |i, j| if i == j { c(sigma[i], 0.) } else { c(0., 0.) });
    let s_inv = DMatrix::from_fn(n, n, |i, j| if i == j { c(1.0 / sigma[i], 0.) } else { c(0., 0.) });
    let p = &u * s * v.adjoint();
    let p_inv = &v * s_inv * u.adjoint();
    (p, p_inv, cond)
}

/// Block-diagonal Jordan matrix: for each `(λ, blocks)` one Jordan block per
/// part, placed in order.
pub fn jordan_seed(spec: &[(C, Vec<usize>)]) -> DMatrix<C> {
    let blocks: Vec<DenseMatrix> = spec
        .iter()
        .flat_map(|(lambda, parts)| parts.iter().map(move |&s| DenseMatrix::jordan_block(*lambda, s).unwrap()))
        .collect();
    DenseMatrix::direct_sum(&blocks).unwrap().into_inner()
}

/// Random partition of `weight` (non-increasing positive parts).
pub fn random_partition(rng: &mut impl Rng, weight: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = weight;
    while left > 0 {
        let cap = parts.last().copied().unwrap_or(left).min(left);
        let p = rng.random_range(1..=cap);
        parts.push(p);
        left -= p;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

pub fn partition(parts: &[usize]) -> Partition {
    Partition::new(parts.to_vec()).unwrap()
}

/// Brute-force dominance: `Some(true)` when `p ⊴ q`, from explicit prefix
/// sums padded to the longer length.
pub fn dominated_by(p: &[usize], q: &[usize]) -> bool {
    let len = p.len().max(q.len());
    let prefix = |v: &[usize]| -> Vec<usize> {
        (0..len).scan(0, |s, i| { *s += v.get(i).copied().unwrap_or(0); Some(*s) }).collect()
    };
    prefix(p).iter().zip(prefix(q)).all(|(a, b)| *a <= b)
}

/// Tolerance-free lex `≤` for the oracles.
pub fn lex_le(a: C, b: C) -> bool {
    a.re < b.re || (a.re == b.re && a.im <= b.im)
}

/// Descending lex sort without tolerance.
pub fn sorted_desc(v: &[C]) -> Vec<C> {
    let mut out = v.to_vec();
    out.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    out
}

/// `e^{tJ}` for a single Jordan block `J = λI + N` of size `k`, from the
/// entry formula `e^{λt} t^{j-i} / (j-i)!`.
pub fn jordan_block_exp(lambda: C, k: usize, t: f64) -> DMatrix<C> {
    let scale = (lambda * t).exp();
    DMatrix::from_fn(k, k, |i, j| {
        if j < i {
            c(0., 0.)
        } else {
            let d = (j - i) as i32;
            let fact: f64 = (1..=d).map(f64::from).product();
            scale * (t.powi(d) / fact)
        }
    })
}

/// Largest singular value by power iteration on `M* M` (independent of the
/// library's SVD).
pub fn sigma_max_power(m: &DMatrix<C>) -> f64 {
    let g = m.adjoint() * m;
    let n = g.nrows();
    let mut x = DMatrix::from_fn(n, 1, |i, _| c(1.0 + i as f64 * 0.37, 0.11 * i as f64));
    let mut est = 0.0;
    for _ in 0..2000 {
        let y = &g * &x;
        let norm = y.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm / x.norm();
        x = y / C::new(norm, 0.);
        if (next - est).abs() <= 1e-15 * next {
            est = next;
            break;
        }
        est = next;
    }
    est.sqrt()
}
