mod common;

use common::{c, dense, in_disk, jordan_seed, random_matrix, random_partition, rng, similarity, sorted_desc, C};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use sno_core::{
    eigenvalues, gershgorin_disks, lex_compare, nilpotent_compare, nilpotent_rank_cert,
    perturbed_radius_bound, robust_spectral_cert, spectral_cert, weak_majorize, CertificateMode,
    CertificateStatus, DenseMatrix, Partition, Tolerances,
};
use std::cmp::Ordering;

const GAMMAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Diagonally dominant matrix: spread-out diagonal plus small off-diagonal
/// coupling.
fn dominant(rng: &mut impl Rng, n: usize, centre: C, coupling: f64) -> DMatrix<C> {
    let mut m = random_matrix(rng, n, coupling);
    for i in 0..n {
        m[(i, i)] = centre + c(3.0 * i as f64, 0.0) + in_disk(rng, 1.0);
    }
    m
}

fn sorted_pairwise_le(a: &DenseMatrix, b: &DenseMatrix) -> bool {
    let la = sorted_desc(&eigenvalues(a).unwrap());
    let lb = sorted_desc(&eigenvalues(b).unwrap());
    la.iter()
        .zip(&lb)
        .all(|(x, y)| lex_compare(*x, *y, 1e-9).unwrap() != Ordering::Greater)
}

fn perturb(rng: &mut impl Rng, m: &DMatrix<C>, eps: f64) -> DenseMatrix {
    let n = m.nrows();
    dense(DMatrix::from_fn(n, n, |i, j| {
        let r = eps * rng.random::<f64>();
        m[(i, j)] + C::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
    }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_lie_in_the_disk_union(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=8);
        let a = dense(random_matrix(&mut r, n, 1.0));
        let ev = eigenvalues(&a).unwrap();
        for gamma in GAMMAS {
            let disks = gershgorin_disks(&a, gamma).unwrap();
            for z in &ev {
                prop_assert!(disks.iter().any(|d| d.contains(*z, 1e-8)), "γ={gamma} λ={z}");
            }
        }
    }

    #[test]
    fn certified_pairs_are_ordered(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=6);
        let a = dense(dominant(&mut r, n, c(-2.0, 0.0), 0.2));
        let shift = c(r.random_range(0.0..4.0), r.random_range(-1.0..1.0));
        let b = dense(dominant(&mut r, n, c(-2.0, 0.0) + shift, 0.2));
        for gamma in GAMMAS {
            let cert = spectral_cert(&a, &b, gamma).unwrap();
            prop_assert_eq!(cert.checks.len(), n);
            if cert.status == CertificateStatus::Certified {
                prop_assert!(sorted_pairwise_le(&a, &b));
                let v = weak_majorize(&eigenvalues(&a).unwrap(), &eigenvalues(&b).unwrap(), 1e-9).unwrap();
                prop_assert!(v.relation.holds_le());
            }
        }
    }

    #[test]
    fn radius_bound_grows_with_eps(seed in any::<u64>(), e1 in 0.0..1.0f64, e2 in 0.0..1.0f64) {
        let mut r = rng(seed);
        let n = r.random_range(1..=6);
        let a = dense(random_matrix(&mut r, n, 1.0));
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        for gamma in GAMMAS {
            let exact: Vec<f64> = gershgorin_disks(&a, gamma).unwrap().iter().map(|d| d.radius).collect();
            prop_assert_eq!(perturbed_radius_bound(&a, gamma, 0.0).unwrap(), exact);
            let rl = perturbed_radius_bound(&a, gamma, lo).unwrap();
            let rh = perturbed_radius_bound(&a, gamma, hi).unwrap();
            prop_assert!(rl.iter().zip(&rh).all(|(x, y)| x <= y));
        }
    }

    #[test]
    fn robust_certificates_survive_perturbation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(1..=5);
        let eps = r.random_range(0.0..0.1);
        let a = dominant(&mut r, n, c(-3.0, 0.0), 0.1);
        let gap = r.random_range(1.0..3.0);
        let b = dominant(&mut r, n, c(-3.0 + gap, 0.0), 0.1);
        let cert = robust_spectral_cert(&dense(a.clone()), &dense(b.clone()), 0.5, eps, eps, CertificateMode::RobustNominal).unwrap();
        if cert.status.is_certified() {
            for _ in 0..20 {
                prop_assert!(sorted_pairwise_le(&perturb(&mut r, &a, eps), &perturb(&mut r, &b, eps)));
            }
        }
    }

    #[test]
    fn rank_certificate_matches_seed_dominance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sites = [c(-0.5, 0.0), c(-1.5, 1.0), c(0.5, -1.0)];
        let k = r.random_range(1..=3);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for lambda in sites.iter().take(k) {
            let w = r.random_range(1..=3);
            left.push((*lambda, random_partition(&mut r, w)));
            right.push((*lambda, random_partition(&mut r, w)));
        }
        let n: usize = left.iter().map(|(_, p)| p.iter().sum::<usize>()).sum();
        let (p, p_inv, _) = similarity(&mut r, n, 20.0);
        let (q, q_inv, _) = similarity(&mut r, n, 20.0);
        let a = dense(&p * jordan_seed(&left) * &p_inv);
        let b = dense(&q * jordan_seed(&right) * &q_inv);
        let tol = Tolerances { cluster_tol: Some(0.3), ..Tolerances::default() };
        let cert = nilpotent_rank_cert(&a, &b, &tol).unwrap();

        // seeds listed in descending lex order of their eigenvalues
        let order = |v: &[(C, Vec<usize>)]| -> Vec<Partition> {
            let mut v = v.to_vec();
            v.sort_by(|x, y| y.0.re.total_cmp(&x.0.re).then(y.0.im.total_cmp(&x.0.im)));
            v.into_iter().map(|(_, p)| Partition::new(p).unwrap()).collect()
        };
        let expected = nilpotent_compare(&order(&left), &order(&right));
        prop_assert_eq!(cert.status.is_certified(), expected.relation.holds_le());
        prop_assert_eq!(cert.witness, expected.witness);
    }
}
