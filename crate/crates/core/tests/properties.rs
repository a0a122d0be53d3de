use std::sync::Arc;

use proptest::prelude::*;

use sepmult::classify::{separating_test, LinearMap, Status};
use sepmult::groups::{builtin_group, cyclic, enumerate_characters, FiniteGroup};
use sepmult::linalg::{
    c64, hermitian_eig, polar_decompose, schatten_norm, support_projection, ComplexMatrix, C64,
};
use sepmult::sample::{
    gaussian_vec, random_hermitian, random_matrix, random_unitary, rng_from_seed, unimodular,
};
use sepmult::schur::{rank_one_unimodular_factor, SchurSymbol};
use sepmult::vna::{is_disjoint, random_disjoint_pair, FourierMultiplier, GroupAlgebraElement};

const GROUP_NAMES: [&str; 6] = [
    "cyclic(3)",
    "cyclic(6)",
    "cyclic(2)^2",
    "symmetric(3)",
    "dihedral(4)",
    "quaternion8",
];

fn group(idx: usize) -> Arc<FiniteGroup> {
    Arc::new(builtin_group(GROUP_NAMES[idx % GROUP_NAMES.len()]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schatten_unitary_invariance(seed in any::<u64>(), n in 1usize..7, p in 1.0f64..6.0) {
        let mut rng = rng_from_seed(seed);
        let a = random_matrix(&mut rng, n);
        let u = random_unitary(&mut rng, n);
        let v = random_unitary(&mut rng, n);
        let lhs = schatten_norm(&(&(&u * &a) * &v), p, 1.0).unwrap();
        let rhs = schatten_norm(&a, p, 1.0).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn schatten_decreases_in_p(seed in any::<u64>(), n in 1usize..7, p in 1.0f64..4.0, dp in 0.0f64..4.0) {
        let a = random_matrix(&mut rng_from_seed(seed), n);
        let lo = schatten_norm(&a, p + dp, 1.0).unwrap();
        let hi = schatten_norm(&a, p, 1.0).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn hoelder(seed in any::<u64>(), n in 1usize..7, p in 1.0f64..8.0, q in 1.0f64..8.0) {
        let r = 1.0 / (1.0 / p + 1.0 / q);
        prop_assume!(r >= 1.0);
        let mut rng = rng_from_seed(seed);
        let a = random_matrix(&mut rng, n);
        let b = random_matrix(&mut rng, n);
        let w = 1.0 / n as f64;
        let lhs = schatten_norm(&(&a * &b), r, w).unwrap();
        let rhs = schatten_norm(&a, p, w).unwrap() * schatten_norm(&b, q, w).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 1usize..10) {
        let h = random_hermitian(&mut rng_from_seed(seed), n);
        let e = hermitian_eig(&h, 1e-9).unwrap();
        prop_assert!(e.reconstruct().distance(&h) <= 1e-12 * h.frobenius_norm().max(1.0));
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let v = &e.eigenvectors;
        prop_assert!((&v.adjoint() * v).distance(&ComplexMatrix::identity(n)) < 1e-12);
    }

    #[test]
    fn polar_of_rank_deficient(seed in any::<u64>(), n in 2usize..7, rank in 0usize..7) {
        let mut rng = rng_from_seed(seed);
        let rank = rank.min(n);
        let x = random_matrix(&mut rng, n);
        let proj = ComplexMatrix::from_real_diag(&(0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect::<Vec<_>>());
        let a = &(&x * &proj) * &random_unitary(&mut rng, n);
        let pd = polar_decompose(&a, 1e-9).unwrap();
        let scale = a.frobenius_norm().max(1.0);
        prop_assert!((&pd.w * &pd.b).distance(&a) <= 1e-10 * scale);
        prop_assert!(pd.b.hermitian_defect() <= 1e-12 * scale);
        if a.frobenius_norm() > 0.0 {
            let s = support_projection(&pd.b, 1e-9).unwrap();
            prop_assert!((&pd.w.adjoint() * &pd.w).distance(&s) < 1e-9);
        }
    }

    #[test]
    fn matrix_json_round_trip(seed in any::<u64>(), n in 1usize..5) {
        let a = random_matrix(&mut rng_from_seed(seed), n);
        let back: ComplexMatrix = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn cyclic_character_count(n in 1usize..13) {
        prop_assert_eq!(enumerate_characters(&cyclic(n).unwrap()).unwrap().len(), n);
    }

    #[test]
    fn fourier_multipliers_compose(seed in any::<u64>(), g in 0usize..6) {
        let g = group(g);
        let mut rng = rng_from_seed(seed);
        let n = g.order();
        let phi = gaussian_vec(&mut rng, n);
        let psi = gaussian_vec(&mut rng, n);
        let x = GroupAlgebraElement::random(g.clone(), &mut rng);
        let mphi = FourierMultiplier::new(g.clone(), phi.clone()).unwrap();
        let mpsi = FourierMultiplier::new(g.clone(), psi.clone()).unwrap();
        let product: Vec<C64> = phi.iter().zip(&psi).map(|(a, b)| a * b).collect();
        let both = FourierMultiplier::new(g, product).unwrap();
        let lhs = mphi.apply(&mpsi.apply(&x).unwrap()).unwrap();
        let rhs = both.apply(&x).unwrap();
        prop_assert!(lhs.matrix().distance(rhs.matrix()) < 1e-12 * x.matrix().frobenius_norm().max(1.0));
    }

    #[test]
    fn random_pairs_are_disjoint(seed in any::<u64>(), g in 0usize..6) {
        let (a, b) = random_disjoint_pair(&group(g), seed).unwrap();
        prop_assert!(is_disjoint(a.matrix(), b.matrix(), 1e-10).unwrap());
        prop_assert!(a.matrix().frobenius_norm() > 0.0 && b.matrix().frobenius_norm() > 0.0);
    }

    #[test]
    fn scaled_characters_have_no_witness(seed in 0u64..1000, g in 0usize..6, k in 0usize..8, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let g = group(g);
        let chars = enumerate_characters(&g).unwrap();
        let psi = &chars[k % chars.len()];
        let phi: Vec<C64> = psi.values().iter().map(|v| c64(re, im) * v).collect();
        let map = LinearMap::fourier(&FourierMultiplier::new(g, phi).unwrap());
        prop_assert_eq!(separating_test(&map, 2.0, 20, seed, 1e-9).unwrap().status, Status::Separating);
    }

    #[test]
    fn separation_verdict_ignores_p(seed in 0u64..1000, n in 2usize..5, p in 1.0f64..8.0) {
        let m = SchurSymbol::new(random_matrix(&mut rng_from_seed(seed), n));
        let map = LinearMap::schur(&m);
        let at_p = separating_test(&map, p, 10, seed, 1e-9).unwrap().status;
        let at_two = separating_test(&map, 2.0, 10, seed, 1e-9).unwrap().status;
        prop_assert_eq!(at_p, at_two);
    }

    #[test]
    fn rank_one_round_trip(seed in any::<u64>(), n in 1usize..7, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let mut rng = rng_from_seed(seed);
        let c = c64(re, im);
        let alpha: Vec<C64> = (0..n).map(|_| unimodular(&mut rng)).collect();
        let beta: Vec<C64> = (0..n).map(|_| unimodular(&mut rng)).collect();
        let m = SchurSymbol::new(ComplexMatrix::from_fn(n, |i, j| c * alpha[i] * beta[j]));
        let cert = rank_one_unimodular_factor(&m, 1e-9).unwrap();
        prop_assert!(cert.reconstruct().distance(m.matrix()) <= 1e-12 * c.norm().max(1.0) * n as f64);
    }
}
