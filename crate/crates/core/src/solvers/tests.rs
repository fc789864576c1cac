use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::decomp::{extract_zeros_poles, pf_eval, to_partial_fractions, PartialFractionForm, ZeroPoleSet};
use crate::operators::{assemble, oracle_frac_apply, weighted_norm, OperatorKind, SpectralOracle};
use crate::remez::{compute_bura, RationalApproximant, RemezConfig};

type Key = (u64, u32, usize, usize);

fn approximant(alpha: f64, beta: u32, m: usize, k: usize) -> RationalApproximant {
    static CACHE: OnceLock<Mutex<HashMap<Key, RationalApproximant>>> = OnceLock::new();
    let key = (alpha.to_bits(), beta, m, k);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(a) = cache.lock().unwrap().get(&key) {
        return a.clone();
    }
    let a = compute_bura(alpha, beta, m, k, &RemezConfig::default()).unwrap();
    cache.lock().unwrap().insert(key, a.clone());
    a
}

fn pf(alpha: f64, beta: u32, m: usize, k: usize) -> PartialFractionForm {
    to_partial_fractions(&approximant(alpha, beta, m, k)).unwrap()
}

fn zp(alpha: f64, m: usize, k: usize) -> ZeroPoleSet {
    extract_zeros_poles(&approximant(alpha, 1, m, k)).unwrap()
}

fn scalar_op(v: f64) -> SparseSpdOperator {
    SparseSpdOperator::from_triplets(1, vec![(0, 0, v)], OperatorKind::External, 1.0, f64::NAN, 1.0, vec![1])
}

fn identity(n: usize) -> SparseSpdOperator {
    let t = (0..n).map(|i| (i, i, 1.0)).collect();
    SparseSpdOperator::from_triplets(n, t, OperatorKind::External, 1.0, f64::NAN, 1.0, vec![n])
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    d / norm(b)
}

fn all_methods() -> [SolveConfig; 4] {
    [
        SolveConfig::thomas(),
        SolveConfig::default().with_method(SolveMethod::Cg),
        SolveConfig::default().with_method(SolveMethod::PcgJacobi),
        SolveConfig::default(),
    ]
}

#[test]
fn one_by_one() {
    for cfg in all_methods() {
        let s = shifted_solve(&scalar_op(1.0), 0.0, &[2.0], &cfg).unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-15);
    }
}

#[test]
fn two_by_two_hand_solve() {
    let a = assemble(OperatorKind::Laplace1d, 3, 1.0).unwrap();
    for cfg in all_methods() {
        let s = shifted_solve(&a, 0.0, &[1.0, 0.0], &cfg).unwrap();
        assert!((s.x[0] - 8.0 / 3.0).abs() < 1e-12, "{:?}", cfg.method);
        assert!((s.x[1] - 4.0 / 3.0).abs() < 1e-12);
        assert!(s.rel_residual < 1e-12);
    }
}

#[test]
fn input_errors() {
    let a2 = assemble(OperatorKind::Laplace2d5pt, 4, 1.0).unwrap();
    let b = vec![1.0; a2.n()];
    assert_eq!(shifted_solve(&a2, 0.0, &b, &SolveConfig::thomas()), Err(SolverError::MethodMismatch));
    assert!(matches!(shifted_solve(&a2, 0.5, &b, &SolveConfig::default()), Err(SolverError::PositiveShift(_))));
    assert!(matches!(shifted_solve(&a2, 0.0, &b[1..], &SolveConfig::default()), Err(SolverError::Dimension { .. })));
    let bad = SolveConfig::default().with_tol(0.0);
    assert!(matches!(shifted_solve(&a2, 0.0, &b, &bad), Err(SolverError::InvalidInput(_))));
    let capped = SolveConfig { method: SolveMethod::Cg, max_iter: Some(2), ..SolveConfig::default() };
    let a1 = assemble(OperatorKind::Laplace1d, 64, 1.0).unwrap();
    assert!(matches!(
        shifted_solve(&a1, 0.0, &vec![1.0; 63], &capped),
        Err(SolverError::MaxIterExceeded { iterations: 2, .. })
    ));
}

#[test]
fn shift_improves_conditioning() {
    let a = assemble(OperatorKind::Laplace1d, 1024, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b: Vec<f64> = (0..a.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let cfg = SolveConfig::default().with_method(SolveMethod::Cg);
    let plain = shifted_solve(&a, 0.0, &b, &cfg).unwrap();
    let shifted = shifted_solve(&a, -3.21292, &b, &cfg).unwrap();
    assert!(shifted.iterations < plain.iterations, "{} vs {}", shifted.iterations, plain.iterations);
}

#[test]
fn krylov_methods_agree_in_2d() {
    let a = assemble(OperatorKind::Laplace2d5pt, 32, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let b: Vec<f64> = (0..a.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let oracle = SpectralOracle::for_operator(&a).unwrap();
    for shift in [0.0, -1e-3, -0.7] {
        let exact = oracle.apply_fn(&b, |l| 1.0 / (l - shift));
        let mut iters = Vec::new();
        for cfg in &all_methods()[1..] {
            let s = shifted_solve(&a, shift, &b, cfg).unwrap();
            assert!(rel_diff(&s.x, &exact) < 1e-9, "{:?} {shift}", cfg.method);
            iters.push(s.iterations);
        }
        assert!(iters[2] <= iters[0], "{iters:?}");
    }
}

#[test]
fn jump_operator_solves() {
    let a = assemble(OperatorKind::Laplace3d7ptJump, 12, 1e-3).unwrap();
    let b = vec![1.0; a.n()];
    let s = shifted_solve(&a, 0.0, &b, &SolveConfig::default()).unwrap();
    assert!(s.rel_residual < 1e-10);
    let j = shifted_solve(&a, 0.0, &b, &SolveConfig::default().with_method(SolveMethod::PcgJacobi)).unwrap();
    assert!(rel_diff(&s.x, &j.x) < 1e-8);
}

#[test]
fn bura_apply_on_scalar_one() {
    let p = pf(0.5, 1, 5, 5);
    let r = bura_apply(&p, &scalar_op(1.0), &[1.0], &SolveConfig::default()).unwrap();
    assert!((r.u_r[0] - (1.0 - p.error)).abs() < 1e-14);
    assert!((r.u_r[0] - 0.99973104).abs() < 1e-8);
    assert_eq!(r.per_system.len(), p.system_count());
}

#[test]
fn eigenvector_input_reduces_to_the_scalar_residual() {
    let a = assemble(OperatorKind::Laplace1d, 4, 1.0).unwrap();
    let oracle = SpectralOracle::for_operator(&a).unwrap();
    for alpha in [0.25, 0.5, 0.75] {
        let p = pf(alpha, 1, 5, 5);
        let f = oracle.eigenvector(1);
        let r = bura_apply(&p, &a, &f, &SolveConfig::thomas()).unwrap();
        let u = oracle_frac_apply(&oracle, -alpha, &f);
        let err: Vec<f64> = r.u_r.iter().zip(&u).map(|(x, y)| x - y).collect();
        let ratio = weighted_norm(&oracle, 1.0, &err) / weighted_norm(&oracle, -1.0, &f);
        let want = (0.5 * pf_eval(&p, 0.5) - 0.5f64.powf(1.0 - alpha)).abs();
        assert!((ratio / want - 1.0).abs() < 1e-9, "{alpha}: {ratio} vs {want}");
    }
}

#[test]
fn two_forms_agree() {
    let a = assemble(OperatorKind::Laplace1d, 256, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f: Vec<f64> = (0..a.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    for alpha in [0.25, 0.5, 0.75] {
        let sum = bura_apply(&pf(alpha, 1, 5, 5), &a, &f, &SolveConfig::thomas()).unwrap();
        let prod = bura_apply_product(&zp(alpha, 5, 5), &a, &f, &SolveConfig::thomas()).unwrap();
        assert!(rel_diff(&prod.u_r, &sum.u_r) < 1e-10, "{alpha}");
    }
}

#[test]
fn product_form_special_cases() {
    let z = zp(0.5, 5, 5);
    let f = [1.0, -2.0, 0.5, 3.0];
    let r = bura_apply_product(&z, &identity(4), &f, &SolveConfig::default()).unwrap();
    let e = approximant(0.5, 1, 5, 5).error_f64();
    for (u, fi) in r.u_r.iter().zip(f) {
        assert!((u - (1.0 - e) * fi).abs() < 1e-13);
    }
    // k = 0: u = c0 A^(-1) f
    let z0 = zp(0.5, 0, 0);
    let a = assemble(OperatorKind::Laplace1d, 3, 1.0).unwrap();
    let r = bura_apply_product(&z0, &a, &[1.0, 0.0], &SolveConfig::thomas()).unwrap();
    assert!((r.u_r[0] - 0.5 * 8.0 / 3.0).abs() < 1e-12);
}

#[test]
fn apply_is_deterministic() {
    let a = assemble(OperatorKind::Laplace2d5pt, 16, 1.0).unwrap();
    let f = vec![1.0; a.n()];
    let p = pf(0.5, 1, 5, 5);
    let r1 = bura_apply(&p, &a, &f, &SolveConfig::default()).unwrap();
    let r2 = bura_apply(&p, &a, &f, &SolveConfig::default()).unwrap();
    assert_eq!(r1.u_r, r2.u_r);
}

#[test]
fn beta_two_apply_matches_scalar() {
    let p = pf(0.5, 2, 5, 4);
    let r = bura_apply(&p, &scalar_op(0.3), &[1.0], &SolveConfig::default()).unwrap();
    assert!((r.u_r[0] - pf_eval(&p, 0.3)).abs() < 1e-12 * pf_eval(&p, 0.3));
    assert_eq!(r.per_system.iter().filter(|s| s.shift == 0.0).count(), 2);
}

#[test]
fn multi_step_examples() {
    let a = assemble(OperatorKind::Laplace1d, 32, 1.0).unwrap();
    let f = vec![1.0; a.n()];
    let p = pf(0.25, 1, 5, 5);
    let one = multi_step_apply(std::slice::from_ref(&p), 0.25, &a, &f, &SolveConfig::thomas()).unwrap();
    let plain = bura_apply(&p, &a, &f, &SolveConfig::thomas()).unwrap();
    assert_eq!(one.u_r, plain.u_r);
    assert!(matches!(
        multi_step_apply(&[p.clone(), p.clone()], 0.75, &a, &f, &SolveConfig::thomas()),
        Err(SolverError::InvalidInput(_))
    ));

    // Two quarter steps, N = 16: eigen-max ratio 9.4745e-5.
    let a = assemble(OperatorKind::Laplace1d, 17, 1.0).unwrap();
    let oracle = SpectralOracle::for_operator(&a).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..oracle.len() {
        let f = oracle.eigenvector(i);
        let r = multi_step_apply(&[p.clone(), p.clone()], 0.5, &a, &f, &SolveConfig::thomas()).unwrap();
        let u = oracle_frac_apply(&oracle, -0.5, &f);
        let err: Vec<f64> = r.u_r.iter().zip(&u).map(|(x, y)| x - y).collect();
        worst = worst.max(weighted_norm(&oracle, 1.0, &err) / weighted_norm(&oracle, -1.0, &f));
    }
    assert!((worst / 9.4745e-5 - 1.0).abs() < 5e-3, "{worst}");
}

#[test]
fn quadrature_counts() {
    let r = QuadratureRule::new(0.5, 1.0 / 3.0);
    assert_eq!((r.m_neg, r.m_pos, r.system_count()), (45, 45, 91));
    assert_eq!(QuadratureRule::from_kq(0.75, 6.0).system_count(), 8);
    assert_eq!(QuadratureRule::from_kq(0.5, 7.0).system_count(), 9);
    assert_eq!(QuadratureRule::from_kq(0.5, 8.0).system_count(), 9);
    assert_eq!(QuadratureRule::from_kq(0.25, 9.0).system_count(), 11);
    // Ten systems are out of reach for alpha = 1/4.
    assert_eq!(kprime_for_system_count(0.25, 10), None);
    let k = kprime_for_system_count(0.5, 9).unwrap();
    assert_eq!(QuadratureRule::new(0.5, k).system_count(), 9);
    assert!(k > kprime_from_kq(0.5, 8.0) && k < kprime_from_kq(0.5, 6.0));
}

#[test]
fn quadrature_converges_to_the_fractional_power() {
    let a = assemble(OperatorKind::Laplace1d, 64, 1.0).unwrap();
    let oracle = SpectralOracle::for_operator(&a).unwrap();
    let f = vec![1.0; a.n()];
    for alpha in [0.25, 0.5, 0.75] {
        let exact: Vec<f64> = oracle_frac_apply(&oracle, -alpha, &f).iter().map(|x| x * a.scale.powf(-alpha)).collect();
        let (u, count) = quadrature_apply(&a, &f, alpha, 1.0 / 3.0, &SolveConfig::thomas()).unwrap();
        assert!(count > 50);
        assert!(rel_diff(&u, &exact) < 1e-6, "{alpha}: {}", rel_diff(&u, &exact));
    }
    assert!(quadrature_apply(&a, &f, 0.5, 0.0, &SolveConfig::thomas()).is_err());
}

#[test]
fn bound_examples() {
    let e = 2.6896e-4;
    let b = multi_step_bound(BoundKind::ComplementaryPair, &[e, e], &[0.5, 0.5], 1.0).unwrap();
    assert!((b / 5.3784e-4 - 1.0).abs() < 1e-4);
    let b = multi_step_bound(BoundKind::ComplementaryPair, &[2.7348e-3, 2.8676e-5], &[0.75, 0.25], 1.0).unwrap();
    assert!((b / 2.7634e-3 - 1.0).abs() < 1e-4);
    assert_eq!(multi_step_bound(BoundKind::ConditionDependent, &[0.0, 0.0], &[0.5, 0.25], 1e6), Ok(0.0));
    assert_eq!(multi_step_bound(BoundKind::ConditionDependent, &[0.0; 3], &[0.25; 3], 1e6), Ok(0.0));
    assert!(matches!(
        multi_step_bound(BoundKind::ConditionDependent, &[1e-3], &[0.5], 10.0),
        Err(BoundError::BadArity { .. })
    ));
    assert!(matches!(
        multi_step_bound(BoundKind::ComplementaryPair, &[1e-3, 1e-3], &[0.5, 0.25], 1.0),
        Err(BoundError::NotComplementary(_))
    ));
    let two = two_step_bound(1e-4, 2e-4, 0.25, 0.5, 1e4);
    assert!((two - (2e-4 * 10.0 + 1e-4 * 100.0 + 2e-8 * 1e4)).abs() < 1e-15);

    assert_eq!(beta_accuracy_bound(1, 0.3, 1e9), 0.3);
    let b2 = beta_accuracy_bound(2, 1e-12, 1e6);
    assert!((b2 / 1.000001e-6 - 1.0).abs() < 1e-9);
    assert_eq!(beta_accuracy_factor(4, 0.0, 1.0), 4.0);
}
