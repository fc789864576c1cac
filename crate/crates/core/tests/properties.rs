//! Randomised invariants across the public API.

use std::sync::OnceLock;

use proptest::prelude::*;

use bura_core::decomp::{extract_zeros_poles, pf_eval, to_partial_fractions, PartialFractionForm, ZeroPoleSet};
use bura_core::operators::{assemble, oracle_frac_apply, weighted_norm, OperatorKind, SpectralOracle};
use bura_core::remez::{compute_bura, RemezConfig};
use bura_core::solvers::{
    beta_accuracy_factor, bura_apply, bura_apply_product, complementary_pair_bound, shifted_solve, two_step_bound,
    QuadratureRule, SolveConfig, SolveMethod,
};
use bura_core::xnum::{cheb_to_monomial, dense_solve, monomial_to_cheb, poly_roots, ChebPoly, XScalar};

const PREC: u32 = 256;

fn forms() -> &'static (PartialFractionForm, ZeroPoleSet) {
    static CELL: OnceLock<(PartialFractionForm, ZeroPoleSet)> = OnceLock::new();
    CELL.get_or_init(|| {
        let a = compute_bura(0.5, 1, 5, 5, &RemezConfig::default()).unwrap();
        (to_partial_fractions(&a).unwrap(), extract_zeros_poles(&a).unwrap())
    })
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn decimal_strings_round_trip(v in -1e30f64..1e30, prec in 53u32..512) {
        let x = XScalar::from_f64(v, prec);
        let back = XScalar::parse_decimal(&x.to_decimal_string(), prec).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn chebyshev_monomial_round_trip(coeffs in prop::collection::vec(-10.0f64..10.0, 1..9)) {
        let p = ChebPoly::from_f64(&coeffs, PREC);
        let q = monomial_to_cheb(&cheb_to_monomial(&p));
        for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
            prop_assert!((a.to_f64() - b.to_f64()).abs() <= 1e-40_f64.max(1e-60 * a.to_f64().abs()));
        }
    }

    #[test]
    fn roots_of_a_product_are_recovered(mut roots in prop::collection::vec(-0.95f64..0.95, 1..7)) {
        roots.sort_by(f64::total_cmp);
        prop_assume!(roots.windows(2).all(|w| w[1] - w[0] > 1e-3));
        // prod (t - r_j), expanded in monomials of t.
        let mut mono = vec![XScalar::one(PREC)];
        for &r in &roots {
            let mut next = vec![XScalar::zero(PREC); mono.len() + 1];
            for (i, c) in mono.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * &XScalar::from_f64(r, PREC));
            }
            mono = next;
        }
        let p = monomial_to_cheb(&mono);
        let mut got: Vec<f64> = poly_roots(&p).unwrap().iter().map(|z| z.re.to_f64()).collect();
        got.sort_by(f64::total_cmp);
        prop_assert_eq!(got.len(), roots.len());
        for (g, r) in got.iter().zip(&roots) {
            prop_assert!((g - r).abs() < 1e-20, "{} vs {}", g, r);
        }
    }

    #[test]
    fn dense_solve_residual(n in 1usize..7, seed in any::<u64>()) {
        let mut s = seed;
        let mut rnd = || { s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5 };
        let m: Vec<Vec<XScalar>> = (0..n).map(|i| (0..n).map(|j| XScalar::from_f64(rnd() + if i == j { n as f64 } else { 0.0 }, PREC)).collect()).collect();
        let b: Vec<XScalar> = (0..n).map(|_| XScalar::from_f64(rnd(), PREC)).collect();
        let x = dense_solve(&m, &b).unwrap();
        for i in 0..n {
            let mut r = b[i].clone();
            for j in 0..n {
                r = &r - &(&m[i][j] * &x[j]);
            }
            prop_assert!(r.abs().to_f64() < 1e-60);
        }
    }

    #[test]
    fn operators_are_symmetric(kind in prop_oneof![
        Just(OperatorKind::Laplace1d), Just(OperatorKind::Laplace2d5pt), Just(OperatorKind::Laplace3d7ptJump)
    ], res in 3usize..9, seed in any::<u64>()) {
        let op = assemble(kind, res, 1e-3).unwrap();
        let n = op.n();
        let x: Vec<f64> = (0..n).map(|i| ((seed as usize + 7 * i) % 13) as f64 - 6.0).collect();
        let y: Vec<f64> = (0..n).map(|i| ((seed as usize / 3 + 5 * i) % 11) as f64 - 5.0).collect();
        let ax = op.apply(&x);
        let ay = op.apply(&y);
        let lhs: f64 = y.iter().zip(&ax).map(|(a, b)| a * b).sum();
        let rhs: f64 = x.iter().zip(&ay).map(|(a, b)| a * b).sum();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        // Positive definite on the sampled vector, spectrum inside (0, 1].
        let xax: f64 = x.iter().zip(&ax).map(|(a, b)| a * b).sum();
        let xx: f64 = x.iter().map(|a| a * a).sum();
        prop_assert!(xax > 0.0 && xax <= xx * (1.0 + 1e-12));
    }

    #[test]
    fn shifted_solvers_agree(n in 2usize..200, shift in -3.0f64..0.0, seed in any::<u64>()) {
        let op = assemble(OperatorKind::Laplace1d, n + 1, 1.0).unwrap();
        let b: Vec<f64> = (0..n).map(|i| (((seed >> (i % 60)) & 7) as f64) - 3.5).collect();
        prop_assume!(b.iter().any(|&v| v != 0.0));
        let direct = shifted_solve(&op, shift, &b, &SolveConfig::thomas()).unwrap();
        for m in [SolveMethod::Cg, SolveMethod::PcgJacobi, SolveMethod::PcgIc0] {
            let it = shifted_solve(&op, shift, &b, &SolveConfig::default().with_method(m)).unwrap();
            prop_assert!(it.rel_residual < 1e-10);
            prop_assert!(rel_diff(&it.x, &direct.x) < 1e-6, "{:?}", m);
        }
    }

    #[test]
    fn bura_bound_on_random_inputs(n in 4usize..300, seed in any::<u64>()) {
        let (pf, _) = forms();
        let op = assemble(OperatorKind::Laplace1d, n + 1, 1.0).unwrap();
        let oracle = SpectralOracle::for_operator(&op).unwrap();
        let f: Vec<f64> = (0..n).map(|i| (((seed.rotate_left(i as u32 % 64)) % 1000) as f64) / 500.0 - 1.0).collect();
        prop_assume!(f.iter().any(|&v| v != 0.0));
        let u_r = bura_apply(pf, &op, &f, &SolveConfig::thomas()).unwrap().u_r;
        let u = oracle_frac_apply(&oracle, -0.5, &f);
        let err: Vec<f64> = u_r.iter().zip(&u).map(|(a, b)| a - b).collect();
        for gamma in [0.0, 1.0, 2.0] {
            let lhs = weighted_norm(&oracle, gamma, &err);
            let rhs = pf.error * weighted_norm(&oracle, gamma - 2.0, &f);
            prop_assert!(lhs <= rhs * (1.0 + 1e-8), "gamma {}: {} > {}", gamma, lhs, rhs);
        }
    }

    #[test]
    fn eigenvector_error_is_the_scalar_error(n in 4usize..200, pick in 0.0f64..1.0) {
        let (pf, _) = forms();
        let op = assemble(OperatorKind::Laplace1d, n + 1, 1.0).unwrap();
        let oracle = SpectralOracle::for_operator(&op).unwrap();
        let i = ((pick * n as f64) as usize).min(n - 1);
        let psi = oracle.eigenvector(i);
        let lam = oracle.eigenvalue(i);
        let u_r = bura_apply(pf, &op, &psi, &SolveConfig::thomas()).unwrap().u_r;
        let err: Vec<f64> = u_r.iter().zip(&psi).map(|(a, p)| a - lam.powf(-0.5) * p).collect();
        let ratio = weighted_norm(&oracle, 1.0, &err) / weighted_norm(&oracle, -1.0, &psi);
        let scalar = (pf_eval(pf, lam) - lam.powf(-0.5)).abs() * lam;
        prop_assert!((ratio - scalar).abs() <= 1e-8 * scalar.max(1e-14), "{} vs {}", ratio, scalar);
    }

    #[test]
    fn partial_fraction_and_product_forms_agree(n in 4usize..300, seed in any::<u64>()) {
        let (pf, zp) = forms();
        let op = assemble(OperatorKind::Laplace1d, n + 1, 1.0).unwrap();
        let f: Vec<f64> = (0..n).map(|i| ((seed.wrapping_add(i as u64 * 2654435761) % 997) as f64) / 498.5 - 1.0).collect();
        prop_assume!(f.iter().any(|&v| v != 0.0));
        let a = bura_apply(pf, &op, &f, &SolveConfig::thomas()).unwrap().u_r;
        let b = bura_apply_product(zp, &op, &f, &SolveConfig::thomas()).unwrap().u_r;
        prop_assert!(rel_diff(&a, &b) < 1e-10);
    }

    #[test]
    fn bound_formulas(e1 in 0.0f64..0.5, e2 in 0.0f64..0.5, cond in 1.0f64..1e6, a1 in 0.05f64..0.95) {
        let pair = complementary_pair_bound(e1, e2);
        prop_assert!(pair <= e1 + e2 && pair >= e1.max(e2));
        let two = two_step_bound(e1, e2, a1, 1.0 - a1, cond);
        prop_assert!(two >= pair - 1e-15);
        prop_assert_eq!(beta_accuracy_factor(1, e1, cond), 1.0);
        prop_assert!(beta_accuracy_factor(3, e1, cond) >= beta_accuracy_factor(2, e1, cond));
    }

    #[test]
    fn quadrature_counts_cover_kq(alpha in 0.05f64..0.95, kq in 1.0f64..60.0) {
        let rule = QuadratureRule::from_kq(alpha, kq);
        prop_assert!(rule.system_count() as f64 >= kq + 1.0 - 1e-9);
        prop_assert_eq!(rule.terms().len(), rule.system_count());
    }
}
