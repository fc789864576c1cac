use super::*;
use crate::remez::{compute_bura, RemezConfig};

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got / want - 1.0).abs() <= rel
}

#[test]
fn model_values() {
    // printed as 3.60E-3 in the literature; the formula itself gives 3.558E-3
    assert!(close(error_model(0.75, 1, 5), 3.558e-3, 1e-3));
    assert!(close(error_model(0.75, 1, 7), 9.82e-4, 1e-2));
    assert!(close(error_model(0.5, 1, 7), 6.28e-5, 1e-2));
    assert!(close(error_model(0.25, 1, 5), 4.16e-5, 1e-2));
}

#[test]
fn single_inverse_power() {
    let pf = PartialFractionForm {
        alpha: 0.5,
        beta: 1,
        m: 0,
        k: 0,
        c0: vec![1.0],
        c: vec![],
        d: vec![],
        error: 0.0,
        c0_full: vec![],
        c_full: vec![],
        d_full: vec![],
        error_full: XScalar::zero(53),
    };
    assert_eq!(pf_eval(&pf, 0.5), 2.0);
}

#[test]
fn constant_has_no_roots() {
    let a = compute_bura(0.5, 1, 0, 0, &RemezConfig::default()).unwrap();
    let zp = extract_zeros_poles(&a).unwrap();
    assert!(zp.zeros.is_empty() && zp.poles.is_empty());
    let pf = to_partial_fractions(&a).unwrap();
    assert!(close(pf.c0[0], 0.5, 1e-14));
}

#[test]
fn half_five_five() {
    let a = compute_bura(0.5, 1, 5, 5, &RemezConfig::default()).unwrap();
    let zp = extract_zeros_poles(&a).unwrap();
    let want = [-1.22320e-5, -6.62106e-4, -1.27955e-2, -1.62631e-1, -3.21292];
    for (d, w) in zp.poles_f64().iter().zip(want) {
        assert!(close(*d, w, 1e-4), "{d} vs {w}");
    }
    let pf = to_partial_fractions(&a).unwrap();
    assert!(close(pf.c0[0], 2.68957e-4, 1e-4));
    assert!(close(pf.c[0], 5.58483e-3, 1e-4));
    assert!(close(pf.c[4], 2.51057, 1e-4));
    assert!(close(pf_eval(&pf, 1.0), 1.0 - a.error_f64(), 1e-13));

    // all three representations agree on a log grid
    for i in 0..=200 {
        let t = XScalar::from_f64(10f64.powf(-8.0 + 8.0 * i as f64 / 200.0), 256);
        let direct = a.eval_t(&t) / t.powi(1);
        let rel_pf = ((pf_eval_full(&pf, &t) - &direct) / &direct).abs().to_f64();
        let rel_prod = ((zp.eval(&t) - a.eval_t(&t)) / a.eval_t(&t)).abs().to_f64();
        assert!(rel_pf < 1e-12 && rel_prod < 1e-10, "t={t:?} {rel_pf} {rel_prod}");
    }
}

#[test]
fn three_quarter_smallest_pole() {
    let a = compute_bura(0.75, 1, 5, 5, &RemezConfig::default()).unwrap();
    let zp = extract_zeros_poles(&a).unwrap();
    assert!(close(*zp.poles_f64().last().unwrap(), -8.47443e-1, 1e-4));
}

#[test]
fn beta_two_inverse_powers() {
    let a = compute_bura(0.25, 2, 7, 6, &RemezConfig::default()).unwrap();
    let pf = to_partial_fractions(&a).unwrap();
    assert!(close(pf.c0[0], 7.38825e-4, 1e-4), "{:?}", pf.c0);
    assert!(close(pf.c0[1], -1.8043e-8, 1e-4), "{:?}", pf.c0);
    assert!(close(pf.c0[1].abs(), a.error_f64(), 1e-12));
}

#[test]
fn three_quarter_seven_last_fraction() {
    let a = compute_bura(0.75, 1, 7, 7, &RemezConfig::default()).unwrap();
    let pf = to_partial_fractions(&a).unwrap();
    // The published coefficient tables for this case come from a slightly
    // different run (its printed error disagrees at the 0.4% level), so only
    // percent agreement is meaningful.
    assert!(close(pf.c[6], 8.94453e-1, 1e-2), "{:?}", pf.c);
    assert!(close(pf.d[6], -1.30039, 1e-2), "{:?}", pf.d);
}

#[test]
fn quarter_five_sums_to_one_minus_error() {
    let a = compute_bura(0.25, 1, 5, 5, &RemezConfig::default()).unwrap();
    let pf = to_partial_fractions(&a).unwrap();
    assert!(close(pf_eval(&pf, 1.0), 1.0 - 2.8676e-5, 1e-9));
}

#[test]
fn cache_round_trip() {
    let a = compute_bura(0.5, 1, 3, 3, &RemezConfig::default()).unwrap();
    let pf = to_partial_fractions(&a).unwrap();
    let json = serde_json::to_string(&pf).unwrap();
    let back: PartialFractionForm = serde_json::from_str(&json).unwrap();
    assert_eq!(back.c, pf.c);
    assert_eq!(back.d_full, pf.d_full);
}
