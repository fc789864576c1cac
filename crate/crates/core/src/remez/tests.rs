use super::*;

fn x(v: f64) -> XScalar {
    XScalar::from_f64(v, DEFAULT_PRECISION)
}

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got / want - 1.0).abs() <= rel
}

#[test]
fn constant_fit_levels_the_endpoints() {
    let cfg = RemezConfig::default();
    let a = compute_bura(0.5, 1, 0, 0, &cfg).unwrap();
    assert!((a.error_f64() - 0.5).abs() < 1e-12);
    assert!((a.num.coeffs()[0].to_f64() - 0.5).abs() < 1e-12);
    assert_eq!(a.extreme_points.len(), 2);
}

#[test]
fn leveled_two_point_system() {
    let cfg = RemezConfig::default();
    let pts = vec![x(-1.0), x(1.0)];
    let target = Target::new(0.3, 1, cfg.precision_bits);
    let f: Vec<XScalar> = pts.iter().map(|s| target.eval(s)).collect();
    let prev = ChebRational { num: ChebPoly::from_f64(&[0.0], 256), den: ChebPoly::from_f64(&[1.0], 256) };
    let (r, e) = solve_leveled_system(&pts, &f, &x(0.1), &prev, &cfg).unwrap();
    assert!((e.to_f64() - 0.5).abs() < 1e-30);
    assert!((r.num.coeffs()[0].to_f64() - 0.5).abs() < 1e-30);
}

#[test]
fn linear_fit_of_sqrt_matches_brute_force() {
    // Best linear approximation of sqrt(t) on [0, 1] is t + 1/8. The public
    // entry point refuses m >= k + beta, so drive the exchange directly.
    let cfg = RemezConfig::default();
    let target = Target::new(0.5, 1, cfg.precision_bits);
    let (pts, r0) = reference::initialize_with(&target, 1, 0, SeedReference::Uniform, &cfg).unwrap();
    let a = finish(0.5, 1, 1, 0, run_from(&target, pts, r0, &cfg).unwrap(), &cfg);
    assert!((a.error_f64() - 0.125).abs() < 1e-12, "{}", a.error_f64());
    let n = 200_000;
    let grid_max = (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            a.residual_t(&x(t)).to_f64().abs()
        })
        .fold(0.0, f64::max);
    assert!((grid_max - a.error_f64()).abs() < 1e-9);
    assert!((a.extreme_points[1].to_f64() - 0.25).abs() < 1e-6);
}

#[test]
fn seeds() {
    let u = uniform_reference(4, 64);
    let want = [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0];
    for (p, w) in u.iter().zip(want) {
        assert!((p.to_f64() - w).abs() < 1e-15);
    }
    let g = geometric_reference(4, 10.0, 64);
    let want = [-1.0, -0.98, -0.8, 1.0];
    for (p, w) in g.iter().zip(want) {
        assert!((p.to_f64() - w).abs() < 1e-15);
    }
}

#[test]
fn initial_reference_alternates() {
    let cfg = RemezConfig::default();
    let (pts, _) = initialize_reference(0.5, 1, 0, 0, &cfg).unwrap();
    assert_eq!(pts.iter().map(XScalar::to_f64).collect::<Vec<_>>(), vec![-1.0, 1.0]);

    let (pts, r0) = initialize_reference(0.25, 1, 3, 3, &cfg).unwrap();
    assert_eq!(pts.len(), 8);
    let target = Target::new(0.25, 1, cfg.precision_bits);
    let signs: Vec<i32> = pts.iter().map(|s| (target.eval(s) - r0.eval(s)).signum_i32()).collect();
    assert!(signs.windows(2).all(|w| w[0] == -w[1]), "{signs:?}");
}

#[test]
fn rejects_bad_input() {
    let cfg = RemezConfig::default();
    assert!(matches!(compute_bura(1.0, 1, 2, 2, &cfg), Err(RemezError::InvalidInput(_))));
    assert!(matches!(compute_bura(0.5, 0, 2, 2, &cfg), Err(RemezError::InvalidInput(_))));
    assert!(matches!(compute_bura(0.5, 1, 3, 2, &cfg), Err(RemezError::InvalidInput(_))));
    let bad = RemezConfig { delta_rel: 1.5, ..RemezConfig::default() };
    assert!(matches!(compute_bura(0.5, 1, 2, 2, &bad), Err(RemezError::InvalidInput(_))));
}

#[test]
fn diagonal_five_half() {
    let cfg = RemezConfig::default();
    let a = compute_bura(0.5, 1, 5, 5, &cfg).unwrap();
    let e = a.error_f64();
    assert!(close(e, 2.6896e-4, 1e-4), "{e}");

    // r(0) = E and r(1) = 1 - E
    let r0 = a.eval_t(&x(0.0)).to_f64();
    let r1 = a.eval_t(&x(1.0)).to_f64();
    assert!(close(r0, e, 1e-6));
    assert!(close(r1, 1.0 - e, 1e-12));

    // Equioscillation at the returned points.
    let pts = &a.extreme_points;
    assert_eq!(pts.len(), 12);
    assert!(pts[0].is_zero() && pts[11] == 1.0);
    let mut prev = 0;
    for (i, t) in pts.iter().enumerate() {
        let res = a.residual_t(t);
        let sg = res.signum_i32();
        assert_eq!(sg, if i % 2 == 0 { -1 } else { 1 });
        assert_ne!(sg, prev);
        prev = sg;
        assert!(close(res.abs().to_f64(), e, 1e-6));
    }
}

#[test]
fn second_extreme_point_for_three_quarters() {
    let a = compute_bura(0.75, 1, 5, 5, &RemezConfig::default()).unwrap();
    let t1 = a.extreme_points[1].to_f64();
    assert!(t1 > 2e-9 && t1 < 4e-9, "{t1}");
}
