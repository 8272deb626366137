use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use permuton_core::exponents::*;

/// Tanh-sinh rule on `(a, b)`; `f` gets the point and its distance to the
/// nearer endpoint so integrable endpoint singularities stay accurate.
fn tanh_sinh(f: impl Fn(f64, f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let level = |h: f64| -> f64 {
        let mut sum = 0.0;
        let kmax = (4.5 / h) as i64;
        for k in -kmax..=kmax {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            // 1 - tanh|u| without cancellation
            let comp = 2.0 / ((2.0 * u.abs()).exp() + 1.0);
            let dist = half * comp;
            if dist == 0.0 {
                continue;
            }
            let x = if u < 0.0 { a + dist } else { b - dist };
            let w = half * FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
            if w == 0.0 || !w.is_finite() {
                continue;
            }
            sum += w * f(x, dist);
        }
        sum * h
    };
    converge(level)
}

/// Exp-sinh rule on `(0, inf)`.
fn exp_sinh(f: impl Fn(f64) -> f64) -> f64 {
    let level = |h: f64| -> f64 {
        let mut sum = 0.0;
        let kmax = (4.5 / h) as i64;
        for k in -kmax..=kmax {
            let t = k as f64 * h;
            let x = (FRAC_PI_2 * t.sinh()).exp();
            if x == 0.0 || !x.is_finite() {
                continue;
            }
            let term = x * FRAC_PI_2 * t.cosh() * f(x);
            if term.is_finite() {
                sum += term;
            }
        }
        sum * h
    };
    converge(level)
}

fn converge(level: impl Fn(f64) -> f64) -> f64 {
    let mut h = 0.25;
    let mut prev = level(h);
    for _ in 0..8 {
        h *= 0.5;
        let next = level(h);
        if (next - prev).abs() <= 1e-15 * next.abs().max(1.0) {
            return next;
        }
        prev = next;
    }
    prev
}

/// Density of the Lévy measure, accurate for large `x` as well.
fn levy_density(x: f64) -> f64 {
    let c = 2.0 / (2.0 * PI).sqrt();
    if x > 40.0 {
        c * (-0.5 * x).exp() * (1.0 + 1.5 * (-x).exp())
    } else {
        c * x.exp() / x.exp_m1().powf(1.5)
    }
}

/// `int_0^inf (1 - e^{-qx}) Lambda(dx)`.
fn phi_oracle(q: f64) -> f64 {
    exp_sinh(|x| {
        if x > 40.0 {
            let c = 2.0 / (2.0 * PI).sqrt();
            c * ((-0.5 * x).exp() - (-(q + 0.5) * x).exp())
        } else {
            -(-q * x).exp_m1() * levy_density(x)
        }
    })
}

#[test]
fn levy_tail_against_quadrature() {
    let direct = tanh_sinh(|x, _| levy_density(x), 0.1, 1.0);
    assert!((levy_tail(0.1, 1.0).unwrap() - direct).abs() < 1e-10, "{direct}");
    let tail = exp_sinh(|x| levy_density(x + LN_2));
    assert!((levy_tail(LN_2, f64::INFINITY).unwrap() - tail).abs() < 1e-10);
    assert!((tail - LEVY_C).abs() < 1e-10);
    assert!((LEVY_C - 2.0 * (2.0 / PI).sqrt()).abs() < 1e-15);
}

#[test]
fn levy_tail_algebra() {
    let pts = [0.05, 0.3, LN_2, 1.7, 4.0, 30.0];
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                let (a, b, c) = (pts[i], pts[j], pts[k]);
                let split = levy_tail(a, b).unwrap() + levy_tail(b, c).unwrap();
                assert!((split - levy_tail(a, c).unwrap()).abs() < 1e-12);
            }
        }
    }
    assert!(levy_tail(1.0, 1.0 + 1e-9).unwrap() < 1e-8);
    assert!(levy_tail(0.0, 1.0).is_err());
    assert!(levy_tail(1.0, 0.5).is_err());
    assert_eq!(lambda_kill(0.0).unwrap(), levy_tail(LN_2, f64::INFINITY).unwrap());
    assert_eq!(lambda_kill(1.0).unwrap(), 0.0);
    assert!((lambda_kill(0.5).unwrap() - (2.0 / PI).sqrt()).abs() < 1e-15);
    assert!((lambda_kill(0.5).unwrap() - 0.797885).abs() < 1e-6);
}

#[test]
fn phi_closed_form_against_quadrature() {
    for q in [-0.45, -0.4, -0.25, -0.1, 0.3, 0.5, 1.0, 2.0, 3.0] {
        let closed = phi(q).unwrap();
        let oracle = phi_oracle(q);
        assert!((closed - oracle).abs() < 1e-8, "q={q}: {closed} vs {oracle}");
        let own = phi_integral(q).unwrap().value;
        assert!((closed - own).abs() < 1e-8, "q={q}");
    }
    assert_eq!(phi(0.0).unwrap(), 0.0);
    assert!((phi(1.0).unwrap() - (2.0 * PI).sqrt()).abs() < 1e-13);
    assert!(phi(-0.5).is_err());
    assert!(phi(f64::NAN).is_err());
    assert!(phi(-0.5 + 1e-9).unwrap() < -1e4);
}

#[test]
fn phi_shape() {
    let qs: Vec<f64> = (1..400).map(|k| -0.5 + k as f64 * 0.01).collect();
    let vals: Vec<f64> = qs.iter().map(|&q| phi(q).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[0] < w[1]));
    for (&q, &v) in qs.iter().zip(&vals) {
        assert_eq!(v < 0.0, q < 0.0, "q={q}");
    }
}

#[test]
fn phi_s_pieces_against_quadrature() {
    let q: f64 = -0.25;
    let mass = exp_sinh(|x| levy_density(x + LN_2));
    let weighted = exp_sinh(|x| (-q * (x + LN_2)).exp() * levy_density(x + LN_2));
    let expected = phi(q).unwrap() - (mass - weighted);
    assert!((phi_s(0.0, q).unwrap() - expected).abs() < 1e-9);
    for q in [-0.45, -0.2, 0.0, 0.7, 2.5] {
        assert_eq!(phi_s(1.0, q).unwrap(), phi(q).unwrap());
    }
    assert_eq!(phi_s(0.3, 0.0).unwrap(), 0.0);
    for p in [0.0, 0.25, 0.5, 0.9] {
        let v: Vec<f64> = (1..200).map(|k| phi_s(p, -0.5 + k as f64 * 0.02).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]), "p={p}");
    }
}

#[test]
fn lower_exponent() {
    for (p, alpha) in [(0.1, 0.584), (0.5, 0.812), (0.9, 0.967)] {
        let lambda = lambda_star_lower(p).unwrap();
        assert!(lambda > 0.0 && lambda < 0.5);
        assert!((1.0 - lambda - alpha).abs() <= 1e-3, "p={p}: {}", 1.0 - lambda);
        let residual = phi_s(p, -lambda).unwrap() + lambda_kill(p).unwrap();
        assert!(residual.abs() < 1e-10, "p={p}: {residual}");
    }
    assert!(lambda_star_lower(0.0).is_err());
    assert!(lambda_star_lower(1.0).is_err());
    let near_zero = 1.0 - lambda_star_lower(1e-4).unwrap();
    let near_one = 1.0 - lambda_star_lower(1.0 - 1e-4).unwrap();
    assert!((near_zero - 0.5).abs() < 1e-2, "{near_zero}");
    assert!((near_one - 1.0).abs() < 1e-2, "{near_one}");
    let alphas: Vec<f64> = (1..100)
        .map(|k| 1.0 - lambda_star_lower(k as f64 / 100.0).unwrap())
        .collect();
    assert!(alphas.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn kappa_against_grid_scan() {
    let (p, gamma, r) = (0.5, -1.0, 0.75);
    let rhs = kappa_rhs(p, gamma, r).unwrap();
    let kappa = kappa_star(p, gamma, r).unwrap();
    // g(k) = Phi(-k) - rhs decreases from -rhs > 0 to -inf on (0, 1/2)
    let g = |k: f64| phi(-k).unwrap() - rhs;
    let step = 1e-6;
    let mut k = step;
    while g(k) > 0.0 {
        k += step;
    }
    assert!(
        kappa > k - step - 1e-12 && kappa <= k + 1e-12,
        "{kappa} vs ({}, {k}]",
        k - step
    );
    assert!((phi(-kappa).unwrap() - rhs).abs() < 1e-10);
}

#[test]
fn kappa_forms_and_limits() {
    for p in [0.05, 0.5, 0.95] {
        for gamma in [-20.0, -3.0, -0.5, -1e-3] {
            for r in [0.501, 0.6, 0.75, 0.9, 0.999] {
                let a = kappa_rhs(p, gamma, r).unwrap();
                let b = kappa_rhs_closed(p, gamma, r).unwrap();
                assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300), "{p} {gamma} {r}");
                let k = kappa_star(p, gamma, r).unwrap();
                assert!(k > 0.0 && k < 0.5);
            }
        }
    }
    assert!(kappa_star(0.5, -1e-12, 0.75).unwrap() < 1e-9);
    assert!(kappa_star(0.5, -1.0, 0.5 + 1e-12).unwrap() < 1e-9);
    assert!(kappa_star(0.5, 0.0, 0.75).is_err());
    assert!(kappa_star(0.5, -1.0, 0.5).is_err());
    assert!(kappa_star(0.5, -1.0, 1.0).is_err());
    assert!(kappa_star(1.0, -1.0, 0.7).is_err());
}

#[test]
fn upper_exponent_stable_under_grid_doubling() {
    for p in [0.2, 0.5, 0.8] {
        let base = lambda_star_upper_with(p, &UpperSettings::default()).unwrap();
        let fine = lambda_star_upper_with(p, &UpperSettings::default().doubled()).unwrap();
        let rel = (base.lambda - fine.lambda).abs() / fine.lambda;
        assert!(rel < 1e-4, "p={p}: {} vs {}", base.lambda, fine.lambda);
        assert!(base.beta_hat > 0.0 && base.beta_hat < LN_2);
        assert!(base.delta_hat > 0.0 && base.gamma_hat < 0.0);
    }
}

#[test]
fn table_invariants_on_99_points() {
    let ps: Vec<f64> = (1..100).map(|k| k as f64 / 100.0).collect();
    let rows = exponent_table(&ps).unwrap();
    for row in &rows {
        assert!(row.lambda_lower > 0.0 && row.lambda_lower < 0.5);
        assert!(row.lambda_upper > 0.0);
        assert!(
            0.5 < row.alpha_star && row.alpha_star <= row.beta_star && row.beta_star < 1.0,
            "{row:?}"
        );
        assert!(row.optimizer.residual_lower.abs() < 1e-10);
        assert!(row.optimizer.residual_kappa.abs() < 1e-10);
    }
    assert!(rows.windows(2).all(|w| w[0].alpha_star < w[1].alpha_star));
    assert!(rows.windows(2).all(|w| w[0].beta_star < w[1].beta_star));
    let csv = table_to_csv(&rows);
    assert!(csv.starts_with(TABLE_CSV_HEADER));
    assert_eq!(csv.lines().count(), 100);
}

#[test]
fn alpha_below_beta_on_999_points() {
    let coarse = UpperSettings {
        beta_points: 12,
        delta_points: 12,
        gamma_seeds: 12,
        s_tol: 1e-7,
        beta_tol: 1e-6,
        log_delta_tol: 1e-9,
        ..UpperSettings::default()
    };
    let ps: Vec<f64> = (1..1000).map(|k| k as f64 / 1000.0).collect();
    let rows = exponent_table_with(&ps, &coarse).unwrap();
    assert!(rows.iter().all(|r| r.alpha_star <= r.beta_star));
}
