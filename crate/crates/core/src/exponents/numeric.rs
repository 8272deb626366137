//! Small numerical kernels: adaptive Gauss–Legendre quadrature, bracketed
//! root finding and golden-section search.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const GL_ORDER: usize = 12;
const MAX_DEPTH: u32 = 48;

/// Nodes and weights of the `GL_ORDER`-point rule on [-1, 1], by Newton
/// iteration on the Legendre polynomial.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

fn gl_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    half * gauss_legendre()
        .iter()
        .map(|&(x, w)| w * f(mid + half * x))
        .sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the panel-level differences between one panel and its halves.
    pub error: f64,
    pub panels: u32,
}

/// Adaptive Gauss–Legendre on a finite interval with absolute tolerance.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Numerical(format!("non-finite interval [{a}, {b}]")));
    }
    let whole = gl_panel(&f, a, b);
    let mut out = Quadrature {
        value: 0.0,
        error: 0.0,
        panels: 0,
    };
    // explicit stack of (a, b, estimate, tolerance, depth)
    let mut stack = vec![(a, b, whole, tol, 0u32)];
    while let Some((lo, hi, est, tol, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gl_panel(&f, lo, mid);
        let right = gl_panel(&f, mid, hi);
        let diff = (left + right - est).abs();
        if diff <= tol || depth >= MAX_DEPTH {
            if !diff.is_finite() {
                return Err(Error::Numerical(format!("integrand not finite on [{lo}, {hi}]")));
            }
            out.value += left + right;
            out.error += diff;
            out.panels += 1;
        } else {
            stack.push((mid, hi, right, 0.5 * tol, depth + 1));
            stack.push((lo, mid, left, 0.5 * tol, depth + 1));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: u32,
}

/// Bisection on `[lo, hi]`, which must bracket a sign change. Stops once
/// `|f| <= ftol` or the bracket is narrower than `xtol`.
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, ftol: f64, xtol: f64) -> Result<Root> {
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Numerical(format!(
            "no sign change on [{lo}, {hi}]: f = {fa}, {fb}"
        )));
    }
    let rising = fa < 0.0;
    let mut m = 0.5 * (a + b);
    let mut fm = f(m);
    let mut iterations = 1;
    while fm.abs() > ftol && b - a > xtol && iterations < 200 {
        if fm.is_nan() {
            return Err(Error::Numerical(format!("f({m}) is NaN")));
        }
        if (fm < 0.0) == rising {
            a = m;
        } else {
            b = m;
        }
        let next = 0.5 * (a + b);
        if next == m {
            break;
        }
        m = next;
        fm = f(m);
        iterations += 1;
    }
    Ok(Root {
        x: m,
        fx: fm,
        iterations,
    })
}

/// Newton's method kept inside a validated bracket, falling back to
/// bisection whenever a step would leave it. `fdf` returns `(f, f')`.
pub fn safeguarded_newton(fdf: impl Fn(f64) -> (f64, f64), lo: f64, hi: f64, start: f64, ftol: f64) -> Result<Root> {
    let (flo, _) = fdf(lo);
    let (fhi, _) = fdf(hi);
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(Error::Numerical(format!(
            "no sign change on [{lo}, {hi}]: f = {flo}, {fhi}"
        )));
    }
    let rising = flo < 0.0;
    let (mut a, mut b) = (lo, hi);
    let mut x = start.clamp(lo, hi);
    if x <= a || x >= b {
        x = 0.5 * (a + b);
    }
    for it in 1..=200 {
        let (fx, dfx) = fdf(x);
        if fx.is_nan() {
            return Err(Error::Numerical(format!("f({x}) is NaN")));
        }
        if fx.abs() <= ftol {
            return Ok(Root { x, fx, iterations: it });
        }
        if (fx < 0.0) == rising {
            a = x;
        } else {
            b = x;
        }
        let newton = x - fx / dfx;
        let next = if newton > a && newton < b && dfx.is_finite() {
            newton
        } else {
            0.5 * (a + b)
        };
        if next == x || b - a <= f64::EPSILON * x.abs().max(1e-300) {
            let (fn_, _) = fdf(next);
            return Ok(Root {
                x: next,
                fx: fn_,
                iterations: it,
            });
        }
        x = next;
    }
    let (fx, _) = fdf(x);
    Ok(Root { x, fx, iterations: 200 })
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Maximum {
    pub x: f64,
    pub fx: f64,
    pub iterations: u32,
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`, assuming
/// unimodality there.
pub fn golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Maximum {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while b - a > xtol && iterations < 200 {
        iterations += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        Maximum {
            x: c,
            fx: fc,
            iterations,
        }
    } else {
        Maximum {
            x: d,
            fx: fd,
            iterations,
        }
    }
}

/// Scans `seeds` equally spaced points of `[lo, hi]` and refines the best
/// one by golden section between its neighbours.
pub fn scan_then_golden(f: impl Fn(f64) -> f64, lo: f64, hi: f64, seeds: usize, xtol: f64) -> Maximum {
    let seeds = seeds.max(3);
    let step = (hi - lo) / (seeds - 1) as f64;
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..seeds {
        let v = f(lo + step * i as f64);
        if v > best.1 {
            best = (i, v);
        }
    }
    let i = best.0;
    let a = lo + step * i.saturating_sub(1) as f64;
    let b = (lo + step * (i + 1) as f64).min(hi);
    let refined = golden_max(&f, a, b, xtol);
    let at_seed = lo + step * i as f64;
    if refined.fx >= best.1 {
        Maximum {
            iterations: refined.iterations + seeds as u32,
            ..refined
        }
    } else {
        Maximum {
            x: at_seed,
            fx: best.1,
            iterations: refined.iterations + seeds as u32,
        }
    }
}
