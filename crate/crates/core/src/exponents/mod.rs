//! Laplace exponents of the tagged fragment and the exponent bounds built
//! from them.
//!
//! The tagged fragment is `exp(-xi)` run on a self-similar clock, where `xi`
//! is a subordinator with Lévy measure
//! `Lambda(dx) = 2 e^x dx / sqrt(2 pi (e^x - 1)^3)`. Under
//! `u = (e^x - 1)^(-1/2)` this measure becomes `LEVY_C du`, which gives the
//! closed-form tail [`levy_tail`] and smooth integrands for everything else.

mod numeric;
mod table;
mod upper;

pub use numeric::{bisect, golden_max, integrate, safeguarded_newton, scan_then_golden, Maximum, Quadrature, Root};
pub use table::{exponent_table, exponent_table_with, table_to_csv, ExponentTable, TABLE_CSV_HEADER};
pub use upper::{lambda_star_upper, lambda_star_upper_with, UpperOptimum, UpperSettings};

use crate::error::{check_open_probability, check_probability, Error, Result};

/// `2 sqrt(2 / pi)`, the density of the Lévy measure in the `u` variable.
pub const LEVY_C: f64 = 1.595_769_121_605_730_7;

const QUAD_TOL: f64 = 1e-13;

fn inv_sqrt_expm1(x: f64) -> f64 {
    if x == f64::INFINITY {
        0.0
    } else {
        1.0 / x.exp_m1().sqrt()
    }
}

/// `Lambda((a, b))` for `0 < a < b <= inf`.
pub fn levy_tail(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::param("a", format!("{a}: the measure is infinite near 0")));
    }
    if !(b > a) {
        return Err(Error::param("b", format!("{b} must exceed a = {a}")));
    }
    Ok(LEVY_C * (inv_sqrt_expm1(a) - inv_sqrt_expm1(b)))
}

fn check_q(q: f64) -> Result<()> {
    if !(q > -0.5) || q.is_nan() {
        return Err(Error::param("q", format!("{q} is not above -1/2")));
    }
    Ok(())
}

/// `Phi(q) = 2 sqrt(2) Gamma(q + 1/2) / Gamma(q)`, evaluated as
/// `2 sqrt(2) q Gamma(q + 1/2) / Gamma(q + 1)` so both Gamma arguments stay
/// positive on the whole domain `q > -1/2`.
pub fn phi(q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(phi_unchecked(q))
}

pub(crate) fn phi_unchecked(q: f64) -> f64 {
    if q == 0.0 {
        return 0.0;
    }
    2.0 * std::f64::consts::SQRT_2 * q * (libm::lgamma(q + 0.5) - libm::lgamma(q + 1.0)).exp()
}

/// `(Phi(q), Phi'(q))`.
fn phi_with_derivative(q: f64) -> (f64, f64) {
    use statrs::function::gamma::digamma;
    let scale = 2.0 * std::f64::consts::SQRT_2 * (libm::lgamma(q + 0.5) - libm::lgamma(q + 1.0)).exp();
    let value = if q == 0.0 { 0.0 } else { q * scale };
    let slope = scale * (1.0 + q * (digamma(q + 0.5) - digamma(q + 1.0)));
    (value, slope)
}

/// `Phi(q)` as `int (1 - e^(-qx)) Lambda(dx)` by quadrature, split at
/// `log 2` into [`head_integral`] and [`upper_tail_integral`].
pub fn phi_integral(q: f64) -> Result<Quadrature> {
    let head = head_integral(q)?;
    let tail = upper_tail_integral(q)?;
    Ok(Quadrature {
        value: head.value + tail.value,
        error: head.error + tail.error,
        panels: head.panels + tail.panels,
    })
}

/// `int_0^{log 2} (1 - e^(-qx)) Lambda(dx)`; with `v = sqrt(e^x - 1)` this
/// is `LEVY_C int_0^1 (1 - (1 + v^2)^(-q)) / v^2 dv`.
pub fn head_integral(q: f64) -> Result<Quadrature> {
    check_q(q)?;
    let f = |v: f64| {
        if v == 0.0 {
            q
        } else {
            -(-q * (v * v).ln_1p()).exp_m1() / (v * v)
        }
    };
    let mut quad = integrate(f, 0.0, 1.0, QUAD_TOL)?;
    quad.value *= LEVY_C;
    quad.error *= LEVY_C;
    Ok(quad)
}

/// `int_{log 2}^inf (1 - e^(-qx)) Lambda(dx)`.
///
/// In the `u` variable this is `LEVY_C (1 - J)` with
/// `J = int_0^1 u^(2q) (1 + u^2)^(-q) du`; the further substitution
/// `w = u^(2q + 1)` removes the endpoint singularity for negative `q`:
/// `J = int_0^1 (1 + w^(2 / (2q + 1)))^(-q) dw / (2q + 1)`.
pub fn upper_tail_integral(q: f64) -> Result<Quadrature> {
    check_q(q)?;
    if q == 0.0 {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    let s = 2.0 * q + 1.0;
    let exponent = 2.0 / s;
    let f = |w: f64| (-q * w.powf(exponent).ln_1p()).exp();
    let quad = integrate(f, 0.0, 1.0, QUAD_TOL * s)?;
    Ok(Quadrature {
        value: LEVY_C * (1.0 - quad.value / s),
        error: LEVY_C * quad.error / s,
        panels: quad.panels,
    })
}

/// Laplace exponent of the subordinator killed by the selection rule:
/// jumps above `log 2` (where the tagged side is the smaller one) are kept
/// only with probability `p`.
pub fn phi_s(p: f64, q: f64) -> Result<f64> {
    check_probability(p)?;
    check_q(q)?;
    Ok(phi_s_detailed(p, q)?.value)
}

fn phi_s_detailed(p: f64, q: f64) -> Result<Quadrature> {
    if q == 0.0 {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 0,
        });
    }
    let tail = if p == 1.0 {
        Quadrature {
            value: 0.0,
            error: 0.0,
            panels: 0,
        }
    } else {
        upper_tail_integral(q)?
    };
    Ok(Quadrature {
        value: phi_unchecked(q) - (1.0 - p) * tail.value,
        error: (1.0 - p) * tail.error,
        panels: tail.panels,
    })
}

/// Killing rate `2 (1 - p) sqrt(2 / pi) = (1 - p) Lambda((log 2, inf))`.
pub fn lambda_kill(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok((1.0 - p) * LEVY_C)
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct LowerRoot {
    pub lambda: f64,
    /// `|Phi^S(-lambda) + lambda(p)|` at the returned root.
    pub residual: f64,
    pub iterations: u32,
    pub quadrature_error: f64,
}

/// The root `lambda` in `(0, 1/2)` of `Phi^S(-lambda) + lambda(p) = 0`.
pub fn lambda_star_lower(p: f64) -> Result<f64> {
    Ok(lambda_star_lower_detailed(p)?.lambda)
}

pub fn lambda_star_lower_detailed(p: f64) -> Result<LowerRoot> {
    check_open_probability(p)?;
    let kill = lambda_kill(p)?;
    let g = |lambda: f64| phi_s_detailed(p, -lambda).map(|q| q.value + kill).unwrap_or(f64::NAN);
    // g(0+) = lambda(p) > 0 and g -> -inf at 1/2
    let lo = 1e-12;
    let hi = 0.5 - 1e-12;
    let root = bisect(g, lo, hi, 1e-13, 1e-15)?;
    let detail = phi_s_detailed(p, -root.x)?;
    Ok(LowerRoot {
        lambda: root.x,
        residual: (detail.value + kill).abs(),
        iterations: root.iterations,
        quadrature_error: detail.error,
    })
}

/// Right-hand side `-(1 - e^gamma) (1 - p) Lambda((-log r, -log(1 - r)))`
/// of the equation defining `kappa^*`.
pub fn kappa_rhs(p: f64, gamma: f64, r: f64) -> Result<f64> {
    check_kappa_domain(p, gamma, r)?;
    let mass = (1.0 - p) * levy_tail(-r.ln(), -(-r).ln_1p())?;
    Ok(gamma.exp_m1() * mass)
}

/// The same right-hand side written as
/// `(1 - e^gamma) 2 (1 - p) sqrt(2 / pi) (1/r - 2) / sqrt(1/r - 1)`.
pub fn kappa_rhs_closed(p: f64, gamma: f64, r: f64) -> Result<f64> {
    check_kappa_domain(p, gamma, r)?;
    let inv = 1.0 / r;
    Ok(-gamma.exp_m1() * LEVY_C * (1.0 - p) * (inv - 2.0) / (inv - 1.0).sqrt())
}

fn check_kappa_domain(p: f64, gamma: f64, r: f64) -> Result<()> {
    check_open_probability(p)?;
    if !(gamma < 0.0) {
        return Err(Error::param("gamma", format!("{gamma} must be negative")));
    }
    if !(r > 0.5 && r < 1.0) {
        return Err(Error::param("r", format!("{r} is outside (1/2, 1)")));
    }
    Ok(())
}

/// `kappa^*_{gamma, r}(p)`: the root `kappa` in `(0, 1/2)` of
/// `Phi(-kappa) = kappa_rhs(p, gamma, r)`.
pub fn kappa_star(p: f64, gamma: f64, r: f64) -> Result<f64> {
    Ok(kappa_star_detailed(p, gamma, r)?.x)
}

/// Like [`kappa_star`], with the residual `Phi(-kappa) - rhs` in `fx`.
pub fn kappa_star_detailed(p: f64, gamma: f64, r: f64) -> Result<Root> {
    solve_phi_negative(kappa_rhs(p, gamma, r)?)
}

/// Solves `Phi(-kappa) = y` for `y < 0`, returning `kappa` in `(0, 1/2)`.
/// Works in `z = 1/2 - kappa` so that roots close to `1/2` keep precision.
pub(crate) fn solve_phi_negative(y: f64) -> Result<Root> {
    if !(y < 0.0) || !y.is_finite() {
        return Err(Error::param("rhs", format!("{y} must be finite and negative")));
    }
    let fdf = |z: f64| {
        let (v, d) = phi_with_derivative(z - 0.5);
        (v - y, d)
    };
    // near z = 0, Phi(z - 1/2) ~ -sqrt(2 / pi) / z
    let guess = (std::f64::consts::FRAC_2_PI.sqrt() / -y).min(0.25);
    let root = safeguarded_newton(fdf, 1e-300, 0.5, guess, 1e-15 * (1.0 + y.abs()))?;
    let kappa = 0.5 - root.x;
    Ok(Root {
        x: kappa,
        fx: phi_unchecked(-kappa) - y,
        iterations: root.iterations,
    })
}
