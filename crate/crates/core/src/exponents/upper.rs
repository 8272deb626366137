//! The upper exponent bound
//! `lambda^*(p) = sup over beta in (0, log 2), delta > 0 of
//! min{beta delta, sup over gamma < 0 of (gamma delta + kappa^*_{gamma, e^-beta}(p))}`.

use super::numeric::{bisect, golden_max, scan_then_golden};
use super::{levy_tail, phi_unchecked, solve_phi_negative};
use crate::error::{check_open_probability, Error, Result};

/// Search settings. The defaults are the production settings; tests use
/// coarser grids where only the refined optimum matters.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct UpperSettings {
    pub beta_points: usize,
    pub delta_points: usize,
    pub delta_min: f64,
    pub delta_max: f64,
    /// Seeds scanned over `s` before golden refinement, `gamma = -e^s`.
    pub gamma_seeds: usize,
    pub s_min: f64,
    pub s_max: f64,
    pub s_tol: f64,
    pub beta_tol: f64,
    /// Bisection tolerance on `log delta` when locating the crossing.
    pub log_delta_tol: f64,
}

impl Default for UpperSettings {
    fn default() -> Self {
        UpperSettings {
            beta_points: 64,
            delta_points: 64,
            delta_min: 1e-3,
            delta_max: 1e3,
            gamma_seeds: 64,
            s_min: -30.0,
            s_max: 5.0,
            s_tol: 1e-9,
            beta_tol: 1e-9,
            log_delta_tol: 1e-13,
        }
    }
}

impl UpperSettings {
    /// Same search with both outer grids doubled.
    pub fn doubled(&self) -> Self {
        UpperSettings {
            beta_points: 2 * self.beta_points,
            delta_points: 2 * self.delta_points,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.beta_points < 3 || self.delta_points < 2 || self.gamma_seeds < 3 {
            return Err(Error::param("settings", "grids too small"));
        }
        if !(self.delta_min > 0.0 && self.delta_max > self.delta_min) {
            return Err(Error::param("settings", "bad delta range"));
        }
        if !(self.s_max > self.s_min) {
            return Err(Error::param("settings", "bad s range"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct UpperOptimum {
    pub lambda: f64,
    pub beta_hat: f64,
    pub delta_hat: f64,
    pub gamma_hat: f64,
    pub kappa_hat: f64,
    /// `|Phi(-kappa_hat) + (1 - e^gamma_hat) (1 - p) Lambda(...)|`.
    pub residual_kappa: f64,
    /// `|beta_hat delta_hat - inner(beta_hat, delta_hat)|`.
    pub crossing_gap: f64,
    pub grid_best: f64,
    pub grid_evaluations: u64,
    pub refine_iterations: u32,
    pub kappa_solves: u64,
}

struct Problem<'a> {
    settings: &'a UpperSettings,
    one_minus_p: f64,
    solves: std::cell::Cell<u64>,
}

struct Inner {
    value: f64,
    gamma: f64,
    kappa: f64,
    residual: f64,
}

impl Problem<'_> {
    /// `(1 - p) Lambda((beta, -log(1 - e^-beta)))`.
    fn mass(&self, beta: f64) -> f64 {
        let upper = -(-(-beta).exp_m1()).ln();
        self.one_minus_p * levy_tail(beta, upper).unwrap_or(f64::NAN)
    }

    fn kappa(&self, mass: f64, s: f64) -> (f64, f64) {
        self.solves.set(self.solves.get() + 1);
        let gamma = -s.exp();
        let rhs = gamma.exp_m1() * mass;
        match solve_phi_negative(rhs) {
            Ok(root) => (root.x, root.fx),
            Err(_) => (0.0, f64::INFINITY),
        }
    }

    /// `sup over gamma < 0 of (gamma delta + kappa^*)`, scanning `s` first.
    fn inner(&self, beta: f64, delta: f64) -> Inner {
        let mass = self.mass(beta);
        let st = self.settings;
        let f = |s: f64| -s.exp() * delta + self.kappa(mass, s).0;
        let best = scan_then_golden(f, st.s_min, st.s_max, st.gamma_seeds, st.s_tol);
        let (kappa, residual) = self.kappa(mass, best.x);
        Inner {
            value: best.fx,
            gamma: -best.x.exp(),
            kappa,
            residual: residual.abs(),
        }
    }

    /// For fixed `beta`, `min{beta delta, inner}` peaks where the increasing
    /// `beta delta` meets the nonincreasing `inner`; returns that `delta`.
    fn crossing(&self, beta: f64) -> Result<f64> {
        let h = |u: f64| {
            let delta = u.exp();
            beta * delta - self.inner(beta, delta).value
        };
        let root = bisect(h, (1e-12f64).ln(), (1e12f64).ln(), 0.0, self.settings.log_delta_tol)?;
        Ok(root.x.exp())
    }
}

pub fn lambda_star_upper(p: f64) -> Result<f64> {
    Ok(lambda_star_upper_with(p, &UpperSettings::default())?.lambda)
}

/// Grid search over `(beta, delta)`, then golden-section refinement over
/// `beta` with `delta` pinned to the crossing.
pub fn lambda_star_upper_with(p: f64, settings: &UpperSettings) -> Result<UpperOptimum> {
    check_open_probability(p)?;
    settings.validate()?;
    let problem = Problem {
        settings,
        one_minus_p: 1.0 - p,
        solves: std::cell::Cell::new(0),
    };
    let ln2 = std::f64::consts::LN_2;
    let nb = settings.beta_points;
    let nd = settings.delta_points;
    let beta_at = |i: usize| ln2 * (i + 1) as f64 / (nb + 1) as f64;
    let (ldmin, ldmax) = (settings.delta_min.ln(), settings.delta_max.ln());
    let delta_at = |j: usize| (ldmin + (ldmax - ldmin) * j as f64 / (nd - 1) as f64).exp();

    // For each beta row, the crossing of beta delta with the inner value is
    // located on the grid and interpolated linearly in log delta; the best
    // row seeds the refinement.
    let mut grid_best = f64::NEG_INFINITY;
    let mut best_row = (f64::NEG_INFINITY, 0);
    for i in 0..nb {
        let beta = beta_at(i);
        let mut prev: Option<(f64, f64)> = None;
        let mut row_estimate = f64::NEG_INFINITY;
        for j in 0..nd {
            let delta = delta_at(j);
            let inner = problem.inner(beta, delta).value;
            grid_best = grid_best.max((beta * delta).min(inner));
            let gap = beta * delta - inner;
            if let Some((u0, g0)) = prev {
                if g0 < 0.0 && gap >= 0.0 && row_estimate == f64::NEG_INFINITY {
                    let u1 = delta.ln();
                    let u = u0 + (u1 - u0) * (-g0) / (gap - g0);
                    row_estimate = beta * u.exp();
                }
            }
            prev = Some((delta.ln(), gap));
        }
        if row_estimate > best_row.0 {
            best_row = (row_estimate, i);
        }
    }
    if !(grid_best > 0.0) {
        return Err(Error::Numerical(format!(
            "grid search found no positive value (best {grid_best})"
        )));
    }
    let grid_evaluations = (nb * nd) as u64;

    let i = best_row.1;
    let lo = if i < 2 { beta_at(0) * 1e-3 } else { beta_at(i - 2) };
    let hi = if i + 2 >= nb {
        ln2 * (1.0 - 1e-9)
    } else {
        beta_at(i + 2)
    };
    let value_at = |beta: f64| match problem.crossing(beta) {
        Ok(delta) => beta * delta,
        Err(_) => f64::NEG_INFINITY,
    };
    let refined = golden_max(value_at, lo, hi, settings.beta_tol);

    if !(refined.fx >= grid_best) {
        return Err(Error::Numerical(format!(
            "refinement ended below the grid ({} < {grid_best})",
            refined.fx
        )));
    }
    let (beta_hat, delta_hat) = (refined.x, problem.crossing(refined.x)?);
    let inner = problem.inner(beta_hat, delta_hat);
    let lambda = (beta_hat * delta_hat).min(inner.value);
    debug_assert!(inner.residual.is_finite());
    let check = phi_unchecked(-inner.kappa) - inner.gamma.exp_m1() * problem.mass(beta_hat);
    Ok(UpperOptimum {
        lambda,
        beta_hat,
        delta_hat,
        gamma_hat: inner.gamma,
        kappa_hat: inner.kappa,
        residual_kappa: check.abs(),
        crossing_gap: (beta_hat * delta_hat - inner.value).abs(),
        grid_best,
        grid_evaluations,
        refine_iterations: refined.iterations,
        kappa_solves: problem.solves.get(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain() {
        assert!(lambda_star_upper(0.0).is_err());
        assert!(lambda_star_upper(1.0).is_err());
        let bad = UpperSettings {
            beta_points: 1,
            ..UpperSettings::default()
        };
        assert!(lambda_star_upper_with(0.5, &bad).is_err());
    }

    #[test]
    fn coarse_search_lands_on_the_same_optimum() {
        let coarse = UpperSettings {
            beta_points: 12,
            delta_points: 12,
            gamma_seeds: 32,
            ..UpperSettings::default()
        };
        let opt = lambda_star_upper_with(0.5, &coarse).unwrap();
        assert!(opt.lambda > 0.0 && opt.lambda < 0.5);
        assert!(opt.crossing_gap < 1e-9);
        assert!(opt.residual_kappa < 1e-10);
        assert!(opt.lambda >= opt.grid_best);
        assert!(opt.gamma_hat < 0.0);
    }
}
