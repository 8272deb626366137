//! Aggregation and the two statistics the harness needs: ordinary least
//! squares and chi-square tests.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Mean and sample standard deviation from exact integer sums, so the
/// result does not depend on the order in which trials finished.
pub fn moments(values: impl IntoIterator<Item = u64>) -> (f64, f64, u64) {
    let mut n: u64 = 0;
    let mut sum: u128 = 0;
    let mut sum_sq: u128 = 0;
    for v in values {
        n += 1;
        sum += v as u128;
        sum_sq += (v as u128) * (v as u128);
    }
    if n == 0 {
        return (f64::NAN, f64::NAN, 0);
    }
    let mean = sum as f64 / n as f64;
    let sd = if n > 1 {
        let num = (n as u128 * sum_sq - sum * sum) as f64;
        (num / (n as f64 * (n - 1) as f64)).sqrt()
    } else {
        0.0
    };
    (mean, sd, n)
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Regression {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope from the residuals; `None` with only two
    /// points, where the fit is exact and no residual degrees remain.
    pub stderr: Option<f64>,
    pub r_squared: f64,
    pub points: usize,
}

/// Ordinary least squares of `y` on `x`.
pub fn loglog_regression(points: &[(f64, f64)]) -> Result<Regression> {
    let n = points.len();
    if n < 2 {
        return Err(Error::param("points", format!("{n} points cannot fix a line")));
    }
    if points.iter().any(|&(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::param("points", "coordinates must be finite"));
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("points", "all x coordinates are equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (n > 2).then(|| (ssr / (nf - 2.0) / sxx).sqrt());
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ssr / syy };
    Ok(Regression {
        slope,
        intercept,
        stderr,
        r_squared,
        points: n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn chi_square_tail(statistic: f64, dof: usize) -> f64 {
    if dof == 0 {
        return 1.0;
    }
    ChiSquared::new(dof as f64).map(|d| d.sf(statistic)).unwrap_or(f64::NAN)
}

/// Goodness of fit of `observed` counts to the probabilities `expected`.
/// A count in a cell of probability zero gives p-value 0.
pub fn chi_square_gof(observed: &[u64], expected: &[f64]) -> ChiSquare {
    let total: u64 = observed.iter().sum();
    let mut statistic = 0.0;
    let mut cells = 0;
    let mut impossible = false;
    for (&o, &p) in observed.iter().zip(expected) {
        if p > 0.0 {
            let e = p * total as f64;
            statistic += (o as f64 - e).powi(2) / e;
            cells += 1;
        } else if o > 0 {
            impossible = true;
        }
    }
    let dof = cells.max(1) - 1;
    ChiSquare {
        statistic,
        dof,
        p_value: if impossible {
            0.0
        } else {
            chi_square_tail(statistic, dof)
        },
    }
}

/// Two-sample test that `a` and `b` are counts from one distribution.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> ChiSquare {
    let ta: u64 = a.iter().sum();
    let tb: u64 = b.iter().sum();
    if ta == 0 || tb == 0 {
        return ChiSquare {
            statistic: 0.0,
            dof: 0,
            p_value: 1.0,
        };
    }
    let ka = (tb as f64 / ta as f64).sqrt();
    let kb = (ta as f64 / tb as f64).sqrt();
    let mut statistic = 0.0;
    let mut cells = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x + y > 0 {
            statistic += (ka * x as f64 - kb * y as f64).powi(2) / (x + y) as f64;
            cells += 1;
        }
    }
    let dof = cells.max(1) - 1;
    ChiSquare {
        statistic,
        dof,
        p_value: chi_square_tail(statistic, dof),
    }
}
