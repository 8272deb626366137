use rayon::prelude::*;

use super::upper::{lambda_star_upper_with, UpperSettings};
use super::{lambda_kill, lambda_star_lower_detailed};
use crate::error::{Error, Result};

/// All exponent constants for one `p`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ExponentTable {
    pub p: f64,
    pub lambda_kill: f64,
    pub lambda_lower: f64,
    pub alpha_star: f64,
    pub lambda_upper: f64,
    pub beta_star: f64,
    pub optimizer: OptimizerRecord,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct OptimizerRecord {
    pub beta_hat: f64,
    pub delta_hat: f64,
    pub gamma_hat: f64,
    pub kappa_hat: f64,
    pub residual_lower: f64,
    pub residual_kappa: f64,
    pub crossing_gap: f64,
    pub lower_iterations: u32,
    pub grid_evaluations: u64,
    pub refine_iterations: u32,
    pub kappa_solves: u64,
    pub quadrature_error: f64,
}

pub const TABLE_CSV_HEADER: &str =
    "p,lambda_kill,lambda_lower,alpha_star,lambda_upper,beta_star,beta_hat,delta_hat,gamma_hat,residual_lower,residual_kappa";

pub fn exponent_table(ps: &[f64]) -> Result<Vec<ExponentTable>> {
    exponent_table_with(ps, &UpperSettings::default())
}

/// One row per `p`, computed in parallel, in input order.
pub fn exponent_table_with(ps: &[f64], settings: &UpperSettings) -> Result<Vec<ExponentTable>> {
    ps.par_iter().map(|&p| row(p, settings)).collect()
}

fn row(p: f64, settings: &UpperSettings) -> Result<ExponentTable> {
    let lower = lambda_star_lower_detailed(p)?;
    let upper = lambda_star_upper_with(p, settings)?;
    let row = ExponentTable {
        p,
        lambda_kill: lambda_kill(p)?,
        lambda_lower: lower.lambda,
        alpha_star: 1.0 - lower.lambda,
        lambda_upper: upper.lambda,
        beta_star: 1.0 - upper.lambda,
        optimizer: OptimizerRecord {
            beta_hat: upper.beta_hat,
            delta_hat: upper.delta_hat,
            gamma_hat: upper.gamma_hat,
            kappa_hat: upper.kappa_hat,
            residual_lower: lower.residual,
            residual_kappa: upper.residual_kappa,
            crossing_gap: upper.crossing_gap,
            lower_iterations: lower.iterations,
            grid_evaluations: upper.grid_evaluations,
            refine_iterations: upper.refine_iterations,
            kappa_solves: upper.kappa_solves,
            quadrature_error: lower.quadrature_error,
        },
    };
    row.check()?;
    Ok(row)
}

impl ExponentTable {
    fn check(&self) -> Result<()> {
        let ok = self.lambda_lower > 0.0
            && self.lambda_lower < 0.5
            && self.lambda_upper > 0.0
            && self.alpha_star > 0.5
            && self.alpha_star <= self.beta_star
            && self.beta_star < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Numerical(format!(
                "exponent ordering violated at p = {}: alpha* = {}, beta* = {}",
                self.p, self.alpha_star, self.beta_star
            )))
        }
    }

    pub fn csv_row(&self) -> String {
        let o = &self.optimizer;
        format!(
            "{},{},{},{},{},{},{},{},{},{:e},{:e}",
            self.p,
            self.lambda_kill,
            self.lambda_lower,
            self.alpha_star,
            self.lambda_upper,
            self.beta_star,
            o.beta_hat,
            o.delta_hat,
            o.gamma_hat,
            o.residual_lower,
            o.residual_kappa
        )
    }
}

pub fn table_to_csv(rows: &[ExponentTable]) -> String {
    let mut out = String::from(TABLE_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_row());
        out.push('\n');
    }
    out
}
