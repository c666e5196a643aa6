//! Effective mass from an S(q) table over a list of temperatures.

use std::path::{Path, PathBuf};

use bosepair_core::{Error, QGrid, SystemParams, TabulatedFunction};
use serde::Serialize;

use crate::config::MassMethodName;
use crate::error::Result;
use crate::masses::MassInputs;
use crate::output;

pub const MASS_CSV: &str = "mass.csv";

#[derive(Debug, Clone, Serialize)]
pub struct MassRow {
    pub temperature: f64,
    pub mass_method: &'static str,
    pub converged: bool,
    pub m_star_over_m: f64,
    pub m_star_star_over_m: Option<f64>,
    pub residual: Option<f64>,
    pub iterations: Option<usize>,
    pub table_q_min: f64,
    pub table_q_max: f64,
    pub table_nodes: usize,
}

/// One row per temperature. A self-consistent solve that does not converge
/// yields a row with `converged = false` and its last iterate.
pub fn mass_rows(
    s: &TabulatedFunction,
    params: &SystemParams,
    method: MassMethodName,
    temperatures: &[f64],
    t_ref: Option<f64>,
) -> Result<Vec<MassRow>> {
    let grid: &QGrid = s.grid();
    let inputs = MassInputs {
        method,
        sq: Some(s),
        potential: None,
        grid,
        t_ref,
    };
    let m = params.mass();
    temperatures
        .iter()
        .map(|&t| {
            let p = params.with_temperature(t)?;
            let mut row = MassRow {
                temperature: t,
                mass_method: method.name(),
                converged: true,
                m_star_over_m: f64::NAN,
                m_star_star_over_m: None,
                residual: None,
                iterations: None,
                table_q_min: grid.q_min(),
                table_q_max: grid.q_max(),
                table_nodes: grid.len(),
            };
            match inputs.resolve(&p) {
                Ok(r) => {
                    row.m_star_over_m = r.m_star / m;
                    row.m_star_star_over_m = Some(r.m_star_star / m);
                    row.residual = Some(r.residual);
                    row.iterations = Some(r.iterations);
                }
                Err(crate::error::CliError::Numerical(Error::FixedPointNotConverged { history })) => {
                    row.converged = false;
                    row.m_star_over_m = history.last().copied().unwrap_or(f64::NAN);
                    row.iterations = Some(history.len());
                }
                Err(e) => return Err(e),
            }
            Ok(row)
        })
        .collect()
}

pub fn run_mass(
    s: &TabulatedFunction,
    params: &SystemParams,
    method: MassMethodName,
    temperatures: &[f64],
    t_ref: Option<f64>,
    out_dir: &Path,
) -> Result<(Vec<MassRow>, PathBuf)> {
    let rows = mass_rows(s, params, method, temperatures, t_ref)?;
    let path = output::write_csv(out_dir, MASS_CSV, &rows)?;
    Ok((rows, path))
}
