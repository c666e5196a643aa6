//! Temperature sweeps: one thermodynamic row per temperature, one S(q) row
//! per (temperature, q).

use std::path::{Path, PathBuf};

use bosepair_core::thermo::ThermoReport;
use bosepair_core::{Error, IdealGasState, PairPotential, QGrid, TabulatedFunction};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{GridSpec, RunConfig, Spacing};
use crate::error::{CliError, Result};
use crate::ingest;
use crate::masses::{MassInputs, MassResult};
use crate::output::{self, Units, UNITS};
use crate::verify;

pub const THERMO_CSV: &str = "thermo.csv";
pub const SOFQ_CSV: &str = "sofq.csv";
pub const RUN_JSON: &str = "run.json";

/// Grid metadata carried on every row.
#[derive(Debug, Clone, Serialize)]
struct GridColumns {
    grid_q_min: f64,
    grid_q_max: f64,
    grid_nodes: usize,
    grid_spacing: &'static str,
    grid_rel_tol: f64,
}

impl From<&GridSpec> for GridColumns {
    fn from(g: &GridSpec) -> Self {
        Self {
            grid_q_min: g.q_min,
            grid_q_max: g.q_max,
            grid_nodes: g.nodes,
            grid_spacing: match g.spacing {
                Spacing::Log => "log",
                Spacing::Linear => "linear",
            },
            grid_rel_tol: g.rel_tol,
        }
    }
}

/// One row of `thermo.csv`; columns in declaration order.
#[derive(Debug, Clone, Serialize)]
pub struct ThermoRow {
    pub temperature: f64,
    pub status: &'static str,
    pub mass_method: &'static str,
    pub m_star_over_m: f64,
    pub m_star_star_over_m: f64,
    pub mass_residual: f64,
    pub mass_iterations: usize,
    pub z0: Option<f64>,
    pub condensate_fraction: Option<f64>,
    pub ln_z_per_n: Option<f64>,
    pub free_energy_per_n: Option<f64>,
    pub energy_per_n: Option<f64>,
    pub potential_per_n: Option<f64>,
    pub kinetic_per_n: Option<f64>,
    pub energy_ideal: Option<f64>,
    pub energy_ground_state: Option<f64>,
    pub energy_occupation: Option<f64>,
    pub energy_sinh_difference: Option<f64>,
    pub energy_structure: Option<f64>,
    pub instability_q: Option<f64>,
    pub grid_q_min: f64,
    pub grid_q_max: f64,
    pub grid_nodes: usize,
    pub grid_spacing: &'static str,
    pub grid_rel_tol: f64,
}

/// One row of `sofq.csv`.
#[derive(Debug, Clone, Serialize)]
pub struct SofqRow {
    pub temperature: f64,
    pub q: f64,
    pub s_of_q: f64,
    pub s0_of_q: f64,
    pub mass_method: &'static str,
    pub m_star_over_m: f64,
    pub grid_q_min: f64,
    pub grid_q_max: f64,
    pub grid_nodes: usize,
    pub grid_spacing: &'static str,
    pub grid_rel_tol: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub units: Units,
    pub config: &'a RunConfig,
    pub thermo_columns: Vec<&'static str>,
    pub sofq_columns: Vec<&'static str>,
    pub instabilities: Vec<f64>,
    pub verify_reports: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<ThermoRow>,
    pub sofq: Vec<SofqRow>,
    pub verify: Vec<verify::Report>,
}

impl SweepOutcome {
    pub fn instabilities(&self) -> Vec<f64> {
        self.rows.iter().filter(|r| r.status != "ok").map(|r| r.temperature).collect()
    }

    pub fn verification_failed(&self) -> bool {
        self.verify.iter().any(|r| !r.passed)
    }
}

pub const THERMO_COLUMNS: [&str; 25] = [
    "temperature",
    "status",
    "mass_method",
    "m_star_over_m",
    "m_star_star_over_m",
    "mass_residual",
    "mass_iterations",
    "z0",
    "condensate_fraction",
    "ln_z_per_n",
    "free_energy_per_n",
    "energy_per_n",
    "potential_per_n",
    "kinetic_per_n",
    "energy_ideal",
    "energy_ground_state",
    "energy_occupation",
    "energy_sinh_difference",
    "energy_structure",
    "instability_q",
    "grid_q_min",
    "grid_q_max",
    "grid_nodes",
    "grid_spacing",
    "grid_rel_tol",
];

pub const SOFQ_COLUMNS: [&str; 11] = [
    "temperature",
    "q",
    "s_of_q",
    "s0_of_q",
    "mass_method",
    "m_star_over_m",
    "grid_q_min",
    "grid_q_max",
    "grid_nodes",
    "grid_spacing",
    "grid_rel_tol",
];

struct Point {
    row: ThermoRow,
    sofq: Vec<SofqRow>,
}

fn evaluate(
    config: &RunConfig,
    potential: &PairPotential,
    grid: &QGrid,
    sq: Option<&TabulatedFunction>,
    t: f64,
) -> Result<Point> {
    let params = config.params(t)?;
    let m = params.mass();
    let inputs = MassInputs {
        method: config.mass.method,
        sq,
        potential: Some(potential),
        grid,
        t_ref: config.mass.t_ref,
    };
    let MassResult {
        m_star,
        m_star_star,
        residual,
        iterations,
    } = inputs.resolve(&params)?;
    let gc = GridColumns::from(&config.grid);
    let mut row = ThermoRow {
        temperature: t,
        status: "ok",
        mass_method: config.mass.method.name(),
        m_star_over_m: m_star / m,
        m_star_star_over_m: m_star_star / m,
        mass_residual: residual,
        mass_iterations: iterations,
        z0: None,
        condensate_fraction: None,
        ln_z_per_n: None,
        free_energy_per_n: None,
        energy_per_n: None,
        potential_per_n: None,
        kinetic_per_n: None,
        energy_ideal: None,
        energy_ground_state: None,
        energy_occupation: None,
        energy_sinh_difference: None,
        energy_structure: None,
        instability_q: None,
        grid_q_min: gc.grid_q_min,
        grid_q_max: gc.grid_q_max,
        grid_nodes: gc.grid_nodes,
        grid_spacing: gc.grid_spacing,
        grid_rel_tol: gc.grid_rel_tol,
    };
    let ideal = IdealGasState::new(&params, m_star)?;
    row.z0 = Some(ideal.z0());
    row.condensate_fraction = Some(ideal.condensate_fraction());
    let report = match ThermoReport::compute(potential, &params, m_star, m_star_star, grid, &ideal) {
        Ok(r) => r,
        Err(Error::ThermoInstability { q, .. }) => {
            row.status = "instability";
            row.instability_q = Some(q);
            return Ok(Point { row, sofq: Vec::new() });
        }
        Err(e) => return Err(e.into()),
    };
    row.ln_z_per_n = Some(report.ln_z_per_n);
    row.free_energy_per_n = Some(report.free_energy_per_n);
    row.energy_per_n = Some(report.energy_per_n);
    row.potential_per_n = Some(report.potential_per_n);
    row.kinetic_per_n = Some(report.kinetic_per_n);
    row.energy_ideal = Some(report.energy_terms.ideal);
    row.energy_ground_state = Some(report.energy_terms.ground_state);
    row.energy_occupation = Some(report.energy_terms.occupation);
    row.energy_sinh_difference = Some(report.energy_terms.sinh_difference);
    row.energy_structure = Some(report.energy_terms.structure);
    let sofq = report
        .s_of_q
        .nodes()
        .iter()
        .zip(report.s_of_q.values())
        .map(|(&q, &s)| {
            Ok(SofqRow {
                temperature: t,
                q,
                s_of_q: s,
                s0_of_q: ideal.s0(q)?,
                mass_method: row.mass_method,
                m_star_over_m: row.m_star_over_m,
                grid_q_min: gc.grid_q_min,
                grid_q_max: gc.grid_q_max,
                grid_nodes: gc.grid_nodes,
                grid_spacing: gc.grid_spacing,
                grid_rel_tol: gc.grid_rel_tol,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Point { row, sofq })
}

/// Evaluate every temperature of `config`; temperatures run concurrently
/// and rows come back in configuration order.
pub fn compute_sweep(config: &RunConfig) -> Result<SweepOutcome> {
    if config.temperatures.is_empty() {
        return Err(CliError::validation("temperature list is empty"));
    }
    let first = config.params(config.temperatures[0])?;
    let potential = config.build_potential(&first)?;
    let grid = config.grid.build()?;
    let sq = config.mass_sq_file().map(ingest::ingest_sq).transpose()?;
    let points = config
        .temperatures
        .par_iter()
        .map(|&t| evaluate(config, &potential, &grid, sq.as_ref(), t))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(points.len());
    let mut sofq = Vec::new();
    for p in points {
        rows.push(p.row);
        sofq.extend(p.sofq);
    }
    let verify = config
        .verify
        .suites
        .iter()
        .map(|s| verify::run_suite(s, config.verify.seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepOutcome { rows, sofq, verify })
}

/// Run the sweep and write `thermo.csv`, `sofq.csv`, `run.json` and any
/// requested verification reports into `out_dir`.
pub fn run_sweep(config: &RunConfig, out_dir: &Path) -> Result<(SweepOutcome, Vec<PathBuf>)> {
    let outcome = compute_sweep(config)?;
    let mut files = vec![
        output::write_csv(out_dir, THERMO_CSV, &outcome.rows)?,
        output::write_csv(out_dir, SOFQ_CSV, &outcome.sofq)?,
    ];
    let mut names = Vec::new();
    for r in &outcome.verify {
        let name = verify::report_file_name(&r.suite);
        files.push(output::write_json(out_dir, &name, r)?);
        names.push(name);
    }
    let meta = RunMetadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        units: UNITS,
        config,
        thermo_columns: THERMO_COLUMNS.to_vec(),
        sofq_columns: SOFQ_COLUMNS.to_vec(),
        instabilities: outcome.instabilities(),
        verify_reports: names,
    };
    files.push(output::write_json(out_dir, RUN_JSON, &meta)?);
    Ok((outcome, files))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_lists_match_serialized_headers() {
        let cfg = RunConfig::from_str(
            "[potential]\nmodel = zero\n[temperatures]\nlist = 2\n[grid]\nnodes = 8\n",
            Path::new("."),
        )
        .unwrap();
        let out = compute_sweep(&cfg).unwrap();
        let head = |b: Vec<u8>| String::from_utf8(b).unwrap().lines().next().unwrap().to_string();
        assert_eq!(head(output::csv_bytes(&out.rows).unwrap()), THERMO_COLUMNS.join(","));
        assert_eq!(head(output::csv_bytes(&out.sofq).unwrap()), SOFQ_COLUMNS.join(","));
        assert_eq!(out.sofq.len(), 8);
    }
}
