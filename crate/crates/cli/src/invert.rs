//! Zero-temperature inversion of a measured S(q) into `ν_q` and the
//! excitation spectrum.

use std::path::{Path, PathBuf};

use bosepair_core::pair_theory::{invert_structure_factor, SpectrumTable};
use bosepair_core::{SystemParams, TabulatedFunction};
use serde::Serialize;

use crate::error::Result;
use crate::output::{self, Units, UNITS};

pub const SPECTRUM_CSV: &str = "spectrum.csv";
pub const INVERT_JSON: &str = "invert.json";

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub q: f64,
    pub s_of_q: f64,
    pub nu_q: f64,
    pub free_energy: f64,
    pub alpha: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub q: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvertMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub units: Units,
    pub source: PathBuf,
    pub mass: f64,
    pub density: f64,
    pub hbar2_over_m: f64,
    pub nu0: f64,
    pub ground_state_energy_per_n: f64,
    pub roton_minimum: Option<Extremum>,
    pub columns: [&'static str; 6],
}

#[derive(Debug, Clone)]
pub struct Inversion {
    pub rows: Vec<SpectrumRow>,
    pub nu0: f64,
    pub e0_per_n: f64,
    pub roton_minimum: Option<Extremum>,
}

pub fn invert(s: &TabulatedFunction, params: &SystemParams) -> Result<Inversion> {
    let pot = invert_structure_factor(s, params)?;
    let spec = SpectrumTable::new(&pot, params, s.grid())?;
    let rows = s
        .nodes()
        .iter()
        .zip(s.values())
        .enumerate()
        .map(|(i, (&q, &sv))| SpectrumRow {
            q,
            s_of_q: sv,
            nu_q: pot.nu(q),
            free_energy: params.free_energy(q),
            alpha: spec.alpha[i],
            energy: spec.energy[i],
        })
        .collect();
    Ok(Inversion {
        rows,
        nu0: pot.nu0(),
        e0_per_n: spec.e0_per_n,
        roton_minimum: spec.roton_minimum().map(|i| Extremum {
            q: s.nodes()[i],
            energy: spec.energy[i],
        }),
    })
}

pub fn run_invert(s: &TabulatedFunction, source: &Path, params: &SystemParams, out_dir: &Path) -> Result<(Inversion, Vec<PathBuf>)> {
    let inv = invert(s, params)?;
    let meta = InvertMetadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        units: UNITS,
        source: source.to_path_buf(),
        mass: params.mass(),
        density: params.density(),
        hbar2_over_m: params.hbar2_over_m(),
        nu0: inv.nu0,
        ground_state_energy_per_n: inv.e0_per_n,
        roton_minimum: inv.roton_minimum,
        columns: ["q", "s_of_q", "nu_q", "free_energy", "alpha", "energy"],
    };
    let files = vec![
        output::write_csv(out_dir, SPECTRUM_CSV, &inv.rows)?,
        output::write_json(out_dir, INVERT_JSON, &meta)?,
    ];
    Ok((inv, files))
}
