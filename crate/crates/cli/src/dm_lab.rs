//! Finite-box density-matrix laboratory on seeded configuration pairs.

use std::path::{Path, PathBuf};

use bosepair_core::density_matrix::{box_modes, BoxSpectrum, Configuration};
use bosepair_core::{PairPotential, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{DmSpec, RunConfig};
use crate::error::Result;
use crate::output::{self, Units, UNITS};

pub const DM_CSV: &str = "dm.csv";
pub const DM_JSON: &str = "dm.json";

type Vec3 = [f64; 3];

/// `count` pairs `(x, x′)` of `n` positions drawn uniformly in `[0, L)³`.
pub fn sample_pairs(seed: u64, n: usize, box_side: f64, count: usize) -> Result<Vec<Configuration>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<Vec3> {
        (0..n)
            .map(|_| {
                [
                    rng.gen_range(0.0..box_side),
                    rng.gen_range(0.0..box_side),
                    rng.gen_range(0.0..box_side),
                ]
            })
            .collect()
    };
    (0..count)
        .map(|_| {
            let x = draw(&mut rng);
            let xp = draw(&mut rng);
            Ok(Configuration::new(x, xp, box_side)?)
        })
        .collect()
}

/// The pair-theory spectrum on the single box shell(s) `|n|² ≤ shell`.
pub fn spectrum(potential: &PairPotential, params: &SystemParams, spec: &DmSpec) -> Result<BoxSpectrum> {
    let modes = box_modes(spec.box_side, spec.shell)?;
    Ok(BoxSpectrum::new(potential, params, params.mass(), spec.particles, spec.box_side, &modes)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct DmRow {
    pub pair: usize,
    pub seed: u64,
    pub particles: usize,
    pub box_side: f64,
    pub shell: i64,
    pub temperature: f64,
    pub hbar_scale: f64,
    pub log_r0: f64,
    pub log_p: f64,
    pub log_r: f64,
    /// `ln R(x, x′) - ln R(x′, x)`.
    pub hermiticity_defect: f64,
    /// `ln R⁰ + ln PF - ln PF⁰ - ln R`.
    pub penrose_ratio_defect: f64,
    /// `ln P - N ln(1/V) - [-βE₀ + ln ψ₀(x) + ln ψ₀(x′)]`.
    pub ground_state_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DmMetadata<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub units: Units,
    pub config: &'a RunConfig,
    pub beta: f64,
    pub ground_state_energy: f64,
    pub min_energy: f64,
    pub modes: usize,
    pub positions: Vec<(Vec<Vec3>, Vec<Vec3>)>,
}

pub fn dm_rows(config: &RunConfig) -> Result<(BoxSpectrum, Vec<Configuration>, Vec<DmRow>)> {
    let spec = &config.dm;
    let params = config.params(spec.temperature)?.with_hbar_scale(config.hbar_scale * spec.hbar_scale)?;
    let potential = config.build_potential(&params)?;
    let s = spectrum(&potential, &params, spec)?;
    let pairs = sample_pairs(spec.seed, spec.particles, spec.box_side, spec.pairs)?;
    let rows = pairs
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let v = s.evaluate(c)?;
            let back = s.evaluate(&c.swapped())?;
            let ratio = v.log_r0 + s.penrose_feenberg(c)? - s.penrose_feenberg_ideal(c)?;
            Ok(DmRow {
                pair: i,
                seed: spec.seed,
                particles: spec.particles,
                box_side: spec.box_side,
                shell: spec.shell,
                temperature: spec.temperature,
                hbar_scale: params.hbar_scale(),
                log_r0: v.log_r0,
                log_p: v.log_p,
                log_r: v.log_r,
                hermiticity_defect: v.log_r - back.log_r,
                penrose_ratio_defect: ratio - v.log_r,
                ground_state_residual: s.ground_state_residual(c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((s, pairs, rows))
}

pub fn run_dm_lab(config: &RunConfig, out_dir: &Path) -> Result<(Vec<DmRow>, Vec<PathBuf>)> {
    let (s, pairs, rows) = dm_rows(config)?;
    let meta = DmMetadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        units: UNITS,
        config,
        beta: s.beta(),
        ground_state_energy: s.ground_state_energy(),
        min_energy: s.min_energy(),
        modes: s.modes().len(),
        positions: pairs
            .iter()
            .map(|c| (c.coords().to_vec(), c.coords_primed().to_vec()))
            .collect(),
    };
    let files = vec![
        output::write_csv(out_dir, DM_CSV, &rows)?,
        output::write_json(out_dir, DM_JSON, &meta)?,
    ];
    Ok((rows, files))
}
