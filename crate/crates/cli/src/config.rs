//! Run configuration: sectioned `key = value` text.
//!
//! ```ini
//! [system]
//! preset = he4            # or: mass = 4.0026, density = 0.02185
//! hbar_scale = 1
//!
//! [potential]             # exactly one of model, nu_file, sq_file
//! model = gaussian        # gaussian | screened | zero
//! amplitude = 60          # K·Å³
//! sigma = 1.0             # Å (gaussian)
//! kappa = 1.0             # Å⁻¹ (screened)
//! nu0 = 60                # optional override of the q = 0 value
//!
//! [temperatures]          # either list, or min/max/count with spacing
//! list = 1.0, 2.0, 4.0
//!
//! [mass]
//! method = bare           # bare | zero_t | classical | sewed | self_consistent
//! sq_file = he4_sq.dat    # S(q) used by the mass closures
//! t_ref = 3.13
//!
//! [grid]
//! q_min = 0.02
//! q_max = 8
//! nodes = 512
//! spacing = log           # log | linear
//! rel_tol = 1e-10
//!
//! [output]
//! dir = out
//!
//! [verify]
//! suites = limits, consistency
//! seed = 1
//!
//! [dm]
//! particles = 3
//! box_side = 10
//! shell = 1
//! temperature = 2
//! hbar_scale = 1
//! pairs = 20
//! seed = 7
//! ```
//!
//! Relative file paths resolve against the directory of the config file.

use std::path::{Path, PathBuf};

use bosepair_core::{PairPotential, QGrid, SystemParams};
use ini::{Ini, Properties};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::ingest;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemSpec {
    He4,
    Explicit { mass: f64, density: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    Zero,
    Gaussian { amplitude: f64, sigma: f64 },
    Screened { amplitude: f64, kappa: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSource {
    Model { model: ModelSpec, nu0: Option<f64> },
    Tabulated { path: PathBuf, nu0: Option<f64> },
    Inverted { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MassMethodName {
    Bare,
    ZeroT,
    Classical,
    Sewed,
    SelfConsistent,
}

impl MassMethodName {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "bare" => Self::Bare,
            "zero_t" => Self::ZeroT,
            "classical" => Self::Classical,
            "sewed" => Self::Sewed,
            "self_consistent" => Self::SelfConsistent,
            _ => {
                return Err(CliError::validation(format!(
                    "unknown mass method `{s}` (bare, zero_t, classical, sewed, self_consistent)"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Bare => "bare",
            Self::ZeroT => "zero_t",
            Self::Classical => "classical",
            Self::Sewed => "sewed",
            Self::SelfConsistent => "self_consistent",
        }
    }

    /// Whether the method gives a temperature-dependent `m*`.
    pub fn depends_on_temperature(self) -> bool {
        matches!(self, Self::Classical | Self::Sewed | Self::SelfConsistent)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassSpec {
    pub method: MassMethodName,
    pub sq_file: Option<PathBuf>,
    pub t_ref: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub nodes: usize,
    pub spacing: Spacing,
    pub rel_tol: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            q_min: 0.02,
            q_max: 8.0,
            nodes: 512,
            spacing: Spacing::Log,
            rel_tol: 1e-10,
        }
    }
}

impl GridSpec {
    pub fn build(&self) -> Result<QGrid> {
        let g = match self.spacing {
            Spacing::Log => QGrid::log_spaced(self.q_min, self.q_max, self.nodes)?,
            Spacing::Linear => QGrid::linear(self.q_min, self.q_max, self.nodes)?,
        };
        Ok(g.with_rel_tol(self.rel_tol))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySpec {
    pub suites: Vec<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DmSpec {
    pub particles: usize,
    pub box_side: f64,
    pub shell: i64,
    pub temperature: f64,
    pub hbar_scale: f64,
    pub pairs: usize,
    pub seed: u64,
}

impl Default for DmSpec {
    fn default() -> Self {
        Self {
            particles: 3,
            box_side: 10.0,
            shell: 1,
            temperature: 2.0,
            hbar_scale: 1.0,
            pairs: 20,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub system: SystemSpec,
    pub hbar_scale: f64,
    pub potential: PotentialSource,
    pub temperatures: Vec<f64>,
    pub mass: MassSpec,
    pub grid: GridSpec,
    pub output_dir: PathBuf,
    pub verify: VerifySpec,
    pub dm: DmSpec,
}

pub const SUITES: [&str; 4] = ["limits", "consistency", "density-matrix", "mass"];

const KEYS: &[(&str, &[&str])] = &[
    ("system", &["preset", "mass", "density", "hbar_scale"]),
    ("potential", &["model", "nu_file", "sq_file", "amplitude", "sigma", "kappa", "nu0"]),
    ("temperatures", &["list", "min", "max", "count", "spacing"]),
    ("mass", &["method", "sq_file", "t_ref"]),
    ("grid", &["q_min", "q_max", "nodes", "spacing", "rel_tol"]),
    ("output", &["dir"]),
    ("verify", &["suites", "seed"]),
    ("dm", &["particles", "box_side", "shell", "temperature", "hbar_scale", "pairs", "seed"]),
];

struct Section<'a> {
    name: &'a str,
    props: Option<&'a Properties>,
}

impl Section<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.props.and_then(|p| p.get(key)).map(str::trim)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                CliError::validation(format!("[{}] {key} = `{v}` is not a valid value", self.name))
            }),
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.parse::<f64>(key)? {
            Some(v) if !v.is_finite() => Err(CliError::validation(format!("[{}] {key} must be finite", self.name))),
            v => Ok(v),
        }
    }

    fn positive(&self, key: &str) -> Result<Option<f64>> {
        match self.f64(key)? {
            Some(v) if !(v > 0.0) => Err(CliError::validation(format!("[{}] {key} = {v} must be > 0", self.name))),
            v => Ok(v),
        }
    }

    fn require<T>(&self, key: &str, v: Option<T>) -> Result<T> {
        v.ok_or_else(|| CliError::validation(format!("[{}] {key} is required", self.name)))
    }
}

fn parse_list(name: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::validation(format!("{name}: `{s}` is not a number")))
        })
        .collect()
}

/// Parse a comma-separated temperature list; every entry must be > 0.
pub fn parse_temperatures(text: &str) -> Result<Vec<f64>> {
    let ts = parse_list("temperatures", text)?;
    check_temperatures(&ts)?;
    Ok(ts)
}

fn check_temperatures(ts: &[f64]) -> Result<()> {
    if ts.is_empty() {
        return Err(CliError::validation("temperature list is empty"));
    }
    if let Some(t) = ts.iter().find(|&&t| !(t > 0.0)) {
        return Err(CliError::validation(format!("temperature {t} must be > 0")));
    }
    Ok(())
}

fn resolve(base: &Path, p: &str) -> PathBuf {
    let p = PathBuf::from(p);
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_str(&text, base)
    }

    pub fn from_str(text: &str, base: &Path) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::validation(e.to_string()))?;
        for (name, props) in ini.iter() {
            let Some(name) = name else {
                if let Some((k, _)) = props.iter().next() {
                    return Err(CliError::validation(format!("key `{k}` outside any section")));
                }
                continue;
            };
            let Some((_, keys)) = KEYS.iter().find(|(s, _)| *s == name) else {
                return Err(CliError::validation(format!("unknown section [{name}]")));
            };
            if let Some((k, _)) = props.iter().find(|(k, _)| !keys.contains(k)) {
                return Err(CliError::validation(format!("unknown key `{k}` in [{name}]")));
            }
        }
        let sec = |name: &'static str| Section {
            name,
            props: ini.section(Some(name)),
        };

        let s = sec("system");
        let system = match (s.raw("preset"), s.positive("mass")?, s.positive("density")?) {
            (Some("he4"), None, None) | (None, None, None) => SystemSpec::He4,
            (Some(p), None, None) => return Err(CliError::validation(format!("unknown system preset `{p}`"))),
            (None, Some(mass), Some(density)) => SystemSpec::Explicit { mass, density },
            (Some(_), _, _) => return Err(CliError::validation("[system] give either preset or mass and density")),
            _ => return Err(CliError::validation("[system] explicit parameters need both mass and density")),
        };
        let hbar_scale = s.positive("hbar_scale")?.unwrap_or(1.0);

        let p = sec("potential");
        let nu0 = p.f64("nu0")?;
        let sources = ["model", "nu_file", "sq_file"].iter().filter(|k| p.raw(k).is_some()).count();
        if sources != 1 {
            return Err(CliError::validation(
                "[potential] needs exactly one of model, nu_file, sq_file",
            ));
        }
        let potential = if let Some(m) = p.raw("model") {
            let model = match m {
                "zero" => ModelSpec::Zero,
                "gaussian" => ModelSpec::Gaussian {
                    amplitude: p.require("amplitude", p.f64("amplitude")?)?,
                    sigma: p.require("sigma", p.positive("sigma")?)?,
                },
                "screened" => ModelSpec::Screened {
                    amplitude: p.require("amplitude", p.f64("amplitude")?)?,
                    kappa: p.require("kappa", p.positive("kappa")?)?,
                },
                _ => return Err(CliError::validation(format!("unknown potential model `{m}`"))),
            };
            PotentialSource::Model { model, nu0 }
        } else if let Some(f) = p.raw("nu_file") {
            PotentialSource::Tabulated {
                path: resolve(base, f),
                nu0,
            }
        } else {
            if nu0.is_some() {
                return Err(CliError::validation("[potential] nu0 cannot be set for an inverted potential"));
            }
            PotentialSource::Inverted {
                path: resolve(base, p.raw("sq_file").unwrap_or_default()),
            }
        };

        let t = sec("temperatures");
        let temperatures = match (t.raw("list"), t.positive("min")?, t.positive("max")?, t.parse::<usize>("count")?) {
            (Some(l), None, None, None) => parse_list("temperatures", l)?,
            (None, Some(lo), Some(hi), Some(n)) => {
                if !(hi >= lo) || n == 0 || (n == 1 && hi != lo) {
                    return Err(CliError::validation("[temperatures] needs min <= max and count >= 1"));
                }
                let log = match t.raw("spacing").unwrap_or("linear") {
                    "log" => true,
                    "linear" => false,
                    s => return Err(CliError::validation(format!("unknown spacing `{s}`"))),
                };
                (0..n)
                    .map(|i| {
                        let f = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
                        if log {
                            lo * (hi / lo).powf(f)
                        } else {
                            lo + (hi - lo) * f
                        }
                    })
                    .collect()
            }
            (None, None, None, None) => Vec::new(),
            _ => return Err(CliError::validation("[temperatures] give either list or min, max and count")),
        };
        if !temperatures.is_empty() || t.props.is_some() {
            check_temperatures(&temperatures)?;
        }

        let m = sec("mass");
        let mass = MassSpec {
            method: MassMethodName::parse(m.raw("method").unwrap_or("bare"))?,
            sq_file: m.raw("sq_file").map(|f| resolve(base, f)),
            t_ref: m.positive("t_ref")?,
        };

        let g = sec("grid");
        let d = GridSpec::default();
        let grid = GridSpec {
            q_min: g.positive("q_min")?.unwrap_or(d.q_min),
            q_max: g.positive("q_max")?.unwrap_or(d.q_max),
            nodes: g.parse("nodes")?.unwrap_or(d.nodes),
            spacing: match g.raw("spacing").unwrap_or("log") {
                "log" => Spacing::Log,
                "linear" => Spacing::Linear,
                s => return Err(CliError::validation(format!("unknown grid spacing `{s}`"))),
            },
            rel_tol: g.positive("rel_tol")?.unwrap_or(d.rel_tol),
        };
        if !(grid.q_max > grid.q_min) || grid.nodes < 2 {
            return Err(CliError::validation("[grid] needs q_min < q_max and at least 2 nodes"));
        }

        let output_dir = PathBuf::from(sec("output").raw("dir").unwrap_or("out"));

        let v = sec("verify");
        let suites: Vec<String> = v
            .raw("suites")
            .map(|s| s.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
            .unwrap_or_default();
        if let Some(bad) = suites.iter().find(|s| !SUITES.contains(&s.as_str())) {
            return Err(CliError::validation(format!("unknown verification suite `{bad}`")));
        }
        let verify = VerifySpec {
            suites,
            seed: v.parse("seed")?.unwrap_or(1),
        };

        let s = sec("dm");
        let dd = DmSpec::default();
        let dm = DmSpec {
            particles: s.parse("particles")?.unwrap_or(dd.particles),
            box_side: s.positive("box_side")?.unwrap_or(dd.box_side),
            shell: s.parse("shell")?.unwrap_or(dd.shell),
            temperature: s.positive("temperature")?.unwrap_or(dd.temperature),
            hbar_scale: s.positive("hbar_scale")?.unwrap_or(dd.hbar_scale),
            pairs: s.parse("pairs")?.unwrap_or(dd.pairs),
            seed: s.parse("seed")?.unwrap_or(dd.seed),
        };
        if !(1..=bosepair_core::density_matrix::MAX_PARTICLES).contains(&dm.particles) || dm.shell < 1 {
            return Err(CliError::validation("[dm] needs 1 <= particles <= 8 and shell >= 1"));
        }

        Ok(Self {
            system,
            hbar_scale,
            potential,
            temperatures,
            mass,
            grid,
            output_dir,
            verify,
            dm,
        })
    }

    /// State-point parameters at temperature `t`.
    pub fn params(&self, t: f64) -> Result<SystemParams> {
        let p = match self.system {
            SystemSpec::He4 => SystemParams::helium4(t)?,
            SystemSpec::Explicit { mass, density } => SystemParams::new(mass, density, t)?,
        };
        Ok(p.with_hbar_scale(self.hbar_scale)?)
    }

    /// Build the pair potential; inversion uses `params` at the first
    /// temperature.
    pub fn build_potential(&self, params: &SystemParams) -> Result<PairPotential> {
        match &self.potential {
            PotentialSource::Model { model, nu0 } => {
                let pot = match *model {
                    ModelSpec::Zero => PairPotential::zero(),
                    ModelSpec::Gaussian { amplitude, sigma } => PairPotential::gaussian(amplitude, sigma)?,
                    ModelSpec::Screened { amplitude, kappa } => PairPotential::screened(amplitude, kappa)?,
                };
                Ok(match nu0 {
                    Some(v) => pot.with_nu0(*v)?,
                    None => pot,
                })
            }
            PotentialSource::Tabulated { path, nu0 } => {
                let table = ingest::ingest_nu(path)?;
                let v = nu0.unwrap_or(table.values()[0]);
                Ok(PairPotential::tabulated(table, v)?)
            }
            PotentialSource::Inverted { path } => {
                let s = ingest::ingest_sq(path)?;
                Ok(bosepair_core::pair_theory::invert_structure_factor(&s, params)?)
            }
        }
    }

    /// The S(q) file feeding the mass closures: `[mass] sq_file`, else the
    /// inverted potential's source.
    pub fn mass_sq_file(&self) -> Option<&Path> {
        self.mass.sq_file.as_deref().or(match &self.potential {
            PotentialSource::Inverted { path } => Some(path.as_path()),
            _ => None,
        })
    }
}

/// Environment variable overriding the output directory of every subcommand.
pub const OUT_DIR_ENV: &str = "BOSEPAIR_OUT_DIR";

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        RunConfig::from_str(text, Path::new("/cfg"))
    }

    const BASE: &str = "[potential]\nmodel = gaussian\namplitude = 60\nsigma = 1\n";

    #[test]
    fn minimal_config_uses_defaults() {
        let c = parse(&format!("{BASE}[temperatures]\nlist = 1, 2.5\n")).unwrap();
        assert_eq!(c.system, SystemSpec::He4);
        assert_eq!(c.temperatures, vec![1.0, 2.5]);
        assert_eq!(c.mass.method, MassMethodName::Bare);
        assert_eq!(c.grid, GridSpec::default());
        assert_eq!(c.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn range_temperatures() {
        let c = parse(&format!("{BASE}[temperatures]\nmin = 1\nmax = 4\ncount = 3\nspacing = log\n")).unwrap();
        assert_eq!(c.temperatures.len(), 3);
        assert!((c.temperatures[1] - 2.0).abs() < 1e-15);
        assert_eq!(c.temperatures[2], 4.0);
    }

    #[test]
    fn empty_or_non_positive_temperatures_rejected() {
        assert!(matches!(parse(&format!("{BASE}[temperatures]\nlist =\n")), Err(CliError::Validation(_))));
        assert!(parse(&format!("{BASE}[temperatures]\nlist = 1, -2\n")).is_err());
        assert!(parse_temperatures("").is_err());
        assert!(parse_temperatures("0").is_err());
    }

    #[test]
    fn exactly_one_potential_source() {
        assert!(parse("[potential]\nmodel = zero\nsq_file = a.dat\n").is_err());
        assert!(parse("[potential]\n").is_err());
        let c = parse("[potential]\nsq_file = a.dat\n").unwrap();
        assert_eq!(c.potential, PotentialSource::Inverted { path: PathBuf::from("/cfg/a.dat") });
        assert_eq!(c.mass_sq_file(), Some(Path::new("/cfg/a.dat")));
    }

    #[test]
    fn unknown_keys_sections_and_values_rejected() {
        assert!(parse(&format!("{BASE}[grid]\nnode = 3\n")).is_err());
        assert!(parse(&format!("{BASE}[extra]\n")).is_err());
        assert!(parse(&format!("{BASE}[mass]\nmethod = magic\n")).is_err());
        assert!(parse(&format!("{BASE}[verify]\nsuites = limits, nope\n")).is_err());
        assert!(parse("[potential]\nmodel = gaussian\namplitude = 60\n").is_err());
        assert!(parse(&format!("{BASE}[system]\nmass = 4\n")).is_err());
    }

    #[test]
    fn explicit_system_and_scaling() {
        let c = parse(&format!("{BASE}[system]\nmass = 4\ndensity = 0.02\nhbar_scale = 0.5\n")).unwrap();
        let p = c.params(2.0).unwrap();
        assert_eq!(p.mass(), 4.0);
        assert_eq!(p.hbar_scale(), 0.5);
    }
}
