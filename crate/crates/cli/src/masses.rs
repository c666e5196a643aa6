//! Effective-mass resolution shared by `sweep` and `mass`.

use bosepair_core::effective_mass::{self as em, SelfConsistentSpec};
use bosepair_core::ideal_gas::critical_temperature;
use bosepair_core::thermo::classical;
use bosepair_core::{Error, PairPotential, QGrid, SystemParams, TabulatedFunction};

use crate::config::MassMethodName;
use crate::error::{CliError, Result};

/// Relative temperature step of the centred difference giving `m**`.
pub const M_STAR_STAR_STEP: f64 = 1e-3;

/// Inputs an effective-mass method may draw on.
#[derive(Debug, Clone, Copy)]
pub struct MassInputs<'a> {
    pub method: MassMethodName,
    pub sq: Option<&'a TabulatedFunction>,
    pub potential: Option<&'a PairPotential>,
    pub grid: &'a QGrid,
    pub t_ref: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassResult {
    pub m_star: f64,
    pub m_star_star: f64,
    pub residual: f64,
    pub iterations: usize,
}

impl MassInputs<'_> {
    fn missing(&self) -> CliError {
        CliError::validation(format!(
            "mass method `{}` needs an S(q) table or a pair potential",
            self.method.name()
        ))
    }

    /// `m*` at one state point: `(m*, residual, iterations)`.
    pub fn solve(&self, params: &SystemParams) -> Result<(f64, f64, usize)> {
        let m = params.mass();
        let explicit = |v: f64| Ok((v, 0.0, 0));
        match (self.method, self.sq, self.potential) {
            (MassMethodName::Bare, _, _) => explicit(m),
            (MassMethodName::ZeroT, Some(s), _) => explicit(em::m_star_zero_t(s, params)?.m_star),
            (MassMethodName::ZeroT, None, Some(p)) => explicit(em::m_star_from_potential(p, params, self.grid)?),
            (MassMethodName::Classical, Some(s), _) => explicit(em::m_star_classical(s, params)?.m_star),
            (MassMethodName::Classical, None, Some(p)) => explicit(classical_from_potential(p, params, self.grid)?),
            (MassMethodName::Sewed, Some(s), _) => explicit(em::m_star_sewed(s, params, self.t_ref)?.m_star),
            (MassMethodName::Sewed, None, Some(p)) => {
                let m0 = em::m_star_from_potential(p, params, self.grid)?;
                let mc = classical_from_potential(p, params, self.grid)?;
                let t_ref = match self.t_ref {
                    Some(t) => t,
                    None => critical_temperature(params, m)?,
                };
                explicit(em::sew(m0, mc, params.temperature(), t_ref)?)
            }
            (MassMethodName::SelfConsistent, Some(s), _) => {
                let sol = em::m_star_self_consistent(s, params, &SelfConsistentSpec::default())?;
                Ok((sol.m_star, sol.residual, sol.iterations))
            }
            (MassMethodName::SelfConsistent, None, _) => Err(CliError::validation(
                "mass method `self_consistent` needs an S(q) table ([mass] sq_file or an inverted potential)",
            )),
            (_, None, None) => Err(self.missing()),
        }
    }

    /// `m*` and `m** = m*/(1 + β m* ∂(1/m*)/∂β)`.
    pub fn resolve(&self, params: &SystemParams) -> Result<MassResult> {
        let (m_star, residual, iterations) = self.solve(params)?;
        let m_star_star = if self.method.depends_on_temperature() {
            let t = params.temperature();
            let ts = [t * (1.0 - M_STAR_STAR_STEP), t, t * (1.0 + M_STAR_STAR_STEP)];
            let lo = self.solve(&params.with_temperature(ts[0])?)?.0;
            let hi = self.solve(&params.with_temperature(ts[2])?)?.0;
            em::m_star_star(&ts, &[lo, m_star, hi])?[1]
        } else {
            m_star
        };
        Ok(MassResult {
            m_star,
            m_star_star,
            residual,
            iterations,
        })
    }
}

fn classical_from_potential(p: &PairPotential, params: &SystemParams, grid: &QGrid) -> Result<f64> {
    Ok(em::m_star_classical_with(
        |q| Ok::<f64, Error>(classical::structure_factor(q, p, params)),
        params,
        grid,
    )?)
}
