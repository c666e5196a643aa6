//! Partition function, free energy, internal energy, the temperature-dependent
//! structure factor and the potential/kinetic energy split.
//!
//! All quantities are per particle in the thermodynamic limit; mode sums run
//! over `0 < q ≤ q_max` of the supplied grid.

use crate::error::{Error, Result};
use crate::grid::{sum_to_integral, QGrid};
use crate::ideal_gas::IdealGasState;
use crate::math::{bose, csch, ln_1p, ln_tanh_half, sech2, tanh_half};
use crate::pair_theory::{ground_state_energy, ln_ratio_one_minus_exp, Mode, PairPotential};
use crate::system::SystemParams;
use crate::tabulated::{Extrapolation, TabulatedFunction};

fn check_state(params: &SystemParams, m_star: f64, ideal: &IdealGasState) -> Result<()> {
    let p = ideal.params();
    if p.temperature() != params.temperature()
        || p.density() != params.density()
        || p.hbar2_over_m() != params.hbar2_over_m()
    {
        return Err(Error::invalid(
            "ideal",
            p.temperature(),
            "reference gas was built for a different state point",
        ));
    }
    if ideal.m_star() != m_star {
        return Err(Error::invalid("m_star", m_star, "differs from the reference gas mass"));
    }
    if !(params.temperature() > 0.0) {
        return Err(Error::invalid("temperature", params.temperature(), "requires T > 0"));
    }
    Ok(())
}

/// `Δ_q = α_q tanh(βE/2) - tanh(βε*/2)`, the shift that turns `S₀` into `S`.
fn shift(mode: &Mode, beta: f64) -> f64 {
    if mode.alpha == 1.0 && mode.energy == mode.eps_star {
        return 0.0;
    }
    mode.alpha * tanh_half(beta * mode.energy) - tanh_half(beta * mode.eps_star)
}

fn denominator(q: f64, s0: f64, delta: f64, temperature: f64) -> Result<f64> {
    let d = 1.0 + s0 * delta;
    if d > 0.0 {
        Ok(d)
    } else {
        Err(Error::ThermoInstability {
            q,
            temperature,
            argument: d,
        })
    }
}

/// `ln Z_N / N`.
pub fn ln_partition(
    potential: &PairPotential,
    params: &SystemParams,
    m_star: f64,
    grid: &QGrid,
    ideal: &IdealGasState,
) -> Result<f64> {
    check_state(params, m_star, ideal)?;
    let beta = params.beta();
    let t = params.temperature();
    let e0 = ground_state_energy(potential, params, grid)?;
    let modes = sum_to_integral(
        |q| {
            let mode = Mode::new(q, potential, params, m_star)?;
            let (y_e, y_s) = (beta * mode.energy, beta * mode.eps_star);
            let a = ln_ratio_one_minus_exp(y_s, y_e);
            let b = if y_e == y_s {
                0.5 * mode.ln_alpha()
            } else {
                0.5 * (mode.ln_alpha() + ln_tanh_half(y_e) - ln_tanh_half(y_s))
            };
            let delta = shift(&mode, beta);
            let c = if delta == 0.0 {
                0.0
            } else {
                let s0 = ideal.s0(q)?;
                -0.5 * crate::math::ln(denominator(q, s0, delta, t)?)
            };
            Ok(a + b + c)
        },
        params,
        grid,
    )?;
    Ok(ideal.ln_z0_per_n()? - beta * e0 + modes)
}

/// `S(q, T) = S₀(q) / [1 + S₀(q) Δ_q]`.
pub fn structure_factor(
    q: f64,
    potential: &PairPotential,
    params: &SystemParams,
    m_star: f64,
    ideal: &IdealGasState,
) -> Result<f64> {
    check_state(params, m_star, ideal)?;
    let mode = Mode::new(q, potential, params, m_star)?;
    let s0 = ideal.s0(q)?;
    let delta = shift(&mode, params.beta());
    if delta == 0.0 {
        return Ok(s0);
    }
    Ok(s0 / denominator(q, s0, delta, params.temperature())?)
}

/// `S(q, T)` on the grid nodes; constant 1 above the grid, linear below.
pub fn structure_factor_table(
    potential: &PairPotential,
    params: &SystemParams,
    m_star: f64,
    grid: &QGrid,
    ideal: &IdealGasState,
) -> Result<TabulatedFunction> {
    TabulatedFunction::from_fn(
        grid.clone(),
        Extrapolation::Linear,
        Extrapolation::Constant(1.0),
        |q| structure_factor(q, potential, params, m_star, ideal),
    )
}

/// The separately integrated pieces of the internal energy per particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyTerms {
    /// `(1/N) Σ ε**_q n_q` of the reference gas.
    pub ideal: f64,
    /// `E₀/N`.
    pub ground_state: f64,
    /// `(1/N) Σ [E/(e^{βE}-1) - ε**/(e^{βε*}-1)]`.
    pub occupation: f64,
    /// `-(1/2N) Σ [E/sinh βE - ε**/sinh βε*]`.
    pub sinh_difference: f64,
    /// `(1/2N) Σ {½S₀[αE sech²(βE/2) - ε** sech²(βε*/2)] + Δ ∂S₀/∂β} / (1 + S₀Δ)`.
    pub structure: f64,
}

impl EnergyTerms {
    pub fn total(&self) -> f64 {
        self.ideal + self.ground_state + self.occupation + self.sinh_difference + self.structure
    }
}

/// Internal energy per particle, term by term.
pub fn energy_terms(
    potential: &PairPotential,
    params: &SystemParams,
    m_star: f64,
    m_star_star: f64,
    grid: &QGrid,
    ideal: &IdealGasState,
) -> Result<EnergyTerms> {
    check_state(params, m_star, ideal)?;
    let beta = params.beta();
    let t = params.temperature();
    let ratio = m_star / m_star_star;
    let ideal_term = ideal.energy_per_n(m_star_star)?;
    let e0 = ground_state_energy(potential, params, grid)?;
    let parts = |q: f64, which: u8| -> Result<f64> {
        let mode = Mode::new(q, potential, params, m_star)?;
        let (e, es) = (mode.energy, mode.eps_star);
        let ess = ratio * es;
        let (y_e, y_s) = (beta * e, beta * es);
        match which {
            0 => Ok(e * bose(y_e) - ess * bose(y_s)),
            1 => Ok(-0.5 * (e * csch(y_e) - ess * csch(y_s))),
            _ => {
                let delta = shift(&mode, beta);
                let bracket = mode.alpha * e * sech2(0.5 * y_e) - ess * sech2(0.5 * y_s);
                if delta == 0.0 && bracket == 0.0 {
                    return Ok(0.0);
                }
                let s0 = ideal.s0(q)?;
                let d = denominator(q, s0, delta, t)?;
                let ds0 = if delta == 0.0 {
                    0.0
                } else {
                    ideal.ds0_dbeta(q, m_star_star)?
                };
                Ok(0.5 * (0.5 * s0 * bracket + ds0 * delta) / d)
            }
        }
    };
    let occupation = sum_to_integral(|q| parts(q, 0), params, grid)?;
    let sinh_difference = sum_to_integral(|q| parts(q, 1), params, grid)?;
    let structure = sum_to_integral(|q| parts(q, 2), params, grid)?;
    Ok(EnergyTerms {
        ideal: ideal_term,
        ground_state: e0,
        occupation,
        sinh_difference,
        structure,
    })
}

/// Internal energy per particle `E/N`.
pub fn energy(
    potential: &PairPotential,
    params: &SystemParams,
    m_star: f64,
    m_star_star: f64,
    grid: &QGrid,
    ideal: &IdealGasState,
) -> Result<f64> {
    Ok(energy_terms(potential, params, m_star, m_star_star, grid, ideal)?.total())
}

/// Mean potential energy per particle `ρν₀/2 + (ρ/2N) Σ_q ν_q [S(q) - 1]`.
pub fn potential_energy(
    potential: &PairPotential,
    params: &SystemParams,
    m_star: f64,
    grid: &QGrid,
    ideal: &IdealGasState,
) -> Result<f64> {
    check_state(params, m_star, ideal)?;
    let rho = params.density();
    let sum = sum_to_integral(
        |q| {
            let nu = potential.nu(q);
            if nu == 0.0 {
                return Ok(0.0);
            }
            let s = structure_factor(q, potential, params, m_star, ideal)?;
            Ok(0.5 * rho * nu * (s - 1.0))
        },
        params,
        grid,
    )?;
    Ok(0.5 * rho * potential.nu0() + sum)
}

/// Per-temperature bundle of thermodynamic and structural outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoReport {
    pub temperature: f64,
    pub ln_z_per_n: f64,
    pub free_energy_per_n: f64,
    pub energy_per_n: f64,
    pub potential_per_n: f64,
    pub kinetic_per_n: f64,
    pub s_of_q: TabulatedFunction,
    pub m_star: f64,
    pub m_star_star: f64,
    pub energy_terms: EnergyTerms,
    pub condensate_fraction: f64,
    pub z0: f64,
}

impl ThermoReport {
    pub fn compute(
        potential: &PairPotential,
        params: &SystemParams,
        m_star: f64,
        m_star_star: f64,
        grid: &QGrid,
        ideal: &IdealGasState,
    ) -> Result<Self> {
        let ln_z = ln_partition(potential, params, m_star, grid, ideal)?;
        let terms = energy_terms(potential, params, m_star, m_star_star, grid, ideal)?;
        let e = terms.total();
        let phi = potential_energy(potential, params, m_star, grid, ideal)?;
        let s_of_q = structure_factor_table(potential, params, m_star, grid, ideal)?;
        let t = params.temperature();
        Ok(Self {
            temperature: t,
            ln_z_per_n: ln_z,
            free_energy_per_n: -t * ln_z,
            energy_per_n: e,
            potential_per_n: phi,
            kinetic_per_n: e - phi,
            s_of_q,
            m_star,
            m_star_star,
            energy_terms: terms,
            condensate_fraction: ideal.condensate_fraction(),
            z0: ideal.z0(),
        })
    }
}

/// The classical random-phase-approximation forms reached as `ħ → 0`.
pub mod classical {
    use super::*;
    use crate::math::{ln, sqrt, PI};

    fn x(potential: &PairPotential, params: &SystemParams, q: f64) -> f64 {
        params.beta() * params.density() * potential.nu(q)
    }

    /// `ln Z/N = 1 - ln ρλ³ - βρν₀/2 - (1/2N) Σ_q [ln(1 + βρν_q) - βρν_q]`.
    pub fn ln_partition(potential: &PairPotential, params: &SystemParams, grid: &QGrid) -> Result<f64> {
        let beta = params.beta();
        let lambda = sqrt(2.0 * PI * beta * params.hbar2_over_m());
        let d = params.density() * lambda * lambda * lambda;
        let sum = sum_to_integral(
            |q| {
                let v = x(potential, params, q);
                if !(v > -1.0) {
                    return Err(Error::ThermoInstability {
                        q,
                        temperature: params.temperature(),
                        argument: 1.0 + v,
                    });
                }
                Ok(0.5 * (ln_1p(v) - v))
            },
            params,
            grid,
        )?;
        Ok(1.0 - ln(d) - 0.5 * beta * params.density() * potential.nu0() - sum)
    }

    /// `E/N = 3T/2 + ρν₀/2 - (T/2N) Σ_q (βρν_q)²/(1 + βρν_q)`.
    pub fn energy(potential: &PairPotential, params: &SystemParams, grid: &QGrid) -> Result<f64> {
        let t = params.temperature();
        let sum = sum_to_integral(
            |q| {
                let v = x(potential, params, q);
                Ok(0.5 * t * v * v / (1.0 + v))
            },
            params,
            grid,
        )?;
        Ok(1.5 * t + 0.5 * params.density() * potential.nu0() - sum)
    }

    /// `S(q) = 1/(1 + βρν_q)`.
    pub fn structure_factor(q: f64, potential: &PairPotential, params: &SystemParams) -> f64 {
        1.0 / (1.0 + x(potential, params, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal_gas::critical_temperature;

    fn he(t: f64) -> SystemParams {
        SystemParams::helium4(t).unwrap()
    }

    fn tc() -> f64 {
        let p = he(1.0);
        critical_temperature(&p, p.mass()).unwrap()
    }

    fn grid() -> QGrid {
        QGrid::log_spaced(0.02, 8.0, 64).unwrap().with_rel_tol(1e-9)
    }

    fn state(p: &SystemParams) -> IdealGasState {
        IdealGasState::new(p, p.mass()).unwrap().with_rel_tol(1e-11)
    }

    #[test]
    fn switch_off_is_exact() {
        let zero = PairPotential::zero();
        for &f in &[0.5, 1.5] {
            let p = he(f * tc());
            let st = state(&p);
            let g = grid();
            let m = p.mass();
            assert_eq!(ln_partition(&zero, &p, m, &g, &st).unwrap(), st.ln_z0_per_n().unwrap());
            assert_eq!(energy(&zero, &p, m, m, &g, &st).unwrap(), st.energy_per_n(m).unwrap());
            for &q in &[0.1, 1.0, 3.0] {
                assert_eq!(structure_factor(q, &zero, &p, m, &st).unwrap(), st.s0(q).unwrap());
            }
            assert_eq!(potential_energy(&zero, &p, m, &g, &st).unwrap(), 0.0);
        }
    }

    #[test]
    fn mismatched_reference_gas_rejected() {
        let p = he(1.0);
        let st = state(&he(2.0));
        assert!(ln_partition(&PairPotential::zero(), &p, p.mass(), &grid(), &st).is_err());
    }

    #[test]
    fn energy_is_minus_dlnz_dbeta() {
        let pot = PairPotential::gaussian(60.0, 1.0).unwrap();
        for &f in &[0.6, 1.4] {
            let t = f * tc();
            let beta = 1.0 / t;
            let d = 1e-5 * beta;
            let m = he(1.0).mass();
            let g = grid();
            let lnz = |b: f64| {
                let p = he(1.0 / b);
                ln_partition(&pot, &p, m, &g, &state(&p)).unwrap()
            };
            let fd = -(lnz(beta + d) - lnz(beta - d)) / (2.0 * d);
            let p = he(t);
            let e = energy(&pot, &p, m, m, &g, &state(&p)).unwrap();
            assert!((e - fd).abs() < 1e-5 * e.abs(), "T={t}: {e} vs {fd}");
        }
    }

    #[test]
    fn kinetic_identity_and_free_energy() {
        let pot = PairPotential::gaussian(60.0, 1.0).unwrap();
        let p = he(2.0);
        let st = state(&p);
        let r = ThermoReport::compute(&pot, &p, p.mass(), p.mass(), &grid(), &st).unwrap();
        assert_eq!(r.kinetic_per_n, r.energy_per_n - r.potential_per_n);
        assert_eq!(r.free_energy_per_n, -r.temperature * r.ln_z_per_n);
        assert_eq!(r.s_of_q.values().len(), 64);
    }

    #[test]
    fn classical_forms_are_consistent() {
        let pot = PairPotential::gaussian(60.0, 1.0).unwrap();
        let g = grid();
        let t = 5.0;
        let b = 1.0 / t;
        let d = 1e-5 * b;
        let lnz = |b: f64| classical::ln_partition(&pot, &he(1.0 / b), &g).unwrap();
        let fd = -(lnz(b + d) - lnz(b - d)) / (2.0 * d);
        let e = classical::energy(&pot, &he(t), &g).unwrap();
        assert!((e - fd).abs() < 1e-7 * e.abs());
    }

    #[test]
    fn instability_is_reported() {
        let pot = PairPotential::gaussian(-8.0, 0.5).unwrap();
        let p = he(0.5);
        let st = state(&p);
        match structure_factor(0.05, &pot, &p, p.mass(), &st) {
            Err(Error::ThermoInstability { q, .. }) => assert_eq!(q, 0.05),
            Err(Error::StabilityViolation { .. }) => {}
            r => panic!("unexpected {r:?}"),
        }
    }

    #[test]
    fn low_temperature_reaches_bogoliubov() {
        let pot = PairPotential::gaussian(1250.0, 1.0).unwrap();
        let p = he(1e-3 * tc());
        let st = state(&p);
        let g = grid();
        let m = p.mass();
        for &q in g.nodes() {
            let s = structure_factor(q, &pot, &p, m, &st).unwrap();
            let a = crate::pair_theory::alpha_q(q, &pot, &p).unwrap();
            assert!((s - 1.0 / a).abs() < 1e-6, "q={q}");
        }
        let beta = p.beta();
        let phonons = sum_to_integral(
            |q| {
                let mode = Mode::new(q, &pot, &p, m)?;
                Ok(mode.energy * bose(beta * mode.energy))
            },
            &p,
            &g,
        )
        .unwrap();
        let e0 = ground_state_energy(&pot, &p, &g).unwrap();
        let e = energy(&pot, &p, m, m, &g, &st).unwrap();
        assert!((e - e0 - phonons).abs() < 1e-9);
    }

    #[test]
    fn small_hbar_reaches_classical_rpa() {
        let pot = PairPotential::gaussian(60.0, 1.0).unwrap();
        let g = grid();
        let p = he(5.0).with_hbar_scale(1e-3).unwrap();
        let st = state(&p);
        let m = p.mass();
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        let lz = ln_partition(&pot, &p, m, &g, &st).unwrap();
        assert!(rel(lz, classical::ln_partition(&pot, &p, &g).unwrap()) < 1e-3);
        let e = energy(&pot, &p, m, m, &g, &st).unwrap();
        assert!(rel(e, classical::energy(&pot, &p, &g).unwrap()) < 1e-3);
        for &q in &[0.1, 0.5, 1.0, 2.0, 4.0] {
            let s = structure_factor(q, &pot, &p, m, &st).unwrap();
            assert!(rel(s, classical::structure_factor(q, &pot, &p)) < 1e-3, "q={q}");
        }
    }
}
