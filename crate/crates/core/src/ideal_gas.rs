//! The reference ideal Bose gas of particles with mass `m*`: fugacity,
//! condensation temperature, occupation numbers, the pair structure factor
//! `S₀(q)` and its β-derivative, and the partition function.

use crate::error::{Error, Result};
use crate::math::{csch2, exp, exp_m1, ln, ln_1p, powf, sqrt, PI};
use crate::quadrature::{try_find_root, try_integrate, Domain, IntegrationSpec, RootSpec};
use crate::special::{bose_g, bose_g_mu, zeta};
use crate::system::SystemParams;

/// ζ(3/2).
pub const ZETA_3_2: f64 = 2.612_375_348_685_488;

/// `T_c = (2πħ²/m*) (ρ/ζ(3/2))^{2/3}`.
pub fn critical_temperature(params: &SystemParams, m_star: f64) -> Result<f64> {
    if !(m_star > 0.0 && m_star.is_finite()) {
        return Err(Error::invalid("m_star", m_star, "must be finite and > 0"));
    }
    Ok(2.0 * PI * params.hbar2_over(m_star) * powf(params.density() / ZETA_3_2, 2.0 / 3.0))
}

/// Bose occupation `1/(z⁻¹ e^{a p²} - 1)` with `ln z = ln_z ≤ 0` and
/// `a = βħ²/2m*`.
pub fn occupation(p: f64, ln_z: f64, a: f64) -> Result<f64> {
    if ln_z > 0.0 {
        return Err(Error::invalid("z0", exp(ln_z), "fugacity must not exceed 1"));
    }
    if !(p > 0.0) && !(ln_z < 0.0) {
        return Err(Error::ExcludedMode);
    }
    Ok(1.0 / exp_m1(a * p * p - ln_z))
}

/// Fugacity at the state point: 1 in the condensed phase, otherwise the root
/// of `g_{3/2}(z) = ρλ³`.
pub fn solve_fugacity(params: &SystemParams, m_star: f64) -> Result<f64> {
    Ok(exp(solve_ln_fugacity(params, m_star)?))
}

fn solve_ln_fugacity(params: &SystemParams, m_star: f64) -> Result<f64> {
    let t = params.temperature();
    if !(t > 0.0) {
        return Err(Error::invalid("temperature", t, "fugacity requires T > 0"));
    }
    let lambda = sqrt(2.0 * PI * params.beta() * params.hbar2_over(m_star));
    let d = params.density() * lambda * lambda * lambda;
    if d >= ZETA_3_2 {
        return Ok(0.0);
    }
    let lo = ln(d / ZETA_3_2);
    let hi = f64::min(ln(d), 0.0);
    if lo >= hi {
        return Ok(hi);
    }
    try_find_root(|u| Ok(bose_g_mu(1.5, -u)? - d), &RootSpec::new(lo, hi).tol(1e-15))
        .map_err(|e| match e {
            Error::NoSignChange { .. } => Error::Internal("fugacity root not bracketed"),
            e => e,
        })
}

/// Ideal Bose gas with mass `m*` at the temperature and density of `params`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealGasState {
    params: SystemParams,
    m_star: f64,
    ln_z0: f64,
    t_c: f64,
    condensate_fraction: f64,
    spec: IntegrationSpec,
}

impl IdealGasState {
    pub fn new(params: &SystemParams, m_star: f64) -> Result<Self> {
        let t_c = critical_temperature(params, m_star)?;
        let ln_z0 = solve_ln_fugacity(params, m_star)?;
        let t = params.temperature();
        let condensate_fraction = if t < t_c {
            1.0 - powf(t / t_c, 1.5)
        } else {
            0.0
        };
        Ok(Self {
            params: *params,
            m_star,
            ln_z0,
            t_c,
            condensate_fraction,
            spec: IntegrationSpec::with_rel_tol(1e-10),
        })
    }

    /// Tolerance for the momentum integrals inside `s0` and `ds0_dbeta`.
    pub fn with_spec(mut self, spec: IntegrationSpec) -> Self {
        self.spec = spec;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.spec.rel_tol = rel_tol;
        self
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn m_star(&self) -> f64 {
        self.m_star
    }

    pub fn z0(&self) -> f64 {
        exp(self.ln_z0)
    }

    pub fn ln_z0(&self) -> f64 {
        self.ln_z0
    }

    pub fn t_c(&self) -> f64 {
        self.t_c
    }

    pub fn condensate_fraction(&self) -> f64 {
        self.condensate_fraction
    }

    pub fn is_condensed(&self) -> bool {
        self.ln_z0 == 0.0
    }

    pub fn spec(&self) -> &IntegrationSpec {
        &self.spec
    }

    /// `a = βħ²/2m*`, so that `βħ²p²/2m* = a p²`.
    pub fn a(&self) -> f64 {
        0.5 * self.params.beta() * self.params.hbar2_over(self.m_star)
    }

    /// Thermal wavelength `λ = (2πβħ²/m*)^{1/2}`.
    pub fn thermal_wavelength(&self) -> f64 {
        sqrt(4.0 * PI * self.a())
    }

    /// Degeneracy `ρλ³`.
    pub fn degeneracy(&self) -> f64 {
        let l = self.thermal_wavelength();
        self.params.density() * l * l * l
    }

    pub fn occupation(&self, p: f64) -> Result<f64> {
        occupation(p, self.ln_z0, self.a())
    }

    /// `(1/N) Σ_{p≠0} n_p` by quadrature; equals `1 - n₀/N`.
    pub fn excited_fraction(&self) -> Result<f64> {
        let a = self.a();
        let u = self.ln_z0;
        let est = try_integrate(
            |p| Ok(p * p / exp_m1(a * p * p - u)),
            Domain::SemiInfinite {
                lo: 0.0,
                scale: 1.0 / sqrt(a),
            },
            &self.spec,
        )?;
        Ok(est.value / (2.0 * PI * PI * self.params.density()))
    }

    /// `∂ln z₀/∂β`; zero in the condensed phase.
    pub fn dln_z0_dbeta(&self) -> Result<f64> {
        if self.is_condensed() {
            return Ok(0.0);
        }
        let mu = -self.ln_z0;
        let g32 = bose_g_mu(1.5, mu)?;
        let g12 = bose_g_mu(0.5, mu)?;
        Ok(1.5 * self.params.temperature() * g32 / g12)
    }

    /// Grand potential term `(1/N) ln Ξ = -(1/N) Σ_q ln(1 - z₀ e^{-βε*_q}) = g_{5/2}(z₀)/ρλ³`.
    pub fn ln_xi_per_n(&self) -> Result<f64> {
        Ok(bose_g_mu(2.5, -self.ln_z0)? / self.degeneracy())
    }

    /// Canonical `ln Z⁰_N / N = ln Ξ/N - ln z₀`.
    pub fn ln_z0_per_n(&self) -> Result<f64> {
        Ok(self.ln_xi_per_n()? - self.ln_z0)
    }

    /// `(1/N) Σ_q ε**_q n_q` with `ε** = ħ²q²/2m**`; for `m** = m*` this is
    /// the ideal-gas internal energy `(3/2) T g_{5/2}(z₀)/ρλ³`.
    pub fn energy_per_n(&self, m_star_star: f64) -> Result<f64> {
        check_mass(m_star_star)?;
        Ok((self.m_star / m_star_star) * 1.5 * self.params.temperature() * self.ln_xi_per_n()?)
    }

    /// `(1/N) Σ_q ε**_q n_q` by quadrature, for cross-checking.
    pub fn energy_per_n_by_quadrature(&self, m_star_star: f64) -> Result<f64> {
        check_mass(m_star_star)?;
        let a = self.a();
        let u = self.ln_z0;
        let c = 0.5 * self.params.hbar2_over(m_star_star);
        let est = try_integrate(
            |p| {
                let p2 = p * p;
                Ok(p2 * c * p2 / exp_m1(a * p2 - u))
            },
            Domain::SemiInfinite {
                lo: 0.0,
                scale: 1.0 / sqrt(a),
            },
            &self.spec,
        )?;
        Ok(est.value / (2.0 * PI * PI * self.params.density()))
    }

    /// `L(p, q) = ln[(1 - z e^{-a(p+q)²}) / (1 - z e^{-a(p-q)²})]`.
    fn kernel_log(&self, p: f64, q: f64) -> f64 {
        let a = self.a();
        let u = self.ln_z0;
        let d = p - q;
        let near = u - a * d * d;
        let ratio = exp(near) * -exp_m1(-4.0 * a * p * q) / -exp_m1(near);
        ln_1p(ratio)
    }

    fn exchange_domain(&self) -> Domain {
        Domain::SemiInfinite {
            lo: 0.0,
            scale: 1.0 / sqrt(self.a()),
        }
    }

    fn check_q(q: f64) -> Result<()> {
        if q == 0.0 {
            return Err(Error::ExcludedMode);
        }
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::invalid("q", q, "must be finite and > 0"));
        }
        Ok(())
    }

    /// Pair structure factor
    /// `S₀(q) = 1 + 2(n₀/N) n_q + (1/8π²ρqa) ∫₀^∞ p n_p L(p, q) dp`.
    pub fn s0(&self, q: f64) -> Result<f64> {
        Self::check_q(q)?;
        let a = self.a();
        let u = self.ln_z0;
        let spec = self.spec.clone().singular_at(q);
        let est = try_integrate(
            |p| {
                let n = 1.0 / exp_m1(a * p * p - u);
                if n == 0.0 {
                    return Ok(0.0);
                }
                Ok(p * n * self.kernel_log(p, q))
            },
            self.exchange_domain(),
            &spec,
        )?;
        let exchange = est.value / (8.0 * PI * PI * self.params.density() * q * a);
        let condensate = 2.0 * self.condensate_fraction * self.occupation(q)?;
        Ok(1.0 + condensate + exchange)
    }

    /// `∂S₀(q)/∂β`, with `m**` entering through `ε** = ħ²q²/2m**`.
    pub fn ds0_dbeta(&self, q: f64, m_star_star: f64) -> Result<f64> {
        Self::check_q(q)?;
        check_mass(m_star_star)?;
        let a = self.a();
        let u = self.ln_z0;
        let beta = self.params.beta();
        let ratio = self.m_star / m_star_star;
        let c_ss = 0.5 * self.params.hbar2_over(m_star_star);
        let du = self.dln_z0_dbeta()?;
        let spec = self.spec.clone().singular_at(q);
        let est = try_integrate(
            |p| {
                let y = a * p * p - u;
                let k = csch2(0.5 * y);
                if k == 0.0 {
                    return Ok(0.0);
                }
                Ok(p * (p * p - du / c_ss) * k * self.kernel_log(p, q))
            },
            self.exchange_domain(),
            &spec,
        )?;
        let exchange = -ratio * est.value / (16.0 * PI * PI * self.params.density() * q * beta);
        let condensate = if self.is_condensed() {
            let t = 1.0 - self.condensate_fraction;
            let x = a * q * q;
            let eps_ss = c_ss * q * q;
            3.0 * self.params.temperature() * t * self.occupation(q)?
                - 0.5 * eps_ss * self.condensate_fraction * csch2(0.5 * x)
        } else {
            0.0
        };
        Ok(condensate + exchange)
    }

    /// `g_s(z₀)`.
    pub fn bose_g(&self, s: f64) -> Result<f64> {
        if self.is_condensed() {
            bose_g(s, 1.0)
        } else {
            bose_g_mu(s, -self.ln_z0)
        }
    }
}

fn check_mass(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("m_star_star", m, "must be finite and > 0"))
    }
}

/// ζ(3/2) as evaluated by the zeta routine, for reporting.
pub fn zeta_three_halves() -> Result<f64> {
    zeta(1.5)
}
