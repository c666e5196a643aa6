//! Effective-mass prescriptions: the zero-temperature and classical formulas
//! (from the potential or from a structure factor), the impurity mass, the
//! sewed interpolation and the self-consistent structure-factor closure.
//!
//! Masses are in atomic mass units, like [`SystemParams::mass`].

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{sum_to_integral, QGrid};
use crate::ideal_gas::{critical_temperature, IdealGasState};
use crate::math::{exp, powf, sqrt, tanh_half, PI};
use crate::pair_theory::{Mode, PairPotential};
use crate::quadrature::{fixed_point, try_integrate, Domain};
use crate::special::zeta;
use crate::system::SystemParams;
use crate::tabulated::TabulatedFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassMethod {
    ZeroT,
    Classical,
    Sewed,
    SelfConsistent,
}

impl MassMethod {
    pub fn name(self) -> &'static str {
        match self {
            Self::ZeroT => "zero_t",
            Self::Classical => "classical",
            Self::Sewed => "sewed",
            Self::SelfConsistent => "self_consistent",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassSolution {
    pub m_star: f64,
    pub method: MassMethod,
    /// Closure residual of the defining equation; zero for explicit formulas.
    pub residual: f64,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
}

impl MassSolution {
    fn explicit(m_star: f64, method: MassMethod) -> Self {
        Self {
            m_star,
            method,
            residual: 0.0,
            iterations: 0,
            residual_history: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpurityRegime {
    ZeroT,
    Classical,
}

/// `M/M* = 1 - (1/3N) Σ_q w_q`, returning `M*`.
fn mass_from_sum(mass: f64, sum: f64) -> Result<f64> {
    let ratio = 1.0 - sum / 3.0;
    if !sum.is_finite() || ratio <= 0.0 {
        return Err(Error::UnphysicalMass { sum: sum / 3.0 });
    }
    Ok(mass / ratio)
}

fn check_s(q: f64, s: f64) -> Result<f64> {
    if s > 0.0 && s.is_finite() {
        Ok(s)
    } else {
        Err(Error::Data {
            index: 0,
            q,
            value: s,
            reason: "structure factor must be positive",
        })
    }
}

fn check_table(s: &TabulatedFunction) -> Result<()> {
    for (index, (&q, &v)) in s.nodes().iter().zip(s.values()).enumerate() {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Data {
                index,
                q,
                value: v,
                reason: "structure factor must be positive",
            });
        }
    }
    Ok(())
}

/// `m/m* = 1 - (1/3N) Σ_q (α_q - 1)² / [α_q(α_q + 1)]`.
pub fn m_star_from_potential(potential: &PairPotential, params: &SystemParams, grid: &QGrid) -> Result<f64> {
    let m = params.mass();
    let sum = sum_to_integral(
        |q| {
            let mode = Mode::new(q, potential, params, m)?;
            Ok(mode.alpha_m1 * mode.alpha_m1 / (mode.alpha * (mode.alpha + 1.0)))
        },
        params,
        grid,
    )?;
    mass_from_sum(m, sum)
}

/// `m/m* = 1 - (1/3N) Σ_q [S(q) - 1]² / [S(q) + 1]` for an arbitrary `S`.
pub fn m_star_zero_t_with<F>(mut s: F, params: &SystemParams, grid: &QGrid) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let sum = sum_to_integral(
        |q| {
            let v = check_s(q, s(q)?)?;
            Ok((v - 1.0) * (v - 1.0) / (v + 1.0))
        },
        params,
        grid,
    )?;
    mass_from_sum(params.mass(), sum)
}

/// `m/m* = 1 - (1/3N) Σ_q [S(q) - 1]²` for an arbitrary `S`.
pub fn m_star_classical_with<F>(mut s: F, params: &SystemParams, grid: &QGrid) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let sum = sum_to_integral(
        |q| {
            let v = check_s(q, s(q)?)?;
            Ok((v - 1.0) * (v - 1.0))
        },
        params,
        grid,
    )?;
    mass_from_sum(params.mass(), sum)
}

/// Zero-temperature mass from a tabulated structure factor, integrated up to
/// the table's `q_max`.
pub fn m_star_zero_t(s_of_q: &TabulatedFunction, params: &SystemParams) -> Result<MassSolution> {
    check_table(s_of_q)?;
    let m = m_star_zero_t_with(|q| Ok(s_of_q.eval(q)), params, s_of_q.grid())?;
    Ok(MassSolution::explicit(m, MassMethod::ZeroT))
}

/// High-temperature mass from a tabulated structure factor.
pub fn m_star_classical(s_of_q: &TabulatedFunction, params: &SystemParams) -> Result<MassSolution> {
    check_table(s_of_q)?;
    let m = m_star_classical_with(|q| Ok(s_of_q.eval(q)), params, s_of_q.grid())?;
    Ok(MassSolution::explicit(m, MassMethod::Classical))
}

/// Effective mass `M*` of an impurity of mass `impurity_mass` (amu) coupled to
/// the liquid through `mbar_nu`.
pub fn impurity_mass(
    impurity_mass: f64,
    mbar_nu: &PairPotential,
    potential: &PairPotential,
    params: &SystemParams,
    grid: &QGrid,
    regime: ImpurityRegime,
) -> Result<f64> {
    if !(impurity_mass > 0.0 && impurity_mass.is_finite()) {
        return Err(Error::invalid("impurity_mass", impurity_mass, "must be finite and > 0"));
    }
    let ratio = impurity_mass / params.mass();
    let rho = params.density();
    let beta = params.beta();
    let sum = sum_to_integral(
        |q| {
            let nub = mbar_nu.nu(q);
            if nub == 0.0 {
                return Ok(0.0);
            }
            match regime {
                ImpurityRegime::ZeroT => {
                    let mode = Mode::new(q, potential, params, params.mass())?;
                    let a = mode.alpha;
                    let coupling = 2.0 * rho * nub / (mode.eps * (a + 1.0));
                    let dressed = 1.0 + a * ratio;
                    let bracket = 1.0 - (1.0 - ratio) / dressed;
                    Ok(coupling * coupling / (a * dressed) * bracket * bracket)
                }
                ImpurityRegime::Classical => {
                    let x = beta * rho * nub / (1.0 + beta * rho * potential.nu(q));
                    Ok(x * x)
                }
            }
        },
        params,
        grid,
    )?;
    mass_from_sum(impurity_mass, sum)
}

/// `m*₀ + (m*_cl - m*₀)(1 - e^{-T/T_ref})`.
pub fn sew(m_zero: f64, m_classical: f64, temperature: f64, t_ref: f64) -> Result<f64> {
    if !(temperature >= 0.0) {
        return Err(Error::invalid("temperature", temperature, "must be >= 0"));
    }
    if !(t_ref > 0.0) {
        return Err(Error::invalid("t_ref", t_ref, "must be > 0"));
    }
    let w = 1.0 - exp(-temperature / t_ref);
    Ok(m_zero + (m_classical - m_zero) * w)
}

/// Sewed mass at the temperature of `params`; `t_ref` defaults to the ideal
/// gas condensation temperature at the bare mass.
pub fn m_star_sewed(s_exp: &TabulatedFunction, params: &SystemParams, t_ref: Option<f64>) -> Result<MassSolution> {
    let m0 = m_star_zero_t(s_exp, params)?.m_star;
    let mc = m_star_classical(s_exp, params)?.m_star;
    let t_ref = match t_ref {
        Some(t) => t,
        None => critical_temperature(params, params.mass())?,
    };
    let m = sew(m0, mc, params.temperature(), t_ref)?;
    Ok(MassSolution::explicit(m, MassMethod::Sewed))
}

/// `m** = m* / (1 + β m* d(1/m*)/dβ)` on a table of `(T, m*)` sorted by `T`,
/// using centred differences in β (one-sided at the ends).
pub fn m_star_star(temperatures: &[f64], masses: &[f64]) -> Result<Vec<f64>> {
    let n = temperatures.len();
    if n != masses.len() {
        return Err(Error::invalid("masses", masses.len() as f64, "length differs from temperatures"));
    }
    if n < 2 {
        return Ok(masses.to_vec());
    }
    for w in temperatures.windows(2) {
        if !(w[1] > w[0] && w[0] > 0.0) {
            return Err(Error::invalid("temperature", w[1], "must be positive and increasing"));
        }
    }
    let beta: Vec<f64> = temperatures.iter().map(|t| 1.0 / t).collect();
    let inv: Vec<f64> = masses.iter().map(|m| 1.0 / m).collect();
    Ok((0..n)
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            let d = (inv[hi] - inv[lo]) / (beta[hi] - beta[lo]);
            masses[i] / (1.0 + beta[i] * masses[i] * d)
        })
        .collect())
}

/// Controls for [`m_star_self_consistent`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfConsistentSpec {
    pub damping: f64,
    /// Absolute tolerance on `m*/m` between successive iterates.
    pub tol: f64,
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl Default for SelfConsistentSpec {
    fn default() -> Self {
        Self {
            damping: 0.5,
            tol: 1e-12,
            max_iter: 200,
            rel_tol: 1e-11,
        }
    }
}

/// Both sides of the structure-factor closure at one `m*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closure {
    /// `∫ q² {1/S(q) - α_q tanh[βE(q)/2]} dq` with `α_q = 1/S(q)`.
    pub lhs: f64,
    /// `∫ q² [1/S₀(q) - 1] dq`.
    pub ideal: f64,
    /// `(m*/βħ²)^{3/2} √π (√2 - 1) ζ(3/2)`.
    pub free: f64,
}

impl Closure {
    pub fn rhs(&self) -> f64 {
        self.ideal + self.free
    }

    /// `|lhs - rhs|` relative to the largest single term; the sides can both
    /// vanish as `T → 0`, so the sum of magnitudes sets the scale.
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs()).abs() / (self.lhs.abs() + self.ideal.abs() + self.free.abs())
    }
}

fn free_constant() -> Result<f64> {
    Ok(sqrt(PI) * (sqrt(2.0) - 1.0) * zeta(1.5)?)
}

fn closure_lhs(s_exp: &TabulatedFunction, params: &SystemParams, rel_tol: f64) -> Result<f64> {
    let beta = params.beta();
    let c = 0.5 * params.hbar2_over_m();
    let last = *s_exp.nodes().last().unwrap_or(&1.0);
    let spec = crate::quadrature::IntegrationSpec::with_rel_tol(rel_tol);
    let est = try_integrate(
        |q| {
            let s = check_s(q, s_exp.eval(q))?;
            let inv = 1.0 / s;
            Ok(q * q * inv * (1.0 - tanh_half(beta * c * q * q * inv)))
        },
        Domain::SemiInfinite { lo: 0.0, scale: last },
        &spec,
    )
    .map_err(|e| match e {
        Error::ToleranceNotReached { estimate, .. } | Error::NonFiniteIntegrand { value: estimate, .. } => {
            Error::Data {
                index: s_exp.nodes().len() - 1,
                q: last,
                value: estimate,
                reason: "closure integral over the structure factor does not converge",
            }
        }
        e => e,
    })?;
    Ok(est.value)
}

/// Evaluate both sides of the closure at `m_star`.
pub fn closure(s_exp: &TabulatedFunction, params: &SystemParams, m_star: f64, rel_tol: f64) -> Result<Closure> {
    let lhs = closure_lhs(s_exp, params, rel_tol)?;
    closure_with_lhs(lhs, params, m_star, rel_tol)
}

fn closure_with_lhs(lhs: f64, params: &SystemParams, m_star: f64, rel_tol: f64) -> Result<Closure> {
    let gas = IdealGasState::new(params, m_star)?.with_rel_tol(rel_tol);
    let spec = crate::quadrature::IntegrationSpec::with_rel_tol(rel_tol);
    let scale = 1.0 / sqrt(gas.a());
    let ideal = try_integrate(
        |q| {
            let s0 = gas.s0(q)?;
            Ok(q * q * (1.0 / s0 - 1.0))
        },
        Domain::SemiInfinite { lo: 0.0, scale },
        &spec,
    )?
    .value;
    let k = params.temperature() / params.hbar2_over(m_star);
    let free = powf(k, 1.5) * free_constant()?;
    Ok(Closure { lhs, ideal, free })
}

/// Solve the structure-factor closure for `m*` by damped iteration seeded
/// with the zero-temperature mass of the same data.
pub fn m_star_self_consistent(
    s_exp: &TabulatedFunction,
    params: &SystemParams,
    spec: &SelfConsistentSpec,
) -> Result<MassSolution> {
    check_table(s_exp)?;
    let m = params.mass();
    let seed = m_star_zero_t(s_exp, params)?.m_star / m;
    let lhs = closure_lhs(s_exp, params, spec.rel_tol)?;
    let k = free_constant()?;
    let t_over = params.temperature() / params.hbar2_over_m();
    let mut history = Vec::new();
    let update = |r: f64| -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::UnphysicalMass { sum: r });
        }
        let c = closure_with_lhs(lhs, params, r * m, spec.rel_tol)?;
        history.push(c.residual());
        let target = (lhs - c.ideal) / k;
        if !(target > 0.0) {
            return Err(Error::UnphysicalMass { sum: target });
        }
        Ok(powf(target, 2.0 / 3.0) / t_over)
    };
    let fp = fixed_point(update, seed, spec.damping, spec.tol, spec.max_iter)?;
    let m_star = fp.value * m;
    let residual = closure_with_lhs(lhs, params, m_star, spec.rel_tol)?.residual();
    Ok(MassSolution {
        m_star,
        method: MassMethod::SelfConsistent,
        residual,
        iterations: fp.iterations,
        residual_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair_theory::alpha_q;
    use crate::tabulated::Extrapolation;
    use proptest::prelude::*;

    fn he(t: f64) -> SystemParams {
        SystemParams::helium4(t).unwrap()
    }

    fn grid() -> QGrid {
        QGrid::log_spaced(0.02, 8.0, 96).unwrap().with_rel_tol(1e-13)
    }

    fn table<F: FnMut(f64) -> f64>(mut f: F) -> TabulatedFunction {
        TabulatedFunction::from_fn(grid(), Extrapolation::Linear, Extrapolation::Constant(1.0), |q| Ok(f(q))).unwrap()
    }

    #[test]
    fn ideal_structure_gives_bare_mass() {
        let p = he(1.0);
        let s = table(|_| 1.0);
        assert_eq!(m_star_zero_t(&s, &p).unwrap().m_star, p.mass());
        assert_eq!(m_star_classical(&s, &p).unwrap().m_star, p.mass());
        let zero = PairPotential::zero();
        let g = grid();
        assert_eq!(m_star_from_potential(&zero, &p, &g).unwrap(), p.mass());
        let pot = PairPotential::gaussian(100.0, 1.0).unwrap();
        for regime in [ImpurityRegime::ZeroT, ImpurityRegime::Classical] {
            assert_eq!(impurity_mass(3.0, &zero, &pot, &p, &g, regime).unwrap(), 3.0);
        }
    }

    #[test]
    fn arithmetic_toy() {
        let p = he(1.0);
        let g = QGrid::linear(0.5, 1.0, 2).unwrap();
        // kernel c(1-q)² with (1/2π²ρ)∫₀¹ q² c(1-q)² dq = 0.9, so the sum/3 is 0.3
        let c = 0.9 * 2.0 * PI * PI * p.density() * 30.0;
        let m = m_star_zero_t_with(
            |q| {
                let b = c * (1.0 - q) * (1.0 - q);
                Ok(1.0 + 0.5 * (b + sqrt(b * b + 8.0 * b)))
            },
            &p,
            &g,
        )
        .unwrap();
        assert!((m / p.mass() - 1.0 / 0.7).abs() < 1e-13);
    }

    #[test]
    fn reduction_chain_is_exact() {
        let p = he(1.0);
        let g = grid();
        let pot = PairPotential::gaussian(120.0, 1.1).unwrap();
        let a = m_star_from_potential(&pot, &p, &g).unwrap();
        let b = impurity_mass(p.mass(), &pot, &pot, &p, &g, ImpurityRegime::ZeroT).unwrap();
        let c = m_star_zero_t_with(|q| Ok(1.0 / alpha_q(q, &pot, &p)?), &p, &g).unwrap();
        assert!(a > p.mass());
        assert!((a - b).abs() < 1e-12 * a);
        assert!((a - c).abs() < 1e-12 * a);
    }

    #[test]
    fn classical_impurity_matches_trapezoid() {
        let p = he(4.0);
        let pot = PairPotential::gaussian(50.0, 1.0).unwrap();
        let bar = PairPotential::gaussian(30.0, 0.8).unwrap();
        let g = grid();
        let got = impurity_mass(3.0, &bar, &pot, &p, &g, ImpurityRegime::Classical).unwrap();
        let (n, hi) = (200_000, 8.0);
        let h = hi / n as f64;
        let mut sum = 0.0;
        for i in 0..=n {
            let q = i as f64 * h;
            let x = p.beta() * p.density() * bar.nu(q) / (1.0 + p.beta() * p.density() * pot.nu(q));
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            sum += w * q * q * x * x;
        }
        let sum = sum * h / (2.0 * PI * PI * p.density());
        let expect = 3.0 / (1.0 - sum / 3.0);
        assert!((got - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn classical_potential_form_matches_structure_form() {
        let p = he(4.0);
        let pot = PairPotential::gaussian(50.0, 1.0).unwrap();
        let g = grid();
        let via_nu = impurity_mass(p.mass(), &pot, &pot, &p, &g, ImpurityRegime::Classical).unwrap();
        let x = |q: f64| p.beta() * p.density() * pot.nu(q);
        let via_s = m_star_classical_with(|q| Ok(1.0 / (1.0 + x(q))), &p, &g).unwrap();
        assert!((via_nu - via_s).abs() < 1e-12 * via_s);
    }

    #[test]
    fn unphysical_sum_reported() {
        let p = he(1.0);
        let s = table(|q| if q < 4.0 { 8.0 } else { 1.0 });
        match m_star_classical(&s, &p) {
            Err(Error::UnphysicalMass { sum }) => assert!(sum >= 1.0),
            r => panic!("unexpected {r:?}"),
        }
    }

    #[test]
    fn rejects_non_positive_structure_factor() {
        let p = he(1.0);
        let s = table(|q| if q > 2.0 && q < 2.3 { -0.1 } else { 1.0 });
        assert!(matches!(m_star_zero_t(&s, &p), Err(Error::Data { .. })));
    }

    #[test]
    fn sewing_endpoints() {
        assert_eq!(sew(1.2, 1.5, 0.0, 2.0).unwrap(), 1.2);
        assert!((sew(1.2, 1.5, 1e4, 2.0).unwrap() - 1.5).abs() < 1e-15);
        let mid = sew(1.2, 1.5, 2.0, 2.0).unwrap();
        assert!(mid > 1.2 && mid < 1.5);
    }

    #[test]
    fn m_star_star_of_constant_mass() {
        let t = [1.0, 1.5, 2.0];
        assert_eq!(m_star_star(&t, &[4.0; 3]).unwrap(), vec![4.0; 3]);
        // 1/m* = β gives m** = m*/2
        let m: Vec<f64> = t.to_vec();
        for (x, y) in m_star_star(&t, &m).unwrap().iter().zip(&m) {
            assert!((x - 0.5 * y).abs() < 1e-14);
        }
    }

    #[test]
    fn free_term_matches_quadrature() {
        let p = he(1.7);
        let m = 1.3 * p.mass();
        let c = p.hbar2_over(m) / 4.0 * p.beta();
        let direct = try_integrate(
            |q| Ok(q * q * (1.0 - libm::tanh(c * q * q))),
            Domain::SemiInfinite { lo: 0.0, scale: 1.0 },
            &crate::quadrature::IntegrationSpec::with_rel_tol(1e-13),
        )
        .unwrap()
        .value;
        let cl = closure_with_lhs(0.0, &p, m, 1e-12).unwrap();
        assert!((cl.free - direct).abs() < 1e-12 * direct);
    }

    fn bogoliubov_table(t: f64) -> (SystemParams, TabulatedFunction) {
        let pot = PairPotential::gaussian(120.0, 1.0).unwrap();
        let p = he(t);
        let s = table(|q| 1.0 / alpha_q(q, &pot, &p).unwrap());
        (p, s)
    }

    #[test]
    fn self_consistent_closes_with_monotone_residual() {
        let (p, s) = bogoliubov_table(2.0);
        let sol = m_star_self_consistent(&s, &p, &SelfConsistentSpec::default()).unwrap();
        assert!(sol.residual < 1e-8, "{sol:?}");
        assert!(sol.iterations < 200);
        assert!(sol.m_star >= p.mass());
        for w in sol.residual_history.windows(2) {
            assert!(w[1] <= w[0], "{:?}", sol.residual_history);
        }
        let check = closure(&s, &p, sol.m_star, 1e-11).unwrap();
        assert!((check.lhs - check.rhs()).abs() < 1e-8 * check.lhs);
    }

    #[test]
    fn non_convergence_returns_history() {
        let (p, s) = bogoliubov_table(1.0);
        let spec = SelfConsistentSpec {
            max_iter: 4,
            ..SelfConsistentSpec::default()
        };
        match m_star_self_consistent(&s, &p, &spec) {
            Err(Error::FixedPointNotConverged { history }) => {
                assert_eq!(history.len(), 5);
                assert!(history.windows(2).all(|w| w[1] > w[0]));
            }
            r => panic!("unexpected {r:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn classical_kernel_dominates(amps in proptest::collection::vec(0.0f64..1.5, 4)) {
            let p = he(1.0);
            let s = table(|q| {
                let bump: f64 = amps.iter().enumerate()
                    .map(|(i, a)| a * libm::exp(-(q - 1.0 - i as f64).powi(2)))
                    .sum();
                (0.2 + bump).min(1.0 + bump * 0.2)
            });
            let zt = m_star_zero_t(&s, &p);
            let cl = m_star_classical(&s, &p);
            if let (Ok(zt), Ok(cl)) = (zt, cl) {
                prop_assert!(zt.m_star >= p.mass());
                prop_assert!(cl.m_star >= zt.m_star);
            }
        }
    }
}
