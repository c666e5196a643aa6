//! The interaction layer: Fourier potential `ν_q`, Bogoliubov factor `α_q`,
//! spectrum `E(q)`, ground-state energy, density-matrix coefficients and the
//! zero-temperature inversion `S(q) → ν_q`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{sum_to_integral, QGrid};
use crate::math::{coth, csch, exp, ln_1p, sqrt};
use crate::system::SystemParams;
use crate::tabulated::{Extrapolation, TabulatedFunction};

/// Shape of `ν_q` (K·Å³).
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialModel {
    Zero,
    /// `ν_q = amplitude · e^{-q²σ²}`.
    Gaussian { amplitude: f64, sigma: f64 },
    /// `ν_q = amplitude · κ²/(q² + κ²)`, the transform of a Yukawa potential.
    Screened { amplitude: f64, kappa: f64 },
    Tabulated(TabulatedFunction),
}

/// Fourier-space pair potential together with its `q = 0` component.
#[derive(Debug, Clone, PartialEq)]
pub struct PairPotential {
    model: PotentialModel,
    nu0: f64,
}

impl PairPotential {
    pub fn zero() -> Self {
        Self {
            model: PotentialModel::Zero,
            nu0: 0.0,
        }
    }

    pub fn gaussian(amplitude: f64, sigma: f64) -> Result<Self> {
        check_finite("amplitude", amplitude)?;
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::invalid("sigma", sigma, "must be finite and > 0"));
        }
        Ok(Self {
            model: PotentialModel::Gaussian { amplitude, sigma },
            nu0: amplitude,
        })
    }

    pub fn screened(amplitude: f64, kappa: f64) -> Result<Self> {
        check_finite("amplitude", amplitude)?;
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::invalid("kappa", kappa, "must be finite and > 0"));
        }
        Ok(Self {
            model: PotentialModel::Screened { amplitude, kappa },
            nu0: amplitude,
        })
    }

    pub fn tabulated(table: TabulatedFunction, nu0: f64) -> Result<Self> {
        check_finite("nu0", nu0)?;
        Ok(Self {
            model: PotentialModel::Tabulated(table),
            nu0,
        })
    }

    /// Replace the `q = 0` component, keeping `ν_q` for `q ≠ 0`.
    pub fn with_nu0(mut self, nu0: f64) -> Result<Self> {
        check_finite("nu0", nu0)?;
        self.nu0 = nu0;
        Ok(self)
    }

    pub fn model(&self) -> &PotentialModel {
        &self.model
    }

    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.model, PotentialModel::Zero) && self.nu0 == 0.0
    }

    pub fn nu(&self, q: f64) -> f64 {
        match &self.model {
            PotentialModel::Zero => 0.0,
            PotentialModel::Gaussian { amplitude, sigma } => amplitude * exp(-q * q * sigma * sigma),
            PotentialModel::Screened { amplitude, kappa } => {
                let k2 = kappa * kappa;
                amplitude * k2 / (q * q + k2)
            }
            PotentialModel::Tabulated(t) => t.eval(q),
        }
    }
}

fn check_finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, v, "must be finite"))
    }
}

/// Everything the thermodynamic formulas need about a single mode `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub q: f64,
    /// `ħ²q²/2m`.
    pub eps: f64,
    /// `ħ²q²/2m*`.
    pub eps_star: f64,
    pub alpha: f64,
    /// `α_q - 1`, evaluated without cancellation.
    pub alpha_m1: f64,
    /// `E(q) = α_q ħ²q²/2m`.
    pub energy: f64,
}

impl Mode {
    pub fn new(q: f64, potential: &PairPotential, params: &SystemParams, m_star: f64) -> Result<Self> {
        if q == 0.0 {
            return Err(Error::ExcludedMode);
        }
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::invalid("q", q, "must be finite and > 0"));
        }
        let eps = params.free_energy(q);
        let eps_star = 0.5 * params.hbar2_over(m_star) * q * q;
        let x = 2.0 * params.density() * potential.nu(q) / eps;
        let radicand = 1.0 + x;
        if !(radicand >= 0.0) {
            return Err(Error::StabilityViolation { q, radicand });
        }
        let alpha = sqrt(radicand);
        let alpha_m1 = if x == 0.0 { 0.0 } else { x / (alpha + 1.0) };
        Ok(Self {
            q,
            eps,
            eps_star,
            alpha,
            alpha_m1,
            energy: alpha * eps,
        })
    }

    /// `ln α_q`.
    pub fn ln_alpha(&self) -> f64 {
        ln_1p(self.alpha_m1)
    }
}

/// `α_q = (1 + 2ρν_q/(ħ²q²/2m))^{1/2}`.
pub fn alpha_q(q: f64, potential: &PairPotential, params: &SystemParams) -> Result<f64> {
    Ok(Mode::new(q, potential, params, params.mass())?.alpha)
}

/// `E₀/N = ρν₀/2 - (1/N) Σ_q (ħ²q²/8m)(α_q - 1)²` in the thermodynamic limit.
pub fn ground_state_energy(potential: &PairPotential, params: &SystemParams, grid: &QGrid) -> Result<f64> {
    let m = params.mass();
    let sum = sum_to_integral(
        |q| {
            let mode = Mode::new(q, potential, params, m)?;
            Ok(0.25 * mode.eps * mode.alpha_m1 * mode.alpha_m1)
        },
        params,
        grid,
    )?;
    Ok(0.5 * params.density() * potential.nu0() - sum)
}

/// `α_q`, `E(q)` on the nodes of a grid, with the ground-state energy.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub grid: QGrid,
    pub alpha: Vec<f64>,
    pub energy: Vec<f64>,
    pub e0_per_n: f64,
}

impl SpectrumTable {
    pub fn new(potential: &PairPotential, params: &SystemParams, grid: &QGrid) -> Result<Self> {
        let m = params.mass();
        let modes = grid
            .nodes()
            .iter()
            .map(|&q| Mode::new(q, potential, params, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: grid.clone(),
            alpha: modes.iter().map(|m| m.alpha).collect(),
            energy: modes.iter().map(|m| m.energy).collect(),
            e0_per_n: ground_state_energy(potential, params, grid)?,
        })
    }

    /// Index of the deepest interior local minimum of `E(q)`, if any.
    pub fn roton_minimum(&self) -> Option<usize> {
        let e = &self.energy;
        (1..e.len().saturating_sub(1))
            .filter(|&i| e[i] < e[i - 1] && e[i] <= e[i + 1])
            .min_by(|&a, &b| e[a].partial_cmp(&e[b]).unwrap_or(core::cmp::Ordering::Equal))
    }
}

/// `coth(y) - 1/y`, smooth through `y = 0`.
fn coth_remainder(y: f64) -> f64 {
    if y < 0.1 {
        let y2 = y * y;
        y * (1.0 / 3.0
            - y2 * (1.0 / 45.0
                - y2 * (2.0 / 945.0
                    - y2 * (1.0 / 4725.0 - y2 * (2.0 / 93555.0 - y2 * (1382.0 / 638_512_875.0))))))
    } else {
        coth(y) - 1.0 / y
    }
}

/// `1/sinh(y) - 1/y`, smooth through `y = 0`.
fn csch_remainder(y: f64) -> f64 {
    if y < 0.1 {
        let y2 = y * y;
        -y * (1.0 / 6.0
            - y2 * (7.0 / 360.0
                - y2 * (31.0 / 15120.0
                    - y2 * (127.0 / 604_800.0
                        - y2 * (73.0 / 3_421_440.0 - y2 * (1_414_477.0 / 653_837_184_000.0))))))
    } else {
        csch(y) - 1.0 / y
    }
}

/// `(1/β)(1/ε - 1/ε*)`, the pole part shared by `α coth βE - coth βε*` and
/// the analogous csch difference.
fn pole_difference(mode: &Mode, beta: f64) -> f64 {
    if mode.eps == mode.eps_star {
        0.0
    } else {
        (1.0 - mode.eps / mode.eps_star) / (beta * mode.eps)
    }
}

/// `c₂(q) = ½[α_q coth βE(q) - coth βε*_q]`.
pub fn c2(mode: &Mode, beta: f64) -> f64 {
    let (y1, y0) = (beta * mode.energy, beta * mode.eps_star);
    0.5 * (pole_difference(mode, beta) + mode.alpha * coth_remainder(y1) - coth_remainder(y0))
}

/// `c₁(q) = ½[α_q / sinh βE(q) - 1 / sinh βε*_q]`.
pub fn c1(mode: &Mode, beta: f64) -> f64 {
    let (y1, y0) = (beta * mode.energy, beta * mode.eps_star);
    0.5 * (pole_difference(mode, beta) + mode.alpha * csch_remainder(y1) - csch_remainder(y0))
}

/// Per-mode part of `c₀`: `½ ln[(1 - e^{-2βε*})/(1 - e^{-2βE})] + ½ ln α_q`.
pub fn c0_mode(mode: &Mode, beta: f64) -> f64 {
    let (y1, y0) = (2.0 * beta * mode.energy, 2.0 * beta * mode.eps_star);
    0.5 * (ln_ratio_one_minus_exp(y0, y1) + mode.ln_alpha())
}

/// `ln[(1 - e^{-y0})/(1 - e^{-y1})]` for `y0, y1 > 0`.
pub(crate) fn ln_ratio_one_minus_exp(y0: f64, y1: f64) -> f64 {
    if y0 == y1 {
        return 0.0;
    }
    crate::math::ln(-crate::math::exp_m1(-y0)) - crate::math::ln(-crate::math::exp_m1(-y1))
}

/// Density-matrix coefficients at fixed β and `m*`, with `c₁`, `c₂`
/// tabulated on a grid and `c₀` per particle in the thermodynamic limit.
#[derive(Debug, Clone, PartialEq)]
pub struct CCoefficients {
    pub beta: f64,
    pub m_star: f64,
    pub c0_per_n: f64,
    pub c1: TabulatedFunction,
    pub c2: TabulatedFunction,
}

pub fn c_coefficients(
    potential: &PairPotential,
    params: &SystemParams,
    m_star: f64,
    grid: &QGrid,
) -> Result<CCoefficients> {
    let beta = params.beta();
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid("temperature", params.temperature(), "requires T > 0"));
    }
    let modes = grid
        .nodes()
        .iter()
        .map(|&q| Mode::new(q, potential, params, m_star))
        .collect::<Result<Vec<_>>>()?;
    let table = |v: Vec<f64>| TabulatedFunction::new(grid.clone(), v, Extrapolation::Hold, Extrapolation::Hold);
    let c1 = table(modes.iter().map(|m| c1(m, beta)).collect())?;
    let c2 = table(modes.iter().map(|m| c2(m, beta)).collect())?;
    let e0 = ground_state_energy(potential, params, grid)?;
    let sum = sum_to_integral(
        |q| Ok(c0_mode(&Mode::new(q, potential, params, m_star)?, beta)),
        params,
        grid,
    )?;
    Ok(CCoefficients {
        beta,
        m_star,
        c0_per_n: -beta * e0 + sum,
        c1,
        c2,
    })
}

/// Zero-temperature inversion `ν_q = (ħ²q²/4mρ)(1/S(q)² - 1)` on the nodes of
/// `s_exp`. The result is linear below the first node and zero above the
/// last; `ν₀` is the linear extrapolation to `q = 0`.
pub fn invert_structure_factor(s_exp: &TabulatedFunction, params: &SystemParams) -> Result<PairPotential> {
    let grid = s_exp.grid();
    let mut nu = Vec::with_capacity(grid.len());
    for (i, (&q, &s)) in grid.nodes().iter().zip(s_exp.values()).enumerate() {
        if !(s > 0.0) {
            return Err(Error::Data {
                index: i,
                q,
                value: s,
                reason: "structure factor must be > 0",
            });
        }
        let inv = 1.0 / s;
        nu.push(params.hbar2_over_m() * q * q / (4.0 * params.density()) * (inv * inv - 1.0));
    }
    let (q0, q1) = (grid.nodes()[0], grid.nodes()[1]);
    let nu0 = nu[0] - (nu[1] - nu[0]) / (q1 - q0) * q0;
    let table = TabulatedFunction::new(grid.clone(), nu, Extrapolation::Linear, Extrapolation::Constant(0.0))?;
    PairPotential::tabulated(table, nu0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{ln, PI};
    use proptest::prelude::*;

    fn he(t: f64) -> SystemParams {
        SystemParams::helium4(t).unwrap()
    }

    fn gauss() -> PairPotential {
        PairPotential::gaussian(200.0, 1.0).unwrap()
    }

    #[test]
    fn alpha_switch_off_and_arithmetic() {
        let p = he(1.0);
        assert_eq!(alpha_q(1.3, &PairPotential::zero(), &p).unwrap(), 1.0);
        // 2ρν/ε = 3  ⇒  ν = 3ε/(2ρ)
        let q = 1.1;
        let nu = 3.0 * p.free_energy(q) / (2.0 * p.density());
        let pot = PairPotential::screened(nu * 1e9, 1e5 * q).unwrap();
        let a = alpha_q(q, &pot.clone(), &p).unwrap();
        assert!((a - sqrt(1.0 + 3.0 * pot.nu(q) / nu)).abs() < 1e-15);
        let exact = PairPotential::tabulated(
            TabulatedFunction::new(
                QGrid::from_nodes(alloc::vec![1.0, 1.2], 1.2).unwrap(),
                alloc::vec![nu, nu],
                Extrapolation::Hold,
                Extrapolation::Hold,
            )
            .unwrap(),
            nu,
        )
        .unwrap();
        assert!((alpha_q(q, &exact, &p).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(alpha_q(0.0, &exact, &p), Err(Error::ExcludedMode));
    }

    #[test]
    fn stability_violation_reports_q() {
        let p = he(1.0);
        let pot = PairPotential::gaussian(-500.0, 1.0).unwrap();
        match alpha_q(0.1, &pot, &p) {
            Err(Error::StabilityViolation { q, radicand }) => {
                assert_eq!(q, 0.1);
                assert!(radicand < 0.0);
            }
            r => panic!("unexpected {r:?}"),
        }
    }

    #[test]
    fn phonon_limit() {
        let p = he(1.0);
        let pot = gauss();
        let q = 1e-4;
        let m = Mode::new(q, &pot, &p, p.mass()).unwrap();
        let c = sqrt(p.density() * pot.nu0() * p.hbar2_over_m());
        assert!((m.energy / (q * c) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ground_state_energy_cases() {
        let p = he(1.0);
        let g = QGrid::log_spaced(0.01, 10.0, 64).unwrap().with_rel_tol(1e-12);
        assert_eq!(ground_state_energy(&PairPotential::zero(), &p, &g).unwrap(), 0.0);
        let only0 = PairPotential::zero().with_nu0(50.0).unwrap();
        assert_eq!(ground_state_energy(&only0, &p, &g).unwrap(), 0.5 * p.density() * 50.0);
    }

    #[test]
    fn ground_state_energy_against_trapezoid() {
        let p = he(1.0);
        let pot = gauss();
        let g = QGrid::log_spaced(0.01, 10.0, 64).unwrap().with_rel_tol(1e-12);
        let e0 = ground_state_energy(&pot, &p, &g).unwrap();
        let n = 200_000;
        let h = 10.0 / n as f64;
        let mut acc = 0.0;
        for i in 1..=n {
            let q = i as f64 * h;
            let eps = 0.5 * p.hbar2_over_m() * q * q;
            let a = (1.0 + 2.0 * p.density() * pot.nu(q) / eps).sqrt();
            let w = if i == n { 0.5 } else { 1.0 };
            acc += w * q * q * eps / 4.0 * (a - 1.0) * (a - 1.0);
        }
        let oracle = 0.5 * p.density() * pot.nu0() - acc * h / (2.0 * PI * PI * p.density());
        assert!((e0 - oracle).abs() < 1e-8 * oracle.abs(), "{e0} vs {oracle}");
    }

    #[test]
    fn coefficients_switch_off() {
        let p = he(1.3);
        let g = QGrid::log_spaced(0.05, 6.0, 32).unwrap();
        let c = c_coefficients(&PairPotential::zero(), &p, p.mass(), &g).unwrap();
        assert_eq!(c.c0_per_n, 0.0);
        assert!(c.c1.values().iter().all(|&v| v == 0.0));
        assert!(c.c2.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn c2_zero_temperature_limit() {
        let p = he(1e-3);
        let m = Mode::new(1.0, &gauss(), &p, p.mass()).unwrap();
        assert!((c2(&m, p.beta()) - 0.5 * m.alpha_m1).abs() < 1e-15);
        assert_eq!(c1(&m, p.beta()), 0.0);
    }

    #[test]
    fn stable_forms_agree_with_naive() {
        let p = he(2.0);
        for &q in &[0.3, 1.0, 2.5] {
            for &ms in &[1.0, 1.4] {
                let m = Mode::new(q, &gauss(), &p, ms * p.mass()).unwrap();
                let b = p.beta();
                let naive2 = 0.5 * (m.alpha / libm::tanh(b * m.energy) - 1.0 / libm::tanh(b * m.eps_star));
                let naive1 = 0.5 * (m.alpha / libm::sinh(b * m.energy) - 1.0 / libm::sinh(b * m.eps_star));
                assert!((c2(&m, b) - naive2).abs() < 1e-13 * (1.0 + naive2.abs()));
                assert!((c1(&m, b) - naive1).abs() < 1e-13 * (1.0 + naive1.abs()));
            }
        }
    }

    #[test]
    fn classical_c2_limit() {
        // ħ → 0: c₂ → βρν_q/3, c₁ → -βρν_q/6
        let p = he(5.0).with_hbar_scale(1e-6).unwrap();
        let pot = gauss();
        let m = Mode::new(1.0, &pot, &p, p.mass()).unwrap();
        let b = p.beta();
        let x = b * p.density() * pot.nu(1.0);
        assert!((c2(&m, b) / (x / 3.0) - 1.0).abs() < 1e-5);
        assert!((c1(&m, b) / (-x / 6.0) - 1.0).abs() < 1e-5);
    }

    /// `a₂(q)` of the Bogoliubov solution, used only to check the coefficient
    /// system.
    fn a2(m: &Mode, beta: f64) -> f64 {
        let e = exp(-2.0 * beta * m.energy);
        let r = m.alpha_m1 / (m.alpha + 1.0);
        -0.5 * m.alpha_m1 * -crate::math::exp_m1(-2.0 * beta * m.energy) / (1.0 + r * e)
    }

    fn bars(m: &Mode, beta: f64) -> (f64, f64) {
        let y = beta * m.eps_star;
        let c1b = c1(m, beta) + 0.5 * csch(y);
        let c2b = c2(m, beta) + 1.0 / -crate::math::exp_m1(-2.0 * y);
        (c1b, c2b)
    }

    fn lattice() -> Vec<(f64, f64, f64)> {
        let mut pts = Vec::new();
        for i in 0..8 {
            let q = 0.3 + 0.35 * i as f64;
            for j in 0..8 {
                let t = 0.4 * libm::pow(1.6, j as f64);
                let ms = if j % 2 == 0 { 1.0 } else { 1.3 };
                pts.push((q, t, ms));
            }
        }
        pts
    }

    #[test]
    fn coefficient_system_second_relation() {
        let pot = gauss();
        for (q, t, ms) in lattice() {
            let p = he(t);
            let m = Mode::new(q, &pot, &p, ms * p.mass()).unwrap();
            let b = p.beta();
            let (c1b, c2b) = bars(&m, b);
            let rhs = c1b * c1b / c2b - c2b + 1.0;
            let lhs = a2(&m, b);
            assert!((lhs - rhs).abs() < 1e-12, "q={q} T={t}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn coefficient_system_first_and_third_relations() {
        let pot = gauss();
        for (q, t, ms) in lattice() {
            let p = he(t);
            let m = Mode::new(q, &pot, &p, ms * p.mass()).unwrap();
            let b = p.beta();
            let (c1b, c2b) = bars(&m, b);
            let e1 = exp(-b * m.energy);
            let e2 = e1 * e1;
            let r = m.alpha_m1 / (m.alpha + 1.0);
            let first = 2.0 * m.alpha / (m.alpha + 1.0) * e1 / (1.0 + r * e2);
            let third = (1.0 - e2) / ((m.alpha + 1.0) * (1.0 + r * e2));
            assert!((first - c1b / c2b).abs() < 1e-12);
            assert!((third - 0.5 / c2b).abs() < 1e-12);
        }
    }

    #[test]
    fn c0_matches_a0_multipliers() {
        // c₀ - ½Σ ln[1 + (1 - e^{-2βε*}) c₂] equals the λ-free part of a₀
        let pot = gauss();
        for (q, t, ms) in lattice() {
            let p = he(t);
            let m = Mode::new(q, &pot, &p, ms * p.mass()).unwrap();
            let b = p.beta();
            let damp = -crate::math::exp_m1(-2.0 * b * m.eps_star);
            let lhs = c0_mode(&m, b) - 0.5 * ln(1.0 + damp * c2(&m, b));
            let r = m.alpha_m1 / (m.alpha + 1.0);
            let rhs = -0.5 * ln((1.0 + r * exp(-2.0 * b * m.energy)) / (1.0 + r));
            assert!((lhs - rhs).abs() < 1e-12, "q={q} T={t}");
        }
    }

    #[test]
    fn inversion_cases() {
        let p = he(1.0);
        let g = QGrid::linear(0.1, 2.0, 20).unwrap();
        let ones = TabulatedFunction::new(g.clone(), alloc::vec![1.0; 20], Extrapolation::Linear, Extrapolation::Constant(1.0)).unwrap();
        let pot = invert_structure_factor(&ones, &p).unwrap();
        assert!(g.nodes().iter().all(|&q| pot.nu(q) == 0.0));
        assert_eq!(pot.nu0(), 0.0);

        let halves = ones.with_policies(Extrapolation::Hold, Extrapolation::Hold).unwrap();
        let halves = TabulatedFunction::new(g.clone(), alloc::vec![0.5; 20], halves.low_policy(), halves.high_policy()).unwrap();
        let pot = invert_structure_factor(&halves, &p).unwrap();
        let q = g.nodes()[7];
        let want = 3.0 * p.hbar2_over_m() * q * q / (4.0 * p.density());
        assert!((pot.nu(q) - want).abs() < 1e-12 * want);

        let mut bad = alloc::vec![1.0; 20];
        bad[4] = 0.0;
        let bad = TabulatedFunction::new(g, bad, Extrapolation::Hold, Extrapolation::Hold).unwrap();
        assert!(matches!(invert_structure_factor(&bad, &p), Err(Error::Data { index: 4, .. })));
    }

    proptest! {
        #[test]
        fn inversion_round_trip(ss in proptest::collection::vec(0.05f64..3.0, 8..20)) {
            let p = he(1.0);
            let g = QGrid::linear(0.1, 0.1 * ss.len() as f64, ss.len()).unwrap();
            let s = TabulatedFunction::new(g.clone(), ss.clone(), Extrapolation::Linear, Extrapolation::Constant(1.0)).unwrap();
            let pot = invert_structure_factor(&s, &p).unwrap();
            for (&q, &sv) in g.nodes().iter().zip(&ss) {
                let a = alpha_q(q, &pot, &p).unwrap();
                prop_assert!((a - 1.0 / sv).abs() < 1e-12 * a);
            }
        }

        #[test]
        fn energy_is_alpha_times_free(q in 0.01f64..8.0, amp in 0.0f64..500.0) {
            let p = he(1.0);
            let pot = PairPotential::gaussian(amp, 0.8).unwrap();
            let m = Mode::new(q, &pot, &p, p.mass()).unwrap();
            prop_assert_eq!(m.energy, m.alpha * p.free_energy(q));
            prop_assert!(m.alpha >= 1.0);
            prop_assert!((m.alpha - 1.0 - m.alpha_m1).abs() < 1e-12 * m.alpha);
        }
    }
}
