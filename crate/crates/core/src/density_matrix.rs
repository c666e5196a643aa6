//! Finite-box evaluator of the N-particle density matrix `R = R⁰·P`, the
//! low-temperature comparison forms and the ground-state wave function.
//!
//! Wave vectors are box vectors `2πn/L`; every sum here is a finite sum over
//! the chosen modes. Sums are taken in a canonical order so that relabeling
//! particles or swapping `x ↔ x′` leaves results bitwise unchanged.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::collective::{dot, Vec3};
use crate::error::{Error, Result};
use crate::math::{cos, coth, csch, exp, ln, ln_one_minus_exp, ln_tanh_half, sin, sqrt, PI};
use crate::pair_theory::{c0_mode, c1, c2, Mode, PairPotential};
use crate::system::SystemParams;

pub const MAX_PARTICLES: usize = 8;

/// Two sets of particle positions `x`, `x′` in a cubic box of side `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    coords: Vec<Vec3>,
    coords_primed: Vec<Vec3>,
    box_side: f64,
}

impl Configuration {
    pub fn new(coords: Vec<Vec3>, coords_primed: Vec<Vec3>, box_side: f64) -> Result<Self> {
        let n = coords.len();
        if n == 0 || n > MAX_PARTICLES {
            return Err(Error::invalid("n", n as f64, "particle count must lie in 1..=8"));
        }
        if coords_primed.len() != n {
            return Err(Error::invalid("n", coords_primed.len() as f64, "x and x′ differ in length"));
        }
        if !(box_side > 0.0 && box_side.is_finite()) {
            return Err(Error::invalid("box_side", box_side, "must be finite and > 0"));
        }
        for r in coords.iter().chain(&coords_primed) {
            for &c in r {
                if !(0.0..box_side).contains(&c) {
                    return Err(Error::invalid("position", c, "outside the box"));
                }
            }
        }
        Ok(Self {
            coords,
            coords_primed,
            box_side,
        })
    }

    /// The diagonal configuration `x′ = x`.
    pub fn diagonal(coords: Vec<Vec3>, box_side: f64) -> Result<Self> {
        Self::new(coords.clone(), coords, box_side)
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Vec3] {
        &self.coords
    }

    pub fn coords_primed(&self) -> &[Vec3] {
        &self.coords_primed
    }

    pub fn box_side(&self) -> f64 {
        self.box_side
    }

    pub fn volume(&self) -> f64 {
        self.box_side * self.box_side * self.box_side
    }

    /// `x ↔ x′`.
    pub fn swapped(&self) -> Self {
        Self {
            coords: self.coords_primed.clone(),
            coords_primed: self.coords.clone(),
            box_side: self.box_side,
        }
    }
}

/// `ln R⁰`, `ln P` and `ln R = ln R⁰ + ln P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmValue {
    pub log_r0: f64,
    pub log_p: f64,
    pub log_r: f64,
}

fn sorted_sum(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

fn log_sum_exp(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let max = match v.last() {
        Some(&m) => m,
        None => return f64::NEG_INFINITY,
    };
    max + ln(v.iter().map(|x| exp(x - max)).sum::<f64>())
}

/// All permutations of `0..n` by Heap's algorithm.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = alloc::vec![0usize; n];
    let mut out = alloc::vec![p.clone()];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            out.push(p.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| ln(k as f64)).sum()
}

/// `ln R⁰_N(x′|x)`, the free-particle density matrix of mass `m*` summed over
/// all permutations, with `hbar2_over_m_star = ħ²/m*` in K·Å².
pub fn ideal_dm(config: &Configuration, hbar2_over_m_star: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta", beta, "must be finite and > 0"));
    }
    if !(hbar2_over_m_star > 0.0) {
        return Err(Error::invalid("hbar2_over_m_star", hbar2_over_m_star, "must be > 0"));
    }
    let n = config.n();
    let a = 1.0 / (2.0 * beta * hbar2_over_m_star);
    let (x, xp) = (config.coords(), config.coords_primed());
    let exponents = permutations(n)
        .iter()
        .map(|perm| {
            let d2 = (0..n)
                .flat_map(|j| {
                    let (r, s) = (xp[j], x[perm[j]]);
                    (0..3).map(move |k| (r[k] - s[k]) * (r[k] - s[k]))
                })
                .collect();
            -a * sorted_sum(d2)
        })
        .collect();
    Ok(-ln_factorial(n) + 1.5 * n as f64 * ln(a / PI) + log_sum_exp(exponents))
}

/// Nonzero box vectors `2πn/L` with `1 ≤ |n|² ≤ max_index_sq`.
pub fn box_modes(box_side: f64, max_index_sq: i64) -> Result<Vec<Vec3>> {
    if !(box_side > 0.0) {
        return Err(Error::invalid("box_side", box_side, "must be > 0"));
    }
    if max_index_sq < 1 {
        return Err(Error::invalid("max_index_sq", max_index_sq as f64, "must be >= 1"));
    }
    let k = 2.0 * PI / box_side;
    let r = sqrt(max_index_sq as f64) as i64 + 1;
    let mut out = Vec::new();
    for i in -r..=r {
        for j in -r..=r {
            for l in -r..=r {
                let s = i * i + j * j + l * l;
                if s >= 1 && s <= max_index_sq {
                    out.push([k * i as f64, k * j as f64, k * l as f64]);
                }
            }
        }
    }
    Ok(out)
}

/// `ρ_k` with the phasors summed in sorted order.
pub fn rho_canonical(positions: &[Vec3], k: &Vec3) -> Complex64 {
    let mut ph: Vec<(f64, f64)> = positions
        .iter()
        .map(|r| {
            let t = dot(k, r);
            (cos(t), -sin(t))
        })
        .collect();
    ph.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let (re, im) = ph.iter().fold((0.0, 0.0), |(a, b), (c, d)| (a + c, b + d));
    Complex64::new(re, im) / sqrt(positions.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxMode {
    pub k: Vec3,
    pub nu: f64,
    pub mode: Mode,
}

/// The pair-theory spectrum restricted to a set of box modes for `n`
/// particles at density `n/L³` and the temperature of `params`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSpectrum {
    n: usize,
    box_side: f64,
    params: SystemParams,
    m_star: f64,
    nu0: f64,
    modes: Vec<BoxMode>,
}

impl BoxSpectrum {
    pub fn new(
        potential: &PairPotential,
        params: &SystemParams,
        m_star: f64,
        n: usize,
        box_side: f64,
        wave_vectors: &[Vec3],
    ) -> Result<Self> {
        if n == 0 || n > MAX_PARTICLES {
            return Err(Error::invalid("n", n as f64, "particle count must lie in 1..=8"));
        }
        let volume = box_side * box_side * box_side;
        let params = params.with_density(n as f64 / volume)?;
        let modes = wave_vectors
            .iter()
            .map(|k| {
                let q = sqrt(dot(k, k));
                Ok(BoxMode {
                    k: *k,
                    nu: potential.nu(q),
                    mode: Mode::new(q, potential, &params, m_star)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            box_side,
            params,
            m_star,
            nu0: potential.nu0(),
            modes,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn modes(&self) -> &[BoxMode] {
        &self.modes
    }

    pub fn beta(&self) -> f64 {
        self.params.beta()
    }

    pub fn volume(&self) -> f64 {
        self.box_side * self.box_side * self.box_side
    }

    /// `E₀ = N(N-1)ν₀/2V - Σ_k (ε_k/4)(α_k - 1)²`.
    pub fn ground_state_energy(&self) -> f64 {
        let n = self.n as f64;
        let fluct = sorted_sum(
            self.modes
                .iter()
                .map(|m| 0.25 * m.mode.eps * m.mode.alpha_m1 * m.mode.alpha_m1)
                .collect(),
        );
        n * (n - 1.0) * self.nu0 / (2.0 * self.volume()) - fluct
    }

    /// `min_k E_k`.
    pub fn min_energy(&self) -> f64 {
        self.modes.iter().map(|m| m.mode.energy).fold(f64::INFINITY, f64::min)
    }

    fn check(&self, config: &Configuration) -> Result<()> {
        if config.n() != self.n || config.box_side() != self.box_side {
            return Err(Error::invalid("config", config.n() as f64, "does not match the spectrum box"));
        }
        Ok(())
    }

    fn rhos(&self, positions: &[Vec3]) -> Vec<Complex64> {
        self.modes.iter().map(|m| rho_canonical(positions, &m.k)).collect()
    }

    /// `Φ(x) = N(N-1)ν₀/2V + (N/2V) Σ_k ν_k (|ρ_k|² - 1)`.
    pub fn potential_energy(&self, positions: &[Vec3]) -> f64 {
        let n = self.n as f64;
        let v = self.volume();
        let rho = self.rhos(positions);
        let sum = sorted_sum(
            self.modes
                .iter()
                .zip(&rho)
                .map(|(m, r)| m.nu * (r.norm_sqr() - 1.0))
                .collect(),
        );
        n * (n - 1.0) * self.nu0 / (2.0 * v) + n / (2.0 * v) * sum
    }

    /// `ln P_N = c₀ + Σ_k [c₁ Re(ρ_k ρ′*_k) - ½c₂(|ρ_k|² + |ρ′_k|²)]`, with
    /// `c₀ = -βE₀ + Σ_k c₀(k)`.
    pub fn pair_factor(&self, config: &Configuration) -> Result<f64> {
        self.check(config)?;
        let beta = self.beta();
        let (r, rp) = (self.rhos(config.coords()), self.rhos(config.coords_primed()));
        let c0 = -beta * self.ground_state_energy()
            + sorted_sum(self.modes.iter().map(|m| c0_mode(&m.mode, beta)).collect());
        let quad = sorted_sum(
            self.modes
                .iter()
                .zip(r.iter().zip(&rp))
                .map(|(m, (a, b))| {
                    let cross = a.re * b.re + a.im * b.im;
                    c1(&m.mode, beta) * cross - 0.5 * c2(&m.mode, beta) * (a.norm_sqr() + b.norm_sqr())
                })
                .collect(),
        );
        Ok(c0 + quad)
    }

    pub fn ideal(&self, config: &Configuration) -> Result<f64> {
        self.check(config)?;
        ideal_dm(config, self.params.hbar2_over(self.m_star), self.beta())
    }

    pub fn evaluate(&self, config: &Configuration) -> Result<DmValue> {
        let log_r0 = self.ideal(config)?;
        let log_p = self.pair_factor(config)?;
        Ok(DmValue {
            log_r0,
            log_p,
            log_r: log_r0 + log_p,
        })
    }

    fn penrose_form(&self, config: &Configuration, interacting: bool) -> Result<f64> {
        self.check(config)?;
        let beta = self.beta();
        let (r, rp) = (self.rhos(config.coords()), self.rhos(config.coords_primed()));
        let terms = self
            .modes
            .iter()
            .zip(r.iter().zip(&rp))
            .map(|(m, (a, b))| {
                let (alpha, ln_alpha, e) = if interacting {
                    (m.mode.alpha, m.mode.ln_alpha(), m.mode.energy)
                } else {
                    (1.0, 0.0, m.mode.eps)
                };
                let y = beta * e;
                let s = a.norm_sqr() + b.norm_sqr();
                let cross = 2.0 * (a.re * b.re + a.im * b.im);
                0.5 * (ln_alpha + ln_tanh_half(y)) - ln_one_minus_exp(y) + 0.25 * s
                    - 0.25 * alpha * (s * coth(y) - cross * csch(y))
            })
            .collect();
        let e0 = if interacting { beta * self.ground_state_energy() } else { 0.0 };
        Ok(sorted_sum(terms) - e0)
    }

    /// The Penrose–Feenberg low-temperature form of `ln R_N`.
    pub fn penrose_feenberg(&self, config: &Configuration) -> Result<f64> {
        self.penrose_form(config, true)
    }

    /// The same form with `α ≡ 1` and the bare-mass spectrum.
    pub fn penrose_feenberg_ideal(&self, config: &Configuration) -> Result<f64> {
        self.penrose_form(config, false)
    }

    /// `ln ψ₀(x) = -(N/2) ln V + ½Σ′ ln α_k - ¼Σ_k (α_k - 1)|ρ_k|²`, where `Σ′`
    /// runs over one member of each `±k` pair.
    pub fn ln_psi0(&self, positions: &[Vec3]) -> f64 {
        let rho = self.rhos(positions);
        let norm = 0.25 * sorted_sum(self.modes.iter().map(|m| m.mode.ln_alpha()).collect());
        let gauss = sorted_sum(
            self.modes
                .iter()
                .zip(&rho)
                .map(|(m, r)| m.mode.alpha_m1 * r.norm_sqr())
                .collect(),
        );
        -0.5 * self.n as f64 * ln(self.volume()) + norm - 0.25 * gauss
    }

    /// `ln P_N - ln V^{-N}` against `-βE₀ + ln ψ₀(x) + ln ψ₀(x′)`: the
    /// low-temperature factorization residual of the pair factor.
    pub fn ground_state_residual(&self, config: &Configuration) -> Result<f64> {
        let lhs = self.pair_factor(config)? - self.n as f64 * ln(self.volume());
        let rhs = -self.beta() * self.ground_state_energy()
            + self.ln_psi0(config.coords())
            + self.ln_psi0(config.coords_primed());
        Ok(lhs - rhs)
    }
}
