//! Physical constants and the global state-point parameters.

use crate::error::{Error, Result};

/// `ħ²/(u·k_B)` in K·Å² (CODATA 2018), for converting a mass in atomic mass
/// units into `ħ²/m`.
pub const HBAR2_OVER_AMU_KB: f64 = 48.508_734_121_489_97;

/// `ħ²/m` for ⁴He in K·Å², the value conventionally used for helium.
pub const HE4_HBAR2_OVER_M: f64 = 12.1194;

/// Saturated-vapour-pressure number density of liquid ⁴He in Å⁻³.
pub const HE4_DENSITY: f64 = 0.02185;

/// State point of the liquid: particle mass, number density, temperature,
/// and the ħ²/m combination through which quantum effects enter.
///
/// `hbar_scale` multiplies ħ² and is 1 for the physical system; driving it to
/// zero at fixed potential, density and temperature realises the classical
/// limit numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    mass: f64,
    density: f64,
    temperature: f64,
    hbar_scale: f64,
    hbar2_over_m: f64,
}

impl SystemParams {
    /// `mass` in atomic mass units, `density` in Å⁻³, `temperature` in K.
    pub fn new(mass: f64, density: f64, temperature: f64) -> Result<Self> {
        check_positive("mass", mass)?;
        check_positive("density", density)?;
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::invalid(
                "temperature",
                temperature,
                "must be finite and >= 0",
            ));
        }
        Ok(Self {
            mass,
            density,
            temperature,
            hbar_scale: 1.0,
            hbar2_over_m: HBAR2_OVER_AMU_KB / mass,
        })
    }

    /// Liquid ⁴He at saturated vapour pressure density.
    ///
    /// The mass is the one implied by `ħ²/m = 12.1194 K·Å²` so that the stored
    /// `ħ²/m` is exactly the conventional value.
    pub fn helium4(temperature: f64) -> Result<Self> {
        Self::new(HBAR2_OVER_AMU_KB / HE4_HBAR2_OVER_M, HE4_DENSITY, temperature)
    }

    pub fn with_temperature(&self, temperature: f64) -> Result<Self> {
        let mut p = Self::new(self.mass, self.density, temperature)?;
        p.hbar_scale = self.hbar_scale;
        p.hbar2_over_m = self.hbar2_over_m;
        Ok(p)
    }

    pub fn with_density(&self, density: f64) -> Result<Self> {
        check_positive("density", density)?;
        Ok(Self { density, ..*self })
    }

    /// Replace ħ² by `scale·ħ²`; `scale → 0` is the classical limit.
    pub fn with_hbar_scale(&self, scale: f64) -> Result<Self> {
        check_positive("hbar_scale", scale)?;
        Ok(Self {
            hbar_scale: scale,
            hbar2_over_m: scale * HBAR2_OVER_AMU_KB / self.mass,
            ..*self
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// `1/T`; infinite at `T = 0`.
    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }

    pub fn hbar_scale(&self) -> f64 {
        self.hbar_scale
    }

    /// `ħ²/m` in K·Å².
    pub fn hbar2_over_m(&self) -> f64 {
        self.hbar2_over_m
    }

    /// `ħ²/m*` for an effective mass `m_star` given in the same units as `mass`.
    pub fn hbar2_over(&self, m_star: f64) -> f64 {
        self.hbar2_over_m * (self.mass / m_star)
    }

    /// Free-particle energy `ħ²q²/2m` in K.
    pub fn free_energy(&self, q: f64) -> f64 {
        0.5 * self.hbar2_over_m * q * q
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, v, "must be finite and > 0"))
    }
}
