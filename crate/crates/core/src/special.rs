//! Riemann zeta and the Bose functions `g_s(z) = Σ_{k≥1} z^k / k^s`.

use crate::error::{Error, Result};
use crate::math::{gamma, ln, powf, sin, PI};

const BORWEIN_TERMS: usize = 32;
const SERIES_SWITCH: f64 = 0.55;
const MU_TERMS: usize = 40;

/// Riemann ζ(s) for real `s ≠ 1`.
pub fn zeta(s: f64) -> Result<f64> {
    if !s.is_finite() || s == 1.0 {
        return Err(Error::invalid("s", s, "zeta has a pole at s = 1"));
    }
    if s == 0.0 {
        return Ok(-0.5);
    }
    if s > 0.0 {
        return Ok(eta(s) / (1.0 - powf(2.0, 1.0 - s)));
    }
    let t = 1.0 - s;
    let z = zeta(t)?;
    Ok(powf(2.0, s) * powf(PI, s - 1.0) * sin(0.5 * PI * s) * gamma(t) * z)
}

/// Dirichlet η(s) for `s > 0` by Borwein's accelerated alternating sum.
fn eta(s: f64) -> f64 {
    let n = BORWEIN_TERMS;
    let mut d = [0.0f64; BORWEIN_TERMS + 1];
    let mut term = 1.0;
    let mut acc = 1.0;
    d[0] = acc;
    for i in 0..n {
        let (nf, fi) = (n as f64, i as f64);
        term *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        acc += term;
        d[i + 1] = acc;
    }
    let dn = d[n];
    let mut sum = 0.0;
    for (k, dk) in d.iter().take(n).enumerate() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (dk - dn) / powf((k + 1) as f64, s);
    }
    -sum / dn
}

/// `g_s(z)` for `0 ≤ z ≤ 1`. At `z = 1` it is ζ(s) for `s > 1` and infinite
/// otherwise.
pub fn bose_g(s: f64, z: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::invalid("z", z, "fugacity must lie in [0, 1]"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == 1.0 {
        return if s > 1.0 { zeta(s) } else { Ok(f64::INFINITY) };
    }
    if z <= SERIES_SWITCH {
        return Ok(direct_series(s, z));
    }
    bose_g_mu(s, -ln(z))
}

/// `g_s(e^{-μ})` for `μ ≥ 0`, accurate when `μ` is small.
pub fn bose_g_mu(s: f64, mu: f64) -> Result<f64> {
    if !(mu >= 0.0) {
        return Err(Error::invalid("mu", mu, "requires -ln z >= 0"));
    }
    if mu == 0.0 {
        return bose_g(s, 1.0);
    }
    if mu >= -ln(SERIES_SWITCH) {
        return Ok(direct_series(s, libm::exp(-mu)));
    }
    if s.fract() == 0.0 {
        return Ok(integer_order_series(s, libm::exp(-mu)));
    }
    let mut sum = gamma(1.0 - s) * powf(mu, s - 1.0);
    let mut factor = 1.0;
    for k in 0..MU_TERMS {
        if k > 0 {
            factor *= -mu / k as f64;
        }
        let order = s - k as f64;
        let zk = if order == 1.0 { 0.0 } else { zeta(order)? };
        let term = zk * factor;
        sum += term;
        if k > 4 && term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    Ok(sum)
}

fn direct_series(s: f64, z: f64) -> f64 {
    let mut sum = 0.0;
    let mut zk = 1.0;
    for k in 1..10_000 {
        zk *= z;
        let term = zk / powf(k as f64, s);
        sum += term;
        if term <= 1e-18 * sum {
            break;
        }
    }
    sum
}

fn integer_order_series(s: f64, z: f64) -> f64 {
    if s == 1.0 {
        return -libm::log1p(-z);
    }
    let mut sum = 0.0;
    let mut zk = 1.0;
    for k in 1..10_000_000u64 {
        zk *= z;
        let term = zk / powf(k as f64, s);
        sum += term;
        if term <= 1e-18 * sum {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(s: f64, z: f64, terms: usize) -> f64 {
        (1..=terms)
            .rev()
            .map(|k| powf(z, k as f64) / powf(k as f64, s))
            .sum()
    }

    #[test]
    fn zeta_known_values() {
        assert!((zeta(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(1.5).unwrap() - 2.612_375_348_685_488).abs() < 1e-14);
        assert!((zeta(2.5).unwrap() - 1.341_487_257_250_917).abs() < 1e-14);
        assert!((zeta(0.5).unwrap() + 1.460_354_508_809_586_8).abs() < 1e-14);
        assert!((zeta(-1.0).unwrap() + 1.0 / 12.0).abs() < 1e-15);
        assert!(zeta(-2.0).unwrap().abs() < 1e-15);
        assert!((zeta(-0.5).unwrap() + 0.207_886_224_977_354_57).abs() < 1e-14);
        assert!(zeta(1.0).is_err());
    }

    #[test]
    fn zeta_three_halves_to_six_decimals() {
        let z = zeta(1.5).unwrap();
        assert_eq!((z * 1e6).round() / 1e6, 2.612_375);
    }

    #[test]
    fn bose_g_matches_series_oracle() {
        for &s in &[0.5, 1.5, 2.5] {
            for &z in &[0.1, 0.5, 0.56, 0.8, 0.9] {
                let g = bose_g(s, z).unwrap();
                let b = brute(s, z, 20_000);
                assert!((g - b).abs() < 1e-13 * b, "s={s} z={z}: {g} vs {b}");
            }
        }
    }

    #[test]
    fn bose_g_near_one() {
        let z: f64 = 0.9999;
        let g = bose_g(1.5, z).unwrap();
        let b = brute(1.5, z, 4_000_000);
        // the brute tail beyond 4e6 terms is ≈ ∫ z^k k^{-3/2} dk, below 1e-6
        assert!((g - b).abs() < 2e-6, "{g} vs {b}");
        assert!(bose_g(1.5, 1.0).unwrap() > g);
        assert_eq!(bose_g(0.5, 1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn both_branches_agree_near_the_switch() {
        for &z in &[0.5, SERIES_SWITCH, 0.6] {
            let mu = -ln(z);
            let mut expansion = gamma(1.0 - 1.5) * powf(mu, 0.5);
            let mut factor = 1.0;
            for k in 0..MU_TERMS {
                if k > 0 {
                    factor *= -mu / k as f64;
                }
                expansion += zeta(1.5 - k as f64).unwrap() * factor;
            }
            let series = direct_series(1.5, z);
            assert!((expansion - series).abs() < 1e-14, "z={z}");
        }
    }

    #[test]
    fn integer_order_is_supported() {
        let z = 0.7;
        assert!((bose_g(1.0, z).unwrap() + libm::log1p(-z)).abs() < 1e-15);
        assert!((bose_g(2.0, z).unwrap() - brute(2.0, z, 2000)).abs() < 1e-14);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(bose_g(1.5, 1.1).is_err());
        assert!(bose_g(1.5, -0.1).is_err());
    }
}
