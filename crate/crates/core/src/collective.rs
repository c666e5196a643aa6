//! Collective variables `ρ_q = N^{-1/2} Σ_j e^{-i q·r_j}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{cos, sin, sqrt};

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Density-fluctuation Fourier coefficient for the particles at `positions`.
pub fn rho_q(positions: &[Vec3], q: &Vec3) -> Result<Complex64> {
    if positions.is_empty() {
        return Err(Error::invalid("n", 0.0, "at least one particle"));
    }
    if q.iter().all(|&c| c == 0.0) {
        return Err(Error::ExcludedMode);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for r in positions {
        let phase = dot(q, r);
        sum += Complex64::new(cos(phase), -sin(phase));
    }
    Ok(sum / sqrt(positions.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;
    use proptest::prelude::*;

    #[test]
    fn single_particle_at_origin() {
        let r = rho_q(&[[0.0; 3]], &[0.3, -1.0, 2.0]).unwrap();
        assert_eq!(r, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn symmetric_pair() {
        let r = rho_q(&[[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]], &[PI, 0.0, 0.0]).unwrap();
        assert!((r.re + sqrt(2.0)).abs() < 1e-15);
        assert!(r.im.abs() < 1e-15);
    }

    #[test]
    fn zero_mode_rejected() {
        assert_eq!(rho_q(&[[1.0; 3]], &[0.0; 3]), Err(Error::ExcludedMode));
    }

    #[test]
    fn matches_direct_summation() {
        let pos = [
            [0.1, 0.7, 2.3],
            [1.9, -0.4, 0.2],
            [3.3, 3.1, -1.2],
            [-2.2, 0.5, 0.9],
            [0.0, 1.5, 1.5],
        ];
        let q = [0.7, -1.3, 0.4];
        let r = rho_q(&pos, &q).unwrap();
        let mut re = 0.0;
        let mut im = 0.0;
        for p in &pos {
            let ph = q[0] * p[0] + q[1] * p[1] + q[2] * p[2];
            re += ph.cos();
            im -= ph.sin();
        }
        let s = (pos.len() as f64).sqrt();
        assert!((r.re - re / s).abs() < 1e-14);
        assert!((r.im - im / s).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn conjugate_symmetry_and_bound(
            pos in proptest::collection::vec(proptest::array::uniform3(-10.0f64..10.0), 1..8),
            q in proptest::array::uniform3(0.1f64..3.0),
        ) {
            let a = rho_q(&pos, &q).unwrap();
            let b = rho_q(&pos, &[-q[0], -q[1], -q[2]]).unwrap();
            prop_assert_eq!(a, b.conj());
            prop_assert!(a.norm_sqr() <= pos.len() as f64 * (1.0 + 1e-12));
        }
    }
}
