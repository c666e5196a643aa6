//! Wave-number grids and the thermodynamic-limit replacement of mode sums by
//! integrals.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{ln, exp, PI};
use crate::quadrature::{try_integrate, Domain, Estimate, IntegrationSpec};
use crate::system::SystemParams;

/// Strictly increasing positive wave numbers (Å⁻¹) plus the truncation cutoff
/// and the tolerance used for every q-integral on this grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QGrid {
    nodes: Vec<f64>,
    q_max: f64,
    spec: IntegrationSpec,
}

impl QGrid {
    /// Default grid for ⁴He work: 512 log-spaced nodes on `[0.02, 8]` Å⁻¹.
    pub fn helium_default() -> Self {
        Self::log_spaced(0.02, 8.0, 512).expect("static grid parameters are valid")
    }

    pub fn log_spaced(q_min: f64, q_max: f64, n: usize) -> Result<Self> {
        if !(q_min > 0.0 && q_max > q_min && q_max.is_finite()) {
            return Err(Error::invalid("q_min", q_min, "requires 0 < q_min < q_max"));
        }
        if n < 2 {
            return Err(Error::invalid("n", n as f64, "at least 2 nodes"));
        }
        let (a, b) = (ln(q_min), ln(q_max));
        let mut nodes: Vec<f64> = (0..n)
            .map(|i| exp(a + (b - a) * i as f64 / (n - 1) as f64))
            .collect();
        nodes[0] = q_min;
        nodes[n - 1] = q_max;
        Self::from_nodes(nodes, q_max)
    }

    pub fn linear(q_min: f64, q_max: f64, n: usize) -> Result<Self> {
        if !(q_min > 0.0 && q_max > q_min && q_max.is_finite()) {
            return Err(Error::invalid("q_min", q_min, "requires 0 < q_min < q_max"));
        }
        if n < 2 {
            return Err(Error::invalid("n", n as f64, "at least 2 nodes"));
        }
        let step = (q_max - q_min) / (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n).map(|i| q_min + step * i as f64).collect();
        nodes[n - 1] = q_max;
        Self::from_nodes(nodes, q_max)
    }

    /// Arbitrary nodes; `q_max` must not lie below the last node.
    pub fn from_nodes(nodes: Vec<f64>, q_max: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::invalid("nodes", 0.0, "grid is empty"));
        }
        for (i, &q) in nodes.iter().enumerate() {
            if !(q > 0.0 && q.is_finite()) {
                return Err(Error::Data {
                    index: i,
                    q,
                    value: q,
                    reason: "wave numbers must be finite and > 0",
                });
            }
            if i > 0 && !(q > nodes[i - 1]) {
                return Err(Error::Data {
                    index: i,
                    q,
                    value: nodes[i - 1],
                    reason: "wave numbers must be strictly increasing",
                });
            }
        }
        let last = nodes[nodes.len() - 1];
        if !(q_max >= last && q_max.is_finite()) {
            return Err(Error::invalid("q_max", q_max, "must be finite and >= last node"));
        }
        Ok(Self {
            nodes,
            q_max,
            spec: IntegrationSpec::default(),
        })
    }

    pub fn with_spec(mut self, spec: IntegrationSpec) -> Self {
        self.spec = spec;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.spec.rel_tol = rel_tol;
        self
    }

    pub fn with_q_max(mut self, q_max: f64) -> Result<Self> {
        let last = self.nodes[self.nodes.len() - 1];
        if !(q_max >= last && q_max.is_finite()) {
            return Err(Error::invalid("q_max", q_max, "must be finite and >= last node"));
        }
        self.q_max = q_max;
        Ok(self)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn q_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn spec(&self) -> &IntegrationSpec {
        &self.spec
    }

    /// `∫₀^{q_max} g(q) dq` with this grid's tolerance.
    pub fn integrate<F>(&self, g: F) -> Result<Estimate>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        try_integrate(
            g,
            Domain::Finite {
                lo: 0.0,
                hi: self.q_max,
            },
            &self.spec,
        )
    }
}

/// `(1/N) Σ_{q≠0} f(q)` in the thermodynamic limit:
/// `(1/(2π²ρ)) ∫₀^{q_max} q² f(q) dq`.
///
/// Fails with `DivergentTail` when `q² f` has not started to decay by the
/// cutoff, since the truncated value would then be meaningless.
pub fn sum_to_integral<F>(mut f: F, params: &SystemParams, grid: &QGrid) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let q_max = grid.q_max();
    let prefactor = 1.0 / (2.0 * PI * PI * params.density());
    let at = |f: &mut F, q: f64| -> Result<f64> {
        let v = q * q * f(q)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { at: q, value: v })
        }
    };
    let edge = at(&mut f, q_max)?;
    let half = at(&mut f, 0.5 * q_max)?;
    let estimate = grid.integrate(|q| at(&mut f, q))?;
    let value = prefactor * estimate.value;
    let tail = prefactor * q_max * edge.abs();
    let target = f64::max(grid.spec().abs_tol, grid.spec().rel_tol * value.abs());
    if edge != 0.0 && edge.abs() >= half.abs() && tail > target {
        return Err(Error::DivergentTail {
            q_max,
            tail_estimate: tail,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;

    fn unit_density() -> SystemParams {
        SystemParams::new(4.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn gaussian_moment() {
        let g = QGrid::log_spaced(0.01, 40.0, 8).unwrap().with_rel_tol(1e-13);
        let v = sum_to_integral(|q| Ok(exp(-q * q)), &unit_density(), &g).unwrap();
        let exact = sqrt(PI) / 4.0 / (2.0 * PI * PI);
        assert!((v - exact).abs() < 1e-14);
        assert!((v - 0.02244).abs() < 1e-5);
    }

    #[test]
    fn zero_integrand() {
        let g = QGrid::helium_default();
        assert_eq!(sum_to_integral(|_| Ok(0.0), &unit_density(), &g).unwrap(), 0.0);
    }

    #[test]
    fn non_decaying_tail_is_an_error() {
        let g = QGrid::log_spaced(0.1, 10.0, 8).unwrap();
        let e = sum_to_integral(|_| Ok(1.0), &unit_density(), &g).unwrap_err();
        assert!(matches!(e, Error::DivergentTail { .. }));
    }

    #[test]
    fn non_finite_sample_names_q() {
        let g = QGrid::log_spaced(0.1, 10.0, 8).unwrap();
        let e = sum_to_integral(
            |q| Ok(if q > 3.0 && q < 4.0 { f64::NAN } else { exp(-q) }),
            &unit_density(),
            &g,
        )
        .unwrap_err();
        match e {
            Error::NonFiniteIntegrand { at, .. } => assert!(at > 3.0 && at < 4.0),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn rejects_bad_nodes() {
        assert!(QGrid::from_nodes(alloc::vec![0.0, 1.0], 1.0).is_err());
        assert!(QGrid::from_nodes(alloc::vec![1.0, 1.0], 1.0).is_err());
        assert!(QGrid::from_nodes(alloc::vec![1.0, 2.0], 1.5).is_err());
        let g = QGrid::log_spaced(0.02, 8.0, 512).unwrap();
        assert_eq!(g.len(), 512);
        assert_eq!(g.q_min(), 0.02);
        assert_eq!(g.q_max(), 8.0);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
    }
}
