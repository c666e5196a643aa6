//! Tabulated functions of `q` with monotone cubic interpolation and explicit
//! extrapolation policies.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::QGrid;
use crate::math::powf;

/// What to return outside the tabulated range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extrapolation {
    /// Hold the value at the nearest edge node.
    Hold,
    /// A fixed value.
    Constant(f64),
    /// Straight line through the two nodes nearest the edge.
    Linear,
    /// Relax to `asymptote` as a power law: on the high side
    /// `a + (f_edge - a)(q_edge/q)^exponent`, on the low side
    /// `a + (f_edge - a)(q/q_edge)^exponent`.
    PowerTail { asymptote: f64, exponent: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedFunction {
    grid: QGrid,
    values: Vec<f64>,
    slopes: Vec<f64>,
    low: Extrapolation,
    high: Extrapolation,
}

impl TabulatedFunction {
    pub fn new(
        grid: QGrid,
        values: Vec<f64>,
        low: Extrapolation,
        high: Extrapolation,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::invalid(
                "values",
                values.len() as f64,
                "length must match the grid",
            ));
        }
        if grid.len() < 2 {
            return Err(Error::invalid("grid", grid.len() as f64, "at least 2 nodes"));
        }
        for (i, (&q, &v)) in grid.nodes().iter().zip(&values).enumerate() {
            if !v.is_finite() {
                return Err(Error::Data {
                    index: i,
                    q,
                    value: v,
                    reason: "ordinate is not finite",
                });
            }
        }
        if let Extrapolation::PowerTail { exponent, .. } = low {
            if !(exponent > 0.0) {
                return Err(Error::invalid("exponent", exponent, "power tail needs exponent > 0"));
            }
        }
        if let Extrapolation::PowerTail { exponent, .. } = high {
            if !(exponent > 0.0) {
                return Err(Error::invalid("exponent", exponent, "power tail needs exponent > 0"));
            }
        }
        let slopes = pchip_slopes(grid.nodes(), &values);
        Ok(Self {
            grid,
            values,
            slopes,
            low,
            high,
        })
    }

    /// Tabulate `f` on the nodes of `grid`.
    pub fn from_fn<F>(grid: QGrid, low: Extrapolation, high: Extrapolation, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let values = grid.nodes().iter().map(|&q| f(q)).collect::<Result<Vec<_>>>()?;
        Self::new(grid, values, low, high)
    }

    pub fn grid(&self) -> &QGrid {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn low_policy(&self) -> Extrapolation {
        self.low
    }

    pub fn high_policy(&self) -> Extrapolation {
        self.high
    }

    pub fn with_policies(&self, low: Extrapolation, high: Extrapolation) -> Result<Self> {
        Self::new(self.grid.clone(), self.values.clone(), low, high)
    }

    pub fn eval(&self, q: f64) -> f64 {
        let x = self.grid.nodes();
        let n = x.len();
        if q < x[0] {
            return extrapolate(self.low, q, x[0], x[1], self.values[0], self.values[1], false);
        }
        if q > x[n - 1] {
            return extrapolate(
                self.high,
                q,
                x[n - 1],
                x[n - 2],
                self.values[n - 1],
                self.values[n - 2],
                true,
            );
        }
        let k = x.partition_point(|&node| node <= q).clamp(1, n - 1) - 1;
        let h = x[k + 1] - x[k];
        let t = (q - x[k]) / h;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (d0, d1) = (self.slopes[k] * h, self.slopes[k + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1
    }
}

fn extrapolate(
    policy: Extrapolation,
    q: f64,
    edge_q: f64,
    next_q: f64,
    edge_v: f64,
    next_v: f64,
    high: bool,
) -> f64 {
    match policy {
        Extrapolation::Hold => edge_v,
        Extrapolation::Constant(c) => c,
        Extrapolation::Linear => edge_v + (next_v - edge_v) / (next_q - edge_q) * (q - edge_q),
        Extrapolation::PowerTail {
            asymptote,
            exponent,
        } => {
            let ratio = if high { edge_q / q } else { q / edge_q };
            asymptote + (edge_v - asymptote) * powf(ratio, exponent)
        }
    }
}

/// Fritsch–Carlson slopes with the weighted harmonic mean at interior nodes
/// and the shape-preserving three-point formula at the ends.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
    if n == 2 {
        return alloc::vec![delta[0], delta[0]];
    }
    let mut d = alloc::vec![0.0; n];
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a * b > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
