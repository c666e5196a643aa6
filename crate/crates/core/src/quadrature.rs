//! Numerical engines: adaptive Gauss–Kronrod integration with declared
//! integrable singularities, Brent root finding and damped fixed-point
//! iteration.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Integration domain. `SemiInfinite` covers `[lo, ∞)` and is mapped onto
/// `[0, 1)` by `x = lo + scale·t/(1 - t)`; `scale` should be the width over
/// which the integrand decays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { lo: f64, hi: f64 },
    SemiInfinite { lo: f64, scale: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Abscissae of integrable singularities; the domain is split there so
    /// that adaptive bisection closes in on them geometrically.
    pub singular_points: Vec<f64>,
    pub max_subdivisions: usize,
}

impl Default for IntegrationSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-300,
            singular_points: Vec::new(),
            max_subdivisions: 2000,
        }
    }
}

impl IntegrationSpec {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn singular_at(mut self, x: f64) -> Self {
        self.singular_points.push(x);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", self.rel_tol, "must be > 0"));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::invalid("abs_tol", self.abs_tol, "must be > 0"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions", 0.0, "must be >= 1"));
        }
        Ok(())
    }
}

/// Result of an integration: value, absolute error estimate and the number of
/// integrand evaluations spent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod<F>(f: &mut F, lo: f64, hi: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { at: x, value: v })
        }
    };

    let fc = eval(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let scale = half.abs();
    let value = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        let r = libm::pow(200.0 * error / res_asc, 1.5);
        error = res_asc * if r < 1.0 { r } else { 1.0 };
    }
    let round_off = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && round_off > error {
        error = round_off;
    }
    Ok(Segment {
        lo,
        hi,
        value,
        error,
    })
}

/// Integrate `f` over `domain` to the tolerance in `spec`.
///
/// On failure to converge the error carries the best estimate reached.
pub fn integrate<F>(mut f: F, domain: Domain, spec: &IntegrationSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), domain, spec)
}

/// As [`integrate`] for integrands that can themselves fail (nested
/// integrals, state-dependent instabilities).
pub fn try_integrate<F>(mut f: F, domain: Domain, spec: &IntegrationSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    let (pieces, sign) = match domain {
        Domain::Finite { lo, hi } => {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::invalid("interval", lo, "finite bounds required"));
            }
            if lo == hi {
                return Ok(Estimate {
                    value: 0.0,
                    abs_error: 0.0,
                    evaluations: 0,
                });
            }
            let (a, b, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };
            let breaks = breakpoints(a, b, &spec.singular_points)?;
            let pieces = breaks
                .windows(2)
                .map(|w| Piece::Linear { lo: w[0], hi: w[1] })
                .collect::<Vec<_>>();
            (pieces, sign)
        }
        Domain::SemiInfinite { lo, scale } => {
            if !(scale > 0.0 && scale.is_finite()) || !lo.is_finite() {
                return Err(Error::invalid("scale", scale, "must be finite and > 0"));
            }
            let last = spec
                .singular_points
                .iter()
                .fold(lo, |m, &s| if s > m { s } else { m });
            let breaks = breakpoints(lo, last, &spec.singular_points)?;
            let mut pieces = breaks
                .windows(2)
                .map(|w| Piece::Linear { lo: w[0], hi: w[1] })
                .collect::<Vec<_>>();
            pieces.push(Piece::Tail { lo: last, scale });
            (pieces, 1.0)
        }
    };
    let mut eval = |piece: &Piece, t: f64| -> Result<f64> {
        let (x, weight) = match *piece {
            Piece::Linear { .. } => (t, 1.0),
            Piece::Tail { lo, scale } => {
                let one_minus = 1.0 - t;
                (lo + scale * t / one_minus, scale / (one_minus * one_minus))
            }
        };
        if !x.is_finite() {
            return Ok(0.0);
        }
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { at: x, value: v });
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        Ok(v * weight)
    };
    let est = adapt(&mut eval, &pieces, spec)?;
    Ok(Estimate {
        value: sign * est.value,
        ..est
    })
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Linear { lo: f64, hi: f64 },
    Tail { lo: f64, scale: f64 },
}

impl Piece {
    fn parameter_range(&self) -> (f64, f64) {
        match *self {
            Piece::Linear { lo, hi } => (lo, hi),
            Piece::Tail { .. } => (0.0, 1.0),
        }
    }
}

fn breakpoints(a: f64, b: f64, singular: &[f64]) -> Result<Vec<f64>> {
    let mut pts = Vec::with_capacity(singular.len() + 2);
    pts.push(a);
    for &s in singular {
        if !(s >= a && s <= b) {
            return Err(Error::invalid(
                "singular_point",
                s,
                "must lie inside the integration interval",
            ));
        }
        if s > a && s < b {
            pts.push(s);
        }
    }
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    pts.dedup();
    Ok(pts)
}

fn adapt<F>(f: &mut F, pieces: &[Piece], spec: &IntegrationSpec) -> Result<Estimate>
where
    F: FnMut(&Piece, f64) -> Result<f64>,
{
    let mut segments: Vec<(usize, Segment)> = Vec::with_capacity(64);
    for (i, piece) in pieces.iter().enumerate() {
        let (lo, hi) = piece.parameter_range();
        if hi > lo {
            segments.push((i, gauss_kronrod(&mut |t| f(piece, t), lo, hi)?));
        }
    }
    let mut evaluations = 21 * segments.len();
    let mut subdivisions = 0usize;
    loop {
        let (value, error) = segments
            .iter()
            .fold((0.0, 0.0), |(v, e), (_, s)| (v + s.value, e + s.error));
        let target = f64::max(spec.abs_tol, spec.rel_tol * value.abs());
        if error <= target {
            return Ok(Estimate {
                value,
                abs_error: error,
                evaluations,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| {
                a.1 .1
                    .error
                    .partial_cmp(&b.1 .1.error)
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .ok_or(Error::Internal("no segments"))?;
        let (piece_index, seg) = segments[worst];
        let mid = 0.5 * (seg.lo + seg.hi);
        let too_small = !(mid > seg.lo && mid < seg.hi)
            || (seg.hi - seg.lo) <= 4.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE);
        if subdivisions >= spec.max_subdivisions || too_small {
            return Err(Error::ToleranceNotReached {
                estimate: value,
                abs_error: error,
                subdivisions,
            });
        }
        let piece = &pieces[piece_index];
        let left = gauss_kronrod(&mut |t| f(piece, t), seg.lo, mid)?;
        let right = gauss_kronrod(&mut |t| f(piece, t), mid, seg.hi)?;
        segments[worst] = (piece_index, left);
        segments.push((piece_index, right));
        evaluations += 42;
        subdivisions += 1;
    }
}

/// Bracket and tolerance for [`find_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec {
    pub lo: f64,
    pub hi: f64,
    /// Absolute tolerance on the abscissa.
    pub tol: f64,
    pub max_iter: usize,
}

impl RootSpec {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            tol: 1e-14,
            max_iter: 200,
        }
    }

    pub fn tol(self, tol: f64) -> Self {
        Self { tol, ..self }
    }
}

/// Brent's method on a bracketing interval.
pub fn find_root<F>(mut f: F, spec: &RootSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_find_root(|x| Ok(f(x)), spec)
}

pub fn try_find_root<F>(mut f: F, spec: &RootSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(spec.lo < spec.hi) {
        return Err(Error::invalid("bracket", spec.lo, "requires lo < hi"));
    }
    let (mut a, mut b) = (spec.lo, spec.hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..spec.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * spec.tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else if xm > 0.0 {
            tol1
        } else {
            -tol1
        };
        fb = f(b)?;
        if !fb.is_finite() {
            return Err(Error::NonFiniteIntegrand { at: b, value: fb });
        }
    }
    Err(Error::RootNotConverged {
        iterations: spec.max_iter,
        width: (c - b).abs(),
    })
}

/// Outcome of a converged [`fixed_point`] iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub value: f64,
    pub iterations: usize,
    /// Iterates `x_0, x_1, ...`, ending with the returned value.
    pub history: Vec<f64>,
    /// `|x_k - g(x_k)|` for each iterate.
    pub residuals: Vec<f64>,
}

/// Damped iteration `x ← (1-d)·x + d·g(x)` until `|x - g(x)| <= tol`.
pub fn fixed_point<G>(
    mut g: G,
    x0: f64,
    damping: f64,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPoint>
where
    G: FnMut(f64) -> Result<f64>,
{
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::invalid("damping", damping, "must lie in (0, 1]"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", tol, "must be > 0"));
    }
    let mut x = x0;
    let mut history = alloc::vec![x0];
    let mut residuals = Vec::new();
    for k in 0..max_iter {
        let gx = g(x)?;
        if !gx.is_finite() {
            return Err(Error::FixedPointNotConverged { history });
        }
        let r = (x - gx).abs();
        residuals.push(r);
        if r <= tol {
            return Ok(FixedPoint {
                value: x,
                iterations: k,
                history,
                residuals,
            });
        }
        x = (1.0 - damping) * x + damping * gx;
        history.push(x);
    }
    Err(Error::FixedPointNotConverged { history })
}
