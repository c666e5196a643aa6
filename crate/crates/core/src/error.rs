use alloc::vec::Vec;

/// Everything that can go wrong inside the numerical core.
///
/// Variants carry the location (wave number, temperature, node index) where
/// the failure was detected so that callers can report it without
/// re-running the computation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("the q = 0 mode is excluded")]
    ExcludedMode,

    #[error("integrand is not finite at x = {at} (value {value})")]
    NonFiniteIntegrand { at: f64, value: f64 },

    #[error("q²f(q) does not decay at the cutoff q_max = {q_max} (tail estimate {tail_estimate})")]
    DivergentTail { q_max: f64, tail_estimate: f64 },

    #[error(
        "tolerance not reached after {subdivisions} subdivisions: \
         best estimate {estimate} ± {abs_error}"
    )]
    ToleranceNotReached {
        estimate: f64,
        abs_error: f64,
        subdivisions: usize,
    },

    #[error("no sign change over [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finder did not converge in {iterations} iterations (last bracket width {width})")]
    RootNotConverged { iterations: usize, width: f64 },

    #[error("fixed-point iteration did not converge in {} iterations", history.len())]
    FixedPointNotConverged { history: Vec<f64> },

    #[error("stability violated at q = {q}: 1 + 2ρν_q/ε_q = {radicand} < 0")]
    StabilityViolation { q: f64, radicand: f64 },

    #[error(
        "pair approximation breaks down at q = {q}, T = {temperature}: \
         log argument {argument} is not positive"
    )]
    ThermoInstability {
        q: f64,
        temperature: f64,
        argument: f64,
    },

    #[error("unphysical effective mass: correction sum {sum} >= 1")]
    UnphysicalMass { sum: f64 },

    #[error("bad data at node {index} (q = {q}, value = {value}): {reason}")]
    Data {
        index: usize,
        q: f64,
        value: f64,
        reason: &'static str,
    },

    #[error("internal numerical error: {0}")]
    Internal(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
