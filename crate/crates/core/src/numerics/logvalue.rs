use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A signed real stored as `sign · exp(log_magnitude)`.
///
/// Quantities such as `e^{−ν/2}` at `ν = 10⁴` are far outside the `f64`
/// range; everything exponentially large or small is carried in this form
/// and only converted with [`LogValue::to_f64`] at the edges.
///
/// Invariant: `sign == 0` exactly when `log_magnitude == −∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    sign: i8,
    log_magnitude: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        log_magnitude: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue {
        sign: 1,
        log_magnitude: 0.0,
    };

    /// Builds a value from a sign and a natural-log magnitude. A sign of zero
    /// or a magnitude of `−∞` both produce [`LogValue::ZERO`].
    pub fn new(sign: i8, log_magnitude: f64) -> Self {
        debug_assert!(!log_magnitude.is_nan(), "NaN log magnitude");
        if sign == 0 || log_magnitude == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue {
                sign: sign.signum(),
                log_magnitude,
            }
        }
    }

    /// A positive value given by its logarithm.
    pub fn from_ln(log_magnitude: f64) -> Self {
        Self::new(1, log_magnitude)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Native value; under/overflows to `0` or `±∞` outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.log_magnitude.exp()
    }

    pub fn abs(&self) -> Self {
        Self::new(self.sign.abs(), self.log_magnitude)
    }

    /// Multiplies by `e^{shift}`.
    pub fn scale_exp(&self, shift: f64) -> Self {
        Self::new(self.sign, self.log_magnitude + shift)
    }

    /// Ratio `self / other` as a native float, computed in log space.
    pub fn ratio(&self, other: &LogValue) -> f64 {
        (*self / *other).to_f64()
    }

    /// Compares by value.
    pub fn total_cmp(&self, other: &LogValue) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.log_magnitude.total_cmp(&other.log_magnitude),
                _ => other.log_magnitude.total_cmp(&self.log_magnitude),
            },
            ord => ord,
        }
    }
}

impl Default for LogValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s > 0 { "" } else { "-" }, self.log_magnitude),
        }
    }
}

impl Neg for LogValue {
    type Output = LogValue;
    fn neg(self) -> LogValue {
        LogValue {
            sign: -self.sign,
            log_magnitude: self.log_magnitude,
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::new(self.sign * rhs.sign, self.log_magnitude + rhs.log_magnitude)
    }
}

impl Mul<f64> for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: f64) -> LogValue {
        self * LogValue::from_f64(rhs)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        assert!(!rhs.is_zero(), "LogValue division by zero");
        LogValue::new(self.sign * rhs.sign, self.log_magnitude - rhs.log_magnitude)
    }
}

impl Add for LogValue {
    type Output = LogValue;
    fn add(self, rhs: LogValue) -> LogValue {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_magnitude >= rhs.log_magnitude {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = small.log_magnitude - big.log_magnitude;
        if big.sign == small.sign {
            LogValue::new(big.sign, big.log_magnitude + d.exp().ln_1p())
        } else if d == 0.0 {
            LogValue::ZERO
        } else {
            // ln(1 − e^d) for d < 0
            LogValue::new(big.sign, big.log_magnitude + (-d.exp_m1()).ln())
        }
    }
}

impl Sub for LogValue {
    type Output = LogValue;
    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

impl std::iter::Sum for LogValue {
    fn sum<I: Iterator<Item = LogValue>>(iter: I) -> LogValue {
        let mut acc = LogSum::new();
        for v in iter {
            acc.push(v);
        }
        acc.value()
    }
}

/// Streaming signed log-sum-exp accumulator.
///
/// Positive and negative terms are accumulated separately against a running
/// maximum and combined once at the end, so the sum loses precision only to
/// genuine cancellation between the two parts.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    pos: Lse,
    neg: Lse,
}

#[derive(Debug, Clone, Copy)]
struct Lse {
    max: f64,
    scaled: f64,
}

impl Lse {
    const EMPTY: Lse = Lse {
        max: f64::NEG_INFINITY,
        scaled: 0.0,
    };

    fn push(&mut self, l: f64) {
        if l == f64::NEG_INFINITY {
            return;
        }
        if l <= self.max {
            self.scaled += (l - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - l).exp() + 1.0;
            self.max = l;
        }
    }

    fn ln(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled.ln()
        }
    }
}

impl LogSum {
    pub fn new() -> Self {
        LogSum {
            pos: Lse::EMPTY,
            neg: Lse::EMPTY,
        }
    }

    pub fn push(&mut self, v: LogValue) {
        match v.sign {
            1 => self.pos.push(v.log_magnitude),
            -1 => self.neg.push(v.log_magnitude),
            _ => {}
        }
    }

    /// Adds a positive term given by its logarithm.
    pub fn push_ln(&mut self, l: f64) {
        self.pos.push(l);
    }

    pub fn value(&self) -> LogValue {
        LogValue::from_ln(self.pos.ln()) - LogValue::from_ln(self.neg.ln())
    }
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

/// `ln Σ exp(xᵢ)`; returns `−∞` only when every input is `−∞` (or the slice is empty).
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}
