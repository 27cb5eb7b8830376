use std::fmt;
use std::ops::{Div, Mul, MulAssign};

/// A nonnegative real stored by its natural logarithm.
///
/// Zero is represented by `ln = -inf`; there is no separate flag to keep
/// in sync.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
pub struct LogNumber {
    ln: f64,
}

impl LogNumber {
    pub const ZERO: LogNumber = LogNumber {
        ln: f64::NEG_INFINITY,
    };
    pub const ONE: LogNumber = LogNumber { ln: 0.0 };

    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan());
        LogNumber { ln }
    }

    /// # Panics
    /// If `v` is negative or NaN.
    pub fn from_value(v: f64) -> Self {
        assert!(v >= 0.0, "LogNumber from negative value {v}");
        LogNumber { ln: v.ln() }
    }

    pub fn is_zero(&self) -> bool {
        self.ln == f64::NEG_INFINITY
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        self.ln
    }

    /// The linear value (may overflow to `inf`).
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    pub fn powi(self, k: i32) -> Self {
        if self.is_zero() {
            return if k == 0 { Self::ONE } else { Self::ZERO };
        }
        LogNumber {
            ln: self.ln * f64::from(k),
        }
    }

    pub fn recip(self) -> Self {
        LogNumber { ln: -self.ln }
    }
}

impl Mul for LogNumber {
    type Output = LogNumber;
    fn mul(self, rhs: LogNumber) -> LogNumber {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        LogNumber {
            ln: self.ln + rhs.ln,
        }
    }
}

impl MulAssign for LogNumber {
    fn mul_assign(&mut self, rhs: LogNumber) {
        *self = *self * rhs;
    }
}

impl Div for LogNumber {
    type Output = LogNumber;
    fn div(self, rhs: LogNumber) -> LogNumber {
        assert!(!rhs.is_zero(), "division by a zero LogNumber");
        if self.is_zero() {
            return Self::ZERO;
        }
        LogNumber {
            ln: self.ln - rhs.ln,
        }
    }
}

impl fmt::Debug for LogNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "LogNumber(0)")
        } else {
            write!(f, "LogNumber(exp {})", self.ln)
        }
    }
}

/// `ln(sum exp(v_i))`. Sorts `logs` in place (descending) before the
/// reduction, so the result depends only on the multiset of inputs.
pub fn log_sum_exp(logs: &mut [f64]) -> f64 {
    logs.sort_unstable_by(|a, b| b.total_cmp(a));
    let Some(&m) = logs.first() else {
        return f64::NEG_INFINITY;
    };
    if m == f64::NEG_INFINITY {
        return m;
    }
    let rest: f64 = logs[1..].iter().map(|&x| (x - m).exp()).sum();
    m + rest.ln_1p()
}

/// Sum of [`LogNumber`]s via [`log_sum_exp`].
pub fn sum(terms: impl IntoIterator<Item = LogNumber>) -> LogNumber {
    let mut v: Vec<f64> = terms.into_iter().map(|t| t.ln).collect();
    LogNumber::from_ln(log_sum_exp(&mut v))
}
