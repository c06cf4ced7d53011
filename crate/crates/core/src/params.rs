use crate::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// Dimension and order of the operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    n: u32,
    s: f64,
}

impl Params {
    pub fn new(n: u32, s: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter {
                what: "dimension n",
                value: n as f64,
            });
        }
        if !(s.is_finite() && s > 0.0 && s < n as f64 / 2.0) {
            return Err(Error::InvalidParameter {
                what: "order s (need 0 < s < n/2)",
                value: s,
            });
        }
        Ok(Params { n, s })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> f64 {
        self.n as f64
    }

    /// (n − 1)/2
    pub fn rho(&self) -> f64 {
        (self.n as f64 - 1.0) / 2.0
    }

    /// Critical exponent 2n/(n − 2s).
    pub fn critical_exponent(&self) -> f64 {
        let n = self.n as f64;
        2.0 * n / (n - 2.0 * self.s)
    }

    /// Decay exponent (n − 2s)/2 of the bubble.
    pub fn bubble_exponent(&self) -> f64 {
        (self.n as f64 - 2.0 * self.s) / 2.0
    }
}

/// Which spectral symbol an operation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiplierKind {
    Gjms,
    Intertwined,
    Remainder,
}

impl MultiplierKind {
    pub fn name(&self) -> &'static str {
        match self {
            MultiplierKind::Gjms => "gjms",
            MultiplierKind::Intertwined => "intertwined",
            MultiplierKind::Remainder => "remainder",
        }
    }
}

impl core::str::FromStr for MultiplierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gjms" => Ok(MultiplierKind::Gjms),
            "intertwined" | "tilde" => Ok(MultiplierKind::Intertwined),
            "remainder" => Ok(MultiplierKind::Remainder),
            _ => Err(Error::InvalidParameter {
                what: "multiplier kind",
                value: f64::NAN,
            }),
        }
    }
}

/// Numerical tolerances shared across modules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub pole: f64,
    pub hyp2f1_term: f64,
    pub hyp2f1_max_terms: usize,
    pub taylor_radius: f64,
    pub spectral_tail: f64,
    pub inverse_tail: f64,
    pub kernel_gaussian_floor: f64,
    pub kernel_max_panels: usize,
    pub optimizer_budget: usize,
    pub optimizer_tol: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    pole: 1e-12,
    hyp2f1_term: 1e-14,
    hyp2f1_max_terms: 10_000,
    taylor_radius: 0.05,
    spectral_tail: 1e-8,
    inverse_tail: 1e-6,
    kernel_gaussian_floor: 1e-16,
    kernel_max_panels: 4096,
    optimizer_budget: 500,
    optimizer_tol: 1e-5,
};
