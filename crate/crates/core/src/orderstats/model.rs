use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Absolutely continuous parametric distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionModel {
    Uniform {
        a: f64,
        b: f64,
    },
    Exponential {
        rate: f64,
    },
    /// Survival `(scale / x)^shape` for `x >= scale`.
    Pareto {
        scale: f64,
        shape: f64,
    },
    /// Survival `exp(-(x / scale)^shape)` for `x >= 0`.
    Weibull {
        shape: f64,
        scale: f64,
    },
}

impl DistributionModel {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidModel(format!(
                "uniform needs a < b, got ({a}, {b})"
            )));
        }
        Ok(Self::Uniform { a, b })
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        positive("exponential rate", rate)?;
        Ok(Self::Exponential { rate })
    }

    pub fn pareto(scale: f64, shape: f64) -> Result<Self> {
        positive("pareto scale", scale)?;
        positive("pareto shape", shape)?;
        Ok(Self::Pareto { scale, shape })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        positive("weibull shape", shape)?;
        positive("weibull scale", scale)?;
        Ok(Self::Weibull { shape, scale })
    }

    /// Closed support interval (upper end may be infinite).
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Uniform { a, b } => (a, b),
            Self::Exponential { .. } | Self::Weibull { .. } => (0.0, f64::INFINITY),
            Self::Pareto { scale, .. } => (scale, f64::INFINITY),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Self::Pareto { scale, shape } => {
                if x <= scale {
                    0.0
                } else {
                    -(shape * (scale / x).ln()).exp_m1()
                }
            }
            Self::Weibull { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-(x / scale).powf(shape)).exp_m1()
                }
            }
        }
    }

    /// Survival function `1 - F(x)`, evaluated directly for tail accuracy.
    pub fn sf(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform { a, b } => ((b - x) / (b - a)).clamp(0.0, 1.0),
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-rate * x).exp()
                }
            }
            Self::Pareto { scale, shape } => {
                if x <= scale {
                    1.0
                } else {
                    (scale / x).powf(shape)
                }
            }
            Self::Weibull { shape, scale } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-(x / scale).powf(shape)).exp()
                }
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Uniform { a, b } => {
                if (a..=b).contains(&x) {
                    1.0 / (b - a)
                } else {
                    0.0
                }
            }
            Self::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Self::Pareto { scale, shape } => {
                if x < scale {
                    0.0
                } else {
                    shape / x * (scale / x).powf(shape)
                }
            }
            Self::Weibull { shape, scale } => {
                if x < 0.0 {
                    0.0
                } else {
                    let z = x / scale;
                    shape / scale * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
                }
            }
        }
    }

    /// Inverse cdf on `[0, 1]`.
    pub fn quantile(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return self.support().0;
        }
        if u >= 1.0 {
            return self.support().1;
        }
        match *self {
            Self::Uniform { a, b } => a + u * (b - a),
            Self::Exponential { rate } => -(-u).ln_1p() / rate,
            Self::Pareto { scale, shape } => scale * (-(-u).ln_1p() / shape).exp(),
            Self::Weibull { shape, scale } => scale * (-(-u).ln_1p()).powf(1.0 / shape),
        }
    }

    /// Inverse survival function: the `x` with `sf(x) = p`.
    pub fn isf(&self, p: f64) -> f64 {
        if p >= 1.0 {
            return self.support().0;
        }
        if p <= 0.0 {
            return self.support().1;
        }
        match *self {
            Self::Uniform { a, b } => b - p * (b - a),
            Self::Exponential { rate } => -p.ln() / rate,
            Self::Pareto { scale, shape } => scale * p.powf(-1.0 / shape),
            Self::Weibull { shape, scale } => scale * (-p.ln()).powf(1.0 / shape),
        }
    }

    /// Upper integration limit: the support end, or the point with tail mass
    /// `1e-12` for unbounded supports.
    pub fn truncation_point(&self) -> f64 {
        let hi = self.support().1;
        if hi.is_finite() {
            hi
        } else {
            self.isf(1e-12)
        }
    }

    /// Whether the family is DFR for these parameters.
    pub fn is_dfr(&self) -> bool {
        match *self {
            Self::Uniform { .. } => false,
            Self::Exponential { .. } | Self::Pareto { .. } => true,
            Self::Weibull { shape, .. } => shape <= 1.0,
        }
    }
}

fn positive(what: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "{what} must be positive, got {v}"
        )))
    }
}

impl fmt::Display for DistributionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            Self::Exponential { rate } => write!(f, "exp:{rate}"),
            Self::Pareto { scale, shape } => write!(f, "pareto:{scale},{shape}"),
            Self::Weibull { shape, scale } => write!(f, "weibull:{shape},{scale}"),
        }
    }
}

impl FromStr for DistributionModel {
    type Err = Error;

    /// Parses `exp:rate`, `uniform:a,b`, `pareto:xm,shape`, `weibull:k,scale`.
    fn from_str(s: &str) -> Result<Self> {
        let (family, params) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidModel(format!("expected family:params, got {s:?}")))?;
        let nums = params
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidModel(format!("cannot parse parameter {p:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidModel(format!(
                    "{family} takes {n} parameter(s), got {}",
                    nums.len()
                )))
            }
        };
        match family.trim() {
            "exp" | "exponential" => {
                arity(1)?;
                Self::exponential(nums[0])
            }
            "uniform" => {
                arity(2)?;
                Self::uniform(nums[0], nums[1])
            }
            "pareto" => {
                arity(2)?;
                Self::pareto(nums[0], nums[1])
            }
            "weibull" => {
                arity(2)?;
                Self::weibull(nums[0], nums[1])
            }
            other => Err(Error::InvalidModel(format!("unknown family {other:?}"))),
        }
    }
}
