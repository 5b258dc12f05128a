use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

/// Which inequality family produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Pairs,
    Full,
    Chain,
    Survival,
    Negative,
    Dfr,
    Prd,
    Cis,
}

impl CheckMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckMode::Pairs => "pairs",
            CheckMode::Full => "full",
            CheckMode::Chain => "chain",
            CheckMode::Survival => "survival",
            CheckMode::Negative => "negative",
            CheckMode::Dfr => "dfr",
            CheckMode::Prd => "prd",
            CheckMode::Cis => "cis",
        }
    }
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pairs" => CheckMode::Pairs,
            "full" => CheckMode::Full,
            "chain" => CheckMode::Chain,
            "survival" => CheckMode::Survival,
            "negative" => CheckMode::Negative,
            "dfr" => CheckMode::Dfr,
            "prd" => CheckMode::Prd,
            "cis" => CheckMode::Cis,
            other => return Err(Error::Domain(format!("unknown check mode {other:?}"))),
        })
    }
}

/// The first violated inequality in scan order.
///
/// Lattice modes report full index vectors in `indices`, in the frame of the
/// input lattice (reflections already undone), except survival mode, whose
/// indices address the survival array of the reflected lattice.
///
/// * pairs / negative / survival: `pair = [i, j]`, `context` holds the fixed
///   indices of the other axes, `indices = [low-low, high-high, high-low, low-high]`.
/// * full: `indices = [x, y, join, meet]`.
/// * chain: `split = j`, `indices = [x, x', x'^j, x^j]`.
/// * dfr / prd / cis: `coords = [x, x', y]`, the two grid points compared
///   and the fixed second argument.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub context: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub indices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coords: Vec<f64>,
    #[serde(with = "extended_f64")]
    pub lhs: f64,
    #[serde(with = "extended_f64")]
    pub rhs: f64,
}

/// Outcome of one positivity check.
///
/// `min_margin` is the smallest `lhs - rhs` seen (for negative mode,
/// `rhs - lhs`), in value-product units or log units when `log_domain` is set.
/// It is `+inf` when nothing was compared. A quadruple fails when
/// `lhs < rhs - tolerance * max(1, |lhs|, |rhs|)`, so for values in `[0, 1]`
/// the verdict is `fail` exactly when `min_margin < -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub mode: CheckMode,
    #[serde(with = "extended_f64")]
    pub min_margin: f64,
    pub tolerance: f64,
    pub quadruples_checked: u64,
    #[serde(default)]
    pub log_domain: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub skipped: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn is_zero(n: &u64) -> bool {
    *n == 0
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Finite floats as JSON numbers; infinities as the strings `"inf"` / `"-inf"`.
pub(crate) mod extended_f64 {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(D::Error::custom(format!("not a number: {other:?}"))),
            },
        }
    }
}
