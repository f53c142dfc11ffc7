//! Check records, verdicts and the report envelope.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Indeterminate,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Indeterminate => "indeterminate",
            Status::Fail => "fail",
        }
    }
}

/// Pass if `margin ≥ −tol`; indeterminate if the shortfall is within
/// `slack`; fail otherwise (including non-finite margins).
pub fn verdict(margin: f64, tol: f64, slack: f64) -> Status {
    if margin >= -tol {
        Status::Pass
    } else if margin >= -(tol + slack) {
        Status::Indeterminate
    } else {
        Status::Fail
    }
}

/// Finite values as JSON numbers, the rest as `"inf"`, `"-inf"`, `"nan"`.
mod real {
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

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("bad number `{other}`"))),
            },
        }
    }
}

/// One checked inequality `lhs ≤ rhs`, with `margin = rhs − lhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub check_id: String,
    pub anchor: String,
    #[serde(with = "real")]
    pub lhs: f64,
    #[serde(with = "real")]
    pub rhs: f64,
    #[serde(with = "real")]
    pub margin: f64,
    #[serde(with = "real")]
    pub tol: f64,
    /// Estimated quadrature or discretisation slack.
    #[serde(with = "real")]
    pub slack: f64,
    pub status: Status,
}

impl Record {
    pub fn new(suite: &str, check_id: String, anchor: &str, lhs: f64, rhs: f64, tol: f64, slack: f64) -> Self {
        debug_assert!(crate::anchors::is_known(anchor), "unknown anchor {anchor}");
        let margin = rhs - lhs;
        Self {
            suite: suite.into(),
            check_id,
            anchor: anchor.into(),
            lhs,
            rhs,
            margin,
            tol,
            slack,
            status: verdict(margin, tol, slack),
        }
    }

    /// `lhs = rhs` up to `tol`; the verdict uses `−|margin|`.
    pub fn equality(suite: &str, check_id: String, anchor: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let mut r = Self::new(suite, check_id, anchor, lhs, rhs, tol, 0.0);
        r.status = verdict(-r.margin.abs(), tol, 0.0);
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub precision: String,
    pub seed: u64,
    pub rng: String,
    pub version: String,
    pub threads: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub indeterminate: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let count = |s| records.iter().filter(|r| r.status == s).count();
        Self {
            total: records.len(),
            pass: count(Status::Pass),
            fail: count(Status::Fail),
            indeterminate: count(Status::Indeterminate),
        }
    }

    pub fn exit_code(&self) -> i32 {
        use crate::error::exit;
        if self.fail > 0 {
            exit::FAIL
        } else if self.indeterminate > 0 {
            exit::INDETERMINATE
        } else {
            exit::PASS
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub environment: Environment,
    pub records: Vec<Record>,
    pub summary: Summary,
}
