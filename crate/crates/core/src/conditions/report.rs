use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Outcome of a condition check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Serialize non-finite reals as the strings `"inf"`, `"-inf"`, `"nan"`.
pub mod real {
    use super::*;

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
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a real: {other}"))),
            },
        }
    }
}

/// The parameter at which a supremum is attained or approached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub parameter: String,
    #[serde(with = "real")]
    pub value: f64,
}

impl Witness {
    pub fn new(parameter: impl Into<String>, value: f64) -> Self {
        Witness {
            parameter: parameter.into(),
            value,
        }
    }
}

/// Numerical settings behind a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(with = "real")]
    pub relative: f64,
    #[serde(with = "real")]
    pub absolute: f64,
    /// Threshold separating a finite value from a failing one, if any.
    #[serde(with = "real")]
    pub cap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            relative: 1e-10,
            absolute: 1e-14,
            cap: f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: String,
    pub verdict: Verdict,
    #[serde(with = "real")]
    pub value: f64,
    pub witness: Option<Witness>,
    pub equation_tag: String,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl ConditionReport {
    pub fn new(condition: impl Into<String>, equation_tag: impl Into<String>, verdict: Verdict, value: f64) -> Self {
        ConditionReport {
            condition: condition.into(),
            verdict,
            value,
            witness: None,
            equation_tag: equation_tag.into(),
            tolerances: Tolerances::default(),
            diagnostics: Vec::new(),
        }
    }

    pub fn with_witness(mut self, parameter: impl Into<String>, value: f64) -> Self {
        self.witness = Some(Witness::new(parameter, value));
        self
    }

    pub fn with_tolerances(mut self, t: Tolerances) -> Self {
        self.tolerances = t;
        self
    }

    pub fn note(mut self, msg: impl Into<String>) -> Self {
        self.diagnostics.push(msg.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == Verdict::Fails
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_values_round_trip() {
        let r = ConditionReport::new("heinig", "rearrangement-sup", Verdict::Fails, f64::INFINITY)
            .with_witness("s", 0.5);
        let s = r.to_json();
        assert!(s.contains("\"value\": \"inf\""), "{s}");
        assert!(s.contains("\"verdict\": \"fails\""));
        let back: ConditionReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
