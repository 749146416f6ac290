//! Verdict reports shared by the verifiers.

use std::fmt;

use serde::Serialize;

use crate::rational::{format_decimal, format_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Verified,
    /// The conclusion failed although every hypothesis was verified. The
    /// theorems are proved, so this always signals a transcription or
    /// implementation defect.
    Falsified,
    HypothesisUnmet,
    Exhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "VERIFIED",
            Verdict::Falsified => "FALSIFIED",
            Verdict::HypothesisUnmet => "HYPOTHESIS_UNMET",
            Verdict::Exhausted => "EXHAUSTED",
        })
    }
}

/// One named hypothesis and whether it held, with the exact value that
/// decided it where there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    pub holds: bool,
    #[serde(serialize_with = "crate::rational::serde_str::option::serialize")]
    pub value: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl HypothesisCheck {
    pub fn flag(name: impl Into<String>, holds: bool) -> Self {
        Self {
            name: name.into(),
            holds,
            value: None,
            note: None,
        }
    }

    pub fn valued(name: impl Into<String>, holds: bool, value: Rational) -> Self {
        Self {
            name: name.into(),
            holds,
            value: Some(value),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    /// Only the indices listed were checked.
    PrefixOnly,
    /// The checked prefix ends in a value that bounds every later one.
    TailByMonotonicity,
}

/// An exact norm at one index of a checked range. Grid checks use a
/// multi-index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormRecord {
    pub index: Vec<u64>,
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub norm: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConclusionLedger {
    pub claim: String,
    pub range: String,
    pub guarantee: Guarantee,
    pub points_checked: usize,
    #[serde(serialize_with = "crate::rational::serde_str::serialize")]
    pub max_norm: Rational,
    pub first_failure: Option<NormRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<NormRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub statement: String,
    pub hypotheses: Vec<HypothesisCheck>,
    pub conclusion: Option<ConclusionLedger>,
    pub verdict: Verdict,
}

impl Report {
    /// A report that stops at the hypothesis ledger.
    pub fn unmet(statement: impl Into<String>, hypotheses: Vec<HypothesisCheck>) -> Self {
        Self {
            statement: statement.into(),
            hypotheses,
            conclusion: None,
            verdict: Verdict::HypothesisUnmet,
        }
    }

    pub fn failed_hypotheses(&self) -> impl Iterator<Item = &HypothesisCheck> {
        self.hypotheses.iter().filter(|h| !h.holds)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.statement)?;
        writeln!(f, "hypotheses:")?;
        for h in &self.hypotheses {
            let mark = if h.holds { "holds" } else { "FAILS" };
            write!(f, "  [{mark}] {}", h.name)?;
            if let Some(v) = &h.value {
                write!(f, " = {} (~{})", format_rational(v), format_decimal(v))?;
            }
            if let Some(note) = &h.note {
                write!(f, "  ({note})")?;
            }
            writeln!(f)?;
        }
        if let Some(c) = &self.conclusion {
            writeln!(f, "conclusion: {}", c.claim)?;
            writeln!(f, "  range: {} ({} points)", c.range, c.points_checked)?;
            let guarantee = match c.guarantee {
                Guarantee::PrefixOnly => "prefix only",
                Guarantee::TailByMonotonicity => "tail by monotonicity",
            };
            writeln!(f, "  guarantee: {guarantee}")?;
            writeln!(
                f,
                "  largest norm: {} (~{})",
                format_rational(&c.max_norm),
                format_decimal(&c.max_norm)
            )?;
            if let Some(fail) = &c.first_failure {
                writeln!(
                    f,
                    "  first failure at {:?}: {}",
                    fail.index,
                    format_rational(&fail.norm)
                )?;
            }
        }
        write!(f, "verdict: {}", self.verdict)?;
        if self.verdict == Verdict::Falsified {
            write!(
                f,
                " (internal inconsistency: the conclusion failed under verified hypotheses)"
            )?;
        }
        Ok(())
    }
}
