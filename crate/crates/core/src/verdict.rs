//! Three-valued verdicts, trust windows and the reports that carry them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }

    /// Conjunction: any failure fails, otherwise any doubt is inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fails, _) | (_, Fails) => Fails,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Holds,
        }
    }

    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
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

/// A degree interval; `None` ends are unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrustWindow {
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl TrustWindow {
    pub const ALL: TrustWindow = TrustWindow { lo: None, hi: None };

    pub fn new(lo: i64, hi: i64) -> Self {
        TrustWindow { lo: Some(lo), hi: Some(hi) }
    }

    pub fn at_least(lo: i64) -> Self {
        TrustWindow { lo: Some(lo), hi: None }
    }

    pub fn at_most(hi: i64) -> Self {
        TrustWindow { lo: None, hi: Some(hi) }
    }

    pub fn intersect(&self, other: &TrustWindow) -> TrustWindow {
        let lo = match (self.lo, other.lo) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        TrustWindow { lo, hi }
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo.map_or(true, |l| l <= n) && self.hi.map_or(true, |h| n <= h)
    }

    pub fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }

    /// Degrees of the window inside `[lo, hi]`.
    pub fn clamp(&self, lo: i64, hi: i64) -> std::ops::RangeInclusive<i64> {
        let l = self.lo.map_or(lo, |w| w.max(lo));
        let h = self.hi.map_or(hi, |w| w.min(hi));
        l..=h
    }
}

impl fmt::Display for TrustWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) => write!(f, "[{l}, {h}]"),
            (Some(l), None) => write!(f, "[{l}, +inf)"),
            (None, Some(h)) => write!(f, "(-inf, {h}]"),
            (None, None) => write!(f, "(-inf, +inf)"),
        }
    }
}

/// Outcome of a check, with the window it speaks about and its evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub check: String,
    pub verdict: Verdict,
    pub window: TrustWindow,
    /// Why the verdict is not `holds`, or what was found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Named degree tables, e.g. homology dimensions.
    #[serde(default)]
    pub witnesses: BTreeMap<String, BTreeMap<i64, i64>>,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    /// Sub-reports this verdict was assembled from.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<VerdictReport>,
}

impl VerdictReport {
    pub fn new(check: impl Into<String>, verdict: Verdict, window: TrustWindow) -> Self {
        VerdictReport {
            check: check.into(),
            verdict,
            window,
            reason: None,
            witnesses: BTreeMap::new(),
            parameters: BTreeMap::new(),
            parts: Vec::new(),
        }
    }

    pub fn holds(check: impl Into<String>) -> Self {
        Self::new(check, Verdict::Holds, TrustWindow::ALL)
    }

    pub fn fails(check: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::new(check, Verdict::Fails, TrustWindow::ALL).with_reason(reason)
    }

    pub fn inconclusive(check: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::new(check, Verdict::Inconclusive, TrustWindow::ALL).with_reason(reason)
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn with_window(mut self, window: TrustWindow) -> Self {
        self.window = window;
        self
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn with_table(mut self, name: impl Into<String>, table: BTreeMap<i64, i64>) -> Self {
        self.witnesses.insert(name.into(), table);
        self
    }

    pub fn with_part(mut self, part: VerdictReport) -> Self {
        self.parts.push(part);
        self
    }

    pub fn is_holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Result of comparing two modules up to shift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum ShiftClassVerdict {
    /// The second module is quasi-isomorphic to the `n`-fold shift of the first.
    Equivalent { shift: i64, evidence: String },
    Distinct { invariant: String, evidence: String },
    Inconclusive { reason: String },
}

impl ShiftClassVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, ShiftClassVerdict::Equivalent { .. })
    }
    pub fn is_distinct(&self) -> bool {
        matches!(self, ShiftClassVerdict::Distinct { .. })
    }
}
