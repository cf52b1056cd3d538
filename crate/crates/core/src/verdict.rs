//! Structured outcomes of checks, each failure carrying explicit witnesses.

use std::fmt;

use crate::free::{FreeElement, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Pass,
    Fail,
    /// Nothing refuted, but a bound or a missing hypothesis stopped the check.
    Undetermined,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Undetermined => "undetermined-at-bound",
        }
    }

    /// Fail dominates undetermined, which dominates pass.
    pub fn and(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            _ => Pass,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An explicit element (or matrix) backing a claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub kind: String,
    pub level: Option<u32>,
    pub index: Option<i64>,
    /// Components of the witnessing vector, or rows of a witnessing matrix.
    pub element: Vec<String>,
    pub note: String,
}

impl Witness {
    pub fn new(kind: impl Into<String>) -> Witness {
        Witness {
            kind: kind.into(),
            level: None,
            index: None,
            element: Vec::new(),
            note: String::new(),
        }
    }

    pub fn at_level(mut self, k: u32) -> Witness {
        self.level = Some(k);
        self
    }

    pub fn at_index(mut self, i: i64) -> Witness {
        self.index = Some(i);
        self
    }

    pub fn with_element(mut self, v: &FreeElement) -> Witness {
        self.element = v.comps().iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn with_matrix(mut self, m: &Matrix) -> Witness {
        self.element = m.to_strings().into_iter().map(|row| format!("[{}]", row.join(", "))).collect();
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Witness {
        self.note = note.into();
        self
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(k) = self.level {
            write!(f, " level {k}")?;
        }
        if let Some(i) = self.index {
            write!(f, " index {i}")?;
        }
        if !self.element.is_empty() {
            write!(f, " [{}]", self.element.join(", "))?;
        }
        if !self.note.is_empty() {
            write!(f, ": {}", self.note)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub check: String,
    pub outcome: Outcome,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn pass(check: impl Into<String>) -> Verdict {
        Verdict {
            check: check.into(),
            outcome: Outcome::Pass,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn fail(check: impl Into<String>, witness: Witness) -> Verdict {
        Verdict {
            check: check.into(),
            outcome: Outcome::Fail,
            witnesses: vec![witness],
            notes: Vec::new(),
        }
    }

    pub fn undetermined(check: impl Into<String>, reason: impl Into<String>) -> Verdict {
        Verdict {
            check: check.into(),
            outcome: Outcome::Undetermined,
            witnesses: Vec::new(),
            notes: vec![reason.into()],
        }
    }

    pub fn note(mut self, n: impl Into<String>) -> Verdict {
        self.notes.push(n.into());
        self
    }

    pub fn is_pass(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.outcome == Outcome::Fail
    }

    /// Joint verdict: witnesses and notes of the parts are concatenated.
    pub fn combine(check: impl Into<String>, parts: &[Verdict]) -> Verdict {
        let mut v = Verdict::pass(check);
        for p in parts {
            v.outcome = v.outcome.and(p.outcome);
            v.witnesses.extend(p.witnesses.iter().cloned());
            v.notes.extend(p.notes.iter().map(|n| format!("{}: {n}", p.check)));
        }
        v
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.outcome)?;
        for w in &self.witnesses {
            write!(f, "\n  witness {w}")?;
        }
        for n in &self.notes {
            write!(f, "\n  note {n}")?;
        }
        Ok(())
    }
}
