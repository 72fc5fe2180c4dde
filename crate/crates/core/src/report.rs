//! Check reports and the shared enumeration bounds.

use std::fmt;

/// Outcome of one exhaustive check: how many cases ran, how many failed,
/// and the first failing case rendered as text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            cases: 0,
            failures: 0,
            witness: None,
        }
    }

    pub fn pass(&mut self) {
        self.cases += 1;
    }

    pub fn fail(&mut self, witness: impl FnOnce() -> String) {
        self.cases += 1;
        self.failures += 1;
        if self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    /// Records one case, passing iff `ok`.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(witness)
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Folds another report's counts into this one. The first witness wins.
    pub fn absorb(&mut self, other: Report) {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.witness.is_none() {
            self.witness = other.witness;
        }
    }

    /// Short stable identifier for the witness, used in machine output.
    pub fn witness_id(&self) -> Option<String> {
        self.witness.as_ref().map(|w| crate::models::seal::digest_hex(w.as_bytes(), 8))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{}: {} ({} cases, {} failures)", self.name, verdict, self.cases, self.failures)?;
        if let Some(w) = &self.witness {
            write!(f, "\n  witness: {w}")?;
        }
        Ok(())
    }
}

/// Enumeration bounds shared by every checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest context (base object) enumerated.
    pub max_ctx: usize,
    /// Largest fiber of an enumerated type.
    pub max_fiber: usize,
    /// Largest local universe base enumerated.
    pub max_universe: usize,
    /// Largest probe object used when testing universal properties.
    pub max_probe: usize,
    /// Longest Frobenius telescope used by identity-type checks.
    pub telescope_depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_ctx: 3,
            max_fiber: 2,
            max_universe: 3,
            max_probe: 2,
            telescope_depth: 2,
        }
    }
}

impl Bounds {
    pub fn smoke() -> Self {
        Bounds {
            max_ctx: 2,
            max_fiber: 1,
            max_universe: 2,
            max_probe: 1,
            telescope_depth: 1,
        }
    }

    pub fn deep() -> Self {
        Bounds {
            max_ctx: 4,
            max_fiber: 2,
            max_universe: 3,
            max_probe: 3,
            telescope_depth: 2,
        }
    }

    /// Looks up a named profile (`smoke`, `default`, `deep`).
    pub fn profile(name: &str) -> Option<Self> {
        match name {
            "smoke" => Some(Self::smoke()),
            "default" => Some(Self::default()),
            "deep" => Some(Self::deep()),
            _ => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.max_ctx > 0 && self.max_fiber > 0 && self.max_universe > 0 && self.max_probe > 0
    }
}
