//! Finite-model workbench for the duality between algebras of partial
//! functions (composition, antidomain, range, preferential union) and Stone
//! étale categories whose arrows are all epimorphisms.
//!
//! The crate is organised the way the duality is: the concrete semantics
//! ([`pfun`]), abstract algebras and their axioms ([`algebra`], [`axioms`]),
//! prime filters ([`filters`]), finite topological categories ([`topcat`]),
//! the two dualising functors ([`dualize`], [`sections`]), the double-dual
//! isomorphisms ([`duality`]) and rational word functions ([`transducer`]).
//! All constructions are exact on finite instances.

pub mod algebra;
pub mod axioms;
pub mod duality;
pub mod dualize;
pub mod filters;
pub mod pfun;
pub mod samples;
pub mod sections;
pub mod subset;
pub mod topcat;
pub mod transducer;

pub use algebra::{FinAlgebra, Homomorphism, Representable};
pub use subset::Subset;

use std::fmt;

/// Outcome of a single named check: either it holds, or it fails with a
/// human-readable witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness.into()),
        }
    }

    pub fn from_witness(witness: Option<String>) -> Self {
        match witness {
            None => Verdict::pass(),
            Some(w) => Verdict::fail(w),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None if self.holds => write!(f, "pass"),
            None => write!(f, "FAIL"),
            Some(w) => write!(f, "FAIL ({w})"),
        }
    }
}

/// A list of named verdicts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<(String, Verdict)>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, verdict: Verdict) {
        self.checks.push((name.into(), verdict));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, v)| v.holds)
    }

    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.checks.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn failures(&self) -> impl Iterator<Item = &(String, Verdict)> {
        self.checks.iter().filter(|(_, v)| !v.holds)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, verdict) in &self.checks {
            writeln!(f, "{name}: {verdict}")?;
        }
        Ok(())
    }
}
