use serde::Serialize;

use crate::monoid::Exponent;
use crate::ring::Elem;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    /// Bounded search found no violation; the property is not certified.
    UnknownAtBound,
}

/// Data that makes a negative verdict recheckable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Elements(Vec<Elem>),
    Exponents(Vec<Exponent>),
    /// `fg = 0` while `f(s) * omega_s(g(t)) != 0`.
    SeriesPair {
        f: Vec<(Exponent, Elem)>,
        g: Vec<(Exponent, Elem)>,
        s: Exponent,
        t: Exponent,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCertificate {
    pub property: String,
    pub verdict: Verdict,
    pub exponent: Option<usize>,
    pub idempotent: Option<Elem>,
    pub witness: Option<Witness>,
    pub notes: String,
}

impl PropertyCertificate {
    pub fn yes(property: impl Into<String>, notes: impl Into<String>) -> Self {
        PropertyCertificate {
            property: property.into(),
            verdict: Verdict::Yes,
            exponent: None,
            idempotent: None,
            witness: None,
            notes: notes.into(),
        }
    }

    pub fn no(property: impl Into<String>, witness: Witness, notes: impl Into<String>) -> Self {
        PropertyCertificate {
            property: property.into(),
            verdict: Verdict::No,
            exponent: None,
            idempotent: None,
            witness: Some(witness),
            notes: notes.into(),
        }
    }

    pub fn unknown(property: impl Into<String>, notes: impl Into<String>) -> Self {
        PropertyCertificate {
            property: property.into(),
            verdict: Verdict::UnknownAtBound,
            exponent: None,
            idempotent: None,
            witness: None,
            notes: notes.into(),
        }
    }

    /// No counterexample is known: either certified or inconclusive at the bound.
    pub fn not_refuted(&self) -> bool {
        self.verdict != Verdict::No
    }
}
