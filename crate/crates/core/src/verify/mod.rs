//! Bounded verification of the transfer results between a finite ring `R`
//! and its series ring `A = R[[S, omega]]`.
//!
//! `A` is infinite, so no report decides a property of `A` outright. Every
//! check goes through the bridging equalities between `R` and series slices
//! supported in a finite exponent box, and every report carries a scope note
//! saying so.

// Ord and Hash on SkewSeries read only the term map; the shared context is
// never part of a key.
#![allow(clippy::mutable_key_type)]

mod lifts;
mod search;
mod theorems;

use serde::Serialize;
use serde_json::{json, Value};

use crate::certificate::PropertyCertificate;
use crate::monoid::Exponent;
use crate::ring::Caps;

pub use lifts::{
    bounded_annihilator_in_a, coefficient_ideal_lift, ideal_lift_spanning_set, lift_ideal_to_series,
    lift_subset_to_series, series_power_set, CoefficientIdealLift,
};
pub use search::{counterexample_search, Finding, SearchOutcome, SearchProperty};
pub use theorems::{verify_corollaries, verify_prop34, verify_prop35, verify_prop36, verify_thm37};

/// Default limit on exhaustive enumeration sizes.
pub const DEFAULT_BUDGET: u128 = 1 << 26;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StatementId {
    #[serde(rename = "prop34")]
    Prop34,
    #[serde(rename = "prop35_1")]
    Prop35Baer,
    #[serde(rename = "prop35_2")]
    Prop35QuasiBaer,
    #[serde(rename = "prop36_1")]
    Prop36Baer,
    #[serde(rename = "prop36_2")]
    Prop36QuasiBaer,
    #[serde(rename = "thm37_baer")]
    Thm37Baer,
    #[serde(rename = "thm37_quasibaer")]
    Thm37QuasiBaer,
    #[serde(rename = "cor38")]
    Cor38,
    #[serde(rename = "cor39")]
    Cor39,
    #[serde(rename = "cor310")]
    Cor310,
    #[serde(rename = "cor311")]
    Cor311,
    #[serde(rename = "cor312")]
    Cor312,
}

impl StatementId {
    pub fn id(self) -> &'static str {
        match self {
            StatementId::Prop34 => "prop34",
            StatementId::Prop35Baer => "prop35_1",
            StatementId::Prop35QuasiBaer => "prop35_2",
            StatementId::Prop36Baer => "prop36_1",
            StatementId::Prop36QuasiBaer => "prop36_2",
            StatementId::Thm37Baer => "thm37_baer",
            StatementId::Thm37QuasiBaer => "thm37_quasibaer",
            StatementId::Cor38 => "cor38",
            StatementId::Cor39 => "cor39",
            StatementId::Cor310 => "cor310",
            StatementId::Cor311 => "cor311",
            StatementId::Cor312 => "cor312",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// Some hypothesis was refuted; no conclusion was tested.
    HypothesisNotMet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub hypothesis: String,
    pub certificate: PropertyCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceCheck {
    pub instance: String,
    pub pass: bool,
    pub witness: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub statement_id: StatementId,
    pub ring: String,
    pub context: String,
    pub outcome: Outcome,
    pub hypotheses_checked: Vec<HypothesisCheck>,
    pub conclusion_checked: Vec<InstanceCheck>,
    pub scope_note: String,
}

/// Parameters shared by the harnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub support_box: Vec<Exponent>,
    pub budget: u128,
    pub seed: u64,
    /// Sampled series sets per sampled check.
    pub samples: usize,
    pub caps: Caps,
}

impl VerifyConfig {
    pub fn new(support_box: Vec<Exponent>) -> VerifyConfig {
        VerifyConfig {
            support_box,
            budget: DEFAULT_BUDGET,
            seed: 0,
            samples: 20,
            caps: Caps::default(),
        }
    }
}

impl TheoremReport {
    pub(crate) fn new(
        statement_id: StatementId,
        ring: &str,
        context: String,
        hypotheses_checked: Vec<HypothesisCheck>,
        conclusion_checked: Vec<InstanceCheck>,
        scope_note: String,
    ) -> TheoremReport {
        let outcome = if hypotheses_checked.iter().any(|h| !h.certificate.not_refuted()) {
            Outcome::HypothesisNotMet
        } else if conclusion_checked.iter().all(|c| c.pass) {
            Outcome::Pass
        } else {
            Outcome::Fail
        };
        TheoremReport {
            statement_id,
            ring: ring.to_string(),
            context,
            outcome,
            hypotheses_checked,
            conclusion_checked,
            scope_note,
        }
    }

    /// The first refuted hypothesis, if any.
    pub fn failing_hypothesis(&self) -> Option<&HypothesisCheck> {
        self.hypotheses_checked
            .iter()
            .find(|h| !h.certificate.not_refuted())
    }

    /// Hypothesis records, one record per checked instance, then the report record.
    pub fn records(&self) -> Vec<Value> {
        let id = self.statement_id;
        let mut out: Vec<Value> = self
            .hypotheses_checked
            .iter()
            .map(|h| {
                json!({
                    "record": "hypothesis",
                    "statement_id": id,
                    "ring": self.ring,
                    "hypothesis": h.hypothesis,
                    "verdict": h.certificate.verdict,
                    "witness": h.certificate.witness,
                    "notes": h.certificate.notes,
                })
            })
            .collect();
        out.extend(self.conclusion_checked.iter().map(|c| {
            json!({
                "record": "theorem_instance",
                "statement_id": id,
                "ring": self.ring,
                "instance": c.instance,
                "verdict": if c.pass { "pass" } else { "fail" },
                "witness": c.witness,
                "detail": c.detail,
                "scope_note": self.scope_note,
            })
        }));
        out.push(json!({
            "record": "theorem_report",
            "statement_id": id,
            "ring": self.ring,
            "context": self.context,
            "outcome": self.outcome,
            "hypotheses": self.hypotheses_checked.len(),
            "instances": self.conclusion_checked.len(),
            "scope_note": self.scope_note,
        }));
        out
    }
}
