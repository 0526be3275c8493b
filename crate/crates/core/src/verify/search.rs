use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::certificate::Verdict;
use crate::error::{Error, Result};
use crate::monoid::OrderedMonoid;
use crate::properties::{decide_baer, decide_generalized, decide_quasi_baer, ClassKind};
use crate::ring::{enumerate_endomorphisms, Caps, FiniteRing, Side};
use crate::sgps::{armendariz_search, SearchMode, SkewContext};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchProperty {
    /// Separations between the annihilator classes.
    Classes,
    /// Right versus left generalized quasi-Baer.
    Asymmetry,
    /// Non-Armendariz pairs at the box `{0,1}` for every endomorphism.
    Armendariz,
}

impl SearchProperty {
    pub const ALL: [SearchProperty; 3] = [
        SearchProperty::Classes,
        SearchProperty::Asymmetry,
        SearchProperty::Armendariz,
    ];

    pub fn parse(name: &str) -> Result<SearchProperty> {
        match name {
            "classes" => Ok(SearchProperty::Classes),
            "asymmetry" => Ok(SearchProperty::Asymmetry),
            "armendariz" => Ok(SearchProperty::Armendariz),
            other => Err(Error::Spec(format!(
                "unknown search property `{other}`; expected classes, asymmetry or armendariz"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub ring: String,
    pub finding: String,
    pub detail: Value,
}

impl Finding {
    pub fn record(&self) -> Value {
        json!({
            "record": "finding",
            "ring": self.ring,
            "finding": self.finding,
            "detail": self.detail,
        })
    }
}

/// Findings gathered before any error; the error, if one stopped the scan.
#[derive(Debug)]
pub struct SearchOutcome {
    pub findings: Vec<Finding>,
    pub error: Option<Error>,
}

/// Scans the catalog for class separations and Armendariz failures. Reports
/// what it finds; asserts nothing.
pub fn counterexample_search(
    rings: &[FiniteRing],
    properties: &[SearchProperty],
    caps: &Caps,
    budget: u128,
) -> SearchOutcome {
    let mut findings = Vec::new();
    for ring in rings {
        if let Err(e) = scan_ring(ring, properties, caps, budget, &mut findings) {
            return SearchOutcome {
                findings,
                error: Some(e),
            };
        }
    }
    SearchOutcome {
        findings,
        error: None,
    }
}

fn scan_ring(
    ring: &FiniteRing,
    properties: &[SearchProperty],
    caps: &Caps,
    budget: u128,
    out: &mut Vec<Finding>,
) -> Result<()> {
    let label = ring.label().to_string();
    let mut push = |finding: &str, detail: Value| {
        out.push(Finding {
            ring: label.clone(),
            finding: finding.to_string(),
            detail,
        })
    };
    if properties.contains(&SearchProperty::Classes) {
        let baer = decide_baer(ring, Side::Right, caps)?;
        let quasi = decide_quasi_baer(ring, Side::Right, caps)?;
        let gen_baer = decide_generalized(ring, ClassKind::Baer, Side::Right, caps)?;
        let gen_quasi = decide_generalized(ring, ClassKind::QuasiBaer, Side::Right, caps)?;
        let baer_witness = baer.failing_instance.as_ref().map(|f| &f.instance);
        if gen_baer.verdict && !baer.verdict {
            push(
                "generalized Baer but not Baer",
                json!({ "baer_witness": baer_witness }),
            );
        }
        if quasi.verdict && !baer.verdict {
            push(
                "quasi-Baer but not Baer",
                json!({ "baer_witness": baer_witness }),
            );
        }
        if gen_quasi.verdict && !gen_baer.verdict {
            push(
                "generalized quasi-Baer but not generalized Baer",
                json!({ "gen_baer_witness": gen_baer.failing_instance }),
            );
        }
    }
    if properties.contains(&SearchProperty::Asymmetry) {
        let right = decide_generalized(ring, ClassKind::QuasiBaer, Side::Right, caps)?;
        let left = decide_generalized(ring, ClassKind::QuasiBaer, Side::Left, caps)?;
        if right.verdict != left.verdict {
            push(
                "generalized quasi-Baer on one side only",
                json!({
                    "right": right.verdict,
                    "left": left.verdict,
                    "right_witness": right.failing_instance,
                    "left_witness": left.failing_instance,
                }),
            );
        }
    }
    if properties.contains(&SearchProperty::Armendariz) {
        let arc = Arc::new(ring.clone());
        let mut failing = Vec::new();
        for (idx, sigma) in enumerate_endomorphisms(ring, caps)?.into_iter().enumerate() {
            let image = sigma.image();
            let ctx = SkewContext::with_sigma(Arc::clone(&arc), OrderedMonoid::nat(), sigma)?;
            let cert = armendariz_search(&ctx, &ctx.monoid().exponent_box(2), SearchMode::Exhaustive, budget)?;
            if cert.verdict == Verdict::No {
                failing.push(json!({
                    "sigma": idx,
                    "sigma_image": image,
                    "witness": cert.witness,
                    "notes": cert.notes,
                }));
            }
        }
        if !failing.is_empty() {
            push("not Armendariz at box {0,1}", json!({ "endomorphisms": failing }));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{builtin, zn};

    #[test]
    fn z4_separates_baer_from_generalized_baer() {
        let out = counterexample_search(&[zn(4).unwrap()], &[SearchProperty::Classes], &Caps::default(), 1 << 20);
        assert!(out.error.is_none());
        assert!(out
            .findings
            .iter()
            .any(|f| f.finding == "generalized Baer but not Baer"));
    }

    #[test]
    fn matrix_ring_is_not_armendariz() {
        let r = builtin("mat2:z2", &Caps::default()).unwrap();
        let out = counterexample_search(&[r], &[SearchProperty::Armendariz], &Caps::default(), 1 << 20);
        assert_eq!(out.findings.len(), 1);
        assert_eq!(out.findings[0].finding, "not Armendariz at box {0,1}");
    }

    #[test]
    fn empty_catalog_finds_nothing() {
        let out = counterexample_search(&[], &SearchProperty::ALL, &Caps::default(), 1 << 20);
        assert!(out.findings.is_empty() && out.error.is_none());
    }

    #[test]
    fn budget_exhaustion_keeps_partial_findings() {
        let rings = [zn(4).unwrap(), builtin("mat2:z2", &Caps::default()).unwrap()];
        let out = counterexample_search(&rings, &SearchProperty::ALL, &Caps::default(), 300);
        assert!(matches!(out.error, Some(Error::BudgetExceeded { .. })));
        assert!(!out.findings.is_empty());
    }
}
