//! Deciders for the annihilator classes of a finite ring.
//!
//! Instance order is fixed: nonempty subsets by ascending bitmask, ideals by
//! size then members. Decisions run instance-parallel and merge in that order,
//! so the first failing instance is the same for any worker count.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{Caps, Elem, FiniteRing, RingSubset, Side};

/// Which sets are quantified over: all nonempty subsets, or one-sided ideals.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Baer,
    QuasiBaer,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassName {
    Baer,
    QuasiBaer,
    GenBaerRight,
    GenBaerLeft,
    GenQuasiBaerRight,
    GenQuasiBaerLeft,
}

impl ClassName {
    pub fn name(self) -> &'static str {
        match self {
            ClassName::Baer => "baer",
            ClassName::QuasiBaer => "quasi_baer",
            ClassName::GenBaerRight => "gen_baer_right",
            ClassName::GenBaerLeft => "gen_baer_left",
            ClassName::GenQuasiBaerRight => "gen_quasi_baer_right",
            ClassName::GenQuasiBaerLeft => "gen_quasi_baer_left",
        }
    }

    pub fn is_generalized(self) -> bool {
        !matches!(self, ClassName::Baer | ClassName::QuasiBaer)
    }

    pub fn generalized(kind: ClassKind, side: Side) -> ClassName {
        match (kind, side) {
            (ClassKind::Baer, Side::Right) => ClassName::GenBaerRight,
            (ClassKind::Baer, Side::Left) => ClassName::GenBaerLeft,
            (ClassKind::QuasiBaer, Side::Right) => ClassName::GenQuasiBaerRight,
            (ClassKind::QuasiBaer, Side::Left) => ClassName::GenQuasiBaerLeft,
        }
    }
}

/// An accepted instance: the annihilator of `instance^exponent` is `eR`
/// (right side) or `Re` (left side).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceCertificate {
    pub instance: RingSubset,
    pub exponent: usize,
    pub idempotent: Elem,
    pub annihilator: RingSubset,
}

/// A rejected instance: the annihilator chain is constant from
/// `stabilized_at` on and its value has no idempotent generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailingInstance {
    pub instance: RingSubset,
    pub stabilized_at: usize,
    pub annihilator: RingSubset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub ring: String,
    pub class: ClassName,
    pub side: Side,
    pub verdict: bool,
    /// Instances examined, up to and including the first failure.
    pub instances_checked: usize,
    /// Accepted instances in iteration order.
    pub per_instance: Vec<InstanceCertificate>,
    pub failing_instance: Option<FailingInstance>,
}

enum Chain {
    Accepted(InstanceCertificate),
    Rejected(FailingInstance),
}

fn annihilator_of_power_chain(
    ring: &FiniteRing,
    x: &RingSubset,
    side: Side,
    max_n: Option<usize>,
) -> Result<Chain> {
    let mut power = x.clone();
    let mut ann = ring.annihilator_unchecked(&power, side);
    let mut n = 1;
    loop {
        if let Some(e) = ring.idempotent_generator_of(&ann, side) {
            return Ok(Chain::Accepted(InstanceCertificate {
                instance: x.clone(),
                exponent: n,
                idempotent: e,
                annihilator: ann,
            }));
        }
        if max_n == Some(n) {
            return Ok(Chain::Rejected(FailingInstance {
                instance: x.clone(),
                stabilized_at: n,
                annihilator: ann,
            }));
        }
        // X^(n+1) = X^n X = X X^n, and the next annihilator is a function of
        // the current one, so one repeat means the chain is constant.
        power = ring.product_set(&power, x);
        let next = ring.annihilator_unchecked(&power, side);
        if !ann.is_subset(&next) {
            return Err(Error::InvariantViolation(format!(
                "annihilator chain of {x} is not ascending at n = {n}"
            )));
        }
        if next == ann {
            return Ok(Chain::Rejected(FailingInstance {
                instance: x.clone(),
                stabilized_at: n,
                annihilator: ann,
            }));
        }
        ann = next;
        n += 1;
    }
}

/// The generalized decision for one instance: `Ok` with the first accepting
/// exponent, or `Err` with the stabilized annihilator.
pub fn generalized_instance(
    ring: &FiniteRing,
    x: &RingSubset,
    side: Side,
) -> Result<std::result::Result<InstanceCertificate, FailingInstance>> {
    if x.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(match annihilator_of_power_chain(ring, x, side, None)? {
        Chain::Accepted(c) => Ok(c),
        Chain::Rejected(f) => Err(f),
    })
}

fn all_nonempty_subsets(ring: &FiniteRing, caps: &Caps) -> Result<Vec<RingSubset>> {
    let order = ring.order();
    Caps::check(caps.subsets.min(63), order, "subset enumeration")?;
    Ok((1..1u64 << order)
        .map(|m| RingSubset::from_mask(order, m))
        .collect())
}

fn instances(ring: &FiniteRing, kind: ClassKind, side: Side, caps: &Caps) -> Result<Vec<RingSubset>> {
    match kind {
        ClassKind::Baer => all_nonempty_subsets(ring, caps),
        ClassKind::QuasiBaer => ring.enumerate_ideals(side.into(), caps),
    }
}

fn merge(
    ring: &FiniteRing,
    class: ClassName,
    side: Side,
    outcomes: Vec<Result<Chain>>,
) -> Result<ClassVerdict> {
    let mut verdict = ClassVerdict {
        ring: ring.label().to_string(),
        class,
        side,
        verdict: true,
        instances_checked: 0,
        per_instance: Vec::new(),
        failing_instance: None,
    };
    for outcome in outcomes {
        verdict.instances_checked += 1;
        match outcome? {
            Chain::Accepted(c) => verdict.per_instance.push(c),
            Chain::Rejected(f) => {
                verdict.verdict = false;
                verdict.failing_instance = Some(f);
                break;
            }
        }
    }
    Ok(verdict)
}

fn decide(
    ring: &FiniteRing,
    kind: ClassKind,
    side: Side,
    max_n: Option<usize>,
    class: ClassName,
    caps: &Caps,
) -> Result<ClassVerdict> {
    let outcomes: Vec<Result<Chain>> = instances(ring, kind, side, caps)?
        .par_iter()
        .map(|x| annihilator_of_power_chain(ring, x, side, max_n))
        .collect();
    merge(ring, class, side, outcomes)
}

/// Baer on the requested side. Both sides are decided; they must agree.
pub fn decide_baer(ring: &FiniteRing, side: Side, caps: &Caps) -> Result<ClassVerdict> {
    let right = decide(ring, ClassKind::Baer, Side::Right, Some(1), ClassName::Baer, caps)?;
    let left = decide(ring, ClassKind::Baer, Side::Left, Some(1), ClassName::Baer, caps)?;
    if right.verdict != left.verdict {
        return Err(Error::InvariantViolation(format!(
            "{}: right Baer = {} but left Baer = {}",
            ring.label(),
            right.verdict,
            left.verdict
        )));
    }
    Ok(if side == Side::Right { right } else { left })
}

/// Quasi-Baer on the requested side, quantifying over one-sided ideals of
/// that side. Both sides are decided; they must agree.
pub fn decide_quasi_baer(ring: &FiniteRing, side: Side, caps: &Caps) -> Result<ClassVerdict> {
    let right = decide(ring, ClassKind::QuasiBaer, Side::Right, Some(1), ClassName::QuasiBaer, caps)?;
    let left = decide(ring, ClassKind::QuasiBaer, Side::Left, Some(1), ClassName::QuasiBaer, caps)?;
    if right.verdict != left.verdict {
        return Err(Error::InvariantViolation(format!(
            "{}: right quasi-Baer = {} but left quasi-Baer = {}",
            ring.label(),
            right.verdict,
            left.verdict
        )));
    }
    Ok(if side == Side::Right { right } else { left })
}

/// Each instance is accepted at the first `n` whose annihilator of `X^n`
/// is idempotent-generated; sides are independent.
pub fn decide_generalized(
    ring: &FiniteRing,
    kind: ClassKind,
    side: Side,
    caps: &Caps,
) -> Result<ClassVerdict> {
    decide(ring, kind, side, None, ClassName::generalized(kind, side), caps)
}

/// Brute-force reference for [`decide_generalized`]. Instances come from
/// filtering every subset; every power is rebuilt from `X` for each `n` up
/// to `|R|`, and every idempotent is tried.
pub fn oracle_decide_generalized(
    ring: &FiniteRing,
    kind: ClassKind,
    side: Side,
    caps: &Caps,
) -> Result<ClassVerdict> {
    let order = ring.order();
    let elems: Vec<Elem> = ring.elements().collect();
    let mut insts = all_nonempty_subsets(ring, caps)?;
    if kind == ClassKind::QuasiBaer {
        insts.retain(|s| literal_is_ideal(ring, s, side));
        insts.sort();
    }
    let mul = |a: Elem, b: Elem| match side {
        Side::Right => ring.mul(a, b),
        Side::Left => ring.mul(b, a),
    };
    let outcomes: Vec<Result<Chain>> = insts
        .par_iter()
        .map(|x| {
            let mut anns = Vec::with_capacity(order);
            for n in 1..=order {
                let mut power = x.clone();
                for _ in 1..n {
                    let mut next = RingSubset::empty(order);
                    for p in power.iter() {
                        for q in x.iter() {
                            next.insert(ring.mul(p, q));
                        }
                    }
                    power = next;
                }
                let ann = RingSubset::from_elems(
                    order,
                    elems
                        .iter()
                        .copied()
                        .filter(|&a| power.iter().all(|p| ring.is_zero(mul(p, a)))),
                );
                for &e in &elems {
                    if ring.mul(e, e) != e {
                        continue;
                    }
                    let generated = RingSubset::from_elems(order, elems.iter().map(|&r| mul(e, r)));
                    if generated == ann {
                        return Ok(Chain::Accepted(InstanceCertificate {
                            instance: x.clone(),
                            exponent: n,
                            idempotent: e,
                            annihilator: ann,
                        }));
                    }
                }
                anns.push(ann);
            }
            let last = anns.last().cloned().unwrap_or_else(|| RingSubset::empty(order));
            let stabilized_at = anns.iter().position(|a| *a == last).unwrap_or(0) + 1;
            Ok(Chain::Rejected(FailingInstance {
                instance: x.clone(),
                stabilized_at,
                annihilator: last,
            }))
        })
        .collect();
    merge(ring, ClassName::generalized(kind, side), side, outcomes)
}

fn literal_is_ideal(ring: &FiniteRing, s: &RingSubset, side: Side) -> bool {
    s.contains(ring.zero())
        && s.iter().all(|a| {
            s.contains(ring.neg(a))
                && s.iter().all(|b| s.contains(ring.add(a, b)))
                && ring.elements().all(|r| {
                    s.contains(match side {
                        Side::Right => ring.mul(a, r),
                        Side::Left => ring.mul(r, a),
                    })
                })
        })
}

impl ClassVerdict {
    /// Rechecks every certificate from scratch with the ring primitives.
    pub fn recheck(&self, ring: &FiniteRing) -> Result<()> {
        let side = self.side;
        let fail = |what: String| Err(Error::InvariantViolation(format!("{}: {what}", self.class.name())));
        for c in &self.per_instance {
            let ann = ring.annihilator(&ring.subset_power(&c.instance, c.exponent)?, side)?;
            let e = c.idempotent;
            if ring.mul(e, e) != e || ann != ring.principal(e, side) || ann != c.annihilator {
                return fail(format!("instance {} does not recheck", c.instance));
            }
        }
        if let Some(f) = &self.failing_instance {
            let max_n = if self.class.is_generalized() { ring.order() } else { 1 };
            for n in 1..=max_n {
                let ann = ring.annihilator(&ring.subset_power(&f.instance, n)?, side)?;
                if n >= f.stabilized_at && ann != f.annihilator {
                    return fail(format!("chain of {} moves after stabilization", f.instance));
                }
                if ring.idempotent_generator_of(&ann, side).is_some() {
                    return fail(format!("failing instance {} accepts at n = {n}", f.instance));
                }
            }
        }
        if self.verdict != self.failing_instance.is_none() {
            return fail("verdict disagrees with the failing instance".into());
        }
        Ok(())
    }

    /// One record per examined instance, then a verdict record.
    pub fn records(&self) -> Vec<Value> {
        let mut out: Vec<Value> = self
            .per_instance
            .iter()
            .map(|c| {
                json!({
                    "record": "instance",
                    "ring": self.ring,
                    "class": self.class,
                    "side": self.side,
                    "instance": c.instance,
                    "accepted": true,
                    "exponent": c.exponent,
                    "idempotent": c.idempotent,
                    "annihilator": c.annihilator,
                })
            })
            .collect();
        if let Some(f) = &self.failing_instance {
            out.push(json!({
                "record": "instance",
                "ring": self.ring,
                "class": self.class,
                "side": self.side,
                "instance": f.instance,
                "accepted": false,
                "stabilized_at": f.stabilized_at,
                "annihilator": f.annihilator,
            }));
        }
        out.push(json!({
            "record": "class_verdict",
            "ring": self.ring,
            "class": self.class,
            "side": self.side,
            "verdict": if self.verdict { "yes" } else { "no" },
            "instances_checked": self.instances_checked,
            "witness": self.failing_instance.as_ref().map(|f| &f.instance),
        }));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{builtin, catalog, zn};

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn z4_is_not_baer_with_witness_two() {
        let r = zn(4).unwrap();
        for side in [Side::Right, Side::Left] {
            let v = decide_baer(&r, side, &caps()).unwrap();
            assert!(!v.verdict);
            let f = v.failing_instance.as_ref().unwrap();
            assert_eq!(f.instance.members(), vec![2]);
            assert_eq!(f.annihilator.members(), vec![0, 2]);
            v.recheck(&r).unwrap();
        }
    }

    #[test]
    fn z6_is_baer_and_quasi_baer() {
        let r = zn(6).unwrap();
        assert!(decide_baer(&r, Side::Right, &caps()).unwrap().verdict);
        let q = decide_quasi_baer(&r, Side::Right, &caps()).unwrap();
        assert!(q.verdict);
        assert_eq!(q.instances_checked, 4);
    }

    #[test]
    fn z4_quasi_baer_fails_on_ideal_two() {
        let r = zn(4).unwrap();
        let q = decide_quasi_baer(&r, Side::Right, &caps()).unwrap();
        assert!(!q.verdict);
        assert_eq!(q.failing_instance.unwrap().instance.members(), vec![0, 2]);
    }

    #[test]
    fn matrix_ring_is_quasi_baer() {
        let r = builtin("mat2:z2", &caps()).unwrap();
        assert!(decide_quasi_baer(&r, Side::Right, &caps()).unwrap().verdict);
    }

    #[test]
    fn z4_generalized_baer_accepts_two_at_square() {
        let r = zn(4).unwrap();
        let v = decide_generalized(&r, ClassKind::Baer, Side::Right, &caps()).unwrap();
        assert!(v.verdict);
        let two = v.per_instance.iter().find(|c| c.instance.members() == vec![2]).unwrap();
        assert_eq!((two.exponent, two.idempotent), (2, Elem(1)));
        let one = v.per_instance.iter().find(|c| c.instance.members() == vec![1]).unwrap();
        assert_eq!((one.exponent, one.idempotent), (1, Elem(0)));
        v.recheck(&r).unwrap();
    }

    #[test]
    fn z6_generalized_quasi_baer_at_first_power() {
        let r = zn(6).unwrap();
        let v = decide_generalized(&r, ClassKind::QuasiBaer, Side::Right, &caps()).unwrap();
        assert!(v.verdict);
        assert!(v.per_instance.iter().all(|c| c.exponent == 1));
    }

    #[test]
    fn decider_matches_oracle_on_small_rings() {
        for name in ["zn:4", "prod:z2,z2", "ut2:z2", "zn:8"] {
            let r = builtin(name, &caps()).unwrap();
            for kind in [ClassKind::Baer, ClassKind::QuasiBaer] {
                for side in [Side::Right, Side::Left] {
                    let d = decide_generalized(&r, kind, side, &caps()).unwrap();
                    let o = oracle_decide_generalized(&r, kind, side, &caps()).unwrap();
                    assert_eq!(d, o, "{name} {kind:?} {side:?}");
                    d.recheck(&r).unwrap();
                }
            }
        }
    }

    #[test]
    fn every_catalog_verdict_rechecks() {
        for r in catalog(&caps()).unwrap() {
            for side in [Side::Right, Side::Left] {
                decide_baer(&r, side, &caps()).unwrap().recheck(&r).unwrap();
                decide_quasi_baer(&r, side, &caps()).unwrap().recheck(&r).unwrap();
                for kind in [ClassKind::Baer, ClassKind::QuasiBaer] {
                    decide_generalized(&r, kind, side, &caps()).unwrap().recheck(&r).unwrap();
                }
            }
        }
    }

    #[test]
    fn subset_cap_is_enforced() {
        let r = zn(9).unwrap();
        let small = Caps { subsets: 8, ..Caps::default() };
        assert!(matches!(
            decide_baer(&r, Side::Right, &small),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn records_end_with_verdict() {
        let r = zn(4).unwrap();
        let v = decide_baer(&r, Side::Right, &caps()).unwrap();
        let recs = v.records();
        assert_eq!(recs.len(), v.instances_checked + 1);
        assert_eq!(recs.last().unwrap()["record"], "class_verdict");
        assert_eq!(recs.last().unwrap()["witness"], json!([2]));
    }

    #[test]
    fn fields_are_baer() {
        for r in catalog(&caps()).unwrap() {
            if r.is_reduced().verdict == crate::certificate::Verdict::Yes
                && r.elements().all(|a| r.is_zero(a) || r.elements().any(|b| r.mul(a, b) == r.one()))
            {
                assert!(decide_baer(&r, Side::Right, &caps()).unwrap().verdict, "{}", r.label());
            }
        }
    }
}
