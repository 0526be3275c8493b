//! Ordered commutative monoids of exponents: `N`, `N^k` and `Z` under
//! addition, with natural, trivial, product or lexicographic orders.
//!
//! Every monoid ships its own total refinement (the natural order for `N` and
//! `Z`, lex for `N^k`), which is what the quasitotality hypothesis asks for.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::certificate::{PropertyCertificate, Witness};
use crate::error::{Error, Result};

/// Coordinates of a monoid element. The derived order is lexicographic,
/// which is the total refinement for every supported monoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(pub Vec<i64>);

impl Exponent {
    pub fn scalar(v: i64) -> Exponent {
        Exponent(vec![v])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonoidKind {
    /// `(N, +)`
    Nat,
    /// `(N^k, +)`
    NatK(usize),
    /// `(Z, +)`
    Int,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderMode {
    Natural,
    Trivial,
    Product,
    Lex,
}

impl OrderMode {
    pub fn name(self) -> &'static str {
        match self {
            OrderMode::Natural => "natural",
            OrderMode::Trivial => "trivial",
            OrderMode::Product => "product",
            OrderMode::Lex => "lex",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OrderVerdict {
    Lt,
    Gt,
    Eq,
    Inc,
}

impl OrderVerdict {
    fn from_ordering(o: Ordering) -> OrderVerdict {
        match o {
            Ordering::Less => OrderVerdict::Lt,
            Ordering::Greater => OrderVerdict::Gt,
            Ordering::Equal => OrderVerdict::Eq,
        }
    }

    pub fn reversed(self) -> OrderVerdict {
        match self {
            OrderVerdict::Lt => OrderVerdict::Gt,
            OrderVerdict::Gt => OrderVerdict::Lt,
            v => v,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrderedMonoid {
    kind: MonoidKind,
    order: OrderMode,
}

impl OrderedMonoid {
    pub fn new(kind: MonoidKind, order: OrderMode) -> Result<OrderedMonoid> {
        let legal = match kind {
            MonoidKind::Nat | MonoidKind::Int => {
                matches!(order, OrderMode::Natural | OrderMode::Trivial)
            }
            MonoidKind::NatK(k) => {
                k >= 1 && matches!(order, OrderMode::Product | OrderMode::Lex | OrderMode::Trivial)
            }
        };
        if !legal {
            return Err(Error::IllegalPairing(format!("{kind:?} with {} order", order.name())));
        }
        Ok(OrderedMonoid { kind, order })
    }

    pub fn nat() -> OrderedMonoid {
        OrderedMonoid {
            kind: MonoidKind::Nat,
            order: OrderMode::Natural,
        }
    }

    /// Same monoid with the trivial order (only `u <= u`).
    pub fn trivial_wrap(base: &OrderedMonoid) -> OrderedMonoid {
        OrderedMonoid {
            kind: base.kind,
            order: OrderMode::Trivial,
        }
    }

    /// Parses `nat:natural`, `nat:trivial`, `int:natural`, `int:trivial`,
    /// `natK:product`, `natK:lex`, `natK:trivial`.
    pub fn parse(name: &str) -> Result<OrderedMonoid> {
        let (kind, order) = name
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Spec(format!("monoid `{name}` is not kind:order")))?;
        let kind = match kind {
            "nat" => MonoidKind::Nat,
            "int" => MonoidKind::Int,
            other => match other.strip_prefix("nat").map(str::parse::<usize>) {
                Some(Ok(k)) => MonoidKind::NatK(k),
                _ => return Err(Error::Spec(format!("unknown monoid kind `{other}`"))),
            },
        };
        Self::new(kind, parse_order(order)?)
    }

    pub fn label(&self) -> String {
        let kind = match self.kind {
            MonoidKind::Nat => "nat".to_string(),
            MonoidKind::Int => "int".to_string(),
            MonoidKind::NatK(k) => format!("nat{k}"),
        };
        format!("{kind}:{}", self.order.name())
    }

    pub fn kind(&self) -> MonoidKind {
        self.kind
    }

    pub fn order_mode(&self) -> OrderMode {
        self.order
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            MonoidKind::NatK(k) => k,
            _ => 1,
        }
    }

    pub fn identity(&self) -> Exponent {
        Exponent(vec![0; self.dim()])
    }

    pub fn is_identity(&self, u: &Exponent) -> bool {
        u.0.iter().all(|&c| c == 0)
    }

    pub fn contains(&self, u: &Exponent) -> bool {
        u.0.len() == self.dim() && (self.kind == MonoidKind::Int || u.0.iter().all(|&c| c >= 0))
    }

    pub fn check(&self, u: &Exponent) -> Result<()> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(Error::MixedMonoids(u.to_string()))
        }
    }

    /// Generators of the monoid as used for `omega`: `1` for `N`, unit
    /// vectors for `N^k`, `1` and `-1` for `Z`.
    pub fn generators(&self) -> Vec<Exponent> {
        match self.kind {
            MonoidKind::Nat => vec![Exponent::scalar(1)],
            MonoidKind::Int => vec![Exponent::scalar(1), Exponent::scalar(-1)],
            MonoidKind::NatK(k) => (0..k)
                .map(|i| Exponent((0..k).map(|j| i64::from(i == j)).collect()))
                .collect(),
        }
    }

    pub fn op(&self, u: &Exponent, v: &Exponent) -> Result<Exponent> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.op_unchecked(u, v))
    }

    #[inline]
    pub(crate) fn op_unchecked(&self, u: &Exponent, v: &Exponent) -> Exponent {
        Exponent(u.0.iter().zip(&v.0).map(|(a, b)| a + b).collect())
    }

    pub fn compare(&self, u: &Exponent, v: &Exponent, refined: bool) -> Result<OrderVerdict> {
        self.check(u)?;
        self.check(v)?;
        Ok(self.compare_unchecked(u, v, refined))
    }

    pub(crate) fn compare_unchecked(&self, u: &Exponent, v: &Exponent, refined: bool) -> OrderVerdict {
        if u == v {
            return OrderVerdict::Eq;
        }
        if refined {
            return OrderVerdict::from_ordering(u.cmp(v));
        }
        match self.order {
            OrderMode::Natural | OrderMode::Lex => OrderVerdict::from_ordering(u.cmp(v)),
            OrderMode::Trivial => OrderVerdict::Inc,
            OrderMode::Product => {
                if u.0.iter().zip(&v.0).all(|(a, b)| a <= b) {
                    OrderVerdict::Lt
                } else if u.0.iter().zip(&v.0).all(|(a, b)| a >= b) {
                    OrderVerdict::Gt
                } else {
                    OrderVerdict::Inc
                }
            }
        }
    }

    /// Whether the base order is already total.
    pub fn is_total(&self) -> bool {
        match self.order {
            OrderMode::Natural | OrderMode::Lex => true,
            OrderMode::Product => self.dim() == 1,
            OrderMode::Trivial => false,
        }
    }

    /// The order used by `compare(.., refined = true)`.
    pub fn refinement(&self) -> OrderMode {
        match self.kind {
            MonoidKind::NatK(_) => OrderMode::Lex,
            _ => OrderMode::Natural,
        }
    }

    /// Whether `1_S <= s` for every `s` under the base order.
    pub fn positively_ordered(&self) -> bool {
        !matches!((self.kind, self.order), (MonoidKind::Int, _) | (_, OrderMode::Trivial))
    }

    /// All elements with every coordinate in `[0, bound]`, or `[-bound, bound]` for `Z`.
    pub fn elements_up_to(&self, bound: i64) -> Vec<Exponent> {
        let lo = if self.kind == MonoidKind::Int { -bound } else { 0 };
        self.cube(lo, bound)
    }

    /// The exponent box of side `n`: coordinates in `[0, n)` (`(-n, n)` for `Z`).
    pub fn exponent_box(&self, n: usize) -> Vec<Exponent> {
        if n == 0 {
            return Vec::new();
        }
        self.elements_up_to(n as i64 - 1)
    }

    fn cube(&self, lo: i64, hi: i64) -> Vec<Exponent> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.dim() {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (lo..=hi).map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        let mut out: Vec<Exponent> = out.into_iter().map(Exponent).collect();
        out.sort();
        out
    }
}

pub(crate) fn parse_order(order: &str) -> Result<OrderMode> {
    Ok(match order.trim() {
        "natural" => OrderMode::Natural,
        "trivial" => OrderMode::Trivial,
        "product" => OrderMode::Product,
        "lex" => OrderMode::Lex,
        other => return Err(Error::Spec(format!("unknown order `{other}`"))),
    })
}

/// Checks the strict partial order axioms and strict translation
/// compatibility of `S.compare` on the box of side `bound`, for the base
/// order and for the total refinement.
pub fn check_order_axioms(monoid: &OrderedMonoid, bound: i64) -> PropertyCertificate {
    let base = check_order_axioms_with(monoid, bound, |u, v| monoid.compare_unchecked(u, v, false));
    if !base.not_refuted() {
        return base;
    }
    let refined = check_order_axioms_with(monoid, bound, |u, v| monoid.compare_unchecked(u, v, true));
    if !refined.not_refuted() {
        return PropertyCertificate {
            notes: format!("refinement: {}", refined.notes),
            ..refined
        };
    }
    let box_elems = monoid.elements_up_to(bound);
    for u in &box_elems {
        for v in &box_elems {
            let b = monoid.compare_unchecked(u, v, false);
            let r = monoid.compare_unchecked(u, v, true);
            if r == OrderVerdict::Inc {
                return PropertyCertificate::no(
                    "strictly_ordered",
                    Witness::Exponents(vec![u.clone(), v.clone()]),
                    "refinement is not total",
                );
            }
            if b != OrderVerdict::Inc && b != r {
                return PropertyCertificate::no(
                    "strictly_ordered",
                    Witness::Exponents(vec![u.clone(), v.clone()]),
                    "refinement does not extend the base order",
                );
            }
        }
    }
    PropertyCertificate::yes(
        "strictly_ordered",
        format!(
            "{}: strict compatible order and total refinement ({}) verified on the box up to {bound}",
            monoid.label(),
            monoid.refinement().name()
        ),
    )
}

/// The same checks for an arbitrary comparator.
pub fn check_order_axioms_with<F>(monoid: &OrderedMonoid, bound: i64, cmp: F) -> PropertyCertificate
where
    F: Fn(&Exponent, &Exponent) -> OrderVerdict,
{
    let name = "strictly_ordered";
    let elems = monoid.elements_up_to(bound);
    let fail = |why: &str, w: Vec<&Exponent>| {
        PropertyCertificate::no(
            name,
            Witness::Exponents(w.into_iter().cloned().collect()),
            why.to_string(),
        )
    };
    let lt = |u: &Exponent, v: &Exponent| cmp(u, v) == OrderVerdict::Lt;
    for u in &elems {
        if cmp(u, u) != OrderVerdict::Eq {
            return fail("not irreflexive", vec![u]);
        }
        for v in &elems {
            let uv = cmp(u, v);
            if uv == OrderVerdict::Eq && u != v {
                return fail("distinct elements compare equal", vec![u, v]);
            }
            if cmp(v, u) != uv.reversed() {
                return fail("not antisymmetric", vec![u, v]);
            }
        }
    }
    for u in &elems {
        for v in elems.iter().filter(|v| lt(u, v)) {
            for w in elems.iter().filter(|w| lt(v, w)) {
                if !lt(u, w) {
                    return fail("not transitive", vec![u, v, w]);
                }
            }
            for t in &elems {
                let (ut, vt) = (monoid.op_unchecked(u, t), monoid.op_unchecked(v, t));
                let (tu, tv) = (monoid.op_unchecked(t, u), monoid.op_unchecked(t, v));
                if !lt(&ut, &vt) || !lt(&tu, &tv) {
                    return fail("strict compatibility fails", vec![u, v, t]);
                }
            }
        }
    }
    PropertyCertificate::yes(name, format!("verified on the box up to {bound}"))
}

/// Finite supports are artinian and narrow; the check documents that the
/// representation never leaves the admissible class.
pub fn support_admissible(monoid: &OrderedMonoid, points: &[Exponent]) -> bool {
    let admissible = points.iter().all(|p| monoid.contains(p));
    debug_assert!(admissible, "support outside the monoid");
    admissible
}
