//! Finite-support elements of the skew generalized power series ring
//! `R[[S, omega]]`.
//!
//! Only finite supports are representable, so every computation here lives
//! in the skew monoid ring inside `R[[S, omega]]`. Products are exact: for
//! `f, g` with finite support,
//!
//! ```text
//! (fg)(s) = sum over (u, v) with u v = s, f(u) != 0, g(v) != 0 of f(u) * omega_u(g(v))
//! ```
//!
//! and no truncation is involved.

mod armendariz;
mod kernel;
mod literal;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::{support_admissible, Exponent, MonoidKind, OrderedMonoid};
use crate::ring::{Elem, FiniteRing, RingEndomorphism};

pub use armendariz::{armendariz_search, s_compatibility_check, SearchMode};
pub use kernel::{BoxKernel, SliceIter};

/// Powers `sigma^0, sigma^1, ...` of one endomorphism, stored up to the
/// point where the sequence becomes periodic.
#[derive(Clone, Debug)]
struct PowerTable {
    powers: Vec<RingEndomorphism>,
    preperiod: usize,
    period: usize,
}

impl PowerTable {
    fn new(ring: &FiniteRing, sigma: &RingEndomorphism) -> PowerTable {
        let mut powers = vec![RingEndomorphism::identity(ring)];
        loop {
            let next = sigma.compose(powers.last().unwrap());
            if let Some(at) = powers.iter().position(|p| *p == next) {
                let period = powers.len() - at;
                return PowerTable {
                    powers,
                    preperiod: at,
                    period,
                };
            }
            powers.push(next);
        }
    }

    /// `sigma^m`; negative `m` requires a bijective `sigma` (purely periodic).
    fn power(&self, m: i64) -> &RingEndomorphism {
        let idx = if m < 0 {
            debug_assert_eq!(self.preperiod, 0);
            m.rem_euclid(self.period as i64) as usize
        } else {
            let m = m as usize;
            if m < self.preperiod {
                m
            } else {
                self.preperiod + (m - self.preperiod) % self.period
            }
        };
        &self.powers[idx]
    }
}

/// The data `(R, S, omega)`. `omega` is stored on the generators of `S` and
/// extended by the homomorphism law (`omega_k = sigma^k` on `N`).
#[derive(Debug)]
pub struct SkewContext {
    ring: Arc<FiniteRing>,
    monoid: OrderedMonoid,
    omega_gen: Vec<RingEndomorphism>,
    tables: Vec<PowerTable>,
}

impl SkewContext {
    /// `omega_gen[i]` is the image of `monoid.generators()[i]`.
    pub fn new(
        ring: Arc<FiniteRing>,
        monoid: OrderedMonoid,
        omega_gen: Vec<RingEndomorphism>,
    ) -> Result<Arc<SkewContext>> {
        let gens = monoid.generators();
        if omega_gen.len() != gens.len() {
            return Err(Error::InvalidContext(format!(
                "{} generator images for {} generators",
                omega_gen.len(),
                gens.len()
            )));
        }
        for sigma in &omega_gen {
            if sigma.image().len() != ring.order() {
                return Err(Error::InvalidContext("endomorphism of a different ring".into()));
            }
        }
        let tables = match monoid.kind() {
            MonoidKind::Int => {
                let (up, down) = (&omega_gen[0], &omega_gen[1]);
                if !up.compose(down).is_identity() || !down.compose(up).is_identity() {
                    return Err(Error::InvalidContext(
                        "omega(1) and omega(-1) must be mutually inverse".into(),
                    ));
                }
                vec![PowerTable::new(&ring, up)]
            }
            _ => {
                for (i, a) in omega_gen.iter().enumerate() {
                    for b in &omega_gen[i + 1..] {
                        if a.compose(b) != b.compose(a) {
                            return Err(Error::InvalidContext(
                                "generator images must commute".into(),
                            ));
                        }
                    }
                }
                omega_gen.iter().map(|s| PowerTable::new(&ring, s)).collect()
            }
        };
        let ctx = SkewContext {
            ring,
            monoid,
            omega_gen,
            tables,
        };
        ctx.check_homomorphism(3)?;
        Ok(Arc::new(ctx))
    }

    /// `omega = id` on every generator.
    pub fn untwisted(ring: Arc<FiniteRing>, monoid: OrderedMonoid) -> Result<Arc<SkewContext>> {
        let id = RingEndomorphism::identity(&ring);
        let n = monoid.generators().len();
        Self::new(ring, monoid, vec![id; n])
    }

    /// The same `sigma` on every generator; on `Z`, `omega(-1) = sigma^-1`.
    pub fn with_sigma(
        ring: Arc<FiniteRing>,
        monoid: OrderedMonoid,
        sigma: RingEndomorphism,
    ) -> Result<Arc<SkewContext>> {
        let gens = match monoid.kind() {
            MonoidKind::Int => {
                let inv = sigma.inverse().ok_or_else(|| {
                    Error::InvalidContext("omega on Z needs an automorphism".into())
                })?;
                vec![sigma, inv]
            }
            _ => vec![sigma; monoid.generators().len()],
        };
        Self::new(ring, monoid, gens)
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn monoid(&self) -> &OrderedMonoid {
        &self.monoid
    }

    pub fn omega_generators(&self) -> &[RingEndomorphism] {
        &self.omega_gen
    }

    pub fn is_untwisted(&self) -> bool {
        self.omega_gen.iter().all(RingEndomorphism::is_identity)
    }

    #[inline]
    pub fn apply_omega(&self, s: &Exponent, r: Elem) -> Elem {
        s.0.iter()
            .zip(&self.tables)
            .fold(r, |acc, (&c, table)| table.power(c).apply(acc))
    }

    pub fn omega(&self, s: &Exponent) -> RingEndomorphism {
        s.0.iter()
            .zip(&self.tables)
            .fold(RingEndomorphism::identity(&self.ring), |acc, (&c, table)| {
                table.power(c).compose(&acc)
            })
    }

    /// Asserts `omega(1_S) = id` and `omega(uv) = omega(u) omega(v)` on the
    /// box of side `bound`.
    pub fn check_homomorphism(&self, bound: i64) -> Result<()> {
        if !self.omega(&self.monoid.identity()).is_identity() {
            return Err(Error::InvalidContext("omega(1_S) is not the identity".into()));
        }
        let els = self.monoid.elements_up_to(bound);
        for u in &els {
            let wu = self.omega(u);
            for v in &els {
                let uv = self.monoid.op_unchecked(u, v);
                if self.omega(&uv) != wu.compose(&self.omega(v)) {
                    return Err(Error::InvalidContext(format!(
                        "omega({uv}) != omega({u}) omega({v})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        let sig: Vec<String> = self
            .omega_gen
            .iter()
            .map(|s| {
                if s.is_identity() {
                    "id".to_string()
                } else {
                    format!("{:?}", s.image())
                }
            })
            .collect();
        format!("{} over {} with omega [{}]", self.ring.label(), self.monoid.label(), sig.join(", "))
    }
}

/// A finite-support map `S -> R`. Terms are kept in ascending refined order
/// and never store a zero coefficient.
#[derive(Clone)]
pub struct SkewSeries {
    ctx: Arc<SkewContext>,
    terms: BTreeMap<Exponent, Elem>,
}

impl PartialEq for SkewSeries {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for SkewSeries {}

impl std::hash::Hash for SkewSeries {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl PartialOrd for SkewSeries {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SkewSeries {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

impl fmt::Debug for SkewSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkewSeries({self})")
    }
}

impl Serialize for SkewSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `X_s(f, g)`: the pairs `(u, v)` with `uv = s`, `f(u) != 0`, `g(v) != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationSet {
    pub target: Exponent,
    pub pairs: Vec<(Exponent, Exponent)>,
}

impl SkewSeries {
    pub fn zero(ctx: &Arc<SkewContext>) -> SkewSeries {
        SkewSeries {
            ctx: Arc::clone(ctx),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(ctx: &Arc<SkewContext>) -> SkewSeries {
        Self::const_embed(ctx, ctx.ring.one())
    }

    /// Zero coefficients are dropped.
    pub fn from_pairs(
        ctx: &Arc<SkewContext>,
        pairs: impl IntoIterator<Item = (Exponent, Elem)>,
    ) -> Result<SkewSeries> {
        let mut terms = BTreeMap::new();
        for (s, r) in pairs {
            ctx.monoid.check(&s)?;
            ctx.ring.check_elem(r)?;
            if terms.insert(s.clone(), r).is_some() {
                return Err(Error::DuplicateExponent(s.to_string()));
            }
        }
        terms.retain(|_, r| !ctx.ring.is_zero(*r));
        Ok(SkewSeries {
            ctx: Arc::clone(ctx),
            terms,
        })
    }

    pub(crate) fn from_map_unchecked(ctx: &Arc<SkewContext>, terms: BTreeMap<Exponent, Elem>) -> Self {
        debug_assert!(terms.values().all(|r| !ctx.ring.is_zero(*r)));
        SkewSeries {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    /// `c_r`: `r` at `1_S`.
    pub fn const_embed(ctx: &Arc<SkewContext>, r: Elem) -> SkewSeries {
        let mut terms = BTreeMap::new();
        if !ctx.ring.is_zero(r) {
            terms.insert(ctx.monoid.identity(), r);
        }
        SkewSeries {
            ctx: Arc::clone(ctx),
            terms,
        }
    }

    /// `e_s`: `1_R` at `s`.
    pub fn exp_embed(ctx: &Arc<SkewContext>, s: Exponent) -> Result<SkewSeries> {
        ctx.monoid.check(&s)?;
        let mut terms = BTreeMap::new();
        terms.insert(s, ctx.ring.one());
        Ok(SkewSeries {
            ctx: Arc::clone(ctx),
            terms,
        })
    }

    pub fn context(&self) -> &Arc<SkewContext> {
        &self.ctx
    }

    pub fn coeff(&self, s: &Exponent) -> Elem {
        self.terms.get(s).copied().unwrap_or(self.ctx.ring.zero())
    }

    /// `f(1_S)`.
    pub fn constant_term(&self) -> Elem {
        self.coeff(&self.ctx.monoid.identity())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, Elem)> {
        self.terms.iter().map(|(s, &r)| (s, r))
    }

    pub fn term_list(&self) -> Vec<(Exponent, Elem)> {
        self.terms.iter().map(|(s, &r)| (s.clone(), r)).collect()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|s| self.ctx.monoid.is_identity(s))
    }

    fn same_context(&self, other: &SkewSeries) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::MixedContexts)
        }
    }

    pub fn factorization_set(&self, g: &SkewSeries, s: &Exponent) -> Result<FactorizationSet> {
        self.same_context(g)?;
        let m = &self.ctx.monoid;
        let pairs = self
            .terms
            .keys()
            .flat_map(|u| g.terms.keys().map(move |v| (u, v)))
            .filter(|(u, v)| m.op_unchecked(u, v) == *s)
            .map(|(u, v)| (u.clone(), v.clone()))
            .collect();
        Ok(FactorizationSet {
            target: s.clone(),
            pairs,
        })
    }

    pub fn add(&self, g: &SkewSeries) -> Result<SkewSeries> {
        self.same_context(g)?;
        Ok(self.add_unchecked(g))
    }

    pub(crate) fn add_unchecked(&self, g: &SkewSeries) -> SkewSeries {
        let ring = &self.ctx.ring;
        let mut terms = self.terms.clone();
        for (s, &b) in &g.terms {
            let e = terms.entry(s.clone()).or_insert(ring.zero());
            *e = ring.add(*e, b);
        }
        terms.retain(|_, r| !ring.is_zero(*r));
        let out = SkewSeries {
            ctx: Arc::clone(&self.ctx),
            terms,
        };
        debug_assert!(out.terms.keys().all(|s| self.terms.contains_key(s) || g.terms.contains_key(s)));
        out
    }

    pub fn neg(&self) -> SkewSeries {
        let ring = &self.ctx.ring;
        SkewSeries {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(s, &r)| (s.clone(), ring.neg(r))).collect(),
        }
    }

    pub fn mul(&self, g: &SkewSeries) -> Result<SkewSeries> {
        self.same_context(g)?;
        Ok(self.mul_unchecked(g))
    }

    pub(crate) fn mul_unchecked(&self, g: &SkewSeries) -> SkewSeries {
        let ring = &self.ctx.ring;
        let monoid = &self.ctx.monoid;
        let mut terms: BTreeMap<Exponent, Elem> = BTreeMap::new();
        for (u, &a) in &self.terms {
            for (v, &b) in &g.terms {
                let p = ring.mul(a, self.ctx.apply_omega(u, b));
                if ring.is_zero(p) {
                    continue;
                }
                let e = terms.entry(monoid.op_unchecked(u, v)).or_insert(ring.zero());
                *e = ring.add(*e, p);
            }
        }
        terms.retain(|_, r| !ring.is_zero(*r));
        debug_assert!(support_admissible(monoid, &terms.keys().cloned().collect::<Vec<_>>()));
        SkewSeries {
            ctx: Arc::clone(&self.ctx),
            terms,
        }
    }

    /// Exact: finite-support products involve no truncation.
    pub fn is_idempotent(&self) -> bool {
        self.mul_unchecked(self) == *self
    }
}
