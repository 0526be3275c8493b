//! Passage between ring-level sets and sets of series.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::Exponent;
use crate::ring::{Elem, IdealSide, RingSubset};
use crate::sgps::{BoxKernel, SkewContext, SkewSeries};

/// `{c_x : x in X}`.
pub fn lift_subset_to_series(ctx: &Arc<SkewContext>, x: &RingSubset) -> Result<Vec<SkewSeries>> {
    if x.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(x.iter().map(|e| SkewSeries::const_embed(ctx, e)).collect())
}

/// Every series supported in the box with all coefficients in `I`.
pub fn lift_ideal_to_series(
    ctx: &Arc<SkewContext>,
    ideal: &RingSubset,
    support_box: &[Exponent],
) -> Result<Vec<SkewSeries>> {
    let kernel = BoxKernel::new(ctx, support_box)?;
    let allowed: Vec<Elem> = ideal.iter().collect();
    Ok(kernel.slices_with(&allowed).map(|c| kernel.to_series(&c)).collect())
}

/// Monomials `i@s` with `i` in `I` and `s` in the box. They span the box
/// slice of `I[[S, omega]]` additively, so products of them have the same
/// right annihilator as products of the whole slice.
pub fn ideal_lift_spanning_set(
    ctx: &Arc<SkewContext>,
    ideal: &RingSubset,
    support_box: &[Exponent],
) -> Result<Vec<SkewSeries>> {
    let kernel = BoxKernel::new(ctx, support_box)?;
    let ring = ctx.ring();
    let mut out = BTreeSet::new();
    for s in kernel.exps() {
        for i in ideal.iter().filter(|&i| !ring.is_zero(i)) {
            out.insert(SkewSeries::from_pairs(ctx, [(s.clone(), i)])?);
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientIdealLift {
    pub source: String,
    /// `J_s = {f(s) : f in J}` for every `s` in the union of the supports.
    pub per_exponent: BTreeMap<Exponent, RingSubset>,
    pub union: RingSubset,
    /// The right ideal generated by `union`.
    pub generated_ideal: RingSubset,
}

pub fn coefficient_ideal_lift(
    ctx: &Arc<SkewContext>,
    j: &[SkewSeries],
    source: impl Into<String>,
) -> CoefficientIdealLift {
    let ring = ctx.ring();
    let order = ring.order();
    let exps: BTreeSet<&Exponent> = j.iter().flat_map(|f| f.terms().map(|(s, _)| s)).collect();
    let per_exponent: BTreeMap<Exponent, RingSubset> = exps
        .into_iter()
        .map(|s| (s.clone(), RingSubset::from_elems(order, j.iter().map(|f| f.coeff(s)))))
        .collect();
    let mut union = RingSubset::empty(order);
    for set in per_exponent.values() {
        union.union_with(set);
    }
    let generated_ideal = ring.ideal_generated(&union, IdealSide::Right);
    CoefficientIdealLift {
        source: source.into(),
        per_exponent,
        union,
        generated_ideal,
    }
}

/// Every product `h1 h2 ... hn` with all `hi` in `G`, deduplicated.
pub fn series_power_set(g: &[SkewSeries], n: usize, budget: u128) -> Result<Vec<SkewSeries>> {
    if n == 0 {
        return Err(Error::NonpositiveExponent);
    }
    let base: BTreeSet<SkewSeries> = g.iter().cloned().collect();
    let mut power = base.clone();
    for _ in 1..n {
        let needed = power.len() as u128 * base.len() as u128;
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: "series power set".into(),
                needed,
                budget,
            });
        }
        let mut next = BTreeSet::new();
        for p in &power {
            for h in &base {
                next.insert(p.mul(h)?);
            }
        }
        power = next;
    }
    Ok(power.into_iter().collect())
}

/// Every series `g` supported in the box with `(h1 ... hn) g = 0` for all
/// `hi` in `G`. Products are exact; only `g` is restricted to the box.
pub fn bounded_annihilator_in_a(
    ctx: &Arc<SkewContext>,
    g: &[SkewSeries],
    n: usize,
    support_box: &[Exponent],
    budget: u128,
) -> Result<Vec<SkewSeries>> {
    let kernel = BoxKernel::new(ctx, support_box)?;
    let products: Vec<SkewSeries> = series_power_set(g, n, budget)?
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    let needed = kernel.slice_count().saturating_mul(products.len().max(1) as u128);
    kernel.require_within("bounded annihilator", needed, budget)?;
    let mut out = Vec::new();
    for candidate in kernel.all_series() {
        let mut kills = true;
        for p in &products {
            if !p.mul(&candidate)?.is_zero() {
                kills = false;
                break;
            }
        }
        if kills {
            out.push(candidate);
        }
    }
    Ok(out)
}
