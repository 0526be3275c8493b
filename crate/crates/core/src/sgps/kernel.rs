use std::collections::BTreeMap;
use std::sync::Arc;

use super::{SkewContext, SkewSeries};
use crate::error::{Error, Result};
use crate::monoid::Exponent;
use crate::ring::Elem;

/// Dense arithmetic for series supported in a fixed finite exponent box.
///
/// A box slice is a coefficient vector indexed like `exps()`. Slices are
/// numbered by `code = sum_i c_i * |R|^i`, so digit 0 belongs to the smallest
/// exponent in refined order.
pub struct BoxKernel {
    ctx: Arc<SkewContext>,
    exps: Vec<Exponent>,
    sums: Vec<Exponent>,
    sum_index: Vec<usize>,
    twist: Vec<u32>,
}

impl BoxKernel {
    pub fn new(ctx: &Arc<SkewContext>, exps: &[Exponent]) -> Result<BoxKernel> {
        let mut exps = exps.to_vec();
        exps.sort();
        exps.dedup();
        for e in &exps {
            ctx.monoid().check(e)?;
        }
        let m = ctx.monoid();
        let mut sums: Vec<Exponent> = exps
            .iter()
            .flat_map(|u| exps.iter().map(move |v| m.op_unchecked(u, v)))
            .collect();
        sums.sort();
        sums.dedup();
        let sum_index = exps
            .iter()
            .flat_map(|u| exps.iter().map(move |v| (u, v)))
            .map(|(u, v)| sums.binary_search(&m.op_unchecked(u, v)).unwrap())
            .collect();
        let ring = ctx.ring();
        let twist = exps
            .iter()
            .flat_map(|u| ring.elements().map(move |r| ctx.apply_omega(u, r).0 as u32))
            .collect();
        Ok(BoxKernel {
            ctx: Arc::clone(ctx),
            exps,
            sums,
            sum_index,
            twist,
        })
    }

    pub fn context(&self) -> &Arc<SkewContext> {
        &self.ctx
    }

    pub fn exps(&self) -> &[Exponent] {
        &self.exps
    }

    pub fn sums(&self) -> &[Exponent] {
        &self.sums
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// `|R|^len`, the number of slices.
    pub fn slice_count(&self) -> u128 {
        (self.ctx.ring().order() as u128).saturating_pow(self.exps.len() as u32)
    }

    pub fn require_within(&self, what: &str, needed: u128, budget: u128) -> Result<()> {
        if needed > budget {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                needed,
                budget,
            });
        }
        Ok(())
    }

    pub fn decode(&self, mut code: u128, out: &mut [Elem]) {
        let base = self.ctx.ring().order() as u128;
        for c in out.iter_mut() {
            *c = Elem((code % base) as usize);
            code /= base;
        }
    }

    pub fn encode(&self, coeffs: &[Elem]) -> u128 {
        let base = self.ctx.ring().order() as u128;
        coeffs.iter().rev().fold(0, |acc, c| acc * base + c.0 as u128)
    }

    /// Dense product; `out` is indexed like `sums()`.
    #[inline]
    pub fn mul_into(&self, f: &[Elem], g: &[Elem], out: &mut [Elem]) {
        let ring = self.ctx.ring();
        let order = ring.order();
        let m = self.exps.len();
        out.fill(ring.zero());
        for (i, &a) in f.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            let tw = &self.twist[i * order..(i + 1) * order];
            for (j, &b) in g.iter().enumerate() {
                if ring.is_zero(b) {
                    continue;
                }
                let p = ring.mul(a, Elem(tw[b.0] as usize));
                let t = self.sum_index[i * m + j];
                out[t] = ring.add(out[t], p);
            }
        }
    }

    /// `omega_{exps[i]}(r)`.
    #[inline]
    pub fn twist(&self, i: usize, r: Elem) -> Elem {
        Elem(self.twist[i * self.ctx.ring().order() + r.0] as usize)
    }

    pub fn to_series(&self, coeffs: &[Elem]) -> SkewSeries {
        let ring = self.ctx.ring();
        let terms: BTreeMap<Exponent, Elem> = self
            .exps
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !ring.is_zero(**c))
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        SkewSeries::from_map_unchecked(&self.ctx, terms)
    }

    pub fn sums_to_series(&self, coeffs: &[Elem]) -> SkewSeries {
        let ring = self.ctx.ring();
        let terms: BTreeMap<Exponent, Elem> = self
            .sums
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !ring.is_zero(**c))
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        SkewSeries::from_map_unchecked(&self.ctx, terms)
    }

    /// `None` if `f` has support outside the box.
    pub fn from_series(&self, f: &SkewSeries) -> Option<Vec<Elem>> {
        if f.terms().any(|(s, _)| self.exps.binary_search(s).is_err()) {
            return None;
        }
        Some(self.exps.iter().map(|s| f.coeff(s)).collect())
    }

    /// Every slice whose coefficients are drawn from `allowed`, in code order.
    pub fn slices_with(&self, allowed: &[Elem]) -> SliceIter {
        SliceIter {
            allowed: allowed.to_vec(),
            digits: vec![0; self.exps.len()],
            done: allowed.is_empty() && !self.exps.is_empty(),
        }
    }

    /// Every series with support in the box, in code order.
    pub fn all_series(&self) -> impl Iterator<Item = SkewSeries> + '_ {
        let all: Vec<Elem> = self.ctx.ring().elements().collect();
        self.slices_with(&all).map(move |c| self.to_series(&c))
    }
}

/// Odometer over coefficient vectors, digit 0 fastest.
pub struct SliceIter {
    allowed: Vec<Elem>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for SliceIter {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        if self.done {
            return None;
        }
        let out = self.digits.iter().map(|&d| self.allowed[d]).collect();
        self.done = true;
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < self.allowed.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(out)
    }
}
