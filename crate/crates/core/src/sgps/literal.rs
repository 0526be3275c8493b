//! Series literals: `coeff@exponent` terms joined by `+`, e.g. `2@0 + 3@1,0`.
//! The zero series prints as `0`.

use std::fmt;
use std::sync::Arc;

use super::{SkewContext, SkewSeries};
use crate::error::{Error, Result};
use crate::monoid::Exponent;
use crate::ring::Elem;

impl fmt::Display for SkewSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{r}@{s}")?;
        }
        Ok(())
    }
}

pub(crate) fn parse_exponent(text: &str) -> Result<Exponent> {
    let coords = text
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|_| Error::Spec(format!("bad exponent `{text}`")))
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(Exponent(coords))
}

impl SkewSeries {
    pub fn parse(ctx: &Arc<SkewContext>, text: &str) -> Result<SkewSeries> {
        let text = text.trim();
        if text == "0" || text.is_empty() {
            return Ok(SkewSeries::zero(ctx));
        }
        let mut pairs = Vec::new();
        for term in text.split('+') {
            let (c, e) = term
                .trim()
                .split_once('@')
                .ok_or_else(|| Error::Spec(format!("term `{}` is not coeff@exponent", term.trim())))?;
            let c: usize = c
                .trim()
                .parse()
                .map_err(|_| Error::Spec(format!("bad coefficient `{c}`")))?;
            pairs.push((parse_exponent(e)?, Elem(c)));
        }
        SkewSeries::from_pairs(ctx, pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::OrderedMonoid;
    use crate::ring::zn;
    use proptest::prelude::*;

    fn ctx2() -> Arc<SkewContext> {
        SkewContext::untwisted(
            Arc::new(zn(4).unwrap()),
            OrderedMonoid::parse("nat2:product").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn parses_tuple_exponents() {
        let ctx = ctx2();
        let f = SkewSeries::parse(&ctx, "2@0,0 + 3@1,0").unwrap();
        assert_eq!(f.coeff(&Exponent(vec![1, 0])), Elem(3));
        assert_eq!(f.to_string(), "2@0,0 + 3@1,0");
        assert!(SkewSeries::parse(&ctx, "0").unwrap().is_zero());
        assert!(SkewSeries::parse(&ctx, "2@0").is_err());
        assert!(SkewSeries::parse(&ctx, "2@0,0 + 1@0,0").is_err());
        assert!(SkewSeries::parse(&ctx, "x@0,0").is_err());
        assert!(SkewSeries::parse(&ctx, "9@0,0").is_err());
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(coeffs in proptest::collection::vec(0usize..4, 9)) {
            let ctx = ctx2();
            let pairs = ctx.monoid().exponent_box(3).into_iter().zip(coeffs.into_iter().map(Elem));
            let f = SkewSeries::from_pairs(&ctx, pairs).unwrap();
            prop_assert_eq!(SkewSeries::parse(&ctx, &f.to_string()).unwrap(), f);
        }
    }
}
