//! Finite associative unital rings given by Cayley tables.
//!
//! Elements are dense indices `0..order`. Every ring is validated exhaustively
//! at construction, so the rest of the crate may assume the axioms hold.

mod catalog;
mod endo;
mod ops;
mod subset;

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

pub use catalog::{
    builtin, catalog, direct_product, gf4, matrix, matrix_with_caps, product_with_caps,
    upper_triangular, zn, zn_with_caps, CATALOG,
};
pub use endo::{endo_property, enumerate_endomorphisms, EndoProperty, RingEndomorphism};
pub use ops::{IdealSide, Side};
pub use subset::RingSubset;

/// Index of an element in its ring.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Elem(pub usize);

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Size limits for the exhaustive procedures.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Largest ring whose nonempty subsets are enumerated.
    pub subsets: usize,
    /// Largest ring searched for endomorphisms.
    pub endomorphisms: usize,
    /// Largest ring whose one-sided ideals are enumerated.
    pub ideals: usize,
    /// Largest ring the constructors will build.
    pub construct: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            subsets: 16,
            endomorphisms: 16,
            ideals: 16,
            construct: 256,
        }
    }
}

impl Caps {
    /// Parses `subsets=16,endo=16,ideals=16,construct=256`; missing keys keep defaults.
    pub fn parse(text: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Spec(format!("cap entry `{part}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Spec(format!("cap `{key}` needs an integer")))?;
            match key.trim() {
                "subsets" => caps.subsets = value,
                "endo" | "endomorphisms" => caps.endomorphisms = value,
                "ideals" => caps.ideals = value,
                "construct" => caps.construct = value,
                other => return Err(Error::Spec(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }

    pub(crate) fn check(cap: usize, size: usize, what: &str) -> Result<()> {
        if size > cap {
            return Err(Error::SizeCapExceeded {
                what: what.to_string(),
                size,
                cap,
            });
        }
        Ok(())
    }
}

#[derive(Clone)]
pub struct FiniteRing {
    label: String,
    order: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    zero: Elem,
    one: Elem,
    idempotents: OnceLock<Vec<Elem>>,
    principal: OnceLock<(Vec<RingSubset>, Vec<RingSubset>)>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish()
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.zero == other.zero
            && self.one == other.one
            && self.add == other.add
            && self.mul == other.mul
    }
}

impl Eq for FiniteRing {}

impl FiniteRing {
    /// Builds a ring from row-major tables (`table[a][b]` is `a op b`) and
    /// checks every ring axiom over all pairs and triples.
    pub fn from_tables(
        label: impl Into<String>,
        order: usize,
        add_table: &[Vec<usize>],
        mul_table: &[Vec<usize>],
        zero: usize,
        one: usize,
    ) -> Result<FiniteRing> {
        let flatten = |name: &str, t: &[Vec<usize>]| -> Result<Vec<u32>> {
            if t.len() != order || t.iter().any(|row| row.len() != order) {
                return Err(Error::AxiomViolation {
                    axiom: format!("{name} table shape"),
                    witness: vec![t.len()],
                });
            }
            Ok(t.iter().flatten().map(|&x| x as u32).collect())
        };
        let add = flatten("add", add_table)?;
        let mul = flatten("mul", mul_table)?;
        Self::from_flat(label.into(), order, add, mul, zero, one)
    }

    pub(crate) fn from_flat(
        label: String,
        order: usize,
        add: Vec<u32>,
        mul: Vec<u32>,
        zero: usize,
        one: usize,
    ) -> Result<FiniteRing> {
        let fail = |axiom: &str, witness: Vec<usize>| Error::AxiomViolation {
            axiom: axiom.to_string(),
            witness,
        };
        if order == 0 || add.len() != order * order || mul.len() != order * order {
            return Err(fail("table shape", vec![order]));
        }
        if zero >= order || one >= order {
            return Err(fail("identity index in range", vec![zero, one]));
        }
        for (i, &x) in add.iter().chain(mul.iter()).enumerate() {
            if x as usize >= order {
                let i = i % (order * order);
                return Err(fail("table entry in range", vec![i / order, i % order]));
            }
        }
        let at = |t: &[u32], a: usize, b: usize| t[a * order + b] as usize;

        for a in 0..order {
            if at(&add, zero, a) != a || at(&add, a, zero) != a {
                return Err(fail("additive identity", vec![a]));
            }
            if at(&mul, one, a) != a || at(&mul, a, one) != a {
                return Err(fail("multiplicative identity", vec![a]));
            }
            for b in 0..order {
                if at(&add, a, b) != at(&add, b, a) {
                    return Err(fail("additive commutativity", vec![a, b]));
                }
            }
        }
        if zero == one {
            return Err(fail("one != zero", vec![zero]));
        }
        let neg = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| at(&add, a, b) == zero)
                    .map(|b| b as u32)
                    .ok_or_else(|| fail("additive inverse", vec![a]))
            })
            .collect::<Result<Vec<u32>>>()?;
        for a in 0..order {
            for b in 0..order {
                let ab_add = at(&add, a, b);
                let ab_mul = at(&mul, a, b);
                for c in 0..order {
                    if at(&add, ab_add, c) != at(&add, a, at(&add, b, c)) {
                        return Err(fail("additive associativity", vec![a, b, c]));
                    }
                    if at(&mul, ab_mul, c) != at(&mul, a, at(&mul, b, c)) {
                        return Err(fail("multiplicative associativity", vec![a, b, c]));
                    }
                    if at(&mul, a, at(&add, b, c)) != at(&add, ab_mul, at(&mul, a, c)) {
                        return Err(fail("left distributivity", vec![a, b, c]));
                    }
                    if at(&mul, ab_add, c) != at(&add, at(&mul, a, c), at(&mul, b, c)) {
                        return Err(fail("right distributivity", vec![a, b, c]));
                    }
                }
            }
        }
        Ok(FiniteRing {
            label,
            order,
            add,
            mul,
            neg,
            zero: Elem(zero),
            one: Elem(one),
            idempotents: OnceLock::new(),
            principal: OnceLock::new(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.0 * self.order + b.0] as usize)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.0 * self.order + b.0] as usize)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.0] as usize)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn is_zero(&self, a: Elem) -> bool {
        a == self.zero
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.order
    }

    pub fn check_elem(&self, a: Elem) -> Result<Elem> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::ForeignElement {
                index: a.0,
                order: self.order,
            })
        }
    }

    /// Row-major copies of the tables, for display and serialization.
    pub fn add_table(&self) -> Vec<Vec<usize>> {
        self.add
            .chunks(self.order)
            .map(|row| row.iter().map(|&x| x as usize).collect())
            .collect()
    }

    pub fn mul_table(&self) -> Vec<Vec<usize>> {
        self.mul
            .chunks(self.order)
            .map(|row| row.iter().map(|&x| x as usize).collect())
            .collect()
    }

    pub(crate) fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_mod(n: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let add = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a * b) % n).collect()).collect();
        (add, mul)
    }

    #[test]
    fn z2_and_z4_from_tables() {
        let (add, mul) = z_mod(2);
        let r = FiniteRing::from_tables("z2", 2, &add, &mul, 0, 1).unwrap();
        assert_eq!(r.order(), 2);
        let (add, mul) = z_mod(4);
        let r = FiniteRing::from_tables("z4", 4, &add, &mul, 0, 1).unwrap();
        assert_eq!((r.zero(), r.one()), (Elem(0), Elem(1)));
        assert_eq!(r.neg(Elem(1)), Elem(3));
        assert_eq!(r.sub(Elem(1), Elem(2)), Elem(3));
    }

    #[test]
    fn broken_associativity_is_reported() {
        // Z/3 with 2*2 changed from 1 to 2 keeps identities but breaks
        // distributivity or associativity somewhere; the scan must name a triple.
        let (add, mut mul) = z_mod(3);
        mul[2][2] = 2;
        let err = FiniteRing::from_tables("bad", 3, &add, &mul, 0, 1).unwrap_err();
        match err {
            Error::AxiomViolation { axiom, witness } => {
                assert_eq!(witness.len(), 3, "{axiom}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_associative_triple_is_the_first_in_scan_order() {
        // Oracle: rescan the broken table independently and locate the first
        // triple where (ab)c != a(bc).
        let (add, mut mul) = z_mod(3);
        mul[2][2] = 2;
        let mut first = None;
        'outer: for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let assoc = mul[mul[a][b]][c] == mul[a][mul[b][c]];
                    let ldist = mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]];
                    let rdist = mul[add[a][b]][c] == add[mul[a][c]][mul[b][c]];
                    if !(assoc && ldist && rdist) {
                        first = Some((vec![a, b, c], assoc));
                        break 'outer;
                    }
                }
            }
        }
        let (triple, assoc_ok) = first.unwrap();
        let err = FiniteRing::from_tables("bad", 3, &add, &mul, 0, 1).unwrap_err();
        let Error::AxiomViolation { axiom, witness } = err else {
            panic!()
        };
        assert_eq!(witness, triple);
        assert_eq!(axiom == "multiplicative associativity", !assoc_ok);
    }

    #[test]
    fn identity_checks() {
        let (add, mul) = z_mod(2);
        let err = FiniteRing::from_tables("z2", 2, &add, &mul, 0, 0).unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { .. }));
        let err = FiniteRing::from_tables("z2", 2, &add, &mul[..1], 0, 1).unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { .. }));
    }

    #[test]
    fn caps_parse() {
        let c = Caps::parse("subsets=8, construct=64").unwrap();
        assert_eq!(c.subsets, 8);
        assert_eq!(c.construct, 64);
        assert_eq!(c.ideals, 16);
        assert!(Caps::parse("bogus=1").is_err());
        assert!(Caps::parse("subsets").is_err());
    }
}
