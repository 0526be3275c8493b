use std::collections::HashSet;

use serde::Serialize;

use super::{Caps, Elem, FiniteRing, RingSubset};
use crate::certificate::{PropertyCertificate, Verdict, Witness};
use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Right,
    Left,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Right => "right",
            Side::Left => "left",
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealSide {
    Right,
    Left,
    TwoSided,
}

impl From<Side> for IdealSide {
    fn from(s: Side) -> Self {
        match s {
            Side::Right => IdealSide::Right,
            Side::Left => IdealSide::Left,
        }
    }
}

impl FiniteRing {
    /// All `e` with `e * e = e`, ascending.
    pub fn idempotents(&self) -> &[Elem] {
        self.idempotents.get_or_init(|| {
            self.elements()
                .filter(|&e| self.mul(e, e) == e)
                .collect()
        })
    }

    /// `eR` (right) or `Re` (left) for an arbitrary element.
    pub fn principal(&self, e: Elem, side: Side) -> RingSubset {
        RingSubset::from_elems(
            self.order(),
            self.elements().map(|r| match side {
                Side::Right => self.mul(e, r),
                Side::Left => self.mul(r, e),
            }),
        )
    }

    fn principal_idempotent_ideals(&self, side: Side) -> &[RingSubset] {
        let (right, left) = self.principal.get_or_init(|| {
            let ids = self.idempotents();
            (
                ids.iter().map(|&e| self.principal(e, Side::Right)).collect(),
                ids.iter().map(|&e| self.principal(e, Side::Left)).collect(),
            )
        });
        match side {
            Side::Right => right,
            Side::Left => left,
        }
    }

    pub fn subset(&self, elems: &[usize]) -> Result<RingSubset> {
        for &e in elems {
            self.check_elem(Elem(e))?;
        }
        Ok(RingSubset::from_elems(
            self.order(),
            elems.iter().copied().map(Elem),
        ))
    }

    pub fn full_subset(&self) -> RingSubset {
        RingSubset::full(self.order())
    }

    /// Right: `{a : xa = 0 for all x in X}`. Left: `{a : ax = 0 for all x in X}`.
    pub fn annihilator(&self, x: &RingSubset, side: Side) -> Result<RingSubset> {
        if x.is_empty() {
            return Err(Error::EmptySubset);
        }
        let ann = self.annihilator_unchecked(x, side);
        debug_assert!(self.is_ideal(&ann, side.into()));
        Ok(ann)
    }

    pub(crate) fn annihilator_unchecked(&self, x: &RingSubset, side: Side) -> RingSubset {
        let members: Vec<Elem> = x.iter().collect();
        RingSubset::from_elems(
            self.order(),
            self.elements().filter(|&a| {
                members.iter().all(|&m| {
                    let p = match side {
                        Side::Right => self.mul(m, a),
                        Side::Left => self.mul(a, m),
                    };
                    self.is_zero(p)
                })
            }),
        )
    }

    /// `{ab : a in A, b in B}`.
    pub fn product_set(&self, a: &RingSubset, b: &RingSubset) -> RingSubset {
        let mut out = RingSubset::empty(self.order());
        let right: Vec<Elem> = b.iter().collect();
        for x in a.iter() {
            for &y in &right {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    /// The set of all n-fold products `x1 x2 ... xn` with every `xi` in `X`.
    pub fn subset_power(&self, x: &RingSubset, n: usize) -> Result<RingSubset> {
        if x.is_empty() {
            return Err(Error::EmptySubset);
        }
        if n == 0 {
            return Err(Error::NonpositiveExponent);
        }
        let mut p = x.clone();
        for _ in 1..n {
            p = self.product_set(&p, x);
        }
        Ok(p)
    }

    /// Smallest ideal of the given sidedness containing `X`, by closure iteration.
    pub fn ideal_generated(&self, x: &RingSubset, side: IdealSide) -> RingSubset {
        let mut ideal = RingSubset::empty(self.order());
        ideal.insert(self.zero());
        let mut pending: Vec<Elem> = vec![self.zero()];
        for e in x.iter() {
            if ideal.insert(e) {
                pending.push(e);
            }
        }
        while let Some(a) = pending.pop() {
            let mut fresh = Vec::new();
            for m in ideal.iter() {
                fresh.push(self.add(a, m));
            }
            for r in self.elements() {
                if side != IdealSide::Left {
                    fresh.push(self.mul(a, r));
                }
                if side != IdealSide::Right {
                    fresh.push(self.mul(r, a));
                }
            }
            for f in fresh {
                if ideal.insert(f) {
                    pending.push(f);
                }
            }
        }
        ideal
    }

    pub fn is_ideal(&self, t: &RingSubset, side: IdealSide) -> bool {
        if !t.contains(self.zero()) {
            return false;
        }
        let members: Vec<Elem> = t.iter().collect();
        members.iter().all(|&a| {
            members.iter().all(|&b| t.contains(self.add(a, b)))
                && self.elements().all(|r| {
                    (side == IdealSide::Left || t.contains(self.mul(a, r)))
                        && (side == IdealSide::Right || t.contains(self.mul(r, a)))
                })
        })
    }

    /// Every ideal of the given sidedness, ascending by size then members.
    ///
    /// Ideals are reached from `{0}` by repeatedly adjoining one element and
    /// closing; every ideal is the limit of such a chain, so the search is
    /// exhaustive.
    pub fn enumerate_ideals(&self, side: IdealSide, caps: &Caps) -> Result<Vec<RingSubset>> {
        Caps::check(caps.ideals, self.order(), "ideal enumeration")?;
        let zero = RingSubset::from_elems(self.order(), [self.zero()]);
        let mut seen: HashSet<RingSubset> = HashSet::new();
        let mut frontier = vec![zero.clone()];
        seen.insert(zero);
        while let Some(ideal) = frontier.pop() {
            for x in self.elements().filter(|&x| !ideal.contains(x)) {
                let mut gens = ideal.clone();
                gens.insert(x);
                let bigger = self.ideal_generated(&gens, side);
                if seen.insert(bigger.clone()) {
                    frontier.push(bigger);
                }
            }
        }
        let mut all: Vec<RingSubset> = seen.into_iter().collect();
        all.sort();
        Ok(all)
    }

    /// Smallest-index idempotent `e` with `T = eR` (right) or `T = Re` (left).
    pub fn idempotent_generator_of(&self, t: &RingSubset, side: Side) -> Option<Elem> {
        self.idempotents()
            .iter()
            .zip(self.principal_idempotent_ideals(side))
            .find(|(_, p)| *p == t)
            .map(|(&e, _)| e)
    }

    pub fn is_reduced(&self) -> PropertyCertificate {
        match self
            .elements()
            .find(|&a| !self.is_zero(a) && self.is_zero(self.mul(a, a)))
        {
            Some(a) => PropertyCertificate::no(
                "reduced",
                Witness::Elements(vec![a]),
                format!("{a}^2 = 0 with {a} != 0"),
            ),
            None => PropertyCertificate {
                property: "reduced".into(),
                verdict: Verdict::Yes,
                exponent: None,
                idempotent: None,
                witness: None,
                notes: "no nonzero element squares to zero".into(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{direct_product, matrix, upper_triangular, zn};

    fn set(r: &FiniteRing, xs: &[usize]) -> RingSubset {
        r.subset(xs).unwrap()
    }

    #[test]
    fn idempotents_of_z4_and_z6() {
        let z4 = zn(4).unwrap();
        assert_eq!(z4.idempotents(), &[Elem(0), Elem(1)]);
        let z6 = zn(6).unwrap();
        let ids: Vec<usize> = z6.idempotents().iter().map(|e| e.0).collect();
        assert_eq!(ids, vec![0, 1, 3, 4]);
    }

    #[test]
    fn annihilators_in_z4() {
        let z4 = zn(4).unwrap();
        let r = z4.annihilator(&set(&z4, &[2]), Side::Right).unwrap();
        assert_eq!(r.members(), vec![0, 2]);
        let r = z4.annihilator(&set(&z4, &[0]), Side::Right).unwrap();
        assert_eq!(r, z4.full_subset());
        let r = z4.annihilator(&set(&z4, &[1]), Side::Right).unwrap();
        assert_eq!(r.members(), vec![0]);
        assert_eq!(
            z4.annihilator(&RingSubset::empty(4), Side::Left),
            Err(Error::EmptySubset)
        );
    }

    #[test]
    fn left_and_right_annihilators_differ_in_triangular_ring() {
        let t = upper_triangular(&zn(2).unwrap(), 2).unwrap();
        let differs = (1u64..(1 << t.order())).any(|m| {
            let x = RingSubset::from_mask(t.order(), m);
            t.annihilator(&x, Side::Right).unwrap() != t.annihilator(&x, Side::Left).unwrap()
        });
        assert!(differs);
    }

    #[test]
    fn subset_powers_in_z4() {
        let z4 = zn(4).unwrap();
        assert_eq!(z4.subset_power(&set(&z4, &[2]), 2).unwrap().members(), vec![0]);
        // 2*2=0, 2*3=2, 3*2=2, 3*3=1
        assert_eq!(
            z4.subset_power(&set(&z4, &[2, 3]), 2).unwrap().members(),
            vec![0, 1, 2]
        );
        let x = set(&z4, &[2, 3]);
        assert_eq!(z4.subset_power(&x, 1).unwrap(), x);
        assert_eq!(z4.subset_power(&x, 0), Err(Error::NonpositiveExponent));
        assert_eq!(
            z4.subset_power(&RingSubset::empty(4), 2),
            Err(Error::EmptySubset)
        );
    }

    #[test]
    fn generated_ideals() {
        let z4 = zn(4).unwrap();
        assert_eq!(
            z4.ideal_generated(&set(&z4, &[2]), IdealSide::Right).members(),
            vec![0, 2]
        );
        assert_eq!(
            z4.ideal_generated(&set(&z4, &[1]), IdealSide::Right),
            z4.full_subset()
        );
    }

    #[test]
    fn ideal_of_power_matches_span_of_products() {
        // Oracle: additive span of all n-fold products of members of I,
        // built by brute-force tuple expansion and repeated pairwise sums.
        let r = upper_triangular(&zn(2).unwrap(), 2).unwrap();
        for ideal in r.enumerate_ideals(IdealSide::Right, &Caps::default()).unwrap() {
            for n in 1..=3 {
                let members: Vec<Elem> = ideal.iter().collect();
                let mut products = vec![r.one()];
                for _ in 0..n {
                    products = products
                        .iter()
                        .flat_map(|&p| members.iter().map(move |&m| (p, m)))
                        .map(|(p, m)| r.mul(p, m))
                        .collect();
                }
                let mut span: HashSet<Elem> = products.iter().copied().collect();
                span.insert(r.zero());
                loop {
                    let before = span.len();
                    let snapshot: Vec<Elem> = span.iter().copied().collect();
                    for &a in &snapshot {
                        for &b in &snapshot {
                            span.insert(r.add(a, b));
                        }
                    }
                    if span.len() == before {
                        break;
                    }
                }
                let power = r.subset_power(&ideal, n).unwrap();
                let closed = r.ideal_generated(&power, IdealSide::TwoSided);
                let span = RingSubset::from_elems(r.order(), span);
                // The span of products of a right ideal is a right ideal;
                // its two-sided closure may be larger, so compare right closures.
                assert_eq!(r.ideal_generated(&power, IdealSide::Right), span);
                assert!(span.is_subset(&closed));
            }
        }
    }

    #[test]
    fn ideals_of_z4_and_z6() {
        let caps = Caps::default();
        let z4 = zn(4).unwrap();
        let ideals: Vec<Vec<usize>> = z4
            .enumerate_ideals(IdealSide::Right, &caps)
            .unwrap()
            .iter()
            .map(|i| i.members())
            .collect();
        assert_eq!(ideals, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
        let z6 = zn(6).unwrap();
        let ideals: Vec<Vec<usize>> = z6
            .enumerate_ideals(IdealSide::Right, &caps)
            .unwrap()
            .iter()
            .map(|i| i.members())
            .collect();
        assert_eq!(
            ideals,
            vec![vec![0], vec![0, 3], vec![0, 2, 4], vec![0, 1, 2, 3, 4, 5]]
        );
    }

    #[test]
    fn ideal_enumeration_matches_filtering_all_subsets() {
        let caps = Caps::default();
        for r in [
            direct_product(&zn(2).unwrap(), &zn(2).unwrap()).unwrap(),
            upper_triangular(&zn(2).unwrap(), 2).unwrap(),
            zn(8).unwrap(),
        ] {
            for side in [IdealSide::Right, IdealSide::Left, IdealSide::TwoSided] {
                let mut brute: Vec<RingSubset> = (1u64..(1 << r.order()))
                    .map(|m| RingSubset::from_mask(r.order(), m))
                    .filter(|s| r.is_ideal(s, side))
                    .collect();
                brute.sort();
                assert_eq!(r.enumerate_ideals(side, &caps).unwrap(), brute);
            }
        }
    }

    #[test]
    fn ideal_enumeration_respects_cap() {
        let m = matrix(&zn(2).unwrap(), 2).unwrap();
        let caps = Caps {
            ideals: 8,
            ..Caps::default()
        };
        assert!(matches!(
            m.enumerate_ideals(IdealSide::Right, &caps),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn idempotent_generators() {
        let z4 = zn(4).unwrap();
        assert_eq!(z4.idempotent_generator_of(&set(&z4, &[0, 2]), Side::Right), None);
        assert_eq!(
            z4.idempotent_generator_of(&z4.full_subset(), Side::Right),
            Some(Elem(1))
        );
        let z6 = zn(6).unwrap();
        assert_eq!(
            z6.idempotent_generator_of(&set(&z6, &[0, 3]), Side::Right),
            Some(Elem(3))
        );
    }

    #[test]
    fn reducedness() {
        assert_eq!(zn(6).unwrap().is_reduced().verdict, Verdict::Yes);
        assert_eq!(zn(7).unwrap().is_reduced().verdict, Verdict::Yes);
        let c = zn(4).unwrap().is_reduced();
        assert_eq!(c.verdict, Verdict::No);
        assert_eq!(c.witness, Some(Witness::Elements(vec![Elem(2)])));
    }

    #[test]
    fn right_annihilator_sees_only_generated_left_ideal() {
        let caps = Caps::default();
        for r in crate::ring::catalog(&caps).unwrap() {
            if r.order() > 8 {
                continue;
            }
            for m in 1u64..(1 << r.order()) {
                let x = RingSubset::from_mask(r.order(), m);
                let left = r.ideal_generated(&x, IdealSide::Left);
                assert_eq!(
                    r.annihilator(&x, Side::Right).unwrap(),
                    r.annihilator(&left, Side::Right).unwrap(),
                    "{} {x}",
                    r.label()
                );
            }
        }
    }

    #[test]
    fn powers_split_into_products() {
        let r = upper_triangular(&zn(2).unwrap(), 2).unwrap();
        for mask in 1u64..(1 << r.order()) {
            let x = RingSubset::from_mask(r.order(), mask);
            for m in 1..=2 {
                for n in 1..=2 {
                    let lhs = r.subset_power(&x, m + n).unwrap();
                    let rhs = r.product_set(
                        &r.subset_power(&x, m).unwrap(),
                        &r.subset_power(&x, n).unwrap(),
                    );
                    assert!(lhs.is_subset(&rhs));
                }
            }
        }
    }
}
