use serde::Serialize;

use super::{Caps, Elem, FiniteRing, RingSubset};
use crate::certificate::{PropertyCertificate, Witness};
use crate::error::{Error, Result};

/// A unital ring endomorphism, stored as its image table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RingEndomorphism {
    image: Vec<u32>,
}

impl RingEndomorphism {
    /// Validates additivity, multiplicativity and `sigma(1) = 1` over all pairs.
    pub fn new(ring: &FiniteRing, image: Vec<usize>) -> Result<RingEndomorphism> {
        if image.len() != ring.order() {
            return Err(Error::NotEndomorphism(format!(
                "image has length {}, ring has order {}",
                image.len(),
                ring.order()
            )));
        }
        for &y in &image {
            ring.check_elem(Elem(y))?;
        }
        let sigma = RingEndomorphism {
            image: image.into_iter().map(|y| y as u32).collect(),
        };
        if let Some(msg) = sigma.first_violation(ring) {
            return Err(Error::NotEndomorphism(msg));
        }
        Ok(sigma)
    }

    pub fn identity(ring: &FiniteRing) -> RingEndomorphism {
        RingEndomorphism {
            image: (0..ring.order() as u32).collect(),
        }
    }

    fn first_violation(&self, ring: &FiniteRing) -> Option<String> {
        if self.apply(ring.one()) != ring.one() {
            return Some("sigma(1) != 1".into());
        }
        for a in ring.elements() {
            for b in ring.elements() {
                if self.apply(ring.add(a, b)) != ring.add(self.apply(a), self.apply(b)) {
                    return Some(format!("not additive at ({a}, {b})"));
                }
                if self.apply(ring.mul(a, b)) != ring.mul(self.apply(a), self.apply(b)) {
                    return Some(format!("not multiplicative at ({a}, {b})"));
                }
            }
        }
        None
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        Elem(self.image[x.0] as usize)
    }

    pub fn image(&self) -> Vec<usize> {
        self.image.iter().map(|&y| y as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &y)| i == y as usize)
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.image.len()];
        self.image.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RingEndomorphism) -> RingEndomorphism {
        RingEndomorphism {
            image: other.image.iter().map(|&y| self.image[y as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Option<RingEndomorphism> {
        if !self.is_bijective() {
            return None;
        }
        let mut image = vec![0u32; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y as usize] = x as u32;
        }
        Some(RingEndomorphism { image })
    }
}

/// Greedy additive generating set beginning with `1`.
fn additive_generators(ring: &FiniteRing) -> Vec<Elem> {
    let mut span = RingSubset::from_elems(ring.order(), [ring.zero()]);
    let mut gens = Vec::new();
    let candidates = std::iter::once(ring.one()).chain(ring.elements());
    for g in candidates {
        if span.contains(g) {
            continue;
        }
        gens.push(g);
        // span + <g>: keep translating by g until nothing new appears.
        loop {
            let before = span.len();
            let members: Vec<Elem> = span.iter().collect();
            for m in members {
                span.insert(ring.add(m, g));
            }
            if span.len() == before {
                break;
            }
        }
    }
    gens
}

/// Partial additive map, extended generator by generator.
struct PartialMap {
    image: Vec<Option<Elem>>,
}

impl PartialMap {
    /// Extends the map to `domain + <g>` with `g -> y`; `None` on inconsistency
    /// or a multiplicative conflict inside the new domain.
    fn extend(&self, ring: &FiniteRing, g: Elem, y: Elem) -> Option<PartialMap> {
        let mut image = self.image.clone();
        let mut queue: Vec<Elem> = ring.elements().filter(|&x| image[x.0].is_some()).collect();
        let assign = |image: &mut Vec<Option<Elem>>, x: Elem, v: Elem, queue: &mut Vec<Elem>| {
            match image[x.0] {
                Some(w) => w == v,
                None => {
                    image[x.0] = Some(v);
                    queue.push(x);
                    true
                }
            }
        };
        if !assign(&mut image, g, y, &mut queue) {
            return None;
        }
        while let Some(x) = queue.pop() {
            let vx = image[x.0].unwrap();
            let known: Vec<Elem> = ring.elements().filter(|&z| image[z.0].is_some()).collect();
            for z in known {
                let vz = image[z.0].unwrap();
                if !assign(&mut image, ring.add(x, z), ring.add(vx, vz), &mut queue) {
                    return None;
                }
            }
        }
        let known: Vec<Elem> = ring.elements().filter(|&z| image[z.0].is_some()).collect();
        for &a in &known {
            for &b in &known {
                if let Some(v) = image[ring.mul(a, b).0] {
                    if v != ring.mul(image[a.0].unwrap(), image[b.0].unwrap()) {
                        return None;
                    }
                }
            }
        }
        Some(PartialMap { image })
    }
}

/// All unital endomorphisms, identity first, the rest ascending by image table.
pub fn enumerate_endomorphisms(ring: &FiniteRing, caps: &Caps) -> Result<Vec<RingEndomorphism>> {
    Caps::check(caps.endomorphisms, ring.order(), "endomorphism search")?;
    let gens = additive_generators(ring);
    let mut start = PartialMap {
        image: vec![None; ring.order()],
    };
    start.image[ring.zero().0] = Some(ring.zero());
    let mut found = Vec::new();
    search(ring, &gens, 0, start, &mut found);
    let mut endos: Vec<RingEndomorphism> = found
        .into_iter()
        .filter_map(|img| RingEndomorphism::new(ring, img).ok())
        .collect();
    endos.sort();
    endos.dedup();
    let id = RingEndomorphism::identity(ring);
    let pos = endos
        .iter()
        .position(|s| *s == id)
        .ok_or_else(|| Error::InvariantViolation("identity missing from endomorphisms".into()))?;
    let id = endos.remove(pos);
    endos.insert(0, id);
    Ok(endos)
}

fn search(
    ring: &FiniteRing,
    gens: &[Elem],
    depth: usize,
    map: PartialMap,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(&g) = gens.get(depth) else {
        if map.image.iter().all(Option::is_some) {
            out.push(map.image.iter().map(|v| v.unwrap().0).collect());
        }
        return;
    };
    if g == ring.one() {
        if let Some(next) = map.extend(ring, g, ring.one()) {
            search(ring, gens, depth + 1, next, out);
        }
        return;
    }
    for y in ring.elements() {
        if let Some(next) = map.extend(ring, g, y) {
            search(ring, gens, depth + 1, next, out);
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndoProperty {
    /// `ab = 0` iff `a sigma(b) = 0`.
    Compatible,
    /// `a sigma(a) = 0` only for `a = 0`.
    Rigid,
}

pub fn endo_property(
    ring: &FiniteRing,
    sigma: &RingEndomorphism,
    which: EndoProperty,
) -> PropertyCertificate {
    match which {
        EndoProperty::Compatible => {
            for a in ring.elements() {
                for b in ring.elements() {
                    let plain = ring.is_zero(ring.mul(a, b));
                    let twisted = ring.is_zero(ring.mul(a, sigma.apply(b)));
                    if plain != twisted {
                        return PropertyCertificate::no(
                            "compatible",
                            Witness::Elements(vec![a, b]),
                            format!("a={a}, b={b}: ab=0 is {plain}, a*sigma(b)=0 is {twisted}"),
                        );
                    }
                }
            }
            PropertyCertificate::yes("compatible", "ab=0 <=> a*sigma(b)=0 on all pairs")
        }
        EndoProperty::Rigid => {
            match ring
                .elements()
                .find(|&a| !ring.is_zero(a) && ring.is_zero(ring.mul(a, sigma.apply(a))))
            {
                Some(a) => PropertyCertificate::no(
                    "rigid",
                    Witness::Elements(vec![a]),
                    format!("a={a} is nonzero with a*sigma(a)=0"),
                ),
                None => PropertyCertificate::yes("rigid", "a*sigma(a)=0 only for a=0"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::Verdict;
    use crate::ring::{catalog, direct_product, zn};

    /// Oracle: every unital map, checked pointwise. Only feasible for tiny rings.
    fn brute_endomorphisms(ring: &FiniteRing) -> Vec<Vec<usize>> {
        let n = ring.order();
        let total = n.pow(n as u32);
        (0..total)
            .filter_map(|mut code| {
                let img: Vec<usize> = (0..n)
                    .map(|_| {
                        let d = code % n;
                        code /= n;
                        d
                    })
                    .collect();
                RingEndomorphism::new(ring, img.clone()).ok().map(|_| img)
            })
            .collect()
    }

    #[test]
    fn z4_has_only_identity() {
        let z4 = zn(4).unwrap();
        let endos = enumerate_endomorphisms(&z4, &Caps::default()).unwrap();
        assert_eq!(endos.len(), 1);
        assert!(endos[0].is_identity());
    }

    #[test]
    fn z2_squared_has_identity_and_swap() {
        let r = direct_product(&zn(2).unwrap(), &zn(2).unwrap()).unwrap();
        let endos = enumerate_endomorphisms(&r, &Caps::default()).unwrap();
        assert!(endos[0].is_identity());
        // indices: (0,0)=0, (1,0)=1, (0,1)=2, (1,1)=3
        let swap = RingEndomorphism::new(&r, vec![0, 2, 1, 3]).unwrap();
        assert!(endos.contains(&swap));
        let mut brute = brute_endomorphisms(&r);
        brute.sort();
        let mut got: Vec<Vec<usize>> = endos.iter().map(|s| s.image()).collect();
        got.sort();
        assert_eq!(got, brute);
    }

    #[test]
    fn backtracking_matches_brute_force_on_small_catalog() {
        for ring in catalog(&Caps::default()).unwrap() {
            if ring.order() > 6 {
                continue;
            }
            let mut got: Vec<Vec<usize>> = enumerate_endomorphisms(&ring, &Caps::default())
                .unwrap()
                .iter()
                .map(|s| s.image())
                .collect();
            got.sort();
            let mut brute = brute_endomorphisms(&ring);
            brute.sort();
            assert_eq!(got, brute, "{}", ring.label());
        }
    }

    #[test]
    fn rejects_non_homomorphisms() {
        let z4 = zn(4).unwrap();
        assert!(RingEndomorphism::new(&z4, vec![0, 3, 2, 1]).is_err());
        assert!(RingEndomorphism::new(&z4, vec![0, 1, 2]).is_err());
        assert!(RingEndomorphism::new(&z4, vec![0, 1, 2, 9]).is_err());
    }

    #[test]
    fn compatibility_and_rigidity() {
        let z4 = zn(4).unwrap();
        let id = RingEndomorphism::identity(&z4);
        let c = endo_property(&z4, &id, EndoProperty::Rigid);
        assert_eq!(c.verdict, Verdict::No);
        assert_eq!(c.witness, Some(Witness::Elements(vec![Elem(2)])));
        assert_eq!(
            endo_property(&z4, &id, EndoProperty::Compatible).verdict,
            Verdict::Yes
        );

        let r = direct_product(&zn(2).unwrap(), &zn(2).unwrap()).unwrap();
        let swap = RingEndomorphism::new(&r, vec![0, 2, 1, 3]).unwrap();
        let c = endo_property(&r, &swap, EndoProperty::Compatible);
        assert_eq!(c.verdict, Verdict::No);
        assert_eq!(c.witness, Some(Witness::Elements(vec![Elem(1), Elem(1)])));
    }

    #[test]
    fn compatible_endomorphisms_compose() {
        let caps = Caps::default();
        for ring in catalog(&caps).unwrap() {
            let endos = enumerate_endomorphisms(&ring, &caps).unwrap();
            let compatible: Vec<&RingEndomorphism> = endos
                .iter()
                .filter(|s| endo_property(&ring, s, EndoProperty::Compatible).verdict == Verdict::Yes)
                .collect();
            for s in &compatible {
                for t in &compatible {
                    let st = s.compose(t);
                    assert_eq!(
                        endo_property(&ring, &st, EndoProperty::Compatible).verdict,
                        Verdict::Yes,
                        "{}",
                        ring.label()
                    );
                }
            }
        }
    }

    #[test]
    fn inverse_of_swap() {
        let r = direct_product(&zn(2).unwrap(), &zn(2).unwrap()).unwrap();
        let swap = RingEndomorphism::new(&r, vec![0, 2, 1, 3]).unwrap();
        let inv = swap.inverse().unwrap();
        assert!(swap.compose(&inv).is_identity());
    }
}
