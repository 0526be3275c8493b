//! Standard ring constructions with stable element indexing.
//!
//! * `zn(n)`: element `i` is the residue `i`.
//! * `direct_product(a, b)`: `(x, y)` has index `x + |A| * y` (first
//!   component varies fastest).
//! * `matrix(r, k)`: entries in row-major order, entry 0 least significant:
//!   index `sum_i e_i * |R|^i`.
//! * `upper_triangular(r, k)`: as `matrix`, over the entries `(i, j)` with
//!   `i <= j` in row-major order.

use super::{Caps, Elem, FiniteRing};
use crate::error::{Error, Result};

pub fn zn(n: usize) -> Result<FiniteRing> {
    zn_with_caps(n, &Caps::default())
}

pub fn zn_with_caps(n: usize, caps: &Caps) -> Result<FiniteRing> {
    if n < 2 {
        return Err(Error::Spec(format!("zn needs n >= 2, got {n}")));
    }
    Caps::check(caps.construct, n, "ring construction")?;
    let mut add = Vec::with_capacity(n * n);
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            add.push(((a + b) % n) as u32);
            mul.push(((a * b) % n) as u32);
        }
    }
    FiniteRing::from_flat(format!("zn:{n}"), n, add, mul, 0, 1)
}

/// The field with four elements, `c0 + c1*t` at index `c0 + 2*c1`, `t^2 = t + 1`.
pub fn gf4() -> Result<FiniteRing> {
    let mul_poly = |a: usize, b: usize| -> usize {
        // carry-less product, then reduce t^2 -> t + 1
        let mut p = 0usize;
        for i in 0..2 {
            if b >> i & 1 == 1 {
                p ^= a << i;
            }
        }
        if p & 0b100 != 0 {
            p ^= 0b111;
        }
        p
    };
    let mut add = Vec::with_capacity(16);
    let mut mul = Vec::with_capacity(16);
    for a in 0..4 {
        for b in 0..4 {
            add.push((a ^ b) as u32);
            mul.push(mul_poly(a, b) as u32);
        }
    }
    FiniteRing::from_flat("gf4".into(), 4, add, mul, 0, 1)
}

pub fn direct_product(a: &FiniteRing, b: &FiniteRing) -> Result<FiniteRing> {
    product_with_caps(a, b, &Caps::default())
}

pub fn product_with_caps(a: &FiniteRing, b: &FiniteRing, caps: &Caps) -> Result<FiniteRing> {
    let (na, nb) = (a.order(), b.order());
    let order = na
        .checked_mul(nb)
        .ok_or_else(|| cap_overflow(caps))?;
    Caps::check(caps.construct, order, "ring construction")?;
    let split = |i: usize| (Elem(i % na), Elem(i / na));
    let join = |x: Elem, y: Elem| (x.0 + na * y.0) as u32;
    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    for i in 0..order {
        let (x1, y1) = split(i);
        for j in 0..order {
            let (x2, y2) = split(j);
            add.push(join(a.add(x1, x2), b.add(y1, y2)));
            mul.push(join(a.mul(x1, x2), b.mul(y1, y2)));
        }
    }
    let zero = join(a.zero(), b.zero()) as usize;
    let one = join(a.one(), b.one()) as usize;
    let left = match a.label().strip_prefix("prod:") {
        Some(inner) => inner.to_string(),
        None => short(a.label()),
    };
    let label = format!("prod:{left},{}", short(b.label()));
    FiniteRing::from_flat(label, order, add, mul, zero, one)
}

pub fn matrix(r: &FiniteRing, k: usize) -> Result<FiniteRing> {
    matrix_with_caps(r, k, false, &Caps::default())
}

pub fn upper_triangular(r: &FiniteRing, k: usize) -> Result<FiniteRing> {
    matrix_with_caps(r, k, true, &Caps::default())
}

fn cap_overflow(caps: &Caps) -> Error {
    Error::SizeCapExceeded {
        what: "ring construction".into(),
        size: usize::MAX,
        cap: caps.construct,
    }
}

pub fn matrix_with_caps(r: &FiniteRing, k: usize, triangular: bool, caps: &Caps) -> Result<FiniteRing> {
    if !(2..=3).contains(&k) {
        return Err(Error::Spec(format!("matrix size must be 2 or 3, got {k}")));
    }
    let slots: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .filter(|&(i, j)| !triangular || i <= j)
        .collect();
    let base = r.order();
    let order = base
        .checked_pow(slots.len() as u32)
        .ok_or_else(|| cap_overflow(caps))?;
    Caps::check(caps.construct, order, "ring construction")?;

    let slot_of = |i: usize, j: usize| slots.iter().position(|&s| s == (i, j));
    let decode = |mut idx: usize| -> Vec<Elem> {
        slots
            .iter()
            .map(|_| {
                let d = idx % base;
                idx /= base;
                Elem(d)
            })
            .collect()
    };
    let encode = |entries: &[Elem]| -> u32 {
        entries.iter().rev().fold(0usize, |acc, e| acc * base + e.0) as u32
    };
    let elems: Vec<Vec<Elem>> = (0..order).map(decode).collect();
    let entry = |m: &[Elem], i: usize, j: usize| slot_of(i, j).map_or(r.zero(), |s| m[s]);

    let mut add = Vec::with_capacity(order * order);
    let mut mul = Vec::with_capacity(order * order);
    let mut buf = vec![r.zero(); slots.len()];
    for x in &elems {
        for y in &elems {
            for (s, out) in buf.iter_mut().enumerate() {
                *out = r.add(x[s], y[s]);
            }
            add.push(encode(&buf));
            for (s, &(i, j)) in slots.iter().enumerate() {
                let mut acc = r.zero();
                for l in 0..k {
                    acc = r.add(acc, r.mul(entry(x, i, l), entry(y, l, j)));
                }
                buf[s] = acc;
            }
            mul.push(encode(&buf));
        }
    }
    let zero = encode(&vec![r.zero(); slots.len()]) as usize;
    let ident: Vec<Elem> = slots
        .iter()
        .map(|&(i, j)| if i == j { r.one() } else { r.zero() })
        .collect();
    let one = encode(&ident) as usize;
    let prefix = if triangular { "ut" } else { "mat" };
    let label = format!("{prefix}{k}:{}", short(r.label()));
    FiniteRing::from_flat(label, order, add, mul, zero, one)
}

/// `zn:N` abbreviates to `zN` inside composite labels.
fn short(label: &str) -> String {
    match label.strip_prefix("zn:") {
        Some(n) => format!("z{n}"),
        None => label.to_string(),
    }
}

fn parse_simple(name: &str, caps: &Caps) -> Result<FiniteRing> {
    let bad = || Error::Spec(format!("unknown ring `{name}`"));
    if name == "gf4" {
        return gf4();
    }
    if let Some(n) = name.strip_prefix("zn:") {
        return zn_with_caps(n.parse().map_err(|_| bad())?, caps);
    }
    if let Some(n) = name.strip_prefix('z') {
        if let Ok(n) = n.parse() {
            return zn_with_caps(n, caps);
        }
    }
    for (prefix, triangular) in [("mat", false), ("ut", true)] {
        if let Some(rest) = name.strip_prefix(prefix) {
            let (k, base) = rest.split_once(':').ok_or_else(bad)?;
            let k: usize = k.parse().map_err(|_| bad())?;
            let base = parse_simple(base, caps)?;
            return matrix_with_caps(&base, k, triangular, caps);
        }
    }
    Err(bad())
}

/// Resolves a builtin name: `zn:N` (or `zN`), `gf4`, `prod:A,B[,C...]`,
/// `matK:A`, `utK:A`.
pub fn builtin(name: &str, caps: &Caps) -> Result<FiniteRing> {
    let name = name.trim();
    if let Some(rest) = name.strip_prefix("prod:") {
        let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
        if parts.len() < 2 {
            return Err(Error::Spec(format!("product `{name}` needs two components")));
        }
        let mut acc = parse_simple(parts[0], caps)?;
        for p in &parts[1..] {
            acc = product_with_caps(&acc, &parse_simple(p, caps)?, caps)?;
        }
        return Ok(acc);
    }
    parse_simple(name, caps)
}

pub const CATALOG: &[&str] = &[
    "zn:2",
    "zn:3",
    "zn:4",
    "zn:5",
    "zn:6",
    "zn:7",
    "zn:8",
    "zn:9",
    "gf4",
    "prod:z2,z2",
    "prod:z2,z3",
    "prod:z2,z4",
    "prod:z3,z3",
    "ut2:z2",
    "mat2:z2",
];

/// The default catalog; every member fits the default enumeration caps.
pub fn catalog(caps: &Caps) -> Result<Vec<FiniteRing>> {
    CATALOG.iter().map(|n| builtin(n, caps)).collect()
}
