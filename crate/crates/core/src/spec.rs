//! TOML ring and monoid spec files.
//!
//! ```toml
//! [ring]
//! kind = "tables"          # zn | product | matrix | upper_triangular | tables
//! label = "f2"
//! order = 2
//! add = ["0 1", "1 0"]     # one whitespace-separated row per element
//! mul = ["0 0", "0 1"]
//! zero = 0
//! one = 1
//!
//! [monoid]                 # optional
//! kind = "nat"             # nat | natk | int
//! order = "natural"
//! ```

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::monoid::{MonoidKind, OrderedMonoid};
use crate::ring::{builtin, matrix_with_caps, product_with_caps, zn_with_caps, Caps, FiniteRing};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    ring: RingSpec,
    monoid: Option<MonoidSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RingSpec {
    Zn {
        n: usize,
        label: Option<String>,
    },
    Product {
        components: Vec<String>,
        label: Option<String>,
    },
    Matrix {
        base: String,
        size: usize,
        label: Option<String>,
    },
    UpperTriangular {
        base: String,
        size: usize,
        label: Option<String>,
    },
    Tables {
        order: usize,
        add: Vec<String>,
        mul: Vec<String>,
        zero: usize,
        one: usize,
        label: Option<String>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonoidSpec {
    kind: String,
    k: Option<usize>,
    order: String,
}

/// A parsed spec file.
#[derive(Debug)]
pub struct Spec {
    pub ring: FiniteRing,
    pub monoid: Option<OrderedMonoid>,
}

fn parse_rows(name: &str, rows: &[String], order: usize) -> Result<Vec<Vec<usize>>> {
    if rows.len() != order {
        return Err(Error::Spec(format!("`{name}` has {} rows, expected {order}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let cells = row
                .split_whitespace()
                .map(|c| {
                    c.parse::<usize>()
                        .map_err(|_| Error::Spec(format!("`{name}` row {i}: bad entry `{c}`")))
                })
                .collect::<Result<Vec<usize>>>()?;
            if cells.len() != order {
                return Err(Error::Spec(format!(
                    "`{name}` row {i} has {} entries, expected {order}",
                    cells.len()
                )));
            }
            Ok(cells)
        })
        .collect()
}

fn relabel(ring: FiniteRing, label: Option<String>) -> FiniteRing {
    match label {
        Some(l) => ring.with_label(l),
        None => ring,
    }
}

fn build_ring(spec: RingSpec, caps: &Caps) -> Result<FiniteRing> {
    Ok(match spec {
        RingSpec::Zn { n, label } => relabel(zn_with_caps(n, caps)?, label),
        RingSpec::Product { components, label } => {
            if components.len() < 2 {
                return Err(Error::Spec("a product needs at least two components".into()));
            }
            let mut acc = builtin(&components[0], caps)?;
            for c in &components[1..] {
                acc = product_with_caps(&acc, &builtin(c, caps)?, caps)?;
            }
            relabel(acc, label)
        }
        RingSpec::Matrix { base, size, label } => {
            relabel(matrix_with_caps(&builtin(&base, caps)?, size, false, caps)?, label)
        }
        RingSpec::UpperTriangular { base, size, label } => {
            relabel(matrix_with_caps(&builtin(&base, caps)?, size, true, caps)?, label)
        }
        RingSpec::Tables {
            order,
            add,
            mul,
            zero,
            one,
            label,
        } => {
            crate::ring::Caps::check(caps.construct, order, "ring construction")?;
            let add = parse_rows("add", &add, order)?;
            let mul = parse_rows("mul", &mul, order)?;
            FiniteRing::from_tables(label.unwrap_or_else(|| "tables".into()), order, &add, &mul, zero, one)?
        }
    })
}

fn build_monoid(spec: MonoidSpec) -> Result<OrderedMonoid> {
    let kind = match (spec.kind.as_str(), spec.k) {
        ("nat", None) => MonoidKind::Nat,
        ("int", None) => MonoidKind::Int,
        ("natk", Some(k)) => MonoidKind::NatK(k),
        ("natk", None) => return Err(Error::Spec("monoid kind `natk` needs `k`".into())),
        ("nat" | "int", Some(_)) => {
            return Err(Error::Spec(format!("monoid kind `{}` takes no `k`", spec.kind)))
        }
        (other, _) => {
            return Err(Error::Spec(format!(
                "unknown monoid kind `{other}`; expected nat, natk or int"
            )))
        }
    };
    OrderedMonoid::new(kind, crate::monoid::parse_order(&spec.order)?)
}

impl Spec {
    pub fn parse(text: &str, caps: &Caps) -> Result<Spec> {
        let file: SpecFile = toml::from_str(text).map_err(|e| Error::Spec(e.to_string()))?;
        Ok(Spec {
            ring: build_ring(file.ring, caps)?,
            monoid: file.monoid.map(build_monoid).transpose()?,
        })
    }

    pub fn load(path: &std::path::Path, caps: &Caps) -> Result<Spec> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Spec(format!("{}: {e}", path.display())))?;
        Spec::parse(&text, caps)
    }
}
