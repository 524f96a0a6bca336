//! Text forms for groups and subgroups.
//!
//! Groups: `S<n>`, `A<n>`, `D<n>` (order 2n), `C<n>`, `Q8`, direct products
//! joined with `x` (`S3xC2`), or raw generators
//! `perm(<degree>): (1 2 3); (1 2)` in 1-based cycle notation, one generator
//! per `;`-separated item.
//!
//! Subgroups: `triv`, `full`, `center`, or `gen[<id>,<id>,...]` listing
//! element ids of the parent.

use super::named::{named_group, NamedGroup};
use super::perm::PermList;
use super::subgroup::{center, subgroup_closure, SubgroupRef};
use super::table::{close_group, direct_product, GroupTable};
use crate::error::{Error, Result};

pub fn parse_group_spec(spec: &str, max_order: usize) -> Result<GroupTable> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(Error::GroupSpec { spec: spec.into(), reason: "empty".into() });
    }
    if spec.starts_with("perm") {
        return parse_perm_spec(spec, max_order);
    }
    let factors: Vec<&str> = spec.split('x').map(str::trim).collect();
    let mut iter = factors.iter();
    let first = iter.next().expect("split yields at least one item");
    let mut acc = named_group(first.parse()?, max_order)?;
    for f in iter {
        let next = named_group(f.parse::<NamedGroup>()?, max_order)?;
        acc = direct_product(&acc, &next, max_order)?.table;
    }
    Ok(acc)
}

fn parse_perm_spec(spec: &str, max_order: usize) -> Result<GroupTable> {
    let bad = |reason: &str| Error::GroupSpec { spec: spec.into(), reason: reason.into() };
    let rest = spec.strip_prefix("perm").ok_or_else(|| bad("expected `perm`"))?.trim_start();
    let rest = rest.strip_prefix('(').ok_or_else(|| bad("expected `(` after perm"))?;
    let close = rest.find(')').ok_or_else(|| bad("unclosed degree"))?;
    let degree: usize = rest[..close].trim().parse().map_err(|_| bad("degree is not an integer"))?;
    if degree == 0 {
        return Err(bad("degree must be positive"));
    }
    let body = rest[close + 1..].trim_start();
    let body = body.strip_prefix(':').ok_or_else(|| bad("expected `:` after degree"))?;

    let mut gens = Vec::new();
    for item in body.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        gens.push(parse_cycles(item).map_err(|r| bad(&r))?);
    }
    let perms = PermList::from_cycles(degree, &gens)?;
    close_group(&perms, max_order)
}

/// `(1 2 3)(4 5)` → 0-based cycles.
fn parse_cycles(item: &str) -> std::result::Result<Vec<Vec<usize>>, String> {
    let mut cycles = Vec::new();
    let mut rest = item.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('(').ok_or_else(|| format!("expected `(` in `{item}`"))?;
        let end = inner.find(')').ok_or_else(|| format!("unclosed cycle in `{item}`"))?;
        let points = inner[..end]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| match s.parse::<usize>() {
                Ok(0) => Err("points are 1-based".to_string()),
                Ok(p) => Ok(p - 1),
                Err(_) => Err(format!("bad point `{s}`")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if points.len() > 1 {
            cycles.push(points);
        }
        rest = inner[end + 1..].trim_start();
    }
    Ok(cycles)
}

pub fn parse_subgroup_spec(spec: &str, g: &GroupTable) -> Result<SubgroupRef> {
    let spec = spec.trim();
    match spec {
        "triv" => Ok(SubgroupRef::trivial(g)),
        "full" => Ok(SubgroupRef::full(g)),
        "center" => Ok(center(g)),
        _ => {
            let bad = |reason: String| Error::SubgroupSpec { spec: spec.into(), reason };
            let inner = spec
                .strip_prefix("gen[")
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| bad("expected triv, full, center or gen[...]".into()))?;
            let ids = inner
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| bad(format!("bad element id `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            subgroup_closure(g, &ids)
        }
    }
}

/// Canonical text for a subgroup, parseable by [`parse_subgroup_spec`].
pub fn subgroup_spec(g: &GroupTable, h: &SubgroupRef) -> String {
    if h.order() == g.order() {
        "full".into()
    } else if h.is_trivial() {
        "triv".into()
    } else {
        let ids: Vec<String> = h.generators(g).iter().map(ToString::to_string).collect();
        format!("gen[{}]", ids.join(","))
    }
}
