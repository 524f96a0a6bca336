use std::fmt;
use std::str::FromStr;

use super::perm::{perm_from_cycles, PermList};
use super::table::{close_group, GroupTable};
use crate::error::{Error, Result};

/// The named families understood by [`named_group`].
///
/// `Dihedral(n)` is the symmetry group of the regular n-gon, of order `2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedGroup {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion,
}

impl NamedGroup {
    /// Canonical permutation generators for the family.
    pub fn generators(&self) -> Result<PermList> {
        match *self {
            NamedGroup::Cyclic(n) => {
                check_param(n, "C")?;
                let cycles = if n > 1 { vec![vec![(0..n).collect()]] } else { vec![] };
                PermList::from_cycles(n, &cycles)
            }
            NamedGroup::Dihedral(n) => {
                check_param(n, "D")?;
                match n {
                    1 => PermList::from_cycles(2, &[vec![vec![0, 1]]]),
                    2 => PermList::from_cycles(4, &[vec![vec![0, 1], vec![2, 3]], vec![vec![0, 2], vec![1, 3]]]),
                    _ => {
                        let rotation = vec![(0..n).collect::<Vec<_>>()];
                        let reflection: Vec<Vec<usize>> =
                            (1..n).filter(|&i| i < n - i).map(|i| vec![i, n - i]).collect();
                        PermList::from_cycles(n, &[rotation, reflection])
                    }
                }
            }
            NamedGroup::Symmetric(n) => {
                check_param(n, "S")?;
                if n < 2 {
                    return PermList::new(n, vec![]);
                }
                let mut gens = vec![vec![vec![0, 1]]];
                if n > 2 {
                    gens.insert(0, vec![(0..n).collect()]);
                }
                PermList::from_cycles(n, &gens)
            }
            NamedGroup::Alternating(n) => {
                check_param(n, "A")?;
                let gens: Vec<Vec<Vec<usize>>> = (2..n).map(|i| vec![vec![0, 1, i]]).collect();
                PermList::from_cycles(n, &gens)
            }
            NamedGroup::Quaternion => {
                // Right regular action of Q8 on its own elements.
                let right = |g: usize| (0..8).map(|x| quat_mul(x, g)).collect::<Vec<_>>();
                PermList::new(8, vec![right(QI), right(QJ)])
            }
        }
    }

    pub fn order(&self) -> u128 {
        match *self {
            NamedGroup::Cyclic(n) => n as u128,
            NamedGroup::Dihedral(n) => 2 * n as u128,
            NamedGroup::Symmetric(n) => (1..=n as u128).product(),
            NamedGroup::Alternating(n) => ((1..=n as u128).product::<u128>() / 2).max(1),
            NamedGroup::Quaternion => 8,
        }
    }
}

fn check_param(n: usize, family: &str) -> Result<()> {
    if n == 0 {
        Err(Error::UnknownFamily(format!("{family}0")))
    } else {
        Ok(())
    }
}

// Q8 elements as (unit, sign) packed into 0..8: unit in {1, i, j, k}, id = 2*unit + neg.
const QI: usize = 2;
const QJ: usize = 4;

fn quat_mul(a: usize, b: usize) -> usize {
    let (ua, sa) = (a / 2, a % 2);
    let (ub, sb) = (b / 2, b % 2);
    // unit product table: (unit, extra sign)
    let (u, s) = match (ua, ub) {
        (0, u) | (u, 0) => (u, 0),
        (x, y) if x == y => (0, 1),
        (1, 2) => (3, 0),
        (2, 3) => (1, 0),
        (3, 1) => (2, 0),
        (2, 1) => (3, 1),
        (3, 2) => (1, 1),
        (1, 3) => (2, 1),
        _ => unreachable!(),
    };
    2 * u + (sa + sb + s) % 2
}

impl fmt::Display for NamedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedGroup::Cyclic(n) => write!(f, "C{n}"),
            NamedGroup::Dihedral(n) => write!(f, "D{n}"),
            NamedGroup::Symmetric(n) => write!(f, "S{n}"),
            NamedGroup::Alternating(n) => write!(f, "A{n}"),
            NamedGroup::Quaternion => write!(f, "Q8"),
        }
    }
}

impl FromStr for NamedGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q8" {
            return Ok(NamedGroup::Quaternion);
        }
        let unknown = || Error::UnknownFamily(s.to_string());
        let mut chars = s.chars();
        let family = chars.next().ok_or_else(unknown)?;
        let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
        if n == 0 {
            return Err(unknown());
        }
        match family {
            'C' => Ok(NamedGroup::Cyclic(n)),
            'D' => Ok(NamedGroup::Dihedral(n)),
            'S' => Ok(NamedGroup::Symmetric(n)),
            'A' => Ok(NamedGroup::Alternating(n)),
            _ => Err(unknown()),
        }
    }
}

/// Materializes a named group, refusing anything above `max_order`.
pub fn named_group(spec: NamedGroup, max_order: usize) -> Result<GroupTable> {
    if spec.order() > max_order as u128 {
        return Err(Error::ClosureTooLarge { cap: max_order });
    }
    close_group(&spec.generators()?, max_order)
}

/// Permutation from 1-based cycle notation, used in docs and tests.
pub fn perm_from_one_based(degree: usize, cycles: &[&[usize]]) -> Result<Vec<usize>> {
    let cycles: Vec<Vec<usize>> = cycles
        .iter()
        .map(|c| c.iter().map(|&p| p.wrapping_sub(1)).collect())
        .collect();
    perm_from_cycles(degree, &cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_MAX_ORDER;

    fn build(s: &str) -> GroupTable {
        named_group(s.parse().unwrap(), DEFAULT_MAX_ORDER).unwrap()
    }

    fn order_census(g: &GroupTable) -> std::collections::BTreeMap<usize, usize> {
        let mut census = std::collections::BTreeMap::new();
        for x in g.elements() {
            *census.entry(g.element_order(x)).or_insert(0) += 1;
        }
        census
    }

    #[test]
    fn family_orders() {
        for (spec, order) in [
            ("C1", 1), ("C7", 7), ("D1", 2), ("D2", 4), ("D3", 6), ("D4", 8), ("D12", 24),
            ("S1", 1), ("S2", 2), ("S3", 6), ("S4", 24), ("S5", 120),
            ("A1", 1), ("A2", 1), ("A3", 3), ("A4", 12), ("A5", 60), ("Q8", 8),
        ] {
            let g = build(spec);
            assert_eq!(g.order(), order, "{spec}");
            assert_eq!(spec.parse::<NamedGroup>().unwrap().order(), order as u128);
            g.check_axioms().unwrap();
        }
    }

    #[test]
    fn quaternion_has_one_involution() {
        let census = order_census(&build("Q8"));
        assert_eq!(census.get(&2), Some(&1));
        assert_eq!(census.get(&4), Some(&6));
    }

    #[test]
    fn dihedral_small_cases() {
        assert!(build("D2").is_abelian());
        let census = order_census(&build("D2"));
        assert_eq!(census.get(&2), Some(&3));
        let census = order_census(&build("D4"));
        assert_eq!(census.get(&2), Some(&5));
    }

    #[test]
    fn rejects_unknown_and_oversized() {
        assert!("X3".parse::<NamedGroup>().is_err());
        assert!("C0".parse::<NamedGroup>().is_err());
        assert!("S".parse::<NamedGroup>().is_err());
        assert_eq!(
            named_group(NamedGroup::Symmetric(8), DEFAULT_MAX_ORDER).unwrap_err(),
            Error::ClosureTooLarge { cap: DEFAULT_MAX_ORDER }
        );
    }

    #[test]
    fn ordering_is_deterministic() {
        let a = build("S4");
        let b = build("S4");
        for x in a.elements() {
            assert_eq!(a.label(x), b.label(x));
            for y in a.elements() {
                assert_eq!(a.mul(x, y), b.mul(x, y));
            }
        }
    }
}
