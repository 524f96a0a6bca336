use std::collections::BTreeSet;
use std::sync::OnceLock;

use super::table::{ElemId, GroupTable};
use crate::error::{Error, Result};

/// A subgroup of a materialized group, stored by membership.
#[derive(Debug, Clone)]
pub struct SubgroupRef {
    parent: u64,
    members: Vec<ElemId>,
    mask: Vec<bool>,
    normal: OnceLock<bool>,
}

impl PartialEq for SubgroupRef {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}

impl Eq for SubgroupRef {}

impl SubgroupRef {
    /// Caller guarantees `members` is a sorted subgroup of `g`.
    pub(crate) fn from_sorted_unchecked(g: &GroupTable, members: Vec<ElemId>) -> Self {
        let mut mask = vec![false; g.order()];
        for &x in &members {
            mask[x] = true;
        }
        Self { parent: g.uid(), members, mask, normal: OnceLock::new() }
    }

    pub fn full(g: &GroupTable) -> Self {
        let s = Self::from_sorted_unchecked(g, g.elements().collect());
        let _ = s.normal.set(true);
        s
    }

    pub fn trivial(g: &GroupTable) -> Self {
        let s = Self::from_sorted_unchecked(g, vec![0]);
        let _ = s.normal.set(true);
        s
    }

    /// Validates that `members` is a subgroup of `g`.
    pub fn from_members(g: &GroupTable, members: impl IntoIterator<Item = ElemId>) -> Result<Self> {
        let set: BTreeSet<ElemId> = members.into_iter().collect();
        for &x in &set {
            g.check_element(x)?;
        }
        let s = Self::from_sorted_unchecked(g, set.into_iter().collect());
        if !s.contains(0) {
            return Err(Error::SubgroupSpec { spec: "members".into(), reason: "missing identity".into() });
        }
        for &a in &s.members {
            if !s.contains(g.inv(a)) || s.members.iter().any(|&b| !s.contains(g.mul(a, b))) {
                return Err(Error::SubgroupSpec { spec: "members".into(), reason: "not closed".into() });
            }
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[ElemId] {
        &self.members
    }

    #[inline]
    pub fn contains(&self, x: ElemId) -> bool {
        self.mask.get(x).copied().unwrap_or(false)
    }

    pub fn parent_uid(&self) -> u64 {
        self.parent
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset_of(&self, other: &SubgroupRef) -> bool {
        self.parent == other.parent && self.members.iter().all(|&x| other.contains(x))
    }

    pub(crate) fn check_parent(&self, g: &GroupTable) -> Result<()> {
        if self.parent == g.uid() && self.mask.len() == g.order() {
            Ok(())
        } else {
            Err(Error::ForeignSubgroup)
        }
    }

    /// A small generating set, chosen greedily in ascending id order.
    pub fn generators(&self, g: &GroupTable) -> Vec<ElemId> {
        let mut gens = Vec::new();
        let mut current = SubgroupRef::trivial(g);
        for &x in &self.members {
            if !current.contains(x) {
                gens.push(x);
                current = subgroup_closure(g, &gens).expect("members belong to g");
            }
        }
        gens
    }
}

/// Smallest subgroup of `g` containing `seed`.
pub fn subgroup_closure(g: &GroupTable, seed: &[ElemId]) -> Result<SubgroupRef> {
    for &x in seed {
        g.check_element(x)?;
    }
    let mut mask = vec![false; g.order()];
    mask[0] = true;
    let mut members = vec![0];
    let gens: Vec<ElemId> = seed.iter().copied().filter(|&x| x != 0).collect();
    let mut head = 0;
    while head < members.len() {
        let a = members[head];
        for &s in &gens {
            let b = g.mul(a, s);
            if !mask[b] {
                mask[b] = true;
                members.push(b);
            }
        }
        head += 1;
    }
    members.sort_unstable();
    Ok(SubgroupRef { parent: g.uid(), members, mask, normal: OnceLock::new() })
}

/// Whether `h` is normal in `g`; cached on `h`.
pub fn is_normal(g: &GroupTable, h: &SubgroupRef) -> Result<bool> {
    h.check_parent(g)?;
    Ok(*h.normal.get_or_init(|| {
        g.elements().all(|x| h.members.iter().all(|&y| h.contains(g.conj(y, x))))
    }))
}

/// `C_K(w)`
pub fn centralizer_of_element(g: &GroupTable, k: &SubgroupRef, w: ElemId) -> Result<SubgroupRef> {
    k.check_parent(g)?;
    g.check_element(w)?;
    let members = k.members.iter().copied().filter(|&y| g.mul(y, w) == g.mul(w, y)).collect();
    Ok(SubgroupRef::from_sorted_unchecked(g, members))
}

/// `C_H(K)`: elements of `h` commuting with every element of `k`.
pub fn centralizer_of_subgroup(g: &GroupTable, h: &SubgroupRef, k: &SubgroupRef) -> Result<SubgroupRef> {
    h.check_parent(g)?;
    k.check_parent(g)?;
    let gens = k.generators(g);
    let members = h
        .members
        .iter()
        .copied()
        .filter(|&x| gens.iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
        .collect();
    Ok(SubgroupRef::from_sorted_unchecked(g, members))
}

pub fn center(g: &GroupTable) -> SubgroupRef {
    let full = SubgroupRef::full(g);
    let z = centralizer_of_subgroup(g, &full, &full).expect("same parent");
    let _ = z.normal.set(true);
    z
}

/// Every subgroup of `g`, sorted by (order, members).
///
/// Starts from the cyclic subgroups and closes under pairwise joins until no
/// new subgroup appears. Every subgroup is the join of the cyclic subgroups
/// it contains, so the fixpoint is the full lattice.
pub fn all_subgroups(g: &GroupTable) -> Vec<SubgroupRef> {
    let mut found: BTreeSet<Vec<ElemId>> = BTreeSet::new();
    let mut cyclic: Vec<SubgroupRef> = Vec::new();
    for x in g.elements() {
        let c = subgroup_closure(g, &[x]).expect("valid id");
        if found.insert(c.members.clone()) {
            cyclic.push(c);
        }
    }
    let mut layer: Vec<SubgroupRef> = cyclic.clone();
    let mut all = cyclic.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for h in &layer {
            for c in &cyclic {
                if c.is_subset_of(h) {
                    continue;
                }
                let mut seed = h.generators(g);
                seed.extend(c.generators(g));
                let j = subgroup_closure(g, &seed).expect("valid ids");
                if found.insert(j.members.clone()) {
                    next.push(j.clone());
                    all.push(j);
                }
            }
        }
        layer = next;
    }
    all.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    all
}

/// Least prime dividing `|G|`.
pub fn smallest_prime_divisor(g: &GroupTable) -> Result<u64> {
    let n = g.order() as u64;
    if n < 2 {
        return Err(Error::TrivialGroup);
    }
    Ok((2..=n).find(|p| n.is_multiple_of(*p)).expect("n itself divides n"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{named_group, NamedGroup, DEFAULT_MAX_ORDER};

    fn s3() -> GroupTable {
        named_group(NamedGroup::Symmetric(3), DEFAULT_MAX_ORDER).unwrap()
    }

    fn of_order(g: &GroupTable, k: usize) -> ElemId {
        g.elements().find(|&x| g.element_order(x) == k).unwrap()
    }

    #[test]
    fn closure_examples() {
        let g = s3();
        assert_eq!(subgroup_closure(&g, &[]).unwrap().members(), &[0]);
        let c = of_order(&g, 3);
        let t = of_order(&g, 2);
        assert_eq!(subgroup_closure(&g, &[c]).unwrap().order(), 3);
        assert_eq!(subgroup_closure(&g, &[c, t]).unwrap().order(), 6);
        assert!(subgroup_closure(&g, &[17]).is_err());
    }

    #[test]
    fn normality() {
        let g = s3();
        let a3 = subgroup_closure(&g, &[of_order(&g, 3)]).unwrap();
        let t = subgroup_closure(&g, &[of_order(&g, 2)]).unwrap();
        assert!(is_normal(&g, &a3).unwrap());
        assert!(!is_normal(&g, &t).unwrap());
        assert!(is_normal(&g, &SubgroupRef::full(&g)).unwrap());
        let other = s3();
        assert_eq!(is_normal(&other, &a3), Err(Error::ForeignSubgroup));
    }

    #[test]
    fn centralizers() {
        let g = s3();
        let full = SubgroupRef::full(&g);
        let c = of_order(&g, 3);
        let t = of_order(&g, 2);
        let a3 = subgroup_closure(&g, &[c]).unwrap();
        assert_eq!(centralizer_of_element(&g, &full, 0).unwrap().order(), 6);
        assert_eq!(centralizer_of_element(&g, &full, c).unwrap(), a3);
        assert!(centralizer_of_element(&g, &a3, t).unwrap().is_trivial());
        let triv = SubgroupRef::trivial(&g);
        assert_eq!(centralizer_of_subgroup(&g, &full, &triv).unwrap(), full);
        assert!(centralizer_of_subgroup(&g, &full, &full).unwrap().is_trivial());
        assert_eq!(centralizer_of_subgroup(&g, &a3, &a3).unwrap(), a3);
    }

    #[test]
    fn centers() {
        assert!(center(&s3()).is_trivial());
        let q8 = named_group(NamedGroup::Quaternion, 100).unwrap();
        assert_eq!(center(&q8).order(), 2);
        let c6 = named_group(NamedGroup::Cyclic(6), 100).unwrap();
        assert_eq!(center(&c6).order(), 6);
    }

    #[test]
    fn lattice_sizes() {
        let count = |s: &str| all_subgroups(&named_group(s.parse().unwrap(), 100).unwrap()).len();
        assert_eq!(count("S3"), 6);
        assert_eq!(count("S4"), 30);
        assert_eq!(count("Q8"), 6);
        assert_eq!(count("C12"), 6);
        assert_eq!(count("D4"), 10);
        assert_eq!(count("A4"), 10);
    }

    #[test]
    fn prime_divisor() {
        assert_eq!(smallest_prime_divisor(&s3()).unwrap(), 2);
        let c27 = named_group(NamedGroup::Cyclic(27), 100).unwrap();
        assert_eq!(smallest_prime_divisor(&c27).unwrap(), 3);
        let c1 = named_group(NamedGroup::Cyclic(1), 100).unwrap();
        assert_eq!(smallest_prime_divisor(&c1), Err(Error::TrivialGroup));
    }

    #[test]
    fn generators_regenerate() {
        let g = named_group(NamedGroup::Symmetric(4), 100).unwrap();
        for h in all_subgroups(&g) {
            assert_eq!(subgroup_closure(&g, &h.generators(&g)).unwrap(), h);
            assert_eq!(g.order() % h.order(), 0);
        }
    }
}
