use super::subgroup::{is_normal, SubgroupRef};
use super::table::{ElemId, GroupTable};
use crate::error::{Error, Result};

/// Orbits of `G` under conjugation by a subgroup `K`.
///
/// Classes are listed in order of their minimal element, so the identity's
/// class `{0}` always comes first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyInfo {
    classes: Vec<Vec<ElemId>>,
    class_of: Vec<usize>,
    centralizer_order: Vec<usize>,
    acting_order: usize,
}

impl ConjugacyInfo {
    pub fn classes(&self) -> &[Vec<ElemId>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class_of(&self, x: ElemId) -> usize {
        self.class_of[x]
    }

    /// `|C_K(x)|`
    #[inline]
    pub fn centralizer_order(&self, x: ElemId) -> usize {
        self.centralizer_order[x]
    }

    pub fn acting_order(&self) -> usize {
        self.acting_order
    }

    #[inline]
    pub fn same_class(&self, x: ElemId, y: ElemId) -> bool {
        self.class_of[x] == self.class_of[y]
    }
}

pub fn conjugacy(g: &GroupTable, k: &SubgroupRef) -> Result<ConjugacyInfo> {
    k.check_parent(g)?;
    let n = g.order();
    let mut class_of = vec![usize::MAX; n];
    let mut centralizer_order = vec![0; n];
    let mut classes = Vec::new();
    for x in g.elements() {
        if class_of[x] != usize::MAX {
            continue;
        }
        let idx = classes.len();
        let mut orbit = vec![x];
        class_of[x] = idx;
        for &y in k.members() {
            let c = g.conj(x, y);
            if class_of[c] == usize::MAX {
                class_of[c] = idx;
                orbit.push(c);
            }
        }
        orbit.sort_unstable();
        let stab = k.order() / orbit.len();
        for &c in &orbit {
            centralizer_order[c] = stab;
        }
        classes.push(orbit);
    }
    Ok(ConjugacyInfo { classes, class_of, centralizer_order, acting_order: k.order() })
}

/// `G/N` together with the projection `x ↦ xN`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub table: GroupTable,
    pub projection: Vec<ElemId>,
}

impl Quotient {
    #[inline]
    pub fn project(&self, x: ElemId) -> ElemId {
        self.projection[x]
    }

    /// Image of a subgroup of the parent, as a subgroup of the quotient.
    pub fn image(&self, g: &GroupTable, h: &SubgroupRef) -> Result<SubgroupRef> {
        h.check_parent(g)?;
        let ids: std::collections::BTreeSet<ElemId> = h.members().iter().map(|&x| self.project(x)).collect();
        Ok(SubgroupRef::from_sorted_unchecked(&self.table, ids.into_iter().collect()))
    }
}

/// Cosets of a normal subgroup, ordered by their minimal member id.
pub fn quotient_group(g: &GroupTable, nsub: &SubgroupRef) -> Result<Quotient> {
    if !is_normal(g, nsub)? {
        return Err(Error::NotNormal);
    }
    let n = g.order();
    let mut projection = vec![usize::MAX; n];
    let mut reps = Vec::new();
    // Scanning ids upward makes each coset's representative its minimal member.
    for x in g.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &y in nsub.members() {
            projection[g.mul(x, y)] = c;
        }
    }
    let q = reps.len();
    let mut mul = vec![0u16; q * q];
    for (a, &ra) in reps.iter().enumerate() {
        for (b, &rb) in reps.iter().enumerate() {
            mul[a * q + b] = projection[g.mul(ra, rb)] as u16;
        }
    }
    let inv = reps.iter().map(|&r| projection[g.inv(r)] as u16).collect();
    let labels = reps.iter().map(|&r| format!("{}N", g.label(r))).collect();
    Ok(Quotient {
        table: GroupTable::from_parts_unchecked(q, mul, inv, Some(labels)),
        projection,
    })
}
