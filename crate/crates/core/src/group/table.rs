use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perm::{compose, cycle_label, PermList};
use crate::error::{Error, Result};

/// Default cap on the order of any materialized group.
pub const DEFAULT_MAX_ORDER: usize = 10080;

/// Tables are stored with 16-bit entries, which bounds any cap.
pub const HARD_MAX_ORDER: usize = 1 << 16;

/// Element ids. The identity is always `0`.
pub type ElemId = usize;

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

fn fresh_uid() -> u64 {
    NEXT_UID.fetch_add(1, Ordering::Relaxed)
}

/// A finite group given by its full multiplication table.
///
/// Ids are dense in `0..order` and the identity is `0`. Each table carries
/// a process-unique tag so subgroups can be matched to their parent.
#[derive(Debug, Clone)]
pub struct GroupTable {
    uid: u64,
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    labels: Option<Vec<String>>,
}

impl GroupTable {
    /// Wraps an explicit multiplication table after checking the group
    /// axioms (associativity exhaustively up to order 256, sampled above).
    pub fn from_table(order: usize, mul: Vec<usize>, labels: Option<Vec<String>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidTable("empty group".into()));
        }
        if order > HARD_MAX_ORDER {
            return Err(Error::ClosureTooLarge { cap: HARD_MAX_ORDER });
        }
        if mul.len() != order * order {
            return Err(Error::InvalidTable(format!(
                "table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(Error::InvalidTable("label count does not match order".into()));
            }
        }
        if mul.iter().any(|&v| v >= order) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        let mul: Vec<u16> = mul.into_iter().map(|v| v as u16).collect();
        let mut inv = vec![u16::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        if inv.contains(&u16::MAX) {
            return Err(Error::InvalidTable("some element has no inverse".into()));
        }
        let table = Self { uid: fresh_uid(), order, mul, inv, labels };
        table.check_axioms()?;
        Ok(table)
    }

    pub(crate) fn from_parts_unchecked(
        order: usize,
        mul: Vec<u16>,
        inv: Vec<u16>,
        labels: Option<Vec<String>>,
    ) -> Self {
        Self { uid: fresh_uid(), order, mul, inv, labels }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> ElemId {
        0
    }

    #[inline]
    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inv[a] as usize
    }

    /// `b⁻¹ a b`
    #[inline]
    pub fn conj(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul(self.inv(b), self.mul(a, b))
    }

    pub fn uid(&self) -> u64 {
        self.uid
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, a: ElemId) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => format!("#{a}"),
        }
    }

    pub fn elements(&self) -> std::ops::Range<ElemId> {
        0..self.order
    }

    pub fn check_element(&self, a: ElemId) -> Result<()> {
        if a < self.order {
            Ok(())
        } else {
            Err(Error::InvalidElement { id: a, order: self.order })
        }
    }

    pub fn element_order(&self, a: ElemId) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Identity, inverse, Latin-square and associativity checks.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.order;
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(Error::InvalidTable(format!("0 is not an identity for {x}")));
            }
            if self.mul(x, self.inv(x)) != 0 || self.mul(self.inv(x), x) != 0 {
                return Err(Error::InvalidTable(format!("bad inverse for {x}")));
            }
        }
        let mut seen = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                let v = self.mul(a, b);
                if seen[v] == a + 1 {
                    return Err(Error::InvalidTable(format!("row {a} repeats {v}")));
                }
                seen[v] = a + 1;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for b in 0..n {
            for a in 0..n {
                let v = self.mul(a, b);
                if seen[v] == b + 1 {
                    return Err(Error::InvalidTable(format!("column {b} repeats {v}")));
                }
                seen[v] = b + 1;
            }
        }
        let assoc = |a: usize, b: usize, c: usize| {
            self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
        };
        if n <= 256 {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::InvalidTable(format!(
                                "not associative at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..200_000 {
                let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidTable(format!("not associative at ({a}, {b}, {c})")));
                }
            }
        }
        Ok(())
    }
}

/// Closes a set of permutation generators into a full multiplication table.
///
/// Elements are numbered in breadth-first discovery order starting from the
/// identity, multiplying on the right by each generator in turn. The product
/// `a * b` means "apply `a`, then `b`".
pub fn close_group(gens: &PermList, max_order: usize) -> Result<GroupTable> {
    if max_order > HARD_MAX_ORDER {
        return Err(Error::ConfigInvalid(format!(
            "order cap {max_order} exceeds the table limit {HARD_MAX_ORDER}"
        )));
    }
    let degree = gens.degree();
    let identity: Vec<usize> = (0..degree).collect();
    // Drop identity generators; they only add self-loops.
    let gens: Vec<&Vec<usize>> = gens.perms().iter().filter(|p| **p != identity).collect();

    let mut elements = vec![identity.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
    // parent[b] = (a, s) with b = a * gens[s]
    let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
    let mut right: Vec<usize> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        for (s, g) in gens.iter().enumerate() {
            let prod = compose(&elements[head], g);
            let id = match index.get(&prod) {
                Some(&id) => id,
                None => {
                    let id = elements.len();
                    if id >= max_order {
                        return Err(Error::ClosureTooLarge { cap: max_order });
                    }
                    index.insert(prod.clone(), id);
                    elements.push(prod);
                    parent.push((head, s));
                    id
                }
            };
            right.push(id);
        }
        head += 1;
    }

    let order = elements.len();
    let ngens = gens.len();
    let mut mul = vec![0u16; order * order];
    let mut inv = vec![0u16; order];
    for a in 0..order {
        let row = &mut mul[a * order..(a + 1) * order];
        row[0] = a as u16;
        for b in 1..order {
            let (p, s) = parent[b];
            let v = right[row[p] as usize * ngens + s];
            row[b] = v as u16;
            if v == 0 {
                inv[a] = b as u16;
            }
        }
    }
    let labels = elements.iter().map(|p| cycle_label(p)).collect();
    Ok(GroupTable::from_parts_unchecked(order, mul, inv, Some(labels)))
}

/// Direct product `G1 × G2` with the pair `(a, b)` stored at id `a·|G2| + b`.
#[derive(Debug, Clone)]
pub struct DirectProduct {
    pub table: GroupTable,
    left_order: usize,
    right_order: usize,
}

impl DirectProduct {
    pub fn embed(&self, a: ElemId, b: ElemId) -> ElemId {
        a * self.right_order + b
    }

    pub fn project_left(&self, x: ElemId) -> ElemId {
        x / self.right_order
    }

    pub fn project_right(&self, x: ElemId) -> ElemId {
        x % self.right_order
    }

    pub fn left_order(&self) -> usize {
        self.left_order
    }

    pub fn right_order(&self) -> usize {
        self.right_order
    }
}

pub fn direct_product(g1: &GroupTable, g2: &GroupTable, max_order: usize) -> Result<DirectProduct> {
    let (n1, n2) = (g1.order(), g2.order());
    let order = n1.checked_mul(n2).ok_or(Error::ClosureTooLarge { cap: max_order })?;
    if order > max_order.min(HARD_MAX_ORDER) {
        return Err(Error::ClosureTooLarge { cap: max_order });
    }
    let mut mul = vec![0u16; order * order];
    for x in 0..order {
        let (a, b) = (x / n2, x % n2);
        for y in 0..order {
            let (c, d) = (y / n2, y % n2);
            mul[x * order + y] = (g1.mul(a, c) * n2 + g2.mul(b, d)) as u16;
        }
    }
    let inv = (0..order).map(|x| (g1.inv(x / n2) * n2 + g2.inv(x % n2)) as u16).collect();
    let labels = (0..order)
        .map(|x| format!("({}, {})", g1.label(x / n2), g2.label(x % n2)))
        .collect();
    Ok(DirectProduct {
        table: GroupTable::from_parts_unchecked(order, mul, inv, Some(labels)),
        left_order: n1,
        right_order: n2,
    })
}
