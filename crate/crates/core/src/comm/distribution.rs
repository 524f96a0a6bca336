use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::commutator::commutator;
use crate::error::{Error, Result};
use crate::group::{ElemId, GroupTable, SubgroupRef};

/// Exact histogram of left-normed commutator values.
///
/// `counts[w]` is the number of tuples `(x₁,…,xₙ,y₁,…,yⱼ)` with `xᵢ ∈ H`,
/// `yᵢ ∈ K` and `[x₁,…,xₙ,y₁,…,yⱼ] = w`, where `n = x_slots` and
/// `j = y_slots`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommDistribution {
    counts: Vec<BigUint>,
    x_slots: usize,
    y_slots: usize,
    x_order: usize,
    y_order: usize,
    source: String,
}

impl CommDistribution {
    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, w: ElemId) -> &BigUint {
        &self.counts[w]
    }

    /// Overwrites one count. Used to build corrupted fixtures in tests.
    pub fn set_count(&mut self, w: ElemId, value: BigUint) {
        self.counts[w] = value;
    }

    /// Total number of tuples consumed, `|H|ⁿ·|K|ʲ`.
    pub fn weight(&self) -> usize {
        self.x_slots + self.y_slots
    }

    pub fn x_slots(&self) -> usize {
        self.x_slots
    }

    pub fn y_slots(&self) -> usize {
        self.y_slots
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// `|H|ⁿ·|K|ʲ`, the mass the counts must add up to.
    pub fn expected_total(&self) -> BigUint {
        BigUint::from(self.x_order).pow(self.x_slots as u32)
            * BigUint::from(self.y_order).pow(self.y_slots as u32)
    }

    pub fn support(&self) -> Vec<ElemId> {
        (0..self.counts.len()).filter(|&w| !self.counts[w].is_zero()).collect()
    }

    /// `element_id,count` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("element_id,count\n");
        for (w, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{w},{c}\n"));
        }
        out
    }
}

/// `counts[w] = #{(x₁,…,xₙ) ∈ Hⁿ : [x₁,…,xₙ] = w}`.
///
/// One pass per slot: each step folds every current value `w` against every
/// `x ∈ H`, so the cost is `O(n·|G|·|H|)` rather than `|H|ⁿ`.
pub fn comm_distribution(g: &GroupTable, h: &SubgroupRef, n: usize) -> Result<CommDistribution> {
    h.check_parent(g)?;
    if n == 0 {
        return Err(Error::InvalidWeight { n, m: 1 });
    }
    let mut counts = vec![BigUint::zero(); g.order()];
    for &x in h.members() {
        counts[x] = BigUint::one();
    }
    for _ in 1..n {
        counts = step(g, &counts, h);
    }
    Ok(CommDistribution {
        counts,
        x_slots: n,
        y_slots: 0,
        x_order: h.order(),
        y_order: 1,
        source: format!("x-block: {n} slot(s) over a subgroup of order {}", h.order()),
    })
}

/// Appends `m` slots drawn from `K` to an x-block distribution.
pub fn extend_by_conjugators(
    g: &GroupTable,
    dist: &CommDistribution,
    k: &SubgroupRef,
    m: usize,
) -> Result<CommDistribution> {
    k.check_parent(g)?;
    if dist.counts.len() != g.order() {
        return Err(Error::ForeignSubgroup);
    }
    if dist.y_slots > 0 && dist.y_order != k.order() {
        return Err(Error::ConfigInvalid("distribution already extended by another subgroup".into()));
    }
    let mut counts = dist.counts.clone();
    for _ in 0..m {
        counts = step(g, &counts, k);
    }
    Ok(CommDistribution {
        counts,
        x_slots: dist.x_slots,
        y_slots: dist.y_slots + m,
        x_order: dist.x_order,
        y_order: k.order(),
        source: format!(
            "{}; y-block: {} slot(s) over a subgroup of order {}",
            dist.source,
            dist.y_slots + m,
            k.order()
        ),
    })
}

/// One convolution step: `next[v] = Σ_{w, y ∈ K, [w,y] = v} counts[w]`.
fn step(g: &GroupTable, counts: &[BigUint], k: &SubgroupRef) -> Vec<BigUint> {
    let order = g.order();
    let support: Vec<ElemId> = (0..order).filter(|&w| !counts[w].is_zero()).collect();
    let chunk = support.len().div_ceil(rayon::current_num_threads()).max(1);
    support
        .par_chunks(chunk)
        .map(|ws| {
            let mut acc = vec![BigUint::zero(); order];
            let mut hist = vec![0u32; order];
            let mut touched = Vec::new();
            for &w in ws {
                for &y in k.members() {
                    let v = commutator(g, w, y);
                    if hist[v] == 0 {
                        touched.push(v);
                    }
                    hist[v] += 1;
                }
                for v in touched.drain(..) {
                    acc[v] += &counts[w] * hist[v];
                    hist[v] = 0;
                }
            }
            acc
        })
        .reduce(
            || vec![BigUint::zero(); order],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}
