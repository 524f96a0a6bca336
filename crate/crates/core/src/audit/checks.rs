use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::claims::{ClaimId, Finding, Instance, Verdict, Witness};
use super::config::{AuditConfig, GPolicy};
use crate::character::{
    character_table, is_character, prob_char_pg, prob_char_relative, psi_class_function, vanishes_outside,
    CharTableOptions, CharacterTable, ClassFunction, FORMULA_TOL, ROUNDING_TOL,
};
use crate::comm::{
    brute_counts, comm_distribution, full_distribution, ClassFormula, CommDistribution, Predicate,
};
use crate::error::{Error, Result};
use crate::group::{
    all_subgroups, center, centralizer_of_subgroup, conjugacy, direct_product, is_normal, parse_group_spec,
    parse_subgroup_spec, quotient_group, smallest_prime_divisor, subgroup_closure, subgroup_spec, ConjugacyInfo,
    ElemId, GroupTable, SubgroupRef,
};

fn q(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn big(x: usize) -> BigInt {
    BigInt::from(x)
}

fn pow(x: usize, e: usize) -> BigInt {
    big(x).pow(e as u32)
}

/// `count/total` without reducing, so the witness shows the raw tallies.
fn tally(count: &BigUint, total: &BigUint) -> String {
    format!("{count}/{total}")
}

/// Elements where a fast distribution disagrees with exhaustive enumeration,
/// checked over both supports and the identity.
pub fn oracle_mismatches(
    group: &GroupTable,
    h: &SubgroupRef,
    k: &SubgroupRef,
    n: usize,
    m: usize,
    fast: &CommDistribution,
    cap: u128,
) -> Result<Vec<ElemId>> {
    let brute = brute_counts(group, h, k, n, m, cap)?;
    let mut targets: Vec<ElemId> = fast.support();
    targets.extend(group.elements().filter(|&x| brute[x] != 0));
    targets.push(group.identity());
    targets.sort_unstable();
    targets.dedup();
    Ok(targets
        .into_iter()
        .filter(|&x| *fast.count(x) != BigUint::from(brute[x]))
        .collect())
}

/// Compares the class formula, built from `x_dist`, with reference counts
/// over `Hⁿ × Kᵐ` for every target in `targets` and both predicates.
#[allow(clippy::too_many_arguments)]
pub fn check_class_formula(
    group: &GroupTable,
    instance: &Instance,
    k: &SubgroupRef,
    m: usize,
    x_dist: &CommDistribution,
    reference: &[BigUint],
    targets: &[ElemId],
) -> Result<Vec<Finding>> {
    let claim = if m == 1 { ClaimId::P3_m1 } else { ClaimId::P3_mgt1 };
    let formula = ClassFormula::new(group, x_dist, k, m)?;
    let total: BigUint = x_dist.expected_total() * BigUint::from(k.order()).pow(m as u32);
    let mut out = Vec::new();
    for &g in targets {
        for pred in [Predicate::Derived, Predicate::Paper] {
            let lhs = formula.count(g, pred);
            let ok = lhs == reference[g];
            out.push(Finding::judged(
                claim,
                Some(&pred.to_string()),
                instance.clone().with_g(g),
                ok,
                Witness::new(tally(&lhs, &total), "=", tally(&reference[g], &total)),
            ));
        }
    }
    Ok(out)
}

type DistKey = (usize, usize, usize, usize);

/// One battery group with its subgroup list and memoized computations.
pub(crate) struct GroupCtx {
    pub spec: String,
    pub table: GroupTable,
    pub subgroups: Vec<SubgroupRef>,
    pub specs: Vec<String>,
    index: HashMap<Vec<ElemId>, usize>,
    pub full: usize,
    g_policy: GPolicy,
    brute_cap: u128,
    seed: u64,
    chars: OnceCell<std::result::Result<Rc<CharacterTable>, Error>>,
    dists: RefCell<HashMap<DistKey, Rc<CommDistribution>>>,
    xdists: RefCell<HashMap<(usize, usize), Rc<CommDistribution>>>,
    refs: RefCell<HashMap<DistKey, Rc<Vec<BigUint>>>>,
    conj: RefCell<HashMap<usize, Rc<ConjugacyInfo>>>,
}

impl GroupCtx {
    pub fn new(spec: &str, cfg: &AuditConfig) -> Result<Self> {
        let table = parse_group_spec(spec, cfg.max_order)?;
        let mut subgroups = if table.order() <= cfg.subgroup_enumeration_cap {
            all_subgroups(&table)
        } else {
            vec![SubgroupRef::trivial(&table), center(&table), SubgroupRef::full(&table)]
        };
        for s in cfg.subgroups.get(spec).into_iter().flatten() {
            subgroups.push(parse_subgroup_spec(s, &table)?);
        }
        subgroups.sort_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())));
        subgroups.dedup();
        let index = subgroups.iter().enumerate().map(|(i, s)| (s.members().to_vec(), i)).collect();
        let specs = subgroups.iter().map(|s| subgroup_spec(&table, s)).collect();
        let full = subgroups.len() - 1;
        Ok(Self {
            spec: spec.into(),
            table,
            subgroups,
            specs,
            index,
            full,
            g_policy: cfg.g_policy,
            brute_cap: cfg.brute_cap,
            seed: cfg.seed,
            chars: OnceCell::new(),
            dists: RefCell::default(),
            xdists: RefCell::default(),
            refs: RefCell::default(),
            conj: RefCell::default(),
        })
    }

    /// Index of a subgroup, adding it to the list if needed.
    pub fn locate(&mut self, s: SubgroupRef) -> usize {
        if let Some(&i) = self.index.get(s.members()) {
            return i;
        }
        self.index.insert(s.members().to_vec(), self.subgroups.len());
        self.specs.push(subgroup_spec(&self.table, &s));
        self.subgroups.push(s);
        self.subgroups.len() - 1
    }

    pub fn locate_spec(&mut self, spec: &str) -> Result<usize> {
        let s = parse_subgroup_spec(spec, &self.table)?;
        Ok(self.locate(s))
    }

    fn sub(&self, i: usize) -> &SubgroupRef {
        &self.subgroups[i]
    }

    fn conjugate_index(&self, i: usize, x: ElemId) -> Option<usize> {
        let mut members: Vec<ElemId> = self.sub(i).members().iter().map(|&h| self.table.conj(h, x)).collect();
        members.sort_unstable();
        self.index.get(&members).copied()
    }

    /// Pairs `(H, K)` up to simultaneous conjugation, when the subgroup list
    /// is closed under conjugation; all pairs otherwise.
    pub fn pair_reps(&self) -> Vec<(usize, usize)> {
        let s = self.subgroups.len();
        let Some(action) = self.conjugation_action() else {
            return (0..s).flat_map(|i| (0..s).map(move |j| (i, j))).collect();
        };
        let mut out = Vec::new();
        for i in 0..s {
            for j in 0..s {
                if action.iter().all(|p| (p[i], p[j]) >= (i, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn single_reps(&self) -> Vec<usize> {
        let s = self.subgroups.len();
        match self.conjugation_action() {
            Some(action) => (0..s).filter(|&i| action.iter().all(|p| p[i] >= i)).collect(),
            None => (0..s).collect(),
        }
    }

    fn conjugation_action(&self) -> Option<Vec<Vec<usize>>> {
        self.table
            .elements()
            .map(|x| (0..self.subgroups.len()).map(|i| self.conjugate_index(i, x)).collect())
            .collect()
    }

    pub fn chars(&self) -> std::result::Result<Rc<CharacterTable>, Error> {
        self.chars
            .get_or_init(|| {
                character_table(&self.table, CharTableOptions { seed: self.seed, ..Default::default() }).map(Rc::new)
            })
            .clone()
    }

    fn dist(&self, hi: usize, ki: usize, n: usize, m: usize) -> Result<Rc<CommDistribution>> {
        if let Some(d) = self.dists.borrow().get(&(hi, ki, n, m)) {
            return Ok(d.clone());
        }
        let x = self.xdist(hi, n)?;
        let d = Rc::new(crate::comm::extend_by_conjugators(&self.table, &x, self.sub(ki), m)?);
        self.dists.borrow_mut().insert((hi, ki, n, m), d.clone());
        Ok(d)
    }

    fn xdist(&self, hi: usize, n: usize) -> Result<Rc<CommDistribution>> {
        if let Some(d) = self.xdists.borrow().get(&(hi, n)) {
            return Ok(d.clone());
        }
        let d = Rc::new(comm_distribution(&self.table, self.sub(hi), n)?);
        self.xdists.borrow_mut().insert((hi, n), d.clone());
        Ok(d)
    }

    /// Exhaustive counts when within the brute cap, otherwise the
    /// distribution engine's counts.
    fn reference(&self, hi: usize, ki: usize, n: usize, m: usize) -> Result<(Rc<Vec<BigUint>>, bool)> {
        if let Some(r) = self.refs.borrow().get(&(hi, ki, n, m)) {
            return Ok((r.clone(), true));
        }
        match brute_counts(&self.table, self.sub(hi), self.sub(ki), n, m, self.brute_cap) {
            Ok(c) => {
                let r = Rc::new(c.into_iter().map(BigUint::from).collect::<Vec<_>>());
                self.refs.borrow_mut().insert((hi, ki, n, m), r.clone());
                Ok((r, true))
            }
            Err(Error::BruteCapExceeded { .. }) => {
                Ok((Rc::new(self.dist(hi, ki, n, m)?.counts().to_vec()), false))
            }
            Err(e) => Err(e),
        }
    }

    fn kconj(&self, ki: usize) -> Result<Rc<ConjugacyInfo>> {
        if let Some(c) = self.conj.borrow().get(&ki) {
            return Ok(c.clone());
        }
        let c = Rc::new(conjugacy(&self.table, self.sub(ki))?);
        self.conj.borrow_mut().insert(ki, c.clone());
        Ok(c)
    }

    fn p(&self, hi: usize, ki: usize, n: usize, m: usize, g: ElemId) -> Result<BigRational> {
        let d = self.dist(hi, ki, n, m)?;
        Ok(q(d.count(g).clone(), d.expected_total()))
    }

    fn targets(&self, support: &[ElemId]) -> Vec<ElemId> {
        match self.g_policy {
            GPolicy::All => self.table.elements().collect(),
            GPolicy::Support => {
                let mut t = support.to_vec();
                t.push(self.table.identity());
                if let Some(x) = self.table.elements().find(|x| support.binary_search(x).is_err()) {
                    t.push(x);
                }
                t.sort_unstable();
                t.dedup();
                t
            }
        }
    }

    fn base(&self) -> Instance {
        Instance::group(&self.spec)
    }

    fn pair_instance(&self, hi: usize, ki: usize, n: usize, m: usize) -> Instance {
        self.base().with_h(&self.specs[hi]).with_k(&self.specs[ki]).with_weights(n, m)
    }

    fn is_normal(&self, i: usize) -> Result<bool> {
        is_normal(&self.table, self.sub(i))
    }

    fn nested_is_trivial(&self, support: &[ElemId]) -> Result<bool> {
        Ok(subgroup_closure(&self.table, support)?.is_trivial())
    }
}

/// Claims evaluated on a pair `(H, K)` with weights `(n, m)`.
pub(crate) const PAIR_CLAIMS: &[ClaimId] = &[
    ClaimId::R1a,
    ClaimId::R1b,
    ClaimId::P2a,
    ClaimId::P2b,
    ClaimId::P3_m1,
    ClaimId::P3_mgt1,
    ClaimId::C4,
    ClaimId::T2_CHAIN,
    ClaimId::C5,
    ClaimId::T3i,
    ClaimId::T3ii,
    ClaimId::C6,
];

pub(crate) fn pair_claim(
    ctx: &GroupCtx,
    claim: ClaimId,
    hi: usize,
    ki: usize,
    n: usize,
    m: usize,
) -> Result<Vec<Finding>> {
    let inst = ctx.pair_instance(hi, ki, n, m);
    let dist = ctx.dist(hi, ki, n, m)?;
    let support = dist.support();
    let targets = ctx.targets(&support);
    let (h, k) = (ctx.sub(hi), ctx.sub(ki));
    let mut out = Vec::new();
    match claim {
        ClaimId::R1a => {
            let (reference, _) = ctx.reference(hi, ki, n, m)?;
            let zeros = dist.counts().iter().filter(|c| c.is_zero()).count();
            let non_values = reference.iter().filter(|c| c.is_zero()).count();
            let same = ctx
                .table
                .elements()
                .all(|g| dist.count(g).is_zero() == reference[g].is_zero());
            out.push(Finding::judged(
                claim,
                None,
                inst.clone(),
                same,
                Witness::new(format!("#zero p_g = {zeros}"), "=", format!("#non-values = {non_values}")),
            ));
            let p1 = q(dist.count(0).clone(), dist.expected_total());
            let trivial = ctx.nested_is_trivial(&support)?;
            out.push(Finding::judged(
                claim,
                Some("identity"),
                inst,
                p1.is_one() == trivial,
                Witness::new(format!("p_1 = {p1}"), "iff", format!("[nH,mK] trivial = {trivial}")),
            ));
        }
        ClaimId::R1b => {
            let total = dist.total();
            let expected = dist.expected_total();
            out.push(Finding::judged(
                claim,
                None,
                inst,
                total == expected,
                Witness::new(format!("sum p_g = {}", q(total, expected.clone())), "=", "1"),
            ));
        }
        ClaimId::P2a | ClaimId::P2b => {
            let (rn, rm) = if claim == ClaimId::P2a { (n, m) } else { (m, n) };
            let reverse = ctx.dist(ki, hi, rn, rm)?;
            let rp = |g: ElemId| q(reverse.count(g).clone(), reverse.expected_total());
            let lp = |g: ElemId| q(dist.count(g).clone(), dist.expected_total());
            for &g in &targets {
                let ginv = ctx.table.inv(g);
                let (a, b) = (lp(g), rp(ginv));
                out.push(Finding::judged(
                    claim,
                    None,
                    inst.clone().with_g(g),
                    a == b,
                    Witness::new(&a, "=", &b),
                ));
            }
            let normal = ctx.is_normal(hi)? || ctx.is_normal(ki)?;
            let variants: &[&str] =
                if claim == ClaimId::P2a { &["normal_swap", "normal_inverse"] } else { &["normal_swap"] };
            for &v in variants {
                if !normal {
                    out.push(
                        Finding::new(claim, Some(v), inst.clone(), Verdict::Vacuous)
                            .with_note("neither H nor K is normal"),
                    );
                    continue;
                }
                for &g in &targets {
                    let a = lp(g);
                    let b = if v == "normal_swap" { rp(g) } else { lp(ctx.table.inv(g)) };
                    out.push(Finding::judged(claim, Some(v), inst.clone().with_g(g), a == b, Witness::new(&a, "=", &b)));
                }
            }
        }
        ClaimId::P3_m1 | ClaimId::P3_mgt1 => {
            if (claim == ClaimId::P3_m1) != (m == 1) {
                return Ok(out);
            }
            let (reference, exact) = ctx.reference(hi, ki, n, m)?;
            let x = ctx.xdist(hi, n)?;
            out = check_class_formula(&ctx.table, &inst, k, m, &x, &reference, &targets)?;
            if !exact {
                for f in &mut out {
                    f.note = Some("reference from the distribution engine (brute cap exceeded)".into());
                }
            }
        }
        ClaimId::C4 => {
            let x = ctx.xdist(hi, n)?;
            let cls = ctx.kconj(ki)?;
            let nonid: Vec<ElemId> = x.support().into_iter().filter(|&w| w != 0).collect();
            if nonid.is_empty() {
                out.push(
                    Finding::new(claim, None, inst, Verdict::Vacuous).with_note("every x-block commutator is trivial"),
                );
            } else if nonid.iter().all(|&w| cls.centralizer_order(w) == 1) {
                let (hn, km) = (pow(h.order(), n), pow(k.order(), m));
                let rhs = q(1, hn.clone()) + q(1, km.clone()) - q(1, hn * km);
                let lhs = q(dist.count(0).clone(), dist.expected_total());
                out.push(Finding::judged(claim, None, inst.with_g(0), lhs == rhs, Witness::new(&lhs, "=", &rhs)));
            } else {
                out.push(
                    Finding::new(claim, None, inst, Verdict::Vacuous)
                        .with_note("some non-identity x-block commutator has a non-trivial centralizer in K"),
                );
            }
        }
        ClaimId::T2_CHAIN => {
            let full = ctx.full;
            let c = ctx.p(hi, ki, n, m, 0)?;
            let d = ctx.p(hi, full, n, m, 0)?;
            let e = ctx.p(hi, hi, n, m, 0)?;
            for &g in &targets {
                let a = ctx.p(full, full, n, m, g)?;
                let b = ctx.p(hi, ki, n, m, g)?;
                let gi = inst.clone().with_g(g);
                out.push(Finding::judged(claim, Some("link1"), gi.clone(), a <= b, Witness::new(&a, "<=", &b)));
                out.push(Finding::judged(claim, Some("link2"), gi, b <= c, Witness::new(&b, "<=", &c)));
            }
            out.push(Finding::judged(claim, Some("link3"), inst.clone(), c <= d, Witness::new(&c, "<=", &d)));
            out.push(Finding::judged(claim, Some("link4"), inst, d <= e, Witness::new(&d, "<=", &e)));
        }
        ClaimId::C5 => {
            if m != 1 {
                return Ok(out);
            }
            let bound = q(pow(2, n) - 1, pow(2, n));
            let z_g = center(&ctx.table).is_trivial();
            let z_h = centralizer_of_subgroup(&ctx.table, h, h)?.is_trivial();
            for (variant, hyp, what) in [(None, z_g, "Z(G)"), (Some("center_of_h"), z_h, "Z(H)")] {
                if !hyp {
                    out.push(
                        Finding::new(claim, variant, inst.clone(), Verdict::Vacuous)
                            .with_note(format!("{what} is non-trivial")),
                    );
                    continue;
                }
                for &g in &targets {
                    let lhs = ctx.p(hi, ki, n, m, g)?;
                    out.push(Finding::judged(
                        claim,
                        variant,
                        inst.clone().with_g(g),
                        lhs <= bound,
                        Witness::new(&lhs, "<=", &bound),
                    ));
                }
            }
        }
        ClaimId::T3i | ClaimId::T3ii | ClaimId::C6 => {
            let p = match smallest_prime_divisor(&ctx.table) {
                Ok(p) => p as usize,
                Err(Error::TrivialGroup) => {
                    out.push(
                        Finding::new(claim, None, inst, Verdict::PreconditionFailed)
                            .with_note("|G| = 1 has no prime divisor"),
                    );
                    return Ok(out);
                }
                Err(e) => return Err(e),
            };
            let bound_i = q(2 * pow(p, n) + big(p) - 2, pow(p, m + n));
            match claim {
                ClaimId::T3i => {
                    for &g in &targets {
                        let lhs = ctx.p(hi, ki, n, m, g)?;
                        out.push(Finding::judged(
                            claim,
                            None,
                            inst.clone().with_g(g),
                            lhs <= bound_i,
                            Witness::new(&lhs, "<=", &bound_i),
                        ));
                    }
                }
                ClaimId::T3ii => {
                    let x = ctx.xdist(hi, n)?;
                    let cls = ctx.kconj(ki)?;
                    let y: BigUint = x
                        .support()
                        .into_iter()
                        .filter(|&w| cls.centralizer_order(w) == 1)
                        .map(|w| x.count(w).clone())
                        .sum();
                    let c = centralizer_of_subgroup(&ctx.table, h, k)?.order();
                    let (hn, km) = (pow(h.order(), n), pow(k.order(), m));
                    let den = hn.clone() * km;
                    let bound = q((big(1) - big(p)) * BigInt::from(y.clone()) + big(p) * hn, den.clone())
                        - q((big(k.order()) + big(p)) * pow(c, n), den);
                    for &g in &targets {
                        let lhs = ctx.p(hi, ki, n, m, g)?;
                        out.push(Finding::judged(
                            claim,
                            None,
                            inst.clone().with_g(g).with_extra("Y", &y).with_extra("C_H(K)", c),
                            lhs >= bound,
                            Witness::new(&lhs, ">=", &bound),
                        ));
                    }
                }
                _ => {
                    let attained = ctx
                        .table
                        .elements()
                        .map(|g| Ok((g, ctx.p(hi, ki, n, m, g)?)))
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .find(|(_, v)| *v == bound_i);
                    match attained {
                        None => out.push(
                            Finding::new(claim, None, inst, Verdict::Vacuous)
                                .with_note(format!("no g attains {bound_i}")),
                        ),
                        Some((g, _)) => {
                            let c = centralizer_of_subgroup(&ctx.table, h, k)?.order();
                            let lhs = pow(h.order() / c, n);
                            let pb = big(p);
                            let num = big(2) * pow(p, n + 1) - big(2) * pow(p, 3) - pb.clone() * pb.clone()
                                + big(2) * pb.clone();
                            let rhs = q(num, big(2) * (big(2) * pb.clone() * pb.clone() + pb - 2));
                            let ok = BigRational::from_integer(lhs.clone()) <= rhs;
                            let mut f = Finding::judged(
                                claim,
                                None,
                                inst.with_extra("attained_at", g),
                                ok,
                                Witness::new(format!("|H:C_H(K)|^n = {lhs}"), "<=", &rhs),
                            );
                            if rhs.is_negative() {
                                f = f.with_note("right-hand side is negative");
                            }
                            out.push(f);
                        }
                    }
                }
            }
        }
        _ => return Err(Error::ConfigInvalid(format!("{claim} is not a pair claim"))),
    }
    Ok(out)
}

/// Prop. 4 style monotonicity for a nested pair `H ≤ K`, both against `G`.
pub(crate) fn monotonicity(ctx: &GroupCtx, hi: usize, ki: usize, n: usize, m: usize) -> Result<Vec<Finding>> {
    let claim = ClaimId::P4;
    let full = ctx.full;
    let inst = ctx.pair_instance(hi, ki, n, m);
    let dh = ctx.dist(hi, full, n, m)?;
    let dk = ctx.dist(ki, full, n, m)?;
    let mut support = dh.support();
    support.extend(dk.support());
    support.sort_unstable();
    support.dedup();
    let ch = ctx.kconj(hi)?;
    let ck = ctx.kconj(ki)?;
    let classes_agree = ctx
        .table
        .elements()
        .all(|x| ch.acting_order() * ck.centralizer_order(x) == ck.acting_order() * ch.centralizer_order(x));
    let mut out = Vec::new();
    for g in ctx.targets(&support) {
        let a = q(dh.count(g).clone(), dh.expected_total());
        let b = q(dk.count(g).clone(), dk.expected_total());
        let gi = inst.clone().with_g(g);
        out.push(Finding::judged(claim, None, gi.clone(), a >= b, Witness::new(&a, ">=", &b)));
        out.push(Finding::judged(
            claim,
            Some("equality_iff"),
            gi,
            (a == b) == classes_agree,
            Witness::new(format!("equal = {}", a == b), "iff", format!("Cl_H = Cl_K everywhere = {classes_agree}")),
        ));
    }
    Ok(out)
}

/// Prop. 5 for `H ≤ N ◁ G`, with `g` sent to `gN`.
pub(crate) fn quotient_check(ctx: &GroupCtx, hi: usize, ni: usize, n: usize, m: usize) -> Result<Vec<Finding>> {
    let claim = ClaimId::P5;
    let full = ctx.full;
    let quo = quotient_group(&ctx.table, ctx.sub(ni))?;
    let qfull = SubgroupRef::full(&quo.table);
    let himage = quo.image(&ctx.table, ctx.sub(hi))?;
    let qd = full_distribution(&quo.table, &himage, &qfull, n, m)?;
    let special = hi == full;
    let inst = ctx.pair_instance(hi, full, n, m).with_extra("N", &ctx.specs[ni]);
    let d = ctx.dist(hi, full, n, m)?;
    let support = d.support();
    let meets_trivially = {
        let nested = subgroup_closure(&ctx.table, &support)?;
        nested.members().iter().all(|&x| x == 0 || !ctx.sub(ni).contains(x))
    };
    let variant = if special { Some("special_case") } else { None };
    let mut out = Vec::new();
    for g in ctx.targets(&support) {
        let gn = quo.project(g);
        let lhs = q(d.count(g).clone(), d.expected_total());
        let rhs = q(qd.count(gn).clone(), qd.expected_total());
        let gi = inst.clone().with_g(g).with_extra("gN", gn);
        out.push(Finding::judged(claim, variant, gi.clone(), lhs <= rhs, Witness::new(&lhs, "<=", &rhs)));
        if !special {
            if meets_trivially {
                out.push(Finding::judged(claim, Some("equality"), gi, lhs == rhs, Witness::new(&lhs, "=", &rhs)));
            } else {
                out.push(
                    Finding::new(claim, Some("equality"), gi, Verdict::Vacuous)
                        .with_note("N meets [nH,mG] non-trivially"),
                );
            }
        }
    }
    Ok(out)
}

fn no_table(claim: ClaimId, inst: Instance, e: &Error) -> Finding {
    Finding::new(claim, None, inst, Verdict::PreconditionFailed).with_note(format!("character table unavailable: {e}"))
}

/// Frobenius-reciprocity bound `p_g^{(1,1)}(H,G) ≤ |G:H|·d(G)`.
pub(crate) fn frob_bound(ctx: &GroupCtx, hi: usize) -> Result<Vec<Finding>> {
    let claim = ClaimId::FROB_BOUND;
    let full = ctx.full;
    let inst = ctx.pair_instance(hi, full, 1, 1);
    let table = match ctx.chars() {
        Ok(t) => t,
        Err(e) => return Ok(vec![no_table(claim, inst, &e)]),
    };
    let h = ctx.sub(hi);
    let index = ctx.table.order() / h.order();
    let rhs = BigRational::from_integer(big(index)) * ctx.p(full, full, 1, 1, 0)?;
    let vanish = (0..table.irreducible_count())
        .map(|i| vanishes_outside(&ctx.table, &table, i, h))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|v| v);
    let d = ctx.dist(hi, full, 1, 1)?;
    let mut out = Vec::new();
    for g in ctx.targets(&d.support()) {
        let lhs = q(d.count(g).clone(), d.expected_total());
        let ok = lhs <= rhs && (lhs == rhs) == vanish;
        out.push(
            Finding::judged(claim, None, inst.clone().with_g(g), ok, Witness::new(&lhs, "<=", &rhs))
                .with_note(format!("equality = {}, all characters vanish off H = {vanish}", lhs == rhs)),
        );
    }
    Ok(out)
}

/// Whether `ζ^{(n,m)}` is a class function and then a character.
pub(crate) fn zeta_character(ctx: &GroupCtx, hi: usize, n: usize, m: usize) -> Result<Vec<Finding>> {
    let claim = ClaimId::ZETA_CHAR;
    let full = ctx.full;
    let inst = ctx.pair_instance(hi, full, n, m);
    let table = match ctx.chars() {
        Ok(t) => t,
        Err(e) => return Ok(vec![no_table(claim, inst, &e)]),
    };
    let d = ctx.dist(hi, full, n, m)?;
    let f = match ClassFunction::from_counts(&table, d.counts()) {
        Ok(f) => f,
        Err(Error::NonClassFunction { class }) => {
            return Ok(vec![Finding::new(claim, None, inst, Verdict::PreconditionFailed)
                .with_note(format!("not constant on class {class}"))])
        }
        Err(e) => return Err(e),
    };
    let check = is_character(&f, &table);
    let mults: Vec<String> = check.rounded.iter().map(ToString::to_string).collect();
    Ok(vec![Finding::judged(
        claim,
        None,
        inst,
        check.is_character,
        Witness::new(
            format!("{:.3e}", check.rounding_error.max(check.reconstruction_error)),
            "<",
            format!("{ROUNDING_TOL:e}"),
        ),
    )
    .with_note(format!("multiplicities [{}]", mults.join(",")))])
}

/// EQ3, EQ4 and PSI.
pub(crate) fn group_claim(ctx: &GroupCtx, claim: ClaimId) -> Result<Vec<Finding>> {
    let full = ctx.full;
    let order = ctx.table.order();
    let inst = ctx.base();
    let table = match ctx.chars() {
        Ok(t) => t,
        Err(e) => return Ok(vec![no_table(claim, inst, &e)]),
    };
    let finding = match claim {
        ClaimId::EQ3 => {
            let mut dev: f64 = 0.0;
            for g in ctx.table.elements() {
                let exact = crate::comm::rational_to_f64(&ctx.p(full, full, 1, 1, g)?);
                dev = dev.max((prob_char_pg(&ctx.table, &table, g)? - exact).abs());
            }
            Finding::judged(claim, None, inst, dev < FORMULA_TOL, Witness::new(format!("{dev:.3e}"), "<", format!("{FORMULA_TOL:e}")))
        }
        ClaimId::EQ4 => {
            let k = conjugacy(&ctx.table, ctx.sub(full))?.class_count();
            let d = ctx.p(full, full, 1, 1, 0)?;
            let kg = q(k, order);
            let ok = table.irreducible_count() == k && d == kg;
            Finding::judged(claim, None, inst, ok, Witness::new(&d, "=", &kg))
                .with_note(format!("{} irreducibles, {k} classes", table.irreducible_count()))
        }
        ClaimId::PSI => {
            let psi = psi_class_function(&ctx.table, &table)?;
            let total: u64 = psi.counts.iter().sum();
            let ok = psi.max_deviation < ROUNDING_TOL && total == (order * order) as u64;
            Finding::judged(
                claim,
                None,
                inst,
                ok,
                Witness::new(format!("{:.3e}", psi.max_deviation), "<", format!("{ROUNDING_TOL:e}")),
            )
        }
        _ => return Err(Error::ConfigInvalid(format!("{claim} is not a group claim"))),
    };
    Ok(vec![finding])
}

/// Eq. (7) for one normal subgroup.
pub(crate) fn eq7(ctx: &GroupCtx, hi: usize) -> Result<Vec<Finding>> {
    let claim = ClaimId::EQ7;
    let full = ctx.full;
    let inst = ctx.pair_instance(hi, full, 1, 1);
    let table = match ctx.chars() {
        Ok(t) => t,
        Err(e) => return Ok(vec![no_table(claim, inst, &e)]),
    };
    let mut dev: f64 = 0.0;
    for g in ctx.table.elements() {
        let exact = crate::comm::rational_to_f64(&ctx.p(hi, full, 1, 1, g)?);
        dev = dev.max((prob_char_relative(&ctx.table, &table, ctx.sub(hi), g)? - exact).abs());
    }
    Ok(vec![Finding::judged(
        claim,
        None,
        inst,
        dev < FORMULA_TOL,
        Witness::new(format!("{dev:.3e}"), "<", format!("{FORMULA_TOL:e}")),
    )])
}

pub(crate) fn normal_indices(ctx: &GroupCtx) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..ctx.subgroups.len() {
        if ctx.is_normal(i)? {
            out.push(i);
        }
    }
    Ok(out)
}

pub(crate) fn contains(ctx: &GroupCtx, big: usize, small: usize) -> bool {
    ctx.sub(small).is_subset_of(ctx.sub(big))
}

/// Prop. 1 on `E × F`, with `A, B` drawn from `E` and `C, D` from `F`.
pub fn check_multiplicativity(e_spec: &str, f_spec: &str, cfg: &AuditConfig) -> Result<Vec<Finding>> {
    let claim = ClaimId::P1;
    let e = parse_group_spec(e_spec, cfg.max_order)?;
    let f = parse_group_spec(f_spec, cfg.max_order)?;
    let prod = direct_product(&e, &f, cfg.max_order)?;
    let pspec = format!("{e_spec}x{f_spec}");
    let pick = |g: &GroupTable| {
        let mut v = vec![SubgroupRef::full(g)];
        if let Some(s) = all_subgroups(g).into_iter().find(|s| s.order() > 1 && s.order() < g.order()) {
            v.push(s);
        }
        v
    };
    let (es, fs) = (pick(&e), pick(&f));
    let lift = |a: &SubgroupRef, c: &SubgroupRef| {
        SubgroupRef::from_members(
            &prod.table,
            a.members().iter().flat_map(|&x| c.members().iter().map(move |&y| (x, y))).map(|(x, y)| prod.embed(x, y)),
        )
    };
    let mut out = Vec::new();
    for a in &es {
        for b in &es {
            for c in &fs {
                for d in &fs {
                    let ac = lift(a, c)?;
                    let bd = lift(b, d)?;
                    for &n in &cfg.n_values {
                        for &m in &cfg.m_values {
                            let de = full_distribution(&e, a, b, n, m)?;
                            let df = full_distribution(&f, c, d, n, m)?;
                            let dp = full_distribution(&prod.table, &ac, &bd, n, m)?;
                            let inst = Instance::group(&pspec)
                                .with_h(&subgroup_spec(&prod.table, &ac))
                                .with_k(&subgroup_spec(&prod.table, &bd))
                                .with_weights(n, m)
                                .with_extra("A", subgroup_spec(&e, a))
                                .with_extra("B", subgroup_spec(&e, b))
                                .with_extra("C", subgroup_spec(&f, c))
                                .with_extra("D", subgroup_spec(&f, d));
                            let targets = |g: &GroupTable, dist: &CommDistribution| match cfg.g_policy {
                                GPolicy::All => g.elements().collect::<Vec<_>>(),
                                GPolicy::Support => {
                                    let mut s = dist.support();
                                    if !s.contains(&0) {
                                        s.insert(0, 0);
                                    }
                                    s
                                }
                            };
                            for &x in &targets(&e, &de) {
                                for &y in &targets(&f, &df) {
                                    let xy = prod.embed(x, y);
                                    let lhs = q(dp.count(xy).clone(), dp.expected_total());
                                    let pe = q(de.count(x).clone(), de.expected_total());
                                    let pf = q(df.count(y).clone(), df.expected_total());
                                    let rhs = pe.clone() * pf.clone();
                                    out.push(Finding::judged(
                                        claim,
                                        None,
                                        inst.clone().with_g(xy).with_extra("e", x).with_extra("f", y),
                                        lhs == rhs,
                                        Witness::new(&lhs, "=", format!("{pe} * {pf}")),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
