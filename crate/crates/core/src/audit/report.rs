use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    check_multiplicativity, contains, eq7, frob_bound, group_claim, monotonicity, normal_indices, pair_claim,
    quotient_check, zeta_character, GroupCtx, PAIR_CLAIMS,
};
use super::claims::{ClaimId, Finding, Verdict, VerdictCounts};
use super::config::{AuditConfig, GPolicy};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config_echo: AuditConfig,
    pub seed: u64,
    /// How each claim in the catalog is read.
    pub legend: BTreeMap<String, String>,
    /// Verdict counts keyed by `TAG` or `TAG[variant]`.
    pub summary: BTreeMap<String, VerdictCounts>,
    pub hard_guarantee_violations: usize,
    pub findings: Vec<Finding>,
}

impl AuditReport {
    fn assemble(config: &AuditConfig, mut findings: Vec<Finding>) -> Self {
        // Stable: keeps battery order within each claim.
        findings.sort_by_key(|f| f.claim);
        let mut summary: BTreeMap<String, VerdictCounts> = BTreeMap::new();
        for f in &findings {
            summary.entry(f.key()).or_default().add(f.verdict);
        }
        let hard = findings.iter().filter(|f| f.verdict == Verdict::Violated && f.is_hard_guarantee()).count();
        let legend = ClaimId::ALL
            .iter()
            .filter(|c| config.wants(**c))
            .map(|c| (c.tag().to_string(), c.legend().to_string()))
            .collect();
        Self {
            config_echo: config.clone(),
            seed: config.seed,
            legend,
            summary,
            hard_guarantee_violations: hard,
            findings,
        }
    }

    pub fn violated(&self, claim: ClaimId) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(move |f| f.claim == claim && f.verdict == Verdict::Violated)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per finding; `extra` is flattened to `key=value` pairs joined
    /// by `;`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "claim", "variant", "group", "h", "k", "n", "m", "g", "extra", "verdict", "lhs", "relation", "rhs", "note",
            "runtime_ms",
        ])
        .expect("in-memory write");
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        for f in &self.findings {
            let i = &f.instance;
            let extra: Vec<String> = i.extra.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let verdict = serde_json::to_value(f.verdict).expect("verdict serializes");
            let (lhs, rel, rhs) = match &f.witness {
                Some(w) => (w.lhs.as_str(), w.relation.as_str(), w.rhs.as_str()),
                None => ("", "", ""),
            };
            w.write_record([
                f.claim.tag(),
                f.variant.as_deref().unwrap_or(""),
                &i.group,
                i.h.as_deref().unwrap_or(""),
                i.k.as_deref().unwrap_or(""),
                &opt(i.n),
                &opt(i.m),
                &opt(i.g),
                &extra.join(";"),
                verdict.as_str().unwrap_or_default(),
                lhs,
                rel,
                rhs,
                f.note.as_deref().unwrap_or(""),
                &f.runtime_ms.map(|t| t.to_string()).unwrap_or_default(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Wraps one check so a computation error becomes a `precondition_failed`
/// finding instead of aborting the run.
fn guarded(
    claim: ClaimId,
    inst: impl FnOnce() -> super::claims::Instance,
    timing: bool,
    run: impl FnOnce() -> Result<Vec<Finding>>,
) -> Vec<Finding> {
    let start = Instant::now();
    let mut out = match run() {
        Ok(f) => f,
        Err(e) => vec![Finding::new(claim, None, inst(), Verdict::PreconditionFailed).with_note(e.to_string())],
    };
    if timing {
        let ms = start.elapsed().as_millis() as u64;
        for f in &mut out {
            f.runtime_ms = Some(ms);
        }
    }
    out
}

fn audit_group(spec: &str, cfg: &AuditConfig) -> Result<Vec<Finding>> {
    let ctx = GroupCtx::new(spec, cfg)?;
    let t = cfg.timing;
    let base = || super::claims::Instance::group(spec);
    let mut out = Vec::new();
    for claim in [ClaimId::EQ3, ClaimId::EQ4, ClaimId::PSI] {
        if cfg.wants(claim) {
            out.extend(guarded(claim, base, t, || group_claim(&ctx, claim)));
        }
    }
    let normals = normal_indices(&ctx)?;
    if cfg.wants(ClaimId::EQ7) {
        for &h in &normals {
            out.extend(guarded(ClaimId::EQ7, base, t, || eq7(&ctx, h)));
        }
    }
    let pair_claims: Vec<ClaimId> = PAIR_CLAIMS.iter().copied().filter(|c| cfg.wants(*c)).collect();
    if !pair_claims.is_empty() {
        for (h, k) in ctx.pair_reps() {
            for &n in &cfg.n_values {
                for &m in &cfg.m_values {
                    for &claim in &pair_claims {
                        out.extend(guarded(claim, base, t, || pair_claim(&ctx, claim, h, k, n, m)));
                    }
                }
            }
        }
    }
    let singles = ctx.single_reps();
    if cfg.wants(ClaimId::FROB_BOUND) {
        for &h in &singles {
            out.extend(guarded(ClaimId::FROB_BOUND, base, t, || frob_bound(&ctx, h)));
        }
    }
    let weights: Vec<(usize, usize)> =
        cfg.n_values.iter().flat_map(|&n| cfg.m_values.iter().map(move |&m| (n, m))).collect();
    for &h in &singles {
        for &(n, m) in &weights {
            if cfg.wants(ClaimId::ZETA_CHAR) {
                out.extend(guarded(ClaimId::ZETA_CHAR, base, t, || zeta_character(&ctx, h, n, m)));
            }
            if cfg.wants(ClaimId::P4) {
                for k in 0..ctx.subgroups.len() {
                    if k != h && contains(&ctx, k, h) {
                        out.extend(guarded(ClaimId::P4, base, t, || monotonicity(&ctx, h, k, n, m)));
                    }
                }
            }
            if cfg.wants(ClaimId::P5) {
                for &nn in &normals {
                    if contains(&ctx, nn, h) || h == ctx.full {
                        out.extend(guarded(ClaimId::P5, base, t, || quotient_check(&ctx, h, nn, n, m)));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Runs every selected check over the configured battery.
pub fn run_battery(config: &AuditConfig) -> Result<AuditReport> {
    config.validate()?;
    if config.claims.as_ref().is_some_and(Vec::is_empty) {
        return Ok(AuditReport::assemble(config, Vec::new()));
    }
    let per_group = config
        .groups
        .par_iter()
        .map(|spec| audit_group(spec, config).map_err(|e| Error::ConfigInvalid(format!("group `{spec}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut findings: Vec<Finding> = per_group.into_iter().flatten().collect();
    if config.wants(ClaimId::P1) {
        let products = config
            .products
            .par_iter()
            .map(|(e, f)| check_multiplicativity(e, f, config))
            .collect::<Result<Vec<_>>>()?;
        findings.extend(products.into_iter().flatten());
    }
    Ok(AuditReport::assemble(config, findings))
}

/// Recomputes a single finding from its instance alone.
pub fn recheck(finding: &Finding, config: &AuditConfig) -> Result<Finding> {
    let cfg = AuditConfig { g_policy: GPolicy::All, timing: false, ..config.clone() };
    let inst = &finding.instance;
    let missing = |what: &str| Error::ConfigInvalid(format!("instance lacks `{what}`"));
    let candidates = if finding.claim == ClaimId::P1 {
        let (e, f) = inst
            .group
            .split_once('x')
            .ok_or_else(|| Error::ConfigInvalid(format!("`{}` is not a product", inst.group)))?;
        check_multiplicativity(e, f, &AuditConfig { n_values: vec![inst.n.unwrap_or(1)], m_values: vec![inst.m.unwrap_or(1)], ..cfg })?
    } else {
        let mut ctx = GroupCtx::new(&inst.group, &cfg)?;
        let h = inst.h.as_deref().map(|s| ctx.locate_spec(s)).transpose()?;
        let k = inst.k.as_deref().map(|s| ctx.locate_spec(s)).transpose()?;
        let (n, m) = (inst.n.unwrap_or(1), inst.m.unwrap_or(1));
        let h_ = || h.ok_or_else(|| missing("h"));
        match finding.claim {
            ClaimId::EQ3 | ClaimId::EQ4 | ClaimId::PSI => group_claim(&ctx, finding.claim)?,
            ClaimId::EQ7 => eq7(&ctx, h_()?)?,
            ClaimId::FROB_BOUND => frob_bound(&ctx, h_()?)?,
            ClaimId::ZETA_CHAR => zeta_character(&ctx, h_()?, n, m)?,
            ClaimId::P4 => monotonicity(&ctx, h_()?, k.ok_or_else(|| missing("k"))?, n, m)?,
            ClaimId::P5 => {
                let nspec = inst.extra.get("N").ok_or_else(|| missing("N"))?.clone();
                let ni = ctx.locate_spec(&nspec)?;
                quotient_check(&ctx, h_()?, ni, n, m)?
            }
            claim => pair_claim(&ctx, claim, h_()?, k.ok_or_else(|| missing("k"))?, n, m)?,
        }
    };
    candidates
        .into_iter()
        .find(|f| f.same_subject(finding))
        .ok_or_else(|| Error::ConfigInvalid("instance did not reproduce".into()))
}
