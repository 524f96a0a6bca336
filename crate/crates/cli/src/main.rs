mod args;
mod render;

use std::fs;
use std::process::ExitCode;

use clap::Parser;
use num_bigint::BigUint;
use serde_json::{json, Value};

use args::{AuditArgs, ChartabArgs, Cli, Command, FileConfig, MethodArg, Output, PredicateArg, ProbArgs, Weighted};
use commdeg_core::audit::{run_battery, AuditConfig, ClaimId};
use commdeg_core::character::{
    character_table, prob_char_exact, CharTableOptions, CharacterTable, CharacterTableJson,
};
use commdeg_core::comm::{
    brute_counts, comm_distribution, Predicate, full_distribution, profile_from_distribution, ClassFormula, CommParams,
    ExactProb, Method,
};
use commdeg_core::group::{
    center, conjugacy, is_normal, parse_group_spec, parse_subgroup_spec, subgroup_spec, ElemId, GroupTable,
    SubgroupRef, DEFAULT_MAX_ORDER,
};
use commdeg_core::{comm::DEFAULT_BRUTE_CAP, Error};

/// Why a run stopped; each maps to a documented exit code.
enum Failure {
    Usage(String),
    Compute(String),
    HardViolation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GroupSpec { .. }
            | Error::SubgroupSpec { .. }
            | Error::UnknownFamily(_)
            | Error::InvalidPermutation(_)
            | Error::InvalidElement { .. }
            | Error::InvalidWeight { .. }
            | Error::ConfigInvalid(_)
            | Error::ForeignSubgroup => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type Run<T> = Result<T, Failure>;

struct Settings {
    output: Output,
    seed: u64,
    max_order: usize,
    brute_cap: u128,
    file: FileConfig,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::HardViolation(_) => 3,
            Failure::Compute(_) => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Usage(msg) | Failure::Compute(msg) => eprintln!("error: {msg}"),
                Failure::HardViolation(out) => {
                    print!("{out}");
                    eprintln!("error: a hard-guarantee claim was violated");
                }
            }
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: Cli) -> Run<String> {
    let file: FileConfig = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("--config {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("--config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    if let Some(t) = cli.threads.or(file.threads) {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let settings = Settings {
        output: cli.output.or(file.output).unwrap_or(Output::Table),
        seed: cli.seed.or(file.seed).unwrap_or(0),
        max_order: cli.max_order.or(file.max_order).unwrap_or(DEFAULT_MAX_ORDER),
        brute_cap: cli.brute_cap.or(file.brute_cap).unwrap_or(DEFAULT_BRUTE_CAP),
        file,
    };
    match cli.command {
        Command::Info(a) => info(&settings, a.group.as_deref()),
        Command::Prob(a) => prob(&settings, a, false),
        Command::Profile(a) => prob(&settings, a, true),
        Command::Zeta(a) => zeta(&settings, a),
        Command::Dist(a) => dist(&settings, a),
        Command::Chartab(a) => chartab(&settings, a),
        Command::Audit(a) => audit(&settings, a),
    }
}

fn group(s: &Settings, flag: Option<&str>) -> Run<(String, GroupTable)> {
    let spec = flag
        .map(String::from)
        .or_else(|| s.file.group.clone())
        .ok_or_else(|| usage("-G/--group is required"))?;
    let g = parse_group_spec(&spec, s.max_order).map_err(|e| match e {
        Error::ClosureTooLarge { .. } => Failure::Compute(format!("-G {spec}: {e}")),
        e => usage(format!("-G: {e}")),
    })?;
    Ok((spec, g))
}

fn subgroup(g: &GroupTable, flag: Option<&str>, file: Option<&str>, name: &str) -> Run<SubgroupRef> {
    let spec = flag.or(file).unwrap_or("full");
    parse_subgroup_spec(spec, g).map_err(|e| usage(format!("-{name}: {e}")))
}

enum Target {
    One(ElemId),
    All,
}

fn target(g: &GroupTable, flag: Option<&str>, file: Option<&Value>, default_all: bool) -> Run<Target> {
    let text = match (flag, file) {
        (Some(f), _) => f.to_string(),
        (None, Some(Value::String(s))) => s.clone(),
        (None, Some(Value::Number(n))) => n.to_string(),
        (None, Some(_)) => return Err(usage("config key `g` must be an id or \"all\"")),
        (None, None) if default_all => "all".into(),
        (None, None) => "0".into(),
    };
    if text == "all" {
        return Ok(Target::All);
    }
    let id: ElemId = text.parse().map_err(|_| usage(format!("-g: `{text}` is neither an element id nor `all`")))?;
    g.check_element(id).map_err(|e| usage(format!("-g: {e}")))?;
    Ok(Target::One(id))
}

struct Weights {
    n: usize,
    m: usize,
}

fn weights(s: &Settings, n: Option<u32>, m: Option<u32>) -> Run<Weights> {
    let n = n.or(s.file.n).unwrap_or(1) as usize;
    let m = m.or(s.file.m).unwrap_or(1) as usize;
    if n == 0 || m == 0 {
        return Err(usage("-n and -m must be at least 1"));
    }
    Ok(Weights { n, m })
}

fn info(s: &Settings, flag: Option<&str>) -> Run<String> {
    let (spec, g) = group(s, flag)?;
    let full = SubgroupRef::full(&g);
    let cls = conjugacy(&g, &full)?;
    let elements: Vec<Value> = g
        .elements()
        .map(|x| json!({"id": x, "label": g.label(x), "order": g.element_order(x), "class": cls.class_of(x)}))
        .collect();
    let doc = json!({
        "group": spec,
        "order": g.order(),
        "abelian": g.is_abelian(),
        "class_count": cls.class_count(),
        "center_order": center(&g).order(),
        "elements": elements,
    });
    Ok(match s.output {
        Output::Json => render::json(&doc),
        Output::Csv => render::csv(
            &["id", "label", "order", "class"],
            g.elements().map(|x| {
                vec![x.to_string(), g.label(x), g.element_order(x).to_string(), cls.class_of(x).to_string()]
            }),
        ),
        Output::Table => {
            let mut out = render::pairs(&[
                ("group", spec.clone()),
                ("order", g.order().to_string()),
                ("abelian", g.is_abelian().to_string()),
                ("classes", cls.class_count().to_string()),
                ("center order", center(&g).order().to_string()),
            ]);
            out.push('\n');
            out += &render::columns(
                &["id", "label", "order", "class"],
                g.elements().map(|x| {
                    vec![x.to_string(), g.label(x), g.element_order(x).to_string(), cls.class_of(x).to_string()]
                }),
            );
            out
        }
    })
}

fn table_for(s: &Settings, g: &GroupTable) -> Run<CharacterTable> {
    Ok(character_table(g, CharTableOptions { seed: s.seed, ..Default::default() })?)
}

/// Every `p_g` for the chosen method.
#[allow(clippy::too_many_arguments)]
fn evaluate(
    s: &Settings,
    g: &GroupTable,
    h: &SubgroupRef,
    k: &SubgroupRef,
    w: &Weights,
    method: MethodArg,
    predicate: PredicateArg,
) -> Run<Vec<ExactProb>> {
    let params = CommParams::new(g, h, k, w.n, w.m, 0)?;
    let all = |f: &dyn Fn(ElemId) -> BigUint, m: Method| -> Vec<ExactProb> {
        g.elements().map(|t| ExactProb::new(f(t), &params.with_target(t), m)).collect()
    };
    Ok(match method {
        MethodArg::Auto | MethodArg::Dist => profile_from_distribution(&full_distribution(g, h, k, w.n, w.m)?, h, k),
        MethodArg::Brute => {
            let counts = brute_counts(g, h, k, w.n, w.m, s.brute_cap)?;
            all(&|t| BigUint::from(counts[t]), Method::Brute)
        }
        MethodArg::Class => {
            let x = comm_distribution(g, h, w.n)?;
            let formula = ClassFormula::new(g, &x, k, w.m)?;
            all(&|t| formula.count(t, predicate.into()), Method::ClassFormula)
        }
        MethodArg::Char => {
            let full_k = k.order() == g.order();
            let full_h = h.order() == g.order();
            if w.n != 1 || w.m != 1 || !full_k || !(full_h || is_normal(g, h)?) {
                return Err(usage(
                    "--method char needs n = m = 1, K = full, and H = full or H normal",
                ));
            }
            let table = table_for(s, g)?;
            g.elements()
                .map(|t| prob_char_exact(g, &table, &params.with_target(t)))
                .collect::<Result<Vec<_>, _>>()?
        }
    })
}

fn prob(s: &Settings, a: ProbArgs, profile: bool) -> Run<String> {
    let Weighted { group: ga, h, k, n, m } = a.weighted;
    let (spec, g) = group(s, ga.group.as_deref())?;
    let hs = subgroup(&g, h.as_deref(), s.file.h.as_deref(), "H")?;
    let ks = subgroup(&g, k.as_deref(), s.file.k.as_deref(), "K")?;
    let w = weights(s, n, m)?;
    let method = a.method.or(s.file.method).unwrap_or(MethodArg::Auto);
    let predicate = a.predicate.or(s.file.predicate).unwrap_or(PredicateArg::Derived);
    let tgt = if profile {
        if a.g.is_some() {
            return Err(usage("-g is not accepted by profile"));
        }
        Target::All
    } else {
        target(&g, a.g.as_deref(), s.file.g.as_ref(), false)?
    };
    let values = evaluate(s, &g, &hs, &ks, &w, method, predicate)?;
    let params = CommParams::new(&g, &hs, &ks, w.n, w.m, 0)?;
    let cross = if method == MethodArg::Auto && params.tuple_count() <= BigUint::from(s.brute_cap) {
        let brute = evaluate(s, &g, &hs, &ks, &w, MethodArg::Brute, predicate)?;
        if let Some(bad) = g.elements().find(|&t| brute[t].value != values[t].value) {
            return Err(Failure::Compute(format!(
                "distribution engine and brute force disagree at g = {bad}: {} vs {}",
                values[bad].value, brute[bad].value
            )));
        }
        Some(brute)
    } else {
        None
    };
    let ids: Vec<ElemId> = match tgt {
        Target::One(x) => vec![x],
        Target::All => g.elements().collect(),
    };
    let header = json!({
        "group": spec,
        "h": subgroup_spec(&g, &hs),
        "k": subgroup_spec(&g, &ks),
        "h_order": hs.order(),
        "k_order": ks.order(),
        "n": w.n,
        "m": w.m,
        "method": values[0].method,
        "predicate": (method == MethodArg::Class).then(|| Predicate::from(predicate).to_string()),
    });
    let entry = |t: ElemId| {
        let mut e = json!({
            "g": t,
            "label": g.label(t),
            "value": {"num": values[t].value.numer().to_string(), "den": values[t].value.denom().to_string()},
            "float": values[t].to_f64(),
        });
        if let Some(b) = &cross {
            e["cross_check"] = json!({"method": b[t].method, "agrees": b[t].value == values[t].value});
        }
        e
    };
    Ok(match (s.output, &tgt) {
        (Output::Json, Target::One(x)) => {
            let mut doc = header;
            for (key, val) in entry(*x).as_object().expect("object") {
                doc[key] = val.clone();
            }
            render::json(&doc)
        }
        (Output::Json, Target::All) => {
            let mut doc = header;
            doc["profile"] = Value::Array(ids.iter().map(|&t| entry(t)).collect());
            render::json(&doc)
        }
        (Output::Csv, _) => render::csv(
            &["element_id", "label", "num", "den", "float", "method"],
            ids.iter().map(|&t| {
                vec![
                    t.to_string(),
                    g.label(t),
                    values[t].value.numer().to_string(),
                    values[t].value.denom().to_string(),
                    values[t].to_f64().to_string(),
                    values[t].method.to_string(),
                ]
            }),
        ),
        (Output::Table, _) => {
            let mut out = render::pairs(&[
                ("group", spec.clone()),
                ("H", format!("{} (order {})", subgroup_spec(&g, &hs), hs.order())),
                ("K", format!("{} (order {})", subgroup_spec(&g, &ks), ks.order())),
                ("n, m", format!("{}, {}", w.n, w.m)),
                ("method", values[0].method.to_string()),
                (
                    "cross-check",
                    match &cross {
                        Some(_) => "brute force agrees".into(),
                        None => "none".into(),
                    },
                ),
            ]);
            out.push('\n');
            out += &render::columns(
                &["g", "label", "p", "float"],
                ids.iter().map(|&t| {
                    vec![t.to_string(), g.label(t), values[t].value.to_string(), format!("{:.6}", values[t].to_f64())]
                }),
            );
            out
        }
    })
}

fn zeta(s: &Settings, a: args::ZetaArgs) -> Run<String> {
    let (spec, g) = group(s, a.group.group.as_deref())?;
    let hs = subgroup(&g, a.h.as_deref(), s.file.h.as_deref(), "H")?;
    let full = SubgroupRef::full(&g);
    let w = weights(s, a.n, a.m)?;
    let tgt = target(&g, a.g.as_deref(), s.file.g.as_ref(), true)?;
    let d = full_distribution(&g, &hs, &full, w.n, w.m)?;
    let ids: Vec<ElemId> = match tgt {
        Target::One(x) => vec![x],
        Target::All => g.elements().collect(),
    };
    Ok(match s.output {
        Output::Json => render::json(&json!({
            "group": spec,
            "h": subgroup_spec(&g, &hs),
            "n": w.n,
            "m": w.m,
            "zeta": ids.iter().map(|&t| json!({"g": t, "label": g.label(t), "count": d.count(t).to_string()})).collect::<Vec<_>>(),
        })),
        Output::Csv => render::csv(&["element_id", "count"], ids.iter().map(|&t| vec![t.to_string(), d.count(t).to_string()])),
        Output::Table => render::columns(
            &["g", "label", "zeta"],
            ids.iter().map(|&t| vec![t.to_string(), g.label(t), d.count(t).to_string()]),
        ),
    })
}

fn dist(s: &Settings, a: Weighted) -> Run<String> {
    let (spec, g) = group(s, a.group.group.as_deref())?;
    let hs = subgroup(&g, a.h.as_deref(), s.file.h.as_deref(), "H")?;
    let ks = subgroup(&g, a.k.as_deref(), s.file.k.as_deref(), "K")?;
    let w = weights(s, a.n, a.m)?;
    let d = full_distribution(&g, &hs, &ks, w.n, w.m)?;
    Ok(match s.output {
        Output::Json => render::json(&json!({
            "group": spec,
            "h": subgroup_spec(&g, &hs),
            "k": subgroup_spec(&g, &ks),
            "n": w.n,
            "m": w.m,
            "total": d.total().to_string(),
            "counts": d.counts().iter().map(ToString::to_string).collect::<Vec<_>>(),
        })),
        Output::Csv => d.to_csv(),
        Output::Table => render::columns(
            &["g", "label", "count"],
            g.elements().map(|t| vec![t.to_string(), g.label(t), d.count(t).to_string()]),
        ),
    })
}

fn chartab(s: &Settings, a: ChartabArgs) -> Run<String> {
    let (_, g) = group(s, a.group.group.as_deref())?;
    let table = match a.import.or_else(|| s.file.import.clone()) {
        Some(path) => {
            let text = fs::read_to_string(&path).map_err(|e| usage(format!("--import {}: {e}", path.display())))?;
            let json: CharacterTableJson =
                serde_json::from_str(&text).map_err(|e| usage(format!("--import {}: {e}", path.display())))?;
            CharacterTable::from_json(&g, &json)?
        }
        None => table_for(s, &g)?,
    };
    Ok(match s.output {
        Output::Json => render::json(&table.to_json()),
        Output::Csv => {
            let mut head = vec!["degree".to_string()];
            head.extend(table.class_reps().iter().map(|r| format!("class_{r}")));
            let head: Vec<&str> = head.iter().map(String::as_str).collect();
            render::csv(
                &head,
                (0..table.irreducible_count()).map(|i| {
                    let mut row = vec![table.degrees()[i].to_string()];
                    row.extend(table.character(i).iter().map(|z| render::complex(*z)));
                    row
                }),
            )
        }
        Output::Table => render::char_table(&g, &table),
    })
}

fn split_list(text: &str) -> Vec<String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn numbers(flag: &str, text: &str) -> Run<Vec<usize>> {
    split_list(text)
        .iter()
        .map(|t| match t.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(usage(format!("{flag}: `{t}` is not a positive integer"))),
        })
        .collect()
}

fn audit(s: &Settings, a: AuditArgs) -> Run<String> {
    let mut cfg = match (&a.battery, &s.file.audit) {
        (Some(name), _) => AuditConfig::battery(name).map_err(|e| usage(format!("--battery: {e}")))?,
        (None, Some(c)) => c.clone(),
        (None, None) => match &s.file.battery {
            Some(name) => AuditConfig::battery(name).map_err(|e| usage(format!("battery: {e}")))?,
            None => AuditConfig::default_battery(),
        },
    };
    if let Some(groups) = &a.groups {
        cfg.groups = split_list(groups);
    }
    let claims = a.claims.as_deref().map(split_list).or_else(|| s.file.claims.clone());
    if let Some(list) = claims {
        cfg.claims = Some(
            list.iter()
                .map(|c| c.parse::<ClaimId>().map_err(|e| usage(format!("--claims: {e}"))))
                .collect::<Run<Vec<_>>>()?,
        );
    }
    if let Some(p) = a.g_policy.or(s.file.g_policy) {
        cfg.g_policy = p.into();
    }
    if let Some(t) = &a.n_values {
        cfg.n_values = numbers("--n-values", t)?;
    }
    if let Some(t) = &a.m_values {
        cfg.m_values = numbers("--m-values", t)?;
    }
    cfg.timing |= a.timing;
    // Explicit global flags win over a config-file battery.
    if s.file.seed.is_some() || s.seed != 0 || s.file.audit.is_none() {
        cfg.seed = s.seed;
    }
    if s.file.audit.is_none() || s.max_order != DEFAULT_MAX_ORDER {
        cfg.max_order = s.max_order;
    }
    if s.file.audit.is_none() || s.brute_cap != DEFAULT_BRUTE_CAP {
        cfg.brute_cap = s.brute_cap;
    }
    let report = run_battery(&cfg)?;
    let out = match s.output {
        Output::Json => report.to_json() + "\n",
        Output::Csv => report.to_csv(),
        Output::Table => render::audit_summary(&report),
    };
    if report.hard_guarantee_violations > 0 {
        Err(Failure::HardViolation(out))
    } else {
        Ok(out)
    }
}
