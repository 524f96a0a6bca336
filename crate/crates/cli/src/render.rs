use num_complex::Complex64;
use serde::Serialize;

use commdeg_core::audit::{AuditReport, Verdict};
use commdeg_core::character::CharacterTable;
use commdeg_core::group::GroupTable;

pub fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

pub fn csv(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

pub fn pairs(items: &[(&str, String)]) -> String {
    let width = items.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    items.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

/// Left-aligned columns separated by two spaces.
pub fn columns(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let rows: Vec<Vec<String>> = rows.collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(cell);
                s.extend(std::iter::repeat_n(' ', w - cell.chars().count() + 2));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(header.to_vec());
    for r in &rows {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}


pub fn char_table(g: &GroupTable, table: &CharacterTable) -> String {
    let mut header = vec!["".to_string()];
    header.extend(table.class_reps().iter().map(|&r| g.label(r)));
    let mut sizes = vec!["size".to_string()];
    sizes.extend(table.class_sizes().iter().map(ToString::to_string));
    let rows = std::iter::once(sizes).chain((0..table.irreducible_count()).map(|i| {
        let mut row = vec![format!("chi{i}")];
        row.extend(table.character(i).iter().map(|z| complex(*z)));
        row
    }));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    columns(&header, rows)
}

pub fn audit_summary(report: &AuditReport) -> String {
    let rows = report.summary.iter().map(|(k, c)| {
        vec![k.clone(), c.holds.to_string(), c.violated.to_string(), c.vacuous.to_string(), c.precondition_failed.to_string()]
    });
    let mut out = columns(&["claim", "holds", "violated", "vacuous", "precondition_failed"], rows);
    let hard: Vec<String> = report
        .findings
        .iter()
        .filter(|f| f.verdict == Verdict::Violated && f.is_hard_guarantee())
        .map(|f| format!("  {} on {}", f.key(), f.instance.group))
        .collect();
    out += &format!("\nhard-guarantee violations: {}\n", report.hard_guarantee_violations);
    for line in hard {
        out += &line;
        out.push('\n');
    }
    out
}

fn real(x: f64) -> String {
    let r = (x * 1e4).round() / 1e4;
    let r = if r == 0.0 { 0.0 } else { r };
    let s = format!("{r:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Four decimals, dropping a vanishing imaginary part.
pub fn complex(z: Complex64) -> String {
    let (re, im) = (real(z.re), real(z.im));
    if im == "0" {
        re
    } else if re == "0" {
        format!("{im}i")
    } else if z.im < 0.0 {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}
