//! Aggregates run records into per-family summary rows.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{validate_bound, Approach, BoundCheck, RunRecord};
use crate::benchgen::Family;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SummaryRow {
    pub approach: Approach,
    /// Family name, or `overall`.
    pub group: String,
    pub runs: usize,
    pub failures: usize,
    /// Failed runs count as inaccurate.
    pub accuracy: f64,
    pub mean_queries: f64,
    pub median_queries: f64,
    pub max_queries: usize,
    pub feasible_pct: f64,
    pub pref_satisfied_pct: f64,
    pub bound_checked: usize,
    pub bound_violations: usize,
}

pub fn median(values: &[usize]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid] as f64
    } else {
        (v[mid - 1] + v[mid]) as f64 / 2.0
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn row(approach: Approach, group: String, records: &[&RunRecord]) -> SummaryRow {
    let ok: Vec<_> = records.iter().filter_map(|r| r.metrics.as_ref()).collect();
    let queries: Vec<usize> = ok.iter().map(|m| m.queries).collect();
    let checks: Vec<BoundCheck> = records.iter().map(|r| validate_bound(r)).collect();
    SummaryRow {
        approach,
        group,
        runs: records.len(),
        failures: records.len() - ok.len(),
        accuracy: if records.is_empty() {
            0.0
        } else {
            ok.iter().filter(|m| m.preference_accurate).count() as f64 / records.len() as f64
        },
        mean_queries: mean(queries.iter().map(|&q| q as f64)),
        median_queries: median(&queries),
        max_queries: queries.iter().copied().max().unwrap_or(0),
        feasible_pct: mean(ok.iter().map(|m| m.feasible_pct)),
        pref_satisfied_pct: mean(ok.iter().map(|m| m.pref_satisfied_pct)),
        bound_checked: checks.iter().filter(|c| !matches!(c, BoundCheck::NotApplicable { .. })).count(),
        bound_violations: checks.iter().filter(|c| c.failed()).count(),
    }
}

/// One row per (approach, family) present, plus an `overall` row per approach.
/// Approaches appear in first-seen order, families in their canonical order.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut approaches: Vec<Approach> = Vec::new();
    for r in records {
        if !approaches.contains(&r.approach) {
            approaches.push(r.approach);
        }
    }
    let mut rows = Vec::new();
    for a in approaches {
        let mine: Vec<&RunRecord> = records.iter().filter(|r| r.approach == a).collect();
        for f in Family::ALL {
            let fam: Vec<&RunRecord> = mine.iter().copied().filter(|r| r.family == f).collect();
            if !fam.is_empty() {
                rows.push(row(a, f.name().to_string(), &fam));
            }
        }
        rows.push(row(a, "overall".into(), &mine));
    }
    rows
}

const HEADER: [&str; 12] = [
    "approach",
    "group",
    "runs",
    "failed",
    "accuracy",
    "mean_q",
    "median_q",
    "max_q",
    "feasible",
    "pref_sat",
    "bound_n",
    "bound_fail",
];

fn cells(r: &SummaryRow) -> [String; 12] {
    [
        r.approach.to_string(),
        r.group.clone(),
        r.runs.to_string(),
        r.failures.to_string(),
        format!("{:.3}", r.accuracy),
        format!("{:.2}", r.mean_queries),
        format!("{:.1}", r.median_queries),
        r.max_queries.to_string(),
        format!("{:.3}", r.feasible_pct),
        format!("{:.3}", r.pref_satisfied_pct),
        r.bound_checked.to_string(),
        r.bound_violations.to_string(),
    ]
}

/// Fixed-width text table.
pub fn render_table(rows: &[SummaryRow]) -> String {
    let body: Vec<[String; 12]> = rows.iter().map(cells).collect();
    let widths: Vec<usize> = (0..HEADER.len())
        .map(|i| body.iter().map(|c| c[i].len()).chain([HEADER[i].len()]).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    let mut line = |fields: Vec<&str>| {
        let padded: Vec<String> = fields
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (f, w))| if i < 2 { format!("{f:<w$}") } else { format!("{f:>w$}") })
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(HEADER.to_vec());
    for c in &body {
        line(c.iter().map(String::as_str).collect());
    }
    out
}

pub fn render_csv(rows: &[SummaryRow]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&cells(r).join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Metrics;

    fn record(id: usize, family: Family, approach: Approach, queries: Option<usize>, accurate: bool) -> RunRecord {
        RunRecord {
            schema_version: 1,
            case_id: id,
            family,
            approach,
            seed: 0,
            eta: 0.0,
            epsilon: 0.07,
            n: 5,
            include_truth: true,
            padded: false,
            result: None,
            metrics: queries.map(|q| Metrics {
                preference_accurate: accurate,
                queries: q,
                feasible_pct: 1.0,
                pref_satisfied_pct: if accurate { 1.0 } else { 0.5 },
                reward: 1.0,
                optimum: Some(1.0),
                regret: Some(0.0),
                planner_gap: Some(0.0),
                bound_rhs: Some(0.35),
                truth_index: Some(0),
            }),
            error: queries.is_none().then(|| "boom".to_string()),
        }
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3, 1, 2]), 2.0);
        assert_eq!(median(&[4, 1, 2, 3]), 2.5);
        assert_eq!(median(&[]), 0.0);
    }

    #[test]
    fn five_family_rows_plus_overall() {
        let recs: Vec<RunRecord> = Family::ALL
            .iter()
            .enumerate()
            .map(|(i, &f)| record(i * 20, f, Approach::Active, Some(i), true))
            .collect();
        let rows = summarize(&recs);
        assert_eq!(rows.len(), 6);
        let families: Vec<_> = rows[..5].iter().map(|r| r.group.clone()).collect();
        assert_eq!(families, Family::ALL.map(|f| f.name().to_string()).to_vec());
        assert_eq!(rows[5].group, "overall");
        assert_eq!(rows[5].median_queries, 2.0);
        assert_eq!(rows[5].max_queries, 4);
    }

    #[test]
    fn failures_count_against_accuracy() {
        let recs = vec![
            record(0, Family::GeneralLocation, Approach::Active, Some(1), true),
            record(1, Family::GeneralLocation, Approach::Active, None, false),
            record(2, Family::GeneralLocation, Approach::Active, Some(2), false),
            record(3, Family::GeneralLocation, Approach::Active, Some(0), true),
        ];
        let rows = summarize(&recs);
        let overall = rows.last().unwrap();
        assert_eq!(overall.failures, 1);
        assert_eq!(overall.accuracy, 0.5);
        assert_eq!(overall.mean_queries, 1.0);
        assert_eq!(overall.bound_checked, 0);
    }

    #[test]
    fn csv_has_one_line_per_row() {
        let recs = vec![
            record(0, Family::GeneralLocation, Approach::Active, Some(1), true),
            record(0, Family::GeneralLocation, Approach::NonInteractive, Some(0), false),
        ];
        let rows = summarize(&recs);
        let csv = render_csv(&rows);
        assert_eq!(csv.lines().count(), 1 + rows.len());
        assert!(csv.lines().nth(3).unwrap().starts_with("non-interactive,general-location,"));
        let table = render_table(&rows);
        assert!(table.lines().next().unwrap().starts_with("approach"));
    }
}
