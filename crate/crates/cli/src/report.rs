//! Report emitters: one Avg row and one Std row per (category, system)
//! group, as RFC-4180 CSV and as a Markdown pipe table.

use sumpipe_core::metrics::{AggregateRow, Stat};

const HEADERS: [&str; 11] = [
    "label",
    "n",
    "rouge1",
    "rouge2",
    "rougeL",
    "bertscore_f1",
    "blanc_help",
    "blanc_tune",
    "estime_alarms",
    "estime_soft",
    "words",
];

fn score(stat: Option<Stat>, pick: fn(Stat) -> f64) -> String {
    stat.map(|s| format!("{:.4}", pick(s))).unwrap_or_default()
}

fn count(stat: Option<Stat>, pick: fn(Stat) -> f64) -> String {
    stat.map(|s| format!("{:.2}", pick(s))).unwrap_or_default()
}

fn cells(row: &AggregateRow, kind: &str, pick: fn(Stat) -> f64) -> Vec<String> {
    vec![
        format!("{} ({})", kind, row.label),
        row.n.to_string(),
        score(row.rouge1, pick),
        score(row.rouge2, pick),
        score(row.rouge_l, pick),
        score(row.bertscore_f1, pick),
        score(row.blanc_help, pick),
        score(row.blanc_tune, pick),
        count(row.estime_alarms, pick),
        score(row.estime_soft, pick),
        count(row.words_summary, pick),
    ]
}

fn table_rows(rows: &[AggregateRow]) -> Vec<Vec<String>> {
    let mut out = Vec::with_capacity(rows.len() * 2);
    for row in rows {
        out.push(cells(row, "Avg", |s| s.mean));
        out.push(cells(row, "Std", |s| s.std));
    }
    out
}

pub fn emit_csv(rows: &[AggregateRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(HEADERS).expect("csv header");
    for record in table_rows(rows) {
        writer.write_record(&record).expect("csv row");
    }
    String::from_utf8(writer.into_inner().expect("csv buffer")).expect("csv is utf-8")
}

pub fn emit_markdown(rows: &[AggregateRow]) -> String {
    let mut out = String::new();
    out.push_str("| ");
    out.push_str(&HEADERS.join(" | "));
    out.push_str(" |\n|");
    out.push_str(&" --- |".repeat(HEADERS.len()));
    out.push('\n');
    for record in table_rows(rows) {
        out.push_str("| ");
        out.push_str(&record.join(" | "));
        out.push_str(" |\n");
    }
    out
}
