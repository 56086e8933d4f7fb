//! Text and JSON renderings of reports.

use serde_json::{json, Value};
use unabbrev::eval::Rate;
use unabbrev::pipeline::AblationRow;
use unabbrev::EvalReport;

fn rate(r: Rate) -> Value {
    json!({ "percent": r.percent, "defined": r.defined })
}

pub fn eval_json(r: &EvalReport) -> Value {
    json!({
        "sentences": r.sentences,
        "wrong_sentences": r.wrong_sentences,
        "tokens": r.total,
        "should_expand": r.should_expand,
        "should_not_expand": r.should_not_expand,
        "wrong": r.wrong,
        "overexpansions": r.overexpansions,
        "underexpansions": r.underexpansions,
        "wrong_expansions": r.wrong_expansions,
        "char_edits": r.char_edits,
        "ref_chars": r.ref_chars,
        "wer": rate(r.wer()),
        "oer": rate(r.oer()),
        "uer": rate(r.uer()),
        "ier": rate(r.ier()),
        "cer": rate(r.cer()),
        "ser": rate(r.ser()),
    })
}

pub fn ablation_text(rows: &[AblationRow]) -> String {
    let mut out = format!("{:<12} {:>8} {:>8} {:>8} {:>8}\n", "row", "WER", "OER", "UER", "IER");
    for r in rows {
        let p = &r.report;
        out += &format!(
            "{:<12} {:>8.2} {:>8.2} {:>8.2} {:>8.2}\n",
            r.name,
            p.wer().percent,
            p.oer().percent,
            p.uer().percent,
            p.ier().percent
        );
    }
    out
}

pub fn ablation_json(rows: &[AblationRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "row": r.name,
                    "lexblock": r.config.lexblock,
                    "memory": r.config.memory,
                    "subblock": r.config.subblock,
                    "report": eval_json(&r.report),
                })
            })
            .collect(),
    )
}

/// `(label, count)` rows with their share of the total.
pub fn counts_text(rows: &[(String, u64)]) -> String {
    let total: u64 = rows.iter().map(|r| r.1).sum();
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(5);
    let mut out = String::new();
    for (label, n) in rows {
        out += &format!("{label:<width$} {n:>8} {:>7.2}%\n", share(*n, total));
    }
    out += &format!("{:<width$} {total:>8}\n", "total");
    out
}

pub fn counts_json(rows: &[(String, u64)]) -> Value {
    let total: u64 = rows.iter().map(|r| r.1).sum();
    json!({
        "total": total,
        "rows": rows
            .iter()
            .map(|(label, n)| json!({ "label": label, "count": n, "percent": share(*n, total) }))
            .collect::<Vec<_>>(),
    })
}

fn share(n: u64, total: u64) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * n as f64 / total as f64
    }
}
