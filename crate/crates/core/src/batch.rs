use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::pipeline::{corank_bounds, decide_fibred, CorankOptions, CorankReport, FibredOptions, FibredVerdict, Status};
use crate::presentation::{parse_blocks, Presentation};

#[derive(Clone, Debug, Default)]
pub struct BatchOptions {
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
    pub corank: bool,
    /// Adds wall-clock timings, which makes the report nondeterministic.
    pub timings: bool,
    pub fibred: FibredOptions,
    pub corank_opts: CorankOptions,
}

/// One line of the report.
#[derive(Clone, Debug, Serialize)]
pub struct CensusEntry {
    pub index: usize,
    pub line: usize,
    pub name: String,
    pub presentation: String,
    pub verdict: FibredVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corank: Option<CorankReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BatchSummary {
    pub total: usize,
    pub fibred: usize,
    pub not_fibred: usize,
    pub unknown: usize,
    pub errors: usize,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1000.0
}

fn run_entry(index: usize, line: usize, pres: &Presentation, opts: &BatchOptions) -> CensusEntry {
    let t0 = Instant::now();
    let verdict = decide_fibred(pres, &opts.fibred);
    let t_fibred = ms(t0);
    let t1 = Instant::now();
    let corank = opts.corank.then(|| corank_bounds(pres, &opts.corank_opts));
    let t_corank = ms(t1);
    CensusEntry {
        index,
        line,
        name: pres.name.clone(),
        presentation: pres.to_string(),
        verdict,
        corank,
        timings_ms: opts.timings.then(|| json!({ "fibred": t_fibred, "corank": t_corank })),
    }
}

/// Report records for every block of `text`, in input order, followed by a
/// summary record. Empty input gives no records.
pub fn batch_records(text: &str, opts: &BatchOptions) -> Result<(Vec<Value>, BatchSummary)> {
    let blocks = parse_blocks(text);
    let work = |blocks: &[(usize, Result<Presentation>)]| -> Vec<Value> {
        blocks
            .par_iter()
            .enumerate()
            .map(|(i, (line, parsed))| match parsed {
                Ok(p) => serde_json::to_value(run_entry(i, *line, p, opts)).unwrap_or(Value::Null),
                Err(e) => json!({ "index": i, "line": line, "error": e.to_string() }),
            })
            .collect()
    };
    let mut records = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Io(e.to_string()))?
            .install(|| work(&blocks)),
        None => work(&blocks),
    };
    let mut summary = BatchSummary { total: records.len(), ..Default::default() };
    for r in &records {
        match r.pointer("/verdict/status").and_then(Value::as_str) {
            Some(s) if s == status_name(Status::Fibred) => summary.fibred += 1,
            Some(s) if s == status_name(Status::NotFibred) => summary.not_fibred += 1,
            Some(_) => summary.unknown += 1,
            None => summary.errors += 1,
        }
    }
    if !records.is_empty() {
        records.push(json!({ "summary": summary }));
    }
    Ok((records, summary))
}

fn status_name(s: Status) -> String {
    serde_json::to_value(s).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

/// Reads presentations from `input` and writes one JSON object per line to
/// `output`.
pub fn run_batch(input: &Path, output: &Path, opts: &BatchOptions) -> Result<BatchSummary> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    let text = std::fs::read_to_string(input).map_err(io)?;
    let (records, summary) = batch_records(&text, opts)?;
    let mut out = String::new();
    for r in &records {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    std::fs::write(output, out).map_err(io)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolates_errors_and_keeps_order() {
        let text = "name: one\ngens: t a\nrel: taTa\n\nname: bad\ngens: a\nrel: q\n\nname: fin\ngens: a\nrel: a3\n";
        let (records, summary) = batch_records(text, &BatchOptions { jobs: Some(2), ..Default::default() }).unwrap();
        assert_eq!(records.len(), 4);
        assert_eq!(records[0]["name"], "one");
        assert!(records[1]["error"].is_string());
        assert_eq!(records[2]["verdict"]["status"], "NotFibred");
        assert_eq!(summary, BatchSummary { total: 3, fibred: 1, not_fibred: 1, unknown: 0, errors: 1 });
        assert!(batch_records("", &BatchOptions::default()).unwrap().0.is_empty());
    }
}
