use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::Outcome;
use crate::algorithm::TaskId;
use crate::geometry::{Point, Trajectory};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Look,
    Compute,
    MoveStart,
    MoveProgress,
    MoveEnd,
}

/// One line of a trace.
///
/// Looks carry the snapshot (`pos`), its class and every robot's pending
/// remainder (`pend`, `null` when stationary). Computes carry the chosen
/// trajectory in world coordinates; moves carry the arc-length travelled so
/// far (`s`) and the robot's position (`at`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub e: usize,
    pub t: f64,
    pub r: usize,
    pub k: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<TaskId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<Vec<Point>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pend: Option<Vec<Option<Trajectory>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub traj: Option<Trajectory>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<Point>,
}

impl TraceRecord {
    pub fn new(e: usize, t: f64, r: usize, k: EventKind) -> Self {
        TraceRecord { e, t, r, k, task: None, pos: None, pend: None, traj: None, s: None, at: None }
    }
}

#[derive(Serialize, Deserialize)]
struct Footer {
    outcome: Outcome,
    events: usize,
}

/// The records of one run and how it ended.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExecutionTrace {
    pub records: Vec<TraceRecord>,
    pub outcome: Option<Outcome>,
}

impl ExecutionTrace {
    pub fn looks(&self) -> impl Iterator<Item = &TraceRecord> {
        self.records.iter().filter(|r| r.k == EventKind::Look)
    }

    /// One JSON object per record, then a footer line with the outcome.
    pub fn write_jsonl(&self, mut w: impl Write) -> Result<(), Error> {
        for rec in &self.records {
            serde_json::to_writer(&mut w, rec).map_err(std::io::Error::from)?;
            w.write_all(b"\n")?;
        }
        if let Some(outcome) = self.outcome {
            serde_json::to_writer(&mut w, &Footer { outcome, events: self.records.len() }).map_err(std::io::Error::from)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }

    pub fn read_jsonl(r: impl BufRead) -> Result<Self, Error> {
        let mut trace = ExecutionTrace::default();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            if trace.outcome.is_some() {
                return Err(Error::MalformedTrace { line: lineno, message: "record after the footer".into() });
            }
            let bad = |e: serde_json::Error| Error::MalformedTrace { line: lineno, message: e.to_string() };
            let value: serde_json::Value = serde_json::from_str(&line).map_err(bad)?;
            if value.get("outcome").is_some() {
                let footer: Footer = serde_json::from_value(value).map_err(bad)?;
                if footer.events != trace.records.len() {
                    return Err(Error::MalformedTrace {
                        line: lineno,
                        message: format!("footer counts {} events, found {}", footer.events, trace.records.len()),
                    });
                }
                trace.outcome = Some(footer.outcome);
                continue;
            }
            let rec: TraceRecord = serde_json::from_value(value).map_err(bad)?;
            if let Some(prev) = trace.records.last() {
                if rec.e <= prev.e {
                    return Err(Error::MalformedTrace { line: lineno, message: "event indices must increase".into() });
                }
            }
            if rec.k == EventKind::Look && (rec.pos.is_none() || rec.task.is_none()) {
                return Err(Error::MalformedTrace { line: lineno, message: "look without snapshot or task".into() });
            }
            trace.records.push(rec);
        }
        Ok(trace)
    }

    pub fn from_jsonl(s: &str) -> Result<Self, Error> {
        ExecutionTrace::read_jsonl(s.as_bytes())
    }
}
