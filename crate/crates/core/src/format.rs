//! The scenario file format.
//!
//! ```json
//! { "robots": [[x, y], ...],
//!   "pattern": [[x, y, mult], ...],
//!   "scheduler": {"kind": "async", "seed": 0, "nu": 0.05, "fairness": 256, "rigid": false},
//!   "limits": {"max_events": 100000, "stall": 5000},
//!   "tolerance": {"length": 1e-9, "angle": 1e-9} }
//! ```
//!
//! `scheduler`, `limits` and `tolerance` may be omitted or partial; missing
//! fields take their defaults. Unknown fields are rejected.

use serde::{Deserialize, Serialize};

use crate::geometry::{Point, Tolerance};
use crate::simulator::{AdversaryParams, Limits, Scenario};
use crate::Error;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    robots: Vec<Point>,
    pattern: Vec<(f64, f64, usize)>,
    #[serde(default)]
    scheduler: AdversaryParams,
    #[serde(default)]
    limits: Limits,
    #[serde(default)]
    tolerance: Tolerance,
}

// 1-based line and column of the first `"key":` in `text`, or of its start.
fn key_position(text: &str, key: &str) -> (usize, usize) {
    let needle = format!("\"{key}\"");
    let mut from = 0;
    while let Some(off) = text[from..].find(&needle) {
        let at = from + off;
        if text[at + needle.len()..].trim_start().starts_with(':') {
            let before = &text[..at];
            let line = before.matches('\n').count() + 1;
            let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            return (line, column);
        }
        from = at + needle.len();
    }
    (1, 1)
}

fn schema_at(text: &str, key: &str, message: String) -> Error {
    let (line, column) = key_position(text, key);
    Error::Schema { line, column, message }
}

/// Parses and validates a scenario file. Syntax and type errors carry the
/// position serde reports; semantic errors point at the offending key.
pub fn parse_scenario(text: &str) -> Result<Scenario, Error> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Schema {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line ").next().unwrap_or_default().to_string(),
    })?;
    if file.robots.len() < 3 {
        return Err(schema_at(text, "robots", format!("need at least 3 robots, got {}", file.robots.len())));
    }
    if let Some(k) = file.pattern.iter().position(|p| p.2 == 0) {
        return Err(schema_at(text, "pattern", format!("pattern point {k} has multiplicity 0")));
    }
    let total: usize = file.pattern.iter().map(|p| p.2).sum();
    if total != file.robots.len() {
        return Err(schema_at(text, "pattern", format!("multiplicities sum to {total} but there are {} robots", file.robots.len())));
    }
    if !(file.scheduler.nu > 0.0) || file.scheduler.fairness == 0 {
        return Err(schema_at(text, "scheduler", "nu must be positive and fairness at least 1".into()));
    }
    if Tolerance::new(file.tolerance.length, file.tolerance.angle).is_err() {
        return Err(schema_at(text, "tolerance", "tolerances must be positive".into()));
    }
    Ok(Scenario {
        robots: file.robots,
        pattern: file.pattern.into_iter().map(|(x, y, m)| (Point::new(x, y), m)).collect(),
        scheduler: file.scheduler,
        limits: file.limits,
        tolerance: file.tolerance,
    })
}

/// Pretty JSON that [`parse_scenario`] reads back to an equal scenario.
pub fn emit_scenario(s: &Scenario) -> String {
    let file = ScenarioFile {
        robots: s.robots.clone(),
        pattern: s.pattern.iter().map(|&(p, m)| (p.x, p.y, m)).collect(),
        scheduler: s.scheduler,
        limits: s.limits,
        tolerance: s.tolerance,
    };
    serde_json::to_string_pretty(&file).expect("scenario serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::SchedulerKind;

    const MINIMAL: &str = r#"{
  "robots": [[0, 0], [1, 0], [0, 1]],
  "pattern": [[0, 0, 1], [2, 0, 2]]
}"#;

    #[test]
    fn defaults_fill_missing_sections() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.robots.len(), 3);
        assert_eq!(s.pattern[1], (Point::new(2.0, 0.0), 2));
        assert_eq!(s.scheduler, AdversaryParams::default());
        assert_eq!(s.limits, Limits::default());
    }

    #[test]
    fn round_trip() {
        let mut s = parse_scenario(MINIMAL).unwrap();
        s.scheduler.kind = SchedulerKind::Ssync;
        s.scheduler.seed = 99;
        s.robots[1] = Point::new(0.1 + 0.2, 1.0 / 3.0);
        assert_eq!(parse_scenario(&emit_scenario(&s)).unwrap(), s);
    }

    #[test]
    fn syntax_error_position() {
        let bad = "{\n  \"robots\": [[0, 0], [1, 0]],\n  \"pattern\": [[0, 0, 1],]\n}";
        match parse_scenario(bad) {
            Err(Error::Schema { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_field_rejected() {
        let bad = r#"{"robots": [[0,0],[1,0],[0,1]], "pattern": [[0,0,3]], "speed": 2}"#;
        match parse_scenario(bad) {
            Err(Error::Schema { message, .. }) => assert!(message.contains("speed"), "{message}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn multiplicity_sum_points_at_pattern() {
        let bad = "{\n  \"robots\": [[0, 0], [1, 0], [0, 1]],\n  \"pattern\": [[0, 0, 1], [2, 0, 1]]\n}";
        match parse_scenario(bad) {
            Err(Error::Schema { line, column, message }) => {
                assert_eq!((line, column), (3, 3));
                assert!(message.contains("sum to 2"));
            }
            other => panic!("{other:?}"),
        }
    }
}
