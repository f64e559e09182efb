//! SVG snapshots of Look events, drawn in the normalized frame
//! (c(R) at the middle, C(R) of radius 1).

use std::fmt::Write as _;

use crate::configuration::Configuration;
use crate::geometry::{Point, Trajectory};
use crate::pattern::{embed_pattern, modified_pattern, parking_circles, Pattern, Sectors};
use crate::simulator::{EventKind, ExecutionTrace, TraceRecord};
use crate::Error;

const SIZE: f64 = 480.0;
const SCALE: f64 = 200.0;

fn px(p: Point) -> (f64, f64) {
    (SIZE / 2.0 + p.x * SCALE, SIZE / 2.0 - p.y * SCALE)
}

fn circle(s: &mut String, radius: f64, style: &str) {
    let _ = writeln!(s, r#"<circle cx="{0}" cy="{0}" r="{1:.3}" fill="none" {style}/>"#, SIZE / 2.0, radius * SCALE);
}

fn polyline(s: &mut String, t: &Trajectory, style: &str) {
    let steps = 48;
    let pts: Vec<String> = (0..=steps)
        .map(|k| {
            let (x, y) = px(t.point_at(t.length() * k as f64 / steps as f64));
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" {style}/>"#, pts.join(" "));
}

/// One SVG for a Look record: C(R), C^T, C^B, the sectors and F′ targets
/// when F can be embedded, pending paths, and the robots (moving ones in
/// orange, with multiplicities).
pub fn render_look(rec: &TraceRecord, f: &Pattern) -> Result<String, Error> {
    let pos = rec.pos.as_ref().ok_or_else(|| Error::MalformedTrace { line: rec.e + 1, message: "look without snapshot".into() })?;
    let raw = Configuration::new(pos.clone(), *f.tol())?;
    let map = raw.normalizing_map();
    let r = raw.transformed(&map);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    circle(&mut s, 1.0, r#"stroke="black" stroke-width="1.5""#);
    if let Ok(park) = parking_circles(&r, f) {
        circle(&mut s, park.top.radius, r##"stroke="#3366cc" stroke-dasharray="6 4""##);
        circle(&mut s, park.bottom.radius, r##"stroke="#3366cc" stroke-dasharray="2 3""##);
        if let Ok(e) = embed_pattern(&r, f) {
            if let Ok(sectors) = Sectors::new(&r, park.top.radius) {
                for i in 0..sectors.count() {
                    let (x, y) = px(Point::polar(Point::ORIGIN, 1.0, sectors.leading_angle(i)));
                    let _ = writeln!(s, r##"<line x1="{0}" y1="{0}" x2="{x:.2}" y2="{y:.2}" stroke="#aaaaaa"/>"##, SIZE / 2.0);
                }
            }
            for t in modified_pattern(f, &e) {
                let (x, y) = px(t);
                let _ = writeln!(s, r##"<rect x="{:.2}" y="{:.2}" width="8" height="8" fill="none" stroke="#2a9d55"/>"##, x - 4.0, y - 4.0);
            }
        }
    }
    if let Some(pend) = &rec.pend {
        for t in pend.iter().flatten() {
            polyline(&mut s, &t.transformed(&map), r##"stroke="#e07020" stroke-width="1""##);
        }
    }
    for (p, k) in r.distinct() {
        let moving = rec.pend.as_ref().is_some_and(|pend| {
            (0..pos.len()).any(|i| r.points()[i] == p && pend.get(i).is_some_and(Option::is_some))
        });
        let (x, y) = px(p);
        let fill = if moving { "#e07020" } else { "#222222" };
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="{fill}"/>"#);
        if k > 1 {
            let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">{k}</text>"#, x + 6.0, y - 6.0);
        }
    }
    let task = rec.task.map_or("?".to_string(), |t| t.to_string());
    let _ = writeln!(
        s,
        r#"<text x="8" y="18" font-size="14" font-family="sans-serif">event {} · robot {} · {task}</text>"#,
        rec.e, rec.r
    );
    s.push_str("</svg>\n");
    Ok(s)
}

/// File name and SVG for every Look of the trace, in order.
pub fn render_trace(trace: &ExecutionTrace, f: &Pattern) -> Result<Vec<(String, String)>, Error> {
    trace
        .records
        .iter()
        .filter(|r| r.k == EventKind::Look)
        .map(|r| Ok((format!("look-{:06}.svg", r.e), render_look(r, f)?)))
        .collect()
}
