//! SVG 1.1 figures of rank-2 chart images.

use std::cmp::Ordering;
use std::fmt::Write;

use num_traits::{Signed, ToPrimitive, Zero};
use polyptych::polyhedra::rat::fmt_rat;
use polyptych::polyhedra::{lattice_points, ClassicalPolytope, RVec, Rat};

use crate::error::CliError;

const SCALE: f64 = 40.0;
const MARGIN: f64 = 30.0;

/// Vertices in counter-clockwise order starting from the smallest angle around the centroid.
pub fn vertex_cycle(p: &ClassicalPolytope) -> Vec<RVec> {
    let vs = p.vertices();
    if vs.is_empty() {
        return Vec::new();
    }
    let n = Rat::from_integer(vs.len().into());
    let cx = vs.iter().map(|v| v[0].clone()).sum::<Rat>() / &n;
    let cy = vs.iter().map(|v| v[1].clone()).sum::<Rat>() / &n;
    let rel = |v: &RVec| (&v[0] - &cx, &v[1] - &cy);
    let half = |(x, y): &(Rat, Rat)| y.is_negative() || (y.is_zero() && x.is_negative());
    let mut out = vs.to_vec();
    out.sort_by(|a, b| {
        let (ra, rb) = (rel(a), rel(b));
        half(&ra).cmp(&half(&rb)).then_with(|| {
            let cross = &ra.0 * &rb.1 - &ra.1 * &rb.0;
            if cross.is_positive() {
                Ordering::Less
            } else if cross.is_negative() {
                Ordering::Greater
            } else {
                (&ra.0 * &ra.0 + &ra.1 * &ra.1).cmp(&(&rb.0 * &rb.0 + &rb.1 * &rb.1))
            }
        })
    });
    out
}

fn f(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(0.0)
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// A figure of `p` with its lattice points; `data-vertices` on the polygon path lists the exact
/// rational vertex cycle.
pub fn render_chart(p: &ClassicalPolytope, title: &str) -> Result<String, CliError> {
    if p.dim() != 2 {
        return Err(CliError::new("E_NOT_RANK_2", format!("rendering needs rank 2, got {}", p.dim())));
    }
    let cycle = vertex_cycle(p);
    if cycle.is_empty() {
        return Err(CliError::new("E_EMPTY", "chart image is empty"));
    }
    let xs: Vec<f64> = cycle.iter().map(|v| f(&v[0])).collect();
    let ys: Vec<f64> = cycle.iter().map(|v| f(&v[1])).collect();
    let (x0, x1) = (xs.iter().cloned().fold(f64::MAX, f64::min).floor(), xs.iter().cloned().fold(f64::MIN, f64::max).ceil());
    let (y0, y1) = (ys.iter().cloned().fold(f64::MAX, f64::min).floor(), ys.iter().cloned().fold(f64::MIN, f64::max).ceil());
    let w = (x1 - x0) * SCALE + 2.0 * MARGIN;
    let h = (y1 - y0) * SCALE + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + (x - x0) * SCALE;
    let py = |y: f64| MARGIN + (y1 - y) * SCALE;

    let exact: Vec<String> = cycle.iter().map(|v| format!("{},{}", fmt_rat(&v[0]), fmt_rat(&v[1]))).collect();
    let mut d = String::new();
    for (i, (x, y)) in xs.iter().zip(&ys).enumerate() {
        let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, num(px(*x)), num(py(*y)));
    }
    d.push('Z');

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(w),
        num(h),
        num(w),
        num(h)
    );
    let _ = writeln!(s, "  <title>{title}</title>");
    let _ = writeln!(s, "  <metadata>{}</metadata>", exact.join(" "));
    if x0 <= 0.0 && 0.0 <= x1 {
        let _ = writeln!(s, r##"  <line x1="{0}" y1="0" x2="{0}" y2="{1}" stroke="#999" stroke-width="1"/>"##, num(px(0.0)), num(h));
    }
    if y0 <= 0.0 && 0.0 <= y1 {
        let _ = writeln!(s, r##"  <line x1="0" y1="{0}" x2="{1}" y2="{0}" stroke="#999" stroke-width="1"/>"##, num(py(0.0)), num(w));
    }
    let _ = writeln!(
        s,
        r##"  <path d="{d}" data-vertices="{}" fill="#cfe0f5" stroke="#1f4e8c" stroke-width="2"/>"##,
        exact.join(" ")
    );
    for pt in lattice_points(p) {
        let _ = writeln!(s, r##"  <circle cx="{}" cy="{}" r="3" fill="#1f4e8c"/>"##, num(px(pt[0] as f64)), num(py(pt[1] as f64)));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Reads the exact vertex cycle back from `data-vertices`.
pub fn parse_vertex_metadata(svg: &str) -> Option<Vec<RVec>> {
    let start = svg.find("data-vertices=\"")? + "data-vertices=\"".len();
    let end = start + svg[start..].find('"')?;
    svg[start..end]
        .split_whitespace()
        .map(|pair| {
            let (a, b) = pair.split_once(',')?;
            Some(vec![polyptych::polyhedra::rat::parse_rat(a)?, polyptych::polyhedra::rat::parse_rat(b)?])
        })
        .collect()
}
