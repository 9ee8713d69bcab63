//! Static SVG line plots and TSV dumps of estimator paths.
//!
//! The SVG is assembled from a handful of primitives (`polyline`, `line`,
//! `rect`, `text`) with fixed formatting, so identical specs produce
//! byte-identical documents.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::tailindex::EstimatePath;

const PANEL_W: f64 = 720.0;
const PANEL_H: f64 = 360.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 52.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    /// Keeps finite points only; returns the series and the number dropped.
    pub fn new(label: impl Into<String>, points: impl IntoIterator<Item = (f64, f64)>) -> (Series, usize) {
        let mut dropped = 0;
        let points = points
            .into_iter()
            .filter(|(x, y)| {
                let ok = x.is_finite() && y.is_finite();
                dropped += usize::from(!ok);
                ok
            })
            .collect();
        (
            Series {
                label: label.into(),
                points,
            },
            dropped,
        )
    }

    /// The defined points of an estimator path; undefined ones are counted.
    pub fn from_path(label: impl Into<String>, path: &EstimatePath) -> (Series, usize) {
        let pts = path.points().iter().map(|p| (p.k as f64, p.value.unwrap_or(f64::NAN)));
        Series::new(label, pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Vertical rule at an x value.
    X,
    /// Horizontal rule at a y value.
    Y,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefLine {
    pub axis: Axis,
    pub value: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub reference_lines: Vec<RefLine>,
    pub x_range: Option<(f64, f64)>,
    /// Free-text notes printed under the title (e.g. dropped-point counts).
    pub notes: Vec<String>,
}

impl PlotSpec {
    pub fn new(title: impl Into<String>, x_label: impl Into<String>, y_label: impl Into<String>) -> Self {
        PlotSpec {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            ..PlotSpec::default()
        }
    }

    /// Add a series, noting any points that had to be dropped.
    pub fn push_series(&mut self, (series, dropped): (Series, usize)) {
        if dropped > 0 {
            self.notes
                .push(format!("{}: {dropped} undefined points omitted", series.label));
        }
        self.series.push(series);
    }

    pub fn push_ref(&mut self, axis: Axis, value: f64, label: impl Into<String>) {
        self.reference_lines.push(RefLine {
            axis,
            value,
            label: label.into(),
        });
    }

    fn visible_points(&self) -> impl Iterator<Item = (usize, Vec<(f64, f64)>)> + '_ {
        self.series.iter().enumerate().map(move |(i, s)| {
            let pts = s
                .points
                .iter()
                .copied()
                .filter(|&(x, _)| self.x_range.is_none_or(|(lo, hi)| x >= lo && x <= hi))
                .collect();
            (i, pts)
        })
    }
}

/// One standalone SVG document for a single panel.
pub fn render_svg(spec: &PlotSpec) -> Result<String> {
    render_panels(std::slice::from_ref(spec))
}

/// Panels stacked vertically in one SVG document.
pub fn render_panels(panels: &[PlotSpec]) -> Result<String> {
    if panels.is_empty() {
        return Err(Error::EmptyPlot);
    }
    let height = PANEL_H * panels.len() as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{PANEL_W}" height="{height}" viewBox="0 0 {PANEL_W} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{PANEL_W}" height="{height}" fill="white"/>"#
    );
    for (i, spec) in panels.iter().enumerate() {
        render_panel(&mut out, spec, PANEL_H * i as f64)?;
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn render_panel(out: &mut String, spec: &PlotSpec, y0: f64) -> Result<()> {
    let series: Vec<(usize, Vec<(f64, f64)>)> = spec.visible_points().filter(|(_, p)| !p.is_empty()).collect();
    if series.is_empty() {
        return Err(Error::EmptyPlot);
    }
    let all = series.iter().flat_map(|(_, p)| p.iter());
    let (mut xlo, mut xhi, mut ylo, mut yhi) = all.fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if let Some((lo, hi)) = spec.x_range {
        xlo = lo;
        xhi = hi;
    }
    for r in &spec.reference_lines {
        if r.axis == Axis::Y && r.value.is_finite() {
            ylo = ylo.min(r.value);
            yhi = yhi.max(r.value);
        }
    }
    let (xlo, xhi) = widen(xlo, xhi);
    let (ylo, yhi) = widen(ylo, yhi);
    let pad = 0.05 * (yhi - ylo);
    let (ylo, yhi) = (ylo - pad, yhi + pad);

    let (left, right) = (MARGIN_L, PANEL_W - MARGIN_R);
    let (top, bottom) = (y0 + MARGIN_T, y0 + PANEL_H - MARGIN_B);
    let sx = |x: f64| left + (x - xlo) / (xhi - xlo) * (right - left);
    let sy = |y: f64| bottom - (y - ylo) / (yhi - ylo) * (bottom - top);

    let _ = writeln!(out, r#"<g class="panel">"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{}</text>"#,
        PANEL_W / 2.0,
        y0 + 22.0,
        escape(&spec.title)
    );
    for (i, note) in spec.notes.iter().enumerate() {
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" font-size="10" fill="#555">{}</text>"##,
            left + 4.0,
            top + 12.0 + 12.0 * i as f64,
            escape(note)
        );
    }
    let _ = writeln!(
        out,
        r##"<rect x="{left:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#333"/>"##,
        right - left,
        bottom - top
    );

    for t in ticks(xlo, xhi) {
        let x = sx(t);
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/>"##,
            bottom + 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            bottom + 18.0,
            tick_label(t, xlo, xhi)
        );
    }
    for t in ticks(ylo, yhi) {
        let y = sy(t);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{left:.2}" y2="{y:.2}" stroke="#333"/>"##,
            left - 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            left - 8.0,
            y + 4.0,
            tick_label(t, ylo, yhi)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        bottom + 40.0,
        escape(&spec.x_label)
    );
    let (lx, ly) = (18.0, (top + bottom) / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{lx:.2}" y="{ly:.2}" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
        escape(&spec.y_label)
    );

    for r in &spec.reference_lines {
        if !r.value.is_finite() {
            continue;
        }
        let (x1, y1, x2, y2) = match r.axis {
            Axis::Y => (left, sy(r.value), right, sy(r.value)),
            Axis::X => (sx(r.value), top, sx(r.value), bottom),
        };
        if !(x1 >= left - 1e-9 && x2 <= right + 1e-9 && y1 >= top - 1e-9 && y2 <= bottom + 1e-9) {
            continue;
        }
        let _ = writeln!(
            out,
            r##"<line class="ref" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#777" stroke-dasharray="6 4"/>"##
        );
        if !r.label.is_empty() {
            let _ = writeln!(
                out,
                r##"<text x="{:.2}" y="{:.2}" font-size="10" fill="#777">{}</text>"##,
                x2.min(right) - 4.0 - 6.0 * r.label.chars().count() as f64,
                y1 - 4.0,
                escape(&r.label)
            );
        }
    }

    for (i, pts) in &series {
        let colour = PALETTE[i % PALETTE.len()];
        let mut coords = String::with_capacity(pts.len() * 16);
        for (j, &(x, y)) in pts.iter().enumerate() {
            if j > 0 {
                coords.push(' ');
            }
            let _ = write!(coords, "{:.2},{:.2}", sx(x), sy(y));
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{coords}"/>"#
        );
        let ly = top + 14.0 + 14.0 * *i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="2"/>"#,
            right - 150.0,
            ly - 4.0,
            right - 130.0,
            ly - 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#,
            right - 124.0,
            escape(&spec.series[*i].label)
        );
    }
    let _ = writeln!(out, "</g>");
    Ok(())
}

fn widen(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let h = if lo == 0.0 { 0.5 } else { 0.1 * lo.abs() };
        (lo - h, hi + h)
    }
}

/// Round tick positions (1, 2, 5 × 10^k spacing), about five per axis.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = tick_step(lo, hi);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_step(lo: f64, hi: f64) -> f64 {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn tick_label(t: f64, lo: f64, hi: f64) -> String {
    let step = tick_step(lo, hi);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{t:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// `k\txi_hat` table of the defined points, 12 decimals.
pub fn write_tsv(path: &EstimatePath) -> String {
    let mut out = String::from("k\txi_hat\n");
    for (k, v) in path.defined() {
        let _ = writeln!(out, "{k}\t{v:.12}");
    }
    out
}

/// Inverse of [`write_tsv`].
pub fn parse_tsv(text: &str) -> Result<Vec<(usize, f64)>> {
    text.lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let bad = || Error::Parse {
                line: i + 1,
                token: l.to_string(),
            };
            let (k, v) = l.split_once('\t').ok_or_else(bad)?;
            Ok((
                k.trim().parse().map_err(|_| bad())?,
                v.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

/// Generic two-or-more column TSV with a header row.
pub fn write_columns(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join("\t");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.12}")).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tailindex::{PathKind, PathPoint};
    use proptest::prelude::*;

    fn two_point() -> PlotSpec {
        let mut spec = PlotSpec::new("t", "k", "xi");
        spec.push_series(Series::new("a", [(0.0, 0.0), (1.0, 1.0)]));
        spec
    }

    fn path(values: &[Option<f64>]) -> EstimatePath {
        let pts = values
            .iter()
            .enumerate()
            .map(|(i, &value)| PathPoint { k: i + 3, value })
            .collect();
        EstimatePath::new(PathKind::LvXiSmoothed, pts).unwrap()
    }

    #[test]
    fn one_polyline_per_series() {
        let svg = render_svg(&two_point()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        roxmltree::Document::parse(&svg).unwrap();
    }

    #[test]
    fn reference_rule_present() {
        let mut spec = two_point();
        spec.push_ref(Axis::Y, 0.5, "xi = 0.5");
        let svg = render_svg(&spec).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let rule = doc
            .descendants()
            .find(|n| n.has_tag_name("line") && n.attribute("class") == Some("ref"))
            .unwrap();
        assert_eq!(rule.attribute("y1"), rule.attribute("y2"));
    }

    #[test]
    fn deterministic() {
        let mut spec = two_point();
        spec.push_ref(Axis::X, 0.3, "");
        assert_eq!(render_svg(&spec).unwrap(), render_svg(&spec).unwrap());
    }

    #[test]
    fn empty_specs_fail() {
        assert!(matches!(
            render_svg(&PlotSpec::new("t", "x", "y")),
            Err(Error::EmptyPlot)
        ));
        let mut spec = PlotSpec::new("t", "x", "y");
        spec.push_series(Series::new("nan", [(f64::NAN, 1.0)]));
        assert!(matches!(render_svg(&spec), Err(Error::EmptyPlot)));
        assert!(render_panels(&[]).is_err());
    }

    #[test]
    fn panels_and_notes() {
        let mut a = PlotSpec::new("Hill <plot>", "k", "xi & more");
        a.push_series(Series::from_path("hill", &path(&[None, Some(0.4), Some(0.5)])));
        let mut b = PlotSpec::new("LV", "k", "xi");
        b.push_series(Series::from_path("lv", &path(&[Some(0.3), Some(0.35)])));
        b.push_series(Series::from_path("raw", &path(&[Some(0.2), Some(0.5)])));
        let svg = render_panels(&[a.clone(), b]).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polyline")).count(), 3);
        assert_eq!(
            doc.descendants()
                .filter(|n| n.attribute("class") == Some("panel"))
                .count(),
            2
        );
        assert_eq!(a.notes, vec!["hill: 1 undefined points omitted".to_string()]);
        assert!(svg.contains("Hill &lt;plot&gt;"));
    }

    #[test]
    fn x_range_clips() {
        let mut spec = PlotSpec::new("t", "x", "y");
        spec.push_series(Series::new("a", (0..100).map(|i| (i as f64, i as f64))));
        spec.x_range = Some((10.0, 20.0));
        let svg = render_svg(&spec).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let poly = doc.descendants().find(|n| n.has_tag_name("polyline")).unwrap();
        assert_eq!(poly.attribute("points").unwrap().split(' ').count(), 11);
    }

    #[test]
    fn flat_series_renders() {
        let mut spec = PlotSpec::new("t", "x", "y");
        spec.push_series(Series::new("flat", [(1.0, 2.0), (1.0, 2.0)]));
        roxmltree::Document::parse(&render_svg(&spec).unwrap()).unwrap();
    }

    #[test]
    fn tick_choices() {
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(tick_label(0.6000000000000001, 0.0, 1.0), "0.6");
        assert_eq!(tick_label(-0.0, -1.0, 1.0), "0.0");
        assert_eq!(ticks(0.0, 1000.0), vec![0.0, 200.0, 400.0, 600.0, 800.0, 1000.0]);
    }

    #[test]
    fn tsv_examples() {
        assert_eq!(write_tsv(&path(&[Some(0.5)])), "k\txi_hat\n3\t0.500000000000\n");
        let text = write_tsv(&path(&[None, Some(0.25), None, Some(1.0)]));
        assert_eq!(text.lines().count(), 3);
        assert_eq!(parse_tsv(&text).unwrap(), vec![(4, 0.25), (6, 1.0)]);
        assert!(parse_tsv("k\txi_hat\nx\t1\n").is_err());
    }

    #[test]
    fn column_tsv() {
        let t = write_columns(&["y", "pdf"], vec![vec![0.0, 0.25]]);
        assert_eq!(t, "y\tpdf\n0.000000000000\t0.250000000000\n");
    }

    proptest! {
        #[test]
        fn tsv_round_trip(values in prop::collection::vec(prop::option::of(-100.0f64..100.0), 1..100)) {
            let p = path(&values);
            let back = parse_tsv(&write_tsv(&p)).unwrap();
            let want: Vec<(usize, f64)> = p.defined().collect();
            prop_assert_eq!(back.len(), want.len());
            for ((k1, v1), (k2, v2)) in back.iter().zip(&want) {
                prop_assert_eq!(k1, k2);
                prop_assert!((v1 - v2).abs() <= 1e-11 * v2.abs().max(1.0));
            }
        }

        #[test]
        fn svg_well_formed(ys in prop::collection::vec(-1e3f64..1e3, 1..50), r in -1e3f64..1e3) {
            let mut spec = PlotSpec::new("p", "x", "y");
            spec.push_series(Series::new("s", ys.iter().enumerate().map(|(i, &y)| (i as f64, y))));
            spec.push_ref(Axis::Y, r, "r");
            let svg = render_svg(&spec).unwrap();
            prop_assert!(roxmltree::Document::parse(&svg).is_ok());
        }
    }
}
