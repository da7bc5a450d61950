//! Minimal static SVG charts: box plots, a heatmap, line charts and
//! horizontal bar charts. Coordinates are printed with fixed precision so
//! the same input always yields the same bytes.

use std::fmt::Write as _;

const FONT: &str = "font-family=\"sans-serif\" font-size=\"11\"";
const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Doc {
    out: String,
}

impl Doc {
    fn new(width: f64, height: f64, title: &str) -> Self {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
        );
        let _ = writeln!(out, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{:.1}\" y=\"18\" text-anchor=\"middle\" {FONT} font-weight=\"bold\">{}</text>",
            width / 2.0,
            escape(title)
        );
        Doc { out }
    }

    fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, extra: &str) {
        let _ = writeln!(
            self.out,
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{stroke}\"{extra}/>"
        );
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str) {
        let _ = writeln!(
            self.out,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{fill}\" stroke=\"#333\"/>"
        );
    }

    fn text(&mut self, x: f64, y: f64, anchor: &str, s: &str) {
        let _ = writeln!(
            self.out,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\" {FONT}>{}</text>",
            escape(s)
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// Five-number summary of one box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// One labelled position on the x axis holding one box per series.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxGroup {
    pub label: String,
    pub boxes: Vec<Option<BoxStats>>,
}

/// Side-by-side box plots on a `[0, 1]` axis with medians annotated.
pub fn box_plot(title: &str, series_names: &[&str], groups: &[BoxGroup]) -> String {
    let per = series_names.len().max(1) as f64;
    let slot = 36.0 * per + 24.0;
    let (left, top, plot_h) = (50.0, 40.0, 260.0);
    let width = left + slot * groups.len() as f64 + 20.0;
    let height = top + plot_h + 70.0;
    let y = |v: f64| top + plot_h * (1.0 - v.clamp(0.0, 1.0));
    let mut doc = Doc::new(width.max(260.0), height, title);
    axis_01(&mut doc, left, top, plot_h, width - 20.0);
    for (gi, g) in groups.iter().enumerate() {
        let x0 = left + slot * gi as f64 + 12.0;
        for (si, b) in g.boxes.iter().enumerate() {
            let Some(b) = b else { continue };
            let cx = x0 + 36.0 * si as f64 + 14.0;
            let color = PALETTE[si % PALETTE.len()];
            doc.line(cx, y(b.min), cx, y(b.max), "#333", "");
            doc.line(cx - 6.0, y(b.min), cx + 6.0, y(b.min), "#333", "");
            doc.line(cx - 6.0, y(b.max), cx + 6.0, y(b.max), "#333", "");
            doc.rect(
                cx - 12.0,
                y(b.q3),
                24.0,
                (y(b.q1) - y(b.q3)).max(0.5),
                color,
            );
            doc.line(
                cx - 12.0,
                y(b.median),
                cx + 12.0,
                y(b.median),
                "black",
                " stroke-width=\"2\"",
            );
            doc.text(cx, y(b.median) - 3.0, "middle", &format!("{:.2}", b.median));
        }
        doc.text(
            x0 + slot / 2.0 - 12.0,
            top + plot_h + 16.0,
            "middle",
            &g.label,
        );
    }
    legend(&mut doc, left, height - 24.0, series_names);
    doc.finish()
}

fn axis_01(doc: &mut Doc, left: f64, top: f64, plot_h: f64, right: f64) {
    for i in 0..=5 {
        let v = f64::from(i) / 5.0;
        let yy = top + plot_h * (1.0 - v);
        doc.line(left, yy, right, yy, "#ddd", "");
        doc.text(left - 6.0, yy + 4.0, "end", &format!("{v:.1}"));
    }
    doc.line(left, top, left, top + plot_h, "#333", "");
}

fn legend(doc: &mut Doc, x: f64, y: f64, names: &[&str]) {
    for (i, name) in names.iter().enumerate() {
        let lx = x + 120.0 * i as f64;
        let _ = writeln!(
            doc.out,
            "<rect x=\"{lx:.2}\" y=\"{:.2}\" width=\"10\" height=\"10\" fill=\"{}\"/>",
            y - 9.0,
            PALETTE[i % PALETTE.len()]
        );
        doc.text(lx + 14.0, y, "start", name);
    }
}

fn heat_color(v: f64) -> String {
    // white -> dark red
    let t = v.clamp(0.0, 1.0);
    let g = (255.0 * (1.0 - t)).round() as u8;
    let r = (255.0 - 100.0 * t).round() as u8;
    format!("#{r:02x}{g:02x}{g:02x}")
}

/// Grid of values in `[0, 1]`, each cell labelled with three decimals.
/// Missing cells are drawn grey.
pub fn heatmap(
    title: &str,
    rows: &[String],
    cols: &[String],
    cells: &[Vec<Option<f64>>],
) -> String {
    let (left, top, cw, ch) = (170.0, 50.0, 110.0, 36.0);
    let width = left + cw * cols.len() as f64 + 20.0;
    let height = top + ch * rows.len() as f64 + 20.0;
    let mut doc = Doc::new(width, height, title);
    for (ci, c) in cols.iter().enumerate() {
        doc.text(left + cw * (ci as f64 + 0.5), top - 8.0, "middle", c);
    }
    for (ri, r) in rows.iter().enumerate() {
        let yy = top + ch * ri as f64;
        doc.text(left - 8.0, yy + ch / 2.0 + 4.0, "end", r);
        for ci in 0..cols.len() {
            let xx = left + cw * ci as f64;
            match cells.get(ri).and_then(|row| row.get(ci)).copied().flatten() {
                Some(v) => {
                    doc.rect(xx, yy, cw, ch, &heat_color(v));
                    doc.text(
                        xx + cw / 2.0,
                        yy + ch / 2.0 + 4.0,
                        "middle",
                        &format!("{v:.3}"),
                    );
                }
                None => doc.rect(xx, yy, cw, ch, "#cccccc"),
            }
        }
    }
    doc.finish()
}

/// One named polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Line chart with optional dashed horizontal reference lines.
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    reference: &[f64],
) -> String {
    let (left, top, pw, ph) = (60.0, 40.0, 480.0, 260.0);
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x_min, mut x_max, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for &(x, y) in all {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_max = y_max.max(y);
    }
    for &r in reference {
        y_max = y_max.max(r);
    }
    if !x_min.is_finite() {
        (x_min, x_max) = (0.0, 1.0);
    }
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    let y_top = if y_max > 0.0 { y_max * 1.1 } else { 1.0 };
    let sx = |x: f64| left + pw * (x - x_min) / (x_max - x_min);
    let sy = |y: f64| top + ph * (1.0 - y / y_top);
    let mut doc = Doc::new(left + pw + 30.0, top + ph + 80.0, title);
    for i in 0..=4 {
        let v = y_top * f64::from(i) / 4.0;
        doc.line(left, sy(v), left + pw, sy(v), "#ddd", "");
        doc.text(left - 6.0, sy(v) + 4.0, "end", &format!("{v:.3}"));
    }
    doc.line(left, top + ph, left + pw, top + ph, "#333", "");
    doc.line(left, top, left, top + ph, "#333", "");
    doc.text(left, top + ph + 16.0, "middle", &format!("{x_min}"));
    doc.text(left + pw, top + ph + 16.0, "middle", &format!("{x_max}"));
    doc.text(left + pw / 2.0, top + ph + 32.0, "middle", x_label);
    let _ = writeln!(
        doc.out,
        "<text x=\"14\" y=\"{:.2}\" transform=\"rotate(-90 14 {:.2})\" text-anchor=\"middle\" {FONT}>{}</text>",
        top + ph / 2.0,
        top + ph / 2.0,
        escape(y_label)
    );
    for &r in reference {
        doc.line(
            left,
            sy(r),
            left + pw,
            sy(r),
            "#999",
            " stroke-dasharray=\"4 3\"",
        );
        doc.text(left + pw - 2.0, sy(r) - 3.0, "end", &format!("{r}"));
    }
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            doc.out,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>",
            pts.join(" ")
        );
    }
    let names: Vec<&str> = series.iter().map(|s| s.name.as_str()).collect();
    legend(&mut doc, left, top + ph + 60.0, &names);
    doc.finish()
}

/// One row of a horizontal bar chart; one bar per series.
#[derive(Debug, Clone, PartialEq)]
pub struct BarRow {
    pub label: String,
    pub values: Vec<f64>,
}

/// Horizontal bars on a `[0, 1]` axis with a dashed vertical reference line.
pub fn bar_chart(
    title: &str,
    series_names: &[&str],
    rows: &[BarRow],
    reference: Option<f64>,
) -> String {
    let per = series_names.len().max(1) as f64;
    let (left, top, pw) = (200.0, 40.0, 360.0);
    let rh = 10.0 * per + 8.0;
    let height = top + rh * rows.len() as f64 + 60.0;
    let mut doc = Doc::new(left + pw + 30.0, height, title);
    let sx = |v: f64| left + pw * v.clamp(0.0, 1.0);
    for (ri, row) in rows.iter().enumerate() {
        let yy = top + rh * ri as f64;
        doc.text(left - 6.0, yy + rh / 2.0 + 3.0, "end", &row.label);
        for (si, &v) in row.values.iter().enumerate() {
            let _ = writeln!(
                doc.out,
                "<rect x=\"{left:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"9\" fill=\"{}\"/>",
                yy + 4.0 + 10.0 * si as f64,
                sx(v) - left,
                PALETTE[si % PALETTE.len()]
            );
        }
    }
    let bottom = top + rh * rows.len() as f64;
    doc.line(left, top, left, bottom, "#333", "");
    for i in 0..=5 {
        let v = f64::from(i) / 5.0;
        doc.text(sx(v), bottom + 14.0, "middle", &format!("{v:.1}"));
    }
    if let Some(r) = reference {
        doc.line(
            sx(r),
            top,
            sx(r),
            bottom,
            "#999",
            " stroke-dasharray=\"4 3\"",
        );
    }
    legend(&mut doc, left, bottom + 40.0, series_names);
    doc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_labels() {
        let s = heatmap("A & B", &["<r>".into()], &["c".into()], &[vec![Some(0.5)]]);
        assert!(s.contains("A &amp; B"));
        assert!(s.contains("&lt;r&gt;"));
        assert!(s.contains(">0.500<"));
        assert!(s.ends_with("</svg>\n"));
    }

    #[test]
    fn box_plot_annotates_median() {
        let b = BoxStats {
            min: 0.0,
            q1: 0.2,
            median: 0.42,
            q3: 0.6,
            max: 1.0,
        };
        let s = box_plot(
            "t",
            &["Jaccard"],
            &[BoxGroup {
                label: "g".into(),
                boxes: vec![Some(b)],
            }],
        );
        assert!(s.contains(">0.42<"));
        assert_eq!(
            s,
            box_plot(
                "t",
                &["Jaccard"],
                &[BoxGroup {
                    label: "g".into(),
                    boxes: vec![Some(b)]
                }]
            )
        );
    }

    #[test]
    fn heat_colors_span_white_to_red() {
        assert_eq!(heat_color(0.0), "#ffffff");
        assert_eq!(heat_color(1.0), "#9b0000");
    }

    #[test]
    fn empty_line_chart_still_renders() {
        let s = line_chart("t", "x", "y", &[], &[0.1]);
        assert!(s.starts_with("<svg"));
    }
}
