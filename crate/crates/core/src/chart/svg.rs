//! Static SVG 1.1 output. Numbers are printed with at most two decimals so
//! the same spec always yields the same bytes.

use std::fmt::Write;

use super::{ChartKind, ChartSpec, Mark};

const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;
const Y_TICKS: u64 = 5;
const FALLBACK_COLOR: &str = "#888888";

pub fn render_svg(spec: &ChartSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(spec.width),
        h = num(spec.height)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="30" text-anchor="middle" font-family="sans-serif" font-size="18">{}</text>"#,
        num(spec.width / 2.0),
        escape(&spec.title)
    );
    if spec.empty {
        let _ = writeln!(
            out,
            r##"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="16" fill="#666666">no data</text>"##,
            num(spec.width / 2.0),
            num(spec.height / 2.0)
        );
    } else {
        match spec.kind {
            ChartKind::Bar | ChartKind::LineSeries => timeseries(&mut out, spec),
            _ => marks(&mut out, spec),
        }
    }
    out.push_str("</svg>\n");
    out
}

fn color<'a>(spec: &'a ChartSpec, label: &str) -> &'a str {
    spec.style.get(label).map(String::as_str).unwrap_or(FALLBACK_COLOR)
}

fn timeseries(out: &mut String, spec: &ChartSpec) {
    let plot_w = spec.width - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = spec.height - MARGIN_TOP - MARGIN_BOTTOM;
    let bottom = MARGIN_TOP + plot_h;
    let max = spec.series.iter().flat_map(|s| s.values.iter().copied()).max().unwrap_or(0).max(1);
    let step = max.div_ceil(Y_TICKS);
    let top_value = (step * Y_TICKS) as f64;
    let y_of = |value: u64| bottom - value as f64 / top_value * plot_h;

    // Axes and y ticks.
    let _ = writeln!(
        out,
        r##"<line x1="{l}" y1="{t}" x2="{l}" y2="{b}" stroke="#333333"/>"##,
        l = num(MARGIN_LEFT),
        t = num(MARGIN_TOP),
        b = num(bottom)
    );
    let _ = writeln!(
        out,
        r##"<line x1="{l}" y1="{b}" x2="{r}" y2="{b}" stroke="#333333"/>"##,
        l = num(MARGIN_LEFT),
        r = num(MARGIN_LEFT + plot_w),
        b = num(bottom)
    );
    for tick in 0..=Y_TICKS {
        let value = tick * step;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end" font-family="sans-serif" font-size="11">{value}</text>"#,
            num(MARGIN_LEFT - 6.0),
            num(y_of(value) + 4.0)
        );
    }

    let slots = spec.categories.len().max(1) as f64;
    let slot = plot_w / slots;
    // Thin out year labels on long axes.
    let label_every = (spec.categories.len() / 20).max(1);
    for (i, category) in spec.categories.iter().enumerate() {
        if i % label_every != 0 {
            continue;
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            num(MARGIN_LEFT + slot * (i as f64 + 0.5)),
            num(bottom + 16.0),
            escape(category)
        );
    }

    match spec.kind {
        ChartKind::Bar => {
            let group = spec.series.len().max(1) as f64;
            let bar_w = slot * 0.8 / group;
            for (s, series) in spec.series.iter().enumerate() {
                let fill = color(spec, &series.label);
                for (i, value) in series.values.iter().enumerate() {
                    let x = MARGIN_LEFT + slot * i as f64 + slot * 0.1 + bar_w * s as f64;
                    let y = y_of(*value);
                    let _ = writeln!(
                        out,
                        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{fill}"><title>{} {}: {value}</title></rect>"#,
                        num(x),
                        num(y),
                        num(bar_w),
                        num(bottom - y),
                        escape(&series.label),
                        escape(&spec.categories[i])
                    );
                }
            }
        }
        _ => {
            for series in &spec.series {
                let points: Vec<String> = series
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, value)| format!("{},{}", num(MARGIN_LEFT + slot * (i as f64 + 0.5)), num(y_of(*value))))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"/>"#,
                    points.join(" "),
                    color(spec, &series.label)
                );
            }
        }
    }
    if spec.series.len() > 1 {
        legend(out, spec, spec.series.iter().map(|s| s.label.as_str()), spec.height - 22.0);
    }
}

/// One row of coloured dots with labels along the bottom edge.
fn legend<'a>(out: &mut String, spec: &ChartSpec, labels: impl Iterator<Item = &'a str>, y: f64) {
    let mut x = MARGIN_LEFT;
    for label in labels {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="5" fill="{}"/>"#,
            num(x),
            num(y - 4.0),
            color(spec, label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
            num(x + 9.0),
            num(y),
            escape(label)
        );
        x += 18.0 + label.chars().count() as f64 * 6.5;
    }
}

fn marks(out: &mut String, spec: &ChartSpec) {
    let mut cloud = Cloud::new(spec.width, spec.height);
    for mark in &spec.marks {
        match mark {
            Mark::Slice {
                label,
                value,
                start_angle,
                end_angle,
                cx,
                cy,
                outer_radius,
                inner_radius,
            } => {
                let fill = color(spec, label);
                let title = format!("<title>{}: {value}</title>", escape(label));
                if end_angle - start_angle >= 360.0 - 1e-9 {
                    if *inner_radius > 0.0 {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{fill}" stroke-width="{}">{title}</circle>"#,
                            num(*cx),
                            num(*cy),
                            num((outer_radius + inner_radius) / 2.0),
                            num(outer_radius - inner_radius)
                        );
                    } else {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}">{title}</circle>"#,
                            num(*cx),
                            num(*cy),
                            num(*outer_radius)
                        );
                    }
                    continue;
                }
                let path = slice_path(*cx, *cy, *outer_radius, *inner_radius, *start_angle, *end_angle);
                let _ = writeln!(
                    out,
                    r##"<path d="{path}" fill="{fill}" stroke="#ffffff">{title}</path>"##
                );
            }
            Mark::Rect {
                label,
                value,
                x,
                y,
                width,
                height,
            } => {
                let _ = writeln!(
                    out,
                    r##"<rect x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="#ffffff"><title>{}: {value}</title></rect>"##,
                    num(*x),
                    num(*y),
                    num(*width),
                    num(*height),
                    color(spec, label),
                    escape(label)
                );
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{}</text>"#,
                    num(x + 4.0),
                    num(y + 14.0),
                    escape(label)
                );
            }
            Mark::Circle { label, value, cx, cy, r } => {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="{}"><title>{}: {value}</title></circle>"#,
                    num(*cx),
                    num(*cy),
                    num(*r),
                    color(spec, label),
                    escape(label)
                );
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
                    num(*cx),
                    num(cy + 4.0),
                    escape(label)
                );
            }
            Mark::Word { label, value, size } => {
                let (x, y) = cloud.place(label, *size);
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-family="sans-serif" font-size="{}" fill="{}"><title>{value}</title>{}</text>"#,
                    num(x),
                    num(y),
                    num(*size),
                    color(spec, label),
                    escape(label)
                );
            }
        }
    }
    if matches!(spec.kind, ChartKind::Pie | ChartKind::Donut) {
        legend(out, spec, spec.categories.iter().map(String::as_str), spec.height - 10.0);
    }
}

fn point(cx: f64, cy: f64, r: f64, degrees: f64) -> (f64, f64) {
    let radians = degrees.to_radians();
    (cx + r * radians.sin(), cy - r * radians.cos())
}

fn slice_path(cx: f64, cy: f64, outer: f64, inner: f64, start: f64, end: f64) -> String {
    let large = if end - start > 180.0 { 1 } else { 0 };
    let (x0, y0) = point(cx, cy, outer, start);
    let (x1, y1) = point(cx, cy, outer, end);
    let mut d = format!(
        "M{} {} A{} {} 0 {large} 1 {} {}",
        num(x0),
        num(y0),
        num(outer),
        num(outer),
        num(x1),
        num(y1)
    );
    if inner > 0.0 {
        let (x2, y2) = point(cx, cy, inner, end);
        let (x3, y3) = point(cx, cy, inner, start);
        let _ = write!(
            d,
            " L{} {} A{} {} 0 {large} 0 {} {} Z",
            num(x2),
            num(y2),
            num(inner),
            num(inner),
            num(x3),
            num(y3)
        );
    } else {
        let _ = write!(d, " L{} {} Z", num(cx), num(cy));
    }
    d
}

/// Left-to-right word flow with rows as tall as their largest word.
struct Cloud {
    width: f64,
    x: f64,
    baseline: f64,
    row_height: f64,
}

impl Cloud {
    fn new(width: f64, _height: f64) -> Self {
        Self {
            width,
            x: MARGIN_LEFT,
            baseline: MARGIN_TOP,
            row_height: 0.0,
        }
    }

    fn place(&mut self, word: &str, size: f64) -> (f64, f64) {
        let advance = word.chars().count() as f64 * size * 0.6 + size * 0.5;
        if self.x > MARGIN_LEFT && self.x + advance > self.width - MARGIN_RIGHT {
            self.baseline += self.row_height * 1.2;
            self.x = MARGIN_LEFT;
            self.row_height = 0.0;
        }
        if self.row_height == 0.0 || size > self.row_height {
            self.baseline += size - self.row_height;
            self.row_height = size;
        }
        let at = (self.x, self.baseline);
        self.x += advance;
        at
    }
}

fn num(value: f64) -> String {
    let rounded = (value * 100.0).round() / 100.0;
    let text = format!("{rounded:.2}");
    let text = text.trim_end_matches('0').trim_end_matches('.');
    if text == "-0" {
        "0".to_owned()
    } else {
        text.to_owned()
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}
