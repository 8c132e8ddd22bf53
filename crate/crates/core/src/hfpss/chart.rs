//! Deterministic text, JSON and SVG renderings of an E₂ page.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::{CellValue, E2Page, Window};
use crate::error::Error;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartFormat {
    Text,
    Json,
    Svg,
}

impl FromStr for ChartFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "text" => Ok(ChartFormat::Text),
            "json" => Ok(ChartFormat::Json),
            "svg" => Ok(ChartFormat::Svg),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct JsonCell {
    s: usize,
    t: i64,
    value: Option<String>,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    depth: Option<u32>,
}

#[derive(Serialize)]
struct JsonFlags {
    collapsed_in_window: bool,
    has_undetermined: bool,
    symbolic_collapse: bool,
}

#[derive(Serialize)]
struct JsonChart<'a> {
    format_version: &'static str,
    group: &'a str,
    spectrum: &'a str,
    window: Window,
    cells: Vec<JsonCell>,
    flags: JsonFlags,
}

pub fn render_chart(page: &E2Page, format: ChartFormat) -> String {
    match format {
        ChartFormat::Text => text(page),
        ChartFormat::Json => json(page),
        ChartFormat::Svg => svg(page),
    }
}

fn header_lines(page: &E2Page) -> Vec<String> {
    let w = page.window;
    vec![
        format!("E2 page (format_version {FORMAT_VERSION})"),
        format!("group: {}", page.group),
        format!("spectrum: {}", page.spectrum),
        format!("window: s 0..{}, t {}..{}", w.s_max, w.t_min, w.t_max),
        format!(
            "collapsed_in_window: {}  has_undetermined: {}  symbolic_collapse: {}",
            page.collapsed_in_window, page.has_undetermined, page.symbolic_collapse
        ),
    ]
}

fn pad(s: &str, width: usize) -> String {
    let n = s.chars().count();
    format!("{}{s}", " ".repeat(width.saturating_sub(n)))
}

fn text(page: &E2Page) -> String {
    let mut out = header_lines(page).join("\n");
    out.push('\n');
    let w = page.window;
    if w.is_empty() {
        return out;
    }
    let ts: Vec<i64> = w.degrees().collect();
    let label = |s: usize, t: i64| page.cell(s, t).map(|c| c.value.label()).unwrap_or_default();
    let widths: Vec<usize> = ts
        .iter()
        .map(|&t| {
            (0..=w.s_max)
                .map(|s| label(s, t).chars().count())
                .chain(std::iter::once(t.to_string().len()))
                .max()
                .unwrap_or(1)
        })
        .collect();
    let first = format!("{}", w.s_max).len().max(3);
    out.push('\n');
    let mut head = pad("s\\t", first);
    for (t, wd) in ts.iter().zip(&widths) {
        let _ = write!(head, " | {}", pad(&t.to_string(), *wd));
    }
    out.push_str(&head);
    out.push('\n');
    for s in (0..=w.s_max).rev() {
        let mut line = pad(&s.to_string(), first);
        for (t, wd) in ts.iter().zip(&widths) {
            let _ = write!(line, " | {}", pad(&label(s, *t), *wd));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn json(page: &E2Page) -> String {
    let cells = page
        .cells
        .iter()
        .map(|c| match &c.value {
            CellValue::Determined { group } => JsonCell {
                s: c.s,
                t: c.t,
                value: Some(group.label()),
                status: "determined",
                depth: None,
            },
            CellValue::UndeterminedAt { depth } => JsonCell {
                s: c.s,
                t: c.t,
                value: None,
                status: "undetermined",
                depth: Some(*depth),
            },
        })
        .collect();
    let doc = JsonChart {
        format_version: FORMAT_VERSION,
        group: &page.group,
        spectrum: &page.spectrum,
        window: page.window,
        cells,
        flags: JsonFlags {
            collapsed_in_window: page.collapsed_in_window,
            has_undetermined: page.has_undetermined,
            symbolic_collapse: page.symbolic_collapse,
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("chart serializes");
    s.push('\n');
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn svg(page: &E2Page) -> String {
    const CELL_W: i64 = 64;
    const CELL_H: i64 = 28;
    const LEFT: i64 = 40;
    const TOP: i64 = 96;
    let w = page.window;
    let ncols = if w.is_empty() {
        0
    } else {
        w.t_max - w.t_min + 1
    };
    let nrows = if w.is_empty() { 0 } else { w.s_max as i64 + 1 };
    let width = LEFT + CELL_W * ncols.max(4) + 16;
    let height = TOP + CELL_H * nrows + 40;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="monospace" font-size="12">"#
    );
    let _ = writeln!(out, "<!-- format_version {FORMAT_VERSION} -->");
    for (i, line) in header_lines(page).iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="8" y="{}">{}</text>"#,
            16 + 16 * i as i64,
            escape(line)
        );
    }
    if !w.is_empty() {
        for (k, t) in w.degrees().enumerate() {
            let x = LEFT + CELL_W * k as i64 + CELL_W / 2;
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{}" text-anchor="middle">{t}</text>"#,
                TOP + CELL_H * nrows + 18
            );
        }
        for s in 0..=w.s_max {
            let y = TOP + CELL_H * (w.s_max - s) as i64;
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="end">{s}</text>"#,
                LEFT - 6,
                y + CELL_H / 2 + 4
            );
            for (k, t) in w.degrees().enumerate() {
                let x = LEFT + CELL_W * k as i64;
                let Some(cell) = page.cell(s, t) else {
                    continue;
                };
                let (fill, dash) = match &cell.value {
                    CellValue::UndeterminedAt { .. } => ("#f6e3a1", r#" stroke-dasharray="4 2""#),
                    v if v.is_zero() => ("#ffffff", ""),
                    _ => ("#d6e6f5", ""),
                };
                let _ = writeln!(
                    out,
                    r##"<rect x="{x}" y="{y}" width="{CELL_W}" height="{CELL_H}" fill="{fill}" stroke="#8a8a8a"{dash}/>"##
                );
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
                    x + CELL_W / 2,
                    y + CELL_H / 2 + 4,
                    escape(&cell.value.label())
                );
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">t →   s ↑</text>"#,
            LEFT,
            TOP + CELL_H * nrows + 34
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::StructuredAbelian;
    use crate::hfpss::{CellSource, E2Cell};

    fn page(window: Window, cells: Vec<E2Cell>) -> E2Page {
        E2Page {
            group: "Z/3".into(),
            spectrum: "K(1,3)".into(),
            window,
            cells,
            collapsed_in_window: false,
            has_undetermined: false,
            symbolic_collapse: false,
        }
    }

    #[test]
    fn empty_window_is_header_only() {
        let p = page(
            Window {
                s_max: 0,
                t_min: 1,
                t_max: 0,
            },
            vec![],
        );
        let t = render_chart(&p, ChartFormat::Text);
        assert_eq!(t.lines().count(), 5);
        assert!(t.contains("format_version 1"));
        assert!(render_chart(&p, ChartFormat::Svg).contains("format_version 1"));
    }

    #[test]
    fn single_cell() {
        let cell = E2Cell {
            s: 0,
            t: 0,
            value: CellValue::Determined {
                group: StructuredAbelian::cyclic(3),
            },
            source: CellSource::Exact,
        };
        let p = page(
            Window {
                s_max: 0,
                t_min: 0,
                t_max: 0,
            },
            vec![cell],
        );
        let t = render_chart(&p, ChartFormat::Text);
        assert!(t.ends_with("  0 | Z/3\n"), "{t}");
        let j: serde_json::Value =
            serde_json::from_str(&render_chart(&p, ChartFormat::Json)).unwrap();
        assert_eq!(j["cells"][0]["value"], "Z/3");
        assert_eq!(j["format_version"], "1");
        assert_eq!(
            "pdf".parse::<ChartFormat>().unwrap_err(),
            Error::UnknownFormat("pdf".into())
        );
    }
}
