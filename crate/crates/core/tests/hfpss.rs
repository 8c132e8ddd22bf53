use hfp_core::abelian::StructuredAbelian;
use hfp_core::cohomology::CohomologyEngine;
use hfp_core::hfpss::{
    collapse_and_abutment, render_chart, Abutment, CellValue, ChartFormat, CollapseCertificate,
    Window,
};
use hfp_core::profinite::ProfiniteDescriptor;
use hfp_core::spectra::SpectrumDescriptor;
use hfp_core::Config;
use serde_json::Value;

fn window(s_max: usize, t: i64) -> Window {
    Window {
        s_max,
        t_min: -t,
        t_max: t,
    }
}

#[test]
fn rational_page_collapses_symbolically() {
    let eng = CohomologyEngine::new(Config::default());
    let g = ProfiniteDescriptor::prime_product(hfp_core::primes::PrimeSet::explicit([2, 3, 5]));
    let page = eng
        .e2_page(&g, &SpectrumDescriptor::Hq, window(3, 3), 2)
        .unwrap();
    assert!(page.collapsed_in_window && page.symbolic_collapse);
    match collapse_and_abutment(&page, &SpectrumDescriptor::Hq) {
        Abutment::Collapsed {
            certificate,
            degrees,
        } => {
            assert_eq!(certificate, CollapseCertificate::Symbolic);
            assert!(degrees.iter().all(|d| d.equals_input));
            assert_eq!(
                degrees.iter().find(|d| d.t == 0).unwrap().group,
                StructuredAbelian::rationals()
            );
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn morava_k_page_over_a_p_adic_group_is_concentrated_in_two_rows() {
    let eng = CohomologyEngine::new(Config::default());
    let x = SpectrumDescriptor::morava_k(1, 2).unwrap();
    let page = eng
        .e2_page(&ProfiniteDescriptor::p_adic(2), &x, window(3, 4), 3)
        .unwrap();
    for c in &page.cells {
        let nonzero_degree = c.t % 2 == 0;
        match c.s {
            0 | 1 if nonzero_degree => assert_eq!(
                c.value,
                CellValue::Determined {
                    group: StructuredAbelian::cyclic(2)
                }
            ),
            _ => assert!(
                c.value.is_zero(),
                "({}, {}) = {}",
                c.s,
                c.t,
                c.value.label()
            ),
        }
    }
    assert!(!page.collapsed_in_window);
}

/// Parses the text grid back into `(s, t, label)` triples.
fn text_cells(text: &str) -> Vec<(usize, i64, String)> {
    let lines: Vec<&str> = text.lines().collect();
    let header = lines.iter().position(|l| l.starts_with("s\\t")).unwrap();
    let ts: Vec<i64> = lines[header]
        .split('|')
        .skip(1)
        .map(|x| x.trim().parse().unwrap())
        .collect();
    let mut out = Vec::new();
    for row in &lines[header + 1..] {
        if row.trim().is_empty() {
            break;
        }
        let mut cols = row.split('|').map(str::trim);
        let s: usize = cols.next().unwrap().parse().unwrap();
        for (t, v) in ts.iter().zip(cols) {
            out.push((s, *t, v.to_string()));
        }
    }
    out.sort();
    out
}

fn json_cells(json: &str) -> Vec<(usize, i64, String)> {
    let v: Value = serde_json::from_str(json).unwrap();
    let mut out: Vec<(usize, i64, String)> = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let label = match c["value"].as_str() {
                Some(s) => s.to_string(),
                None => format!("?d{}", c["depth"]),
            };
            (
                c["s"].as_u64().unwrap() as usize,
                c["t"].as_i64().unwrap(),
                label,
            )
        })
        .collect();
    out.sort();
    out
}

#[test]
fn text_and_json_charts_encode_the_same_cells() {
    let eng = CohomologyEngine::new(Config::default());
    let cases = [
        (
            ProfiniteDescriptor::cyclic(3),
            SpectrumDescriptor::morava_k(1, 3).unwrap(),
        ),
        (
            ProfiniteDescriptor::cyclic(4),
            SpectrumDescriptor::graded_piece(StructuredAbelian::integers(), 1),
        ),
        (ProfiniteDescriptor::p_adic(2), SpectrumDescriptor::Hq),
    ];
    for (g, x) in cases {
        let page = eng.e2_page(&g, &x, window(3, 5), 2).unwrap();
        let text = render_chart(&page, ChartFormat::Text);
        let json = render_chart(&page, ChartFormat::Json);
        assert_eq!(text_cells(&text), json_cells(&json), "{}", g.label());
        assert_eq!(text_cells(&text).len(), 4 * 11);
        let svg = render_chart(&page, ChartFormat::Svg);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn unknown_chart_format_is_an_error() {
    assert!("png".parse::<ChartFormat>().is_err());
    assert_eq!("svg".parse::<ChartFormat>().unwrap(), ChartFormat::Svg);
}
