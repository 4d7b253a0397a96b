//! Result tables in markdown, CSV and JSON.

use std::fmt::Write as _;

use bkm::bench_cases::{BenchmarkCase, CaseResult, Metric, ReferenceKind};
use bkm::geometry::InteriorLayout;
use bkm::rbf::RbfPair;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Markdown,
    Csv,
    Json,
}

/// One CSV record; absent values are empty cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub case: String,
    pub x: f64,
    pub y: f64,
    pub computed: f64,
    pub exact: Option<f64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub paper_bkm: Option<f64>,
    pub paper_competitor: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Config {
    pub boundary_knots: usize,
    pub interior_knots: usize,
    pub interior: InteriorLayout,
    pub shape: Option<f64>,
    pub basis: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Summary {
    pub max_abs_error: f64,
    pub avg_abs_error: f64,
    pub max_rel_error: f64,
    pub avg_rel_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub metric: &'static str,
    pub threshold: f64,
    pub value: f64,
    pub pass: bool,
}

/// Everything reported for one solve.
#[derive(Debug, Clone, Serialize)]
pub struct Run {
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_table: Option<String>,
    #[serde(skip)]
    pub competitor_label: Option<String>,
    #[serde(skip)]
    pub relative_reference: bool,
    pub config: Config,
    pub points: Vec<Row>,
    pub summary: Option<Summary>,
    pub condition_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<Verdict>,
    pub wall_time_ms: f64,
}

pub fn basis_name(rbf: &RbfPair) -> String {
    match rbf {
        RbfPair::Multiquadric { .. } => "multiquadric".into(),
        RbfPair::Cubic => "cubic".into(),
        RbfPair::QuarticThinPlate => "quartic-thin-plate".into(),
    }
}

impl Run {
    pub fn from_case(case: &BenchmarkCase, r: &CaseResult, interior: InteriorLayout) -> Self {
        let points = r
            .points
            .iter()
            .map(|p| Row {
                case: case.name().to_string(),
                x: p.x,
                y: p.y,
                computed: p.computed,
                exact: Some(p.exact),
                abs_err: Some(p.abs_err),
                rel_err: p.rel_err,
                paper_bkm: p.paper_bkm,
                paper_competitor: p.paper_competitor,
            })
            .collect();
        let criterion = case
            .criterion(r.boundary_knots, r.interior_knots)
            .map(|c| Verdict {
                metric: match c.metric {
                    Metric::MaxAbs => "max_abs_error",
                    Metric::AvgRel => "avg_rel_error",
                },
                threshold: c.threshold,
                value: c.value(r),
                pass: c.passes(r),
            });
        Self {
            case: case.name().to_string(),
            reference_table: Some(case.reference_table.to_string()),
            competitor_label: Some(case.competitor_label.to_string()),
            relative_reference: r.reference_kind == ReferenceKind::RelativeError,
            config: Config {
                boundary_knots: r.boundary_knots,
                interior_knots: r.interior_knots,
                interior,
                shape: r.rbf.and(r.shape),
                basis: r.rbf.as_ref().map(basis_name),
            },
            points,
            summary: Some(Summary {
                max_abs_error: r.max_abs_error,
                avg_abs_error: r.avg_abs_error,
                max_rel_error: r.max_rel_error,
                avg_rel_error: r.avg_rel_error,
            }),
            condition_estimate: r.condition_estimate,
            criterion,
            wall_time_ms: r.wall_time.as_secs_f64() * 1e3,
        }
    }
}

/// Error norms over rows that carry an exact value; relative errors skip zeros.
pub fn summarize(rows: &[Row]) -> Option<Summary> {
    let abs: Vec<f64> = rows.iter().filter_map(|r| r.abs_err).collect();
    if abs.is_empty() {
        return None;
    }
    let rel: Vec<f64> = rows.iter().filter_map(|r| r.rel_err).collect();
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let avg = |v: &[f64]| {
        if v.is_empty() {
            0.0
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    Some(Summary {
        max_abs_error: max(&abs),
        avg_abs_error: avg(&abs),
        max_rel_error: max(&rel),
        avg_rel_error: avg(&rel),
    })
}

pub struct MarkdownOptions {
    pub compare_paper: bool,
    pub show_condition: bool,
}

fn opt(v: Option<f64>, f: impl Fn(f64) -> String) -> String {
    v.map(f).unwrap_or_else(|| "-".into())
}

fn fixed3(v: f64) -> String {
    let s = format!("{v:.3}");
    // a tiny negative value should not print as -0.000
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn sci(v: f64) -> String {
    format!("{v:.3e}")
}

pub fn markdown(runs: &[Run], options: &MarkdownOptions) -> String {
    let mut out = String::new();
    for (i, run) in runs.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        markdown_run(&mut out, run, options);
    }
    out
}

fn markdown_run(out: &mut String, run: &Run, options: &MarkdownOptions) {
    let c = &run.config;
    let _ = write!(out, "## {}", run.case);
    if let Some(t) = &run.reference_table {
        let _ = write!(out, " ({t})");
    }
    let _ = write!(
        out,
        "\n\n{} boundary + {} interior knots",
        c.boundary_knots, c.interior_knots
    );
    if let (Some(b), Some(s)) = (&c.basis, c.shape) {
        let _ = write!(out, ", {b} c = {s}");
    } else if let Some(b) = &c.basis {
        let _ = write!(out, ", {b}");
    }
    out.push_str("\n\n");

    let label = run.competitor_label.as_deref().unwrap_or("competitor");
    let total = c.boundary_knots + c.interior_knots;
    if options.compare_paper && run.relative_reference {
        let _ = writeln!(
            out,
            "| x | y | rel err | paper BKM({total}) rel err | {label} rel err |"
        );
        out.push_str("|---|---|---|---|---|\n");
        for r in &run.points {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                r.x,
                r.y,
                opt(r.rel_err, sci),
                opt(r.paper_bkm, sci),
                opt(r.paper_competitor, sci)
            );
        }
    } else if options.compare_paper {
        let _ = writeln!(
            out,
            "| x | y | exact | BKM({total}) | paper BKM({total}) | {label} |"
        );
        out.push_str("|---|---|---|---|---|---|\n");
        for r in &run.points {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                r.x,
                r.y,
                opt(r.exact, fixed3),
                fixed3(r.computed),
                opt(r.paper_bkm, fixed3),
                opt(r.paper_competitor, fixed3)
            );
        }
    } else {
        out.push_str("| x | y | computed | exact | abs err | rel err |\n");
        out.push_str("|---|---|---|---|---|---|\n");
        for r in &run.points {
            let _ = writeln!(
                out,
                "| {} | {} | {:.6} | {} | {} | {} |",
                r.x,
                r.y,
                r.computed,
                opt(r.exact, |v| format!("{v:.6}")),
                opt(r.abs_err, sci),
                opt(r.rel_err, sci)
            );
        }
    }

    out.push('\n');
    if let Some(s) = &run.summary {
        let _ = writeln!(
            out,
            "max abs error {}, avg abs error {}, max rel error {}, avg rel error {}",
            sci(s.max_abs_error),
            sci(s.avg_abs_error),
            sci(s.max_rel_error),
            sci(s.avg_rel_error)
        );
    }
    if options.show_condition {
        let _ = writeln!(out, "condition estimate {}", sci(run.condition_estimate));
    }
    if options.compare_paper {
        match &run.criterion {
            Some(v) => {
                let _ = writeln!(
                    out,
                    "{} {} {} <= {}",
                    if v.pass { "PASS" } else { "FAIL" },
                    v.metric.replace('_', " "),
                    sci(v.value),
                    sci(v.threshold)
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "no acceptance tolerance for {} boundary + {} interior knots",
                    c.boundary_knots, c.interior_knots
                );
            }
        }
    }
}

pub fn csv(runs: &[Run]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut any = false;
    for r in runs.iter().flat_map(|r| &r.points) {
        w.serialize(r)?;
        any = true;
    }
    if !any {
        w.write_record([
            "case",
            "x",
            "y",
            "computed",
            "exact",
            "abs_err",
            "rel_err",
            "paper_bkm",
            "paper_competitor",
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn json(runs: &[Run]) -> serde_json::Result<String> {
    let mut s = if runs.len() == 1 {
        serde_json::to_string_pretty(&runs[0])?
    } else {
        serde_json::to_string_pretty(runs)?
    };
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(abs: Option<f64>, rel: Option<f64>) -> Row {
        Row {
            case: "c".into(),
            x: 0.1,
            y: -0.2,
            computed: 1.0 / 3.0,
            exact: abs.map(|_| 0.0),
            abs_err: abs,
            rel_err: rel,
            paper_bkm: None,
            paper_competitor: Some(0.5),
        }
    }

    #[test]
    fn summary_skips_missing_values() {
        let rows = [
            row(Some(1.0), Some(0.5)),
            row(Some(3.0), None),
            row(None, None),
        ];
        let s = summarize(&rows).unwrap();
        assert_eq!(s.max_abs_error, 3.0);
        assert_eq!(s.avg_abs_error, 2.0);
        assert_eq!(s.avg_rel_error, 0.5);
        assert!(summarize(&[row(None, None)]).is_none());
    }

    #[test]
    fn csv_round_trips_exactly() {
        let rows = vec![
            row(Some(1e-17), None),
            row(Some(0.1 + 0.2), Some(2.0f64.sqrt())),
        ];
        let run = Run {
            case: "c".into(),
            reference_table: None,
            competitor_label: None,
            relative_reference: false,
            config: Config {
                boundary_knots: 3,
                interior_knots: 0,
                interior: InteriorLayout::none(),
                shape: None,
                basis: None,
            },
            points: rows.clone(),
            summary: None,
            condition_estimate: 1.0,
            criterion: None,
            wall_time_ms: 0.0,
        };
        let text = csv(&[run]).unwrap();
        assert!(text
            .starts_with("case,x,y,computed,exact,abs_err,rel_err,paper_bkm,paper_competitor\n"));
        let back: Vec<Row> = csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(back, rows);
    }
}
