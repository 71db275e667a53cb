//! Report rendering: aligned text tables for people, CSV for spreadsheets
//! and plotters, JSON for downstream tools.
//!
//! CSV and JSON are byte-stable for identical inputs. CSV prints floats
//! with the shortest decimal that parses back to the same value, one
//! header row, `.` decimals, no thousands separators; undefined metrics
//! are empty cells. Tables round currency to whole USD and mark undefined
//! metrics `n/a`. Nothing here emits ANSI escapes, so output is safe to
//! pipe regardless of terminal.

use serde::Serialize;

use crate::emissions::EmissionsReport;
use crate::finance::MetricsReport;
use crate::model::Pathway;
use crate::pipeline::Evaluation;
use crate::scenarios::{AutomationLevel, ComparisonTable, ProjectConfig};
use crate::uncertainty::{MonteCarloSummary, TargetMetric, TornadoEntry};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
    Structured,
}

impl ReportFormat {
    pub fn parse(name: &str) -> Result<ReportFormat> {
        match name {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            "structured" => Ok(ReportFormat::Structured),
            other => Err(Error::config(format!(
                "unknown format \"{other}\" (expected table, csv, or structured)"
            ))),
        }
    }
}

/// Shortest float representation that round-trips; integers print without
/// a fraction.
fn fnum(value: f64) -> String {
    format!("{value}")
}

/// Whole-dollar rendering with thousands separators.
fn usd(value: f64) -> String {
    group_thousands(value.round() as i64)
}

/// Whole-unit quantity rendering (MWh, tonnes) with thousands separators.
fn qty(value: f64) -> String {
    group_thousands(value.round() as i64)
}

fn group_thousands(value: i64) -> String {
    let digits = value.unsigned_abs().to_string();
    let mut grouped = String::with_capacity(digits.len() + digits.len() / 3 + 1);
    if value < 0 {
        grouped.push('-');
    }
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            grouped.push(',');
        }
        grouped.push(c);
    }
    grouped
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
fn csv_field(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn csv_opt(value: Option<f64>) -> String {
    value.map(fnum).unwrap_or_default()
}

/// Aligned two-space-separated text table. Numeric columns (per
/// `right_align`) are right-justified under their headers.
fn aligned_table(headers: &[&str], rows: &[Vec<String>], right_align: &[bool]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let render_row = |cells: &[String], out: &mut String| {
        let mut line = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            let pad = widths[i] - cell.chars().count();
            if right_align[i] {
                line.extend(std::iter::repeat_n(' ', pad));
                line.push_str(cell);
            } else {
                line.push_str(cell);
                if i + 1 < cells.len() {
                    line.extend(std::iter::repeat_n(' ', pad));
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    };
    let header_cells: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    render_row(&header_cells, &mut out);
    for row in rows {
        render_row(row, &mut out);
    }
    out
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

/// Everything `assess` reports for one project, in presentation order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assessment {
    pub name: String,
    pub pathway: Pathway,
    pub level: AutomationLevel,
    pub annual_energy_mwh: f64,
    /// Effective (post-automation) totals.
    pub capex_usd: f64,
    pub opex_usd_per_year: f64,
    pub metrics: MetricsReport,
    pub emissions: EmissionsReport,
}

impl Assessment {
    pub fn new(config: &ProjectConfig, evaluation: &Evaluation) -> Assessment {
        Assessment {
            name: config.name.clone(),
            pathway: config.plant.pathway,
            level: config.automation.level,
            annual_energy_mwh: evaluation.annual_energy_mwh,
            capex_usd: evaluation.effective_costs.total_capex(),
            opex_usd_per_year: evaluation.effective_costs.opex,
            metrics: evaluation.metrics.clone(),
            emissions: evaluation.emissions,
        }
    }
}

/// The level-cost metric's name depends on what the plant delivers:
/// electricity is levelized as LCOE, cooling as LCOC.
fn levelized_label(pathway: Pathway) -> &'static str {
    if pathway.is_cooling() {
        "LCOC"
    } else {
        "LCOE"
    }
}

pub fn render_assessment(assessment: &Assessment, format: ReportFormat) -> String {
    match format {
        ReportFormat::Structured => to_json(assessment),
        ReportFormat::Csv => {
            let m = &assessment.metrics;
            let e = &assessment.emissions;
            let irr_rate = m.irr.map(|i| i.rate);
            let irr_ambiguous = m
                .irr
                .map(|i| i.ambiguous.to_string())
                .unwrap_or_default();
            let rows = [
                ("annual_energy_mwh", fnum(assessment.annual_energy_mwh)),
                ("capex_usd", fnum(assessment.capex_usd)),
                ("opex_usd_per_year", fnum(assessment.opex_usd_per_year)),
                ("lcoe_usd_per_mwh", fnum(m.lcoe)),
                ("npv_usd", csv_opt(m.npv)),
                ("irr", csv_opt(irr_rate)),
                ("irr_ambiguous", irr_ambiguous),
                ("payback_simple_years", csv_opt(m.payback_simple)),
                ("payback_cumulative_years", csv_opt(m.payback_cumulative)),
                ("annual_displaced_mwh", fnum(e.annual_displaced_mwh)),
                ("avoided_co2_annual_t", fnum(e.avoided_annual_t)),
                ("avoided_co2_lifetime_net_t", fnum(e.avoided_lifetime_net_t)),
            ];
            let mut out = String::from("metric,value\n");
            for (key, value) in rows {
                out.push_str(key);
                out.push(',');
                out.push_str(&value);
                out.push('\n');
            }
            out
        }
        ReportFormat::Table => {
            let m = &assessment.metrics;
            let e = &assessment.emissions;
            let n_a = || "n/a".to_string();
            let mut out = format!(
                "{} [{} / {}]\n\n",
                assessment.name,
                assessment.pathway.display_name(),
                assessment.level.display_name()
            );
            let unit = if assessment.pathway.is_cooling() {
                "delivered cooling"
            } else {
                "generation"
            };
            let rows = [
                (
                    format!("Annual {unit} (MWh)"),
                    qty(assessment.annual_energy_mwh),
                ),
                ("CAPEX (USD)".to_string(), usd(assessment.capex_usd)),
                (
                    "OPEX (USD/yr)".to_string(),
                    usd(assessment.opex_usd_per_year),
                ),
                (
                    format!("{} (USD/MWh)", levelized_label(assessment.pathway)),
                    format!("{:.2}", m.lcoe),
                ),
                (
                    "NPV (USD)".to_string(),
                    m.npv.map(usd).unwrap_or_else(n_a),
                ),
                (
                    "IRR".to_string(),
                    m.irr
                        .map(|i| {
                            let mut cell = format!("{:.2}%", i.rate * 100.0);
                            if i.ambiguous {
                                cell.push_str(" (multiple roots; smallest shown)");
                            }
                            cell
                        })
                        .unwrap_or_else(n_a),
                ),
                (
                    "Simple payback (yr)".to_string(),
                    m.payback_simple
                        .map(|p| format!("{p:.1}"))
                        .unwrap_or_else(n_a),
                ),
                (
                    "Discounted-flow payback (yr)".to_string(),
                    m.payback_cumulative
                        .map(|p| format!("{p:.1}"))
                        .unwrap_or_else(n_a),
                ),
                (
                    "Displaced grid electricity (MWh/yr)".to_string(),
                    qty(e.annual_displaced_mwh),
                ),
                (
                    "Avoided CO2 (t/yr)".to_string(),
                    qty(e.avoided_annual_t),
                ),
                (
                    "Lifetime avoided CO2, net (t)".to_string(),
                    qty(e.avoided_lifetime_net_t),
                ),
            ];
            let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap();
            for (key, value) in rows {
                out.push_str(&format!("{key:<width$}  {value}\n"));
            }
            out
        }
    }
}

pub const COMPARISON_CSV_HEADER: &str = "name,pathway,scenario,capex_usd,opex_usd_per_year,\
lcoe_usd_per_mwh,payback_years,npv_usd,avoided_co2_t_per_year";

pub fn render_comparison(table: &ComparisonTable, format: ReportFormat) -> String {
    match format {
        ReportFormat::Structured => to_json(table),
        ReportFormat::Csv => {
            let mut out = String::from(COMPARISON_CSV_HEADER);
            out.push('\n');
            for row in &table.rows {
                out.push_str(&csv_field(&row.name));
                out.push(',');
                out.push_str(row.pathway.id());
                out.push(',');
                out.push_str(row.level.id());
                out.push(',');
                out.push_str(&fnum(row.capex));
                out.push(',');
                out.push_str(&fnum(row.opex));
                out.push(',');
                out.push_str(&csv_opt(row.lcoe));
                out.push(',');
                out.push_str(&csv_opt(row.payback_years));
                out.push(',');
                out.push_str(&csv_opt(row.npv));
                out.push(',');
                out.push_str(&csv_opt(row.avoided_co2_annual_t));
                out.push('\n');
            }
            out
        }
        ReportFormat::Table => {
            let headers = [
                "Pathway",
                "Scenario",
                "CAPEX (USD)",
                "OPEX (USD/yr)",
                "LCOE (USD/MWh)",
                "Payback (yr)",
                "NPV (USD)",
                "Avoided CO2 (t/yr)",
            ];
            let right = [false, false, true, true, true, true, true, true];
            let mut any_cooling = false;
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|row| {
                    let lcoe_cell = match row.lcoe {
                        Some(value) if row.pathway.is_cooling() => {
                            any_cooling = true;
                            format!("{value:.2} *")
                        }
                        Some(value) => format!("{value:.2}"),
                        None => "n/a".to_string(),
                    };
                    vec![
                        row.pathway.display_name().to_string(),
                        row.level.display_name().to_string(),
                        usd(row.capex),
                        usd(row.opex),
                        lcoe_cell,
                        row.payback_years
                            .map(|p| format!("{p:.1}"))
                            .unwrap_or_else(|| "n/a".to_string()),
                        row.npv.map(usd).unwrap_or_else(|| "n/a".to_string()),
                        row.avoided_co2_annual_t
                            .map(qty)
                            .unwrap_or_else(|| "n/a".to_string()),
                    ]
                })
                .collect();
            let mut out = aligned_table(&headers, &rows, &right);
            if any_cooling {
                out.push_str("\n* LCOC: levelized cost of cooling, USD per MWh of delivered cooling.\n");
            }
            out
        }
    }
}

pub const MONTE_CARLO_CSV_HEADER: &str = "metric,mean,sd,p5,p50,p95,prob_npv_positive,n_failed";

pub fn render_monte_carlo(summary: &MonteCarloSummary, format: ReportFormat) -> String {
    match format {
        ReportFormat::Structured => to_json(summary),
        ReportFormat::Csv => {
            let mut out = String::from(MONTE_CARLO_CSV_HEADER);
            out.push('\n');
            let rows = [
                ("lcoe", &summary.lcoe, String::new()),
                ("npv", &summary.npv, fnum(summary.prob_npv_positive)),
            ];
            for (metric, stats, prob) in rows {
                out.push_str(&format!(
                    "{metric},{},{},{},{},{},{prob},{}\n",
                    fnum(stats.mean),
                    fnum(stats.sd),
                    fnum(stats.p5),
                    fnum(stats.p50),
                    fnum(stats.p95),
                    stats.n_failed
                ));
            }
            out
        }
        ReportFormat::Table => {
            let headers = ["Metric", "Mean", "SD", "P5", "P50", "P95", "Failed"];
            let right = [false, true, true, true, true, true, true];
            let lcoe = &summary.lcoe;
            let npv = &summary.npv;
            let rows = vec![
                vec![
                    "LCOE (USD/MWh)".to_string(),
                    format!("{:.2}", lcoe.mean),
                    format!("{:.2}", lcoe.sd),
                    format!("{:.2}", lcoe.p5),
                    format!("{:.2}", lcoe.p50),
                    format!("{:.2}", lcoe.p95),
                    lcoe.n_failed.to_string(),
                ],
                vec![
                    "NPV (USD)".to_string(),
                    usd(npv.mean),
                    usd(npv.sd),
                    usd(npv.p5),
                    usd(npv.p50),
                    usd(npv.p95),
                    npv.n_failed.to_string(),
                ],
            ];
            let mut out = format!(
                "Monte Carlo: {} samples, seed {}\n\n",
                summary.samples, summary.seed
            );
            out.push_str(&aligned_table(&headers, &rows, &right));
            out.push_str(&format!(
                "\nP(NPV > 0) = {:.3}\n",
                summary.prob_npv_positive
            ));
            out
        }
    }
}

pub const TORNADO_CSV_HEADER: &str =
    "parameter,input_low,input_high,output_low,output_high,swing";

#[derive(Serialize)]
struct TornadoView<'a> {
    metric: &'a str,
    entries: &'a [TornadoEntry],
}

pub fn render_tornado(
    entries: &[TornadoEntry],
    metric: TargetMetric,
    format: ReportFormat,
) -> String {
    match format {
        ReportFormat::Structured => to_json(&TornadoView {
            metric: metric.as_str(),
            entries,
        }),
        ReportFormat::Csv => {
            let mut out = String::from(TORNADO_CSV_HEADER);
            out.push('\n');
            for entry in entries {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    csv_field(&entry.parameter),
                    fnum(entry.input_low),
                    fnum(entry.input_high),
                    csv_opt(entry.output_low),
                    csv_opt(entry.output_high),
                    csv_opt(entry.swing),
                ));
            }
            out
        }
        ReportFormat::Table => {
            let value = |v: Option<f64>| match (v, metric) {
                (None, _) => "n/a".to_string(),
                (Some(v), TargetMetric::Lcoe) => format!("{v:.2}"),
                (Some(v), TargetMetric::Npv) => usd(v),
            };
            let headers = [
                "Parameter",
                "Input low",
                "Input high",
                "Output at low",
                "Output at high",
                "Swing",
            ];
            let right = [false, true, true, true, true, true];
            let rows: Vec<Vec<String>> = entries
                .iter()
                .map(|e| {
                    vec![
                        e.parameter.clone(),
                        fnum(e.input_low),
                        fnum(e.input_high),
                        value(e.output_low),
                        value(e.output_high),
                        value(e.swing),
                    ]
                })
                .collect();
            let mut out = format!("Tornado sensitivity on {}\n\n", metric.as_str());
            out.push_str(&aligned_table(&headers, &rows, &right));
            out
        }
    }
}

pub fn render_emissions(report: &EmissionsReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Structured => to_json(report),
        ReportFormat::Csv => {
            let rows = [
                ("annual_displaced_mwh", report.annual_displaced_mwh),
                ("avoided_co2_annual_t", report.avoided_annual_t),
                ("avoided_co2_lifetime_net_t", report.avoided_lifetime_net_t),
            ];
            let mut out = String::from("metric,value\n");
            for (key, value) in rows {
                out.push_str(&format!("{key},{}\n", fnum(value)));
            }
            out
        }
        ReportFormat::Table => {
            format!(
                "Displaced grid electricity  {} MWh/yr\n\
                 Avoided CO2                 {} t/yr\n\
                 Lifetime avoided CO2, net   {} t\n",
                qty(report.annual_displaced_mwh),
                qty(report.avoided_annual_t),
                qty(report.avoided_lifetime_net_t),
            )
        }
    }
}
