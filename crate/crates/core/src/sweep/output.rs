use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::format::format_g;
use crate::states::Party;

use super::SweepResult;

fn na_or(value: Option<f64>) -> String {
    value.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

fn scenario_line(res: &SweepResult) -> String {
    let cfg = &res.scenario;
    let (filter, mode, pair) = match &cfg.filter {
        None => ("none", "NA", "NA"),
        Some(f) => {
            // The pair level only exists on an accelerated qutrit.
            let pair = if f.target == Party::Qutrit && cfg.accelerated == Party::Qutrit {
                f.pair_policy.name()
            } else {
                "NA"
            };
            (f.target.name(), f.mode.name(), pair)
        }
    };
    format!(
        "# scenario: mu={} accelerated={} filter={filter} strength-mode={mode} pair={pair}",
        format_g(cfg.mu.value(), 17),
        cfg.accelerated,
    )
}

/// The CSV document for one sweep, LF line endings.
pub fn csv_string(res: &SweepResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# unruh-filter-lab v{}", res.version);
    let _ = writeln!(out, "{}", scenario_line(res));
    out.push_str("r,strength,negativity\n");
    for row in &res.rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            row.r,
            na_or(row.strength),
            na_or(row.negativity)
        );
    }
    out
}

pub fn write_csv(res: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, csv_string(res)).map_err(|e| Error::io(path, e))
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 250.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Line chart with one polyline per result. The x axis is `r` or the filter
/// strength depending on `x_label`; y is negativity on `[0, 1]`.
pub fn svg_string(results: &[SweepResult], labels: &[String], x_label: &str) -> String {
    let use_strength = x_label == "strength";
    let xs = |res: &SweepResult| -> Vec<(f64, Option<f64>)> {
        res.rows
            .iter()
            .map(|row| {
                let x = if use_strength {
                    row.strength.unwrap_or(row.r)
                } else {
                    row.r
                };
                (x, row.negativity)
            })
            .collect()
    };
    let all: Vec<f64> = results.iter().flat_map(|r| xs(r).into_iter().map(|p| p.0)).collect();
    let mut x_min = all.iter().copied().fold(f64::INFINITY, f64::min);
    let mut x_max = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(x_min.is_finite() && x_max.is_finite()) {
        (x_min, x_max) = (0.0, 1.0);
    } else if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    let y_max = results
        .iter()
        .flat_map(|r| r.rows.iter().filter_map(|row| row.negativity))
        .fold(1.0, f64::max);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let py = |y: f64| TOP + (1.0 - y / y_max) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<g stroke="black" stroke-width="1"><line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}"/></g>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h,
        TOP + plot_h
    );
    for k in 0..=5 {
        let x = x_min + (x_max - x_min) * k as f64 / 5.0;
        let y = y_max * k as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/><text x="{0:.2}" y="{3:.2}" font-size="12" text-anchor="middle">{4}</text>"#,
            px(x),
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0,
            format_g(x, 3)
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="black"/><text x="{3:.2}" y="{4:.2}" font-size="12" text-anchor="end">{5}</text>"#,
            LEFT - 5.0,
            py(y),
            LEFT,
            LEFT - 8.0,
            py(y) + 4.0,
            format_g(y, 3)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.2})">negativity</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (k, res) in results.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = xs(res)
            .into_iter()
            .filter_map(|(x, y)| y.map(|y| format!("{:.2},{:.2}", px(x), py(y))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let label = labels.get(k).cloned().unwrap_or_else(|| res.scenario.label());
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = LEFT + plot_w + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#,
            lx + 20.0,
            lx + 25.0,
            ly + 3.5,
            escape(&label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn write_svg(
    results: &[SweepResult],
    path: impl AsRef<Path>,
    labels: &[String],
) -> Result<()> {
    let path = path.as_ref();
    let x_label = results.first().map_or("r", |r| r.scenario.x_label());
    fs::write(path, svg_string(results, labels, x_label)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{FilterMode, FilterSpec, PairPolicy};
    use crate::rindler::RindlerParameter;
    use crate::states::FamilyParameter;
    use crate::sweep::{run_scenario, ScenarioConfig, SweepRow};

    fn cfg(filter: Option<FilterSpec>, accelerated: Party) -> ScenarioConfig {
        ScenarioConfig {
            mu: FamilyParameter::new(0.3).unwrap(),
            accelerated,
            filter,
            r_grid: [0.0, 0.25, 0.5]
                .iter()
                .map(|&r| RindlerParameter::new(r).unwrap())
                .collect(),
            strength_grid: None,
        }
    }

    #[test]
    fn unfiltered_csv_uses_na() {
        let res = run_scenario(&cfg(None, Party::Qubit)).unwrap();
        let csv = csv_string(&res);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], format!("# unruh-filter-lab v{}", crate::VERSION));
        assert_eq!(
            lines[1],
            "# scenario: mu=0.29999999999999999 accelerated=qubit filter=none strength-mode=NA pair=NA"
        );
        assert_eq!(lines[2], "r,strength,negativity");
        assert_eq!(lines.len(), 6);
        assert!(lines[3..].iter().all(|l| l.split(',').nth(1) == Some("NA")));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn scenario_line_pair_policy() {
        let q = FilterSpec::qutrit(0.5, FilterMode::Channel, PairPolicy::Keep).unwrap();
        let res = run_scenario(&cfg(Some(q), Party::Qutrit)).unwrap();
        assert!(csv_string(&res).contains("filter=qutrit strength-mode=channel pair=keep\n"));
        let res = run_scenario(&cfg(Some(q), Party::Qubit)).unwrap();
        assert!(csv_string(&res).contains("filter=qutrit strength-mode=channel pair=NA\n"));
        let k = FilterSpec::qubit(0.3).unwrap();
        let res = run_scenario(&cfg(Some(k), Party::Qutrit)).unwrap();
        assert!(csv_string(&res).contains("filter=qubit strength-mode=postselect pair=NA\n"));
    }

    #[test]
    fn csv_values_roundtrip() {
        let k = FilterSpec::qubit(0.3).unwrap();
        let res = run_scenario(&cfg(Some(k), Party::Qubit)).unwrap();
        let csv = csv_string(&res);
        for (line, row) in csv.lines().skip(3).zip(&res.rows) {
            let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
            assert_eq!(fields[0], row.r);
            assert_eq!(Some(fields[1]), row.strength);
            assert_eq!(Some(fields[2]), row.negativity);
            let n = row.negativity.unwrap();
            assert_eq!(format_g(fields[2], 15), format_g(n, 15));
        }
    }

    #[test]
    fn null_negativity_is_na() {
        let mut res = run_scenario(&cfg(None, Party::Qubit)).unwrap();
        res.rows.push(SweepRow {
            r: 0.7,
            strength: Some(0.5),
            negativity: None,
        });
        assert!(csv_string(&res).ends_with("0.7,0.5,NA\n"));
        let svg = svg_string(&[res], &[], "r");
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn svg_structure() {
        let a = run_scenario(&cfg(None, Party::Qubit)).unwrap();
        let b = run_scenario(&cfg(Some(FilterSpec::qubit(0.7).unwrap()), Party::Qubit)).unwrap();
        let labels = vec!["baseline".to_string(), "kappa<0.7>".to_string()];
        let svg = svg_string(&[a, b], &labels, "r");
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(r#"width="800" height="500""#));
        assert!(svg.contains(">r</text>"));
        assert!(svg.contains(">negativity</text>"));
        assert!(svg.contains("kappa&lt;0.7&gt;"));
    }

    #[test]
    fn io_errors_carry_the_path() {
        let res = run_scenario(&cfg(None, Party::Qubit)).unwrap();
        let err = write_csv(&res, "/nonexistent-dir/x.csv").unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }
}
