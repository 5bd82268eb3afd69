//! JSON solve reports and the benchmark CSV table.

use serde::{Deserialize, Serialize};

use crate::baselines::{ExactResult, GreedyResult};
use crate::bissa::{BissaReport, IterationRecord, Status, Triangle};

pub const CSV_HEADER: &str = "id,exact,bissa,diff,rel_diff_pct,ub,ub_gap,ub_rel_gap_pct,greedy_ub,iters";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total: f64,
}

/// Top-level JSON document written by `solve`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub status: Status,
    pub lb: Option<f64>,
    pub ub: Option<f64>,
    pub u: Option<f64>,
    pub picks: Option<Vec<usize>>,
    pub triangle: Option<Triangle>,
    pub iterations: Vec<IterationRecord>,
    pub s_cardinality: Option<u64>,
    pub exhaustive: Option<bool>,
    pub scalarized_count: usize,
    pub timings_ms: Timings,
}

impl From<&BissaReport> for JsonReport {
    fn from(r: &BissaReport) -> Self {
        JsonReport {
            status: r.status,
            lb: r.lb,
            ub: r.ub,
            u: r.u,
            picks: r.solution.as_ref().map(|c| c.0.clone()),
            triangle: r.triangle.clone(),
            iterations: r.iterations.clone(),
            s_cardinality: Some(r.s_cardinality),
            exhaustive: Some(r.tie_scan.as_ref().is_none_or(|s| s.exhaustive)),
            scalarized_count: r.scalarized_count,
            timings_ms: Timings { total: r.elapsed_ms },
        }
    }
}

impl JsonReport {
    pub fn exact(r: &ExactResult, elapsed_ms: f64) -> Self {
        JsonReport {
            status: Status::ExactSolved,
            lb: Some(r.opt_profit),
            ub: Some(r.opt_profit),
            u: Some(0.0),
            picks: Some(r.solution.0.clone()),
            ..Self::empty(Status::ExactSolved, elapsed_ms)
        }
    }

    /// Greedy profit as `lb`, LP-relaxation bound as `ub`.
    pub fn greedy(r: &GreedyResult, elapsed_ms: f64) -> Self {
        JsonReport {
            lb: Some(r.greedy_profit),
            ub: Some(r.lp_upper_bound),
            u: Some(r.lp_upper_bound - r.greedy_profit),
            picks: Some(r.greedy_solution.0.clone()),
            ..Self::empty(Status::Approximate, elapsed_ms)
        }
    }

    pub fn infeasible(elapsed_ms: f64) -> Self {
        Self::empty(Status::Infeasible, elapsed_ms)
    }

    fn empty(status: Status, elapsed_ms: f64) -> Self {
        JsonReport {
            status,
            lb: None,
            ub: None,
            u: None,
            picks: None,
            triangle: None,
            iterations: Vec::new(),
            s_cardinality: None,
            exhaustive: None,
            scalarized_count: 0,
            timings_ms: Timings { total: elapsed_ms },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A cell of one algorithm's result: not run, failed, or a value.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell<T> {
    Absent,
    Failed(String),
    Value(T),
}

impl<T> Cell<T> {
    fn value(&self) -> Option<&T> {
        match self {
            Cell::Value(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BissaCell {
    Solved { lb: f64, ub: f64, iters: usize },
    Infeasible { iters: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub id: String,
    pub exact: Cell<f64>,
    pub bissa: Cell<BissaCell>,
    pub greedy_ub: Cell<f64>,
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Integral values print as integers, the rest with three decimals.
fn fmt_value(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{:.0}", clean(x))
    } else {
        fmt3(x)
    }
}

fn fmt3(x: f64) -> String {
    let s = format!("{:.3}", clean(x));
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn fmt_err(msg: &str) -> String {
    let flat: String = msg
        .chars()
        .map(|c| if c == ',' || c == '\n' || c == '"' { ';' } else { c })
        .collect();
    format!("ERR({flat})")
}

fn cell<T>(c: &Cell<T>, f: impl Fn(&T) -> String) -> String {
    match c {
        Cell::Absent => String::new(),
        Cell::Failed(m) => fmt_err(m),
        Cell::Value(v) => f(v),
    }
}

fn rel_pct(num: f64, den: f64) -> Option<f64> {
    if den != 0.0 {
        Some(num / den * 100.0)
    } else if num == 0.0 {
        Some(0.0)
    } else {
        None
    }
}

/// The numeric columns 4, 5 and 10 of a row, when defined.
pub fn footer_values(row: &CsvRow) -> [Option<f64>; 3] {
    let exact = row.exact.value().copied();
    let (lb, iters) = match row.bissa.value() {
        Some(BissaCell::Solved { lb, iters, .. }) => (Some(*lb), Some(*iters as f64)),
        Some(BissaCell::Infeasible { iters }) => (None, Some(*iters as f64)),
        None => (None, None),
    };
    let diff = exact.zip(lb).map(|(e, l)| e - l);
    let rel = diff.zip(exact).and_then(|(d, e)| rel_pct(d, e));
    [diff, rel, iters]
}

pub fn format_csv_row(row: &CsvRow) -> String {
    let [diff, rel, _] = footer_values(row);
    let opt = |v: Option<f64>, f: fn(f64) -> String| v.map(f).unwrap_or_default();
    let exact = cell(&row.exact, |v| fmt_value(*v));
    let (bissa, ub, ub_gap, ub_rel, iters) = match &row.bissa {
        Cell::Absent => Default::default(),
        Cell::Failed(m) => (fmt_err(m), String::new(), String::new(), String::new(), String::new()),
        Cell::Value(BissaCell::Infeasible { iters }) => (
            "infeasible".into(),
            String::new(),
            String::new(),
            String::new(),
            iters.to_string(),
        ),
        Cell::Value(BissaCell::Solved { lb, ub, iters }) => (
            fmt_value(*lb),
            fmt3(*ub),
            fmt3(ub - lb),
            opt(rel_pct(ub - lb, *ub), fmt3),
            iters.to_string(),
        ),
    };
    let diff = opt(diff, fmt_value);
    let rel = opt(rel, fmt3);
    let greedy = cell(&row.greedy_ub, |v| fmt3(*v));
    [
        row.id.as_str(),
        &exact,
        &bissa,
        &diff,
        &rel,
        &ub,
        &ub_gap,
        &ub_rel,
        &greedy,
        &iters,
    ]
    .join(",")
}

/// Header, one line per row, then `mean` and `max` over columns 4, 5, 10.
pub fn format_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format_csv_row(r));
        out.push('\n');
    }
    if rows.is_empty() {
        return out;
    }
    let cols: Vec<[Option<f64>; 3]> = rows.iter().map(footer_values).collect();
    let mut mean = [String::new(), String::new(), String::new()];
    let mut max = mean.clone();
    for c in 0..3 {
        let vals: Vec<f64> = cols.iter().filter_map(|v| v[c]).collect();
        if !vals.is_empty() {
            mean[c] = fmt3(vals.iter().sum::<f64>() / vals.len() as f64);
            max[c] = fmt3(vals.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        }
    }
    for (name, v) in [("mean", &mean), ("max", &max)] {
        out.push_str(&format!("{name},,,{},{},,,,,{}\n", v[0], v[1], v[2]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(exact: f64, lb: f64, ub: f64, greedy: f64, iters: usize) -> CsvRow {
        CsvRow {
            id: "1".into(),
            exact: Cell::Value(exact),
            bissa: Cell::Value(BissaCell::Solved { lb, ub, iters }),
            greedy_ub: Cell::Value(greedy),
        }
    }

    #[test]
    fn equal_profits_print_zero_gap() {
        let line = format_csv_row(&row(99861.0, 99861.0, 99866.141, 99866.5, 7));
        assert!(line.starts_with("1,99861,99861,0,0.000,99866.141,5.141,0.005,"), "{line}");
        let line = format_csv_row(&row(86132.0, 86132.0, 86132.0, 86132.0, 1));
        assert_eq!(line, "1,86132,86132,0,0.000,86132.000,0.000,0.000,86132.000,1");
    }

    #[test]
    fn gap_columns() {
        let line = format_csv_row(&row(99873.0, 99849.0, 99887.011, 99887.2, 7));
        assert_eq!(line, "1,99873,99849,24,0.024,99887.011,38.011,0.038,99887.200,7");
    }

    #[test]
    fn blanks_and_errors() {
        let r = CsvRow {
            id: "a".into(),
            exact: Cell::Absent,
            bissa: Cell::Value(BissaCell::Solved {
                lb: 13.0,
                ub: 13.75,
                iters: 2,
            }),
            greedy_ub: Cell::Failed("bad, thing".into()),
        };
        assert_eq!(format_csv_row(&r), "a,,13,,,13.750,0.750,5.455,ERR(bad; thing),2");
    }

    #[test]
    fn footer() {
        let rows = vec![row(100.0, 90.0, 101.0, 101.0, 4), row(100.0, 100.0, 100.0, 100.0, 6)];
        let csv = format_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[3], "mean,,,5.000,5.000,,,,,5.000");
        assert_eq!(lines[4], "max,,,10.000,10.000,,,,,6.000");
        assert_eq!(format_csv(&[]), format!("{CSV_HEADER}\n"));
    }
}
