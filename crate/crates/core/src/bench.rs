//! Benchmark table over a directory of instance files.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::baselines::{brute_force, dp_exact, greedy, DEFAULT_PRODUCT_CAP};
use crate::bissa::{run_bissa, BissaOptions, Status};
use crate::error::{Error, Result};
use crate::io::read_instance;
use crate::report::{format_csv, BissaCell, Cell, CsvRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algo {
    Dp,
    Bissa,
    Greedy,
    Brute,
}

impl std::str::FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(Algo::Dp),
            "bissa" => Ok(Algo::Bissa),
            "greedy" => Ok(Algo::Greedy),
            "brute" => Ok(Algo::Brute),
            _ => Err(Error::InvalidSpec(format!("unknown algorithm {s:?}"))),
        }
    }
}

/// `*.mckp` files of `dir`, sorted by file name.
pub fn instance_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "mckp"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn bench_row(path: &Path, algos: &[Algo], options: &BissaOptions) -> CsvRow {
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let failed = |e: &Error| Cell::Failed(e.to_string());
    let inst = match read_instance(path) {
        Ok(i) => i,
        Err(e) => {
            let f = failed(&e);
            return CsvRow {
                id,
                exact: f.clone(),
                bissa: Cell::Failed(e.to_string()),
                greedy_ub: f,
            };
        }
    };
    let exact = if algos.contains(&Algo::Dp) {
        match dp_exact(&inst) {
            Ok(r) => Cell::Value(r.opt_profit),
            Err(e) => failed(&e),
        }
    } else if algos.contains(&Algo::Brute) {
        match brute_force(&inst, DEFAULT_PRODUCT_CAP) {
            Ok(r) => Cell::Value(r.opt_profit),
            Err(e) => failed(&e),
        }
    } else {
        Cell::Absent
    };
    let bissa = if algos.contains(&Algo::Bissa) {
        match run_bissa(&inst, options) {
            Ok(r) if r.status == Status::Infeasible => Cell::Value(BissaCell::Infeasible {
                iters: r.scalarized_count,
            }),
            Ok(r) => Cell::Value(BissaCell::Solved {
                lb: r.lb.expect("solved report has lb"),
                ub: r.ub.expect("solved report has ub"),
                iters: r.scalarized_count,
            }),
            Err(e) => Cell::Failed(e.to_string()),
        }
    } else {
        Cell::Absent
    };
    let greedy_ub = if algos.contains(&Algo::Greedy) {
        match greedy(&inst) {
            Ok(r) => Cell::Value(r.lp_upper_bound),
            Err(e) => failed(&e),
        }
    } else {
        Cell::Absent
    };
    CsvRow {
        id,
        exact,
        bissa,
        greedy_ub,
    }
}

/// Runs `algos` over every instance in `dir` and returns the CSV table.
/// Rows follow file-name order regardless of scheduling.
pub fn run_bench(dir: &Path, algos: &[Algo], options: &BissaOptions) -> Result<String> {
    let files = instance_files(dir)?;
    let rows: Vec<CsvRow> = files
        .par_iter()
        .map(|p| bench_row(p, algos, options))
        .collect();
    Ok(format_csv(&rows))
}
