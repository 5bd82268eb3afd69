use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use mckp_core::baselines::{brute_force, dp_exact, greedy, DEFAULT_PRODUCT_CAP};
use mckp_core::bench::{run_bench, Algo};
use mckp_core::gen::{generate, GenSpec, Kind};
use mckp_core::io::{read_instance, write_instance};
use mckp_core::report::{format_csv_row, BissaCell, Cell, CsvRow, JsonReport, CSV_HEADER};
use mckp_core::tie_scan::DEFAULT_NODE_CAP;
use mckp_core::{run_bissa, BissaOptions, Error, Status};

#[derive(Parser)]
#[command(name = "mckp", version, about = "Multiple-choice knapsack solvers and benchmarks")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Unc,
    Wco,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum AlgoArg {
    Bissa,
    Greedy,
    Dp,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write seeded random instances to a directory.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Values are drawn from [1, R].
        #[arg(long = "R", alias = "r", default_value_t = mckp_core::gen::DEFAULT_RANGE)]
        r: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = mckp_core::gen::DEFAULT_WCO_HALFWIDTH)]
        halfwidth: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance file.
    Solve {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, env = "MCKP_NODE_CAP", default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
    },
    /// Run algorithms over every `*.mckp` file of a directory.
    Bench {
        #[arg(long)]
        set: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "dp,bissa,greedy")]
        algos: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "MCKP_NODE_CAP", default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
    },
}

fn main() -> ExitCode {
    // exit status 2 is reserved for infeasible instances
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gen {
            kind,
            k,
            n,
            r,
            seed,
            count,
            halfwidth,
            out,
        } => {
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            let kind = match kind {
                KindArg::Unc => Kind::Unc,
                KindArg::Wco => Kind::Wco,
            };
            for i in 0..count {
                let spec = GenSpec {
                    kind,
                    k,
                    n,
                    r,
                    seed: seed.wrapping_add(i),
                    wco_halfwidth: halfwidth,
                };
                let inst = generate(&spec)?;
                let path = out.join(spec.file_name());
                write_instance(&inst, &path)?;
                println!("{}\tk={} n={} b={}", path.display(), k, n, inst.budget());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Solve {
            algo,
            input,
            format,
            node_cap,
        } => solve(algo, &input, format, node_cap),
        Cmd::Bench {
            set,
            algos,
            out,
            node_cap,
        } => {
            let algos = algos
                .iter()
                .map(|a| a.trim().parse::<Algo>())
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let options = BissaOptions {
                node_cap,
                ..BissaOptions::default()
            };
            let csv = run_bench(&set, &algos, &options)?;
            match out {
                Some(p) => std::fs::write(&p, csv).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn solve(algo: AlgoArg, input: &PathBuf, format: Format, node_cap: u64) -> Result<ExitCode> {
    let inst = read_instance(input).with_context(|| format!("reading {}", input.display()))?;
    let id = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let start = Instant::now();
    let ms = |s: Instant| s.elapsed().as_secs_f64() * 1e3;
    let mut row = CsvRow {
        id,
        exact: Cell::Absent,
        bissa: Cell::Absent,
        greedy_ub: Cell::Absent,
    };
    let report = match algo {
        AlgoArg::Bissa => {
            let options = BissaOptions {
                node_cap,
                ..BissaOptions::default()
            };
            let r = run_bissa(&inst, &options)?;
            row.bissa = Cell::Value(match (r.lb, r.ub) {
                (Some(lb), Some(ub)) => BissaCell::Solved {
                    lb,
                    ub,
                    iters: r.scalarized_count,
                },
                _ => BissaCell::Infeasible {
                    iters: r.scalarized_count,
                },
            });
            JsonReport::from(&r)
        }
        AlgoArg::Dp | AlgoArg::Brute => {
            let res = if algo == AlgoArg::Dp {
                dp_exact(&inst)
            } else {
                brute_force(&inst, DEFAULT_PRODUCT_CAP)
            };
            match res {
                Ok(r) => {
                    row.exact = Cell::Value(r.opt_profit);
                    JsonReport::exact(&r, ms(start))
                }
                Err(Error::InfeasibleInstance) => JsonReport::infeasible(ms(start)),
                Err(e) => return Err(e.into()),
            }
        }
        AlgoArg::Greedy => match greedy(&inst) {
            Ok(r) => {
                row.greedy_ub = Cell::Value(r.lp_upper_bound);
                JsonReport::greedy(&r, ms(start))
            }
            Err(Error::InfeasibleInstance) => JsonReport::infeasible(ms(start)),
            Err(e) => return Err(e.into()),
        },
    };
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => println!("{CSV_HEADER}\n{}", format_csv_row(&row)),
    }
    Ok(if report.status == Status::Infeasible {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}
