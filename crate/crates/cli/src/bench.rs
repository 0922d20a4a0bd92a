use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use anyhow::{bail, Context};
use clap::Args;
use hamdecomp::{gen_instance, Algorithm, Mode, SolveLimits, Status};

pub const CSV_HEADER: &str = "mode,n,seed,algo,status,elapsed_ms,nodes,edges_fixed";

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "undirected")]
    mode: Vec<Mode>,
    #[arg(long, value_delimiter = ',', default_value = "bcef")]
    algo: Vec<Algorithm>,
    #[arg(long, default_value_t = 100)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-instance limit in seconds; 0 disables it.
    #[arg(long, default_value_t = 0.0)]
    time_limit: f64,
    /// Write rows here instead of standard output.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Debug, Clone)]
struct Job {
    mode: Mode,
    n: usize,
    seed: u64,
    algo: Algorithm,
}

#[derive(Debug, Clone)]
struct BenchRow {
    job: Job,
    status: Status,
    elapsed_ms: u64,
    nodes: u64,
    edges_fixed: u64,
}

impl BenchRow {
    fn csv(&self) -> String {
        let j = &self.job;
        format!(
            "{},{},{},{},{},{},{},{}",
            j.mode, j.n, j.seed, j.algo, self.status, self.elapsed_ms, self.nodes, self.edges_fixed
        )
    }
}

fn run_job(job: &Job, limits: SolveLimits) -> anyhow::Result<BenchRow> {
    let inst = gen_instance(job.n, job.mode, job.seed)?;
    let g = inst.union();
    let r = job.algo.solve(&g, &inst.x, &inst.y, limits.into())?;
    Ok(BenchRow {
        job: job.clone(),
        status: r.status,
        elapsed_ms: r.stats.elapsed.as_millis() as u64,
        nodes: r.stats.nodes,
        edges_fixed: r.stats.edges_fixed,
    })
}

pub fn run(args: &BenchArgs) -> anyhow::Result<u8> {
    if args.n.is_empty() || args.mode.is_empty() || args.algo.is_empty() {
        bail!("bench needs at least one size, mode and algorithm");
    }
    if let Some(&n) = args.n.iter().find(|&&n| n < 3) {
        bail!("size {n} is below 3");
    }
    if args.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let limits = SolveLimits {
        time_budget: crate::seconds(args.time_limit)?,
        node_budget: 0,
    };
    let mut jobs = Vec::new();
    for &mode in &args.mode {
        for &n in &args.n {
            for k in 0..args.count {
                for &algo in &args.algo {
                    let seed = args.seed.wrapping_add(k);
                    jobs.push(Job {
                        mode,
                        n,
                        seed,
                        algo,
                    });
                }
            }
        }
    }

    let (mut sink, to_stdout): (Box<dyn Write>, bool) = match &args.csv {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            (Box::new(BufWriter::new(f)), false)
        }
        None => (Box::new(io::stdout()), true),
    };
    writeln!(sink, "{CSV_HEADER}")?;
    sink.flush()?;

    let mut rows = Vec::with_capacity(jobs.len());
    let mut emit = |row: BenchRow| -> anyhow::Result<()> {
        writeln!(sink, "{}", row.csv())?;
        sink.flush()?;
        rows.push(row);
        Ok(())
    };

    if args.jobs == 1 {
        for job in &jobs {
            emit(run_job(job, limits)?)?;
        }
    } else {
        // Workers pull jobs by index; rows are written in job order through
        // a reorder buffer.
        let next = AtomicUsize::new(0);
        let (tx, rx) = mpsc::channel();
        std::thread::scope(|scope| -> anyhow::Result<()> {
            for _ in 0..args.jobs.min(jobs.len()) {
                let tx = tx.clone();
                let (next, jobs) = (&next, &jobs);
                scope.spawn(move || loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= jobs.len() || tx.send((i, run_job(&jobs[i], limits))).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            let mut pending = BTreeMap::new();
            let mut cursor = 0;
            for (i, row) in rx {
                pending.insert(i, row?);
                while let Some(row) = pending.remove(&cursor) {
                    emit(row)?;
                    cursor += 1;
                }
            }
            Ok(())
        })?;
    }

    let summary = summarize(&rows);
    if to_stdout {
        eprint!("{summary}");
    } else {
        print!("{summary}");
    }
    Ok(0)
}

/// Per (mode, n, algo): count and mean seconds of feasible and infeasible
/// instances, plus timeouts.
fn summarize(rows: &[BenchRow]) -> String {
    #[derive(Default)]
    struct Acc {
        feasible: (u64, u64),
        infeasible: (u64, u64),
        timeouts: u64,
    }
    let mut groups: BTreeMap<(&str, usize, &str), Acc> = BTreeMap::new();
    for r in rows {
        let acc = groups
            .entry((r.job.mode.as_str(), r.job.n, r.job.algo.as_str()))
            .or_default();
        match r.status {
            Status::Decomposed => {
                acc.feasible.0 += 1;
                acc.feasible.1 += r.elapsed_ms;
            }
            Status::NoneExists => {
                acc.infeasible.0 += 1;
                acc.infeasible.1 += r.elapsed_ms;
            }
            Status::TimedOut => acc.timeouts += 1,
        }
    }
    let mean = |(k, ms): (u64, u64)| {
        if k == 0 {
            "-".to_string()
        } else {
            format!("{:.3}", ms as f64 / k as f64 / 1000.0)
        }
    };
    let mut out = format!(
        "{:<10} {:>6} {:<5} {:>6} {:>10} {:>6} {:>10} {:>8}\n",
        "mode", "n", "algo", "feas", "feas_s", "infeas", "infeas_s", "timeout"
    );
    for ((mode, n, algo), acc) in groups {
        out.push_str(&format!(
            "{:<10} {:>6} {:<5} {:>6} {:>10} {:>6} {:>10} {:>8}\n",
            mode,
            n,
            algo,
            acc.feasible.0,
            mean(acc.feasible),
            acc.infeasible.0,
            mean(acc.infeasible),
            acc.timeouts
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(status: Status, elapsed_ms: u64) -> BenchRow {
        BenchRow {
            job: Job {
                mode: Mode::Directed,
                n: 8,
                seed: 0,
                algo: Algorithm::Bcef,
            },
            status,
            elapsed_ms,
            nodes: 1,
            edges_fixed: 2,
        }
    }

    #[test]
    fn csv_row_matches_header_order() {
        assert_eq!(
            row(Status::NoneExists, 5).csv(),
            "directed,8,0,bcef,NONE,5,1,2"
        );
        assert_eq!(CSV_HEADER.split(',').count(), 8);
    }

    #[test]
    fn summary_separates_feasible_and_infeasible() {
        let rows = [
            row(Status::Decomposed, 1000),
            row(Status::Decomposed, 3000),
            row(Status::NoneExists, 500),
            row(Status::TimedOut, 9000),
        ];
        let s = summarize(&rows);
        let line = s.lines().nth(1).unwrap();
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(
            cols,
            ["directed", "8", "bcef", "2", "2.000", "1", "0.500", "1"]
        );
    }
}
